#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "proofgauge/annotate.hpp"
#include "proofgauge/examinee.hpp"

namespace proofgauge {

struct SelectionState {
  std::vector<std::string> recent;  // most recent last, length <= window
  int window = 50;
  int batch = 5;
};

struct EvalConfig {
  double eta = 0.004;     // ability step size
  double f = 0.49;        // information exponent
  double theta_init = 0.5;
  double theta_min = 0.0;
  double theta_max = 1.0;
  double conv_eps = 0.01;
  int conv_rounds = 10;   // required streak of small round-to-round changes
  int max_rounds = 200;   // safety cap, reported as converged=false when hit
  long attempts = 128;    // proof attempts per administration
  int window = 50;        // recently-administered exclusion window
  int batch = 5;          // administrations per round
};

struct TraceRow {
  int number = 0;  // 1-based administration index
  std::string theorem_id;
  double difficulty = 0.0;
  double discrimination = 0.0;
  double success_rate = 0.0;      // raw r
  double transformed_rate = 0.0;  // r after transform_rate
  double theta_after = 0.0;
  double delta = 0.0;             // theta_after minus the previous row's value
};

struct EvalReport {
  double final_theta = 0.0;
  int administrations = 0;
  int unique_theorems = 0;
  int rounds = 0;
  bool converged = false;
  double cost_change = 0.0;  // signed percentage vs the bank size of the run
  std::vector<TraceRow> trace;
};

// Top `state.batch` items by fisher_info at theta, skipping ids in
// state.recent. Equal information keeps bank order. Selected ids are
// appended to state.recent, which is then truncated to its window.
std::vector<std::string> select_theorems(double theta, const ItemBank& bank,
                                         SelectionState& state, double f);

// Compresses barely-positive success rates: ln(1+r) for 0 < r < 0.1,
// identity elsewhere. r must lie in [0,1].
double transform_rate(double r);

// One sequential ability step toward the transformed success rate:
// theta + eta * (r - p_2pl(theta, a, b)). No clamping here; the loop clamps
// once per round.
double update_ability(double theta, double a, double b, double r, double eta);

// Algorithm: start at theta_init; each round select a batch, measure success
// counts through a measured-once cache, apply updates sequentially, clamp to
// [theta_min, theta_max], and track the streak of rounds with
// |theta - theta_prev| < conv_eps. Stops at conv_rounds consecutive small
// changes (converged) or max_rounds (not converged).
EvalReport run_adaptive(ExamineeBackend& backend, const ItemBank& bank,
                        const EvalConfig& cfg);

// Signed percentage change of administrations against a bank size,
// e.g. 55 vs 488 -> -88.73.
double cost_metrics(int administrations, long bank_size);

void save_trace_csv(const EvalReport& report, const std::filesystem::path& path);
void save_report_json(const EvalReport& report, const std::filesystem::path& path);

}  // namespace proofgauge
