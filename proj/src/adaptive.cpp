#include "proofgauge/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "proofgauge/csv.hpp"
#include "proofgauge/errors.hpp"
#include "proofgauge/irt.hpp"

namespace proofgauge {

std::vector<std::string> select_theorems(double theta, const ItemBank& bank,
                                         SelectionState& state, double f) {
  if (state.batch < 1) throw ValidationError("select_theorems: batch must be >= 1");
  if (state.window < 0) throw ValidationError("select_theorems: window must be >= 0");

  const std::set<std::string> excluded(state.recent.begin(), state.recent.end());
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < bank.items.size(); ++i)
    if (!excluded.count(bank.items[i].theorem_id)) eligible.push_back(i);
  if (eligible.size() < static_cast<std::size_t>(state.batch))
    throw ValidationError("select_theorems: only " + std::to_string(eligible.size()) +
                          " eligible items, need " + std::to_string(state.batch));

  std::vector<double> info(bank.items.size(), 0.0);
  for (std::size_t i : eligible)
    info[i] = fisher_info(theta, bank.items[i].discrimination, bank.items[i].difficulty, f);
  // stable sort keeps bank order among equal-information items
  std::stable_sort(eligible.begin(), eligible.end(),
                   [&info](std::size_t x, std::size_t y) { return info[x] > info[y]; });

  std::vector<std::string> selected;
  for (int k = 0; k < state.batch; ++k)
    selected.push_back(bank.items[eligible[static_cast<std::size_t>(k)]].theorem_id);

  for (const std::string& id : selected) state.recent.push_back(id);
  if (static_cast<int>(state.recent.size()) > state.window)
    state.recent.erase(state.recent.begin(),
                       state.recent.end() - static_cast<std::ptrdiff_t>(state.window));
  return selected;
}

double transform_rate(double r) {
  if (r < 0.0 || r > 1.0)
    throw ValidationError("transform_rate: rate " + format_double(r) + " outside [0,1]");
  if (r > 0.0 && r < 0.1) return std::log1p(r);
  return r;
}

double update_ability(double theta, double a, double b, double r, double eta) {
  return theta + eta * (r - p_2pl(theta, a, b));
}

EvalReport run_adaptive(ExamineeBackend& backend, const ItemBank& bank,
                        const EvalConfig& cfg) {
  if (bank.items.empty()) throw ValidationError("run_adaptive: empty bank");
  if (cfg.conv_eps <= 0.0) throw ValidationError("run_adaptive: conv_eps must be positive");
  if (cfg.conv_rounds < 1) throw ValidationError("run_adaptive: conv_rounds must be >= 1");
  if (cfg.max_rounds < cfg.conv_rounds)
    throw ValidationError("run_adaptive: max_rounds must be >= conv_rounds");
  if (cfg.theta_min > cfg.theta_init || cfg.theta_init > cfg.theta_max)
    throw ValidationError("run_adaptive: theta_init outside [theta_min, theta_max]");
  if (cfg.attempts < 1) throw ValidationError("run_adaptive: attempts must be >= 1");

  std::map<std::string, const ItemParams*> by_id;
  for (const ItemParams& item : bank.items) {
    if (!by_id.emplace(item.theorem_id, &item).second)
      throw ValidationError("run_adaptive: duplicate theorem_id '" + item.theorem_id + "'");
  }

  CachedBackend cache(backend);  // measured-once semantics
  SelectionState state;
  state.window = cfg.window;
  state.batch = cfg.batch;

  EvalReport report;
  double theta = cfg.theta_init;
  double theta_prev = cfg.theta_init;
  double last_theta_after = cfg.theta_init;
  int streak = 0;
  int rounds = 0;
  std::set<std::string> unique_ids;

  while (true) {
    if (rounds == cfg.max_rounds) {
      report.converged = false;
      break;
    }

    const std::vector<std::string> selected = select_theorems(theta, bank, state, cfg.f);

    // measure the whole batch first; updates then use these fixed rates
    std::vector<long> successes;
    successes.reserve(selected.size());
    for (const std::string& id : selected)
      successes.push_back(checked_prove(cache, id, std::nullopt, cfg.attempts));

    for (std::size_t k = 0; k < selected.size(); ++k) {
      const ItemParams& item = *by_id.at(selected[k]);
      const double rate =
          static_cast<double>(successes[k]) / static_cast<double>(cfg.attempts);
      const double transformed = transform_rate(rate);
      theta = update_ability(theta, item.discrimination, item.difficulty, transformed,
                             cfg.eta);

      TraceRow row;
      row.number = static_cast<int>(report.trace.size()) + 1;
      row.theorem_id = item.theorem_id;
      row.difficulty = item.difficulty;
      row.discrimination = item.discrimination;
      row.success_rate = rate;
      row.transformed_rate = transformed;
      row.theta_after = theta;
      row.delta = theta - last_theta_after;
      last_theta_after = theta;
      report.trace.push_back(std::move(row));
      unique_ids.insert(item.theorem_id);
    }

    // one clamp per round; any adjustment folds into the round's last row so
    // the deltas still telescope exactly
    const double clamped = std::min(std::max(theta, cfg.theta_min), cfg.theta_max);
    if (clamped != theta) {
      TraceRow& last = report.trace.back();
      last.delta += clamped - theta;
      last.theta_after = clamped;
      last_theta_after = clamped;
      theta = clamped;
    }

    ++rounds;
    if (std::fabs(theta - theta_prev) < cfg.conv_eps)
      ++streak;
    else
      streak = 0;
    theta_prev = theta;
    if (streak >= cfg.conv_rounds) {
      report.converged = true;
      break;
    }
  }

  report.final_theta = theta;
  report.administrations = static_cast<int>(report.trace.size());
  report.unique_theorems = static_cast<int>(unique_ids.size());
  report.rounds = rounds;
  report.cost_change =
      cost_metrics(report.administrations, static_cast<long>(bank.items.size()));
  return report;
}

double cost_metrics(int administrations, long bank_size) {
  if (bank_size <= 0) throw ValidationError("cost_metrics: bank size must be positive");
  return 100.0 * (static_cast<double>(administrations) - static_cast<double>(bank_size)) /
         static_cast<double>(bank_size);
}

void save_trace_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const TraceRow& row : report.trace)
    rows.push_back({std::to_string(row.number), row.theorem_id,
                    format_double(row.difficulty), format_double(row.discrimination),
                    format_double(row.success_rate), format_double(row.theta_after),
                    format_double(row.delta)});
  write_csv(path, "number,theorem_id,difficulty,discrimination,success_rate,ability_score,delta",
            rows);
}

void save_report_json(const EvalReport& report, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["final_theta"] = report.final_theta;
  doc["administrations"] = report.administrations;
  doc["unique_theorems"] = report.unique_theorems;
  doc["rounds"] = report.rounds;
  doc["converged"] = report.converged;
  doc["cost_change"] = report.cost_change;
  doc["trace"] = nlohmann::ordered_json::array();
  for (const TraceRow& row : report.trace)
    doc["trace"].push_back({{"number", row.number},
                            {"theorem_id", row.theorem_id},
                            {"difficulty", row.difficulty},
                            {"discrimination", row.discrimination},
                            {"success_rate", row.success_rate},
                            {"transformed_rate", row.transformed_rate},
                            {"theta_after", row.theta_after},
                            {"delta", row.delta}});

  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace proofgauge
