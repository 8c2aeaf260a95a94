#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "proofgauge/adaptive.hpp"
#include "proofgauge/annotate.hpp"
#include "proofgauge/corpus.hpp"

namespace proofgauge {

enum class LevelSubset { all, math };

struct LevelPassTable {
  std::vector<std::string> models;
  std::vector<int> level_sizes;             // theorems per level after subsetting
  std::vector<std::vector<double>> rates;   // [model][level-1]
  std::vector<double> averages;             // per level, across models
};

// Pass@n per model restricted to each level's theorems, optionally only
// MATH-provenance items (corpus required for that subset).
LevelPassTable level_pass_table(const ResponseMatrix& matrix, const ItemBank& bank,
                                const std::vector<std::string>& models,
                                LevelSubset subset, const Corpus* corpus,
                                long n = 128);

struct CategoryRow {
  std::string categorization;  // "split", "provenance", "problem_type", "overall"
  std::string key;
  int count = 0;
  double mean_difficulty = 0.0;
  double mean_discrimination = 0.0;
};

// Group means by usage split, provenance, and problem type plus an overall
// row; within each categorization the counts sum to the bank size (items
// missing from the corpus fall into the "unknown" group).
std::vector<CategoryRow> category_summary(const ItemBank& bank, const Corpus& corpus);

// CSV theorem_id,category,difficulty,discrimination with provenance as the
// category; items without corpus metadata get "unknown".
void scatter_export(const ItemBank& bank, const Corpus& corpus,
                    const std::filesystem::path& path);

struct PairVerdict {
  std::string model_a;
  std::string model_b;
  bool concordant = false;
};

struct RankingComparison {
  std::vector<std::string> models;        // descending ability, ties by id
  std::vector<std::string> ability_rank;  // same order, kept for serialization
  std::map<long, std::vector<std::string>> passn_rank;
  std::map<long, long> concordant;
  std::map<long, long> discordant;
  std::map<long, double> kendall_tau;
  std::map<long, std::vector<PairVerdict>> verdicts;
  bool ties = false;  // any exact score tie anywhere, broken by model id
};

// Ranks models by descending ability and by descending Pass@n for each n,
// then counts concordant/discordant pairs and Kendall tau per n.
RankingComparison ranking_concordance(const std::map<std::string, double>& ability,
                                      const ResponseMatrix& matrix,
                                      const std::vector<long>& n_values);

void save_concordance_json(const RankingComparison& comparison,
                           const std::filesystem::path& path);

// Kendall tau-a between two equally indexed score vectors; rank ties are
// broken by index order and reported through *ties when requested.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y,
                   bool* ties = nullptr);

struct TunePoint {
  double f = 0.0;
  double eta = 0.0;
  double tau = 0.0;                 // rank agreement with the reference scores
  double mean_administrations = 0.0;
  bool ties = false;
};

struct TuneResult {
  std::vector<TunePoint> points;  // grid order
  std::size_t best_index = 0;     // max tau, ties by lower mean administrations
};

// Runs the adaptive loop for every (f, eta) grid point and every examinee,
// scoring each point by Kendall tau of final thetas against the reference.
TuneResult tune_hyperparams(const std::vector<std::pair<double, double>>& grid,
                            const ItemBank& bank,
                            const std::vector<std::pair<std::string, ExamineeBackend*>>& examinees,
                            const std::map<std::string, double>& reference,
                            const EvalConfig& base_cfg);

}  // namespace proofgauge
