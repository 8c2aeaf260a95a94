#include "proofgauge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "proofgauge/csv.hpp"
#include "proofgauge/errors.hpp"

namespace proofgauge {

LevelPassTable level_pass_table(const ResponseMatrix& matrix, const ItemBank& bank,
                                const std::vector<std::string>& models,
                                LevelSubset subset, const Corpus* corpus, long n) {
  if (models.empty()) throw ValidationError("level_pass_table: no models");
  if (subset == LevelSubset::math && corpus == nullptr)
    throw ValidationError("level_pass_table: MATH subset needs corpus metadata");

  int level_count = 0;
  for (const ItemParams& item : bank.items) {
    if (item.level < 1)
      throw ValidationError("level_pass_table: bank not graded ('" + item.theorem_id + "')");
    level_count = std::max(level_count, item.level);
  }

  std::vector<std::vector<std::string>> per_level(static_cast<std::size_t>(level_count));
  for (const ItemParams& item : bank.items) {
    if (subset == LevelSubset::math) {
      const TheoremRecord* record = corpus->find(item.theorem_id);
      if (record == nullptr || record->provenance != Provenance::MATH) continue;
    }
    per_level[static_cast<std::size_t>(item.level - 1)].push_back(item.theorem_id);
  }
  for (int level = 1; level <= level_count; ++level)
    if (per_level[static_cast<std::size_t>(level - 1)].empty())
      throw ValidationError("level_pass_table: level " + std::to_string(level) +
                            " is empty after subsetting");

  LevelPassTable table;
  table.models = models;
  for (const auto& ids : per_level) table.level_sizes.push_back(static_cast<int>(ids.size()));
  table.averages.assign(static_cast<std::size_t>(level_count), 0.0);
  for (const std::string& model : models) {
    std::vector<double> row;
    for (const auto& ids : per_level) row.push_back(pass_at_n(matrix, model, n, ids));
    for (std::size_t level = 0; level < row.size(); ++level)
      table.averages[level] += row[level];
    table.rates.push_back(std::move(row));
  }
  for (double& mean : table.averages) mean /= static_cast<double>(models.size());
  return table;
}

namespace {

struct GroupStats {
  int count = 0;
  double difficulty_sum = 0.0;
  double discrimination_sum = 0.0;
};

void emit_groups(const std::string& categorization, const std::vector<std::string>& order,
                 std::map<std::string, GroupStats>& groups,
                 std::vector<CategoryRow>& rows) {
  for (const std::string& key : order) {
    auto it = groups.find(key);
    if (it == groups.end() || it->second.count == 0) continue;
    rows.push_back({categorization, key, it->second.count,
                    it->second.difficulty_sum / it->second.count,
                    it->second.discrimination_sum / it->second.count});
  }
}

}  // namespace

std::vector<CategoryRow> category_summary(const ItemBank& bank, const Corpus& corpus) {
  if (bank.items.empty()) throw ValidationError("category_summary: empty bank");

  std::map<std::string, GroupStats> by_split, by_provenance, by_type;
  GroupStats overall;
  for (const ItemParams& item : bank.items) {
    const TheoremRecord* record = corpus.find(item.theorem_id);
    auto label = [](const std::string& name) {
      return name.empty() ? std::string("unknown") : name;
    };
    const std::string split = label(record ? to_string(record->split) : "");
    const std::string provenance = label(record ? to_string(record->provenance) : "");
    const std::string type = label(record ? to_string(record->problem_type) : "");

    for (auto* group : {&by_split[split], &by_provenance[provenance], &by_type[type], &overall}) {
      group->count += 1;
      group->difficulty_sum += item.difficulty;
      group->discrimination_sum += item.discrimination;
    }
  }

  std::vector<CategoryRow> rows;
  emit_groups("split", {"test", "valid", "unknown"}, by_split, rows);
  emit_groups("provenance", {"IMO", "AIME", "AMC", "MATH", "CUSTOM", "unknown"},
              by_provenance, rows);
  emit_groups("problem_type", {"algebra", "number_theory", "induction", "other", "unknown"},
              by_type, rows);
  rows.push_back({"overall", "/", overall.count, overall.difficulty_sum / overall.count,
                  overall.discrimination_sum / overall.count});
  return rows;
}

void scatter_export(const ItemBank& bank, const Corpus& corpus,
                    const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const ItemParams& item : bank.items) {
    const TheoremRecord* record = corpus.find(item.theorem_id);
    std::string category = record ? to_string(record->provenance) : "";
    if (category.empty()) category = "unknown";
    rows.push_back({item.theorem_id, category, format_double(item.difficulty),
                    format_double(item.discrimination)});
  }
  write_csv(path, "theorem_id,category,difficulty,discrimination", rows);
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y, bool* ties) {
  if (x.size() != y.size()) throw ValidationError("kendall_tau: length mismatch");
  if (x.size() < 2) throw ValidationError("kendall_tau: need at least 2 entries");

  // "i ranks before j": higher score first, index order on exact ties
  auto before = [](const std::vector<double>& v, std::size_t i, std::size_t j) {
    if (v[i] != v[j]) return v[i] > v[j];
    return i < j;
  };

  bool any_tie = false;
  long concordant = 0;
  long discordant = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[i] == x[j] || y[i] == y[j]) any_tie = true;
      if (before(x, i, j) == before(y, i, j))
        ++concordant;
      else
        ++discordant;
    }
  if (ties != nullptr) *ties = any_tie;
  const double total = static_cast<double>(concordant + discordant);
  return (static_cast<double>(concordant) - static_cast<double>(discordant)) / total;
}

RankingComparison ranking_concordance(const std::map<std::string, double>& ability,
                                      const ResponseMatrix& matrix,
                                      const std::vector<long>& n_values) {
  if (ability.size() < 2)
    throw ValidationError("ranking_concordance: need at least 2 models");

  RankingComparison result;
  // descending ability; exact ties fall back to id order and get flagged
  std::vector<std::pair<std::string, double>> ordered(ability.begin(), ability.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& lhs, const auto& rhs) {
    if (lhs.second != rhs.second) return lhs.second > rhs.second;
    return lhs.first < rhs.first;
  });
  std::vector<double> ability_scores;
  for (const auto& [model, score] : ordered) {
    result.models.push_back(model);
    ability_scores.push_back(score);
  }
  result.ability_rank = result.models;
  for (std::size_t i = 1; i < ability_scores.size(); ++i)
    if (ability_scores[i] == ability_scores[i - 1]) result.ties = true;

  for (long n : n_values) {
    std::vector<double> pass_scores;
    for (const std::string& model : result.models)
      pass_scores.push_back(pass_at_n(matrix, model, n, matrix.theorems()));

    std::vector<std::pair<std::string, double>> pass_ordered;
    for (std::size_t i = 0; i < result.models.size(); ++i)
      pass_ordered.emplace_back(result.models[i], pass_scores[i]);
    std::sort(pass_ordered.begin(), pass_ordered.end(), [](const auto& lhs, const auto& rhs) {
      if (lhs.second != rhs.second) return lhs.second > rhs.second;
      return lhs.first < rhs.first;
    });
    for (std::size_t i = 1; i < pass_ordered.size(); ++i)
      if (pass_ordered[i].second == pass_ordered[i - 1].second) result.ties = true;

    std::vector<std::string> rank;
    for (const auto& [model, score] : pass_ordered) rank.push_back(model);
    result.passn_rank[n] = std::move(rank);

    long concordant = 0;
    long discordant = 0;
    std::vector<PairVerdict> verdicts;
    for (std::size_t i = 0; i < result.models.size(); ++i)
      for (std::size_t j = i + 1; j < result.models.size(); ++j) {
        // ability order already has i before j; agreement means pass@n does too
        bool pass_before = pass_scores[i] != pass_scores[j] ? pass_scores[i] > pass_scores[j]
                                                            : i < j;
        if (pass_before)
          ++concordant;
        else
          ++discordant;
        verdicts.push_back({result.models[i], result.models[j], pass_before});
      }
    result.concordant[n] = concordant;
    result.discordant[n] = discordant;
    result.kendall_tau[n] = kendall_tau(ability_scores, pass_scores);
    result.verdicts[n] = std::move(verdicts);
  }
  return result;
}

void save_concordance_json(const RankingComparison& comparison,
                           const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["models"] = comparison.models;
  doc["ability_rank"] = comparison.ability_rank;
  doc["ties"] = comparison.ties;
  doc["by_n"] = nlohmann::ordered_json::object();
  for (const auto& [n, rank] : comparison.passn_rank) {
    nlohmann::ordered_json entry;
    entry["passn_rank"] = rank;
    entry["concordant"] = comparison.concordant.at(n);
    entry["discordant"] = comparison.discordant.at(n);
    entry["kendall_tau"] = comparison.kendall_tau.at(n);
    entry["verdicts"] = nlohmann::ordered_json::array();
    for (const PairVerdict& verdict : comparison.verdicts.at(n))
      entry["verdicts"].push_back({{"model_a", verdict.model_a},
                                   {"model_b", verdict.model_b},
                                   {"concordant", verdict.concordant}});
    doc["by_n"][std::to_string(n)] = std::move(entry);
  }

  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

TuneResult tune_hyperparams(const std::vector<std::pair<double, double>>& grid,
                            const ItemBank& bank,
                            const std::vector<std::pair<std::string, ExamineeBackend*>>& examinees,
                            const std::map<std::string, double>& reference,
                            const EvalConfig& base_cfg) {
  if (grid.empty()) throw ValidationError("tune_hyperparams: empty grid");
  if (examinees.size() < 2) throw ValidationError("tune_hyperparams: need >= 2 examinees");
  for (const auto& [model, backend] : examinees)
    if (!reference.count(model))
      throw ValidationError("tune_hyperparams: no reference score for '" + model + "'");

  TuneResult result;
  for (const auto& [f, eta] : grid) {
    EvalConfig cfg = base_cfg;
    cfg.f = f;
    cfg.eta = eta;

    std::vector<double> estimates;
    std::vector<double> references;
    double administration_sum = 0.0;
    for (const auto& [model, backend] : examinees) {
      EvalReport report;
      try {
        report = run_adaptive(*backend, bank, cfg);
      } catch (const std::exception& error) {
        throw ValidationError("tune_hyperparams: run failed at f=" + format_double(f) +
                              " eta=" + format_double(eta) + " model=" + model + ": " +
                              error.what());
      }
      estimates.push_back(report.final_theta);
      references.push_back(reference.at(model));
      administration_sum += report.administrations;
    }

    TunePoint point;
    point.f = f;
    point.eta = eta;
    point.tau = kendall_tau(references, estimates, &point.ties);
    point.mean_administrations = administration_sum / static_cast<double>(examinees.size());
    result.points.push_back(point);
  }

  result.best_index = 0;
  for (std::size_t i = 1; i < result.points.size(); ++i) {
    const TunePoint& candidate = result.points[i];
    const TunePoint& best = result.points[result.best_index];
    if (candidate.tau > best.tau ||
        (candidate.tau == best.tau &&
         candidate.mean_administrations < best.mean_administrations))
      result.best_index = i;
  }
  return result;
}

}  // namespace proofgauge
