#include "proofgauge/annotate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "proofgauge/csv.hpp"
#include "proofgauge/errors.hpp"

namespace proofgauge {

const ItemParams* ItemBank::find(const std::string& id) const {
  for (const ItemParams& item : items)
    if (item.theorem_id == id) return &item;
  return nullptr;
}

double corrected_success(double mean_rate, std::span<const double> per_model_rates,
                         std::span<const double> priors, double epsilon) {
  if (per_model_rates.size() != priors.size())
    throw ValidationError("corrected_success: rates and priors differ in length");
  double correction = 0.0;
  for (std::size_t i = 0; i < per_model_rates.size(); ++i) {
    if (per_model_rates[i] > 0.0) {
      if (priors[i] <= 0.0)
        throw ValidationError("corrected_success: prior must be positive");
      correction += 1.0 / priors[i];
    }
  }
  return mean_rate - epsilon * correction;
}

double raw_difficulty(double p_prime, bool zero_success, const AnnotationConfig& cfg) {
  if (zero_success) return 0.0;
  double p = p_prime;
  if (p < cfg.pprime_floor) p = cfg.pprime_floor;
  if (p > cfg.pprime_ceiling) p = cfg.pprime_ceiling;
  return -p / (1.0 - p);
}

double raw_discrimination(std::span<const double> per_model_rates,
                          std::span<const double> priors) {
  if (per_model_rates.size() != priors.size())
    throw ValidationError("raw_discrimination: rates and priors differ in length");
  if (priors.size() < 2)
    throw ValidationError("raw_discrimination: need at least 2 models");
  double slope_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < priors.size(); ++i)
    for (std::size_t j = i + 1; j < priors.size(); ++j) {
      if (priors[i] == priors[j])
        throw ValidationError("raw_discrimination: duplicate prior " +
                              format_double(priors[i]));
      slope_sum += (per_model_rates[i] - per_model_rates[j]) / (priors[i] - priors[j]);
      ++pairs;
    }
  return slope_sum / static_cast<double>(pairs);
}

ItemBank normalize_bank(std::vector<ItemParams> raw_items) {
  std::set<double> distinct;
  for (const ItemParams& item : raw_items) distinct.insert(item.raw_difficulty);
  if (distinct.size() < 2)
    throw ValidationError("normalize_bank: degenerate bank, need >= 2 distinct raw difficulties");

  double raw_min = *distinct.begin();
  // upper anchor fixed at the zero-success raw value 0, not the observed
  // maximum, so difficulty 1.0 is reachable only by zero-success items
  const double raw_max = 0.0;
  double disc_max_abs = 0.0;
  for (const ItemParams& item : raw_items)
    disc_max_abs = std::max(disc_max_abs, std::fabs(item.raw_discrimination));

  for (ItemParams& item : raw_items) {
    item.difficulty = (item.raw_difficulty - raw_min) / (raw_max - raw_min);
    item.discrimination =
        disc_max_abs == 0.0 ? 0.0 : item.raw_discrimination / disc_max_abs;
  }

  ItemBank bank;
  bank.items = std::move(raw_items);
  bank.normalization = {raw_min, raw_max, disc_max_abs};
  return bank;
}

ItemBank annotate(const ResponseMatrix& matrix,
                  const std::vector<std::string>& annotation_models,
                  const AnnotationConfig& cfg) {
  if (annotation_models.size() < 2)
    throw ValidationError("annotate: need at least 2 annotation models");
  for (const std::string& model : annotation_models)
    if (std::find(matrix.models().begin(), matrix.models().end(), model) ==
        matrix.models().end())
      throw ValidationError("annotate: matrix has no model '" + model + "'");

  // one common attempt budget across every cell
  long budget = 0;
  for (const std::string& model : annotation_models)
    for (const std::string& theorem : matrix.theorems()) {
      const AggregateCell& cell = matrix.cell(model, theorem);  // throws if missing
      if (budget == 0) budget = cell.attempts;
      if (cell.attempts != budget)
        throw ValidationError("annotate: cell (" + model + ", " + theorem +
                              ") has attempt budget " + std::to_string(cell.attempts) +
                              ", expected " + std::to_string(budget));
    }

  // prior = pass rate at the common budget; must be positive and distinct
  std::vector<std::pair<double, std::string>> by_prior;
  for (const std::string& model : annotation_models)
    by_prior.emplace_back(pass_at_n(matrix, model, budget, matrix.theorems()), model);
  std::stable_sort(by_prior.begin(), by_prior.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  for (std::size_t i = 0; i < by_prior.size(); ++i) {
    if (by_prior[i].first <= 0.0)
      throw ValidationError("annotate: model '" + by_prior[i].second +
                            "' has zero pass rate, prior unusable");
    if (i > 0 && by_prior[i].first == by_prior[i - 1].first)
      throw ValidationError("annotate: models '" + by_prior[i - 1].second + "' and '" +
                            by_prior[i].second + "' have tied priors");
  }
  std::vector<double> priors;
  std::vector<std::string> sorted_models;
  for (const auto& [prior, model] : by_prior) {
    priors.push_back(prior);
    sorted_models.push_back(model);
  }

  std::vector<ItemParams> items;
  items.reserve(matrix.theorems().size());
  for (const std::string& theorem : matrix.theorems()) {
    ItemParams item;
    item.theorem_id = theorem;

    std::vector<double> rates;
    bool any_success = false;
    double mean = 0.0;
    for (const std::string& model : sorted_models) {
      const AggregateCell& cell = matrix.cell(model, theorem);
      double rate = static_cast<double>(cell.successes) / static_cast<double>(cell.attempts);
      rates.push_back(rate);
      mean += rate;
      if (cell.successes > 0) any_success = true;
    }
    mean /= static_cast<double>(rates.size());

    item.zero_success = !any_success;
    double p_prime = corrected_success(mean, rates, priors, cfg.epsilon);
    item.raw_difficulty = raw_difficulty(p_prime, item.zero_success, cfg);
    item.raw_discrimination = raw_discrimination(rates, priors);
    items.push_back(std::move(item));
  }

  return normalize_bank(std::move(items));
}

GradingReport grade(ItemBank& bank, int level_count) {
  if (bank.items.empty()) throw ValidationError("grade: empty bank");
  if (level_count < 2) throw ValidationError("grade: need at least 2 levels");
  const int groups = level_count - 1;

  std::vector<ItemParams*> proven;
  for (ItemParams& item : bank.items) {
    if (item.zero_success)
      item.level = level_count;
    else
      proven.push_back(&item);
  }
  std::sort(proven.begin(), proven.end(), [](const ItemParams* x, const ItemParams* y) {
    if (x->difficulty != y->difficulty) return x->difficulty < y->difficulty;
    return x->theorem_id < y->theorem_id;
  });

  // near-equal contiguous groups; remainders raise the sizes of the higher
  // levels so counts are nondecreasing with level
  const std::size_t n = proven.size();
  const std::size_t base = n / static_cast<std::size_t>(groups);
  const std::size_t remainder = n % static_cast<std::size_t>(groups);

  GradingReport report;
  report.counts.assign(static_cast<std::size_t>(level_count), 0);
  std::size_t position = 0;
  for (int g = 0; g < groups; ++g) {
    std::size_t size = base + (static_cast<std::size_t>(g) >= groups - remainder ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) proven[position + i]->level = g + 1;
    position += size;
    report.counts[static_cast<std::size_t>(g)] = static_cast<int>(size);
    double boundary = size > 0 ? proven[position - 1]->difficulty
                               : (report.boundaries.empty() ? 0.0 : report.boundaries.back());
    report.boundaries.push_back(boundary);
  }
  report.counts[static_cast<std::size_t>(level_count - 1)] =
      static_cast<int>(bank.items.size() - n);
  return report;
}

ItemBank load_bank(const std::filesystem::path& path) {
  CsvTable table = read_csv(
      path, "theorem_id,difficulty,discrimination,level,raw_difficulty,raw_discrimination,zero_success");
  if (table.rows.empty()) throw ValidationError(path.string() + ": empty bank");

  ItemBank bank;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    ItemParams item;
    item.theorem_id = row[0];
    if (!seen.insert(item.theorem_id).second)
      throw ValidationError(path.string() + ": duplicate theorem_id '" + item.theorem_id + "'");
    item.difficulty = parse_double(row[1], path.string() + " difficulty");
    item.discrimination = parse_double(row[2], path.string() + " discrimination");
    item.level = static_cast<int>(parse_long(row[3], path.string() + " level"));
    item.raw_difficulty = parse_double(row[4], path.string() + " raw_difficulty");
    item.raw_discrimination = parse_double(row[5], path.string() + " raw_discrimination");
    if (row[6] == "0") item.zero_success = false;
    else if (row[6] == "1") item.zero_success = true;
    else throw ValidationError(path.string() + ": zero_success must be 0 or 1");

    if (item.difficulty < 0.0 || item.difficulty > 1.0)
      throw ValidationError(path.string() + ": difficulty out of [0,1] for '" +
                            item.theorem_id + "'");
    if (item.zero_success != (item.difficulty == 1.0))
      throw ValidationError(path.string() + ": zero_success and difficulty 1.0 must " +
                            "coincide, violated by '" + item.theorem_id + "'");
    bank.items.push_back(std::move(item));
  }

  double raw_min = 0.0;
  double disc_max_abs = 0.0;
  for (const ItemParams& item : bank.items) {
    raw_min = std::min(raw_min, item.raw_difficulty);
    disc_max_abs = std::max(disc_max_abs, std::fabs(item.raw_discrimination));
  }
  bank.normalization = {raw_min, 0.0, disc_max_abs};
  return bank;
}

void save_bank(const ItemBank& bank, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const ItemParams& item : bank.items)
    rows.push_back({item.theorem_id, format_double(item.difficulty),
                    format_double(item.discrimination), std::to_string(item.level),
                    format_double(item.raw_difficulty),
                    format_double(item.raw_discrimination),
                    item.zero_success ? "1" : "0"});
  write_csv(path,
            "theorem_id,difficulty,discrimination,level,raw_difficulty,raw_discrimination,zero_success",
            rows);
}

}  // namespace proofgauge
