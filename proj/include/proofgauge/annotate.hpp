#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "proofgauge/corpus.hpp"

namespace proofgauge {

struct AnnotationConfig {
  double epsilon = 0.005;        // correction weight; 0 disables the correction
  double pprime_floor = 1e-6;    // clamp for over-corrected success rates
  double pprime_ceiling = 0.9999;
  int level_count = 4;
};

struct ItemParams {
  std::string theorem_id;
  double raw_difficulty = 0.0;      // <= 0, exactly 0 only for zero_success
  double raw_discrimination = 0.0;
  double difficulty = 0.0;          // in [0,1]
  double discrimination = 0.0;      // in [-1,1]
  int level = 0;                    // 0 until graded
  bool zero_success = false;
};

struct NormalizationRecord {
  double raw_difficulty_min = 0.0;
  double raw_difficulty_max = 0.0;       // anchored at 0 (see normalize_bank)
  double raw_discrimination_max_abs = 0.0;
};

struct GradingReport {
  std::vector<int> counts;         // items per level, index 0 = level 1
  std::vector<double> boundaries;  // largest difficulty within each proven level
};

struct ItemBank {
  std::vector<ItemParams> items;   // ids unique, order = annotation input order
  NormalizationRecord normalization;

  const ItemParams* find(const std::string& id) const;
};

// Mean success rate minus epsilon * sum over proving models of 1/prior.
// No clamping here; priors must be strictly positive.
double corrected_success(double mean_rate, std::span<const double> per_model_rates,
                         std::span<const double> priors, double epsilon);

// 0 for zero-success items, else -p'/(1-p') with p' clamped into
// [pprime_floor, pprime_ceiling]; strictly negative for proven items.
double raw_difficulty(double p_prime, bool zero_success, const AnnotationConfig& cfg);

// Mean slope of success rate against prior ability over all unordered model
// pairs. Priors must be pairwise distinct.
double raw_discrimination(std::span<const double> per_model_rates,
                          std::span<const double> priors);

// Difficulty maps [raw min, 0] linearly onto [0,1]. The upper anchor is
// always 0 (the zero-success raw value) rather than the observed maximum, so
// difficulty 1.0 stays exclusive to zero-success items in every bank.
// Discrimination divides by the largest absolute raw value, preserving sign
// and zero; an all-zero column stays all zero.
ItemBank normalize_bank(std::vector<ItemParams> raw_items);

// Per-theorem rates, corrected success, raw metrics, then normalize_bank.
// The matrix must cover annotation_models x theorems at one common attempt
// budget; model priors (pass rate at that budget) must be distinct and > 0.
ItemBank annotate(const ResponseMatrix& matrix,
                  const std::vector<std::string>& annotation_models,
                  const AnnotationConfig& cfg);

// Assigns levels in place: the top level is exactly the zero-success items,
// the proven items are sorted by (difficulty, theorem_id) and cut into
// level_count-1 contiguous groups with remainders going to higher levels.
GradingReport grade(ItemBank& bank, int level_count = 4);

ItemBank load_bank(const std::filesystem::path& path);
void save_bank(const ItemBank& bank, const std::filesystem::path& path);

}  // namespace proofgauge
