#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace proofgauge {

enum class Split { test, valid, unknown };
enum class Provenance { IMO, AIME, AMC, MATH, CUSTOM, unknown };
enum class ProblemType { algebra, number_theory, induction, other, unknown };

std::string to_string(Split s);
std::string to_string(Provenance p);
std::string to_string(ProblemType t);
Split parse_split(const std::string& text);
Provenance parse_provenance(const std::string& text);
ProblemType parse_problem_type(const std::string& text);

struct TheoremRecord {
  std::string id;
  std::optional<std::string> statement;  // never persisted, carried for backends
  Split split = Split::unknown;
  Provenance provenance = Provenance::unknown;
  ProblemType problem_type = ProblemType::unknown;
  std::optional<int> human_level;  // 1..5 when present

  bool operator==(const TheoremRecord&) const = default;
};

struct Corpus {
  std::vector<TheoremRecord> records;  // insertion order, ids unique

  const TheoremRecord* find(const std::string& id) const;
  bool operator==(const Corpus&) const = default;
};

struct AggregateCell {
  long attempts = 0;
  long successes = 0;

  bool operator==(const AggregateCell&) const = default;
};

// Recorded proof attempts per (model, theorem), either aggregate counts or
// full ordered attempt outcomes with aggregates derived. Immutable once
// loaded; all reads are const.
class ResponseMatrix {
 public:
  // Both mutators reject duplicate (model, theorem) keys and enforce
  // 0 <= successes <= attempts, attempts > 0.
  void add_aggregate(const std::string& model, const std::string& theorem,
                     long attempts, long successes);
  void add_detail(const std::string& model, const std::string& theorem,
                  std::vector<bool> outcomes);

  const std::vector<std::string>& models() const { return models_; }
  const std::vector<std::string>& theorems() const { return theorems_; }

  bool has_cell(const std::string& model, const std::string& theorem) const;
  const AggregateCell& cell(const std::string& model, const std::string& theorem) const;
  bool has_detail(const std::string& model, const std::string& theorem) const;
  const std::vector<bool>& detail(const std::string& model, const std::string& theorem) const;

  std::size_t cell_count() const { return cells_.size(); }
  bool all_cells_have_detail() const;

  // Equality is content-based (cells and detail); id list order does not
  // matter, so save followed by load compares equal.
  bool operator==(const ResponseMatrix& other) const;

 private:
  using Key = std::pair<std::string, std::string>;
  void register_ids(const std::string& model, const std::string& theorem);

  std::vector<std::string> models_;
  std::vector<std::string> theorems_;
  std::map<Key, AggregateCell> cells_;
  std::map<Key, std::vector<bool>> detail_;
};

ResponseMatrix load_attempts(const std::filesystem::path& path);
ResponseMatrix load_aggregates(const std::filesystem::path& path);
// Writes attempt-level rows when every cell carries detail, aggregate rows
// when none does; a mix cannot be represented in one file and is an error.
void save_matrix(const ResponseMatrix& matrix, const std::filesystem::path& path);

Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

double attempt_success_rate(const ResponseMatrix& matrix, const std::string& model,
                            const std::string& theorem);

// Fraction of `theorems` whose first n attempts contain at least one success.
// Needs attempt detail unless n equals a cell's aggregate attempt count.
double pass_at_n(const ResponseMatrix& matrix, const std::string& model, long n,
                 const std::vector<std::string>& theorems);

// Pass@128 over every theorem in the matrix.
double prior_ability(const ResponseMatrix& matrix, const std::string& model);

}  // namespace proofgauge
