#include "proofgauge/corpus.hpp"

#include <algorithm>
#include <set>

#include "proofgauge/csv.hpp"
#include "proofgauge/errors.hpp"

namespace proofgauge {

std::string to_string(Split s) {
  switch (s) {
    case Split::test: return "test";
    case Split::valid: return "valid";
    default: return "";
  }
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::IMO: return "IMO";
    case Provenance::AIME: return "AIME";
    case Provenance::AMC: return "AMC";
    case Provenance::MATH: return "MATH";
    case Provenance::CUSTOM: return "CUSTOM";
    default: return "";
  }
}

std::string to_string(ProblemType t) {
  switch (t) {
    case ProblemType::algebra: return "algebra";
    case ProblemType::number_theory: return "number_theory";
    case ProblemType::induction: return "induction";
    case ProblemType::other: return "other";
    default: return "";
  }
}

Split parse_split(const std::string& text) {
  if (text.empty()) return Split::unknown;
  if (text == "test") return Split::test;
  if (text == "valid") return Split::valid;
  throw ValidationError("unknown split '" + text + "'");
}

Provenance parse_provenance(const std::string& text) {
  if (text.empty()) return Provenance::unknown;
  if (text == "IMO") return Provenance::IMO;
  if (text == "AIME") return Provenance::AIME;
  if (text == "AMC") return Provenance::AMC;
  if (text == "MATH") return Provenance::MATH;
  if (text == "CUSTOM") return Provenance::CUSTOM;
  throw ValidationError("unknown provenance '" + text + "'");
}

ProblemType parse_problem_type(const std::string& text) {
  if (text.empty()) return ProblemType::unknown;
  if (text == "algebra") return ProblemType::algebra;
  if (text == "number_theory") return ProblemType::number_theory;
  if (text == "induction") return ProblemType::induction;
  if (text == "other") return ProblemType::other;
  throw ValidationError("unknown problem_type '" + text + "'");
}

const TheoremRecord* Corpus::find(const std::string& id) const {
  for (const TheoremRecord& record : records)
    if (record.id == id) return &record;
  return nullptr;
}

void ResponseMatrix::register_ids(const std::string& model, const std::string& theorem) {
  if (std::find(models_.begin(), models_.end(), model) == models_.end())
    models_.push_back(model);
  if (std::find(theorems_.begin(), theorems_.end(), theorem) == theorems_.end())
    theorems_.push_back(theorem);
}

void ResponseMatrix::add_aggregate(const std::string& model, const std::string& theorem,
                                   long attempts, long successes) {
  if (model.empty() || theorem.empty())
    throw ValidationError("empty model or theorem id");
  if (attempts <= 0)
    throw ValidationError("cell (" + model + ", " + theorem + "): attempts must be positive");
  if (successes < 0 || successes > attempts)
    throw ValidationError("cell (" + model + ", " + theorem + "): successes " +
                          std::to_string(successes) + " out of range 0.." +
                          std::to_string(attempts));
  auto [it, inserted] = cells_.try_emplace({model, theorem}, AggregateCell{attempts, successes});
  if (!inserted) throw ValidationError("duplicate cell (" + model + ", " + theorem + ")");
  register_ids(model, theorem);
}

void ResponseMatrix::add_detail(const std::string& model, const std::string& theorem,
                                std::vector<bool> outcomes) {
  if (outcomes.empty())
    throw ValidationError("cell (" + model + ", " + theorem + "): no attempts");
  long successes = 0;
  for (bool ok : outcomes) successes += ok ? 1 : 0;
  add_aggregate(model, theorem, static_cast<long>(outcomes.size()), successes);
  detail_[{model, theorem}] = std::move(outcomes);
}

bool ResponseMatrix::has_cell(const std::string& model, const std::string& theorem) const {
  return cells_.count({model, theorem}) != 0;
}

const AggregateCell& ResponseMatrix::cell(const std::string& model,
                                          const std::string& theorem) const {
  auto it = cells_.find({model, theorem});
  if (it == cells_.end())
    throw ValidationError("missing cell (" + model + ", " + theorem + ")");
  return it->second;
}

bool ResponseMatrix::has_detail(const std::string& model, const std::string& theorem) const {
  return detail_.count({model, theorem}) != 0;
}

const std::vector<bool>& ResponseMatrix::detail(const std::string& model,
                                                const std::string& theorem) const {
  auto it = detail_.find({model, theorem});
  if (it == detail_.end())
    throw ValidationError("no attempt detail for (" + model + ", " + theorem + ")");
  return it->second;
}

bool ResponseMatrix::all_cells_have_detail() const {
  return detail_.size() == cells_.size();
}

bool ResponseMatrix::operator==(const ResponseMatrix& other) const {
  return cells_ == other.cells_ && detail_ == other.detail_;
}

ResponseMatrix load_attempts(const std::filesystem::path& path) {
  CsvTable table = read_csv(path, "model_id,theorem_id,attempt_index,success");
  if (table.rows.empty()) throw ValidationError(path.string() + ": no records");

  // gather per-cell (index, outcome) pairs, then check 1..n contiguity
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<long, bool>>> pending;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& row : table.rows) {
    long index = parse_long(row[2], path.string() + " attempt_index");
    bool success;
    if (row[3] == "0") success = false;
    else if (row[3] == "1") success = true;
    else throw ValidationError(path.string() + ": success must be 0 or 1, found '" + row[3] + "'");
    auto key = std::make_pair(row[0], row[1]);
    auto it = pending.find(key);
    if (it == pending.end()) {
      order.push_back(key);
      it = pending.emplace(key, std::vector<std::pair<long, bool>>{}).first;
    }
    for (const auto& existing : it->second)
      if (existing.first == index)
        throw ValidationError(path.string() + ": duplicate attempt (" + row[0] + ", " +
                              row[1] + ", " + std::to_string(index) + ")");
    it->second.emplace_back(index, success);
  }

  ResponseMatrix matrix;
  for (const auto& key : order) {
    auto& attempts = pending[key];
    std::sort(attempts.begin(), attempts.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<bool> outcomes;
    outcomes.reserve(attempts.size());
    for (std::size_t i = 0; i < attempts.size(); ++i) {
      if (attempts[i].first != static_cast<long>(i) + 1)
        throw ValidationError(path.string() + ": non-contiguous attempts for (" +
                              key.first + ", " + key.second + ")");
      outcomes.push_back(attempts[i].second);
    }
    matrix.add_detail(key.first, key.second, std::move(outcomes));
  }
  return matrix;
}

ResponseMatrix load_aggregates(const std::filesystem::path& path) {
  CsvTable table = read_csv(path, "model_id,theorem_id,attempts,successes");
  if (table.rows.empty()) throw ValidationError(path.string() + ": no records");

  ResponseMatrix matrix;
  for (const auto& row : table.rows) {
    long attempts = parse_long(row[2], path.string() + " attempts");
    long successes = parse_long(row[3], path.string() + " successes");
    matrix.add_aggregate(row[0], row[1], attempts, successes);
  }
  return matrix;
}

void save_matrix(const ResponseMatrix& matrix, const std::filesystem::path& path) {
  bool any_detail = false;
  for (const auto& model : matrix.models())
    for (const auto& theorem : matrix.theorems())
      if (matrix.has_detail(model, theorem)) any_detail = true;

  std::vector<std::vector<std::string>> rows;
  if (any_detail) {
    if (!matrix.all_cells_have_detail())
      throw ValidationError("matrix mixes detail and aggregate-only cells; cannot save");
    for (const auto& model : matrix.models())
      for (const auto& theorem : matrix.theorems()) {
        if (!matrix.has_cell(model, theorem)) continue;
        const std::vector<bool>& outcomes = matrix.detail(model, theorem);
        for (std::size_t i = 0; i < outcomes.size(); ++i)
          rows.push_back({model, theorem, std::to_string(i + 1), outcomes[i] ? "1" : "0"});
      }
    write_csv(path, "model_id,theorem_id,attempt_index,success", rows);
  } else {
    for (const auto& model : matrix.models())
      for (const auto& theorem : matrix.theorems()) {
        if (!matrix.has_cell(model, theorem)) continue;
        const AggregateCell& cell = matrix.cell(model, theorem);
        rows.push_back({model, theorem, std::to_string(cell.attempts),
                        std::to_string(cell.successes)});
      }
    write_csv(path, "model_id,theorem_id,attempts,successes", rows);
  }
}

Corpus load_corpus(const std::filesystem::path& path) {
  CsvTable table = read_csv(path, "theorem_id,split,provenance,problem_type,human_level");
  Corpus corpus;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    TheoremRecord record;
    record.id = row[0];
    if (record.id.empty()) throw ValidationError(path.string() + ": empty theorem_id");
    if (!seen.insert(record.id).second)
      throw ValidationError(path.string() + ": duplicate theorem_id '" + record.id + "'");
    record.split = parse_split(row[1]);
    record.provenance = parse_provenance(row[2]);
    record.problem_type = parse_problem_type(row[3]);
    if (!row[4].empty()) {
      long level = parse_long(row[4], path.string() + " human_level");
      if (level < 1 || level > 5)
        throw ValidationError(path.string() + ": human_level " + std::to_string(level) +
                              " outside 1..5 for '" + record.id + "'");
      record.human_level = static_cast<int>(level);
    }
    corpus.records.push_back(std::move(record));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const TheoremRecord& record : corpus.records)
    rows.push_back({record.id, to_string(record.split), to_string(record.provenance),
                    to_string(record.problem_type),
                    record.human_level ? std::to_string(*record.human_level) : ""});
  write_csv(path, "theorem_id,split,provenance,problem_type,human_level", rows);
}

double attempt_success_rate(const ResponseMatrix& matrix, const std::string& model,
                            const std::string& theorem) {
  const AggregateCell& cell = matrix.cell(model, theorem);
  return static_cast<double>(cell.successes) / static_cast<double>(cell.attempts);
}

double pass_at_n(const ResponseMatrix& matrix, const std::string& model, long n,
                 const std::vector<std::string>& theorems) {
  if (n <= 0) throw ValidationError("pass_at_n: n must be positive");
  if (theorems.empty()) throw ValidationError("pass_at_n: empty theorem set");

  long passed = 0;
  for (const std::string& theorem : theorems) {
    const AggregateCell& cell = matrix.cell(model, theorem);
    bool pass;
    if (matrix.has_detail(model, theorem)) {
      const std::vector<bool>& outcomes = matrix.detail(model, theorem);
      if (static_cast<long>(outcomes.size()) < n)
        throw ValidationError("pass_at_n: cell (" + model + ", " + theorem + ") has " +
                              std::to_string(outcomes.size()) + " attempts, need " +
                              std::to_string(n));
      pass = false;
      for (long i = 0; i < n; ++i)
        if (outcomes[static_cast<std::size_t>(i)]) { pass = true; break; }
    } else {
      if (cell.attempts != n)
        throw ValidationError("pass_at_n: cell (" + model + ", " + theorem +
                              ") aggregated over " + std::to_string(cell.attempts) +
                              " attempts, need detail for n=" + std::to_string(n));
      pass = cell.successes > 0;
    }
    if (pass) ++passed;
  }
  return static_cast<double>(passed) / static_cast<double>(theorems.size());
}

double prior_ability(const ResponseMatrix& matrix, const std::string& model) {
  return pass_at_n(matrix, model, 128, matrix.theorems());
}

}  // namespace proofgauge
