#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "proofgauge/annotate.hpp"
#include "proofgauge/corpus.hpp"

namespace proofgauge {

struct BackendTraits {
  bool deterministic = false;
  bool concurrent_safe = false;
};

// Answers "out of `attempts` proof attempts on this theorem, how many
// succeed". Implementations throw BackendError on failure.
class ExamineeBackend {
 public:
  virtual ~ExamineeBackend() = default;
  virtual long prove(const std::string& theorem_id,
                     const std::optional<std::string>& statement, long attempts) = 0;
  virtual BackendTraits traits() const = 0;
};

// prove() with the 0 <= successes <= attempts contract enforced; violations
// become BackendError, never silent truncation.
long checked_prove(ExamineeBackend& backend, const std::string& theorem_id,
                   const std::optional<std::string>& statement, long attempts);

// Replays recorded counts. The requested budget must equal the recorded
// attempt count exactly; no extrapolation.
std::unique_ptr<ExamineeBackend> replay_backend(const ResponseMatrix& matrix,
                                                std::string model_id);

struct TrueItemParams {
  double a = 1.0;
  double b = 0.5;
};

struct SyntheticExaminee {
  double true_theta = 0.5;
  std::map<std::string, TrueItemParams> true_params;
  std::uint64_t seed = 0;
};

// Draws successes as Bernoulli(p_2pl(true_theta, a_true, b_true)) counts from
// a generator stream keyed per theorem, so the order theorems are queried in
// never changes any one theorem's outcomes.
std::unique_ptr<ExamineeBackend> synthetic_backend(SyntheticExaminee examinee);

// Spawns `command` through the shell once per call, writes one JSON request
// {"theorem_id","statement","attempts"} to its stdin and reads one JSON
// response {"theorem_id","successes"} from its stdout. Nonzero exit status,
// malformed output, or exceeding the timeout raise BackendError.
std::unique_ptr<ExamineeBackend> external_backend(std::string command,
                                                  std::chrono::milliseconds timeout);

// Measured-once wrapper: the first call per (theorem, attempts) delegates,
// later identical calls return the stored count. Errors are not cached, so
// a failed theorem can be retried. Concurrent first calls on one key are
// serialized; distinct keys do not block each other.
class CachedBackend final : public ExamineeBackend {
 public:
  explicit CachedBackend(ExamineeBackend& inner);

  long prove(const std::string& theorem_id,
             const std::optional<std::string>& statement, long attempts) override;
  BackendTraits traits() const override;

  std::uint64_t hits() const;
  std::uint64_t misses() const;

 private:
  struct Entry;
  ExamineeBackend& inner_;
  mutable std::mutex map_mutex_;
  std::map<std::pair<std::string, long>, std::shared_ptr<Entry>> entries_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

// Seeded 2PL bank for simulation studies: difficulties on an evenly spaced
// jittered grid over (0,1), discriminations in [0.85, 1.0], graded.
ItemBank make_synthetic_bank(int count, std::uint64_t seed);

}  // namespace proofgauge
