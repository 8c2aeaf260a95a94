#include "proofgauge/examinee.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include <json.hpp>

#include "proofgauge/errors.hpp"
#include "proofgauge/irt.hpp"

namespace proofgauge {

namespace {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

long checked_prove(ExamineeBackend& backend, const std::string& theorem_id,
                   const std::optional<std::string>& statement, long attempts) {
  if (attempts <= 0) throw ValidationError("prove: attempts must be positive");
  long successes = backend.prove(theorem_id, statement, attempts);
  if (successes < 0 || successes > attempts)
    throw BackendError("backend returned " + std::to_string(successes) +
                       " successes out of " + std::to_string(attempts) +
                       " attempts for theorem '" + theorem_id + "'");
  return successes;
}

namespace {

class ReplayBackend final : public ExamineeBackend {
 public:
  ReplayBackend(ResponseMatrix matrix, std::string model_id)
      : matrix_(std::move(matrix)), model_id_(std::move(model_id)) {}

  long prove(const std::string& theorem_id, const std::optional<std::string>&,
             long attempts) override {
    if (!matrix_.has_cell(model_id_, theorem_id))
      throw BackendError("no recorded result for theorem '" + theorem_id +
                         "' under model '" + model_id_ + "'");
    const AggregateCell& cell = matrix_.cell(model_id_, theorem_id);
    if (cell.attempts != attempts)
      throw BackendError("recorded budget " + std::to_string(cell.attempts) +
                         " does not match requested " + std::to_string(attempts) +
                         " for theorem '" + theorem_id + "'");
    return cell.successes;
  }

  BackendTraits traits() const override { return {true, true}; }

 private:
  ResponseMatrix matrix_;  // owned copy so the backend cannot dangle
  std::string model_id_;
};

class SyntheticBackend final : public ExamineeBackend {
 public:
  explicit SyntheticBackend(SyntheticExaminee examinee) : examinee_(std::move(examinee)) {}

  long prove(const std::string& theorem_id, const std::optional<std::string>&,
             long attempts) override {
    auto params = examinee_.true_params.find(theorem_id);
    if (params == examinee_.true_params.end())
      throw BackendError("no true parameters for theorem '" + theorem_id + "'");
    const double p = p_2pl(examinee_.true_theta, params->second.a, params->second.b);

    auto stream = streams_.find(theorem_id);
    if (stream == streams_.end())
      stream = streams_
                   .emplace(theorem_id,
                            std::mt19937_64(splitmix64(examinee_.seed ^ fnv1a64(theorem_id))))
                   .first;
    long successes = 0;
    for (long i = 0; i < attempts; ++i)
      if (next_unit(stream->second) < p) ++successes;
    return successes;
  }

  BackendTraits traits() const override { return {true, false}; }

 private:
  SyntheticExaminee examinee_;
  std::map<std::string, std::mt19937_64> streams_;  // one stream per theorem
};

class ExternalBackend final : public ExamineeBackend {
 public:
  ExternalBackend(std::string command, std::chrono::milliseconds timeout)
      : command_(std::move(command)), timeout_(timeout) {}

  long prove(const std::string& theorem_id, const std::optional<std::string>& statement,
             long attempts) override {
    // a child that exits without reading stdin must not kill this process
    ::signal(SIGPIPE, SIG_IGN);

    nlohmann::json request = {{"theorem_id", theorem_id},
                              {"statement", statement ? nlohmann::json(*statement)
                                                      : nlohmann::json(nullptr)},
                              {"attempts", attempts}};
    const std::string request_text = request.dump() + "\n";

    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
      throw BackendError("pipe creation failed for theorem '" + theorem_id + "'");

    pid_t pid = ::fork();
    if (pid < 0) throw BackendError("fork failed for theorem '" + theorem_id + "'");
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);

    // the request is far smaller than the pipe buffer, so this cannot block
    const char* data = request_text.data();
    std::size_t left = request_text.size();
    while (left > 0) {
      ssize_t written = ::write(to_child[1], data, left);
      if (written <= 0) break;  // child exited early; its exit status decides
      data += written;
      left -= static_cast<std::size_t>(written);
    }
    ::close(to_child[1]);

    std::string output;
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    char buffer[4096];
    while (true) {
      auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) {
        ::close(from_child[0]);
        ::kill(pid, SIGKILL);
        ::waitpid(pid, nullptr, 0);
        throw BackendError("timeout proving theorem '" + theorem_id + "'");
      }
      struct pollfd pfd = {from_child[0], POLLIN, 0};
      int ready = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (ready == 0) continue;  // re-check the deadline
      if (ready < 0) {
        if (errno == EINTR) continue;
        ::close(from_child[0]);
        ::kill(pid, SIGKILL);
        ::waitpid(pid, nullptr, 0);
        throw BackendError("poll failed proving theorem '" + theorem_id + "'");
      }
      ssize_t got = ::read(from_child[0], buffer, sizeof buffer);
      if (got < 0) {
        if (errno == EINTR) continue;
        got = 0;
      }
      if (got == 0) break;  // EOF
      output.append(buffer, static_cast<std::size_t>(got));
    }
    ::close(from_child[0]);

    int status = 0;
    ::waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
      throw BackendError("backend command failed (status " +
                         std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) +
                         ") proving theorem '" + theorem_id + "'");

    nlohmann::json response = nlohmann::json::parse(output, nullptr, false);
    if (response.is_discarded() || !response.is_object() ||
        !response.contains("theorem_id") || !response.contains("successes") ||
        !response["successes"].is_number_integer())
      throw BackendError("malformed backend response for theorem '" + theorem_id + "'");
    if (response["theorem_id"] != theorem_id)
      throw BackendError("backend answered for " + response["theorem_id"].dump() +
                         ", expected '" + theorem_id + "'");
    long successes = response["successes"].get<long>();
    if (successes < 0 || successes > attempts)
      throw BackendError("backend reported " + std::to_string(successes) +
                         " successes out of " + std::to_string(attempts) +
                         " attempts for theorem '" + theorem_id + "'");
    return successes;
  }

  BackendTraits traits() const override { return {false, true}; }

 private:
  std::string command_;
  std::chrono::milliseconds timeout_;
};

}  // namespace

std::unique_ptr<ExamineeBackend> replay_backend(const ResponseMatrix& matrix,
                                                std::string model_id) {
  const auto& models = matrix.models();
  if (std::find(models.begin(), models.end(), model_id) == models.end())
    throw ValidationError("matrix has no recorded results for model '" + model_id + "'");
  return std::make_unique<ReplayBackend>(matrix, std::move(model_id));
}

std::unique_ptr<ExamineeBackend> synthetic_backend(SyntheticExaminee examinee) {
  return std::make_unique<SyntheticBackend>(std::move(examinee));
}

std::unique_ptr<ExamineeBackend> external_backend(std::string command,
                                                  std::chrono::milliseconds timeout) {
  return std::make_unique<ExternalBackend>(std::move(command), timeout);
}

struct CachedBackend::Entry {
  std::mutex mutex;
  bool done = false;
  long value = 0;
};

CachedBackend::CachedBackend(ExamineeBackend& inner) : inner_(inner) {}

long CachedBackend::prove(const std::string& theorem_id,
                          const std::optional<std::string>& statement, long attempts) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard<std::mutex> lock(map_mutex_);
    auto& slot = entries_[{theorem_id, attempts}];
    if (!slot) slot = std::make_shared<Entry>();
    entry = slot;
  }

  // per-key lock: concurrent first calls on one key are serialized, so the
  // inner backend sees at most one call per key
  std::lock_guard<std::mutex> key_lock(entry->mutex);
  if (entry->done) {
    std::lock_guard<std::mutex> lock(map_mutex_);
    ++hits_;
    return entry->value;
  }

  long successes = inner_.prove(theorem_id, statement, attempts);
  if (successes < 0 || successes > attempts)
    throw BackendError("backend returned " + std::to_string(successes) +
                       " successes out of " + std::to_string(attempts) +
                       " attempts for theorem '" + theorem_id + "'");
  entry->value = successes;
  entry->done = true;  // errors above leave done=false, so retries delegate
  {
    std::lock_guard<std::mutex> lock(map_mutex_);
    ++misses_;
  }
  return successes;
}

BackendTraits CachedBackend::traits() const {
  BackendTraits traits = inner_.traits();
  traits.concurrent_safe = true;
  return traits;
}

std::uint64_t CachedBackend::hits() const {
  std::lock_guard<std::mutex> lock(map_mutex_);
  return hits_;
}

std::uint64_t CachedBackend::misses() const {
  std::lock_guard<std::mutex> lock(map_mutex_);
  return misses_;
}

ItemBank make_synthetic_bank(int count, std::uint64_t seed) {
  if (count < 2) throw ValidationError("synthetic bank needs at least 2 items");
  std::mt19937_64 rng(splitmix64(seed));

  ItemBank bank;
  bank.items.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // evenly spaced difficulty grid with a small Box-Muller jitter
    double u1 = next_unit(rng);
    double u2 = next_unit(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double jitter =
        0.01 * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    double b = (static_cast<double>(i) + 0.5) / static_cast<double>(count) + jitter;
    if (b < 0.001) b = 0.001;
    if (b > 0.999) b = 0.999;
    const double a = 0.85 + 0.15 * next_unit(rng);

    ItemParams item;
    char id[32];
    std::snprintf(id, sizeof id, "syn_%04d", i);
    item.theorem_id = id;
    item.difficulty = b;
    item.discrimination = a;
    item.raw_difficulty = -b / (1.0 - b);
    item.raw_discrimination = a;
    item.zero_success = false;
    bank.items.push_back(std::move(item));
  }

  double raw_min = 0.0;
  double disc_max = 0.0;
  for (const ItemParams& item : bank.items) {
    raw_min = std::min(raw_min, item.raw_difficulty);
    disc_max = std::max(disc_max, item.raw_discrimination);
  }
  bank.normalization = {raw_min, 0.0, disc_max};
  grade(bank);
  return bank;
}

}  // namespace proofgauge
