#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "proofgauge/corpus.hpp"
#include "proofgauge/errors.hpp"
#include "proofgauge/examinee.hpp"
#include "proofgauge/irt.hpp"
#include "test_util.hpp"

using namespace proofgauge;
using test_util::TempDir;
using test_util::write_file;

namespace {

// Scripted backend for contract and cache tests.
struct StubBackend final : ExamineeBackend {
  long answer = 0;
  long calls = 0;
  bool fail_next = false;

  long prove(const std::string& theorem_id, const std::optional<std::string>&,
             long) override {
    ++calls;
    if (fail_next) {
      fail_next = false;
      throw BackendError("injected failure on '" + theorem_id + "'");
    }
    return answer;
  }
  BackendTraits traits() const override { return {true, true}; }
};

}  // namespace

TEST_CASE("contract boundary rejects out-of-range success counts") {
  StubBackend stub;
  stub.answer = 129;
  CHECK_THROWS_AS(checked_prove(stub, "t", std::nullopt, 128), BackendError);
  stub.answer = -1;
  CHECK_THROWS_AS(checked_prove(stub, "t", std::nullopt, 128), BackendError);
  stub.answer = 128;
  CHECK(checked_prove(stub, "t", std::nullopt, 128) == 128);
}

TEST_CASE("replay returns recorded counts and refuses extrapolation") {
  ResponseMatrix matrix;
  matrix.add_aggregate("m", "mathd_algebra_182", 128, 75);
  auto backend = replay_backend(matrix, "m");

  CHECK(backend->prove("mathd_algebra_182", std::nullopt, 128) == 75);
  CHECK(backend->prove("mathd_algebra_182", std::nullopt, 128) == 75);
  CHECK(backend->traits().deterministic);

  try {
    backend->prove("missing_theorem", std::nullopt, 128);
    FAIL("missing theorem not rejected");
  } catch (const BackendError& error) {
    CHECK(std::string(error.what()).find("missing_theorem") != std::string::npos);
  }
  CHECK_THROWS_AS(backend->prove("mathd_algebra_182", std::nullopt, 64), BackendError);

  CHECK_THROWS_AS(replay_backend(matrix, "ghost"), ValidationError);
}

TEST_CASE("synthetic backend is deterministic and order-independent") {
  SyntheticExaminee examinee;
  examinee.true_theta = 0.6;
  examinee.seed = 42;
  examinee.true_params["t1"] = {2.0, 0.3};
  examinee.true_params["t2"] = {2.0, 0.8};

  auto first = synthetic_backend(examinee);
  auto second = synthetic_backend(examinee);
  const long t1 = first->prove("t1", std::nullopt, 128);
  const long t2 = first->prove("t2", std::nullopt, 128);
  // querying in the opposite order must not change either theorem's outcome
  CHECK(second->prove("t2", std::nullopt, 128) == t2);
  CHECK(second->prove("t1", std::nullopt, 128) == t1);

  // repeated calls on one theorem advance that theorem's stream
  auto third = synthetic_backend(examinee);
  CHECK(third->prove("t1", std::nullopt, 128) == t1);

  CHECK_THROWS_AS(first->prove("unknown", std::nullopt, 128), BackendError);
}

TEST_CASE("synthetic backend draws from the two-parameter logistic law") {
  // true_theta == b gives success probability one half
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SyntheticExaminee examinee;
    examinee.true_theta = 0.5;
    examinee.seed = seed;
    examinee.true_params["t"] = {3.0, 0.5};
    total += static_cast<double>(synthetic_backend(examinee)->prove("t", std::nullopt, 128));
  }
  CHECK(std::fabs(total / 200.0 - 64.0) < 1.5);

  // zero discrimination degenerates to a fair coin whatever the ability gap
  double flat = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SyntheticExaminee examinee;
    examinee.true_theta = 0.95;
    examinee.seed = 1000 + seed;
    examinee.true_params["t"] = {0.0, 0.05};
    flat += static_cast<double>(synthetic_backend(examinee)->prove("t", std::nullopt, 128));
  }
  CHECK(std::fabs(flat / 200.0 - 64.0) < 1.5);

  // empirical rate tracks p_2pl away from the midpoint too
  const double p = p_2pl(0.8, 2.5, 0.4);
  double skew = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SyntheticExaminee examinee;
    examinee.true_theta = 0.8;
    examinee.seed = 2000 + seed;
    examinee.true_params["t"] = {2.5, 0.4};
    skew += static_cast<double>(synthetic_backend(examinee)->prove("t", std::nullopt, 128));
  }
  CHECK(std::fabs(skew / (200.0 * 128.0) - p) < 3.0 * std::sqrt(p * (1 - p) / (200.0 * 128.0)));
}

TEST_CASE("external backend speaks one JSON request per invocation") {
  TempDir dir;
  // echo the theorem id back with a fixed share of successes
  auto responder = write_file(dir.file("half.py"),
                              "import json,sys\n"
                              "req=json.load(sys.stdin)\n"
                              "print(json.dumps({'theorem_id':req['theorem_id'],"
                              "'successes':req['attempts']//2}))\n");
  auto backend = external_backend("python3 " + responder.string(),
                                  std::chrono::milliseconds(10000));
  CHECK(backend->prove("t1", std::nullopt, 128) == 64);
  CHECK(backend->prove("t1", "statement text", 10) == 5);
  CHECK_FALSE(backend->traits().deterministic);

  auto all = write_file(dir.file("all.py"),
                        "import json,sys\n"
                        "req=json.load(sys.stdin)\n"
                        "print(json.dumps({'theorem_id':req['theorem_id'],"
                        "'successes':req['attempts']}))\n");
  CHECK(external_backend("python3 " + all.string(), std::chrono::milliseconds(10000))
            ->prove("t", std::nullopt, 7) == 7);

  auto none = write_file(dir.file("none.py"),
                         "import json,sys\n"
                         "req=json.load(sys.stdin)\n"
                         "print(json.dumps({'theorem_id':req['theorem_id'],'successes':0}))\n");
  CHECK(external_backend("python3 " + none.string(), std::chrono::milliseconds(10000))
            ->prove("t", std::nullopt, 7) == 0);
}

TEST_CASE("external backend failure modes become backend errors") {
  TempDir dir;

  auto slow = external_backend("sleep 2", std::chrono::milliseconds(1000));
  try {
    slow->prove("slow_theorem", std::nullopt, 8);
    FAIL("timeout not raised");
  } catch (const BackendError& error) {
    CHECK(std::string(error.what()).find("slow_theorem") != std::string::npos);
  }

  auto failing = external_backend("exit 7", std::chrono::milliseconds(5000));
  CHECK_THROWS_AS(failing->prove("t", std::nullopt, 8), BackendError);

  auto garbage = external_backend("echo not-json", std::chrono::milliseconds(5000));
  CHECK_THROWS_AS(garbage->prove("t", std::nullopt, 8), BackendError);

  auto wrong_id = write_file(dir.file("wrong.py"),
                             "import json,sys\n"
                             "json.load(sys.stdin)\n"
                             "print(json.dumps({'theorem_id':'other','successes':0}))\n");
  CHECK_THROWS_AS(external_backend("python3 " + wrong_id.string(),
                                   std::chrono::milliseconds(10000))
                      ->prove("t", std::nullopt, 8),
                  BackendError);

  auto overflow = write_file(dir.file("over.py"),
                             "import json,sys\n"
                             "req=json.load(sys.stdin)\n"
                             "print(json.dumps({'theorem_id':req['theorem_id'],"
                             "'successes':req['attempts']+1}))\n");
  CHECK_THROWS_AS(external_backend("python3 " + overflow.string(),
                                   std::chrono::milliseconds(10000))
                      ->prove("t", std::nullopt, 8),
                  BackendError);
}

TEST_CASE("cache measures once per key and exposes counters") {
  StubBackend stub;
  stub.answer = 9;
  CachedBackend cache(stub);

  CHECK(cache.prove("t1", std::nullopt, 128) == 9);
  CHECK(cache.prove("t1", std::nullopt, 128) == 9);
  CHECK(cache.prove("t1", std::nullopt, 128) == 9);
  CHECK(stub.calls == 1);
  CHECK(cache.hits() == 2);
  CHECK(cache.misses() == 1);

  // distinct theorems and distinct budgets get their own entries
  cache.prove("t2", std::nullopt, 128);
  cache.prove("t1", std::nullopt, 64);
  CHECK(stub.calls == 3);
  CHECK(cache.misses() == 3);
}

TEST_CASE("cache does not store failures") {
  StubBackend stub;
  stub.answer = 4;
  stub.fail_next = true;
  CachedBackend cache(stub);

  CHECK_THROWS_AS(cache.prove("t", std::nullopt, 8), BackendError);
  // the backend recovered, so the retry delegates and succeeds
  CHECK(cache.prove("t", std::nullopt, 8) == 4);
  CHECK(stub.calls == 2);
  CHECK(cache.prove("t", std::nullopt, 8) == 4);
  CHECK(stub.calls == 2);
}

TEST_CASE("cache serializes concurrent first calls per key") {
  struct SlowBackend final : ExamineeBackend {
    std::atomic<long> calls{0};
    long prove(const std::string&, const std::optional<std::string>&, long) override {
      ++calls;
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      return 3;
    }
    BackendTraits traits() const override { return {true, true}; }
  };
  SlowBackend slow;
  CachedBackend cache(slow);

  std::vector<std::thread> threads;
  std::vector<long> results(8, -1);
  for (int i = 0; i < 8; ++i)
    threads.emplace_back([&cache, &results, i] {
      results[static_cast<std::size_t>(i)] = cache.prove("t", std::nullopt, 128);
    });
  for (std::thread& thread : threads) thread.join();

  CHECK(slow.calls == 1);
  for (long result : results) CHECK(result == 3);
}

TEST_CASE("synthetic bank generation is seeded and well-formed") {
  ItemBank bank = make_synthetic_bank(488, 20260814);
  CHECK(bank.items.size() == 488);

  std::set<std::string> ids;
  double min_b = 1.0;
  double max_b = 0.0;
  for (const ItemParams& item : bank.items) {
    ids.insert(item.theorem_id);
    CHECK(item.difficulty > 0.0);
    CHECK(item.difficulty < 1.0);
    CHECK(item.discrimination >= 0.85);
    CHECK(item.discrimination <= 1.0);
    CHECK_FALSE(item.zero_success);
    CHECK(item.level >= 1);
    min_b = std::min(min_b, item.difficulty);
    max_b = std::max(max_b, item.difficulty);
  }
  CHECK(ids.size() == 488);
  // the jittered grid covers essentially the whole unit interval
  CHECK(min_b < 0.05);
  CHECK(max_b > 0.95);

  ItemBank again = make_synthetic_bank(488, 20260814);
  REQUIRE(again.items.size() == bank.items.size());
  for (std::size_t i = 0; i < bank.items.size(); ++i) {
    CHECK(again.items[i].theorem_id == bank.items[i].theorem_id);
    CHECK(again.items[i].difficulty == bank.items[i].difficulty);
    CHECK(again.items[i].discrimination == bank.items[i].discrimination);
  }
  ItemBank other = make_synthetic_bank(488, 1);
  bool differs = false;
  for (std::size_t i = 0; i < bank.items.size(); ++i)
    if (other.items[i].difficulty != bank.items[i].difficulty) differs = true;
  CHECK(differs);

  CHECK_THROWS_AS(make_synthetic_bank(1, 0), ValidationError);
}
