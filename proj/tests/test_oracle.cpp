#include <doctest.h>

#include <random>

#include "invariants.hpp"
#include "risadmit/errors.hpp"
#include "risadmit/oracle.hpp"

using namespace risadmit;

namespace {

Scenario small(int n, std::uint64_t seed, int sectors = 2) {
  ScenarioConfig cfg;
  cfg.user_count = n;
  cfg.sector_count = sectors;
  if (n == 0) {
    cfg.user_count = 1;
    Scenario s = generate_scenario(cfg, seed);
    s.users.clear();
    return s;
  }
  return generate_scenario(cfg, seed);
}

}  // namespace

TEST_CASE("empty instance") {
  const Scenario s = small(0, 1);
  const OracleResult r = exhaustive_optimal(s, {}, {});
  CHECK(r.best_objective == 0.0);
  CHECK(r.best_decisions.empty());
  CHECK(r.explored_count == 1);
}

TEST_CASE("single feasible user is admitted") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Scenario s = small(1, seed);
    const OracleResult r = exhaustive_optimal(s, {}, {});
    const auto alone = ExhaustiveOracle(s, {}, {}).score({1});
    if (alone.feasible) {
      CHECK(r.best_decisions[0].admitted);
      CHECK(r.best_objective > 0.0);
    } else {
      CHECK_FALSE(r.best_decisions[0].admitted);
    }
  }
}

TEST_CASE("oracle dominates greedy and certifies its own optimum") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    for (int n : {4, 6, 8}) {
      const Scenario s = small(n, seed * 31 + static_cast<std::uint64_t>(n), 2 + static_cast<int>(seed % 2));
      const AdmissionConfig cfg;
      const OracleResult o = exhaustive_optimal(s, cfg, {});
      const AdmissionPlan plan = plan_admission(s, cfg, {});
      const AdmissionResult g = greedy_admission(s, plan, cfg);
      CHECK(g.objective <= o.best_objective + 1e-9 * std::abs(o.best_objective));
      CHECK(o.explored_count == (std::int64_t{1} << n));

      // The winning vector is feasible under the admission module's own checks.
      std::vector<std::uint8_t> x;
      for (const auto& d : o.best_decisions) x.push_back(d.admitted ? 1 : 0);
      const DecisionEvaluation e = evaluate_decisions(s, plan, cfg, x);
      CHECK(e.feasible);
      CHECK(testing::result_violations(s, plan, e.result).empty());
      CHECK(e.result.objective == doctest::Approx(o.best_objective).epsilon(1e-12));
    }
  }
}

TEST_CASE("worker count does not change the answer") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Scenario s = small(9, seed, 3);
    OracleOptions one;
    OracleOptions many;
    many.workers = 3;
    const OracleResult a = exhaustive_optimal(s, {}, {}, one);
    const OracleResult b = exhaustive_optimal(s, {}, {}, many);
    CHECK(a.best_objective == b.best_objective);
    CHECK(a.best_decisions == b.best_decisions);
    CHECK(a.explored_count == b.explored_count);
    CHECK(a.feasible_count == b.feasible_count);
  }
}

TEST_CASE("bandwidth pruning skips only over-capacity subsets") {
  Scenario s = small(8, 4);
  double total = 0;
  for (const auto& u : s.users) total += u.bandwidth_demand;
  s.bandwidth_capacity = 0.5 * total;
  OracleOptions pruned;
  pruned.prune = true;
  const OracleResult full = exhaustive_optimal(s, {}, {});
  const OracleResult cut = exhaustive_optimal(s, {}, {}, pruned);

  std::int64_t over = 0;
  for (unsigned mask = 0; mask < 256; ++mask) {
    double bw = 0;
    for (int i = 0; i < 8; ++i) {
      if ((mask >> i) & 1U) bw += s.users[static_cast<std::size_t>(i)].bandwidth_demand;
    }
    if (bw > s.bandwidth_capacity) ++over;
  }
  CHECK(over > 0);
  CHECK(full.explored_count == 256);
  CHECK(cut.explored_count == 256 - over);
  CHECK(cut.feasible_count == full.feasible_count);
  CHECK(cut.best_objective == full.best_objective);
}

TEST_CASE("instances over the cap are refused") {
  const Scenario s = small(13, 1);
  CHECK_THROWS_AS(exhaustive_optimal(s, {}, {}), InstanceTooLarge);
  OracleOptions wide;
  wide.max_users = 13;
  CHECK_NOTHROW(exhaustive_optimal(small(5, 1), {}, {}, wide));
}

TEST_CASE("oracle and admission module score random vectors alike") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = small(10, seed, 2 + static_cast<int>(seed % 2));
    for (bool ris : {true, false}) {
      AdmissionConfig cfg;
      cfg.ris_enabled = ris;
      const AdmissionPlan plan = plan_admission(s, cfg, {});
      const ExhaustiveOracle oracle(s, cfg, {});
      for (int k = 0; k < 25; ++k) {
        std::vector<std::uint8_t> x(s.users.size());
        for (auto& v : x) v = rng() & 1U;
        const DecisionEvaluation e = evaluate_decisions(s, plan, cfg, x);
        const SubsetScore o = oracle.score(x);
        CHECK(e.result.objective == doctest::Approx(o.objective).epsilon(1e-12));
        CHECK(e.feasible == o.feasible);
      }
    }
  }
}

TEST_CASE("score rejects a wrong-length vector") {
  const Scenario s = small(3, 1);
  CHECK_THROWS_AS(ExhaustiveOracle(s, {}, {}).score({1, 0}), MismatchedInputs);
}
