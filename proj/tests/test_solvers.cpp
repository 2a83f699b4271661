#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "psel/errors.hpp"
#include "psel/solvers.hpp"
#include "test_util.hpp"

using namespace psel;

TEST_CASE("greedy cover walks the unique fixture to the optimum") {
  const Instance inst = testutil::unique_fixture();
  McisProblem prob{&inst, {0, 0, 0}, PenaltyMetric::MaxPenalty};
  const Solution sol = greedy_mcis(prob);

  REQUIRE(sol.trace.size() == 2);
  CHECK(sol.trace[0].picked == 0);  // gain/cost 1.15 beats 0.4
  CHECK(sol.trace[0].marginal == doctest::Approx(1.15).epsilon(1e-12));
  CHECK(sol.trace[1].picked == 1);
  CHECK(sol.selected == std::vector<int>{0, 1});
  CHECK(sol.cost == doctest::Approx(3.0));
  CHECK(sol.score == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sol.score_empty == doctest::Approx(1.15).epsilon(1e-12));

  const Solution opt = brute_force_mcis(prob);
  CHECK(opt.selected == sol.selected);
  CHECK(opt.cost == doctest::Approx(3.0));
}

TEST_CASE("vacuous bounds select nothing") {
  const Instance inst = testutil::unique_fixture();
  McisProblem prob{&inst, {1, 1, 1}, PenaltyMetric::MaxPenalty};
  const Solution sol = greedy_mcis(prob);
  CHECK(sol.selected.empty());
  CHECK(sol.cost == 0.0);
  CHECK(sol.trace.empty());
  CHECK(brute_force_mcis(prob).selected.empty());
}

TEST_CASE("a single sufficient source is taken in one step") {
  HypothesisSet h{{"a", "b", "c"}};
  PenaltyMatrix xi({{0, 0.4, 0.6}, {0.3, 0, 0.7}, {0.45, 0.55, 0}});
  std::vector<PartitionModel> sources;
  sources.push_back({1.0, {{0, 1, 2}}});        // tells nothing
  sources.push_back({5.0, {{0}, {1}, {2}}});    // full discrimination
  sources.push_back({2.0, {{0, 1, 2}}});        // tells nothing
  const Instance inst =
      Instance::with_partitions(std::move(h), std::move(xi), std::move(sources));
  McisProblem prob{&inst, {0, 0, 0}, PenaltyMetric::MaxPenalty};
  const Solution sol = greedy_mcis(prob);
  REQUIRE(sol.trace.size() == 1);
  CHECK(sol.selected == std::vector<int>{1});
  const Solution opt = brute_force_mcis(prob);
  CHECK(opt.selected == sol.selected);
  CHECK(opt.cost == sol.cost);
}

TEST_CASE("minimum-cost selection rejects free or negative sources") {
  Instance inst = testutil::unique_fixture();
  inst.partition_sources[0].cost = 0.0;
  McisProblem prob{&inst, {0, 0, 0}, PenaltyMetric::MaxPenalty};
  CHECK_THROWS_AS(greedy_mcis(prob), Error);
  CHECK_THROWS_AS(brute_force_mcis(prob), Error);
}

TEST_CASE("infeasible bounds raise and name the hypothesis") {
  HypothesisSet h{{"alpha", "beta"}};
  PenaltyMatrix xi({{0, 1}, {1, 0}});
  std::vector<PartitionModel> sources;
  sources.push_back({1.0, {{0, 1}}});  // nothing distinguishable
  const Instance inst =
      Instance::with_partitions(std::move(h), std::move(xi), std::move(sources));
  McisProblem prob{&inst, {0.2, 0.9}, PenaltyMetric::MaxPenalty};
  CHECK_THROWS_WITH_AS(greedy_mcis(prob), doctest::Contains("alpha"), InfeasibleError);
  CHECK_THROWS_AS(brute_force_mcis(prob), InfeasibleError);
}

TEST_CASE("budgeted greedy on the symmetric fixture") {
  const Instance inst = testutil::example1();
  MpisProblem prob{&inst, 1.0, PenaltyMetric::MaxPenalty};
  const Solution sol = greedy_mpis(prob);
  CHECK(sol.selected == std::vector<int>{0});  // tie between 0 and 1 goes low
  CHECK(sol.score == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sol.cost == doctest::Approx(1.0));

  const Solution opt = brute_force_mpis(prob);
  CHECK(opt.objective == doctest::Approx(1.0).epsilon(1e-12));

  MpisProblem zero{&inst, 0.0, PenaltyMetric::MaxPenalty};
  CHECK(greedy_mpis(zero).selected.empty());
  CHECK(greedy_mpis(zero).score == doctest::Approx(1.5).epsilon(1e-12));

  MpisProblem all{&inst, 10.0, PenaltyMetric::MaxPenalty};
  CHECK(greedy_mpis(all).selected == std::vector<int>{0, 1});
}

TEST_CASE("free sources are taken before paid ones") {
  HypothesisSet h{{"a", "b", "c"}};
  PenaltyMatrix xi({{0, 0.4, 0.6}, {0.3, 0, 0.7}, {0.45, 0.55, 0}});
  std::vector<PartitionModel> sources;
  sources.push_back({1.0, {{0}, {1}, {2}}});
  sources.push_back({0.0, {{0, 1}, {2}}});
  const Instance inst =
      Instance::with_partitions(std::move(h), std::move(xi), std::move(sources));
  MpisProblem prob{&inst, 1.0, PenaltyMetric::MaxPenalty};
  const Solution sol = greedy_mpis(prob);
  REQUIRE(sol.trace.size() == 2);
  CHECK(sol.trace[0].picked == 1);  // the free source, despite the smaller gain
  CHECK(sol.trace[1].picked == 0);
}

TEST_CASE("negative budget is rejected") {
  const Instance inst = testutil::example1();
  CHECK_THROWS_AS(greedy_mpis(MpisProblem{&inst, -0.5, PenaltyMetric::MaxPenalty}), Error);
}

TEST_CASE("greedy respects budget and never repeats a source") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(derive_seed(83, seed));
    const int m = 3 + static_cast<int>(rng.next_below(5));
    const int n = 2 + static_cast<int>(rng.next_below(6));
    const Instance inst = random_partition_instance(m, n, false, 1, 10, rng);
    double total = 0;
    for (int i = 0; i < n; ++i) total += inst.source_cost(i);
    const double budget = rng.next_real(0, total);
    const Solution sol = greedy_mpis(MpisProblem{&inst, budget, PenaltyMetric::MaxPenalty});
    CHECK(sol.cost <= budget + 1e-9);
    std::vector<int> dedup = sol.selected;
    std::sort(dedup.begin(), dedup.end());
    CHECK(std::adjacent_find(dedup.begin(), dedup.end()) == dedup.end());
  }
}

TEST_CASE("feasible greedy cover satisfies every constraint") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SplitMix64 rng(derive_seed(89, seed));
    const int m = 3 + static_cast<int>(rng.next_below(4));
    const int n = 2 + static_cast<int>(rng.next_below(5));  // up to 6
    const PenaltyMetric metric =
        seed % 2 ? PenaltyMetric::TotalPenalty : PenaltyMetric::MaxPenalty;
    const Instance inst = random_partition_instance(m, n, false, 1, 5, rng);
    const EquivTable table(inst);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<double> bounds(m);
    for (int p = 0; p < m; ++p) {
      const HypoSet F = table.of_set(all, p);
      const double worst = metric == PenaltyMetric::MaxPenalty
                               ? row_max_penalty(inst.penalties, p, F)
                               : row_total_penalty(inst.penalties, p, F);
      bounds[p] = std::min(1.0, worst + (1.0 - worst) * rng.next_double());
    }
    const Solution sol = greedy_mcis(McisProblem{&inst, bounds, metric});
    for (int p = 0; p < m; ++p) {
      const HypoSet F = table.of_set(sol.selected, p);
      const double achieved = metric == PenaltyMetric::MaxPenalty
                                  ? row_max_penalty(inst.penalties, p, F)
                                  : row_total_penalty(inst.penalties, p, F);
      CHECK(achieved <= bounds[p] + 1e-9);
    }
  }
}

TEST_CASE("cover cost certificate on the unique fixture") {
  const Instance inst = testutil::unique_fixture();
  McisProblem prob{&inst, {0, 0, 0}, PenaltyMetric::MaxPenalty};
  const Solution greedy = greedy_mcis(prob);
  const Solution opt = brute_force_mcis(prob);
  const double gamma = gamma_bound(inst.penalties).gamma;
  REQUIRE(gamma > 0);
  const Certificate cert = mcis_guarantee(greedy, opt.cost, gamma);
  CHECK(cert.available);
  CHECK(cert.passes);
  CHECK(cert.bound >= greedy.cost);
}

TEST_CASE("single-step greedy bound collapses to the optimal cost") {
  HypothesisSet h{{"a", "b", "c"}};
  PenaltyMatrix xi({{0, 0.4, 0.6}, {0.3, 0, 0.7}, {0.45, 0.55, 0}});
  std::vector<PartitionModel> sources;
  sources.push_back({3.0, {{0}, {1}, {2}}});
  sources.push_back({1.0, {{0, 1, 2}}});
  const Instance inst =
      Instance::with_partitions(std::move(h), std::move(xi), std::move(sources));
  McisProblem prob{&inst, {0, 0, 0}, PenaltyMetric::MaxPenalty};
  const Solution greedy = greedy_mcis(prob);
  REQUIRE(greedy.trace.size() == 1);
  const Solution opt = brute_force_mcis(prob);
  const Certificate cert = mcis_guarantee(greedy, opt.cost, 0.25);
  CHECK(cert.bound == doctest::Approx(opt.cost).epsilon(1e-12));  // log of 1
  CHECK(cert.passes);
}

TEST_CASE("degenerate ratio yields no certificate") {
  const Instance inst = testutil::example1();
  McisProblem prob{&inst, {0, 0, 0}, PenaltyMetric::MaxPenalty};
  const Solution greedy = greedy_mcis(prob);
  const Solution opt = brute_force_mcis(prob);
  const double gamma = gamma_bound(inst.penalties).gamma;
  CHECK(gamma == 0.0);
  const Certificate cert = mcis_guarantee(greedy, opt.cost, gamma);
  CHECK_FALSE(cert.available);
  CHECK(cert.note == "no certificate (gamma = 0)");
}

TEST_CASE("knapsack certificate is vacuously valid at gamma zero") {
  const Instance inst = testutil::example1();
  MpisProblem prob{&inst, 1.0, PenaltyMetric::MaxPenalty};
  const Solution greedy = greedy_mpis(prob);
  const Certificate cert = mpis_guarantee(greedy, brute_force_mpis(prob).score, 0.0);
  CHECK(cert.available);
  CHECK(cert.bound == doctest::Approx(1.5).epsilon(1e-12));  // empty-set utility
  CHECK(cert.passes);
}

TEST_CASE("total-penalty knapsack bound holds on random instances") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SplitMix64 rng(derive_seed(97, seed));
    const int m = 3 + static_cast<int>(rng.next_below(6));
    const int n = 3 + static_cast<int>(rng.next_below(6));
    const Instance inst = random_partition_instance(m, n, false, 1, 10, rng);
    double total = 0;
    for (int i = 0; i < n; ++i) total += inst.source_cost(i);
    MpisProblem prob{&inst, rng.next_real(1.0, total), PenaltyMetric::TotalPenalty};
    const Solution greedy = greedy_mpis(prob);
    const Solution opt = brute_force_mpis(prob);
    const Certificate cert = mpis_guarantee(greedy, opt.score, 1.0);
    CHECK(cert.passes);
  }
}

TEST_CASE("greedy cover cost stays within the provable weak-submodular factor") {
  // cost(greedy) <= (1 + ln[(zD - z0)/(zD - z_penult)]) * cost(opt) / gamma.
  // This form follows from the per-step recursion; the reported certificate
  // applies 1/gamma to the log term only and can fail when greedy saturates
  // in one step (see the pinned counterexample below).
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SplitMix64 rng(derive_seed(101, seed));
    const int m = 3 + static_cast<int>(rng.next_below(5));
    const int n = 2 + static_cast<int>(rng.next_below(7));  // up to 8
    const Instance inst = random_partition_instance(m, n, true, 1, 10, rng);
    const EquivTable table(inst);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::vector<double> bounds(m);
    for (int p = 0; p < m; ++p) {
      const double worst = row_max_penalty(inst.penalties, p, table.of_set(all, p));
      bounds[p] = std::min(1.0, worst + (1.0 - worst) * rng.next_double());
    }
    McisProblem prob{&inst, bounds, PenaltyMetric::MaxPenalty};
    const Solution greedy = greedy_mcis(prob);
    const Solution opt = brute_force_mcis(prob);
    const double gamma = gamma_bound(inst.penalties).gamma;
    REQUIRE(gamma > 0);
    double log_term = 0.0;
    const std::size_t T = greedy.trace.size();
    if (T >= 1) {
      const double z_penult = T >= 2 ? greedy.trace[T - 2].value : greedy.score_empty;
      log_term = std::log((greedy.score_full - greedy.score_empty) /
                          (greedy.score_full - z_penult));
    }
    CHECK(greedy.cost <= (1.0 + log_term) * opt.cost / gamma + 1e-9);
  }
}

TEST_CASE("one-step greedy can exceed the optimal cost under weak submodularity") {
  // Pinned instance: greedy saturates coverage with one cost-6 source while
  // a cost-4 pair is optimal, so the reported cover_cost certificate (whose
  // log term vanishes at T = 1) detects and reports the violation.
  SplitMix64 rng(derive_seed(1, 75));
  const int m = 3 + static_cast<int>(rng.next_below(8));
  const int n = 3 + static_cast<int>(rng.next_below(8));
  REQUIRE(m == 8);
  REQUIRE(n == 9);
  const Instance inst = random_partition_instance(m, n, true, 1, 10, rng);
  const EquivTable table(inst);
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  std::vector<double> bounds(m);
  for (int p = 0; p < m; ++p) {
    const double worst = row_max_penalty(inst.penalties, p, table.of_set(all, p));
    bounds[p] = std::min(1.0, worst + (1.0 - worst) * rng.next_double());
  }
  McisProblem prob{&inst, bounds, PenaltyMetric::MaxPenalty};
  const Solution greedy = greedy_mcis(prob);
  const Solution opt = brute_force_mcis(prob);
  REQUIRE(greedy.trace.size() == 1);
  CHECK(greedy.cost == doctest::Approx(6.0));
  CHECK(opt.cost == doctest::Approx(4.0));
  const Certificate cert = mcis_guarantee(greedy, opt.cost, gamma_bound(inst.penalties).gamma);
  CHECK(cert.available);
  CHECK_FALSE(cert.passes);  // honest report, not a solver defect
}

TEST_CASE("solvers are deterministic") {
  SplitMix64 rng(derive_seed(103, 0));
  const Instance inst = random_partition_instance(5, 6, false, 1, 10, rng);
  MpisProblem prob{&inst, 12.0, PenaltyMetric::MaxPenalty};
  const Solution a = greedy_mpis(prob);
  const Solution b = greedy_mpis(prob);
  CHECK(a.selected == b.selected);
  CHECK(a.score == b.score);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].picked == b.trace[i].picked);
    CHECK(a.trace[i].marginal == b.trace[i].marginal);
  }
}

TEST_CASE("brute force ties break toward cheap lexicographic subsets") {
  HypothesisSet h{{"a", "b"}};
  PenaltyMatrix xi({{0, 1}, {1, 0}});
  std::vector<PartitionModel> sources;
  sources.push_back({2.0, {{0}, {1}}});
  sources.push_back({2.0, {{0}, {1}}});
  const Instance inst =
      Instance::with_partitions(std::move(h), std::move(xi), std::move(sources));
  McisProblem mcis{&inst, {0, 0}, PenaltyMetric::MaxPenalty};
  CHECK(brute_force_mcis(mcis).selected == std::vector<int>{0});
  MpisProblem mpis{&inst, 4.0, PenaltyMetric::MaxPenalty};
  CHECK(brute_force_mpis(mpis).selected == std::vector<int>{0});  // same utility, less cost
}

TEST_CASE("brute force rejects oversized instances") {
  SplitMix64 rng(derive_seed(107, 0));
  const Instance inst = random_partition_instance(3, 21, false, 1, 2, rng);
  McisProblem prob{&inst, {1, 1, 1}, PenaltyMetric::MaxPenalty};
  CHECK_THROWS_AS(brute_force_mcis(prob), SizeError);
  CHECK_THROWS_AS(brute_force_mpis(MpisProblem{&inst, 5, PenaltyMetric::MaxPenalty}), SizeError);
}

TEST_CASE("solvers handle hypothesis sets beyond one bitset word") {
  const int m = 70;
  HypothesisSet h;
  for (int q = 0; q < m; ++q) h.labels.push_back("h" + std::to_string(q));
  SplitMix64 rng(derive_seed(109, 0));
  PenaltyMatrix xi = random_penalty_matrix(m, false, rng);
  std::vector<std::vector<int>> pair_blocks;
  for (int q = 0; q < 35; ++q) pair_blocks.push_back({q, q + 35});
  std::vector<std::vector<int>> coarse_blocks = {{}, {}};
  for (int q = 0; q < m; ++q) coarse_blocks[q % 2].push_back(q);
  std::vector<PartitionModel> sources;
  sources.push_back({2.0, pair_blocks});
  sources.push_back({1.0, coarse_blocks});
  const Instance inst =
      Instance::with_partitions(std::move(h), std::move(xi), std::move(sources));
  REQUIRE(validate(inst).empty());

  MpisProblem prob{&inst, 3.0, PenaltyMetric::TotalPenalty};
  const Solution greedy = greedy_mpis(prob);
  const Solution opt = brute_force_mpis(prob);
  CHECK(greedy.selected == std::vector<int>{0, 1});
  CHECK(greedy.score == doctest::Approx(opt.score));
  const Certificate cert = mpis_guarantee(greedy, opt.score, 1.0);
  CHECK(cert.passes);
}

TEST_CASE("solution serializes with certificate and trace") {
  const Instance inst = testutil::unique_fixture();
  McisProblem prob{&inst, {0, 0, 0}, PenaltyMetric::MaxPenalty};
  Solution sol = greedy_mcis(prob);
  sol.certificate = mcis_guarantee(sol, brute_force_mcis(prob).cost,
                                   gamma_bound(inst.penalties).gamma);
  const std::string text = solution_to_json(sol, "mcis", PenaltyMetric::MaxPenalty);
  CHECK(text.find("\"selected\"") != std::string::npos);
  CHECK(text.find("\"trace\"") != std::string::npos);
  CHECK(text.find("\"gamma\"") != std::string::npos);
}
