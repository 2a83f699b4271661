#include <cmath>
#include <set>

#include <doctest.h>

#include "psel/equiv.hpp"
#include "psel/errors.hpp"
#include "psel/expgen.hpp"
#include "psel/metrics.hpp"
#include "test_util.hpp"

using namespace psel;

TEST_CASE("two-hypothesis penalty matrices are forced") {
  SplitMix64 rng(1);
  const PenaltyMatrix xi = random_penalty_matrix(2, false, rng);
  CHECK(xi.rows() == std::vector<std::vector<double>>{{0.0, 1.0}, {1.0, 0.0}});
}

TEST_CASE("random penalty rows are stochastic with zero diagonal") {
  for (int m : {3, 5, 10, 12}) {
    SplitMix64 rng(derive_seed(401, m));
    const PenaltyMatrix xi = random_penalty_matrix(m, false, rng);
    for (int p = 0; p < m; ++p) {
      CHECK(xi(p, p) == 0.0);
      double sum = 0;
      for (int q = 0; q < m; ++q) {
        sum += xi(p, q);
        CHECK(xi(p, q) >= 0.0);
        CHECK(xi(p, q) <= 1.0);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("unique sampling keeps the ratio bound positive") {
  SplitMix64 rng(derive_seed(402, 0));
  const PenaltyMatrix xi = random_penalty_matrix(10, true, rng);
  CHECK(xi.unique_rows());
  CHECK(gamma_bound(xi).gamma > 0.0);
}

TEST_CASE("random partitions are partitions") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    SplitMix64 rng(derive_seed(403, seed));
    const int m = 2 + static_cast<int>(rng.next_below(8));
    const auto sources = random_partitions(m, 3, rng);
    for (const auto& s : sources) {
      std::set<int> seen;
      for (const auto& block : s.blocks) {
        CHECK_FALSE(block.empty());
        for (int q : block) {
          CHECK(q >= 0);
          CHECK(q < m);
          CHECK(seen.insert(q).second);  // disjoint
        }
      }
      CHECK(static_cast<int>(seen.size()) == m);  // covering
    }
  }
}

TEST_CASE("degenerate partitions behave as expected") {
  HypothesisSet h{{"a", "b", "c"}};
  PenaltyMatrix xi({{0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}});
  std::vector<PartitionModel> sources;
  sources.push_back({1.0, {{0, 1, 2}}});        // one block
  sources.push_back({1.0, {{0}, {1}, {2}}});    // singletons
  const Instance inst =
      Instance::with_partitions(std::move(h), std::move(xi), std::move(sources));
  const EquivTable table(inst);
  for (int q = 0; q < 3; ++q) {
    CHECK(table.single(0, q) == HypoSet::full(3));
    CHECK(table.single(1, q).indices() == std::vector<int>{q});
  }
}

TEST_CASE("gamma-targeted matrices hit the requested bound") {
  SplitMix64 rng(derive_seed(404, 0));
  const PenaltyMatrix half = gamma_targeted_matrix(3, 0.5, rng);
  CHECK(gamma_bound(half).gamma >= 0.5 - 1e-6);
  for (int p = 0; p < 3; ++p) {
    double sum = 0;
    for (int q = 0; q < 3; ++q) sum += half(p, q);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }

  const PenaltyMatrix forced = gamma_targeted_matrix(2, 1.0, rng);
  CHECK(forced.rows() == std::vector<std::vector<double>>{{0.0, 1.0}, {1.0, 0.0}});

  const PenaltyMatrix tenth = gamma_targeted_matrix(10, 0.1, rng);
  const double g = gamma_bound(tenth).gamma;
  CHECK(g >= 0.1 - 1e-6);
  CHECK(g <= 1.0);

  CHECK_THROWS_AS(gamma_targeted_matrix(10, 0.5, rng), Error);
  CHECK_THROWS_AS(gamma_targeted_matrix(3, 0.0, rng), Error);
}

TEST_CASE("experiment spec parsing applies kind defaults") {
  const ExperimentSpec avc = parse_experiment_spec(R"({"kind": "mcis_ratio"})");
  CHECK(avc.m == 10);
  CHECK(avc.n == 10);
  CHECK(avc.threshold_mode == ThresholdMode::AerialSplit);

  const ExperimentSpec sweep = parse_experiment_spec(R"({"kind": "gamma_sweep"})");
  CHECK(sweep.m == 3);
  CHECK(sweep.gamma_targets == std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5});

  const ExperimentSpec custom = parse_experiment_spec(
      R"({"kind": "mpis_ratio", "trials": 7, "m": 4, "n": 5, "master_seed": 99,
          "thresholds": [0.2, 0.9], "budget_range": [2, 6]})");
  CHECK(custom.trials == 7);
  CHECK(custom.threshold_mode == ThresholdMode::Uniform);
  CHECK(custom.budget_lo == 2.0);

  CHECK_THROWS_AS(parse_experiment_spec(R"({"kind": "bogus"})"), InputError);
  CHECK_THROWS_AS(parse_experiment_spec("no json"), InputError);
  CHECK_THROWS_AS(parse_experiment_spec(R"({"kind": "mcis_ratio", "n": 25})"), InputError);
}

TEST_CASE("trivially satisfiable bounds make every ratio one") {
  const ExperimentSpec spec = parse_experiment_spec(
      R"({"kind": "mcis_ratio", "trials": 10, "m": 4, "n": 4,
          "thresholds": [1.0, 1.0], "master_seed": 7})");
  const ExperimentResult result = run_experiment(spec);
  REQUIRE(result.rows.size() == 10);
  for (const auto& row : result.rows) {
    CHECK_FALSE(row.skipped);
    CHECK(row.ratio == 1.0);
    CHECK(row.greedy_value == 0.0);  // both solutions empty
  }
}

TEST_CASE("budgets covering every source make every ratio one") {
  const ExperimentSpec spec = parse_experiment_spec(
      R"({"kind": "mpis_ratio", "trials": 10, "m": 4, "n": 4,
          "budget_range": [1000, 1000], "master_seed": 7})");
  const ExperimentResult result = run_experiment(spec);
  for (const auto& row : result.rows) {
    CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("modified knapsack experiments certify every trial") {
  const ExperimentSpec spec = parse_experiment_spec(
      R"({"kind": "modified_mpis_ratio", "trials": 20, "m": 8, "master_seed": 11})");
  const ExperimentResult result = run_experiment(spec);
  CHECK(result.all_certificates_pass);
  for (const auto& row : result.rows) {
    CHECK(row.cert_pass);
    CHECK(row.ratio <= 1.0 + 1e-12);
    CHECK(row.ratio > 0.0);
  }
}

TEST_CASE("experiments are reproducible byte for byte") {
  const std::string text =
      R"({"kind": "mcis_ratio", "trials": 6, "m": 5, "n": 5, "master_seed": 424242})";
  const ExperimentResult a = run_experiment(parse_experiment_spec(text));
  const ExperimentResult b = run_experiment(parse_experiment_spec(text));
  CHECK(rows_to_csv(a.rows) == rows_to_csv(b.rows));
  CHECK(a.summary_json == b.summary_json);

  ExperimentSpec threaded = parse_experiment_spec(text);
  threaded.threads = 2;
  const ExperimentResult c = run_experiment(threaded);
  CHECK(rows_to_csv(a.rows) == rows_to_csv(c.rows));
}

TEST_CASE("ratio studies keep cost ratios above one and utility ratios below") {
  const ExperimentResult mcis = run_experiment(parse_experiment_spec(
      R"({"kind": "mcis_ratio", "trials": 20, "m": 5, "n": 6, "master_seed": 5})"));
  for (const auto& row : mcis.rows) {
    if (!row.skipped) CHECK(row.ratio >= 1.0 - 1e-12);
  }
  const ExperimentResult mpis = run_experiment(parse_experiment_spec(
      R"({"kind": "mpis_ratio", "trials": 20, "m": 5, "n": 6, "master_seed": 5})"));
  for (const auto& row : mpis.rows) {
    CHECK(row.ratio <= 1.0 + 1e-12);
    CHECK(row.ratio > 0.0);
  }
}

TEST_CASE("gamma sweep emits one distribution per target and algorithm") {
  const ExperimentResult result = run_experiment(parse_experiment_spec(
      R"({"kind": "gamma_sweep", "trials": 4, "master_seed": 31,
          "gamma_targets": [0.1, 0.3, 0.5]})"));
  REQUIRE(result.rows.size() == 24);  // 3 targets x 2 algorithms x 4 trials
  int mcis_rows = 0, mpis_rows = 0;
  for (const auto& row : result.rows) {
    if (row.kind == "gamma_sweep_mcis") ++mcis_rows;
    if (row.kind == "gamma_sweep_mpis") ++mpis_rows;
  }
  CHECK(mcis_rows == 12);
  CHECK(mpis_rows == 12);
  CHECK(result.summary_json.find("per_gamma") != std::string::npos);
  CHECK(result.summary_json.find("mcis_mean_ratio_nonincreasing") != std::string::npos);
}

TEST_CASE("convergence demo reaches the asymptotic profile") {
  const ExperimentSpec spec =
      parse_experiment_spec(R"({"kind": "convergence_demo", "master_seed": 2024})");
  const ExperimentResult result = run_experiment(spec);
  REQUIRE(result.trajectory.size() == 51);
  const std::vector<double> mu = beliefs(result.trajectory.back());
  const EquivTable table(result.demo_instance);
  const std::vector<int> subset = {0, 1};
  const HypoSet F = table.of_set(subset, 0);
  CHECK(F.count() == 5);
  for (int q = 0; q < 10; ++q) {
    if (F.test(q))
      CHECK(std::abs(mu[q] - 0.2) < 1e-3);
    else
      CHECK(mu[q] < 0.01);
  }
  CHECK(result.summary_json.find("final_max_outside_belief") != std::string::npos);
}

TEST_CASE("csv rows carry the fixed column set") {
  TrialRow row;
  row.trial = 3;
  row.seed = 42;
  row.kind = "mcis_ratio";
  row.m = 10;
  row.n = 10;
  row.gamma_bound_value = 0.25;
  row.greedy_value = 7;
  row.opt_value = 7;
  row.ratio = 1;
  row.cert_pass = true;
  TrialRow skip = row;
  skip.trial = 4;
  skip.skipped = true;
  const std::string csv = rows_to_csv({row, skip});
  CHECK(csv == "trial,seed,kind,m,n,gamma_bound,greedy_value,opt_value,ratio,cert_pass\n"
               "3,42,mcis_ratio,10,10,0.25,7,7,1,true\n"
               "4,42,mcis_ratio,10,10,0.25,,,,skip\n");
}
