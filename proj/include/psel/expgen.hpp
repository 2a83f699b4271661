#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "psel/bayes.hpp"
#include "psel/model.hpp"
#include "psel/rng.hpp"

namespace psel {

// Zero-diagonal row-stochastic matrix with uniformly sampled off-diagonal
// mass. With `unique`, rows are resampled until all entries (diagonal
// included) are pairwise at least 1e-3 apart, which keeps gamma_bound
// strictly positive.
PenaltyMatrix random_penalty_matrix(int m, bool unique, SplitMix64& rng);

// One independent random partition per source: each hypothesis lands in one
// of ceil(m/2) block slots, empty slots are dropped. Costs default to 1.
std::vector<PartitionModel> random_partitions(int m, int n, SplitMix64& rng);

// Matrix whose closed-form ratio bound comes out at gamma_target: every row
// shares one multiset of values whose smallest pairwise gap is
// gamma_target times its largest. Infeasible when gamma_target exceeds
// 1/(m-1), the structural maximum for m >= 3. m = 2 always yields [[0,1],[1,0]].
PenaltyMatrix gamma_targeted_matrix(int m, double gamma_target, SplitMix64& rng);

// Partition-backed random instance: random matrix, random partitions,
// integer costs uniform in [cost_lo, cost_hi].
Instance random_partition_instance(int m, int n, bool unique_penalties, int cost_lo, int cost_hi,
                                   SplitMix64& rng);

// Likelihood source realizing a given partition: hypotheses in one block
// share a column, distinct blocks get well-separated peaked distributions.
SourceModel block_likelihood_source(const std::vector<std::vector<int>>& blocks, int m,
                                    double cost, double peak = 0.7);

// Ten-hypothesis likelihood instance whose two sources jointly leave
// {0,1,5,7,8} indistinguishable from hypothesis 0; used by the belief
// convergence demo. Deterministic.
Instance convergence_demo_instance();

enum class ExperimentKind {
  McisRatio,
  MpisRatio,
  ModifiedMcisRatio,
  ModifiedMpisRatio,
  GammaSweep,
  ConvergenceDemo,
};

enum class ThresholdMode {
  AerialSplit,    // ten-class aerial-vehicle setup: benign [0.7,1], critical [0.1,0.4]
  Uniform,        // one range for every hypothesis
  PerHypothesis,  // explicit range per hypothesis
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::McisRatio;
  int trials = 100;
  int m = 10;
  int n = 10;
  int cost_lo = 1;
  int cost_hi = 10;
  ThresholdMode threshold_mode = ThresholdMode::AerialSplit;
  bool thresholds_explicit = false;  // set when the experiment document chose a mode
  double threshold_lo = 0;
  double threshold_hi = 1;
  std::vector<std::pair<double, double>> per_hypothesis_ranges;
  double budget_lo = -1;  // < 0: derived from sampled costs
  double budget_hi = -1;
  std::vector<double> gamma_targets;
  std::uint64_t master_seed = 0;
  long horizon = 50;  // convergence demo
  int threads = 1;
};

ExperimentSpec parse_experiment_spec(const std::string& json_text);
ExperimentSpec load_experiment_spec(const std::string& path);

struct TrialRow {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string kind;
  int m = 0;
  int n = 0;
  double gamma_bound_value = 0;
  double greedy_value = 0;  // MCIS kinds: greedy cost; MPIS kinds: greedy utility
  double opt_value = 0;
  double ratio = 1;         // cost ratio >= 1 resp. utility ratio <= 1
  bool cert_pass = true;
  bool skipped = false;     // no feasible thresholds found within the retry budget
};

struct ExperimentResult {
  std::vector<TrialRow> rows;
  std::string summary_json;
  bool all_certificates_pass = true;
  // ConvergenceDemo output instead of rows:
  Instance demo_instance;
  std::vector<BeliefState> trajectory;
};

// Runs the batch with per-trial seeds derived from the master seed, so the
// result is byte-identical regardless of thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// CSV columns: trial,seed,kind,m,n,gamma_bound,greedy_value,opt_value,ratio,cert_pass.
void write_rows_csv(std::ostream& os, const std::vector<TrialRow>& rows);
std::string rows_to_csv(const std::vector<TrialRow>& rows);

extern const std::vector<std::string> kAerialClasses;
extern const std::vector<int> kAerialCriticalClasses;

}  // namespace psel
