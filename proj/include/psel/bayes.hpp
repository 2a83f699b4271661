#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "psel/equiv.hpp"
#include "psel/model.hpp"
#include "psel/rng.hpp"

namespace psel {

// Posterior over hypotheses kept in log space so that hundreds of likelihood
// products never underflow; normalized after every update.
struct BeliefState {
  std::vector<double> log_belief;
  long t = 0;
  std::vector<int> subset;
};

BeliefState uniform_prior(const Instance& inst, std::vector<int> subset);

// Probability-space beliefs of a state; sums to 1 within 1e-9.
std::vector<double> beliefs(const BeliefState& state);

// One Bayes step: adds per-source log likelihoods of the joint observation
// (indices aligned with state.subset), renormalizes, increments t.
void bayes_update(BeliefState& state, const Instance& inst, std::span<const int> observation);

// Draws one joint observation under the true hypothesis; coordinates are
// independent across sources. Deterministic given the generator state.
std::vector<int> sample_observation(const Instance& inst, std::span<const int> subset,
                                    int true_theta, SplitMix64& rng);

// ceil((2 L^2 / eps^2) ln(2/delta)): samples after which empirical
// log-likelihood-ratio averages are eps-accurate with probability 1-delta.
long long sample_complexity_n(double delta, double epsilon, double L);

// ceil(max{ 2L^2/eps^2 ln(2/delta), ln(1/mu_th)/k_min }) where k_min is the
// caller's min over hypothesis pairs of |K(p,q) - eps|. After this many
// samples, beliefs outside the equivalence set stay below mu_th with
// probability 1-delta.
long long sample_complexity_threshold(double delta, double epsilon, double L, double mu_th,
                                      double k_min);

struct StepDiagnostics {
  long t = 0;
  double gap_in_f = 0;         // max - min belief inside the equivalence set
  double max_out_belief = 0;   // largest belief outside it
  bool decay_bounds_ok = true; // mu_t(q) <= exp(-t |K(p,q) - eps|) for all q outside
};

struct RunDiagnostics {
  int true_theta = 0;
  std::vector<int> subset;
  HypoSet equivalence_set;
  double L = 0;
  double delta = 0;
  double epsilon = 0;
  double mu_th = 0;
  double k_min_positive = 0;          // smallest positive joint KL over ordered pairs
  double k_min_abs = 0;               // min over ordered pairs of |K(p,q) - eps|
  long long sample_count_n = -1;      // -1 when no pair is distinguishable
  long long sample_count_threshold = -1;
  std::vector<int> out_members;       // hypotheses outside the equivalence set
  std::vector<double> kl_out;         // joint KL from true theta to each out member
  std::vector<double> k_hat_final;    // empirical KL estimate at the horizon
  std::vector<bool> epsilon_ge_kl;    // flagged: |K - eps| is non-monotone there
  std::vector<StepDiagnostics> steps;
};

struct SimulationResult {
  std::vector<BeliefState> trajectory;  // index = t, starting at the prior
  RunDiagnostics diag;
};

struct SimulateOptions {
  double delta = 0.1;
  double mu_th = 0.01;
  double epsilon = -1;  // <= 0: defaults to half the smallest positive joint KL
  double equiv_tol = kEquivKlTol;
};

// Samples `horizon` i.i.d. joint observations under the true hypothesis
// (uniform prior) and records the belief trajectory plus the per-step
// equal-inside / exponential-decay-outside diagnostics.
SimulationResult simulate_run(const Instance& inst, std::span<const int> subset, int true_theta,
                              long horizon, std::uint64_t seed, SimulateOptions opts = {});

// Limit beliefs: 1/|F| on members of the equivalence set, 0 elsewhere.
std::vector<double> asymptotic_belief(const EquivTable& table, std::span<const int> subset,
                                      int true_theta);
std::vector<double> asymptotic_belief(const Instance& inst, std::span<const int> subset,
                                      int true_theta);

// CSV columns: t,hypothesis,belief.
void write_trajectory_csv(std::ostream& os, const Instance& inst,
                          const std::vector<BeliefState>& trajectory);

std::string diagnostics_to_json(const Instance& inst, const RunDiagnostics& diag);

}  // namespace psel
