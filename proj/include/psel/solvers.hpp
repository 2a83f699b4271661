#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psel/metrics.hpp"

namespace psel {

// Minimum-cost selection: cheapest source set keeping each hypothesis'
// penalty (max or total, by metric) within its bound.
struct McisProblem {
  const Instance* instance = nullptr;
  std::vector<double> bounds;  // one per hypothesis, in [0,1]
  PenaltyMetric metric = PenaltyMetric::MaxPenalty;
  double equiv_tol = kEquivKlTol;
};

// Budgeted selection: minimize the summed per-hypothesis penalty subject to
// total cost <= budget.
struct MpisProblem {
  const Instance* instance = nullptr;
  double budget = 0;
  PenaltyMetric metric = PenaltyMetric::MaxPenalty;
  double equiv_tol = kEquivKlTol;
};

struct TraceStep {
  int picked = -1;
  double marginal = 0;  // gain of the driving set function
  double value = 0;     // set-function value after the pick
};

struct Certificate {
  bool available = false;
  double gamma = 0;
  double bound = 0;
  bool passes = false;
  std::string formula;  // "cover_cost" or "knapsack_utility"
  std::string note;
};

struct Solution {
  std::vector<int> selected;  // ascending
  double cost = 0;
  double objective = 0;    // MCIS: coverage value z(I); MPIS: summed penalty
  double score = 0;        // driving set-function value at `selected`
  double score_empty = 0;  // value at the empty set
  double score_full = 0;   // MCIS: saturation target z(D); MPIS: equals score
  std::vector<TraceStep> trace;
  std::optional<Certificate> certificate;
};

// Cost-benefit greedy cover: grows the set by the best coverage-gain/cost
// source until z saturates. Ties go to the lowest source index. Throws
// InfeasibleError (naming the violating hypotheses) when even the full
// source set misses a bound, and rejects non-positive costs.
Solution greedy_mcis(const McisProblem& prob);

// Budgeted greedy: among sources still affordable, adds the best
// utility-gain/cost one (zero-cost sources first) until none fits.
Solution greedy_mpis(const MpisProblem& prob);

// Exact optima by subset enumeration (n <= 20). MCIS ties break by cost then
// lexicographic subset; MPIS by objective, cost, then lexicographic subset.
Solution brute_force_mcis(const McisProblem& prob);
Solution brute_force_mpis(const MpisProblem& prob);

// Cover-cost bound check for a greedy MCIS solution against the optimal
// cost: cost(greedy) <= (1 + (1/gamma) ln[(zD - z0)/(zD - z_penult)]) * opt.
// gamma = 0 carries no certificate.
Certificate mcis_guarantee(const Solution& greedy, double opt_cost, double gamma);

// Knapsack-utility bound check for a greedy MPIS solution against the
// optimal utility: score(greedy) >= (1 - e^-gamma) opt + score(empty) e^-gamma.
// Valid (vacuously) even at gamma = 0.
Certificate mpis_guarantee(const Solution& greedy, double opt_utility, double gamma);

// gamma used for certificates: 1 for the total-penalty metric (submodular),
// otherwise the closed-form matrix bound, upgraded to the exact enumerated
// ratio when the instance is small enough (n <= 12).
double certificate_gamma(const EquivTable& table, const McisProblem& prob);
double certificate_gamma(const EquivTable& table, const MpisProblem& prob);

std::string solution_to_json(const Solution& sol, const std::string& problem_name,
                             PenaltyMetric metric);

}  // namespace psel
