#pragma once

#include <span>
#include <vector>

#include "psel/equiv.hpp"

namespace psel {

enum class PenaltyMetric { MaxPenalty, TotalPenalty };

// Closed-form submodularity-ratio bound from the penalty matrix alone:
// xi_min (xi_max) is the smallest (largest) absolute difference between two
// entries of one row, diagonal included; gamma = xi_min / xi_max.
struct GammaBound {
  double xi_min = 0;
  double xi_max = 0;
  double gamma = 0;
};

GammaBound gamma_bound(const PenaltyMatrix& xi);

// Largest (smallest) penalty in row p restricted to the members of F.
double row_max_penalty(const PenaltyMatrix& xi, int p, const HypoSet& F);
double row_total_penalty(const PenaltyMatrix& xi, int p, const HypoSet& F);

// f_p(I) = 1 - max penalty over the equivalence set of p. Monotone
// non-decreasing in I.
double max_penalty_score(const EquivTable& t, int theta_p, std::span<const int> subset);

// min{f_p(I), 1 - R_p}: the capped per-hypothesis constraint score.
double truncated_score(const EquivTable& t, int theta_p, std::span<const int> subset,
                       double bound_R);

// z(I) = sum_p min{f_p(I), 1 - R_p}; saturates exactly when every
// max-penalty constraint holds.
double coverage_z(const EquivTable& t, std::span<const int> subset, std::span<const double> bounds);

// Lambda(I) = sum_p f_p(I).
double lambda_value(const EquivTable& t, std::span<const int> subset);

// rho_p(I): total penalty mass left inside the equivalence set. Monotone
// non-increasing; rho_p(empty) = 1 by row-stochasticity.
double total_penalty(const EquivTable& t, int theta_p, std::span<const int> subset);

// g_p(I) = 1 - rho_p(I); monotone non-decreasing and submodular.
double g_score(const EquivTable& t, int theta_p, std::span<const int> subset);

// A set function whose exact submodularity ratio can be measured.
struct SetFunction {
  enum class Kind { MaxPenaltyScore, Coverage, LambdaSum, GScore };
  Kind kind = Kind::LambdaSum;
  int theta_p = -1;
  std::vector<double> bounds;                          // Coverage only
  PenaltyMetric metric = PenaltyMetric::MaxPenalty;    // Coverage / LambdaSum base

  static SetFunction f_theta(int p) { return {Kind::MaxPenaltyScore, p, {}, PenaltyMetric::MaxPenalty}; }
  static SetFunction g_theta(int p) { return {Kind::GScore, p, {}, PenaltyMetric::TotalPenalty}; }
  static SetFunction z(std::vector<double> R, PenaltyMetric m = PenaltyMetric::MaxPenalty) {
    return {Kind::Coverage, -1, std::move(R), m};
  }
  static SetFunction lambda(PenaltyMetric m = PenaltyMetric::MaxPenalty) {
    return {Kind::LambdaSum, -1, {}, m};
  }
};

// Exact submodularity ratio by exhaustive enumeration of all pairs A,B of
// source subsets:  min over A,B of
//   sum_{a in A\B} (v(B+a) - v(B))  /  (v(A|B) - v(B)),
// with 0/0 taken as 1 and positive/0 skipped. The result is clamped to
// [0,1]; submodular functions therefore report exactly 1. Limited to
// n <= 12 sources.
double gamma_exact(const EquivTable& t, const SetFunction& fn);

}  // namespace psel
