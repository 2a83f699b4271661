#include "psel/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "psel/errors.hpp"

namespace psel {

GammaBound gamma_bound(const PenaltyMatrix& xi) {
  const int m = xi.size();
  GammaBound out;
  if (m < 2) throw Error("gamma_bound needs at least two hypotheses");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0;
  for (int p = 0; p < m; ++p) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const double d = std::abs(xi(p, i) - xi(p, j));
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    }
  }
  out.xi_min = lo;
  out.xi_max = hi;
  out.gamma = hi > 0 ? lo / hi : 0.0;
  return out;
}

double row_max_penalty(const PenaltyMatrix& xi, int p, const HypoSet& F) {
  double best = 0;
  F.for_each([&](int j) { best = std::max(best, xi(p, j)); });
  return best;
}

double row_total_penalty(const PenaltyMatrix& xi, int p, const HypoSet& F) {
  double sum = 0;
  F.for_each([&](int j) { sum += xi(p, j); });
  return sum;
}

double max_penalty_score(const EquivTable& t, int theta_p, std::span<const int> subset) {
  return 1.0 - row_max_penalty(t.instance().penalties, theta_p, t.of_set(subset, theta_p));
}

double truncated_score(const EquivTable& t, int theta_p, std::span<const int> subset,
                       double bound_R) {
  return std::min(max_penalty_score(t, theta_p, subset), 1.0 - bound_R);
}

double coverage_z(const EquivTable& t, std::span<const int> subset,
                  std::span<const double> bounds) {
  const int m = t.num_hypotheses();
  if (static_cast<int>(bounds.size()) != m) throw Error("coverage_z needs one bound per hypothesis");
  double z = 0;
  for (int p = 0; p < m; ++p) z += truncated_score(t, p, subset, bounds[p]);
  return z;
}

double lambda_value(const EquivTable& t, std::span<const int> subset) {
  double sum = 0;
  for (int p = 0; p < t.num_hypotheses(); ++p) sum += max_penalty_score(t, p, subset);
  return sum;
}

double total_penalty(const EquivTable& t, int theta_p, std::span<const int> subset) {
  return row_total_penalty(t.instance().penalties, theta_p, t.of_set(subset, theta_p));
}

double g_score(const EquivTable& t, int theta_p, std::span<const int> subset) {
  return 1.0 - total_penalty(t, theta_p, subset);
}

namespace {

// Per-hypothesis score of an already-intersected equivalence set.
double hypo_score(const PenaltyMatrix& xi, int p, const HypoSet& F, PenaltyMetric metric) {
  return metric == PenaltyMetric::MaxPenalty ? 1.0 - row_max_penalty(xi, p, F)
                                             : 1.0 - row_total_penalty(xi, p, F);
}

// Values of `fn` for every source subset, indexed by bitmask. Equivalence
// sets are intersected incrementally along the lowest set bit.
std::vector<double> subset_values(const EquivTable& t, const SetFunction& fn) {
  const int n = t.num_sources();
  const int m = t.num_hypotheses();
  const std::size_t count = std::size_t{1} << n;
  const PenaltyMatrix& xi = t.instance().penalties;

  std::vector<double> values(count, 0.0);
  std::vector<HypoSet> fsets(count);

  auto accumulate_theta = [&](int p, double cap, bool capped) {
    fsets[0] = HypoSet::full(m);
    for (std::size_t mask = 1; mask < count; ++mask) {
      const int low = std::countr_zero(mask);
      fsets[mask] = fsets[mask & (mask - 1)] & t.single(low, p);
    }
    for (std::size_t mask = 0; mask < count; ++mask) {
      double v = hypo_score(xi, p, fsets[mask], fn.metric);
      if (capped) v = std::min(v, cap);
      values[mask] += v;
    }
  };

  switch (fn.kind) {
    case SetFunction::Kind::MaxPenaltyScore:
      accumulate_theta(fn.theta_p, 0.0, false);
      break;
    case SetFunction::Kind::GScore:
      accumulate_theta(fn.theta_p, 0.0, false);
      break;
    case SetFunction::Kind::Coverage:
      if (static_cast<int>(fn.bounds.size()) != m)
        throw Error("coverage set function needs one bound per hypothesis");
      for (int p = 0; p < m; ++p) accumulate_theta(p, 1.0 - fn.bounds[p], true);
      break;
    case SetFunction::Kind::LambdaSum:
      for (int p = 0; p < m; ++p) accumulate_theta(p, 0.0, false);
      break;
  }
  return values;
}

}  // namespace

double gamma_exact(const EquivTable& t, const SetFunction& fn) {
  const int n = t.num_sources();
  if (n > 12) throw SizeError("gamma_exact enumerates all subset pairs; limited to 12 sources");
  if ((fn.kind == SetFunction::Kind::MaxPenaltyScore || fn.kind == SetFunction::Kind::GScore) &&
      (fn.theta_p < 0 || fn.theta_p >= t.num_hypotheses()))
    throw Error("set function needs a valid hypothesis index");

  const std::vector<double> values = subset_values(t, fn);
  const std::size_t count = values.size();
  constexpr double eps = 1e-12;

  double ratio_min = 1.0;
  for (std::size_t b = 0; b < count; ++b) {
    const double vb = values[b];
    for (std::size_t a = 0; a < count; ++a) {
      const double den = values[a | b] - vb;
      double num = 0;
      for (std::size_t rest = a & ~b; rest;) {
        const std::size_t bit = rest & (0 - rest);
        num += values[b | bit] - vb;
        rest &= rest - 1;
      }
      if (std::abs(num) <= eps) num = 0.0;
      if (std::abs(den) <= eps) {
        // 0/0 counts as 1; a positive numerator over zero is unbounded and
        // cannot be the minimum.
        continue;
      }
      ratio_min = std::min(ratio_min, num / den);
    }
  }
  if (ratio_min >= 1.0 - 1e-9) return 1.0;  // submodular up to rounding
  return std::clamp(ratio_min, 0.0, 1.0);
}

}  // namespace psel
