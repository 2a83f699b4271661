#include "psel/bayes.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "psel/errors.hpp"

namespace psel {

using nlohmann::json;

namespace {

void normalize_log(std::vector<double>& lb) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : lb) hi = std::max(hi, v);
  double sum = 0;
  for (double v : lb) sum += std::exp(v - hi);
  const double lse = hi + std::log(sum);
  for (double& v : lb) v -= lse;
}

std::string shortest(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

BeliefState uniform_prior(const Instance& inst, std::vector<int> subset) {
  BeliefState s;
  const int m = inst.num_hypotheses();
  s.log_belief.assign(m, -std::log(static_cast<double>(m)));
  s.subset = std::move(subset);
  return s;
}

std::vector<double> beliefs(const BeliefState& state) {
  std::vector<double> out(state.log_belief.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(state.log_belief[i]);
  return out;
}

void bayes_update(BeliefState& state, const Instance& inst, std::span<const int> observation) {
  if (inst.backing != Backing::Likelihood)
    throw BackingError("bayes_update requires a likelihood-backed instance");
  if (observation.size() != state.subset.size())
    throw Error("observation arity does not match the source subset");
  const int m = inst.num_hypotheses();
  for (std::size_t j = 0; j < state.subset.size(); ++j) {
    const auto& table = inst.likelihood_sources[state.subset[j]].likelihood;
    const int o = observation[j];
    if (o < 0 || o >= static_cast<int>(table.size()))
      throw std::out_of_range("observation index out of range");
    for (int q = 0; q < m; ++q) state.log_belief[q] += std::log(table[o][q]);
  }
  normalize_log(state.log_belief);
  ++state.t;
}

std::vector<int> sample_observation(const Instance& inst, std::span<const int> subset,
                                    int true_theta, SplitMix64& rng) {
  if (inst.backing != Backing::Likelihood)
    throw BackingError("sample_observation requires a likelihood-backed instance");
  std::vector<int> obs;
  obs.reserve(subset.size());
  for (int s : subset) {
    const auto& table = inst.likelihood_sources[s].likelihood;
    const double u = rng.next_double();
    double acc = 0;
    int drawn = static_cast<int>(table.size()) - 1;
    for (std::size_t o = 0; o < table.size(); ++o) {
      acc += table[o][true_theta];
      if (u < acc) {
        drawn = static_cast<int>(o);
        break;
      }
    }
    obs.push_back(drawn);
  }
  return obs;
}

long long sample_complexity_n(double delta, double epsilon, double L) {
  if (!(delta > 0 && delta <= 1)) throw Error("delta must lie in (0,1]");
  if (!(epsilon > 0)) throw Error("epsilon must be positive");
  if (!(L > 0)) throw Error("L must be positive");
  return static_cast<long long>(std::ceil(2.0 * L * L / (epsilon * epsilon) * std::log(2.0 / delta)));
}

long long sample_complexity_threshold(double delta, double epsilon, double L, double mu_th,
                                      double k_min) {
  if (!(mu_th > 0 && mu_th < 1)) throw Error("mu_th must lie in (0,1)");
  if (!(k_min > 0))
    throw Error("k_min is zero: some hypothesis pair has KL divergence exactly epsilon; perturb epsilon");
  const double hoeffding = 2.0 * L * L / (epsilon * epsilon) * std::log(2.0 / delta);
  if (!(delta > 0 && delta <= 1)) throw Error("delta must lie in (0,1]");
  if (!(epsilon > 0)) throw Error("epsilon must be positive");
  if (!(L > 0)) throw Error("L must be positive");
  const double threshold_term = std::log(1.0 / mu_th) / k_min;
  return static_cast<long long>(std::ceil(std::max(hoeffding, threshold_term)));
}

namespace {

#ifndef NDEBUG
// Every realized log-likelihood ratio must respect the global bound L.
void check_ratio_bound(const Instance& inst, std::span<const int> subset,
                       std::span<const int> obs, double L) {
  for (std::size_t j = 0; j < subset.size(); ++j) {
    const auto& row = inst.likelihood_sources[subset[j]].likelihood[obs[j]];
    double lo = row[0], hi = row[0];
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    assert(std::log(hi) - std::log(lo) <= L + 1e-9);
  }
}
#endif

}  // namespace

SimulationResult simulate_run(const Instance& inst, std::span<const int> subset, int true_theta,
                              long horizon, std::uint64_t seed, SimulateOptions opts) {
  if (inst.backing != Backing::Likelihood)
    throw BackingError("simulation requires a likelihood-backed instance");
  const int m = inst.num_hypotheses();
  if (true_theta < 0 || true_theta >= m) throw std::out_of_range("true hypothesis out of range");

  const EquivTable table(inst, opts.equiv_tol);
  const std::vector<int> sub(subset.begin(), subset.end());
  const HypoSet F = table.of_set(sub, true_theta);

  SimulationResult result;
  RunDiagnostics& diag = result.diag;
  diag.true_theta = true_theta;
  diag.subset = sub;
  diag.equivalence_set = F;
  diag.delta = opts.delta;
  diag.mu_th = opts.mu_th;
  diag.L = compute_L(inst);

  for (int q = 0; q < m; ++q) {
    if (!F.test(q)) {
      diag.out_members.push_back(q);
      diag.kl_out.push_back(kl_set(inst, sub, true_theta, q));
    }
  }

  double k_min_positive = std::numeric_limits<double>::infinity();
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      if (p == q) continue;
      const double k = kl_set(inst, sub, p, q);
      if (k > opts.equiv_tol) k_min_positive = std::min(k_min_positive, k);
    }
  }
  const bool distinguishable = std::isfinite(k_min_positive);
  diag.k_min_positive = distinguishable ? k_min_positive : 0.0;

  diag.epsilon = opts.epsilon > 0 ? opts.epsilon : (distinguishable ? k_min_positive / 2 : 0.0);
  if (distinguishable && diag.epsilon > 0 && diag.L > 0) {
    double k_min_abs = std::numeric_limits<double>::infinity();
    for (int p = 0; p < m; ++p) {
      for (int q = 0; q < m; ++q) {
        if (p == q) continue;
        double k = kl_set(inst, sub, p, q);
        if (k <= opts.equiv_tol) k = 0.0;
        k_min_abs = std::min(k_min_abs, std::abs(k - diag.epsilon));
      }
    }
    diag.k_min_abs = k_min_abs;
    diag.sample_count_n = sample_complexity_n(opts.delta, diag.epsilon, diag.L);
    if (k_min_abs > 0) {
      diag.sample_count_threshold =
          sample_complexity_threshold(opts.delta, diag.epsilon, diag.L, opts.mu_th, k_min_abs);
    }
  }
  for (std::size_t k = 0; k < diag.out_members.size(); ++k)
    diag.epsilon_ge_kl.push_back(diag.epsilon >= diag.kl_out[k]);

  BeliefState state = uniform_prior(inst, sub);
  result.trajectory.push_back(state);
  SplitMix64 rng(seed);

  for (long t = 1; t <= horizon; ++t) {
    const std::vector<int> obs = sample_observation(inst, sub, true_theta, rng);
#ifndef NDEBUG
    check_ratio_bound(inst, sub, obs, diag.L);
#endif
    bayes_update(state, inst, obs);
    result.trajectory.push_back(state);

    const std::vector<double> mu = beliefs(state);
    StepDiagnostics step;
    step.t = t;
    double in_lo = std::numeric_limits<double>::infinity(), in_hi = 0;
    for (int q = 0; q < m; ++q) {
      if (F.test(q)) {
        in_lo = std::min(in_lo, mu[q]);
        in_hi = std::max(in_hi, mu[q]);
      } else {
        step.max_out_belief = std::max(step.max_out_belief, mu[q]);
      }
    }
    step.gap_in_f = in_hi - in_lo;
    for (std::size_t k = 0; k < diag.out_members.size(); ++k) {
      const double bound = std::exp(-static_cast<double>(t) *
                                    std::abs(diag.kl_out[k] - diag.epsilon));
      if (mu[diag.out_members[k]] > bound) step.decay_bounds_ok = false;
    }
    diag.steps.push_back(step);
  }

  diag.k_hat_final.assign(diag.out_members.size(), 0.0);
  if (horizon > 0) {
    const auto& lb = state.log_belief;
    for (std::size_t k = 0; k < diag.out_members.size(); ++k) {
      // log-belief gaps recover the running mean of log likelihood ratios.
      diag.k_hat_final[k] =
          -(lb[diag.out_members[k]] - lb[true_theta]) / static_cast<double>(horizon);
    }
  }
  return result;
}

std::vector<double> asymptotic_belief(const EquivTable& table, std::span<const int> subset,
                                      int true_theta) {
  const HypoSet F = table.of_set(subset, true_theta);
  std::vector<double> out(table.num_hypotheses(), 0.0);
  const double v = 1.0 / F.count();
  F.for_each([&](int q) { out[q] = v; });
  return out;
}

std::vector<double> asymptotic_belief(const Instance& inst, std::span<const int> subset,
                                      int true_theta) {
  return asymptotic_belief(EquivTable(inst), subset, true_theta);
}

void write_trajectory_csv(std::ostream& os, const Instance& inst,
                          const std::vector<BeliefState>& trajectory) {
  os << "t,hypothesis,belief\n";
  for (const auto& state : trajectory) {
    const std::vector<double> mu = beliefs(state);
    for (std::size_t q = 0; q < mu.size(); ++q) {
      os << state.t << ',' << inst.hypotheses.labels[q] << ',' << shortest(mu[q]) << '\n';
    }
  }
}

std::string diagnostics_to_json(const Instance& inst, const RunDiagnostics& diag) {
  json doc;
  doc["true_theta"] = inst.hypotheses.labels[diag.true_theta];
  doc["subset"] = diag.subset;
  json f_members = json::array();
  diag.equivalence_set.for_each([&](int q) { f_members.push_back(inst.hypotheses.labels[q]); });
  doc["equivalence_set"] = std::move(f_members);
  doc["L"] = diag.L;
  doc["delta"] = diag.delta;
  doc["epsilon"] = diag.epsilon;
  doc["mu_th"] = diag.mu_th;
  doc["k_min_positive"] = diag.k_min_positive;
  doc["k_min_abs"] = diag.k_min_abs;
  doc["samples_for_accuracy"] =
      diag.sample_count_n >= 0 ? json(diag.sample_count_n) : json(nullptr);
  doc["samples_for_threshold"] =
      diag.sample_count_threshold >= 0 ? json(diag.sample_count_threshold) : json(nullptr);
  json pairs = json::array();
  for (std::size_t k = 0; k < diag.out_members.size(); ++k) {
    pairs.push_back({{"hypothesis", inst.hypotheses.labels[diag.out_members[k]]},
                     {"kl", diag.kl_out[k]},
                     {"k_hat_final", diag.k_hat_final.empty() ? 0.0 : diag.k_hat_final[k]},
                     {"epsilon_ge_kl", static_cast<bool>(diag.epsilon_ge_kl[k])}});
  }
  doc["outside_pairs"] = std::move(pairs);
  json steps = json::array();
  for (const auto& s : diag.steps) {
    steps.push_back({{"t", s.t},
                     {"gap_in_equivalence_set", s.gap_in_f},
                     {"max_outside_belief", s.max_out_belief},
                     {"decay_bounds_ok", s.decay_bounds_ok}});
  }
  doc["steps"] = std::move(steps);
  return doc.dump(2);
}

}  // namespace psel
