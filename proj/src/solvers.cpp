#include "psel/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "psel/errors.hpp"

namespace psel {

using nlohmann::json;

namespace {

double hypo_score(const PenaltyMatrix& xi, int p, const HypoSet& F, PenaltyMetric metric) {
  return metric == PenaltyMetric::MaxPenalty ? 1.0 - row_max_penalty(xi, p, F)
                                             : 1.0 - row_total_penalty(xi, p, F);
}

// Shared state for both solvers: per-hypothesis equivalence sets of the
// current selection plus the capped/uncapped scoring rule.
struct Scorer {
  const EquivTable& table;
  PenaltyMetric metric;
  std::vector<double> caps;  // empty: uncapped sum

  double value(const std::vector<HypoSet>& fsets) const {
    const PenaltyMatrix& xi = table.instance().penalties;
    double total = 0;
    for (int p = 0; p < table.num_hypotheses(); ++p) {
      double v = hypo_score(xi, p, fsets[p], metric);
      if (!caps.empty()) v = std::min(v, caps[p]);
      total += v;
    }
    return total;
  }

  std::vector<HypoSet> empty_sets() const {
    return std::vector<HypoSet>(table.num_hypotheses(), HypoSet::full(table.num_hypotheses()));
  }

  void intersect(std::vector<HypoSet>& fsets, int source) const {
    for (int p = 0; p < table.num_hypotheses(); ++p) fsets[p] &= table.single(source, p);
  }
};

void check_bounds(const McisProblem& prob, int m) {
  if (static_cast<int>(prob.bounds.size()) != m)
    throw Error("MCIS needs one penalty bound per hypothesis");
  for (double r : prob.bounds) {
    if (!(r >= 0.0 && r <= 1.0)) throw Error("penalty bounds must lie in [0,1]");
  }
}

void check_positive_costs(const Instance& inst) {
  for (int i = 0; i < inst.num_sources(); ++i) {
    if (!(inst.source_cost(i) > 0.0))
      throw Error("minimum-cost selection requires strictly positive source costs (source " +
                  std::to_string(i) + " has cost " + std::to_string(inst.source_cost(i)) + ")");
  }
}

// Feasibility of the full source set, reporting the hypotheses whose bound
// cannot be met even with everything selected.
void check_feasible(const EquivTable& table, const Scorer& scorer,
                    const std::vector<HypoSet>& full_sets, const Instance& inst) {
  const PenaltyMatrix& xi = inst.penalties;
  std::string violators;
  for (int p = 0; p < table.num_hypotheses(); ++p) {
    const double v = hypo_score(xi, p, full_sets[p], scorer.metric);
    if (v < scorer.caps[p] - kValueTol) {
      if (!violators.empty()) violators += ", ";
      violators += inst.hypotheses.labels[p];
    }
  }
  if (!violators.empty())
    throw InfeasibleError("infeasible: even the full source set violates the bound for: " +
                          violators);
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double mpis_objective(const EquivTable& table, double utility) {
  // min-form objective: summed (max or total) penalty = m - utility
  return table.num_hypotheses() - utility;
}

}  // namespace

Solution greedy_mcis(const McisProblem& prob) {
  const Instance& inst = *prob.instance;
  const EquivTable table(inst, prob.equiv_tol);
  const int m = table.num_hypotheses();
  const int n = table.num_sources();
  check_bounds(prob, m);
  check_positive_costs(inst);

  Scorer scorer{table, prob.metric, {}};
  scorer.caps.resize(m);
  for (int p = 0; p < m; ++p) scorer.caps[p] = 1.0 - prob.bounds[p];

  std::vector<HypoSet> full_sets = scorer.empty_sets();
  for (int i = 0; i < n; ++i) scorer.intersect(full_sets, i);
  check_feasible(table, scorer, full_sets, inst);

  Solution sol;
  std::vector<HypoSet> cur = scorer.empty_sets();
  sol.score_empty = scorer.value(cur);
  sol.score_full = scorer.value(full_sets);
  double cur_z = sol.score_empty;
  std::vector<char> taken(n, 0);

  while (cur_z < sol.score_full - kValueTol) {
    int best = -1;
    double best_marg = 0, best_cost = 1, best_z = cur_z;
    for (int i = 0; i < n; ++i) {
      if (taken[i]) continue;
      std::vector<HypoSet> next = cur;
      scorer.intersect(next, i);
      const double z_i = scorer.value(next);
      const double marg = z_i - cur_z;
      const double c_i = inst.source_cost(i);
      if (best < 0 || marg * best_cost > best_marg * c_i) {
        best = i;
        best_marg = marg;
        best_cost = c_i;
        best_z = z_i;
      }
    }
    if (best < 0) break;
    scorer.intersect(cur, best);
    taken[best] = 1;
    cur_z = best_z;
    sol.trace.push_back({best, best_marg, best_z});
    sol.selected.push_back(best);
  }

  std::sort(sol.selected.begin(), sol.selected.end());
  sol.cost = cost_of(inst, sol.selected);
  sol.score = cur_z;
  sol.objective = cur_z;
  return sol;
}

Solution greedy_mpis(const MpisProblem& prob) {
  const Instance& inst = *prob.instance;
  const EquivTable table(inst, prob.equiv_tol);
  const int n = table.num_sources();
  if (prob.budget < 0) throw Error("budget must be nonnegative");
  for (int i = 0; i < n; ++i) {
    if (inst.source_cost(i) < 0.0) throw Error("source costs must be nonnegative");
  }

  const Scorer scorer{table, prob.metric, {}};
  Solution sol;
  std::vector<HypoSet> cur = scorer.empty_sets();
  double cur_value = scorer.value(cur);
  sol.score_empty = cur_value;
  double spent = 0;
  std::vector<char> taken(n, 0);

  for (;;) {
    int best = -1;
    double best_marg = 0, best_cost = 1, best_value = cur_value;
    for (int i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double c_i = inst.source_cost(i);
      if (spent + c_i > prob.budget + 1e-12) continue;
      std::vector<HypoSet> next = cur;
      scorer.intersect(next, i);
      const double value_i = scorer.value(next);
      const double marg = value_i - cur_value;
      bool wins;
      if (best < 0) {
        wins = true;
      } else if ((c_i <= 0.0) != (best_cost <= 0.0)) {
        wins = c_i <= 0.0;  // free sources rank above every paid one
      } else if (c_i <= 0.0) {
        wins = false;
      } else {
        wins = marg * best_cost > best_marg * c_i;
      }
      if (wins) {
        best = i;
        best_marg = marg;
        best_cost = c_i;
        best_value = value_i;
      }
    }
    if (best < 0) break;
    scorer.intersect(cur, best);
    taken[best] = 1;
    spent += best_cost;
    cur_value = best_value;
    sol.trace.push_back({best, best_marg, best_value});
    sol.selected.push_back(best);
  }

  std::sort(sol.selected.begin(), sol.selected.end());
  sol.cost = cost_of(inst, sol.selected);
  sol.score = cur_value;
  sol.score_full = cur_value;
  sol.objective = mpis_objective(table, cur_value);
  return sol;
}

namespace {

template <class Visit>
void enumerate_subsets(const EquivTable& table, const Scorer& scorer, Visit&& visit) {
  const Instance& inst = table.instance();
  const int n = table.num_sources();
  std::vector<int> current;
  auto rec = [&](auto&& self, int idx, std::vector<HypoSet> fsets, double cost) -> void {
    if (idx == n) {
      visit(current, fsets, cost);
      return;
    }
    self(self, idx + 1, fsets, cost);
    std::vector<HypoSet> with = std::move(fsets);
    scorer.intersect(with, idx);
    current.push_back(idx);
    self(self, idx + 1, std::move(with), cost + inst.source_cost(idx));
    current.pop_back();
  };
  rec(rec, 0, scorer.empty_sets(), 0.0);
}

}  // namespace

Solution brute_force_mcis(const McisProblem& prob) {
  const Instance& inst = *prob.instance;
  const EquivTable table(inst, prob.equiv_tol);
  const int m = table.num_hypotheses();
  const int n = table.num_sources();
  if (n > 20) throw SizeError("brute force enumerates 2^n subsets; limited to 20 sources");
  check_bounds(prob, m);
  check_positive_costs(inst);

  Scorer scorer{table, prob.metric, {}};
  scorer.caps.resize(m);
  for (int p = 0; p < m; ++p) scorer.caps[p] = 1.0 - prob.bounds[p];

  std::vector<HypoSet> full_sets = scorer.empty_sets();
  for (int i = 0; i < n; ++i) scorer.intersect(full_sets, i);
  check_feasible(table, scorer, full_sets, inst);

  const PenaltyMatrix& xi = inst.penalties;
  bool found = false;
  std::vector<int> best_sel;
  double best_cost = std::numeric_limits<double>::infinity();
  double best_score = 0;

  enumerate_subsets(table, scorer, [&](const std::vector<int>& sel,
                                       const std::vector<HypoSet>& fsets, double cost) {
    for (int p = 0; p < m; ++p) {
      if (hypo_score(xi, p, fsets[p], scorer.metric) < scorer.caps[p] - kValueTol) return;
    }
    if (!found || cost < best_cost || (cost == best_cost && lex_less(sel, best_sel))) {
      found = true;
      best_sel = sel;
      best_cost = cost;
      best_score = scorer.value(fsets);
    }
  });

  Solution sol;
  sol.selected = best_sel;
  sol.cost = best_cost;
  sol.score = best_score;
  sol.score_empty = scorer.value(scorer.empty_sets());
  sol.score_full = scorer.value(full_sets);
  sol.objective = best_score;
  return sol;
}

Solution brute_force_mpis(const MpisProblem& prob) {
  const Instance& inst = *prob.instance;
  const EquivTable table(inst, prob.equiv_tol);
  const int n = table.num_sources();
  if (n > 20) throw SizeError("brute force enumerates 2^n subsets; limited to 20 sources");
  if (prob.budget < 0) throw Error("budget must be nonnegative");

  const Scorer scorer{table, prob.metric, {}};
  bool found = false;
  std::vector<int> best_sel;
  double best_cost = 0;
  double best_value = -std::numeric_limits<double>::infinity();

  enumerate_subsets(table, scorer, [&](const std::vector<int>& sel,
                                       const std::vector<HypoSet>& fsets, double cost) {
    if (cost > prob.budget + 1e-12) return;
    const double value = scorer.value(fsets);
    const bool wins = !found || value > best_value ||
                      (value == best_value &&
                       (cost < best_cost || (cost == best_cost && lex_less(sel, best_sel))));
    if (wins) {
      found = true;
      best_sel = sel;
      best_cost = cost;
      best_value = value;
    }
  });

  Solution sol;
  sol.selected = best_sel;
  sol.cost = best_cost;
  sol.score = best_value;
  sol.score_empty = scorer.value(scorer.empty_sets());
  sol.score_full = best_value;
  sol.objective = mpis_objective(table, best_value);
  return sol;
}

Certificate mcis_guarantee(const Solution& greedy, double opt_cost, double gamma) {
  Certificate cert;
  cert.formula = "cover_cost";
  cert.gamma = gamma;
  if (gamma <= 0.0) {
    cert.available = false;
    cert.note = "no certificate (gamma = 0)";
    return cert;
  }
  cert.available = true;
  double multiplier = 1.0;
  const std::size_t T = greedy.trace.size();
  if (T >= 1) {
    const double z_penult = T >= 2 ? greedy.trace[T - 2].value : greedy.score_empty;
    const double ratio = (greedy.score_full - greedy.score_empty) / (greedy.score_full - z_penult);
    multiplier = 1.0 + std::log(ratio) / gamma;
  }
  cert.bound = multiplier * opt_cost;
  cert.passes = greedy.cost <= cert.bound + kValueTol;
  return cert;
}

Certificate mpis_guarantee(const Solution& greedy, double opt_utility, double gamma) {
  if (gamma < 0.0) throw Error("gamma must be nonnegative");
  Certificate cert;
  cert.formula = "knapsack_utility";
  cert.available = true;
  cert.gamma = gamma;
  const double decay = std::exp(-gamma);
  cert.bound = (1.0 - decay) * opt_utility + greedy.score_empty * decay;
  cert.passes = greedy.score >= cert.bound - kValueTol;
  return cert;
}

double certificate_gamma(const EquivTable& table, const McisProblem& prob) {
  if (prob.metric == PenaltyMetric::TotalPenalty) return 1.0;
  double gamma = gamma_bound(table.instance().penalties).gamma;
  if (table.num_sources() <= 12)
    gamma = std::max(gamma, gamma_exact(table, SetFunction::z(prob.bounds)));
  return gamma;
}

double certificate_gamma(const EquivTable& table, const MpisProblem& prob) {
  if (prob.metric == PenaltyMetric::TotalPenalty) return 1.0;
  double gamma = gamma_bound(table.instance().penalties).gamma;
  if (table.num_sources() <= 12) gamma = std::max(gamma, gamma_exact(table, SetFunction::lambda()));
  return gamma;
}

std::string solution_to_json(const Solution& sol, const std::string& problem_name,
                             PenaltyMetric metric) {
  json doc;
  doc["problem"] = problem_name;
  doc["metric"] = metric == PenaltyMetric::MaxPenalty ? "max" : "total";
  doc["selected"] = sol.selected;
  doc["cost"] = sol.cost;
  doc["objective"] = sol.objective;
  doc["score"] = sol.score;
  doc["score_empty"] = sol.score_empty;
  doc["score_full"] = sol.score_full;
  json trace = json::array();
  for (const auto& step : sol.trace)
    trace.push_back({{"picked", step.picked}, {"marginal", step.marginal}, {"value", step.value}});
  doc["trace"] = std::move(trace);
  if (sol.certificate) {
    const Certificate& c = *sol.certificate;
    json cert;
    cert["gamma"] = c.gamma;
    cert["bound"] = c.available ? json(c.bound) : json(nullptr);
    cert["passes"] = c.available ? json(c.passes) : json(nullptr);
    cert["formula"] = c.formula;
    if (!c.note.empty()) cert["note"] = c.note;
    doc["certificate"] = std::move(cert);
  } else {
    doc["certificate"] = nullptr;
  }
  return doc.dump(2);
}

}  // namespace psel
