#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psel/bayes.hpp"
#include "psel/errors.hpp"
#include "psel/expgen.hpp"
#include "psel/model.hpp"
#include "psel/solvers.hpp"

namespace {

using nlohmann::json;

// Machine-readable payloads go to stdout ("-"); everything human-facing to stderr.
void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw psel::InputError("cannot write output file: " + path);
  out << text;
}

std::vector<double> parse_real_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw psel::InputError("cannot parse real number '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw psel::InputError("cannot parse integer '" + item + "'");
    }
  }
  return out;
}

std::vector<double> load_bounds_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw psel::InputError("cannot open bounds file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str()).get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw psel::InputError(std::string("bounds file must be a JSON array of reals: ") + e.what());
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* env = std::getenv("PENALTYSELECT_SEED");
  if (!env) return std::nullopt;
  try {
    return static_cast<std::uint64_t>(std::stoull(env));
  } catch (const std::exception&) {
    throw psel::InputError("PENALTYSELECT_SEED is not an unsigned integer");
  }
}

int resolve_theta(const psel::Instance& inst, const std::string& text) {
  for (int q = 0; q < inst.num_hypotheses(); ++q) {
    if (inst.hypotheses.labels[q] == text) return q;
  }
  try {
    const int idx = std::stoi(text);
    if (idx >= 0 && idx < inst.num_hypotheses()) return idx;
  } catch (const std::exception&) {
  }
  throw psel::InputError("unknown hypothesis '" + text + "'");
}

struct ValidateArgs {
  std::string instance_path;
  bool renormalize = false;
};

int run_validate(const ValidateArgs& args) {
  const psel::Instance inst = psel::load_instance(args.instance_path, args.renormalize);
  const std::vector<std::string> violations = psel::validate(inst);
  for (const auto& v : violations) {
    std::cerr << json{{"violation", v}}.dump() << '\n';
  }
  return violations.empty() ? 0 : 1;
}

struct SolveArgs {
  std::string instance_path;
  bool mcis = false;
  bool mpis = false;
  std::string metric = "max";
  std::string bounds_inline;
  std::string bounds_file;
  double budget = -1;
  std::string budget_file;
  bool brute_force = false;
  bool renormalize = false;
  double equiv_tol = psel::kEquivKlTol;
};

int run_solve(const SolveArgs& args) {
  if (args.mcis == args.mpis)
    throw psel::InputError("choose exactly one of --mcis or --mpis");
  const psel::PenaltyMetric metric = args.metric == "total" ? psel::PenaltyMetric::TotalPenalty
                                                            : psel::PenaltyMetric::MaxPenalty;
  const psel::Instance inst = psel::load_instance(args.instance_path, args.renormalize);

  if (args.mcis) {
    psel::McisProblem prob;
    prob.instance = &inst;
    prob.metric = metric;
    prob.equiv_tol = args.equiv_tol;
    if (!args.bounds_inline.empty())
      prob.bounds = parse_real_list(args.bounds_inline);
    else if (!args.bounds_file.empty())
      prob.bounds = load_bounds_file(args.bounds_file);
    else
      throw psel::InputError("--mcis needs --bounds or --bounds-file");

    psel::Solution sol = args.brute_force ? psel::brute_force_mcis(prob) : psel::greedy_mcis(prob);
    if (!args.brute_force) {
      if (inst.num_sources() <= 20) {
        const psel::Solution opt = psel::brute_force_mcis(prob);
        const double gamma =
            psel::certificate_gamma(psel::EquivTable(inst, args.equiv_tol), prob);
        sol.certificate = psel::mcis_guarantee(sol, opt.cost, gamma);
      } else {
        psel::Certificate cert;
        cert.note = "not computed (instance exceeds the brute-force reference limit)";
        sol.certificate = cert;
      }
    }
    write_text("-", psel::solution_to_json(sol, "mcis", metric) + "\n");
    return 0;
  }

  double budget = args.budget;
  if (!args.budget_file.empty()) {
    std::ifstream in(args.budget_file);
    if (!in) throw psel::InputError("cannot open budget file: " + args.budget_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      budget = json::parse(buf.str()).get<double>();
    } catch (const json::exception& e) {
      throw psel::InputError(std::string("budget file must hold a JSON number: ") + e.what());
    }
  }
  if (budget < 0) throw psel::InputError("--mpis needs a nonnegative --budget");
  psel::MpisProblem prob;
  prob.instance = &inst;
  prob.metric = metric;
  prob.budget = budget;
  prob.equiv_tol = args.equiv_tol;
  psel::Solution sol = args.brute_force ? psel::brute_force_mpis(prob) : psel::greedy_mpis(prob);
  if (!args.brute_force) {
    if (inst.num_sources() <= 20) {
      const psel::Solution opt = psel::brute_force_mpis(prob);
      const double gamma =
          psel::certificate_gamma(psel::EquivTable(inst, args.equiv_tol), prob);
      sol.certificate = psel::mpis_guarantee(sol, opt.score, gamma);
    } else {
      psel::Certificate cert;
      cert.note = "not computed (instance exceeds the brute-force reference limit)";
      sol.certificate = cert;
    }
  }
  write_text("-", psel::solution_to_json(sol, "mpis", metric) + "\n");
  return 0;
}

struct SimulateArgs {
  std::string instance_path;
  std::string subset_csv;
  std::string true_theta = "0";
  long horizon = 50;
  std::uint64_t seed = 0;
  double delta = 0.1;
  double epsilon = -1;
  double mu_th = 0.01;
  std::string trajectory_path = "-";
  std::string diagnostics_path;
  bool renormalize = false;
  double equiv_tol = psel::kEquivKlTol;
};

int run_simulate(const SimulateArgs& args) {
  const psel::Instance inst = psel::load_instance(args.instance_path, args.renormalize);
  std::vector<int> subset;
  if (args.subset_csv.empty()) {
    for (int i = 0; i < inst.num_sources(); ++i) subset.push_back(i);
  } else {
    subset = parse_int_list(args.subset_csv);
  }
  const int theta = resolve_theta(inst, args.true_theta);
  std::uint64_t seed = args.seed;
  if (const auto env = env_seed()) seed = *env;

  psel::SimulateOptions opts;
  opts.delta = args.delta;
  opts.epsilon = args.epsilon;
  opts.mu_th = args.mu_th;
  opts.equiv_tol = args.equiv_tol;
  const psel::SimulationResult result =
      psel::simulate_run(inst, subset, theta, args.horizon, seed, opts);

  if (args.trajectory_path == "-" && args.diagnostics_path == "-")
    throw psel::InputError("trajectory and diagnostics cannot both go to stdout");
  std::ostringstream csv;
  psel::write_trajectory_csv(csv, inst, result.trajectory);
  write_text(args.trajectory_path, csv.str());
  if (!args.diagnostics_path.empty())
    write_text(args.diagnostics_path, psel::diagnostics_to_json(inst, result.diag) + "\n");
  return 0;
}

struct ExperimentArgs {
  std::string spec_path;
  std::string out_path = "-";
  std::string summary_path;
  int threads = 0;  // 0: spec value
  bool seed_given = false;
  std::uint64_t seed = 0;
};

int run_experiment_cmd(const ExperimentArgs& args) {
  psel::ExperimentSpec spec = psel::load_experiment_spec(args.spec_path);
  if (args.threads > 0) spec.threads = args.threads;
  if (args.seed_given) spec.master_seed = args.seed;
  if (const auto env = env_seed()) spec.master_seed = *env;

  const psel::ExperimentResult result = psel::run_experiment(spec);
  if (spec.kind == psel::ExperimentKind::ConvergenceDemo) {
    std::ostringstream csv;
    psel::write_trajectory_csv(csv, result.demo_instance, result.trajectory);
    write_text(args.out_path, csv.str());
  } else {
    write_text(args.out_path, psel::rows_to_csv(result.rows));
  }
  if (!args.summary_path.empty()) write_text(args.summary_path, result.summary_json + "\n");
  return result.all_certificates_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal information-source selection for penalty-aware hypothesis testing"};
  app.require_subcommand(1);

  ValidateArgs vargs;
  CLI::App* validate = app.add_subcommand("validate", "check an instance file's invariants");
  validate->add_option("instance", vargs.instance_path, "instance JSON file")->required();
  validate->add_flag("--renormalize-penalties", vargs.renormalize,
                     "rescale penalty rows to sum to 1 before checking");

  SolveArgs sargs;
  CLI::App* solve = app.add_subcommand("solve", "select sources by greedy or brute force");
  solve->add_option("instance", sargs.instance_path, "instance JSON file")->required();
  solve->add_flag("--mcis", sargs.mcis, "minimum-cost selection under penalty bounds");
  solve->add_flag("--mpis", sargs.mpis, "budgeted selection minimizing summed penalty");
  solve->add_option("--metric", sargs.metric, "penalty metric: max or total")
      ->check(CLI::IsMember({"max", "total"}));
  solve->add_option("--bounds", sargs.bounds_inline,
                    "comma-separated per-hypothesis penalty bounds");
  solve->add_option("--bounds-file", sargs.bounds_file, "JSON array of per-hypothesis bounds");
  solve->add_option("--budget", sargs.budget, "selection budget (mpis)");
  solve->add_option("--budget-file", sargs.budget_file, "JSON number with the budget");
  solve->add_flag("--brute-force", sargs.brute_force, "exact optimum instead of greedy");
  solve->add_flag("--renormalize-penalties", sargs.renormalize,
                  "rescale penalty rows to sum to 1 on load");
  solve->add_option("--equiv-tol", sargs.equiv_tol,
                    "KL threshold for treating likelihood columns as equal");

  SimulateArgs simargs;
  CLI::App* simulate = app.add_subcommand("simulate", "run a belief-update simulation");
  simulate->add_option("instance", simargs.instance_path, "instance JSON file")->required();
  simulate->add_option("--subset", simargs.subset_csv,
                       "comma-separated source indices (default: all)");
  simulate->add_option("--true-theta", simargs.true_theta, "true hypothesis (label or index)");
  simulate->add_option("--horizon", simargs.horizon, "number of observation steps");
  simulate->add_option("--seed", simargs.seed, "random seed");
  simulate->add_option("--delta", simargs.delta, "failure probability for sample counts");
  simulate->add_option("--epsilon", simargs.epsilon,
                       "accuracy slack (default: half the smallest positive KL)");
  simulate->add_option("--mu-th", simargs.mu_th, "belief threshold");
  simulate->add_option("--trajectory", simargs.trajectory_path,
                       "trajectory CSV destination ('-' = stdout)");
  simulate->add_option("--diagnostics", simargs.diagnostics_path,
                       "diagnostics JSON destination");
  simulate->add_flag("--renormalize-penalties", simargs.renormalize,
                     "rescale penalty rows to sum to 1 on load");
  simulate->add_option("--equiv-tol", simargs.equiv_tol,
                       "KL threshold for treating likelihood columns as equal");

  ExperimentArgs eargs;
  CLI::App* experiment = app.add_subcommand("experiment", "run a batch experiment spec");
  experiment->add_option("spec", eargs.spec_path, "experiment spec JSON file")->required();
  experiment->add_option("--out", eargs.out_path, "result CSV destination ('-' = stdout)");
  experiment->add_option("--summary", eargs.summary_path, "summary JSON destination");
  experiment->add_option("--threads", eargs.threads, "worker cap (results are unaffected)");
  experiment->add_option("--seed", eargs.seed, "master seed override")
      ->each([&](const std::string&) { eargs.seed_given = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(validate)) return run_validate(vargs);
    if (app.got_subcommand(solve)) return run_solve(sargs);
    if (app.got_subcommand(simulate)) return run_simulate(simargs);
    if (app.got_subcommand(experiment)) return run_experiment_cmd(eargs);
  } catch (const psel::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const psel::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
