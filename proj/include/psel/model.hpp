#pragma once

#include <span>
#include <string>
#include <vector>

namespace psel {

// Shared numeric tolerances.
inline constexpr double kStochasticTol = 1e-9;  // row/column sums of 1
inline constexpr double kEquivKlTol = 1e-9;     // per-source KL treated as zero
inline constexpr double kValueTol = 1e-9;       // set-function equality

struct HypothesisSet {
  std::vector<std::string> labels;
  int size() const { return static_cast<int>(labels.size()); }
};

// Row-stochastic misprediction penalty matrix with zero diagonal: entry (p,q)
// is the penalty for predicting hypothesis q when p is true.
class PenaltyMatrix {
 public:
  PenaltyMatrix() = default;
  explicit PenaltyMatrix(std::vector<std::vector<double>> rows) : xi_(std::move(rows)) {}

  int size() const { return static_cast<int>(xi_.size()); }
  double operator()(int p, int q) const { return xi_[p][q]; }
  const std::vector<std::vector<double>>& rows() const { return xi_; }

  // True iff every row has pairwise-distinct entries (diagonal included).
  bool unique_rows() const;

 private:
  std::vector<std::vector<double>> xi_;
};

// Information source described by a finite observation likelihood table,
// likelihood[o][theta] with each theta-column summing to 1.
struct SourceModel {
  double cost = 1.0;
  std::vector<std::vector<double>> likelihood;
  int observation_count() const { return static_cast<int>(likelihood.size()); }
};

// Information source described only by which hypotheses it can tell apart:
// blocks partition 0..m-1, hypotheses in one block are indistinguishable.
struct PartitionModel {
  double cost = 1.0;
  std::vector<std::vector<int>> blocks;
};

enum class Backing { Likelihood, Partition };

struct Instance {
  HypothesisSet hypotheses;
  PenaltyMatrix penalties;
  Backing backing = Backing::Partition;
  std::vector<SourceModel> likelihood_sources;
  std::vector<PartitionModel> partition_sources;

  static Instance with_likelihoods(HypothesisSet h, PenaltyMatrix xi,
                                   std::vector<SourceModel> sources);
  static Instance with_partitions(HypothesisSet h, PenaltyMatrix xi,
                                  std::vector<PartitionModel> sources);

  int num_hypotheses() const { return hypotheses.size(); }
  int num_sources() const {
    return backing == Backing::Likelihood ? static_cast<int>(likelihood_sources.size())
                                          : static_cast<int>(partition_sources.size());
  }
  double source_cost(int i) const;
};

// Checks every structural invariant; returns human-readable violations,
// empty when the instance is well formed. Never throws, never mutates.
std::vector<std::string> validate(const Instance& inst);

// Sum of selected source costs; empty subset costs 0.
double cost_of(const Instance& inst, std::span<const int> subset);

// KL divergence between the likelihood columns of theta_p and theta_q for one
// source: sum_o l(o|p) ln(l(o|p)/l(o|q)). Requires likelihood backing.
double kl_source(const Instance& inst, int source, int theta_p, int theta_q);

// Joint KL over a source subset; equals the sum of per-source divergences
// because sources are conditionally independent.
double kl_set(const Instance& inst, std::span<const int> subset, int theta_p, int theta_q);

// Tight uniform bound on |ln l_i(o|p)/l_i(o|q)| over all sources,
// observations and hypothesis pairs.
double compute_L(const Instance& inst);

// JSON instance I/O. A document holds `hypotheses` (string array),
// `penalties` (array of rows) and `sources` (objects with `cost` plus either
// `likelihood` or `partition`; mixing the two kinds is rejected). When
// `renormalize_penalty_rows` is set, penalty rows are scaled to sum to 1
// before construction; nothing is ever renormalized implicitly.
Instance parse_instance_json(const std::string& text, bool renormalize_penalty_rows = false);
Instance load_instance(const std::string& path, bool renormalize_penalty_rows = false);
std::string instance_to_json(const Instance& inst);

}  // namespace psel
