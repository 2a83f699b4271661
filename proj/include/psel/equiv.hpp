#pragma once

#include <span>

#include "psel/hypo_set.hpp"
#include "psel/model.hpp"

namespace psel {

// F_theta(I): hypotheses indistinguishable from the anchor using sources I.
struct EquivalenceSet {
  int anchor = 0;
  HypoSet members;
};

// Precomputed per-(source, hypothesis) equivalence sets. Built once in the
// constructor; all queries afterwards are pure reads, so a table may be
// shared freely across threads.
//
// Likelihood backing uses a KL threshold (default kEquivKlTol) to decide
// column equality. Instances with a nonzero per-source divergence below ten
// times that threshold are rejected: they sit too close to the merge
// boundary for the equivalence relation to be trustworthy.
class EquivTable {
 public:
  explicit EquivTable(const Instance& inst, double kl_tol = kEquivKlTol);

  const Instance& instance() const { return *inst_; }
  int num_hypotheses() const { return m_; }
  int num_sources() const { return n_; }

  const HypoSet& single(int source, int theta) const { return sets_[source * m_ + theta]; }

  // Intersection of per-source sets over `subset`; the empty subset yields
  // the full hypothesis set (no source distinguishes anything).
  HypoSet of_set(std::span<const int> subset, int theta) const;

 private:
  const Instance* inst_;
  int m_ = 0;
  int n_ = 0;
  std::vector<HypoSet> sets_;
};

EquivalenceSet equiv_single(const EquivTable& table, int source, int theta);
EquivalenceSet equiv_set(const EquivTable& table, std::span<const int> subset, int theta);

// Convenience overloads that build a throwaway table.
EquivalenceSet equiv_single(const Instance& inst, int source, int theta);
EquivalenceSet equiv_set(const Instance& inst, std::span<const int> subset, int theta);

}  // namespace psel
