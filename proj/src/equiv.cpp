#include "psel/equiv.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "psel/errors.hpp"

namespace psel {

namespace {

// Pairwise per-source KL over hypothesis columns; used both for membership
// and for the boundary guard.
double column_kl(const SourceModel& src, int from, int to) {
  double kl = 0;
  for (const auto& row : src.likelihood) kl += row[from] * std::log(row[from] / row[to]);
  return kl;
}

}  // namespace

EquivTable::EquivTable(const Instance& inst, double kl_tol)
    : inst_(&inst), m_(inst.num_hypotheses()), n_(inst.num_sources()) {
  sets_.assign(static_cast<std::size_t>(n_) * m_, HypoSet::none(m_));

  if (inst.backing == Backing::Partition) {
    for (int i = 0; i < n_; ++i) {
      for (const auto& block : inst.partition_sources[i].blocks) {
        HypoSet members = HypoSet::none(m_);
        for (int q : block) {
          if (q < 0 || q >= m_)
            throw Error("source " + std::to_string(i) + ": partition index out of range");
          members.set(q);
        }
        for (int q : block) sets_[i * m_ + q] = members;
      }
    }
    return;
  }

  double min_positive = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) {
    const auto& src = inst.likelihood_sources[i];
    for (int theta = 0; theta < m_; ++theta) {
      HypoSet members = HypoSet::none(m_);
      for (int q = 0; q < m_; ++q) {
        const double kl = q == theta ? 0.0 : column_kl(src, q, theta);
        if (kl <= kl_tol) {
          members.set(q);
        } else {
          min_positive = std::min(min_positive, kl);
        }
      }
      sets_[i * m_ + theta] = members;
    }
  }
  if (min_positive < 10 * kl_tol) {
    throw Error(
        "instance rejected: smallest nonzero per-source KL divergence (" +
        std::to_string(min_positive) +
        ") is within 10x of the equivalence threshold; columns this close cannot be "
        "classified as equal or distinct reliably");
  }
}

HypoSet EquivTable::of_set(std::span<const int> subset, int theta) const {
  HypoSet out = HypoSet::full(m_);
  for (int i : subset) out &= single(i, theta);
  return out;
}

EquivalenceSet equiv_single(const EquivTable& table, int source, int theta) {
  return {theta, table.single(source, theta)};
}

EquivalenceSet equiv_set(const EquivTable& table, std::span<const int> subset, int theta) {
  return {theta, table.of_set(subset, theta)};
}

EquivalenceSet equiv_single(const Instance& inst, int source, int theta) {
  return equiv_single(EquivTable(inst), source, theta);
}

EquivalenceSet equiv_set(const Instance& inst, std::span<const int> subset, int theta) {
  return equiv_set(EquivTable(inst), subset, theta);
}

}  // namespace psel
