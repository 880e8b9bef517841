#pragma once

// Shannon entropies (bits) of measured outcome tables.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsi/born.hpp"
#include "qsi/observers.hpp"

namespace qsi {

/// Probabilities at or below this are treated as exact zeros (0 log 0 = 0).
inline constexpr double kEntropyZero = 1e-15;

template <typename Derived>
typename Derived::Scalar shannon(const Eigen::MatrixBase<Derived>& probs) {
  using Scalar = typename Derived::Scalar;
  using std::log2;
  Scalar h(0);
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const Scalar p = probs(i);
    if (p > Scalar(kEntropyZero)) h -= p * log2(p);
  }
  // -sum p log p can round to -0 or -1e-17 for point masses
  return h > Scalar(0) ? h : Scalar(0);
}

template <typename Scalar>
Scalar shannon(const OutcomeDistribution<Scalar>& dist) {
  return shannon(dist.probs());
}

/// H_S: entropy of the marginal on `subset` (0 for the empty set).
template <typename Scalar>
Scalar joint_entropy(const OutcomeDistribution<Scalar>& dist, ObserverSet subset) {
  if (subset.empty()) return Scalar(0);
  return shannon(marginalize(dist, subset));
}

/// H_{T|G} = H_{T u G} - H_G.
template <typename Scalar>
Scalar conditional_entropy(const OutcomeDistribution<Scalar>& dist, ObserverSet target,
                           ObserverSet given) {
  if (!target.disjoint(given))
    throw std::invalid_argument("conditional_entropy: target and given sets overlap");
  return joint_entropy(dist, target | given) - joint_entropy(dist, given);
}

/// Joint entropies of every subset of observers, indexed by subset mask.
template <typename Scalar>
class EntropyTable {
 public:
  EntropyTable(std::vector<std::string> observers, std::vector<Scalar> by_mask)
      : observers_(std::move(observers)), h_(std::move(by_mask)) {
    if (h_.size() != dimension_for(n()))
      throw std::invalid_argument("entropy table: expected 2^n entries");
  }

  int n() const { return static_cast<int>(observers_.size()); }
  const std::vector<std::string>& observers() const { return observers_; }

  Scalar joint(ObserverSet s) const {
    require_within(s, n(), "entropy table");
    return h_[s.mask];
  }
  Scalar conditional(ObserverSet target, ObserverSet given) const {
    if (!target.disjoint(given))
      throw std::invalid_argument("entropy table: target and given sets overlap");
    return joint(target | given) - joint(given);
  }
  /// H of observer k given all the other members of `vertices`.
  Scalar fully_conditioned(int k, ObserverSet vertices) const {
    return joint(vertices) - joint(vertices.without(k));
  }
  const std::vector<Scalar>& by_mask() const { return h_; }

 private:
  std::vector<std::string> observers_;
  std::vector<Scalar> h_;
};

namespace detail {

/// Sums out the bit at position `bit` (0 = least significant) of a table.
template <typename Scalar>
RealVector<Scalar> sum_out(const RealVector<Scalar>& m, int bit) {
  const Eigen::Index half = m.size() / 2;
  RealVector<Scalar> out(half);
  const std::size_t low_mask = (std::size_t{1} << bit) - 1;
  for (Eigen::Index i = 0; i < half; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const std::size_t j0 = ((u & ~low_mask) << 1) | (u & low_mask);
    const std::size_t j1 = j0 | (std::size_t{1} << bit);
    out(i) = m(static_cast<Eigen::Index>(j0)) + m(static_cast<Eigen::Index>(j1));
  }
  return out;
}

}  // namespace detail

inline constexpr int kMaxEntropyTableObservers = 20;

/// All 2^n - 1 subset entropies. Each subset is reached once by removing
/// observers in increasing index order, so every marginal is one sum-out
/// away from its parent (about 3^n additions in total).
template <typename Scalar>
EntropyTable<Scalar> build_entropy_table(const OutcomeDistribution<Scalar>& dist) {
  const int n = dist.n();
  if (n > kMaxEntropyTableObservers)
    throw std::invalid_argument("build_entropy_table: at most 20 observers supported");
  std::vector<Scalar> h(dimension_for(n), Scalar(0));

  auto visit = [&](auto&& self, ObserverSet set, const RealVector<Scalar>& marginal,
                   int next_removable) -> void {
    h[set.mask] = shannon(marginal);
    const int size = set.size();
    if (size == 1) return;
    for (int k = next_removable; k < n; ++k) {
      if (!set.contains(k)) continue;
      const int bit = size - 1 - rank_in(set, k);
      self(self, set.without(k), detail::sum_out(marginal, bit), k + 1);
    }
  };
  visit(visit, ObserverSet::all(n), dist.probs(), 0);
  return EntropyTable<Scalar>(dist.observers(), std::move(h));
}

using EntropyTabled = EntropyTable<double>;

}  // namespace qsi
