#pragma once

// Exact outcome statistics for n observers, one detector each, measuring a
// shared pure state.
//
// Outcome tables are indexed like amplitudes: for a table over observers
// S = {s_0 < s_1 < ...}, the outcome bit of s_0 is the most significant bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsi/observers.hpp"
#include "qsi/statekit.hpp"

namespace qsi {

enum class Provenance { exact, empirical };

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
class OutcomeDistribution {
 public:
  static constexpr Scalar kSumTolerance = Scalar(1e-10);

  OutcomeDistribution(std::vector<std::string> observers, RealVector<Scalar> probs)
      : observers_(std::move(observers)), probs_(std::move(probs)) {
    validate_shape();
    using std::abs;
    for (Eigen::Index i = 0; i < probs_.size(); ++i)
      if (!(probs_(i) >= Scalar(0)))
        throw std::invalid_argument("distribution: negative or NaN probability");
    if (!(abs(probs_.sum() - Scalar(1)) <= kSumTolerance))
      throw std::invalid_argument("distribution: probabilities do not sum to 1");
  }

  /// Empirical table from outcome counts; probabilities are count / total.
  static OutcomeDistribution from_counts(std::vector<std::string> observers,
                                         std::vector<std::uint64_t> counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw std::invalid_argument("distribution: no counts");
    RealVector<Scalar> probs(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t i = 0; i < counts.size(); ++i)
      probs(static_cast<Eigen::Index>(i)) = Scalar(counts[i]) / Scalar(total);
    OutcomeDistribution d(std::move(observers), std::move(probs), Provenance::empirical);
    d.counts_ = std::move(counts);
    d.total_ = total;
    return d;
  }

  int n() const { return static_cast<int>(observers_.size()); }
  std::size_t size() const { return static_cast<std::size_t>(probs_.size()); }
  const std::vector<std::string>& observers() const { return observers_; }
  const RealVector<Scalar>& probs() const { return probs_; }
  Provenance provenance() const { return provenance_; }
  /// Raw counts (empirical tables only; empty otherwise).
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total_count() const { return total_; }

  Scalar operator[](std::size_t outcome) const {
    return probs_(static_cast<Eigen::Index>(outcome));
  }

  /// Probability of an outcome given as one bit per observer, in order.
  Scalar probability(std::span<const int> bits) const {
    if (static_cast<int>(bits.size()) != n())
      throw std::invalid_argument("distribution: outcome has wrong length");
    std::size_t index = 0;
    for (int b : bits) index = (index << 1) | static_cast<std::size_t>(b != 0);
    return (*this)[index];
  }
  Scalar probability(std::initializer_list<int> bits) const {
    return probability(std::span<const int>(bits.begin(), bits.size()));
  }

  int index_of(const std::string& label) const {
    auto it = std::find(observers_.begin(), observers_.end(), label);
    if (it == observers_.end())
      throw std::invalid_argument("distribution: unknown observer '" + label + "'");
    return static_cast<int>(it - observers_.begin());
  }

 private:
  OutcomeDistribution(std::vector<std::string> observers, RealVector<Scalar> probs,
                      Provenance provenance)
      : observers_(std::move(observers)), probs_(std::move(probs)), provenance_(provenance) {
    validate_shape();
  }

  void validate_shape() const {
    if (observers_.empty() || observers_.size() > 30)
      throw std::invalid_argument("distribution: observer count out of range");
    if (static_cast<std::size_t>(probs_.size()) != dimension_for(n()))
      throw std::invalid_argument("distribution: table length must be 2^n");
  }

  std::vector<std::string> observers_;
  RealVector<Scalar> probs_;
  Provenance provenance_ = Provenance::exact;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;

  template <typename S>
  friend OutcomeDistribution<S> marginalize(const OutcomeDistribution<S>&, ObserverSet);
};

namespace detail {

/// Applies a 2x2 operator to the qubit of observer `k` in place.
template <typename Scalar>
void apply_local(ComplexVector<Scalar>& psi, int n, int k, const Matrix2c<Scalar>& op) {
  const std::size_t stride = std::size_t{1} << (n - 1 - k);
  const std::size_t dim = dimension_for(n);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t off = 0; off < stride; ++off) {
      const auto i0 = static_cast<Eigen::Index>(base + off);
      const auto i1 = static_cast<Eigen::Index>(base + off + stride);
      const auto a0 = psi(i0);
      const auto a1 = psi(i1);
      psi(i0) = op(0, 0) * a0 + op(0, 1) * a1;
      psi(i1) = op(1, 0) * a0 + op(1, 1) * a1;
    }
  }
}

/// Rows are <v_0| and <v_1|, the bras of the two detector outcomes.
template <typename Scalar>
Matrix2c<Scalar> detector_basis(const DetectorSetting<Scalar>& s) {
  using std::cos;
  using std::sin;
  using C = std::complex<Scalar>;
  const C phase = std::polar(Scalar(1), s.azimuth);
  Matrix2c<Scalar> u;
  u << -phase * sin(s.polar), C(cos(s.polar)),
       C(cos(s.polar)), std::conj(phase) * sin(s.polar);
  return u;
}

template <typename Scalar>
void require_settings(const StateVector<Scalar>& state,
                      std::span<const DetectorSetting<Scalar>> settings) {
  if (static_cast<int>(settings.size()) != state.n_qubits())
    throw std::invalid_argument("expected " + std::to_string(state.n_qubits()) +
                                " detector settings, got " + std::to_string(settings.size()));
}

template <typename Scalar>
std::vector<std::string> labels_of(std::span<const DetectorSetting<Scalar>> settings) {
  std::vector<std::string> labels;
  labels.reserve(settings.size());
  for (std::size_t k = 0; k < settings.size(); ++k)
    labels.push_back(settings[k].observer.empty() ? default_label(static_cast<int>(k))
                                                  : settings[k].observer);
  return labels;
}

/// Collapses observer k onto `outcome`; returns the outcome probability and
/// leaves `psi` unnormalized when the probability is zero.
template <typename Scalar>
Scalar collapse(ComplexVector<Scalar>& psi, int n, int k, const Projector<Scalar>& proj) {
  apply_local(psi, n, k, proj.matrix);
  const Scalar p = psi.squaredNorm();
  if (p > Scalar(0)) psi /= std::sqrt(p);
  return p;
}

}  // namespace detail

/// p(o) = || (P_{o_0} (x) ... (x) P_{o_{n-1}}) |psi> ||^2, computed by rotating
/// every qubit into its detector basis.
template <typename Scalar>
OutcomeDistribution<Scalar> joint_distribution(const StateVector<Scalar>& state,
                                               std::span<const DetectorSetting<Scalar>> settings) {
  detail::require_settings(state, settings);
  const int n = state.n_qubits();
  ComplexVector<Scalar> psi = state.amplitudes();
  for (int k = 0; k < n; ++k)
    detail::apply_local(psi, n, k, detail::detector_basis(settings[static_cast<std::size_t>(k)]));
  RealVector<Scalar> probs = psi.cwiseAbs2();
  return OutcomeDistribution<Scalar>(detail::labels_of(settings), std::move(probs));
}

template <typename Scalar>
OutcomeDistribution<Scalar> joint_distribution(const StateVector<Scalar>& state,
                                               const std::vector<DetectorSetting<Scalar>>& settings) {
  return joint_distribution(state, std::span<const DetectorSetting<Scalar>>(settings));
}

/// Sums out every observer not in `keep`. Provenance (and counts) carry over.
template <typename Scalar>
OutcomeDistribution<Scalar> marginalize(const OutcomeDistribution<Scalar>& dist, ObserverSet keep) {
  const int n = dist.n();
  require_within(keep, n, "marginalize");
  if (keep.empty()) throw std::invalid_argument("marginalize: empty observer subset");

  const int m = keep.size();
  std::vector<std::string> labels;
  for (int k = 0; k < n; ++k)
    if (keep.contains(k)) labels.push_back(dist.observers()[static_cast<std::size_t>(k)]);

  auto project = [&](std::size_t full) {
    std::size_t out = 0;
    for (int k = 0; k < n; ++k)
      if (keep.contains(k)) out = (out << 1) | ((full >> (n - 1 - k)) & 1u);
    return out;
  };

  const std::size_t dim = dimension_for(m);
  if (dist.provenance() == Provenance::empirical) {
    std::vector<std::uint64_t> counts(dim, 0);
    for (std::size_t i = 0; i < dist.size(); ++i) counts[project(i)] += dist.counts()[i];
    return OutcomeDistribution<Scalar>::from_counts(std::move(labels), std::move(counts));
  }
  RealVector<Scalar> probs = RealVector<Scalar>::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dist.size(); ++i)
    probs(static_cast<Eigen::Index>(project(i))) += dist[i];
  return OutcomeDistribution<Scalar>(std::move(labels), std::move(probs),
                                     Provenance::exact);
}

/// p(target | given). Columns conditioned on a zero-probability event are
/// flagged undefined rather than filled with 0/0.
template <typename Scalar>
struct ConditionalTable {
  static constexpr Scalar kZeroEvent = Scalar(1e-15);

  ObserverSet target;
  ObserverSet given;
  /// rows: target outcome, cols: given outcome
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;
  std::vector<bool> defined;

  std::optional<Scalar> at(std::size_t target_outcome, std::size_t given_outcome) const {
    if (!defined.at(given_outcome)) return std::nullopt;
    return values(static_cast<Eigen::Index>(target_outcome),
                  static_cast<Eigen::Index>(given_outcome));
  }
};

template <typename Scalar>
ConditionalTable<Scalar> conditional(const OutcomeDistribution<Scalar>& dist, ObserverSet target,
                                     ObserverSet given) {
  const int n = dist.n();
  require_within(target | given, n, "conditional");
  if (target.empty()) throw std::invalid_argument("conditional: empty target set");
  if (!target.disjoint(given))
    throw std::invalid_argument("conditional: target and given sets overlap");

  const int nt = target.size();
  const int ng = given.size();
  ConditionalTable<Scalar> table;
  table.target = target;
  table.given = given;
  table.values = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
      static_cast<Eigen::Index>(dimension_for(nt)), static_cast<Eigen::Index>(dimension_for(ng)));

  for (std::size_t i = 0; i < dist.size(); ++i) {
    std::size_t t = 0;
    std::size_t g = 0;
    for (int k = 0; k < n; ++k) {
      const std::size_t bit = (i >> (n - 1 - k)) & 1u;
      if (target.contains(k)) t = (t << 1) | bit;
      if (given.contains(k)) g = (g << 1) | bit;
    }
    table.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(g)) += dist[i];
  }

  table.defined.assign(dimension_for(ng), false);
  for (Eigen::Index g = 0; g < table.values.cols(); ++g) {
    const Scalar pg = table.values.col(g).sum();
    if (pg > ConditionalTable<Scalar>::kZeroEvent) {
      table.values.col(g) /= pg;
      table.defined[static_cast<std::size_t>(g)] = true;
    } else {
      table.values.col(g).setZero();
    }
  }
  return table;
}

inline constexpr double kMinOutcomeProbability = 1e-14;

/// M|psi>/||M|psi>|| for the projector of `outcome` on observer `observer`.
template <typename Scalar>
StateVector<Scalar> post_measurement_state(const StateVector<Scalar>& state, int observer,
                                           const DetectorSetting<Scalar>& setting, int outcome) {
  const int n = state.n_qubits();
  if (observer < 0 || observer >= n)
    throw std::invalid_argument("post_measurement_state: observer index out of range");
  if (outcome != 0 && outcome != 1)
    throw std::invalid_argument("post_measurement_state: outcome must be 0 or 1");
  ComplexVector<Scalar> psi = state.amplitudes();
  const Scalar p = detail::collapse(psi, n, observer, detector_projectors(setting)[outcome]);
  if (!(p > Scalar(kMinOutcomeProbability)))
    throw std::invalid_argument("post_measurement_state: outcome " + std::to_string(outcome) +
                                " has zero probability");
  return StateVector<Scalar>(n, std::move(psi));
}

/// Builds the joint table by measuring observers one after another in
/// `order`, collapsing the state after each step.
template <typename Scalar>
OutcomeDistribution<Scalar> sequential_distribution(const StateVector<Scalar>& state,
                                                    std::span<const DetectorSetting<Scalar>> settings,
                                                    std::span<const int> order) {
  detail::require_settings(state, settings);
  const int n = state.n_qubits();
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("sequential_distribution: order must list every observer");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int k : order) {
    if (k < 0 || k >= n || seen[static_cast<std::size_t>(k)])
      throw std::invalid_argument("sequential_distribution: order is not a permutation");
    seen[static_cast<std::size_t>(k)] = true;
  }

  std::vector<ProjectorPair<Scalar>> projectors;
  projectors.reserve(settings.size());
  for (const auto& s : settings) projectors.push_back(detector_projectors(s));

  RealVector<Scalar> probs = RealVector<Scalar>::Zero(static_cast<Eigen::Index>(state.dimension()));
  auto recurse = [&](auto&& self, const ComplexVector<Scalar>& psi, std::size_t step,
                     std::size_t outcome, Scalar weight) -> void {
    if (step == order.size()) {
      probs(static_cast<Eigen::Index>(outcome)) += weight;
      return;
    }
    const int k = order[step];
    for (int bit = 0; bit < 2; ++bit) {
      ComplexVector<Scalar> next = psi;
      const Scalar p = detail::collapse(next, n, k, projectors[static_cast<std::size_t>(k)][bit]);
      if (p == Scalar(0)) continue;
      self(self, next, step + 1,
           outcome | (static_cast<std::size_t>(bit) << (n - 1 - k)), weight * p);
    }
  };
  recurse(recurse, state.amplitudes(), 0, 0, Scalar(1));
  return OutcomeDistribution<Scalar>(detail::labels_of(settings), std::move(probs));
}

template <typename Scalar>
OutcomeDistribution<Scalar> sequential_distribution(const StateVector<Scalar>& state,
                                                    const std::vector<DetectorSetting<Scalar>>& settings,
                                                    const std::vector<int>& order) {
  return sequential_distribution(state, std::span<const DetectorSetting<Scalar>>(settings),
                                 std::span<const int>(order));
}

/// Convenience: settings for observers A, B, C, ... from polarizer angles.
template <typename Scalar>
std::vector<DetectorSetting<Scalar>> equatorial_settings(std::initializer_list<Scalar> angles) {
  std::vector<DetectorSetting<Scalar>> out;
  int k = 0;
  for (Scalar a : angles) out.emplace_back(default_label(k++), a);
  return out;
}

template <typename Scalar>
std::vector<DetectorSetting<Scalar>> equatorial_settings(std::span<const Scalar> angles) {
  std::vector<DetectorSetting<Scalar>> out;
  int k = 0;
  for (Scalar a : angles) out.emplace_back(default_label(k++), a);
  return out;
}

using OutcomeDistributiond = OutcomeDistribution<double>;

}  // namespace qsi
