#pragma once

// Pure n-qubit polarization states and single-observer detector projectors.
//
// Basis convention: bit 0 = vertical polarization, bit 1 = horizontal.
// Amplitude index is lexicographic with observer 0 (A) as the most
// significant bit, so |b_0 b_1 ... b_{n-1}> sits at sum_k b_k 2^{n-1-k}.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qsi {

/// Raised when a file cannot be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

inline constexpr int kMaxQubits = 24;

inline std::size_t dimension_for(int n_qubits) {
  return std::size_t{1} << n_qubits;
}

/// Normalized amplitude vector of n qubits. Immutable after construction.
template <typename Scalar>
class StateVector {
 public:
  using Amplitudes = ComplexVector<Scalar>;

  static constexpr Scalar kNormTolerance = Scalar(1e-12);

  /// Takes ownership of already-normalized amplitudes; throws if the length
  /// is not 2^n or the squared norm is off by more than kNormTolerance.
  StateVector(int n_qubits, Amplitudes amplitudes)
      : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits)
      throw std::invalid_argument("state: qubit count out of range: " +
                                  std::to_string(n_qubits_));
    if (static_cast<std::size_t>(amplitudes_.size()) != dimension_for(n_qubits_))
      throw std::invalid_argument(
          "state: expected " + std::to_string(dimension_for(n_qubits_)) +
          " amplitudes for n=" + std::to_string(n_qubits_) + ", got " +
          std::to_string(amplitudes_.size()));
    using std::abs;
    const Scalar norm2 = amplitudes_.squaredNorm();
    if (!(abs(norm2 - Scalar(1)) <= kNormTolerance))
      throw std::invalid_argument("state: amplitudes are not normalized");
  }

  /// Normalizes arbitrary nonzero amplitudes.
  static StateVector normalized(int n_qubits, Amplitudes amplitudes) {
    const Scalar norm = amplitudes.norm();
    if (!(norm > Scalar(0)))
      throw std::invalid_argument("state: zero vector cannot be normalized");
    amplitudes /= norm;
    return StateVector(n_qubits, std::move(amplitudes));
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return dimension_for(n_qubits_); }
  const Amplitudes& amplitudes() const { return amplitudes_; }
  std::complex<Scalar> operator[](std::size_t index) const {
    return amplitudes_(static_cast<Eigen::Index>(index));
  }

 private:
  int n_qubits_;
  Amplitudes amplitudes_;
};

/// One observer's measurement axis. `polar` is the polarizer rotation angle
/// theta of |theta,phi> = cos(theta)|0> + e^{i phi} sin(theta)|1>, so theta
/// and theta + pi describe the same detector.
template <typename Scalar>
struct DetectorSetting {
  std::string observer;
  Scalar polar{0};
  Scalar azimuth{0};

  DetectorSetting() = default;
  DetectorSetting(std::string label, Scalar polar_angle, Scalar azimuth_angle = Scalar(0))
      : observer(std::move(label)), polar(polar_angle), azimuth(azimuth_angle) {
    using std::isfinite;
    if (!isfinite(polar) || !isfinite(azimuth))
      throw std::invalid_argument("detector setting for '" + observer +
                                  "': angles must be finite");
  }
};

template <typename Scalar>
struct Projector {
  int outcome = 0;
  Matrix2c<Scalar> matrix = Matrix2c<Scalar>::Zero();
};

template <typename Scalar>
struct ProjectorPair {
  Projector<Scalar> off;  // outcome 0: detector silent
  Projector<Scalar> on;   // outcome 1: detector triggers

  const Projector<Scalar>& operator[](int outcome) const {
    return outcome == 0 ? off : on;
  }
};

/// Outcome-1 projects onto |theta,phi>, outcome-0 onto its orthogonal state.
template <typename Scalar>
ProjectorPair<Scalar> detector_projectors(const DetectorSetting<Scalar>& setting) {
  using std::cos;
  using std::sin;
  using C = std::complex<Scalar>;
  const C phase = std::polar(Scalar(1), setting.azimuth);
  Eigen::Matrix<C, 2, 1> ket;
  ket << C(cos(setting.polar)), phase * sin(setting.polar);

  ProjectorPair<Scalar> pair;
  pair.on.outcome = 1;
  pair.on.matrix = ket * ket.adjoint();
  pair.off.outcome = 0;
  pair.off.matrix = Matrix2c<Scalar>::Identity() - pair.on.matrix;
  return pair;
}

enum class NamedState { ghz, w, product_v, singlet_sym, singlet_anti };

inline std::string_view to_string(NamedState name) {
  switch (name) {
    case NamedState::ghz: return "ghz";
    case NamedState::w: return "w";
    case NamedState::product_v: return "product_v";
    case NamedState::singlet_sym: return "singlet_sym";
    case NamedState::singlet_anti: return "singlet_anti";
  }
  return "?";
}

/// ghz:          (|0...0> + |1...1>)/sqrt(2)
/// w:            uniform superposition of the n basis states with exactly one 0
/// product_v:    |0...0>
/// singlet_sym:  (|00> + |11>)/sqrt(2)
/// singlet_anti: (|01> - |10>)/sqrt(2), the spin-1/2 singlet
template <typename Scalar>
StateVector<Scalar> make_named_state(NamedState name, int n) {
  using C = std::complex<Scalar>;
  using std::sqrt;
  if (n < 2 || n > kMaxQubits)
    throw std::invalid_argument("make_named_state: n must be in [2, " +
                                std::to_string(kMaxQubits) + "], got " + std::to_string(n));
  const std::size_t dim = dimension_for(n);
  ComplexVector<Scalar> amps = ComplexVector<Scalar>::Zero(static_cast<Eigen::Index>(dim));
  switch (name) {
    case NamedState::ghz: {
      const Scalar a = Scalar(1) / sqrt(Scalar(2));
      amps(0) = C(a);
      amps(static_cast<Eigen::Index>(dim - 1)) = C(a);
      break;
    }
    case NamedState::w: {
      const Scalar a = Scalar(1) / sqrt(Scalar(n));
      const std::size_t all_ones = dim - 1;
      for (int k = 0; k < n; ++k)
        amps(static_cast<Eigen::Index>(all_ones & ~(std::size_t{1} << k))) = C(a);
      break;
    }
    case NamedState::product_v:
      amps(0) = C(1);
      break;
    case NamedState::singlet_sym:
    case NamedState::singlet_anti: {
      if (n != 2)
        throw std::invalid_argument(std::string("make_named_state: ") +
                                    std::string(to_string(name)) + " requires n = 2");
      const Scalar a = Scalar(1) / sqrt(Scalar(2));
      if (name == NamedState::singlet_sym) {
        amps(0) = C(a);
        amps(3) = C(a);
      } else {
        amps(1) = C(a);
        amps(2) = C(-a);
      }
      break;
    }
  }
  return StateVector<Scalar>(n, std::move(amps));
}

/// Reads the plain-text state format:
///   line 1: n
///   then 2^n lines "re im"
/// Blank lines and lines starting with '#' are ignored. Inputs whose norm is
/// within 1e-6 of 1 are renormalized; anything further off is rejected.
StateVector<double> load_state(const std::filesystem::path& path);

/// Parses the same format from an in-memory string.
StateVector<double> parse_state(std::string_view text);

void save_state(const std::filesystem::path& path, const StateVector<double>& state);

/// Observer labels A, B, C, ...; past Z they become Q<k>.
inline std::string default_label(int index) {
  if (index < 26) return std::string(1, static_cast<char>('A' + index));
  return "Q" + std::to_string(index);
}

inline std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(default_label(k));
  return out;
}

using StateVectord = StateVector<double>;
using DetectorSettingd = DetectorSetting<double>;

}  // namespace qsi
