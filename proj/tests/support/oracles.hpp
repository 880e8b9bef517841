#pragma once

// Reference computations kept deliberately separate from the library code
// paths: plain loops and std::complex instead of the Eigen kernels, explicit
// Kronecker products instead of per-qubit rotations, index-loop marginals
// instead of the sum-out table, and Gram eigenvalues instead of
// Cayley-Menger determinants.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;

inline double h2(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

/// Information distance of the symmetric singlet at relative angle theta.
inline double singlet_distance(double theta) {
  const double s = std::sin(theta);
  return 2.0 * h2(s * s);
}

inline double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 1e-15) h -= x * std::log2(x);
  return std::max(h, 0.0);
}

/// Detector ket for an outcome: 1 -> (cos t, e^{i f} sin t), 0 -> orthogonal.
inline std::array<cd, 2> detector_ket(double polar, double azimuth, int outcome) {
  const cd phase = std::polar(1.0, azimuth);
  if (outcome == 1) return {cd(std::cos(polar)), phase * std::sin(polar)};
  return {cd(-std::sin(polar)), phase * std::cos(polar)};
}

/// p(o) = |<k_o1| x ... x <k_on| psi>|^2 with the bra built as a full
/// Kronecker product (observer 0 most significant).
inline std::vector<double> brute_joint(const std::vector<cd>& amps, const std::vector<double>& polar,
                                       const std::vector<double>& azimuth) {
  const int n = static_cast<int>(polar.size());
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> p(dim, 0.0);
  for (std::size_t o = 0; o < dim; ++o) {
    std::vector<cd> ket{cd(1.0)};
    for (int k = 0; k < n; ++k) {
      const int bit = static_cast<int>((o >> (n - 1 - k)) & 1u);
      const auto v = detector_ket(polar[static_cast<std::size_t>(k)], azimuth[static_cast<std::size_t>(k)], bit);
      std::vector<cd> next;
      next.reserve(ket.size() * 2);
      for (const auto& x : ket) {
        next.push_back(x * v[0]);
        next.push_back(x * v[1]);
      }
      ket.swap(next);
    }
    cd amp(0.0);
    for (std::size_t i = 0; i < dim; ++i) amp += std::conj(ket[i]) * amps[i];
    p[o] = std::norm(amp);
  }
  return p;
}

/// Marginal on the observers whose bit is set in `keep` (bit k = observer k),
/// kept observers in increasing order, first one most significant.
inline std::vector<double> marginal(const std::vector<double>& p, int n, std::uint32_t keep) {
  std::vector<int> kept;
  for (int k = 0; k < n; ++k)
    if ((keep >> k) & 1u) kept.push_back(k);
  std::vector<double> m(std::size_t{1} << kept.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t j = 0;
    for (int k : kept) j = (j << 1) | ((i >> (n - 1 - k)) & 1u);
    m[j] += p[i];
  }
  return m;
}

inline double joint_entropy(const std::vector<double>& p, int n, std::uint32_t keep) {
  if (keep == 0) return 0.0;
  return entropy_of(marginal(p, n, keep));
}

/// Smallest Euclidean dimension of a distance matrix via the Gram matrix
/// relative to point 0; nullopt when a Gram eigenvalue is negative.
inline std::optional<int> gram_dimension(const Eigen::MatrixXd& d, double rel_tol = 1e-9) {
  const auto n = d.rows();
  if (n <= 1) return 0;
  Eigen::MatrixXd g(n - 1, n - 1);
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index j = 1; j < n; ++j)
      g(i - 1, j - 1) = 0.5 * (d(0, i) * d(0, i) + d(0, j) * d(0, j) - d(i, j) * d(i, j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int dim = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev < -rel_tol * scale) return std::nullopt;
    if (ev > rel_tol * scale) ++dim;
  }
  return dim;
}

inline std::vector<cd> random_amplitudes(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<cd> a(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& x : a) {
    x = cd(g(rng), g(rng));
    norm += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(norm);
  return a;
}

/// Random joint table over n binary observers, some entries exactly zero.
inline std::vector<double> random_table(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(std::size_t{1} << n);
  double s = 0.0;
  for (auto& x : p) {
    x = u(rng) < 0.15 ? 0.0 : u(rng);
    s += x;
  }
  if (s == 0.0) {
    p[0] = 1.0;
    s = 1.0;
  }
  for (auto& x : p) x /= s;
  return p;
}

/// A, B, C triangle of a three-observer state with equatorial detectors.
/// The area uses the joint-entropy polynomial, the Euclidean area the
/// semi-perimeter form; nan when the radicand is negative.
struct Triangle {
  double d_ab = 0, d_ac = 0, d_bc = 0, area = 0, euclid = 0;
};

inline Triangle triangle(const std::vector<cd>& amps, double alpha, double beta, double gamma) {
  const auto p = brute_joint(amps, {alpha, beta, gamma}, {0.0, 0.0, 0.0});
  auto H = [&](std::uint32_t m) { return joint_entropy(p, 3, m); };
  const double ha = H(1), hb = H(2), hc = H(4), hab = H(3), hac = H(5), hbc = H(6), habc = H(7);
  Triangle t;
  t.d_ab = 2 * hab - ha - hb;
  t.d_ac = 2 * hac - ha - hc;
  t.d_bc = 2 * hbc - hb - hc;
  const double ca = habc - hbc, cb = habc - hac, cc = habc - hab;
  t.area = ca * cb + cb * cc + cc * ca;
  const double s = 0.5 * (t.d_ab + t.d_ac + t.d_bc);
  const double r = s * (s - t.d_ab) * (s - t.d_ac) * (s - t.d_bc);
  t.euclid = r >= 0 ? std::sqrt(r) : (r > -1e-12 ? 0.0 : std::nan(""));
  return t;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace oracle
