#pragma once

// Information geometry over entropy tables: Rokhlin-Rajski distance, the
// information area and volume, their k-simplex generalization, and the
// Euclidean comparisons (Heron, path inequality, Cayley-Menger).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsi/born.hpp"
#include "qsi/entropy.hpp"
#include "qsi/observers.hpp"
#include "qsi/statekit.hpp"

namespace qsi {

/// Margins within this of zero count as satisfied / degenerate.
inline constexpr double kViolationTolerance = 1e-12;
/// Ratio reported when either area is unusable.
inline constexpr double kRatioUndefined = -1.0;

/// D_XY = 2 H_XY - H_X - H_Y.
template <typename Scalar>
Scalar distance(const EntropyTable<Scalar>& table, int x, int y) {
  if (x == y) throw std::invalid_argument("distance: vertices must differ");
  return Scalar(2) * table.joint(ObserverSet{x, y}) - table.joint(ObserverSet::single(x)) -
         table.joint(ObserverSet::single(y));
}

/// e_r(values): sum over all r-element products.
template <typename Scalar>
Scalar elementary_symmetric(std::span<const Scalar> values, int r) {
  // e[j] after processing a prefix holds e_j of that prefix
  std::vector<Scalar> e(static_cast<std::size_t>(r) + 1, Scalar(0));
  e[0] = Scalar(1);
  for (Scalar v : values)
    for (int j = r; j >= 1; --j) e[static_cast<std::size_t>(j)] += v * e[static_cast<std::size_t>(j - 1)];
  return e[static_cast<std::size_t>(r)];
}

template <typename Scalar>
std::vector<Scalar> fully_conditioned_entropies(const EntropyTable<Scalar>& table,
                                                std::span<const int> vertices) {
  ObserverSet set;
  for (int v : vertices) {
    if (set.contains(v)) throw std::invalid_argument("vertices must be distinct");
    set = set | ObserverSet::single(v);
  }
  std::vector<Scalar> out;
  out.reserve(vertices.size());
  for (int v : vertices) out.push_back(table.fully_conditioned(v, set));
  return out;
}

/// Generalized (m-1)-volume of m vertices: e_{m-1} of their fully
/// conditioned entropies. m = 2, 3, 4 give distance, area, volume. Beyond
/// four vertices this is an extrapolation of the same pattern.
template <typename Scalar>
Scalar k_volume(const EntropyTable<Scalar>& table, std::span<const int> vertices) {
  if (vertices.size() < 2) throw std::invalid_argument("k_volume: need at least 2 vertices");
  const auto c = fully_conditioned_entropies(table, vertices);
  return elementary_symmetric(std::span<const Scalar>(c), static_cast<int>(c.size()) - 1);
}

/// The area polynomial written in joint entropies only:
/// 3 H^2 - 2 (H_xy + H_yz + H_xz) H + (H_xz H_yz + H_xy H_xz + H_xy H_yz).
template <typename Scalar>
Scalar area_joint_form(const EntropyTable<Scalar>& table, int x, int y, int z) {
  const Scalar hxyz = table.joint(ObserverSet{x, y, z});
  const Scalar hxy = table.joint(ObserverSet{x, y});
  const Scalar hyz = table.joint(ObserverSet{y, z});
  const Scalar hxz = table.joint(ObserverSet{x, z});
  return Scalar(3) * hxyz * hxyz - Scalar(2) * (hxy + hyz + hxz) * hxyz +
         (hxz * hyz + hxy * hxz + hxy * hyz);
}

/// A_XYZ = H_{X|YZ} H_{Y|XZ} + H_{Y|XZ} H_{Z|XY} + H_{Z|XY} H_{X|YZ}.
/// Cross-checked against the joint-entropy polynomial.
template <typename Scalar>
Scalar area(const EntropyTable<Scalar>& table, int x, int y, int z) {
  const std::array<int, 3> v{x, y, z};
  const Scalar a = k_volume(table, std::span<const int>(v));
  using std::abs;
  const Scalar alt = area_joint_form(table, x, y, z);
  if (abs(a - alt) > Scalar(1e-10) * std::max(Scalar(1), abs(a)))
    throw std::logic_error("area: conditional and joint-entropy forms disagree");
  return a;
}

/// e_3 of the four fully conditioned entropies.
template <typename Scalar>
Scalar volume(const EntropyTable<Scalar>& table, int w, int x, int y, int z) {
  const std::array<int, 4> v{w, x, y, z};
  return k_volume(table, std::span<const int>(v));
}

/// The tetrahedron volume exactly as it is usually printed, with the second
/// product repeated and the (w, y, z) product absent. Kept for comparison
/// with the symmetric `volume`; differs from it by c_y c_z (c_x - c_w).
template <typename Scalar>
Scalar volume_printed_form(const EntropyTable<Scalar>& table, int w, int x, int y, int z) {
  const std::array<int, 4> v{w, x, y, z};
  const auto c = fully_conditioned_entropies(table, std::span<const int>(v));
  return c[0] * c[1] * c[2] + c[1] * c[2] * c[3] + c[2] * c[3] * c[1] + c[3] * c[0] * c[1];
}

template <typename Scalar>
struct HeronResult {
  bool defined = true;
  Scalar area{0};
  /// Most negative Heron factor when the triangle inequality fails.
  Scalar deficit{0};
};

/// Euclidean area of a triangle with the given side lengths, using the
/// sorted (Kahan) factorization. Factors within kViolationTolerance of zero
/// are snapped to a degenerate triangle.
template <typename Scalar>
HeronResult<Scalar> heron_area(Scalar d_ab, Scalar d_ac, Scalar d_bc) {
  using std::sqrt;
  if (!(d_ab >= Scalar(0)) || !(d_ac >= Scalar(0)) || !(d_bc >= Scalar(0)))
    throw std::invalid_argument("heron_area: lengths must be nonnegative");
  std::array<Scalar, 3> s{d_ab, d_ac, d_bc};
  std::sort(s.begin(), s.end(), std::greater<>());
  const Scalar a = s[0], b = s[1], c = s[2];
  const Scalar f1 = a + (b + c);
  Scalar f2 = c - (a - b);  // the only factor that can go negative
  const Scalar f3 = c + (a - b);
  const Scalar f4 = a + (b - c);
  HeronResult<Scalar> r;
  if (f2 < -Scalar(kViolationTolerance)) {
    r.defined = false;
    r.deficit = f2;
    return r;
  }
  if (f2 <= Scalar(kViolationTolerance)) f2 = Scalar(0);
  r.area = sqrt(f1 * f2 * f3 * f4) / Scalar(4);
  return r;
}

template <typename Scalar>
struct PathCheck {
  bool violated = false;
  /// direct - (sum of the path)
  Scalar margin{0};
};

/// Direct route vs. the three-edge detour around a quadrilateral.
template <typename Scalar>
PathCheck<Scalar> quad_path_check(Scalar direct, Scalar d1, Scalar d2, Scalar d3) {
  if (!(direct >= Scalar(0)) || !(d1 >= Scalar(0)) || !(d2 >= Scalar(0)) || !(d3 >= Scalar(0)))
    throw std::invalid_argument("quad_path_check: lengths must be nonnegative");
  PathCheck<Scalar> r;
  r.margin = direct - (d1 + d2 + d3);
  r.violated = r.margin > Scalar(kViolationTolerance);
  return r;
}

// ---------------------------------------------------------------------------
// Cayley-Menger embeddability

template <typename Scalar>
using DistanceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Bordered Cayley-Menger determinant of the points in `points`.
template <typename Scalar>
Scalar cayley_menger_determinant(const DistanceMatrix<Scalar>& d, std::span<const int> points) {
  const auto k = static_cast<Eigen::Index>(points.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cm(k + 1, k + 1);
  cm(0, 0) = Scalar(0);
  for (Eigen::Index i = 0; i < k; ++i) {
    cm(0, i + 1) = Scalar(1);
    cm(i + 1, 0) = Scalar(1);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Scalar dij = d(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
      cm(i + 1, j + 1) = dij * dij;
    }
  }
  return cm.fullPivLu().determinant();
}

/// Squared (k-1)-volume of a k-point simplex from its Cayley-Menger determinant.
template <typename Scalar>
Scalar simplex_squared_volume(const DistanceMatrix<Scalar>& d, std::span<const int> points) {
  const int dim = static_cast<int>(points.size()) - 1;
  Scalar factorial(1);
  for (int i = 2; i <= dim; ++i) factorial *= Scalar(i);
  const Scalar sign = (dim + 1) % 2 == 0 ? Scalar(1) : Scalar(-1);
  return sign * cayley_menger_determinant(d, points) /
         (std::ldexp(Scalar(1), dim) * factorial * factorial);
}

template <typename Scalar>
struct SimplexVolume {
  std::vector<int> points;
  Scalar squared_volume{0};
};

template <typename Scalar>
struct EmbeddingVerdict {
  int target_dim = 0;
  bool euclidean = true;         // embeds in some Euclidean space
  bool embeddable = true;        // embeds in R^target_dim
  int min_dim = 0;               // smallest dimension that works, when euclidean
  std::vector<SimplexVolume<Scalar>> negative;   // squared volume < 0
  std::vector<SimplexVolume<Scalar>> too_big;    // nonzero volume above target_dim
};

inline constexpr double kCayleyMengerTolerance = 1e-9;
inline constexpr int kMaxCayleyMengerPoints = 16;

/// Decides embeddability of a finite semimetric by the signs of the squared
/// volumes of all its sub-simplices. Missing distances (NaN) are rejected.
template <typename Scalar>
EmbeddingVerdict<Scalar> cayley_menger_embeddable(const DistanceMatrix<Scalar>& d, int target_dim) {
  using std::abs;
  using std::isnan;
  using std::pow;
  const auto n = static_cast<int>(d.rows());
  if (d.cols() != d.rows()) throw std::invalid_argument("cayley_menger: matrix must be square");
  if (n < 1 || n > kMaxCayleyMengerPoints)
    throw std::invalid_argument("cayley_menger: 1 to 16 points supported");
  if (target_dim < 0) throw std::invalid_argument("cayley_menger: negative target dimension");
  Scalar scale(0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (isnan(d(i, j)))
        throw std::invalid_argument("cayley_menger: incomplete edge set (missing distance " +
                                    std::to_string(i) + "-" + std::to_string(j) + ")");
      if (d(i, j) < Scalar(0) || abs(d(i, j) - d(j, i)) > Scalar(kViolationTolerance) ||
          (i == j && d(i, j) != Scalar(0)))
        throw std::invalid_argument("cayley_menger: not a symmetric nonnegative distance matrix");
      scale = std::max(scale, d(i, j));
    }
  }
  if (scale == Scalar(0)) scale = Scalar(1);

  EmbeddingVerdict<Scalar> v;
  v.target_dim = target_dim;
  std::vector<int> pts;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const int k = std::popcount(mask);
    if (k < 2) continue;
    pts.clear();
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) pts.push_back(i);
    const Scalar v2 = simplex_squared_volume(d, std::span<const int>(pts));
    const Scalar tol = Scalar(kCayleyMengerTolerance) * pow(scale, Scalar(2 * (k - 1)));
    if (v2 < -tol) {
      v.negative.push_back({pts, v2});
    } else if (v2 > tol) {
      v.min_dim = std::max(v.min_dim, k - 1);
      if (k - 1 > target_dim) v.too_big.push_back({pts, v2});
    }
  }
  v.euclidean = v.negative.empty();
  v.embeddable = v.euclidean && v.min_dim <= target_dim;
  return v;
}

// ---------------------------------------------------------------------------
// Simplex and octahedron reports

template <typename Scalar>
struct EdgeReport {
  int u = 0, v = 0;
  Scalar length{0};
};

template <typename Scalar>
struct FaceReport {
  std::array<int, 3> vertices{};
  /// lengths of (v0 v1), (v0 v2), (v1 v2)
  std::array<Scalar, 3> lengths{};
  Scalar info_area{0};
  HeronResult<Scalar> euclid;
  Scalar ratio{Scalar(kRatioUndefined)};
};

template <typename Scalar>
Scalar area_ratio(const HeronResult<Scalar>& euclid, Scalar info_area) {
  if (!euclid.defined || info_area < Scalar(kViolationTolerance)) return Scalar(kRatioUndefined);
  return euclid.area / info_area;
}

template <typename Scalar>
FaceReport<Scalar> face_report(const EntropyTable<Scalar>& table, int x, int y, int z) {
  FaceReport<Scalar> f;
  f.vertices = {x, y, z};
  f.lengths = {distance(table, x, y), distance(table, x, z), distance(table, y, z)};
  f.info_area = area(table, x, y, z);
  f.euclid = heron_area(f.lengths[0], f.lengths[1], f.lengths[2]);
  f.ratio = area_ratio(f.euclid, f.info_area);
  return f;
}

template <typename Scalar>
struct VolumeReport {
  std::array<int, 4> vertices{};
  Scalar volume{0};
  Scalar printed_form{0};
};

/// Everything measurable on the simplex spanned by all observers of a table.
template <typename Scalar>
struct SimplexGeometry {
  std::vector<std::string> labels;
  std::vector<Scalar> entropies;  // by subset mask
  std::vector<EdgeReport<Scalar>> edges;
  std::vector<FaceReport<Scalar>> faces;
  std::vector<VolumeReport<Scalar>> volumes;
  /// e_{n-1} over all n vertices (n >= 2)
  Scalar top_volume{0};
};

template <typename Scalar>
SimplexGeometry<Scalar> simplex_geometry(const EntropyTable<Scalar>& table) {
  const int n = table.n();
  SimplexGeometry<Scalar> g;
  g.labels = table.observers();
  g.entropies = table.by_mask();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j, distance(table, i, j)});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) g.faces.push_back(face_report(table, i, j, k));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
          g.volumes.push_back({{i, j, k, l}, volume(table, i, j, k, l),
                               volume_printed_form(table, i, j, k, l)});
  if (n >= 2) {
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    g.top_volume = k_volume(table, std::span<const int>(all));
  }
  return g;
}

/// Three observers with two detectors each. Vertex index = 2 * observer +
/// setting, labelled e.g. "A1", "A2". Same-observer pairs have no edge.
template <typename Scalar>
struct OctahedronReport {
  std::array<std::string, 6> vertex_labels;
  std::array<std::array<DetectorSetting<Scalar>, 2>, 3> settings;
  std::vector<EdgeReport<Scalar>> edges;   // 12
  std::vector<FaceReport<Scalar>> faces;   // 8, vertices are octahedron indices
  std::vector<EmbeddingVerdict<Scalar>> face_embedding;  // per face, target dim 2

  struct PathEntry {
    int observer_x = 0, observer_y = 0;
    EdgeReport<Scalar> direct;
    std::array<EdgeReport<Scalar>, 3> path;
    PathCheck<Scalar> check;
  };
  /// For every observer pair, each edge of its quadrilateral against the
  /// detour through the other three.
  std::vector<PathEntry> path_checks;

  /// The same-observer diagonals are not measurable, so the full edge set
  /// cannot be tested without a user-supplied completion.
  std::string full_embedding = "undetermined: same-observer distances are not defined";

  Scalar edge_length(int u, int v) const {
    for (const auto& e : edges)
      if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) return e.length;
    throw std::invalid_argument("octahedron: no edge between same-observer vertices");
  }
};

template <typename Scalar>
OctahedronReport<Scalar> octahedron_report(
    const StateVector<Scalar>& state,
    const std::array<std::array<DetectorSetting<Scalar>, 2>, 3>& settings) {
  if (state.n_qubits() != 3)
    throw std::invalid_argument("octahedron_report: requires a three-observer state");
  OctahedronReport<Scalar> r;
  r.settings = settings;
  for (int o = 0; o < 3; ++o)
    for (int s = 0; s < 2; ++s) {
      const auto& label = settings[static_cast<std::size_t>(o)][static_cast<std::size_t>(s)].observer;
      r.vertex_labels[static_cast<std::size_t>(2 * o + s)] =
          (label.empty() ? default_label(o) : label) + std::to_string(s + 1);
    }

  // one run per setting combination; each edge is taken from the run with
  // the remaining observer on its first setting
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        const std::vector<DetectorSetting<Scalar>> run{settings[0][static_cast<std::size_t>(a)],
                                                       settings[1][static_cast<std::size_t>(b)],
                                                       settings[2][static_cast<std::size_t>(c)]};
        const auto table = build_entropy_table(joint_distribution(state, run));
        auto face = face_report(table, 0, 1, 2);
        face.vertices = {a, 2 + b, 4 + c};
        if (c == 0) r.edges.push_back({a, 2 + b, face.lengths[0]});
        if (b == 0) r.edges.push_back({a, 4 + c, face.lengths[1]});
        if (a == 0) r.edges.push_back({2 + b, 4 + c, face.lengths[2]});

        DistanceMatrix<Scalar> d(3, 3);
        d << 0, face.lengths[0], face.lengths[1],
             face.lengths[0], 0, face.lengths[2],
             face.lengths[1], face.lengths[2], 0;
        r.face_embedding.push_back(cayley_menger_embeddable(d, 2));
        r.faces.push_back(face);
      }
  std::sort(r.edges.begin(), r.edges.end(), [](const auto& l, const auto& rr) {
    return l.u != rr.u ? l.u < rr.u : l.v < rr.v;
  });

  for (int x = 0; x < 3; ++x)
    for (int y = x + 1; y < 3; ++y) {
      // cycle x1 - y1 - x2 - y2 - x1
      const std::array<std::array<int, 2>, 4> cycle{{{2 * x, 2 * y},
                                                     {2 * y, 2 * x + 1},
                                                     {2 * x + 1, 2 * y + 1},
                                                     {2 * y + 1, 2 * x}}};
      for (int e = 0; e < 4; ++e) {
        typename OctahedronReport<Scalar>::PathEntry entry;
        entry.observer_x = x;
        entry.observer_y = y;
        auto edge = [&](int idx) {
          const auto& uv = cycle[static_cast<std::size_t>(idx % 4)];
          return EdgeReport<Scalar>{uv[0], uv[1], r.edge_length(uv[0], uv[1])};
        };
        entry.direct = edge(e);
        entry.path = {edge(e + 1), edge(e + 2), edge(e + 3)};
        entry.check = quad_path_check(entry.direct.length, entry.path[0].length,
                                      entry.path[1].length, entry.path[2].length);
        r.path_checks.push_back(entry);
      }
    }
  return r;
}

}  // namespace qsi
