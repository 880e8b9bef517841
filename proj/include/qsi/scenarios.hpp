#pragma once

// Reproduction drivers: the two-observer quadrilateral (one detector pair per
// observer), tripartite area surfaces over (beta, gamma) with alpha = 0,
// critical-point classification on those surfaces, and a derivative-free
// search for path-inequality violations.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsi/infogeo.hpp"
#include "qsi/statekit.hpp"

namespace qsi {

/// Polarizer angles of the two detectors of A and of B.
struct QuadSettings {
  double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
};

/// a1 = 0, b1 = delta, a2 = 2 delta, b2 = 3 delta.
QuadSettings symmetric_chain(double delta);

struct ViolationScanRow {
  double delta = 0.0;  // meaningful for symmetric-chain rows
  double d_a1b1 = 0.0, d_a1b2 = 0.0, d_a2b1 = 0.0, d_a2b2 = 0.0;
  double path_sum = 0.0;  // d_a1b1 + d_a2b1 + d_a2b2
  PathCheck<double> check;  // direct d_a1b2 vs. path_sum
};

/// Four pairwise runs on a two-qubit state, distances and the direct-vs-path
/// check A1 -> B2 against A1 -> B1 -> A2 -> B2.
ViolationScanRow quadrilateral(const StateVectord& state, const QuadSettings& s);

/// Symmetric singlet on the symmetric chain; delta must lie in (0, pi/6).
ViolationScanRow schumacher_scenario(double delta);

enum class Preset { schumacher_symmetric, schumacher_original };

struct PresetScenario {
  std::string name;
  StateVectord state;
  QuadSettings settings;
};

/// schumacher-symmetric: symmetric photon singlet, delta = 0.15234.
/// schumacher-original: spin singlet with spin-axis angles 0, pi/4 (A) and
/// pi/8, 3pi/8 (B); detector angles are half the spin-axis angles.
PresetScenario make_preset(Preset preset);
Preset parse_preset(const std::string& name);

struct DeltaScan {
  std::vector<ViolationScanRow> rows;
  std::size_t best = 0;
  bool best_at_boundary = false;
};

/// `steps` equally spaced delta values over [lo, hi], endpoints included.
DeltaScan scan_delta(double lo, double hi, int steps);
/// Same chain on an arbitrary two-qubit state; no range restriction on delta.
DeltaScan scan_delta(const StateVectord& state, double lo, double hi, int steps);

// ---------------------------------------------------------------------------
// Surfaces

struct SweepRow {
  int i = 0, j = 0;  // grid indices of beta, gamma
  double beta = 0.0, gamma = 0.0;
  double d_ab = 0.0, d_ac = 0.0, d_bc = 0.0;
  double area_info = 0.0;
  double area_euclid = 0.0;  // 0 when undefined
  bool euclid_defined = true;
  double ratio = kRatioUndefined;
};

/// Geometry of the A, B, C triangle at alpha = 0.
SweepRow sweep_point(const StateVectord& state, double beta, double gamma);

struct Surface {
  std::string state_name;
  int grid_n = 0;
  std::vector<SweepRow> rows;  // row-major in (i, j)

  const SweepRow& at(int i, int j) const {
    return rows[static_cast<std::size_t>(i) * static_cast<std::size_t>(grid_n) +
                static_cast<std::size_t>(j)];
  }
};

inline constexpr int kDefaultGrid = 91;

/// grid_n x grid_n points over [0, pi/2]^2.
Surface sweep_surface(const StateVectord& state, int grid_n, std::string name = "custom");
Surface sweep_surface(NamedState state, int grid_n);

enum class CriticalKind { maximum, minimum, saddle, flat };
const char* to_string(CriticalKind kind);

enum class SurfaceField { area_info, area_euclid, ratio };

struct CriticalPoint {
  int i = 0, j = 0;
  double beta = 0.0, gamma = 0.0;
  double value = 0.0;
  CriticalKind kind = CriticalKind::flat;
};

/// Interior grid points whose eight-neighbour ring is not a single monotone
/// slope: all lower (maximum), all higher (minimum), four or more sign
/// changes around the ring (saddle), or all equal within `tol` (flat).
std::vector<CriticalPoint> critical_points(const Surface& surface,
                                           SurfaceField field = SurfaceField::area_info,
                                           double tol = 1e-12);

/// Classifies a point from its ring of eight neighbours at spacing `step`.
std::optional<CriticalKind> classify_ring(const std::function<double(double, double)>& f,
                                          double beta, double gamma, double step, double tol = 1e-12);

/// Local re-gridding: each level shrinks the cell by 4 and recentres on the
/// best point of the candidate's kind, then reclassifies.
CriticalPoint refine_critical_point(const std::function<double(double, double)>& f,
                                    const CriticalPoint& candidate, double step, int levels = 3);

// ---------------------------------------------------------------------------
// Violation search

enum class Parameterization { symmetric_delta, free };

struct SearchResult {
  QuadSettings settings;
  double margin = 0.0;
  std::size_t evaluations = 0;
  ViolationScanRow row;
};

/// Maximizes the path-inequality margin of a two-qubit state. symmetric_delta
/// searches the chain (0, 2d, d, 3d); free searches (a2, b1, b2) with a1 = 0.
/// `initial` (1 or 3 values, may be empty) is added to the coarse-grid seeds.
SearchResult search_violation(const StateVectord& state, Parameterization param,
                              const std::vector<double>& initial, std::size_t budget);

}  // namespace qsi
