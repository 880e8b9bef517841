#include "qsi/scenarios.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qsi/born.hpp"
#include "qsi/entropy.hpp"
#include "qsi/optimize.hpp"

namespace qsi {

namespace {

constexpr double kPi = std::numbers::pi;

double pair_distance(const StateVectord& state, double a, double b) {
  const std::vector<DetectorSettingd> settings{{"A", a}, {"B", b}};
  return distance(build_entropy_table(joint_distribution(state, settings)), 0, 1);
}

double field_value(const SweepRow& r, SurfaceField field) {
  switch (field) {
    case SurfaceField::area_info: return r.area_info;
    case SurfaceField::area_euclid: return r.area_euclid;
    case SurfaceField::ratio: return r.ratio;
  }
  return r.area_info;
}

// ring order: walk the eight neighbours once around the centre
constexpr std::array<std::array<int, 2>, 8> kRing{{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}}};

std::optional<CriticalKind> classify_diffs(const std::array<double, 8>& diffs, double tol) {
  std::array<int, 8> sign{};
  int pos = 0, neg = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    sign[k] = diffs[k] > tol ? 1 : (diffs[k] < -tol ? -1 : 0);
    pos += sign[k] > 0;
    neg += sign[k] < 0;
  }
  if (pos == 0 && neg == 0) return CriticalKind::flat;
  if (pos == 0) return CriticalKind::maximum;
  if (neg == 0) return CriticalKind::minimum;
  std::vector<int> nonzero;
  for (int s : sign)
    if (s != 0) nonzero.push_back(s);
  int changes = 0;
  for (std::size_t k = 0; k < nonzero.size(); ++k)
    changes += nonzero[k] != nonzero[(k + 1) % nonzero.size()];
  if (changes >= 4) return CriticalKind::saddle;
  return std::nullopt;
}

}  // namespace

QuadSettings symmetric_chain(double delta) { return {0.0, 2.0 * delta, delta, 3.0 * delta}; }

ViolationScanRow quadrilateral(const StateVectord& state, const QuadSettings& s) {
  if (state.n_qubits() != 2)
    throw std::invalid_argument("quadrilateral: requires a two-observer state");
  ViolationScanRow row;
  row.d_a1b1 = pair_distance(state, s.a1, s.b1);
  row.d_a1b2 = pair_distance(state, s.a1, s.b2);
  row.d_a2b1 = pair_distance(state, s.a2, s.b1);
  row.d_a2b2 = pair_distance(state, s.a2, s.b2);
  row.path_sum = row.d_a1b1 + row.d_a2b1 + row.d_a2b2;
  row.check = quad_path_check(row.d_a1b2, row.d_a1b1, row.d_a2b1, row.d_a2b2);
  return row;
}

ViolationScanRow schumacher_scenario(double delta) {
  if (!(delta > 0.0 && delta < kPi / 6.0))
    throw std::invalid_argument("schumacher_scenario: delta must lie in (0, pi/6)");
  static const auto singlet = make_named_state<double>(NamedState::singlet_sym, 2);
  auto row = quadrilateral(singlet, symmetric_chain(delta));
  row.delta = delta;
  return row;
}

PresetScenario make_preset(Preset preset) {
  switch (preset) {
    case Preset::schumacher_symmetric:
      return {"schumacher-symmetric", make_named_state<double>(NamedState::singlet_sym, 2),
              symmetric_chain(0.15234)};
    case Preset::schumacher_original:
      return {"schumacher-original", make_named_state<double>(NamedState::singlet_anti, 2),
              {0.0, kPi / 8.0, kPi / 16.0, 3.0 * kPi / 16.0}};
  }
  throw std::invalid_argument("unknown preset");
}

Preset parse_preset(const std::string& name) {
  if (name == "schumacher-symmetric") return Preset::schumacher_symmetric;
  if (name == "schumacher-original") return Preset::schumacher_original;
  throw std::invalid_argument("unknown preset '" + name +
                              "' (expected schumacher-symmetric or schumacher-original)");
}

namespace {

template <typename RowFn>
DeltaScan scan_with(double lo, double hi, int steps, RowFn&& row_at) {
  if (steps < 2) throw std::invalid_argument("scan_delta: need at least 2 steps");
  if (!(lo < hi)) throw std::invalid_argument("scan_delta: empty range");
  DeltaScan scan;
  scan.rows.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    const double delta = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    scan.rows.push_back(row_at(delta));
  }
  for (std::size_t k = 1; k < scan.rows.size(); ++k)
    if (scan.rows[k].check.margin > scan.rows[scan.best].check.margin) scan.best = k;
  scan.best_at_boundary = scan.best == 0 || scan.best + 1 == scan.rows.size();
  return scan;
}

}  // namespace

DeltaScan scan_delta(double lo, double hi, int steps) {
  return scan_with(lo, hi, steps, [](double d) { return schumacher_scenario(d); });
}

DeltaScan scan_delta(const StateVectord& state, double lo, double hi, int steps) {
  if (state.n_qubits() != 2) throw std::invalid_argument("scan_delta: requires a two-observer state");
  return scan_with(lo, hi, steps, [&](double d) {
    auto row = quadrilateral(state, symmetric_chain(d));
    row.delta = d;
    return row;
  });
}

// ---------------------------------------------------------------------------

SweepRow sweep_point(const StateVectord& state, double beta, double gamma) {
  if (state.n_qubits() != 3) throw std::invalid_argument("sweep: requires a three-observer state");
  const std::vector<DetectorSettingd> settings{{"A", 0.0}, {"B", beta}, {"C", gamma}};
  const auto table = build_entropy_table(joint_distribution(state, settings));
  const auto face = face_report(table, 0, 1, 2);
  SweepRow row;
  row.beta = beta;
  row.gamma = gamma;
  row.d_ab = face.lengths[0];
  row.d_ac = face.lengths[1];
  row.d_bc = face.lengths[2];
  row.area_info = face.info_area;
  row.euclid_defined = face.euclid.defined;
  row.area_euclid = face.euclid.defined ? face.euclid.area : 0.0;
  row.ratio = face.ratio;
  return row;
}

Surface sweep_surface(const StateVectord& state, int grid_n, std::string name) {
  if (grid_n < 2) throw std::invalid_argument("sweep_surface: grid must have at least 2 points");
  Surface s;
  s.state_name = std::move(name);
  s.grid_n = grid_n;
  s.rows.reserve(static_cast<std::size_t>(grid_n) * static_cast<std::size_t>(grid_n));
  const double h = (kPi / 2.0) / static_cast<double>(grid_n - 1);
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      auto row = sweep_point(state, h * i, h * j);
      row.i = i;
      row.j = j;
      s.rows.push_back(row);
    }
  return s;
}

Surface sweep_surface(NamedState state, int grid_n) {
  if (state != NamedState::ghz && state != NamedState::w && state != NamedState::product_v)
    throw std::invalid_argument("sweep_surface: state must be ghz, w or product_v");
  return sweep_surface(make_named_state<double>(state, 3), grid_n, std::string(to_string(state)));
}

const char* to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::maximum: return "maximum";
    case CriticalKind::minimum: return "minimum";
    case CriticalKind::saddle: return "saddle";
    case CriticalKind::flat: return "flat";
  }
  return "?";
}

std::vector<CriticalPoint> critical_points(const Surface& surface, SurfaceField field, double tol) {
  if (surface.grid_n < 5) throw std::invalid_argument("critical_points: grid must be at least 5x5");
  std::vector<CriticalPoint> out;
  for (int i = 1; i + 1 < surface.grid_n; ++i)
    for (int j = 1; j + 1 < surface.grid_n; ++j) {
      const double c = field_value(surface.at(i, j), field);
      std::array<double, 8> diffs{};
      for (std::size_t k = 0; k < 8; ++k)
        diffs[k] = field_value(surface.at(i + kRing[k][0], j + kRing[k][1]), field) - c;
      if (auto kind = classify_diffs(diffs, tol)) {
        const auto& r = surface.at(i, j);
        out.push_back({i, j, r.beta, r.gamma, c, *kind});
      }
    }
  return out;
}

std::optional<CriticalKind> classify_ring(const std::function<double(double, double)>& f,
                                          double beta, double gamma, double step, double tol) {
  const double c = f(beta, gamma);
  std::array<double, 8> diffs{};
  for (std::size_t k = 0; k < 8; ++k)
    diffs[k] = f(beta + step * kRing[k][0], gamma + step * kRing[k][1]) - c;
  return classify_diffs(diffs, tol);
}

CriticalPoint refine_critical_point(const std::function<double(double, double)>& f,
                                    const CriticalPoint& candidate, double step, int levels) {
  CriticalPoint p = candidate;
  double h = step;
  for (int level = 0; level < levels; ++level) {
    h /= 4.0;
    // 9x9 patch spanning the previous cell; choose among its 7x7 interior
    double best_score = std::numeric_limits<double>::infinity();
    double best_b = p.beta, best_g = p.gamma;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        const double x = p.beta + a * h, y = p.gamma + b * h;
        double score = 0.0;
        switch (p.kind) {
          case CriticalKind::maximum: score = -f(x, y); break;
          case CriticalKind::minimum: score = f(x, y); break;
          case CriticalKind::saddle: {
            const double gx = (f(x + h, y) - f(x - h, y)) / (2 * h);
            const double gy = (f(x, y + h) - f(x, y - h)) / (2 * h);
            score = gx * gx + gy * gy;
            break;
          }
          case CriticalKind::flat: score = 0.0; break;
        }
        if (score < best_score) {
          best_score = score;
          best_b = x;
          best_g = y;
        }
      }
    p.beta = best_b;
    p.gamma = best_g;
  }
  p.value = f(p.beta, p.gamma);
  if (auto kind = classify_ring(f, p.beta, p.gamma, h)) p.kind = *kind;
  return p;
}

// ---------------------------------------------------------------------------

SearchResult search_violation(const StateVectord& state, Parameterization param,
                              const std::vector<double>& initial, std::size_t budget) {
  if (state.n_qubits() != 2)
    throw std::invalid_argument("search_violation: requires a two-observer state");
  if (budget < 1) throw std::invalid_argument("search_violation: budget must be at least 1");

  std::size_t used = 0;
  SearchResult best;
  best.margin = -std::numeric_limits<double>::infinity();
  auto consider = [&](const QuadSettings& s) {
    ++used;
    const auto row = quadrilateral(state, s);
    if (row.check.margin > best.margin) {
      best.margin = row.check.margin;
      best.settings = s;
      best.row = row;
    }
    return row.check.margin;
  };

  if (param == Parameterization::symmetric_delta) {
    if (!initial.empty() && initial.size() != 1)
      throw std::invalid_argument("search_violation: symmetric-delta takes one initial value");
    const std::size_t grid = std::clamp<std::size_t>(budget / 4, 1, 2048);
    for (std::size_t k = 0; k < grid && used < budget; ++k)
      consider(symmetric_chain((kPi / 2.0) * (static_cast<double>(k) + 0.5) / static_cast<double>(grid)));
    if (!initial.empty() && used < budget) consider(symmetric_chain(initial[0]));
    if (used < budget) {
      Eigen::VectorXd x0(1);
      x0 << best.settings.b1;
      nelder_mead_minimize<double>(
          [&](const Eigen::VectorXd& x) { return -consider(symmetric_chain(x(0))); }, x0,
          (kPi / 2.0) / static_cast<double>(grid), budget - used);
    }
  } else {
    if (!initial.empty() && initial.size() != 3)
      throw std::invalid_argument("search_violation: free search takes three initial values");
    // the symmetric chain is a subspace of the free search; seed with its optimum
    const std::size_t sub_budget = std::max<std::size_t>(1, budget / 4);
    const auto sym = search_violation(state, Parameterization::symmetric_delta, {}, sub_budget);
    used += sym.evaluations;
    if (sym.margin > best.margin) {
      best.margin = sym.margin;
      best.settings = sym.settings;
      best.row = sym.row;
    }
    if (!initial.empty() && used < budget) consider({0.0, initial[0], initial[1], initial[2]});

    const std::size_t remaining = budget > used ? budget - used : 0;
    const auto per_axis = static_cast<int>(
        std::clamp(std::floor(std::cbrt(static_cast<double>(remaining) / 2.0)), 1.0, 20.0));
    const double h = kPi / per_axis;
    for (int i = 0; i < per_axis && used < budget; ++i)
      for (int j = 0; j < per_axis && used < budget; ++j)
        for (int k = 0; k < per_axis && used < budget; ++k)
          consider({0.0, h * (i + 0.5), h * (j + 0.5), h * (k + 0.5)});
    if (used < budget) {
      Eigen::VectorXd x0(3);
      x0 << best.settings.a2, best.settings.b1, best.settings.b2;
      nelder_mead_minimize<double>(
          [&](const Eigen::VectorXd& x) { return -consider({0.0, x(0), x(1), x(2)}); }, x0,
          std::min(h, 0.05), budget - used);
    }
  }
  best.evaluations = used;
  if (param == Parameterization::symmetric_delta) best.row.delta = best.settings.b1;
  return best;
}

}  // namespace qsi
