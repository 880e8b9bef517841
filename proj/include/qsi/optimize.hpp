#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace qsi {

template <typename Scalar>
struct NelderMeadResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar value{0};
  std::size_t evaluations = 0;
};

/// Derivative-free minimization with the standard reflection / expansion /
/// contraction / shrink coefficients (1, 2, 1/2, 1/2). Stops after `budget`
/// evaluations or when the simplex value spread falls below `ftol`.
template <typename Scalar, typename F, typename Derived>
NelderMeadResult<Scalar> nelder_mead_minimize(F&& f, const Eigen::MatrixBase<Derived>& start,
                                              Scalar initial_step, std::size_t budget,
                                              Scalar ftol = Scalar(1e-14)) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const auto dim = start.size();
  std::vector<Vec> pts(static_cast<std::size_t>(dim + 1), Vec(start));
  std::vector<Scalar> vals(pts.size());
  std::size_t evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };

  for (Eigen::Index i = 0; i < dim; ++i) pts[static_cast<std::size_t>(i + 1)](i) += initial_step;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (evals >= budget) break;
    vals[i] = eval(pts[i]);
  }
  if (evals < pts.size()) {
    // budget smaller than the initial simplex
    const auto best = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(evals)) - vals.begin());
    return {pts[best], vals[best], evals};
  }

  std::vector<std::size_t> order(pts.size());
  while (evals < budget) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    if (vals[worst] - vals[best] <= ftol) break;

    Vec centroid = Vec::Zero(dim);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != worst) centroid += pts[i];
    centroid /= Scalar(dim);

    const Vec reflected = centroid + (centroid - pts[worst]);
    const Scalar fr = eval(reflected);
    if (fr < vals[best]) {
      if (evals >= budget) { pts[worst] = reflected; vals[worst] = fr; break; }
      const Vec expanded = centroid + Scalar(2) * (centroid - pts[worst]);
      const Scalar fe = eval(expanded);
      if (fe < fr) { pts[worst] = expanded; vals[worst] = fe; }
      else { pts[worst] = reflected; vals[worst] = fr; }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = reflected;
      vals[worst] = fr;
      continue;
    }
    if (evals >= budget) break;
    const bool outside = fr < vals[worst];
    const Vec contracted = outside ? Vec(centroid + Scalar(0.5) * (reflected - centroid))
                                   : Vec(centroid + Scalar(0.5) * (pts[worst] - centroid));
    const Scalar fc = eval(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = contracted;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size() && evals < budget; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + Scalar(0.5) * (pts[i] - pts[best]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], evals};
}

}  // namespace qsi
