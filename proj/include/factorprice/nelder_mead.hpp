#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Core>

namespace factorprice {

struct NelderMeadOptions {
  int max_evaluations = 5000;
  double f_tolerance = 1e-12;  // relative spread of simplex values that counts as converged
  double x_tolerance = 1e-10;  // ... or the simplex collapses below this
  double initial_step = 0.1;   // relative to |x0_i|, floored at 1e-2
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead minimization with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
template <class Fn>
NelderMeadResult nelder_mead_minimize(Fn&& fn, const Eigen::VectorXd& x0, const NelderMeadOptions& options = {}) {
  const auto n = x0.size();
  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.reserve(static_cast<std::size_t>(n + 1));
  simplex.push_back(x0);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = x0;
    v(i) += options.initial_step * std::max(std::abs(x0(i)), 1e-2);
    simplex.push_back(std::move(v));
  }
  NelderMeadResult out;
  for (const auto& v : simplex) values.push_back(fn(v));
  out.evaluations = static_cast<int>(values.size());

  std::vector<std::size_t> order(simplex.size());
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    double size = 0.0;
    for (const auto& v : simplex) size = std::max(size, (v - simplex[best]).cwiseAbs().maxCoeff());
    const double spread = std::abs(values[worst] - values[best]);
    if (spread <= options.f_tolerance * (1.0 + std::abs(values[best])) || size <= options.x_tolerance) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= options.max_evaluations) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < simplex.size(); ++k) {
      if (k != worst) centroid += simplex[k];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = fn(reflected);
    ++out.evaluations;
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = fn(expanded);
      ++out.evaluations;
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = fn(contracted);
    ++out.evaluations;
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t k = 0; k < simplex.size(); ++k) {
      if (k == best) continue;
      simplex[k] = simplex[best] + 0.5 * (simplex[k] - simplex[best]);
      values[k] = fn(simplex[k]);
      ++out.evaluations;
    }
  }
  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best_k = static_cast<std::size_t>(std::distance(values.begin(), best_it));
  out.x = simplex[best_k];
  out.value = values[best_k];
  return out;
}

}  // namespace factorprice
