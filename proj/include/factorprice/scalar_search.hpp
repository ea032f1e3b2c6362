#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace factorprice {

struct ScalarMaximum {
  double x = 0.0;
  double value = 0.0;
  bool at_lower_edge = false;  // best grid point was the first one
  bool at_upper_edge = false;  // best grid point was the last one
  int evaluations = 0;
};

/// Golden-section maximization of fn on [lo, hi] until the bracket is below tol.
template <class Fn>
ScalarMaximum golden_section_maximize(Fn&& fn, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  ScalarMaximum out;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  out.evaluations = 2;
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = fn(x2);
    }
    ++out.evaluations;
  }
  if (f1 >= f2) {
    out.x = x1;
    out.value = f1;
  } else {
    out.x = x2;
    out.value = f2;
  }
  return out;
}

/// Scans fn on the given increasing grid, then golden-section refines around the
/// best cell. Never returns less than the best grid value.
template <class Fn>
ScalarMaximum grid_then_golden_maximize(Fn&& fn, const std::vector<double>& grid, double tol) {
  ScalarMaximum best;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double v = fn(grid[k]);
    if (k == 0 || v > best.value) {
      best.value = v;
      best.x = grid[k];
      best_k = k;
    }
  }
  best.evaluations = static_cast<int>(grid.size());
  best.at_lower_edge = best_k == 0;
  best.at_upper_edge = best_k + 1 == grid.size();
  if (grid.size() < 2) return best;

  const double lo = grid[best_k == 0 ? 0 : best_k - 1];
  const double hi = grid[best_k + 1 == grid.size() ? best_k : best_k + 1];
  ScalarMaximum refined = golden_section_maximize(fn, lo, hi, tol);
  best.evaluations += refined.evaluations;
  if (refined.value > best.value) {
    best.value = refined.value;
    best.x = refined.x;
  }
  return best;
}

/// count points log-spaced over [lo, hi], endpoints included exactly.
inline std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double llo = std::log(lo);
  const double step = (std::log(hi) - llo) / (count - 1);
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = std::exp(llo + step * k);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

inline std::vector<double> linear_spaced(double lo, double hi, int count) {
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (hi - lo) / (count - 1);
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = lo + step * k;
  grid.back() = hi;
  return grid;
}

}  // namespace factorprice
