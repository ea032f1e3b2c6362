#include "factorprice/lcp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "factorprice/errors.hpp"

namespace factorprice {

namespace {

// Basic solution for a candidate support S: y_S solves B_SS y_S = -d0_S,
// y is zero off S, and w = d0 + B y is the demand at p - y.
struct BasicSolution {
  Vector y;
  Vector w;
  bool ok = true;
};

BasicSolution solve_support(const Matrix& B, const Vector& d0, const std::vector<int>& support) {
  const auto n = d0.size();
  BasicSolution sol{Vector::Zero(n), d0, true};
  if (support.empty()) return sol;
  const auto s = static_cast<Eigen::Index>(support.size());
  Matrix Bss(s, s);
  Vector rhs(s);
  for (Eigen::Index r = 0; r < s; ++r) {
    rhs(r) = -d0(support[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < s; ++c) {
      Bss(r, c) = B(support[static_cast<std::size_t>(r)], support[static_cast<std::size_t>(c)]);
    }
  }
  Eigen::LLT<Matrix> llt(Bss);
  if (llt.info() != Eigen::Success) {
    sol.ok = false;
    return sol;
  }
  const Vector ys = llt.solve(rhs);
  for (Eigen::Index r = 0; r < s; ++r) sol.y(support[static_cast<std::size_t>(r)]) = ys(r);
  for (Eigen::Index r = 0; r < s; ++r) sol.w.noalias() += B.col(support[static_cast<std::size_t>(r)]) * ys(r);
  for (int i : support) sol.w(i) = 0.0;
  return sol;
}

double feasibility_tolerance(const Vector& d0) { return 1e-13 * (1.0 + d0.cwiseAbs().maxCoeff()); }

LcpResult finish(const Vector& p, BasicSolution sol, std::vector<int> support, int iterations) {
  LcpResult out;
  for (Eigen::Index i = 0; i < sol.y.size(); ++i) {
    if (sol.y(i) < 0.0) sol.y(i) = 0.0;
    // Round-off negatives are reported as zero demand.
    if (sol.w(i) < 0.0 && sol.w(i) >= -1e-9) sol.w(i) = 0.0;
  }
  out.y = std::move(sol.y);
  out.adjusted_demand = std::move(sol.w);
  out.adjusted_profit = p.dot(out.adjusted_demand);
  out.support = std::move(support);
  out.iterations = iterations;
  return out;
}

LcpResult enumerate(const LinearModel& model, const Vector& p, const Vector& d0) {
  const int n = model.size();
  if (n > kMaxEnumerationSize) {
    std::ostringstream os;
    os << "lcp enumeration limited to n <= " << kMaxEnumerationSize << ", got " << n;
    throw ArgumentError(os.str());
  }
  const double tol = feasibility_tolerance(d0);
  int visited = 0;
  // Supports by cardinality, then lexicographically; the first feasible one wins.
  for (int k = 0; k <= n; ++k) {
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill_n(pick.begin(), k, true);
    do {
      std::vector<int> support;
      for (int i = 0; i < n; ++i) {
        if (pick[static_cast<std::size_t>(i)]) support.push_back(i);
      }
      ++visited;
      BasicSolution sol = solve_support(model.B(), d0, support);
      if (!sol.ok) continue;
      bool feasible = true;
      for (int i = 0; i < n && feasible; ++i) {
        feasible = pick[static_cast<std::size_t>(i)] ? sol.y(i) >= -tol : sol.w(i) >= -tol;
      }
      if (feasible) return finish(p, std::move(sol), std::move(support), visited);
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  throw NumericError("lcp enumeration found no feasible support (B not positive definite?)");
}

LcpResult pivot(const LinearModel& model, const Vector& p, const Vector& d0, const LcpOptions& options) {
  const int n = model.size();
  const int cap = options.max_iterations > 0 ? options.max_iterations : std::max(500, 50 * n);
  const double tol = feasibility_tolerance(d0);

  std::vector<char> in_support(static_cast<std::size_t>(n), 0);
  for (int i : options.warm_support) {
    if (i >= 0 && i < n) in_support[static_cast<std::size_t>(i)] = 1;
  }

  // Block principal pivoting: flip every infeasible index while the count
  // of infeasibilities keeps dropping, otherwise fall back to flipping the
  // largest infeasible index only (finite for P-matrices).
  int best_count = n + 1;
  int stalls = 0;
  constexpr int kMaxStalls = 3;
  std::vector<int> support;
  std::vector<int> infeasible;
  BasicSolution sol;
  for (int iter = 1; iter <= cap; ++iter) {
    support.clear();
    for (int i = 0; i < n; ++i) {
      if (in_support[static_cast<std::size_t>(i)]) support.push_back(i);
    }
    sol = solve_support(model.B(), d0, support);
    if (!sol.ok) throw NumericError("lcp pivoting: principal submatrix not positive definite");
    infeasible.clear();
    for (int i = 0; i < n; ++i) {
      const bool basic = in_support[static_cast<std::size_t>(i)] != 0;
      if ((basic && sol.y(i) < -tol) || (!basic && sol.w(i) < -tol)) infeasible.push_back(i);
    }
    if (infeasible.empty()) return finish(p, std::move(sol), std::move(support), iter);

    const int count = static_cast<int>(infeasible.size());
    if (count < best_count) {
      best_count = count;
      stalls = 0;
    } else {
      ++stalls;
    }
    if (stalls < kMaxStalls) {
      for (int i : infeasible) in_support[static_cast<std::size_t>(i)] ^= 1;
    } else {
      in_support[static_cast<std::size_t>(infeasible.back())] ^= 1;
    }
  }

  double worst_y = 0.0;
  double worst_w = 0.0;
  double worst_comp = 0.0;
  for (int i = 0; i < n; ++i) {
    worst_y = std::min(worst_y, sol.y(i));
    worst_w = std::min(worst_w, sol.w(i));
    worst_comp = std::max(worst_comp, std::abs(sol.y(i) * sol.w(i)));
  }
  std::ostringstream os;
  os << "lcp pivoting did not converge in " << cap << " iterations (min y = " << worst_y
     << ", min demand = " << worst_w << ", max |y_i d_i| = " << worst_comp << ")";
  throw NumericError(os.str());
}

}  // namespace

LcpResult lcp_adjust_demand(const LinearModel& model, const Vector& p, const Vector& raw_demand,
                            const LcpOptions& options) {
  if (options.method == LcpMethod::kEnumeration) return enumerate(model, p, raw_demand);
  if (options.warm_support.empty() && raw_demand.minCoeff() >= 0.0) {
    return finish(p, BasicSolution{Vector::Zero(raw_demand.size()), raw_demand, true}, {}, 0);
  }
  return pivot(model, p, raw_demand, options);
}

LcpResult lcp_adjust(const LinearModel& model, const Vector& p, const LcpOptions& options) {
  validate_prices(p, model.size());
  return lcp_adjust_demand(model, p, model.demand(p), options);
}

}  // namespace factorprice
