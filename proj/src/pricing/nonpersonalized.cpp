#include <algorithm>

#include "factorprice/errors.hpp"
#include "factorprice/nelder_mead.hpp"
#include "factorprice/pricing.hpp"

namespace factorprice {

namespace {

constexpr int kMaxSegmentStarts = 4;

HeuristicResult linear_closed_form(const MarketInstance& market) {
  const int n = market.n();
  Vector a = Vector::Zero(n);
  Matrix B = Matrix::Zero(n, n);
  for (const auto& s : market.segments()) {
    const auto& lin = std::get<LinearModel>(s.model);
    a += s.theta * lin.a();
    B += s.theta * lin.B();
  }
  const LinearModel averaged(a, B);
  HeuristicResult out;
  out.prices = (0.5 * averaged.utilities()).cwiseMax(0.0);
  out.profit = aggregate_profit(market, out.prices);
  out.method = "aggregate-closed-form";
  return out;
}

Vector project(const Vector& p) { return p.cwiseMax(0.0).cwiseMin(kMaxPrice); }

HeuristicResult multistart(const MarketInstance& market, const HeuristicOptions& options) {
  const PersonalizedSolution ps = personalized_optimize(market);
  const FactorOptions factor_options{.personalized = &ps, .grid_points = options.grid_points};

  std::vector<Vector> starts;
  for (int j = 0; j < std::min(kMaxSegmentStarts, market.m()); ++j) starts.push_back(ps.prices[static_cast<std::size_t>(j)]);
  const FactorResult economic = factor_optimize(market, economic_factor(ps), factor_options);
  starts.push_back(economic.q_star * economic.f);
  const FactorResult uniform = factor_optimize(market, Vector::Ones(market.n()), factor_options);

  HeuristicResult best;
  best.method = "nelder-mead-multistart";
  best.prices = uniform.q_star * uniform.f;
  best.profit = uniform.profit;
  if (economic.profit > best.profit) {
    best.prices = economic.q_star * economic.f;
    best.profit = economic.profit;
  }

  NelderMeadOptions nm;
  nm.max_evaluations =
      options.max_evaluations_per_start > 0 ? options.max_evaluations_per_start : 400 * (market.n() + 1);
  auto objective = [&](const Eigen::VectorXd& p) { return -aggregate_profit(market, project(p)); };
  for (const auto& start : starts) {
    const NelderMeadResult r = nelder_mead_minimize(objective, start, nm);
    const Vector p = project(r.x);
    const double profit = aggregate_profit(market, p);
    if (profit > best.profit) {
      best.prices = p;
      best.profit = profit;
    }
  }
  return best;
}

}  // namespace

HeuristicResult nonpersonalized_heuristic(const MarketInstance& market, const HeuristicOptions& options) {
  if (market.all_linear()) return linear_closed_form(market);
  return multistart(market, options);
}

}  // namespace factorprice
