#include <cmath>
#include <sstream>

#include "factorprice/errors.hpp"
#include "factorprice/pricing.hpp"
#include "factorprice/scalar_search.hpp"

namespace factorprice {

namespace {

constexpr double kMaxMarkup = 1e6;

std::pair<Vector, double> optimize_linear(const LinearModel& model) {
  Vector p = 0.5 * model.utilities();
  const double profit = p.dot(model.demand(p));
  return {std::move(p), profit};
}

// Optimal MNL prices have the form p_i = 1/b_i + m for a common markup m;
// maximize profit over that one-parameter family.
std::pair<Vector, double> optimize_mnl(const MnlSegmentModel& model) {
  const Vector base = model.b().cwiseInverse();
  auto profit = [&](double m) {
    const Vector p = (base.array() + m).matrix();
    return p.dot(model.demand(p));
  };

  double hi = 1.0;
  while (profit(hi) >= profit(0.5 * hi)) {
    hi *= 2.0;
    if (hi > kMaxMarkup) throw NumericError("mnl markup search: profit still increasing beyond 1e6");
  }
  ScalarMaximum best = grid_then_golden_maximize(profit, linear_spaced(0.0, hi, 400), 1e-12 * hi);

  // At the optimum the markup equals the segment profit, and m -> profit(m)
  // has zero slope there; a few fixed-point steps clean up golden-section noise.
  double m = best.x;
  double value = best.value;
  for (int k = 0; k < 20; ++k) {
    const double next = value;
    if (!(next >= 0.0) || std::abs(next - m) <= 1e-15 * (1.0 + m)) break;
    const double next_value = profit(next);
    if (next_value < value) break;
    m = next;
    value = next_value;
  }
  Vector p = (base.array() + m).matrix();
  return {std::move(p), value};
}

}  // namespace

std::pair<Vector, double> optimize_segment(const DemandModel& model) {
  if (const auto* lin = std::get_if<LinearModel>(&model)) return optimize_linear(*lin);
  return optimize_mnl(std::get<MnlSegmentModel>(model));
}

PersonalizedSolution make_personalized_solution(std::vector<double> thetas, std::vector<Vector> prices,
                                                std::vector<double> profits) {
  if (prices.empty()) throw ArgumentError("personalized solution: no segments");
  if (thetas.size() != prices.size() || profits.size() != prices.size()) {
    throw ArgumentError("personalized solution: thetas, prices and profits differ in length");
  }
  const auto n = prices.front().size();
  PersonalizedSolution ps;
  for (std::size_t j = 0; j < prices.size(); ++j) {
    if (prices[j].size() != n) throw ArgumentError("personalized solution: price vectors differ in length");
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = prices[j](i);
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "personalized price p[" << i << "][segment " << j << "] = " << v << " is not positive and finite";
        throw A0Violation(os.str());
      }
    }
    if (!(thetas[j] > 0.0)) throw ArgumentError("personalized solution: weights must be positive");
    ps.aggregate += thetas[j] * profits[j];
  }
  ps.thetas = std::move(thetas);
  ps.prices = std::move(prices);
  ps.profits = std::move(profits);
  return ps;
}

PersonalizedSolution restrict_to(const PersonalizedSolution& ps, std::span<const int> members) {
  if (members.empty()) throw ArgumentError("restrict_to: empty member list");
  double weight = 0.0;
  for (int j : members) {
    if (j < 0 || j >= ps.m()) throw ArgumentError("restrict_to: segment index out of range");
    weight += ps.thetas[static_cast<std::size_t>(j)];
  }
  std::vector<double> thetas;
  std::vector<Vector> prices;
  std::vector<double> profits;
  for (int j : members) {
    const auto k = static_cast<std::size_t>(j);
    thetas.push_back(ps.thetas[k] / weight);
    prices.push_back(ps.prices[k]);
    profits.push_back(ps.profits[k]);
  }
  return make_personalized_solution(std::move(thetas), std::move(prices), std::move(profits));
}

PersonalizedSolution personalized_optimize(const MarketInstance& market) {
  std::vector<double> thetas;
  std::vector<Vector> prices;
  std::vector<double> profits;
  for (const auto& s : market.segments()) {
    auto [p, r] = optimize_segment(s.model);
    thetas.push_back(s.theta);
    prices.push_back(std::move(p));
    profits.push_back(r);
  }
  return make_personalized_solution(std::move(thetas), std::move(prices), std::move(profits));
}

}  // namespace factorprice
