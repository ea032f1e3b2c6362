#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "factorprice/lcp.hpp"
#include "factorprice/market.hpp"

namespace factorprice {

/// Optimal price vector and profit for every segment, plus the
/// theta-weighted personalized profit R̄.
struct PersonalizedSolution {
  std::vector<double> thetas;
  std::vector<Vector> prices;   // p̄^j
  std::vector<double> profits;  // R*_j
  double aggregate = 0.0;       // R̄

  int m() const { return static_cast<int>(prices.size()); }
  int n() const { return prices.empty() ? 0 : static_cast<int>(prices.front().size()); }
  double price(int i, int j) const { return prices[static_cast<std::size_t>(j)](i); }
};

/// Builds a solution from per-segment data, checking that every price is
/// positive and finite (throws A0Violation otherwise).
PersonalizedSolution make_personalized_solution(std::vector<double> thetas, std::vector<Vector> prices,
                                                std::vector<double> profits);

/// Restriction to a subset of segments, weights renormalized.
PersonalizedSolution restrict_to(const PersonalizedSolution& ps, std::span<const int> members);

/// Per-segment optimum. Linear segments use p̄ = B^{-1}a / 2; MNL segments
/// search the markup m in p̄_i = 1/b_i + m.
PersonalizedSolution personalized_optimize(const MarketInstance& market);

/// Optimal price vector and profit for a single segment.
std::pair<Vector, double> optimize_segment(const DemandModel& model);

struct QRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct FactorOptions {
  std::optional<QRange> q_range;                     // constraint box on q
  const PersonalizedSolution* personalized = nullptr;  // sets the default bracket
  int grid_points = 2000;
  double tolerance = 1e-9;  // absolute, on q
};

struct FactorResult {
  Vector f;
  double q_star = 0.0;
  double profit = 0.0;            // R^f
  std::optional<QRange> q_range;  // as supplied
  QRange bracket;                 // interval actually searched
  bool on_bracket_edge = false;   // best grid point was an endpoint of the bracket
};

/// R(q f) with linear segments LCP-adjusted. Keeps a warm-start support per
/// linear segment, so one evaluator must not be shared between threads.
class RayProfit {
 public:
  RayProfit(const MarketInstance& market, Vector f);

  double operator()(double q);
  const Vector& direction() const { return f_; }

 private:
  const MarketInstance* market_;
  Vector f_;
  std::vector<Vector> bf_;  // B_j f for linear segments
  std::vector<std::vector<int>> warm_;
};

/// max_{q} R(q f): dense log grid over the bracket, then golden-section
/// refinement around the best cell. Throws ArgumentError for non-positive f
/// or an empty/invalid range.
FactorResult factor_optimize(const MarketInstance& market, const Vector& f, const FactorOptions& options = {});

/// f = sum_j alpha_j p̄^j with alpha_j = theta_j R*_j / R̄.
/// Throws DegenerateMarketError when R̄ = 0.
Vector economic_factor(const PersonalizedSolution& ps);

struct RobustFactor {
  Vector f;                // sqrt(p^L_i p^H_i)
  double rho_star = 1.0;   // max_i p^H_i / p^L_i
};

RobustFactor robust_factor(const PersonalizedSolution& ps);

/// q_max / q_min of the ratios p̄_ij / f_i.
double price_ratio_spread(const PersonalizedSolution& ps, const Vector& f);

/// f(x) = g(e'x). g must be strictly increasing and positive on 1..base_n.
Vector bundle_size_factor(const BundleMarket& bundles, const std::function<double(int)>& g);

/// f(x) = p'x for strictly positive component prices p.
Vector component_factor(const BundleMarket& bundles, const Vector& component_prices);

/// f_i = i for size-indexed bundles: the linear price schedule.
Vector linear_schedule_factor(int n);

struct HeuristicResult {
  Vector prices;
  double profit = 0.0;
  std::string method;  // "aggregate-closed-form" or "nelder-mead-multistart"
};

struct HeuristicOptions {
  int grid_points = 2000;
  int max_evaluations_per_start = 0;  // 0 selects 400 * (n + 1)
};

/// Non-personalized price vector (not an optimum).
///
/// All-linear markets: p = B̂^{-1}â / 2 for the theta-averaged (â, B̂), with
/// realized profit from LCP-adjusted demand. Otherwise Nelder-Mead from the
/// personalized prices of the first four segments and the economic-factor
/// solution; the uniform-factor solution is kept as a candidate as well.
HeuristicResult nonpersonalized_heuristic(const MarketInstance& market, const HeuristicOptions& options = {});

}  // namespace factorprice
