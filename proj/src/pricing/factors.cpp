#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "factorprice/errors.hpp"
#include "factorprice/pricing.hpp"
#include "factorprice/scalar_search.hpp"

namespace factorprice {

namespace {

void require_positive(const Vector& f, const char* what) {
  if (f.size() < 1) throw ArgumentError(std::string(what) + ": empty factor");
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!(f(i) > 0.0) || !std::isfinite(f(i))) {
      std::ostringstream os;
      os << what << ": f[" << i << "] = " << f(i) << " must be positive and finite";
      throw ArgumentError(os.str());
    }
  }
}

}  // namespace

RayProfit::RayProfit(const MarketInstance& market, Vector f) : market_(&market), f_(std::move(f)) {
  require_positive(f_, "ray profit");
  if (f_.size() != market.n()) throw ModelError("ray profit: factor length differs from product count");
  bf_.resize(static_cast<std::size_t>(market.m()));
  warm_.resize(static_cast<std::size_t>(market.m()));
  for (int j = 0; j < market.m(); ++j) {
    if (const auto* lin = std::get_if<LinearModel>(&market.segment(j).model)) {
      bf_[static_cast<std::size_t>(j)] = lin->B() * f_;
    }
  }
}

double RayProfit::operator()(double q) {
  const Vector p = q * f_;
  double total = 0.0;
  for (int j = 0; j < market_->m(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    const Segment& s = market_->segment(j);
    double profit = 0.0;
    if (const auto* lin = std::get_if<LinearModel>(&s.model)) {
      Vector raw = lin->a() - q * bf_[k];
      if (warm_[k].empty() && raw.minCoeff() >= 0.0) {
        profit = p.dot(raw);
      } else {
        LcpOptions options;
        options.warm_support = warm_[k];
        LcpResult r = lcp_adjust_demand(*lin, p, raw, options);
        warm_[k] = std::move(r.support);
        profit = r.adjusted_profit;
      }
    } else {
      profit = p.dot(std::get<MnlSegmentModel>(s.model).demand(p));
    }
    total += s.theta * profit;
  }
  return total;
}

FactorResult factor_optimize(const MarketInstance& market, const Vector& f, const FactorOptions& options) {
  require_positive(f, "factor_optimize");
  if (f.size() != market.n()) throw ModelError("factor_optimize: factor length differs from product count");
  if (options.grid_points < 2) throw ArgumentError("factor_optimize: grid_points must be at least 2");
  if (!(options.tolerance > 0.0)) throw ArgumentError("factor_optimize: tolerance must be positive");

  QRange bracket{1e-4, 1e4};
  if (options.q_range) {
    const QRange r = *options.q_range;
    if (!(r.lo > 0.0) || !std::isfinite(r.hi) || !(r.hi >= r.lo)) {
      std::ostringstream os;
      os << "factor_optimize: invalid q range [" << r.lo << ", " << r.hi << "]";
      throw ArgumentError(os.str());
    }
    bracket = r;
  } else if (options.personalized != nullptr) {
    const PersonalizedSolution& ps = *options.personalized;
    if (ps.n() != f.size()) throw ArgumentError("factor_optimize: personalized solution has the wrong dimension");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& p : ps.prices) {
      const Vector ratio = p.cwiseQuotient(f);
      lo = std::min(lo, ratio.minCoeff());
      hi = std::max(hi, ratio.maxCoeff());
    }
    bracket = {0.5 * lo, 2.0 * hi};
  }
  const double q_cap = kMaxPrice / f.maxCoeff();
  if (bracket.lo > q_cap) throw ArgumentError("factor_optimize: bracket exceeds the maximum price");
  bracket.hi = std::min(bracket.hi, q_cap);

  RayProfit ray(market, f);
  FactorResult out;
  out.f = f;
  out.q_range = options.q_range;
  out.bracket = bracket;
  if (bracket.hi == bracket.lo) {
    out.q_star = bracket.lo;
    out.profit = ray(bracket.lo);
    return out;
  }
  const ScalarMaximum best =
      grid_then_golden_maximize(ray, log_spaced(bracket.lo, bracket.hi, options.grid_points), options.tolerance);
  out.q_star = best.x;
  out.profit = best.value;
  out.on_bracket_edge = best.at_lower_edge || best.at_upper_edge;
  return out;
}

Vector economic_factor(const PersonalizedSolution& ps) {
  if (ps.m() == 0) throw ArgumentError("economic_factor: empty personalized solution");
  if (!(ps.aggregate > 0.0)) throw DegenerateMarketError("economic_factor: personalized profit is zero");
  Vector f = Vector::Zero(ps.n());
  for (int j = 0; j < ps.m(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    f += (ps.thetas[k] * ps.profits[k] / ps.aggregate) * ps.prices[k];
  }
  return f;
}

RobustFactor robust_factor(const PersonalizedSolution& ps) {
  if (ps.m() == 0) throw ArgumentError("robust_factor: empty personalized solution");
  Vector low = ps.prices.front();
  Vector high = ps.prices.front();
  for (const auto& p : ps.prices) {
    low = low.cwiseMin(p);
    high = high.cwiseMax(p);
  }
  RobustFactor out;
  out.f = low.cwiseProduct(high).cwiseSqrt();
  // Equals max_i high_i / low_i; evaluated through f* so that rho(f*) == rho* bit for bit.
  out.rho_star = price_ratio_spread(ps, out.f);
  return out;
}

double price_ratio_spread(const PersonalizedSolution& ps, const Vector& f) {
  require_positive(f, "price_ratio_spread");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& p : ps.prices) {
    const Vector ratio = p.cwiseQuotient(f);
    lo = std::min(lo, ratio.minCoeff());
    hi = std::max(hi, ratio.maxCoeff());
  }
  return hi / lo;
}

Vector bundle_size_factor(const BundleMarket& bundles, const std::function<double(int)>& g) {
  double previous = 0.0;
  for (int s = 1; s <= bundles.base_n(); ++s) {
    const double v = g(s);
    if (!std::isfinite(v) || !(v > previous)) {
      std::ostringstream os;
      os << "bundle_size_factor: g must be positive and strictly increasing, g(" << s << ") = " << v;
      throw ArgumentError(os.str());
    }
    previous = v;
  }
  const auto sizes = bundles.sizes();
  Vector f(static_cast<Eigen::Index>(sizes.size()));
  for (std::size_t k = 0; k < sizes.size(); ++k) f(static_cast<Eigen::Index>(k)) = g(sizes[k]);
  return f;
}

Vector component_factor(const BundleMarket& bundles, const Vector& component_prices) {
  if (component_prices.size() != bundles.base_n()) {
    throw ArgumentError("component_factor: one price per underlying item is required");
  }
  require_positive(component_prices, "component_factor");
  Vector f(bundles.num_bundles());
  for (int k = 0; k < bundles.num_bundles(); ++k) {
    const auto& x = bundles.bundles()[static_cast<std::size_t>(k)];
    double total = 0.0;
    for (int i = 0; i < bundles.base_n(); ++i) total += component_prices(i) * x[static_cast<std::size_t>(i)];
    f(k) = total;
  }
  return f;
}

Vector linear_schedule_factor(int n) {
  if (n < 1) throw ArgumentError("linear_schedule_factor: n must be at least 1");
  return Vector::LinSpaced(n, 1.0, static_cast<double>(n));
}

}  // namespace factorprice
