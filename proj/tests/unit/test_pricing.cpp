#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "factorprice/errors.hpp"
#include "factorprice/pricing.hpp"
#include "factorprice/scalar_search.hpp"
#include "helpers.hpp"

namespace fp = factorprice;
using fp_test::mat;
using fp_test::vec;

namespace {

// Profit gradient d(p) + J(p)' p by central differences of segment_profit.
fp::Vector numeric_profit_gradient(const fp::DemandModel& model, const fp::Vector& p, double h) {
  fp::Vector g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    fp::Vector up = p, down = p;
    up(i) += h;
    down(i) -= h;
    g(i) = (fp::segment_profit(model, up) - fp::segment_profit(model, down)) / (2.0 * h);
  }
  return g;
}

// Independent dense log grid over q for the best profit along f.
double grid_oracle(const fp::MarketInstance& market, const fp::Vector& f, double lo, double hi, int points) {
  double best = 0.0;
  const double step = std::log(hi / lo) / (points - 1);
  for (int k = 0; k < points; ++k) {
    const double q = lo * std::exp(step * k);
    best = std::max(best, fp::aggregate_profit(market, q * f));
  }
  return best;
}

double price_ratio(const fp::PersonalizedSolution& ps, const fp::Vector& f) {
  double lo = INFINITY, hi = 0.0;
  for (int j = 0; j < ps.m(); ++j) {
    for (int i = 0; i < ps.n(); ++i) {
      lo = std::min(lo, ps.price(i, j) / f(i));
      hi = std::max(hi, ps.price(i, j) / f(i));
    }
  }
  return hi / lo;
}

fp::MarketInstance two_segment_one_product() { return fp_test::one_product_linear({1.0, 2.0}, {0.5, 0.5}); }

}  // namespace

// ---- personalized --------------------------------------------------------

TEST(Personalized, LinearClosedForm) {
  const fp::MarketInstance market(2, {fp_test::linear_segment(1.0, vec({1.0, 1.0}), mat({{2.0, -1.0}, {-1.0, 2.0}}))});
  const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
  EXPECT_NEAR(ps.price(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(ps.price(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(ps.aggregate, 0.5, 1e-15);
}

TEST(Personalized, LinearSingleProduct) {
  const fp::PersonalizedSolution ps = fp::personalized_optimize(fp_test::one_product_linear({1.0}, {1.0}));
  EXPECT_DOUBLE_EQ(ps.price(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(ps.aggregate, 0.25);
}

TEST(Personalized, MnlSingleProductMatchesDenseGrid) {
  const fp::MarketInstance market(1, {fp_test::mnl_segment(1.0, vec({0.0}), vec({1.0}))});
  const fp::PersonalizedSolution ps = fp::personalized_optimize(market);

  double best_p = 0.0, best_r = 0.0;
  for (int k = 0; k <= 5000000; ++k) {
    const double p = 1e-6 * k;
    const double r = p / (1.0 + std::exp(p));
    if (r > best_r) {
      best_r = r;
      best_p = p;
    }
  }
  EXPECT_NEAR(ps.price(0, 0), best_p, 1e-4);
  EXPECT_NEAR(ps.aggregate, best_r, 1e-10);
  EXPECT_NEAR(ps.price(0, 0), 1.27846, 1e-4);
  EXPECT_NEAR(ps.aggregate, 0.27846, 1e-4);
  // first-order condition p = 1 + R for b = 1
  EXPECT_NEAR(ps.price(0, 0), 1.0 + ps.aggregate, 1e-9);
}

TEST(Personalized, MnlAdjustedMarkupStructure) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const fp::MarketInstance market = fp_test::random_lcmnl(1 + static_cast<int>(seed % 7), 3, seed);
    const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
    for (int j = 0; j < market.m(); ++j) {
      const auto& model = std::get<fp::MnlSegmentModel>(market.segment(j).model);
      const fp::Vector markup = ps.prices[static_cast<std::size_t>(j)] - model.b().cwiseInverse();
      EXPECT_LE(markup.maxCoeff() - markup.minCoeff(), 1e-7);
      // optimal markup equals the segment profit
      EXPECT_NEAR(markup(0), ps.profits[static_cast<std::size_t>(j)], 1e-7);
      const fp::Vector grad = numeric_profit_gradient(market.segment(j).model, ps.prices[static_cast<std::size_t>(j)], 1e-6);
      EXPECT_LE(grad.cwiseAbs().maxCoeff(), 1e-6) << "seed " << seed << " segment " << j;
    }
  }
}

TEST(Personalized, LinearStationarity) {
  const fp::MarketInstance market = fp_test::random_linear(6, 4, 12);
  const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
  double weighted = 0.0;
  for (int j = 0; j < market.m(); ++j) {
    const auto& model = std::get<fp::LinearModel>(market.segment(j).model);
    const fp::Vector& p = ps.prices[static_cast<std::size_t>(j)];
    EXPECT_LE((model.a() - 2.0 * model.B() * p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(model.demand(p).minCoeff(), 0.0);
    weighted += market.segment(j).theta * ps.profits[static_cast<std::size_t>(j)];
  }
  EXPECT_NEAR(ps.aggregate, weighted, 1e-12);
}

TEST(Personalized, RejectsNonPositivePrices) {
  EXPECT_THROW(fp::make_personalized_solution({1.0}, {vec({1.0, 0.0})}, {1.0}), fp::A0Violation);
}

// ---- factor optimization -------------------------------------------------

TEST(FactorOptimize, SingleSegmentRecoversPersonalized) {
  const fp::MarketInstance market = fp_test::one_product_linear({1.0}, {1.0});
  const fp::FactorResult r = fp::factor_optimize(market, vec({1.0}));
  EXPECT_NEAR(r.q_star, 0.5, 1e-7);
  EXPECT_NEAR(r.profit, 0.25, 1e-15);
}

TEST(FactorOptimize, TwoSegmentsOneProduct) {
  const fp::MarketInstance market = two_segment_one_product();
  const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
  const fp::FactorResult r = fp::factor_optimize(market, vec({1.0}), {.personalized = &ps});
  // R(q) = q (1.5 - q) on [0, 1]
  EXPECT_NEAR(r.q_star, 0.75, 1e-7);
  EXPECT_NEAR(r.profit, 0.5625, 1e-15);
  EXPECT_GE(r.profit, grid_oracle(market, vec({1.0}), 0.01, 2.0, 100000) - 1e-12);
}

TEST(FactorOptimize, ScaleInvariance) {
  const fp::MarketInstance market = fp_test::random_linear(5, 3, 8);
  const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
  const fp::Vector f = fp::economic_factor(ps);
  const fp::FactorResult r1 = fp::factor_optimize(market, f, {.personalized = &ps});
  const fp::FactorResult r2 = fp::factor_optimize(market, 3.7 * f, {.personalized = &ps});
  EXPECT_NEAR(r2.q_star * 3.7, r1.q_star, 1e-7 * r1.q_star);
  EXPECT_NEAR(r2.profit, r1.profit, 1e-9 * r1.profit);
}

TEST(FactorOptimize, PermutingProductsPermutesSolution) {
  const fp::MarketInstance market = fp_test::random_lcmnl(4, 3, 21);
  std::vector<fp::Segment> permuted;
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
  perm.indices() << 2, 0, 3, 1;
  for (const auto& s : market.segments()) {
    const auto& model = std::get<fp::MnlSegmentModel>(s.model);
    permuted.push_back(fp_test::mnl_segment(s.theta, perm * model.a(), perm * model.b()));
  }
  const fp::MarketInstance other(4, std::move(permuted));
  const fp::Vector f = vec({1.0, 1.5, 0.7, 2.0});
  const fp::FactorResult r1 = fp::factor_optimize(market, f);
  const fp::FactorResult r2 = fp::factor_optimize(other, perm * f);
  EXPECT_NEAR(r1.q_star, r2.q_star, 1e-8);
  EXPECT_NEAR(r1.profit, r2.profit, 1e-12);
}

TEST(FactorOptimize, UniformFactorIsUniformPricing) {
  const fp::MarketInstance market = fp_test::random_lcmnl(3, 2, 4);
  const fp::FactorResult r = fp::factor_optimize(market, fp::Vector::Ones(3));
  double best = 0.0;
  for (int k = 1; k <= 200000; ++k) best = std::max(best, fp::aggregate_profit(market, fp::Vector::Constant(3, 2e-5 * k)));
  EXPECT_GE(r.profit, best - 1e-9);
  EXPECT_LE(std::abs(fp::aggregate_profit(market, fp::Vector::Constant(3, r.q_star)) - r.profit), 1e-15);
}

TEST(FactorOptimize, MatchesGridOracle) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const bool linear = seed % 2 == 0;
    const fp::MarketInstance market =
        linear ? fp_test::random_linear(4, 3, seed) : fp_test::random_lcmnl(4, 3, seed);
    const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
    for (const fp::Vector& f : {fp::Vector(fp::Vector::Ones(4)), fp::economic_factor(ps), fp::robust_factor(ps).f}) {
      const fp::FactorResult r = fp::factor_optimize(market, f, {.personalized = &ps});
      const double lo = 0.25 * r.bracket.lo, hi = 4.0 * r.bracket.hi;
      EXPECT_GE(r.profit, grid_oracle(market, f, lo, hi, 20000) - 1e-6) << "seed " << seed;
      EXPECT_LE(r.profit, ps.aggregate + 1e-9);
    }
  }
}

TEST(FactorOptimize, ConstraintBox) {
  const fp::MarketInstance market = two_segment_one_product();
  const fp::FactorResult r = fp::factor_optimize(market, vec({1.0}), {.q_range = fp::QRange{0.2, 0.5}});
  EXPECT_NEAR(r.q_star, 0.5, 1e-7);
  EXPECT_NEAR(r.profit, 0.5, 1e-8);
  EXPECT_TRUE(r.on_bracket_edge);
  EXPECT_THROW(fp::factor_optimize(market, vec({1.0}), {.q_range = fp::QRange{0.5, 0.2}}), fp::ArgumentError);
  EXPECT_THROW(fp::factor_optimize(market, vec({1.0}), {.q_range = fp::QRange{0.0, 1.0}}), fp::ArgumentError);
}

TEST(FactorOptimize, DefaultBracketWithoutPersonalizedSolution) {
  const fp::FactorResult r = fp::factor_optimize(two_segment_one_product(), vec({1.0}));
  EXPECT_DOUBLE_EQ(r.bracket.lo, 1e-4);
  EXPECT_DOUBLE_EQ(r.bracket.hi, 1e4);
  EXPECT_FALSE(r.on_bracket_edge);
  EXPECT_NEAR(r.q_star, 0.75, 1e-7);
}

TEST(FactorOptimize, RejectsNonPositiveFactor) {
  EXPECT_THROW(fp::factor_optimize(two_segment_one_product(), vec({0.0})), fp::ArgumentError);
  EXPECT_THROW(fp::factor_optimize(two_segment_one_product(), vec({1.0, 1.0})), fp::ModelError);
}

// ---- factors --------------------------------------------------------------

TEST(EconomicFactor, SingleSegmentIsPersonalizedPrice) {
  const fp::PersonalizedSolution ps = fp::make_personalized_solution({1.0}, {vec({1.0, 2.0})}, {0.7});
  EXPECT_EQ(fp::economic_factor(ps), vec({1.0, 2.0}));
}

TEST(EconomicFactor, ProfitWeightedAverage) {
  const fp::PersonalizedSolution ps = fp::make_personalized_solution({0.5, 0.5}, {vec({1.0}), vec({3.0})}, {1.0, 3.0});
  EXPECT_NEAR(fp::economic_factor(ps)(0), 2.5, 1e-15);
}

TEST(EconomicFactor, WeightsSumToOne) {
  // With identical price vectors the factor equals them exactly iff the
  // weights sum to one.
  const fp::Vector p = vec({1.3, 0.4, 2.2});
  const fp::PersonalizedSolution ps =
      fp::make_personalized_solution({0.2, 0.3, 0.5}, {p, p, p}, {0.37, 1.1, 0.05});
  EXPECT_LE((fp::economic_factor(ps) - p).cwiseAbs().maxCoeff(), 1e-12 * p.maxCoeff());
}

TEST(EconomicFactor, DegenerateMarket) {
  const fp::PersonalizedSolution ps = fp::make_personalized_solution({0.5, 0.5}, {vec({1.0}), vec({3.0})}, {0.0, 0.0});
  EXPECT_THROW(fp::economic_factor(ps), fp::DegenerateMarketError);
}

TEST(RobustFactor, GeometricMeanOfExtremes) {
  const fp::PersonalizedSolution ps = fp::make_personalized_solution({0.5, 0.5}, {vec({1.0}), vec({4.0})}, {1.0, 1.0});
  const fp::RobustFactor r = fp::robust_factor(ps);
  EXPECT_DOUBLE_EQ(r.f(0), 2.0);
  EXPECT_DOUBLE_EQ(r.rho_star, 4.0);
}

TEST(RobustFactor, IdenticalTypes) {
  const fp::Vector p = vec({1.0, 2.0, 5.0});
  const fp::PersonalizedSolution ps = fp::make_personalized_solution({0.5, 0.5}, {p, p}, {1.0, 1.0});
  const fp::RobustFactor r = fp::robust_factor(ps);
  EXPECT_LE((r.f - p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(r.rho_star, 1.0);
}

TEST(RobustFactor, NoRandomFactorHasSmallerSpread) {
  const fp::MarketInstance market = fp_test::random_lcmnl(5, 4, 99);
  const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
  const fp::RobustFactor r = fp::robust_factor(ps);
  EXPECT_NEAR(price_ratio(ps, r.f), r.rho_star, 1e-12 * r.rho_star);
  EXPECT_EQ(fp::price_ratio_spread(ps, r.f), r.rho_star);
  fp::Rng rng(100);
  for (int trial = 0; trial < 1000; ++trial) {
    fp::Vector f(5);
    for (int i = 0; i < 5; ++i) f(i) = r.f(i) * std::exp(rng.uniform(-0.3, 0.3));
    EXPECT_GE(price_ratio(ps, f), r.rho_star - 1e-12);
  }
}

TEST(BundleFactors, SizeFactor) {
  const fp::BundleMarket bm = fp::BundleMarket::all_subsets(2);
  EXPECT_EQ(fp::bundle_size_factor(bm, [](int s) { return double(s); }), vec({1.0, 1.0, 2.0}));
  EXPECT_EQ(fp::component_factor(bm, vec({1.0, 2.0})), vec({1.0, 2.0, 3.0}));
  EXPECT_EQ(fp::bundle_size_factor(fp::BundleMarket::size_indexed(3), [](int s) { return double(s * s); }),
            vec({1.0, 4.0, 9.0}));
  EXPECT_EQ(fp::linear_schedule_factor(4), vec({1.0, 2.0, 3.0, 4.0}));
}

TEST(BundleFactors, RejectsNonIncreasingMap) {
  const fp::BundleMarket bm = fp::BundleMarket::size_indexed(3);
  EXPECT_THROW(fp::bundle_size_factor(bm, [](int) { return 1.0; }), fp::ArgumentError);
  EXPECT_THROW(fp::bundle_size_factor(bm, [](int s) { return 2.0 - s; }), fp::ArgumentError);
}

// ---- non-personalized baseline -------------------------------------------

TEST(Nonpersonalized, SingleSegmentCoincidesWithPersonalized) {
  for (std::uint64_t seed : {3u, 4u}) {
    const fp::MarketInstance market = seed % 2 ? fp_test::random_lcmnl(3, 1, seed) : fp_test::random_linear(3, 1, seed);
    const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
    const fp::HeuristicResult h = fp::nonpersonalized_heuristic(market);
    EXPECT_NEAR(h.profit, ps.aggregate, 1e-6);
    EXPECT_LE((h.prices - ps.prices[0]).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(Nonpersonalized, TwoSegmentLinear) {
  const fp::MarketInstance market = two_segment_one_product();
  const fp::HeuristicResult h = fp::nonpersonalized_heuristic(market);
  EXPECT_NEAR(h.prices(0), 0.75, 1e-12);
  EXPECT_NEAR(h.profit, 0.5625, 1e-12);
  double best = 0.0;
  for (int k = 0; k <= 200000; ++k) best = std::max(best, fp::aggregate_profit(market, vec({1e-5 * k})));
  EXPECT_NEAR(h.profit, best, 1e-9);
}

TEST(Nonpersonalized, MnlDominatesFactorSolutions) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const fp::MarketInstance market = fp_test::random_lcmnl(4, 4, seed);
    const fp::PersonalizedSolution ps = fp::personalized_optimize(market);
    const double uniform = fp::factor_optimize(market, fp::Vector::Ones(4), {.personalized = &ps}).profit;
    const double economic = fp::factor_optimize(market, fp::economic_factor(ps), {.personalized = &ps}).profit;
    const fp::HeuristicResult h = fp::nonpersonalized_heuristic(market);
    EXPECT_GE(h.profit, std::max(uniform, economic) - 1e-9);
    EXPECT_LE(h.profit, ps.aggregate + 1e-9);
    EXPECT_NEAR(h.profit, fp::aggregate_profit(market, h.prices), 1e-12);
  }
}
