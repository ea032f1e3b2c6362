#pragma once

#include <initializer_list>
#include <vector>

#include "factorprice/bench.hpp"
#include "factorprice/market.hpp"
#include "factorprice/rng.hpp"

namespace fp_test {

using factorprice::Matrix;
using factorprice::Vector;

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double x : row) B(r, c++) = x;
    ++r;
  }
  return B;
}

inline factorprice::Segment linear_segment(double theta, Vector a, Matrix B) {
  return {theta, factorprice::LinearModel(std::move(a), std::move(B))};
}

inline factorprice::Segment mnl_segment(double theta, Vector a, Vector b) {
  return {theta, factorprice::MnlSegmentModel(std::move(a), std::move(b))};
}

/// One product, B = [[1]], intercepts a_j with weights theta_j.
inline factorprice::MarketInstance one_product_linear(std::vector<double> intercepts, std::vector<double> thetas) {
  std::vector<factorprice::Segment> segments;
  for (std::size_t j = 0; j < intercepts.size(); ++j) {
    segments.push_back(linear_segment(thetas[j], vec({intercepts[j]}), mat({{1.0}})));
  }
  return factorprice::MarketInstance(1, std::move(segments));
}

inline factorprice::MarketInstance random_linear(int n, int m, std::uint64_t seed) {
  factorprice::Rng rng(seed);
  return factorprice::gen_linear_instance(n, m, rng);
}

inline factorprice::MarketInstance random_lcmnl(int n, int m, std::uint64_t seed) {
  factorprice::Rng rng(seed);
  return factorprice::gen_lcmnl_instance(n, m, rng);
}

}  // namespace fp_test
