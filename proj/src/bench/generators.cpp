#include <algorithm>
#include <cmath>
#include <functional>

#include "factorprice/bench.hpp"
#include "factorprice/errors.hpp"

namespace factorprice {

namespace {

void require_dims(int n, int m) {
  if (n < 1 || m < 1) throw ArgumentError("generator: n and m must be at least 1");
}

}  // namespace

Matrix gen_m_matrix(int n, Rng& rng) { return gen_m_matrix(n, Vector::Ones(n), rng); }

Matrix gen_m_matrix(int n, const Vector& weights, Rng& rng) {
  if (weights.size() != n || !(weights.minCoeff() > 0.0)) throw ArgumentError("gen_m_matrix: weights must be positive");
  Matrix B = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double u = rng.uniform(0.0, 1.0 / n);
      B(i, k) = -u;
      B(k, i) = -u;
    }
  }
  for (int i = 0; i < n; ++i) {
    B(i, i) = B.row(i).cwiseAbs().dot(weights) / weights(i) + rng.uniform(0.5, 1.5);
  }
  return B;
}

std::vector<double> gen_weights(int m, Rng& rng) {
  std::vector<double> x(static_cast<std::size_t>(m));
  for (auto& v : x) v = rng.uniform_open_closed();
  double total = 0.0;
  for (double v : x) total += v;
  for (auto& v : x) v /= total;
  return x;
}

MarketInstance gen_linear_instance(int n, int m, Rng& rng) {
  require_dims(n, m);
  const auto thetas = gen_weights(m, rng);
  std::vector<Segment> segments;
  for (int j = 0; j < m; ++j) {
    Vector a(n);
    for (int i = 0; i < n; ++i) a(i) = rng.uniform_open_closed();
    segments.push_back({thetas[static_cast<std::size_t>(j)], LinearModel(std::move(a), gen_m_matrix(n, rng))});
  }
  return MarketInstance(n, std::move(segments));
}

MarketInstance gen_lcmnl_instance(int n, int m, Rng& rng) {
  require_dims(n, m);
  const auto thetas = gen_weights(m, rng);
  Vector sigma(n);
  for (int i = 0; i < n; ++i) sigma(i) = rng.uniform01();
  std::vector<Segment> segments;
  for (int j = 0; j < m; ++j) {
    Vector a(n);
    Vector b(n);
    for (int i = 0; i < n; ++i) {
      const double v = 10.0 * rng.uniform_open_closed();
      const double scale = rng.coin() ? 1.0 - sigma(i) : 1.0 + sigma(i);
      a(i) = std::log(scale * v / n);
    }
    for (int i = 0; i < n; ++i) {
      double draw = 0.0;
      while (!(draw > 0.0)) draw = rng.uniform01() + rng.uniform01();
      b(i) = draw;
    }
    segments.push_back({thetas[static_cast<std::size_t>(j)], MnlSegmentModel(std::move(a), std::move(b))});
  }
  return MarketInstance(n, std::move(segments));
}

Vector gen_concave_utilities(int n, Rng& rng) {
  if (n < 1) throw ArgumentError("gen_concave_utilities: n must be at least 1");
  std::vector<double> increments(static_cast<std::size_t>(n));
  while (true) {
    // Marginal utility of the i-th unit scales like 1/i.
    for (std::size_t i = 0; i < increments.size(); ++i) {
      increments[i] = rng.uniform_open_closed() / static_cast<double>(i + 1);
    }
    std::sort(increments.begin(), increments.end(), std::greater<>());
    if (std::adjacent_find(increments.begin(), increments.end()) == increments.end()) break;
  }
  Vector u(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    total += increments[static_cast<std::size_t>(i)];
    u(i) = total;
  }
  return u;
}

MarketInstance gen_nonlinear_instance(int n, int m, Rng& rng) {
  require_dims(n, m);
  const auto thetas = gen_weights(m, rng);
  std::vector<Segment> segments;
  for (int j = 0; j < m; ++j) {
    const Vector u = gen_concave_utilities(n, rng);
    Matrix B = gen_m_matrix(n, u, rng);
    Vector a = B * u;
    segments.push_back({thetas[static_cast<std::size_t>(j)], LinearModel(std::move(a), std::move(B))});
  }
  return MarketInstance(n, std::move(segments));
}

}  // namespace factorprice
