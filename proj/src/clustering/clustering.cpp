#include "factorprice/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "factorprice/errors.hpp"
#include "factorprice/rng.hpp"

namespace factorprice {

namespace {

void require_k(const PersonalizedSolution& ps, int K) {
  if (K < 1 || K > ps.m()) {
    std::ostringstream os;
    os << "cluster count K = " << K << " must lie in [1, " << ps.m() << "]";
    throw ArgumentError(os.str());
  }
}

std::string join(const Vector& v) {
  std::ostringstream os;
  os.precision(10);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v(i);
  return os.str();
}

}  // namespace

double log_ratio_distance(const PersonalizedSolution& ps, int j, int l) {
  if (j < 0 || l < 0 || j >= ps.m() || l >= ps.m()) throw ArgumentError("log_ratio_distance: segment out of range");
  double out = 0.0;
  for (int i = 0; i < ps.n(); ++i) {
    const double a = ps.price(i, j);
    const double b = ps.price(i, l);
    if (!(a > 0.0) || !(b > 0.0)) throw A0Violation("log_ratio_distance: personalized prices must be positive");
    out = std::max(out, std::abs(std::log(a) - std::log(b)));
  }
  return out;
}

ClusterPartition make_partition(const PersonalizedSolution& ps, std::vector<int> assignment, int K) {
  require_k(ps, K);
  if (static_cast<int>(assignment.size()) != ps.m()) throw ArgumentError("partition: one cluster id per segment");
  ClusterPartition out;
  out.clusters.resize(static_cast<std::size_t>(K));
  for (int j = 0; j < ps.m(); ++j) {
    const int c = assignment[static_cast<std::size_t>(j)];
    if (c < 0 || c >= K) throw ArgumentError("partition: cluster id out of range");
    out.clusters[static_cast<std::size_t>(c)].members.push_back(j);
  }
  out.worst_rho = 1.0;
  for (auto& cluster : out.clusters) {
    if (cluster.members.empty()) throw ArgumentError("partition: empty cluster");
    const PersonalizedSolution sub = restrict_to(ps, cluster.members);
    for (int j : cluster.members) cluster.weight += ps.thetas[static_cast<std::size_t>(j)];
    const RobustFactor robust = robust_factor(sub);
    cluster.rho_star = robust.rho_star;
    cluster.robust_f = robust.f;
    cluster.economic_f = economic_factor(sub);
    out.worst_rho = std::max(out.worst_rho, cluster.rho_star);
  }
  out.assignment = std::move(assignment);
  return out;
}

double max_cluster_diameter(const PersonalizedSolution& ps, const ClusterPartition& partition) {
  double out = 0.0;
  for (const auto& cluster : partition.clusters) {
    for (std::size_t a = 0; a < cluster.members.size(); ++a) {
      for (std::size_t b = a + 1; b < cluster.members.size(); ++b) {
        out = std::max(out, log_ratio_distance(ps, cluster.members[a], cluster.members[b]));
      }
    }
  }
  return out;
}

ClusterPartition fpf_cluster(const PersonalizedSolution& ps, int K) {
  require_k(ps, K);
  const int m = ps.m();
  std::vector<int> centers{0};
  std::vector<char> is_center(static_cast<std::size_t>(m), 0);
  is_center[0] = 1;
  std::vector<double> nearest(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) nearest[static_cast<std::size_t>(j)] = log_ratio_distance(ps, j, 0);

  while (static_cast<int>(centers.size()) < K) {
    int next = -1;
    for (int j = 0; j < m; ++j) {
      if (is_center[static_cast<std::size_t>(j)]) continue;
      if (next < 0 || nearest[static_cast<std::size_t>(j)] > nearest[static_cast<std::size_t>(next)]) next = j;
    }
    centers.push_back(next);
    is_center[static_cast<std::size_t>(next)] = 1;
    for (int j = 0; j < m; ++j) {
      nearest[static_cast<std::size_t>(j)] = std::min(nearest[static_cast<std::size_t>(j)], log_ratio_distance(ps, j, next));
    }
  }

  std::vector<int> assignment(static_cast<std::size_t>(m), 0);
  for (int j = 0; j < m; ++j) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < K; ++c) {
      const int center = centers[static_cast<std::size_t>(c)];
      // A center always belongs to its own cluster, even when it coincides with another.
      if (center == j) {
        best = c;
        break;
      }
      const double d = log_ratio_distance(ps, j, center);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    assignment[static_cast<std::size_t>(j)] = best;
  }
  return make_partition(ps, std::move(assignment), K);
}

KMeansResult kmeans_cluster(const PersonalizedSolution& ps, int K, const KMeansOptions& options) {
  require_k(ps, K);
  if (options.max_iters < 1) throw ArgumentError("kmeans: max_iters must be at least 1");
  const int m = ps.m();
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(m));
  for (const auto& p : ps.prices) points.push_back(options.log_space ? Vector(p.array().log().matrix()) : p);

  // K distinct initial centers by a partial Fisher-Yates shuffle.
  Rng rng(options.seed);
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  for (int c = 0; c < K; ++c) {
    const auto pick = c + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - c)));
    std::swap(order[static_cast<std::size_t>(c)], order[static_cast<std::size_t>(pick)]);
  }
  std::vector<Vector> centroids;
  for (int c = 0; c < K; ++c) centroids.push_back(points[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])]);

  KMeansResult out;
  std::vector<int> assignment(static_cast<std::size_t>(m), -1);
  std::vector<int> next(static_cast<std::size_t>(m));
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    out.iterations = iter;
    for (int j = 0; j < m; ++j) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < K; ++c) {
        const double d = (points[static_cast<std::size_t>(j)] - centroids[static_cast<std::size_t>(c)]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      next[static_cast<std::size_t>(j)] = best;
    }

    // Empty clusters take the point farthest from its centroid among
    // clusters that can spare one.
    std::vector<int> sizes(static_cast<std::size_t>(K), 0);
    for (int c : next) ++sizes[static_cast<std::size_t>(c)];
    for (int c = 0; c < K; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      int donor = -1;
      double donor_d = -1.0;
      for (int j = 0; j < m; ++j) {
        const int from = next[static_cast<std::size_t>(j)];
        if (sizes[static_cast<std::size_t>(from)] < 2) continue;
        const double d = (points[static_cast<std::size_t>(j)] - centroids[static_cast<std::size_t>(from)]).squaredNorm();
        if (d > donor_d) {
          donor_d = d;
          donor = j;
        }
      }
      --sizes[static_cast<std::size_t>(next[static_cast<std::size_t>(donor)])];
      next[static_cast<std::size_t>(donor)] = c;
      ++sizes[static_cast<std::size_t>(c)];
    }

    for (int c = 0; c < K; ++c) centroids[static_cast<std::size_t>(c)].setZero();
    for (int j = 0; j < m; ++j) centroids[static_cast<std::size_t>(next[static_cast<std::size_t>(j)])] += points[static_cast<std::size_t>(j)];
    for (int c = 0; c < K; ++c) centroids[static_cast<std::size_t>(c)] /= sizes[static_cast<std::size_t>(c)];

    double inertia = 0.0;
    for (int j = 0; j < m; ++j) {
      inertia += (points[static_cast<std::size_t>(j)] - centroids[static_cast<std::size_t>(next[static_cast<std::size_t>(j)])]).squaredNorm();
    }
    out.inertia_history.push_back(inertia);

    if (next == assignment) {
      out.converged = true;
      break;
    }
    assignment = next;
  }
  out.partition = make_partition(ps, next, K);
  return out;
}

const char* to_string(FactorKind kind) {
  switch (kind) {
    case FactorKind::kEconomic:
      return "economic";
    case FactorKind::kRobust:
      return "robust";
    case FactorKind::kUniform:
      return "uniform";
  }
  return "unknown";
}

double clustered_factor_profit(const MarketInstance& market, const PersonalizedSolution& ps,
                               const ClusterPartition& partition, FactorKind kind, int grid_points) {
  if (static_cast<int>(partition.assignment.size()) != market.m()) {
    throw ArgumentError("clustered_factor_profit: partition does not match the market");
  }
  double total = 0.0;
  for (const auto& cluster : partition.clusters) {
    const MarketInstance sub_market = restrict_to(market, cluster.members);
    const PersonalizedSolution sub_ps = restrict_to(ps, cluster.members);
    Vector f;
    switch (kind) {
      case FactorKind::kEconomic:
        f = cluster.economic_f;
        break;
      case FactorKind::kRobust:
        f = cluster.robust_f;
        break;
      case FactorKind::kUniform:
        f = Vector::Ones(market.n());
        break;
    }
    const FactorResult r = factor_optimize(sub_market, f, {.personalized = &sub_ps, .grid_points = grid_points});
    total += cluster.weight * r.profit;
  }
  return total;
}

void write_partition_csv(std::ostream& out, const ClusterPartition& partition) {
  out << "segment_id,cluster_id\n";
  for (std::size_t j = 0; j < partition.assignment.size(); ++j) out << j << ',' << partition.assignment[j] << '\n';
  out << "\ncluster_id,size,weight,rho_star,beta,robust_f,economic_f\n";
  const auto old_precision = out.precision(10);
  for (std::size_t c = 0; c < partition.clusters.size(); ++c) {
    const auto& cl = partition.clusters[c];
    out << c << ',' << cl.members.size() << ',' << cl.weight << ',' << cl.rho_star << ',' << 1.0 + std::log(cl.rho_star)
        << ',' << join(cl.robust_f) << ',' << join(cl.economic_f) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace factorprice
