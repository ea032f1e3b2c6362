#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "factorprice/market.hpp"
#include "factorprice/pricing.hpp"

namespace factorprice {

/// max_i |ln p̄_ij - ln p̄_il|. The diameter of a cluster under this metric is
/// ln of the cluster's robust ratio rho*.
double log_ratio_distance(const PersonalizedSolution& ps, int j, int l);

struct ClusterSummary {
  std::vector<int> members;  // ascending segment ids
  double weight = 0.0;       // sum of member thetas
  double rho_star = 1.0;
  Vector robust_f;
  Vector economic_f;
};

struct ClusterPartition {
  std::vector<int> assignment;  // segment -> cluster id
  std::vector<ClusterSummary> clusters;
  double worst_rho = 1.0;  // max over clusters of rho*

  int k() const { return static_cast<int>(clusters.size()); }
};

/// Validates that every cluster 0..K-1 is nonempty and fills the summaries.
ClusterPartition make_partition(const PersonalizedSolution& ps, std::vector<int> assignment, int K);

/// Largest log-ratio distance between two members of the same cluster.
double max_cluster_diameter(const PersonalizedSolution& ps, const ClusterPartition& partition);

/// Farthest-point-first (Gonzalez) on the log-ratio metric: a
/// 2-approximation of the minimax-diameter partition. Center 1 is segment 0;
/// ties go to the smallest index.
ClusterPartition fpf_cluster(const PersonalizedSolution& ps, int K);

struct KMeansOptions {
  int max_iters = 100;
  std::uint64_t seed = 0;
  bool log_space = false;  // cluster ln p̄ instead of p̄
};

struct KMeansResult {
  ClusterPartition partition;
  std::vector<double> inertia_history;  // after every iteration
  int iterations = 0;
  bool converged = false;
};

/// Lloyd iterations on the personalized price vectors (Euclidean).
KMeansResult kmeans_cluster(const PersonalizedSolution& ps, int K, const KMeansOptions& options = {});

enum class FactorKind { kEconomic, kRobust, kUniform };

const char* to_string(FactorKind kind);

/// Sum over clusters of (cluster weight) x (profit of the cluster's own factor
/// on its renormalized sub-market).
double clustered_factor_profit(const MarketInstance& market, const PersonalizedSolution& ps,
                               const ClusterPartition& partition, FactorKind kind, int grid_points = 2000);

/// segment_id,cluster_id rows, a blank line, then one summary row per cluster.
void write_partition_csv(std::ostream& out, const ClusterPartition& partition);

}  // namespace factorprice
