#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace factorprice {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Prices above this are rejected before evaluating any demand model.
inline constexpr double kMaxPrice = 1e9;

// Tolerance on the sum of segment weights.
inline constexpr double kThetaSumTolerance = 1e-12;

/// Linear demand d(p) = a - B p with B symmetric positive definite.
///
/// The raw affine demand can go negative away from the feasible price region;
/// realized demand and profit there come from lcp_adjust().
class LinearModel {
 public:
  /// Throws ModelError when a is not strictly positive or B is not symmetric PD.
  LinearModel(Vector a, Matrix B);

  int size() const { return static_cast<int>(a_.size()); }
  const Vector& a() const { return a_; }
  const Matrix& B() const { return B_; }

  /// Gross utilities u = B^{-1} a.
  const Vector& utilities() const { return u_; }

  /// B^{-1} rhs using the factorization computed at construction.
  Vector solve(const Vector& rhs) const { return llt_.solve(rhs); }

  Vector demand(const Vector& p) const { return a_ - B_ * p; }
  Matrix jacobian() const { return -B_; }

 private:
  Vector a_;
  Matrix B_;
  Eigen::LLT<Matrix> llt_;
  Vector u_;
};

/// One MNL segment: d_i(p) = exp(a_i - b_i p_i) / (1 + sum_k exp(a_k - b_k p_k)).
class MnlSegmentModel {
 public:
  /// Throws ModelError unless b > 0 and every entry is finite.
  MnlSegmentModel(Vector a, Vector b);

  int size() const { return static_cast<int>(a_.size()); }
  const Vector& a() const { return a_; }
  const Vector& b() const { return b_; }

  // Evaluated with a log-sum-exp shift; the no-purchase option is utility 0.
  Vector demand(const Vector& p) const;
  Matrix jacobian(const Vector& p) const;

 private:
  Vector a_;
  Vector b_;
};

using DemandModel = std::variant<LinearModel, MnlSegmentModel>;

int model_size(const DemandModel& model);
bool is_linear(const DemandModel& model);
bool is_mnl(const DemandModel& model);

struct Segment {
  double theta;
  DemandModel model;
};

/// n products sold to m customer segments with weights theta summing to one.
class MarketInstance {
 public:
  /// Throws ModelError on any invariant violation.
  MarketInstance(int n, std::vector<Segment> segments, std::vector<std::string> labels = {});

  int n() const { return n_; }
  int m() const { return static_cast<int>(segments_.size()); }
  const std::vector<Segment>& segments() const { return segments_; }
  const Segment& segment(int j) const { return segments_[static_cast<std::size_t>(j)]; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool all_linear() const;
  bool all_mnl() const;

 private:
  int n_;
  std::vector<Segment> segments_;
  std::vector<std::string> labels_;
};

/// Sub-market over the given segments, weights renormalized to sum to one.
MarketInstance restrict_to(const MarketInstance& market, std::span<const int> members);

/// Products reinterpreted as bundles of base_n underlying items.
///
/// Each bundle is a distinct nonzero 0/1 incidence vector. Two layouts are
/// provided: every nonempty subset (mixed bundling) and size-indexed bundles
/// 1..n for non-linear pricing of a single item, where bundle i has size i.
class BundleMarket {
 public:
  BundleMarket(int base_n, std::vector<std::vector<int>> bundles,
               std::optional<MarketInstance> inner = std::nullopt);

  /// All 2^base_n - 1 nonempty subsets, ordered by bitmask (item 1 is bit 0).
  static BundleMarket all_subsets(int base_n, std::optional<MarketInstance> inner = std::nullopt);
  /// Bundles of size 1..n; bundle i is encoded as the first i items.
  static BundleMarket size_indexed(int n, std::optional<MarketInstance> inner = std::nullopt);

  int base_n() const { return base_n_; }
  int num_bundles() const { return static_cast<int>(bundles_.size()); }
  const std::vector<std::vector<int>>& bundles() const { return bundles_; }
  const std::optional<MarketInstance>& inner() const { return inner_; }

  /// e'x for every bundle x.
  std::vector<int> sizes() const;

 private:
  int base_n_;
  std::vector<std::vector<int>> bundles_;
  std::optional<MarketInstance> inner_;
};

/// d(p) for one segment. For linear models this is the raw a - Bp.
/// Throws ModelError on dimension mismatch and ArgumentError for negative,
/// non-finite or > kMaxPrice prices.
Vector eval_demand(const DemandModel& model, const Vector& p);

/// Analytic Jacobian J(i, k) = d d_i / d p_k.
Matrix eval_jacobian(const DemandModel& model, const Vector& p);

/// Realized profit p'd of one segment; linear segments use the LCP-adjusted demand.
double segment_profit(const DemandModel& model, const Vector& p);

/// Realized demand of one segment: LCP-adjusted for linear models.
Vector realized_demand(const DemandModel& model, const Vector& p);

/// Theta-weighted sum of segment_profit.
double aggregate_profit(const MarketInstance& market, const Vector& p);

// Shared by every public entry point that takes a price vector.
void validate_prices(const Vector& p, int n);

}  // namespace factorprice
