#include "factorprice/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "factorprice/errors.hpp"
#include "factorprice/lcp.hpp"

namespace factorprice {

namespace {

bool all_finite(const Eigen::Ref<const Matrix>& x) { return x.allFinite(); }

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

LinearModel::LinearModel(Vector a, Matrix B) : a_(std::move(a)), B_(std::move(B)) {
  const auto n = a_.size();
  if (n < 1) throw ModelError("linear model: intercept vector a is empty");
  if (B_.rows() != n || B_.cols() != n) {
    std::ostringstream os;
    os << "linear model: B is " << B_.rows() << "x" << B_.cols() << ", expected " << n << "x" << n;
    throw ModelError(os.str());
  }
  if (!all_finite(a_) || !all_finite(B_)) throw ModelError("linear model: non-finite entry");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(a_(i) > 0.0)) {
      std::ostringstream os;
      os << "linear model: a[" << i << "] = " << a_(i) << " must be positive";
      throw ModelError(os.str());
    }
  }
  const double scale = std::max(1.0, B_.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) {
      if (std::abs(B_(i, k) - B_(k, i)) > 1e-12 * scale) {
        std::ostringstream os;
        os << "linear model: B not symmetric at (" << i << "," << k << ")";
        throw ModelError(os.str());
      }
    }
  }
  llt_.compute(B_);
  if (llt_.info() != Eigen::Success || !(llt_.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0)) {
    throw ModelError("linear model: B is not positive definite");
  }
  u_ = llt_.solve(a_);
}

MnlSegmentModel::MnlSegmentModel(Vector a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() < 1) throw ModelError("mnl model: utility vector a is empty");
  if (b_.size() != a_.size()) {
    std::ostringstream os;
    os << "mnl model: b has length " << b_.size() << ", expected " << a_.size();
    throw ModelError(os.str());
  }
  if (!all_finite(a_) || !all_finite(b_)) throw ModelError("mnl model: non-finite entry");
  for (Eigen::Index i = 0; i < b_.size(); ++i) {
    if (!(b_(i) > 0.0)) {
      std::ostringstream os;
      os << "mnl model: b[" << i << "] = " << b_(i) << " must be positive";
      throw ModelError(os.str());
    }
  }
}

Vector MnlSegmentModel::demand(const Vector& p) const {
  const Vector u = a_ - b_.cwiseProduct(p);
  const double shift = std::max(0.0, u.maxCoeff());
  const Vector e = (u.array() - shift).exp().matrix();
  const double denom = std::exp(-shift) + e.sum();
  return e / denom;
}

Matrix MnlSegmentModel::jacobian(const Vector& p) const {
  const Vector d = demand(p);
  // d d_i / d p_k = b_k (d_i d_k - [i == k] d_i)
  Matrix J = d * d.transpose();
  J.diagonal() -= d;
  return J * b_.asDiagonal();
}

int model_size(const DemandModel& model) {
  return std::visit([](const auto& m) { return m.size(); }, model);
}

bool is_linear(const DemandModel& model) { return std::holds_alternative<LinearModel>(model); }
bool is_mnl(const DemandModel& model) { return std::holds_alternative<MnlSegmentModel>(model); }

MarketInstance::MarketInstance(int n, std::vector<Segment> segments, std::vector<std::string> labels)
    : n_(n), segments_(std::move(segments)), labels_(std::move(labels)) {
  if (n_ < 1) throw ModelError("market: n must be at least 1");
  if (segments_.empty()) throw ModelError("market: at least one segment is required");
  double total = 0.0;
  for (std::size_t j = 0; j < segments_.size(); ++j) {
    const double theta = segments_[j].theta;
    if (!(theta > 0.0 && theta <= 1.0)) {
      std::ostringstream os;
      os << "market: segments[" << j << "].theta = " << theta << " outside (0, 1]";
      throw ModelError(os.str());
    }
    if (model_size(segments_[j].model) != n_) {
      std::ostringstream os;
      os << "market: segments[" << j << "] has dimension " << model_size(segments_[j].model)
         << ", expected " << n_;
      throw ModelError(os.str());
    }
    total += theta;
  }
  if (std::abs(total - 1.0) > kThetaSumTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "market: segment weights theta sum to " << total << ", expected 1";
    throw ModelError(os.str());
  }
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n_) {
    throw ModelError("market: labels must be empty or have one entry per product");
  }
}

bool MarketInstance::all_linear() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) { return is_linear(s.model); });
}

bool MarketInstance::all_mnl() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) { return is_mnl(s.model); });
}

MarketInstance restrict_to(const MarketInstance& market, std::span<const int> members) {
  if (members.empty()) throw ArgumentError("restrict_to: empty member list");
  double weight = 0.0;
  for (int j : members) {
    if (j < 0 || j >= market.m()) throw ArgumentError("restrict_to: segment index out of range");
    weight += market.segment(j).theta;
  }
  std::vector<Segment> segments;
  segments.reserve(members.size());
  for (int j : members) segments.push_back({market.segment(j).theta / weight, market.segment(j).model});
  // Renormalized weights can miss 1 by a few ulps; absorb it in the largest one.
  double total = 0.0;
  for (const auto& s : segments) total += s.theta;
  auto largest = std::max_element(segments.begin(), segments.end(),
                                  [](const Segment& x, const Segment& y) { return x.theta < y.theta; });
  largest->theta = std::min(1.0, largest->theta + (1.0 - total));
  return MarketInstance(market.n(), std::move(segments), market.labels());
}

BundleMarket::BundleMarket(int base_n, std::vector<std::vector<int>> bundles, std::optional<MarketInstance> inner)
    : base_n_(base_n), bundles_(std::move(bundles)), inner_(std::move(inner)) {
  if (base_n_ < 1) throw ModelError("bundle market: base_n must be at least 1");
  if (bundles_.empty()) throw ModelError("bundle market: no bundles");
  std::set<std::vector<int>> seen;
  for (std::size_t k = 0; k < bundles_.size(); ++k) {
    const auto& x = bundles_[k];
    if (static_cast<int>(x.size()) != base_n_) {
      std::ostringstream os;
      os << "bundle market: bundles[" << k << "] has length " << x.size() << ", expected " << base_n_;
      throw ModelError(os.str());
    }
    bool nonzero = false;
    for (int v : x) {
      if (v != 0 && v != 1) throw ModelError("bundle market: incidence entries must be 0 or 1");
      nonzero = nonzero || v == 1;
    }
    if (!nonzero) throw ModelError("bundle market: empty bundle");
    if (!seen.insert(x).second) {
      std::ostringstream os;
      os << "bundle market: bundles[" << k << "] is a duplicate";
      throw ModelError(os.str());
    }
  }
  if (inner_ && inner_->n() != num_bundles()) {
    throw ModelError("bundle market: inner market dimension differs from bundle count");
  }
}

BundleMarket BundleMarket::all_subsets(int base_n, std::optional<MarketInstance> inner) {
  if (base_n < 1 || base_n > 20) throw ArgumentError("all_subsets: base_n must be in [1, 20]");
  std::vector<std::vector<int>> bundles;
  for (unsigned mask = 1; mask < (1u << base_n); ++mask) {
    std::vector<int> x(static_cast<std::size_t>(base_n));
    for (int i = 0; i < base_n; ++i) x[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
    bundles.push_back(std::move(x));
  }
  return BundleMarket(base_n, std::move(bundles), std::move(inner));
}

BundleMarket BundleMarket::size_indexed(int n, std::optional<MarketInstance> inner) {
  if (n < 1) throw ArgumentError("size_indexed: n must be at least 1");
  std::vector<std::vector<int>> bundles;
  for (int s = 1; s <= n; ++s) {
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    std::fill_n(x.begin(), s, 1);
    bundles.push_back(std::move(x));
  }
  return BundleMarket(n, std::move(bundles), std::move(inner));
}

std::vector<int> BundleMarket::sizes() const {
  std::vector<int> out;
  out.reserve(bundles_.size());
  for (const auto& x : bundles_) out.push_back(std::accumulate(x.begin(), x.end(), 0));
  return out;
}

void validate_prices(const Vector& p, int n) {
  if (p.size() != n) {
    std::ostringstream os;
    os << "price vector has length " << p.size() << ", model expects " << n;
    throw ModelError(os.str());
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i)) || p(i) < 0.0 || p(i) > kMaxPrice) {
      std::ostringstream os;
      os << "price p[" << i << "] = " << p(i) << " must be finite and in [0, " << kMaxPrice << "]";
      throw ArgumentError(os.str());
    }
  }
}

Vector eval_demand(const DemandModel& model, const Vector& p) {
  validate_prices(p, model_size(model));
  return std::visit([&](const auto& m) -> Vector { return m.demand(p); }, model);
}

Matrix eval_jacobian(const DemandModel& model, const Vector& p) {
  validate_prices(p, model_size(model));
  return std::visit(Overloaded{
                        [](const LinearModel& m) -> Matrix { return m.jacobian(); },
                        [&](const MnlSegmentModel& m) -> Matrix { return m.jacobian(p); },
                    },
                    model);
}

double segment_profit(const DemandModel& model, const Vector& p) {
  validate_prices(p, model_size(model));
  return std::visit(Overloaded{
                        [&](const LinearModel& m) { return lcp_adjust(m, p).adjusted_profit; },
                        [&](const MnlSegmentModel& m) { return p.dot(m.demand(p)); },
                    },
                    model);
}

Vector realized_demand(const DemandModel& model, const Vector& p) {
  validate_prices(p, model_size(model));
  return std::visit(Overloaded{
                        [&](const LinearModel& m) -> Vector { return lcp_adjust(m, p).adjusted_demand; },
                        [&](const MnlSegmentModel& m) -> Vector { return m.demand(p); },
                    },
                    model);
}

double aggregate_profit(const MarketInstance& market, const Vector& p) {
  validate_prices(p, market.n());
  double total = 0.0;
  for (const auto& s : market.segments()) total += s.theta * segment_profit(s.model, p);
  return total;
}

}  // namespace factorprice
