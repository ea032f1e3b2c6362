#include "factorprice/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "factorprice/errors.hpp"
#include "factorprice/lcp.hpp"
#include "factorprice/scalar_search.hpp"

namespace factorprice {

std::string to_string(A1Status status) {
  switch (status) {
    case A1Status::kNotChecked:
      return "not-checked";
    case A1Status::kVerifiedOnGrid:
      return "verified-on-grid";
    case A1Status::kViolated:
      return "violated";
  }
  return "unknown";
}

namespace {

void require_a0(const PersonalizedSolution& ps) {
  for (int j = 0; j < ps.m(); ++j) {
    for (int i = 0; i < ps.n(); ++i) {
      const double v = ps.price(i, j);
      if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << "A0 violated: personalized price p[" << i << "][segment " << j << "] = " << v;
        throw A0Violation(os.str());
      }
    }
  }
}

}  // namespace

BoundReport compute_bound(const PersonalizedSolution& ps, const Vector& f, const FactorResult& factor) {
  require_a0(ps);
  if (f.size() != ps.n()) throw ArgumentError("compute_bound: factor length differs from product count");
  BoundReport out;
  out.q_min = std::numeric_limits<double>::infinity();
  for (const auto& p : ps.prices) {
    const Vector ratio = p.cwiseQuotient(f);
    out.q_min = std::min(out.q_min, ratio.minCoeff());
    out.q_max = std::max(out.q_max, ratio.maxCoeff());
  }
  if (!(out.q_min > 0.0)) throw ArgumentError("compute_bound: factor must be positive");
  out.rho = out.q_max / out.q_min;
  out.beta = 1.0 + std::log(out.rho);
  out.personalized_profit = ps.aggregate;
  out.factor_profit = factor.profit;
  out.observed_ratio =
      factor.profit > 0.0 ? ps.aggregate / factor.profit : std::numeric_limits<double>::infinity();
  return out;
}

BoundReport compute_bound(const PersonalizedSolution& ps, const Vector& f, const FactorResult& factor,
                          const A1Profile& a1) {
  BoundReport out = compute_bound(ps, f, factor);
  out.a1 = a1.status();
  out.a1_violation_q = a1.violation;
  return out;
}

double constrained_beta(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ArgumentError("constrained_beta: k must be positive and finite");
  return 1.0 + k;
}

double finite_set_beta(std::span<const double> levels) {
  if (levels.empty()) throw ArgumentError("finite_set_beta: empty price set");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0.0) || !std::isfinite(levels[k])) throw ArgumentError("finite_set_beta: levels must be positive");
    if (k > 0 && !(levels[k] < levels[k - 1])) throw ArgumentError("finite_set_beta: levels must be strictly decreasing");
  }
  double beta = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double next = k + 1 < levels.size() ? levels[k + 1] : 0.0;
    beta += (levels[k] - next) / levels[k];
  }
  return beta;
}

A1Evaluator::A1Evaluator(const MarketInstance& market, const PersonalizedSolution& ps, Vector f)
    : market_(&market), f_(std::move(f)) {
  require_a0(ps);
  if (ps.m() != market.m() || ps.n() != market.n() || f_.size() != market.n()) {
    throw ArgumentError("A1 check: market, personalized solution and factor disagree in size");
  }
  for (Eigen::Index i = 0; i < f_.size(); ++i) {
    if (!(f_(i) > 0.0)) throw ArgumentError("A1 check: factor must be positive");
  }
  for (int j = 0; j < market.m(); ++j) {
    const Segment& s = market.segment(j);
    const Vector& p = ps.prices[static_cast<std::size_t>(j)];
    const Vector d = realized_demand(s.model, p);
    for (int i = 0; i < market.n(); ++i) {
      ratios_.push_back(p(i) / f_(i));
      weights_.push_back(s.theta * f_(i) * d(i));
    }
  }
  breakpoints_ = ratios_;
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
  warm_.resize(static_cast<std::size_t>(market.m()));
}

double A1Evaluator::g(double q) const {
  double total = 0.0;
  for (std::size_t k = 0; k < ratios_.size(); ++k) {
    if (q <= ratios_[k]) total += weights_[k];
  }
  return total;
}

double A1Evaluator::h(double q) {
  if (!(q >= 0.0) || q * f_.maxCoeff() > kMaxPrice) throw ArgumentError("A1 check: q outside the price domain");
  const Vector p = q * f_;
  double total = 0.0;
  for (int j = 0; j < market_->m(); ++j) {
    const Segment& s = market_->segment(j);
    Vector d;
    if (const auto* lin = std::get_if<LinearModel>(&s.model)) {
      const auto k = static_cast<std::size_t>(j);
      LcpOptions options;
      options.warm_support = warm_[k];
      LcpResult r = lcp_adjust_demand(*lin, p, lin->demand(p), options);
      warm_[k] = std::move(r.support);
      d = std::move(r.adjusted_demand);
    } else {
      d = std::get<MnlSegmentModel>(s.model).demand(p);
    }
    total += s.theta * f_.dot(d);
  }
  return total;
}

A1Profile check_a1(const MarketInstance& market, const PersonalizedSolution& ps, const Vector& f,
                   const A1Options& options) {
  if (options.grid_size < 2) throw ArgumentError("check_a1: grid_size must be at least 2");
  A1Evaluator eval(market, ps, f);
  A1Profile out;
  out.tolerance = options.tolerance;
  out.grid = log_spaced(0.5 * eval.q_min(), eval.q_max(), options.grid_size);
  out.grid.insert(out.grid.end(), eval.breakpoints().begin(), eval.breakpoints().end());
  std::sort(out.grid.begin(), out.grid.end());
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());
  out.g_values.reserve(out.grid.size());
  out.h_values.reserve(out.grid.size());
  for (double q : out.grid) {
    const double g = eval.g(q);
    const double h = eval.h(q);
    out.g_values.push_back(g);
    out.h_values.push_back(h);
    if (!out.violation && g > h + options.tolerance) out.violation = q;
  }
  return out;
}

void write_a1_csv(std::ostream& out, const A1Profile& profile) {
  const auto old_precision = out.precision(17);
  out << "q,G,H\n";
  for (std::size_t k = 0; k < profile.grid.size(); ++k) {
    out << profile.grid[k] << ',' << profile.g_values[k] << ',' << profile.h_values[k] << '\n';
  }
  out.precision(old_precision);
}

P1P2Report check_p1_p2(const DemandModel& model, const Vector& f, std::span<const Vector> probe_prices) {
  if (f.size() != model_size(model)) throw ArgumentError("check_p1_p2: factor length differs from model size");
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!(f(i) > 0.0)) throw ArgumentError("check_p1_p2: factor must be positive");
  }
  P1P2Report out;
  std::ostringstream detail;
  if (const auto* lin = std::get_if<LinearModel>(&model)) {
    const Matrix& B = lin->B();
    out.p1 = true;
    for (Eigen::Index i = 0; i < B.rows() && out.p1; ++i) {
      for (Eigen::Index k = 0; k < B.cols(); ++k) {
        if (i != k && B(i, k) > 1e-12) {
          out.p1 = false;
          detail << "P1 fails: B(" << i << "," << k << ") = " << B(i, k) << " > 0. ";
          break;
        }
      }
    }
    const Vector bf = B * f;
    out.p2 = bf.minCoeff() >= -1e-12;
    if (!out.p2) detail << "P2 fails: min (Bf)_i = " << bf.minCoeff() << ". ";
  } else {
    const auto& mnl = std::get<MnlSegmentModel>(model);
    out.p1 = true;
    out.p2 = true;
    const double bound = f.minCoeff() + 1e-12;
    for (std::size_t k = 0; k < probe_prices.size(); ++k) {
      validate_prices(probe_prices[k], mnl.size());
      const double weighted = mnl.demand(probe_prices[k]).dot(f);
      if (weighted > bound) {
        out.p2 = false;
        detail << "P2 fails at probe " << k << ": d(p)'f = " << weighted << " > min f = " << f.minCoeff() << ". ";
        break;
      }
    }
  }
  out.detail = detail.str();
  return out;
}

TightnessResult tightness_oracle(double rho, int integration_steps) {
  if (!(rho > 1.0) || !std::isfinite(rho)) throw ArgumentError("tightness_oracle: rho must exceed 1");
  if (integration_steps < 2) throw ArgumentError("tightness_oracle: integration_steps must be at least 2");
  const double k = 1.0 / (1.0 + std::log(rho));
  auto tail = [k, rho](double p) { return p > rho ? 0.0 : k * std::min(1.0, 1.0 / p); };

  // Panels split at the kink p = 1 in proportion to the two lengths.
  const int low_panels = std::clamp(static_cast<int>(std::lround(integration_steps / rho)), 1, integration_steps - 1);
  const int high_panels = integration_steps - low_panels;
  TightnessResult out;
  out.personalized = 1.0;
  double integral = 0.0;
  double best_uniform = 0.0;
  auto accumulate = [&](double lo, double hi, int panels) {
    const double h = (hi - lo) / panels;
    for (int s = 0; s < panels; ++s) {
      const double x0 = lo + h * s;
      const double x1 = s + 1 == panels ? hi : lo + h * (s + 1);
      integral += 0.5 * (tail(x0) + tail(x1)) * (x1 - x0);
      best_uniform = std::max(best_uniform, x1 * tail(x1));
    }
  };
  accumulate(0.0, 1.0, low_panels);
  accumulate(1.0, rho, high_panels);
  out.density_integral = integral;
  out.uniform = best_uniform;
  out.ratio = out.personalized / out.uniform;
  return out;
}

double nonlinear_pricing_beta(std::span<const double> v) {
  if (v.empty()) throw ArgumentError("nonlinear_pricing_beta: empty utility vector");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) throw ArgumentError("nonlinear_pricing_beta: utilities must be positive");
    if (i == 0) continue;
    if (v[i] < v[i - 1]) throw ArgumentError("nonlinear_pricing_beta: v must be increasing");
    if (v[i] / static_cast<double>(i + 1) > v[i - 1] / static_cast<double>(i)) {
      throw ArgumentError("nonlinear_pricing_beta: v_i / i must be decreasing");
    }
  }
  const double n = static_cast<double>(v.size());
  return 1.0 + std::log(n * v.front() / v.back());
}

}  // namespace factorprice
