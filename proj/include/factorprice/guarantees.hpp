#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factorprice/market.hpp"
#include "factorprice/pricing.hpp"

namespace factorprice {

enum class A1Status {
  kNotChecked,
  kVerifiedOnGrid,  // G <= H at every grid point and breakpoint; not a proof
  kViolated,
};

std::string to_string(A1Status status);

/// Performance guarantee of a factor: R̄ <= beta R^f when A0 and A1 hold.
struct BoundReport {
  double q_min = 0.0;  // min_ij p̄_ij / f_i
  double q_max = 0.0;  // max_ij p̄_ij / f_i
  double rho = 1.0;
  double beta = 1.0;   // 1 + ln rho
  A1Status a1 = A1Status::kNotChecked;
  std::optional<double> a1_violation_q;
  double personalized_profit = 0.0;  // R̄
  double factor_profit = 0.0;        // R^f
  double observed_ratio = 0.0;       // R̄ / R^f (infinity when R^f = 0)
};

/// Throws A0Violation when a personalized price is not positive and finite.
BoundReport compute_bound(const PersonalizedSolution& ps, const Vector& f, const FactorResult& factor);

struct A1Profile;
/// As above, with the A1 status taken from a grid check.
BoundReport compute_bound(const PersonalizedSolution& ps, const Vector& f, const FactorResult& factor,
                          const A1Profile& a1);

/// Guarantee 1 + k under the box constraint q in [q_min, e^k q_min].
double constrained_beta(double k);

/// Sharpened guarantee sum_k (q_k - q_{k+1}) / q_k (q_{K+1} = 0) for a finite,
/// strictly decreasing set of allowed price levels.
double finite_set_beta(std::span<const double> levels);

/// Evaluates both sides of A1 along the ray q f:
///   G(q) = sum_j theta_j sum_i f_i d_ij(p̄^j) [q <= p̄_ij / f_i]
///   H(q) = sum_j theta_j sum_i f_i d_ij(q f)
/// Linear segments use LCP-adjusted demand in H. h() keeps warm-start state,
/// so an evaluator must not be shared between threads.
class A1Evaluator {
 public:
  A1Evaluator(const MarketInstance& market, const PersonalizedSolution& ps, Vector f);

  double g(double q) const;
  double h(double q);

  /// Sorted, distinct p̄_ij / f_i: the only places where G changes value.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  double q_min() const { return breakpoints_.front(); }
  double q_max() const { return breakpoints_.back(); }

 private:
  const MarketInstance* market_;
  Vector f_;
  std::vector<double> ratios_;   // p̄_ij / f_i
  std::vector<double> weights_;  // theta_j f_i d_ij(p̄^j)
  std::vector<double> breakpoints_;
  std::vector<std::vector<int>> warm_;
};

struct A1Profile {
  std::vector<double> grid;
  std::vector<double> g_values;
  std::vector<double> h_values;
  std::optional<double> violation;  // first q with G(q) > H(q) + tolerance
  double tolerance = 1e-9;
  // A1 is only required at the personalized prices; this checks the
  // stronger inequality on the whole grid.
  std::string note = "checked on breakpoints and a log grid over [q_min/2, q_max]";

  A1Status status() const { return violation ? A1Status::kViolated : A1Status::kVerifiedOnGrid; }
};

struct A1Options {
  int grid_size = 2000;
  double tolerance = 1e-9;
};

/// Grid check of G(q) <= H(q) on the breakpoints plus grid_size log-spaced
/// points over [q_min/2, q_max]. Violations are reported, not thrown.
A1Profile check_a1(const MarketInstance& market, const PersonalizedSolution& ps, const Vector& f,
                   const A1Options& options = {});

/// Writes "q,G,H" rows for plotting.
void write_a1_csv(std::ostream& out, const A1Profile& profile);

struct P1P2Report {
  bool p1 = false;  // weak substitutes: d_i increasing in p_k, k != i
  bool p2 = false;  // f'd decreasing in every own price
  std::string detail;
};

/// Linear: P1 iff off-diagonals of B are <= 1e-12, P2 iff Bf >= -1e-12.
/// MNL: P1 always; P2 iff d(p)'f <= min_i f_i + 1e-12 at every probe price.
P1P2Report check_p1_p2(const DemandModel& model, const Vector& f, std::span<const Vector> probe_prices);

struct TightnessResult {
  double personalized = 1.0;    // analytic
  double uniform = 0.0;         // max_p p d(p) on the integration grid
  double ratio = 0.0;           // personalized / uniform
  double density_integral = 0.0;  // trapezoid integral of d over [0, rho]
};

/// Continuum market with demand tail d(p) = k min(1, 1/p) on [0, rho],
/// k = 1 / (1 + ln rho), where the single-factor bound holds with equality.
TightnessResult tightness_oracle(double rho, int integration_steps = 100000);

/// 1 + ln(n v_1 / v_n) for linear vs non-linear pricing with p̄ = v / 2.
/// v must be increasing with v_i / i decreasing (ArgumentError otherwise).
double nonlinear_pricing_beta(std::span<const double> v);

}  // namespace factorprice
