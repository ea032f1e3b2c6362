#pragma once

#include <span>
#include <vector>

#include "factorprice/market.hpp"

namespace factorprice {

/// Solution of  y >= 0,  d(p - y) >= 0,  y'd(p - y) = 0  for a linear model.
///
/// adjusted_profit = p'd(p - y) = p'd(p) + p'By.
struct LcpResult {
  Vector y;
  Vector adjusted_demand;
  double adjusted_profit = 0.0;
  std::vector<int> support;  // indices with y_i treated as basic, ascending
  int iterations = 0;
};

enum class LcpMethod {
  kAuto,               // principal pivoting
  kEnumeration,        // exhaustive over supports, smallest-cardinality then lexicographic
  kPrincipalPivoting,  // block principal pivoting with single-index fallback
};

struct LcpOptions {
  LcpMethod method = LcpMethod::kAuto;
  // Starting support for principal pivoting; the solution does not depend on it.
  std::span<const int> warm_support = {};
  // 0 selects max(500, 50 n).
  int max_iterations = 0;
};

// Enumeration visits 2^n supports; larger problems must pivot.
inline constexpr int kMaxEnumerationSize = 20;

/// Throws NumericError (with residuals) when pivoting exceeds its iteration cap.
LcpResult lcp_adjust(const LinearModel& model, const Vector& p, const LcpOptions& options = {});

/// Same as lcp_adjust but starting from the raw demand d0 = a - Bp.
LcpResult lcp_adjust_demand(const LinearModel& model, const Vector& p, const Vector& raw_demand,
                            const LcpOptions& options = {});

}  // namespace factorprice
