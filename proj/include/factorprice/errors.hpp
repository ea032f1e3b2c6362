#pragma once

#include <stdexcept>
#include <string>

namespace factorprice {

// Invalid model data or a violated type invariant (bad file, wrong dimension,
// nonpositive sensitivity, ...). The CLI maps this to exit code 1.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied argument (empty range, K out of range, ...). Exit code 1.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to converge or hit a degenerate case. Exit code 2.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Personalized prices are not all positive and finite.
class A0Violation : public ModelError {
 public:
  using ModelError::ModelError;
};

// Aggregate personalized profit is zero, so profit-weighted factors are undefined.
class DegenerateMarketError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace factorprice
