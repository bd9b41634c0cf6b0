#pragma once

#include <stdexcept>
#include <string>

namespace groupwalk {

// Malformed or out-of-order input records.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-SPD covariance, singular innovation, eigensolver
// non-convergence, filter divergence.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Caller broke a precondition (length mismatch, m > n, empty input, ...).
class ContractViolation : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Detection and ground-truth streams disagree on frames or ids.
class AlignmentError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace groupwalk
