#pragma once

#include <stdexcept>
#include <string>

namespace esshist {

// Invalid or unusable input data (duplicates, non-finite values, too few points).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a statistic.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Threshold calibration failed or a quantile table cannot serve a request.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal numerical guarantee did not hold (solver self-check failed).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace esshist
