#pragma once

#include <stdexcept>
#include <string>

namespace randflight {

// Thrown when an iterative evaluation (series, continued fraction, quadrature)
// fails to reach its tolerance within the configured budget. Domain violations
// use std::domain_error / std::invalid_argument instead.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace randflight
