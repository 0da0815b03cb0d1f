#pragma once

#include <stdexcept>
#include <string>

namespace gwn {

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Degree (or leading data) requested from the zero polynomial.
struct ZeroPolynomialError : std::domain_error {
  explicit ZeroPolynomialError(const std::string& what) : std::domain_error(what) {}
};

/// Gradient-weighted semi-norm is zero: the constant-free part vanishes exactly on X.
struct NotNormalizable : std::domain_error {
  explicit NotNormalizable(const std::string& what) : std::domain_error(what) {}
};

struct GevpDegenerate : std::runtime_error {
  explicit GevpDegenerate(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gwn
