#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace loopbank {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// All evaluation happens on the unit circle; arguments further off than this
// are treated as caller bugs.
inline constexpr double kCircleTol = 1e-12;

// Default threshold for dropping trailing coefficient blocks (operator norm).
inline constexpr double kTrimTol = 1e-11;

// Default tolerance for certifying a matrix polynomial as unitary-valued.
inline constexpr double kCertTol = 1e-9;

// Error taxonomy. The CLI maps the three bases to exit codes:
// validation 2, precondition 3, internal 4.
struct Error : std::runtime_error {
  std::string kind;
  Error(std::string k, const std::string& msg)
      : std::runtime_error(msg), kind(std::move(k)) {}
};

// Bad arguments or malformed input: shape mismatches, schema violations,
// off-circle evaluation points, inputs that fail certification.
struct ValidationError : Error {
  using Error::Error;
};

// A mathematical precondition does not hold for otherwise well-formed input
// (quadrature-mirror condition, low-pass normalization, row relations,
// ambiguous numerical rank).
struct PreconditionError : Error {
  using Error::Error;
};

// Violation of a property that is a theorem for certified input; reaching one
// of these means a bug or an input that slipped past certification.
struct InternalError : Error {
  using Error::Error;
};

// Largest singular value.
double opnorm(const Mat& m);

// ||m m* - 1|| in operator norm.
double unitary_defect(const Mat& m);

inline bool is_unitary(const Mat& m, double tol) {
  return m.rows() == m.cols() && unitary_defect(m) <= tol;
}

}  // namespace loopbank
