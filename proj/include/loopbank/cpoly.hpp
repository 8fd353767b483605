#pragma once

#include <vector>

#include "loopbank/common.hpp"

namespace loopbank::cpoly {

// Scalar polynomial in z; c[k] multiplies z^k. Used for individual filters.
class ScalarPoly {
 public:
  ScalarPoly() : c_(1, cx(0)) {}
  explicit ScalarPoly(std::vector<cx> coeffs);
  static ScalarPoly monomial(int k, cx a = cx(1));

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cx>& coeffs() const { return c_; }
  cx coeff(int k) const {
    return (k >= 0 && k <= degree()) ? c_[static_cast<size_t>(k)] : cx(0);
  }

  // Evaluation is restricted to the unit circle.
  cx eval(cx z) const;

  ScalarPoly trimmed(double tol = kTrimTol) const;

  friend ScalarPoly operator+(const ScalarPoly& p, const ScalarPoly& q);
  friend ScalarPoly operator-(const ScalarPoly& p, const ScalarPoly& q);
  friend ScalarPoly operator*(const ScalarPoly& p, const ScalarPoly& q);
  friend ScalarPoly operator*(cx a, const ScalarPoly& p);

 private:
  std::vector<cx> c_;  // never empty
};

class LaurentMatPoly;

// Matrix polynomial A(z) = sum_k z^k A^(k), k >= 0. Coefficients share one
// shape; the list is never empty.
class MatPoly {
 public:
  MatPoly() : c_(1, Mat::Zero(0, 0)) {}
  explicit MatPoly(std::vector<Mat> coeffs);

  static MatPoly zero(Eigen::Index rows, Eigen::Index cols);
  static MatPoly constant(const Mat& m);
  static MatPoly identity(Eigen::Index n);

  Eigen::Index rows() const { return c_[0].rows(); }
  Eigen::Index cols() const { return c_[0].cols(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Mat>& coeffs() const { return c_; }

  // Coefficient with zero padding outside [0, degree].
  Mat coeff(int k) const;

  // Drops trailing coefficients of operator norm <= tol; keeps at least the
  // constant term.
  MatPoly trimmed(double tol = kTrimTol) const;

  // Multiplication by z^k, k >= 0.
  MatPoly shifted(int k) const;

  // Horner evaluation; |z| must be within kCircleTol of 1.
  Mat eval(cx z) const;

  double max_coeff_norm() const;

  friend MatPoly operator+(const MatPoly& p, const MatPoly& q);
  friend MatPoly operator-(const MatPoly& p, const MatPoly& q);
  friend MatPoly operator*(const MatPoly& p, const MatPoly& q);
  friend MatPoly operator*(cx a, const MatPoly& p);

 private:
  std::vector<Mat> c_;
};

// Laurent matrix polynomial sum_{k=min..max} z^k A^(k). Products with
// adjoints live here.
class LaurentMatPoly {
 public:
  LaurentMatPoly() : min_(0), c_(1, Mat::Zero(0, 0)) {}
  LaurentMatPoly(int min_degree, std::vector<Mat> coeffs);
  LaurentMatPoly(const MatPoly& p);  // implicit lift

  Eigen::Index rows() const { return c_[0].rows(); }
  Eigen::Index cols() const { return c_[0].cols(); }
  int min_degree() const { return min_; }
  int max_degree() const { return min_ + static_cast<int>(c_.size()) - 1; }
  Mat coeff(int k) const;

  LaurentMatPoly trimmed(double tol = kTrimTol) const;
  Mat eval(cx z) const;

  // True when every coefficient with negative exponent has norm <= tol.
  bool is_polynomial(double tol = kTrimTol) const;

  // Drops the (sub-tolerance) negative part; errors if it is not negligible.
  MatPoly to_matpoly(double tol = kTrimTol) const;

  friend LaurentMatPoly operator+(const LaurentMatPoly& p,
                                  const LaurentMatPoly& q);
  friend LaurentMatPoly operator-(const LaurentMatPoly& p,
                                  const LaurentMatPoly& q);
  friend LaurentMatPoly operator*(const LaurentMatPoly& p,
                                  const LaurentMatPoly& q);

 private:
  int min_;
  std::vector<Mat> c_;
};

// Adjoint on the circle: z^k A |-> z^{-k} A*.
LaurentMatPoly adjoint(const MatPoly& p);
LaurentMatPoly adjoint(const LaurentMatPoly& p);

// Determinant as a scalar polynomial, computed by evaluation at
// n*deg(p) + 1 roots of unity followed by inverse DFT interpolation.
// The result is trimmed at kTrimTol.
ScalarPoly det_poly(const MatPoly& p);

}  // namespace loopbank::cpoly
