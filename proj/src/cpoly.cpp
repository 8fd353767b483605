#include "loopbank/cpoly.hpp"

#include <cmath>
#include <numbers>

namespace loopbank {

double opnorm(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double unitary_defect(const Mat& m) {
  return opnorm(m * m.adjoint() - Mat::Identity(m.rows(), m.rows()));
}

namespace cpoly {

namespace {

void require_on_circle(cx z) {
  if (std::abs(std::abs(z) - 1.0) > kCircleTol)
    throw ValidationError("off_circle",
                          "evaluation point is off the unit circle");
}

void require_same_shape(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ValidationError("shape", "coefficient shape mismatch");
}

}  // namespace

ScalarPoly::ScalarPoly(std::vector<cx> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.assign(1, cx(0));
}

ScalarPoly ScalarPoly::monomial(int k, cx a) {
  if (k < 0) throw ValidationError("shape", "monomial exponent must be >= 0");
  std::vector<cx> c(static_cast<size_t>(k) + 1, cx(0));
  c.back() = a;
  return ScalarPoly(std::move(c));
}

cx ScalarPoly::eval(cx z) const {
  require_on_circle(z);
  cx acc = c_.back();
  for (int k = degree() - 1; k >= 0; --k) acc = acc * z + c_[static_cast<size_t>(k)];
  return acc;
}

ScalarPoly ScalarPoly::trimmed(double tol) const {
  size_t last = 0;
  for (size_t k = 0; k < c_.size(); ++k)
    if (std::abs(c_[k]) > tol) last = k;
  return ScalarPoly(std::vector<cx>(c_.begin(), c_.begin() + last + 1));
}

ScalarPoly operator+(const ScalarPoly& p, const ScalarPoly& q) {
  std::vector<cx> c(std::max(p.c_.size(), q.c_.size()), cx(0));
  for (size_t k = 0; k < c.size(); ++k) {
    if (k < p.c_.size()) c[k] += p.c_[k];
    if (k < q.c_.size()) c[k] += q.c_[k];
  }
  return ScalarPoly(std::move(c));
}

ScalarPoly operator-(const ScalarPoly& p, const ScalarPoly& q) {
  return p + cx(-1) * q;
}

ScalarPoly operator*(const ScalarPoly& p, const ScalarPoly& q) {
  std::vector<cx> c(p.c_.size() + q.c_.size() - 1, cx(0));
  for (size_t i = 0; i < p.c_.size(); ++i)
    for (size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
  return ScalarPoly(std::move(c));
}

ScalarPoly operator*(cx a, const ScalarPoly& p) {
  std::vector<cx> c = p.c_;
  for (auto& x : c) x *= a;
  return ScalarPoly(std::move(c));
}

MatPoly::MatPoly(std::vector<Mat> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw ValidationError("shape", "empty coefficient list");
  for (const Mat& m : c_) require_same_shape(m, c_[0]);
}

MatPoly MatPoly::zero(Eigen::Index rows, Eigen::Index cols) {
  return MatPoly({Mat::Zero(rows, cols)});
}

MatPoly MatPoly::constant(const Mat& m) { return MatPoly({m}); }

MatPoly MatPoly::identity(Eigen::Index n) {
  return MatPoly({Mat::Identity(n, n)});
}

Mat MatPoly::coeff(int k) const {
  if (k < 0 || k > degree()) return Mat::Zero(rows(), cols());
  return c_[static_cast<size_t>(k)];
}

MatPoly MatPoly::trimmed(double tol) const {
  size_t last = 0;
  for (size_t k = 0; k < c_.size(); ++k)
    if (opnorm(c_[k]) > tol) last = k;
  return MatPoly(std::vector<Mat>(c_.begin(), c_.begin() + last + 1));
}

MatPoly MatPoly::shifted(int k) const {
  if (k < 0) throw ValidationError("shape", "shift exponent must be >= 0");
  std::vector<Mat> c(static_cast<size_t>(k), Mat::Zero(rows(), cols()));
  c.insert(c.end(), c_.begin(), c_.end());
  return MatPoly(std::move(c));
}

Mat MatPoly::eval(cx z) const {
  require_on_circle(z);
  Mat acc = c_.back();
  for (int k = degree() - 1; k >= 0; --k) acc = (acc * z + c_[static_cast<size_t>(k)]).eval();
  return acc;
}

double MatPoly::max_coeff_norm() const {
  double m = 0.0;
  for (const Mat& a : c_) m = std::max(m, opnorm(a));
  return m;
}

MatPoly operator+(const MatPoly& p, const MatPoly& q) {
  require_same_shape(p.c_[0], q.c_[0]);
  std::vector<Mat> c(std::max(p.c_.size(), q.c_.size()),
                     Mat::Zero(p.rows(), p.cols()));
  for (size_t k = 0; k < c.size(); ++k) {
    if (k < p.c_.size()) c[k] += p.c_[k];
    if (k < q.c_.size()) c[k] += q.c_[k];
  }
  return MatPoly(std::move(c));
}

MatPoly operator-(const MatPoly& p, const MatPoly& q) {
  return p + cx(-1) * q;
}

MatPoly operator*(const MatPoly& p, const MatPoly& q) {
  if (p.cols() != q.rows())
    throw ValidationError("shape", "inner dimension mismatch");
  std::vector<Mat> c(p.c_.size() + q.c_.size() - 1,
                     Mat::Zero(p.rows(), q.cols()));
  for (size_t i = 0; i < p.c_.size(); ++i)
    for (size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
  return MatPoly(std::move(c));
}

MatPoly operator*(cx a, const MatPoly& p) {
  std::vector<Mat> c = p.c_;
  for (auto& m : c) m *= a;
  return MatPoly(std::move(c));
}

LaurentMatPoly::LaurentMatPoly(int min_degree, std::vector<Mat> coeffs)
    : min_(min_degree), c_(std::move(coeffs)) {
  if (c_.empty()) throw ValidationError("shape", "empty coefficient list");
  for (const Mat& m : c_) require_same_shape(m, c_[0]);
}

LaurentMatPoly::LaurentMatPoly(const MatPoly& p) : min_(0), c_(p.coeffs()) {}

Mat LaurentMatPoly::coeff(int k) const {
  if (k < min_ || k > max_degree()) return Mat::Zero(rows(), cols());
  return c_[static_cast<size_t>(k - min_)];
}

LaurentMatPoly LaurentMatPoly::trimmed(double tol) const {
  int lo = 0, hi = static_cast<int>(c_.size()) - 1;
  while (hi > 0 && opnorm(c_[static_cast<size_t>(hi)]) <= tol) --hi;
  while (lo < hi && opnorm(c_[static_cast<size_t>(lo)]) <= tol) ++lo;
  return LaurentMatPoly(
      min_ + lo, std::vector<Mat>(c_.begin() + lo, c_.begin() + hi + 1));
}

Mat LaurentMatPoly::eval(cx z) const {
  require_on_circle(z);
  Mat acc = c_.back();
  for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k)
    acc = (acc * z + c_[static_cast<size_t>(k)]).eval();
  return std::pow(z, min_) * acc;
}

bool LaurentMatPoly::is_polynomial(double tol) const {
  for (int k = min_; k < 0; ++k)
    if (opnorm(coeff(k)) > tol) return false;
  return true;
}

MatPoly LaurentMatPoly::to_matpoly(double tol) const {
  if (!is_polynomial(tol))
    throw ValidationError("shape",
                          "Laurent polynomial has a nontrivial negative part");
  int top = std::max(0, max_degree());
  std::vector<Mat> c;
  c.reserve(static_cast<size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) c.push_back(coeff(k));
  return MatPoly(std::move(c));
}

LaurentMatPoly operator+(const LaurentMatPoly& p, const LaurentMatPoly& q) {
  require_same_shape(p.c_[0], q.c_[0]);
  int lo = std::min(p.min_degree(), q.min_degree());
  int hi = std::max(p.max_degree(), q.max_degree());
  std::vector<Mat> c;
  c.reserve(static_cast<size_t>(hi - lo) + 1);
  for (int k = lo; k <= hi; ++k) c.push_back(p.coeff(k) + q.coeff(k));
  return LaurentMatPoly(lo, std::move(c));
}

LaurentMatPoly operator-(const LaurentMatPoly& p, const LaurentMatPoly& q) {
  std::vector<Mat> neg;
  neg.reserve(q.c_.size());
  for (const Mat& m : q.c_) neg.push_back(-m);
  return p + LaurentMatPoly(q.min_, std::move(neg));
}

LaurentMatPoly operator*(const LaurentMatPoly& p, const LaurentMatPoly& q) {
  if (p.cols() != q.rows())
    throw ValidationError("shape", "inner dimension mismatch");
  std::vector<Mat> c(p.c_.size() + q.c_.size() - 1,
                     Mat::Zero(p.rows(), q.cols()));
  for (size_t i = 0; i < p.c_.size(); ++i)
    for (size_t j = 0; j < q.c_.size(); ++j) c[i + j] += p.c_[i] * q.c_[j];
  return LaurentMatPoly(p.min_ + q.min_, std::move(c));
}

LaurentMatPoly adjoint(const MatPoly& p) { return adjoint(LaurentMatPoly(p)); }

LaurentMatPoly adjoint(const LaurentMatPoly& p) {
  int hi = p.max_degree();
  std::vector<Mat> c;
  c.reserve(static_cast<size_t>(hi - p.min_degree()) + 1);
  for (int k = hi; k >= p.min_degree(); --k)
    c.push_back(p.coeff(k).adjoint());
  return LaurentMatPoly(-hi, std::move(c));
}

ScalarPoly det_poly(const MatPoly& p) {
  if (p.rows() != p.cols())
    throw ValidationError("shape", "determinant of a non-square polynomial");
  const int n = static_cast<int>(p.rows());
  if (n == 0) return ScalarPoly({cx(1)});
  // deg(det) <= n * deg(p); evaluate at that many + 1 roots of unity and
  // invert the DFT directly.
  const int m = n * p.degree() + 1;
  std::vector<cx> vals(static_cast<size_t>(m));
  const double step = 2.0 * std::numbers::pi / m;
  for (int t = 0; t < m; ++t)
    vals[static_cast<size_t>(t)] =
        p.eval(std::polar(1.0, step * t)).determinant();
  std::vector<cx> c(static_cast<size_t>(m), cx(0));
  for (int k = 0; k < m; ++k) {
    cx acc(0);
    for (int t = 0; t < m; ++t)
      acc += vals[static_cast<size_t>(t)] * std::polar(1.0, -step * t * k);
    c[static_cast<size_t>(k)] = acc / static_cast<double>(m);
  }
  return ScalarPoly(std::move(c)).trimmed();
}

}  // namespace cpoly
}  // namespace loopbank
