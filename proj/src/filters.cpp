#include "loopbank/filters.hpp"

#include <cmath>
#include <numbers>

namespace loopbank::filters {

namespace {

using cpoly::MatPoly;
using cpoly::ScalarPoly;
using RowVec = Eigen::RowVectorXcd;

constexpr double kRowRelTol = 1e-10;

// Deterministic unitary completion of a unit row: Householder reflection with
// the largest-modulus pivot, then a row transposition to put the row first.
Mat householder_completion(const RowVec& row) {
  const Eigen::Index n = row.cols();
  Vec v = row.normalized().adjoint();
  Eigen::Index p = 0;
  v.cwiseAbs().maxCoeff(&p);
  cx phase = v(p) / std::abs(v(p));
  Vec w = v;
  w(p) += phase;
  Mat h = Mat::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.adjoint());
  // (-phase * h) has v as its p-th column; its adjoint has conj(v) = row as
  // its p-th row.
  Mat u = (-phase * h).adjoint();
  u.row(p).swap(u.row(0));
  return u;
}

MatPoly complete_rows_impl(std::vector<RowVec> alpha) {
  while (alpha.size() > 1 && alpha.back().norm() <= kTrimTol)
    alpha.pop_back();
  if (alpha.size() == 1)
    return MatPoly::constant(householder_completion(alpha[0]));

  const Eigen::Index n = alpha[0].cols();
  Vec q = alpha.back().adjoint().normalized();
  Mat proj = q * q.adjoint();
  Mat rest = Mat::Identity(n, n) - proj;

  // beta(z) = alpha(z)((1-P) + z^{-1}P); the boundary terms vanish by the row
  // relations.
  std::vector<RowVec> beta(alpha.size() - 1);
  for (size_t l = 0; l + 1 < alpha.size(); ++l)
    beta[l] = alpha[l] * rest + alpha[l + 1] * proj;

  MatPoly b = complete_rows_impl(std::move(beta));
  std::vector<Mat> c(static_cast<size_t>(b.degree()) + 2);
  for (int k = 0; k < static_cast<int>(c.size()); ++k)
    c[static_cast<size_t>(k)] = b.coeff(k) * rest + b.coeff(k - 1) * proj;
  return MatPoly(std::move(c));
}

double qmf_candidate_defect(const ScalarPoly& m0, int n) {
  // sum_k |m_0(z rho^k)|^2 = N on the circle, sampled over the fundamental
  // domain.
  double worst = 0.0;
  for (int t = 0; t < 32; ++t) {
    cx z = std::polar(1.0, 2.0 * std::numbers::pi / n * t / 32.0);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      cx rho = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
      acc += std::norm(m0.eval(rho * z));
    }
    worst = std::max(worst, std::abs(acc - n));
  }
  return worst;
}

std::vector<RowVec> candidate_rows(const LowPassCandidate& c, int genus) {
  std::vector<RowVec> rows(static_cast<size_t>(genus));
  for (int k = 0; k < genus; ++k) {
    rows[static_cast<size_t>(k)] = RowVec::Zero(c.n);
    for (int j = 0; j < c.n; ++j)
      rows[static_cast<size_t>(k)](j) = c.m0.coeff(j + c.n * k);
  }
  return rows;
}

// Signed 1-based column sources for the quaternion (n=4) and Cayley (n=8)
// first-row completions.
constexpr int kPattern4[4][4] = {
    {1, 2, 3, 4},
    {-2, 1, -4, 3},
    {-3, 4, 1, -2},
    {-4, -3, 2, 1},
};

constexpr int kPattern8[8][8] = {
    {1, 2, 3, 4, 5, 6, 7, 8},
    {-2, 1, -4, 3, -6, 5, 8, -7},
    {-3, 4, 1, -2, -7, -8, 5, 6},
    {-4, -3, 2, 1, -8, 7, -6, 5},
    {-5, 6, 7, 8, 1, -2, -3, -4},
    {-6, -5, 8, -7, 2, 1, 4, -3},
    {-7, -8, -5, 6, 3, -4, 1, 2},
    {-8, 7, -6, -5, 4, 3, -2, 1},
};

}  // namespace

int FilterBank::genus() const {
  int g = 1;
  for (const auto& f : filters)
    g = std::max(g, (f.degree() + n) / n);  // ceil((deg+1)/n)
  return g;
}

loop::PolyLoop filters_to_loop(const FilterBank& bank, double tol) {
  if (bank.n < 1 || static_cast<int>(bank.filters.size()) != bank.n)
    throw ValidationError("shape", "bank must hold exactly n filters");
  const int n = bank.n;
  const int g = bank.genus();
  std::vector<Mat> c(static_cast<size_t>(g), Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < g; ++k)
      for (int j = 0; j < n; ++j)
        c[static_cast<size_t>(k)](i, j) =
            bank.filters[static_cast<size_t>(i)].coeff(j + n * k);
  return loop::certify_loop(cpoly::MatPoly(std::move(c)), tol);
}

FilterBank loop_to_filters(const loop::PolyLoop& a) {
  const int n = a.n();
  const int g = a.genus();
  FilterBank bank;
  bank.n = n;
  bank.filters.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<cx> c(static_cast<size_t>(n * g), cx(0));
    for (int k = 0; k < g; ++k)
      for (int j = 0; j < n; ++j)
        c[static_cast<size_t>(j + n * k)] = a.body.coeff(k)(i, j);
    // Trim exact zeros only; coefficients stay bit-identical.
    bank.filters.push_back(ScalarPoly(std::move(c)).trimmed(0.0));
  }
  return bank;
}

QmfReport check_qmf(const FilterBank& bank, double tol) {
  if (bank.n < 1 || static_cast<int>(bank.filters.size()) != bank.n)
    throw ValidationError("shape", "bank must hold exactly n filters");
  const int n = bank.n;
  const double root = std::sqrt(static_cast<double>(n));
  QmfReport report;
  for (int t = 0; t < 32; ++t) {
    cx z = std::polar(1.0, 2.0 * std::numbers::pi / n * t / 32.0);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        cx rho = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
        m(i, k) = bank.filters[static_cast<size_t>(i)].eval(rho * z) / root;
      }
    report.defect = std::max(report.defect, unitary_defect(m));
  }
  report.pass = report.defect <= tol;
  return report;
}

namespace {

LowPassReport lowpass_report(const ScalarPoly& m0, int n, double tol) {
  const double root = std::sqrt(static_cast<double>(n));
  LowPassReport report;
  report.m0_defect = std::abs(m0.eval(cx(1)) - root);
  for (int j = 0; j < n; ++j) {
    cx acc(0);
    for (int k = 0; j + n * k <= m0.degree(); ++k) acc += m0.coeff(j + n * k);
    report.row_defect = std::max(report.row_defect, std::abs(acc - 1.0 / root));
  }
  report.pass = report.m0_defect <= tol && report.row_defect <= tol;
  return report;
}

}  // namespace

LowPassReport check_lowpass(const FilterBank& bank, double tol) {
  if (bank.filters.empty())
    throw ValidationError("shape", "bank holds no filters");
  return lowpass_report(bank.filters[0], bank.n, tol);
}

LowPassReport check_lowpass(const LowPassCandidate& c, double tol) {
  if (c.n < 1) throw ValidationError("shape", "candidate needs n >= 1");
  return lowpass_report(c.m0, c.n, tol);
}

loop::PolyLoop complete_row(const RowData& rows, double tol) {
  if (rows.n < 1 || rows.rows.empty())
    throw ValidationError("shape", "row data must hold at least one row");
  for (const RowVec& r : rows.rows)
    if (r.cols() != rows.n)
      throw ValidationError("shape", "row length differs from n");

  const int g = static_cast<int>(rows.rows.size());
  for (int m = 0; m < g; ++m) {
    cx acc(0);
    for (int l = 0; l + m < g; ++l)
      acc += rows.rows[static_cast<size_t>(l)].dot(
          rows.rows[static_cast<size_t>(l + m)]);
    double defect = std::abs(acc - (m == 0 ? cx(1) : cx(0)));
    if (defect > kRowRelTol)
      throw PreconditionError(
          "row_condition", "row relation " + std::to_string(m) +
                               " off by " + std::to_string(defect));
  }

  loop::PolyLoop out = loop::certify_loop(complete_rows_impl(rows.rows), tol);
  double err = 0.0;
  for (int k = 0; k < g; ++k)
    err = std::max(err, (out.body.coeff(k).row(0) -
                         rows.rows[static_cast<size_t>(k)])
                            .cwiseAbs()
                            .maxCoeff());
  for (int k = g; k <= out.body.degree(); ++k)
    err = std::max(err, out.body.coeff(k).row(0).cwiseAbs().maxCoeff());
  if (err > 1e-8)
    throw InternalError("completion", "first row drifted by " +
                                          std::to_string(err));
  return out;
}

FilterBank complete_lowpass(const LowPassCandidate& c, double tol) {
  if (c.n < 2) throw ValidationError("shape", "low-pass completion needs n >= 2");
  double defect = qmf_candidate_defect(c.m0, c.n);
  if (defect > tol)
    throw PreconditionError("qmf_condition",
                            "sum_k |m0(z rho^k)|^2 misses N by " +
                                std::to_string(defect));
  const int g = std::max(1, (c.m0.degree() + c.n) / c.n);
  RowData rows{c.n, candidate_rows(c, g)};
  loop::PolyLoop a = complete_row(rows, tol);
  FilterBank bank = loop_to_filters(a);
  bank.filters[0] = c.m0;  // input preserved coefficient-exactly
  return bank;
}

PointwiseRow daubechies_complete_pointwise(const cpoly::ScalarPoly& a0,
                                           const cpoly::ScalarPoly& a1) {
  for (int t = 0; t < 32; ++t) {
    cx z = std::polar(1.0, 2.0 * std::numbers::pi * t / 32.0);
    double s = std::norm(a0.eval(z)) + std::norm(a1.eval(z));
    if (std::abs(s - 1.0) > 1e-10)
      throw PreconditionError("unit_row",
                              "row is not pointwise unit-norm on the circle");
  }

  const int top = std::max(a0.degree(), a1.degree());
  std::vector<Mat> c(static_cast<size_t>(top) + 1, Mat::Zero(1, 2));
  for (int k = 0; k <= top; ++k) {
    // coefficient of z^{-k}
    c[static_cast<size_t>(top - k)](0, 0) = -std::conj(a1.coeff(k));
    c[static_cast<size_t>(top - k)](0, 1) = std::conj(a0.coeff(k));
  }
  PointwiseRow out{cpoly::LaurentMatPoly(-top, std::move(c)).trimmed(), false,
                   0.0};
  out.polynomial = out.row.min_degree() >= 0 ||
                   out.row.is_polynomial(1e-12);
  for (int t = 0; t < 32; ++t) {
    cx z = std::polar(1.0, 2.0 * std::numbers::pi * t / 32.0);
    Mat m(2, 2);
    m(0, 0) = a0.eval(z);
    m(0, 1) = a1.eval(z);
    m.row(1) = out.row.eval(z);
    out.defect = std::max(out.defect, unitary_defect(m));
  }
  return out;
}

Eigen::MatrixXd real_orthogonal_completion(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  if (n != 4 && n != 8)
    throw ValidationError("shape", "pattern completion exists for n = 4 or 8");
  if (std::abs(x.norm() - 1.0) > 1e-9)
    throw ValidationError("unit_row", "first row must be a unit vector");
  Eigen::MatrixXd u(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      int s = (n == 4) ? kPattern4[r][c] : kPattern8[r][c];
      u(r, c) = (s > 0 ? 1.0 : -1.0) * x(std::abs(s) - 1);
    }
  return u;
}

Mat cayley_like_u4(const Vec& z) {
  if (z.size() != 4)
    throw ValidationError("shape", "expected a length-4 first row");
  if (std::abs(z.norm() - 1.0) > 1e-9)
    throw ValidationError("unit_row", "first row must be a unit vector");
  Mat m(4, 4);
  m << z(0), z(1), z(2), z(3),
      -std::conj(z(1)), std::conj(z(0)), -z(3), z(2),
      -std::conj(z(2)), z(3), std::conj(z(0)), -z(1),
      -z(3), -std::conj(z(2)), std::conj(z(1)), z(0);
  return m;
}

}  // namespace loopbank::filters
