#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "loopbank/cpoly.hpp"
#include "loopbank/filters.hpp"
#include "loopbank/loop.hpp"

namespace testutil {

using loopbank::cx;
using loopbank::Mat;
using loopbank::Vec;

using Rng = std::mt19937_64;

inline cx random_cx(Rng& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  const double re = d(g);
  const double im = d(g);
  return cx(re, im);
}

inline cx circle_point(Rng& g) {
  std::uniform_real_distribution<double> d(0.0, 2.0 * M_PI);
  const double t = d(g);
  return cx(std::cos(t), std::sin(t));
}

inline Mat random_mat(Rng& g, int rows, int cols) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_cx(g);
  return m;
}

inline Vec random_vec(Rng& g, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = random_cx(g);
  return v;
}

inline Vec random_unit_vec(Rng& g, int n) {
  Vec v = random_vec(g, n);
  while (v.norm() < 1e-6) v = random_vec(g, n);
  return v / v.norm();
}

// Unitary with columns the QR orthonormalization of a Gaussian matrix,
// R-diagonal phases absorbed so the draw does not depend on Eigen's
// internal sign conventions.
inline Mat random_unitary(Rng& g, int n) {
  const Mat a = random_mat(g, n, n);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const cx d = r(j, j);
    const double m = std::abs(d);
    q.col(j) *= (m > 0) ? d / m : cx(1.0, 0.0);
  }
  return q;
}

// Unitary whose first column approximates c (unit vector) to roundoff.
inline Mat unitary_with_first_column(Rng& g, const Vec& c) {
  const int n = static_cast<int>(c.size());
  Mat a = random_mat(g, n, n);
  a.col(0) = c;
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  cx phase = (q.col(0).adjoint() * c)(0, 0);
  phase /= std::abs(phase);
  q.col(0) *= phase;
  return q;
}

// Rank-k orthogonal projection.
inline Mat random_projection(Rng& g, int n, int rank) {
  const Mat a = random_mat(g, n, rank);
  Eigen::HouseholderQR<Mat> qr(a);
  const Mat q = Mat(qr.householderQ()).leftCols(rank);
  Mat p = q * q.adjoint();
  return (p + Mat(p.adjoint())) / 2.0;
}

inline int random_int(Rng& g, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(g);
}

// A certified loop of genus exactly `genus`, built as a product of genus-1
// elementary factors with random ranks times a random unitary.
inline loopbank::loop::PolyLoop random_loop(Rng& g, int n, int genus) {
  using loopbank::loop::ElementaryFactor;
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<ElementaryFactor> fs;
    for (int j = 0; j + 1 < genus; ++j)
      fs.push_back(ElementaryFactor{
          random_projection(g, n, n > 1 ? random_int(g, 1, n - 1) : 1)});
    loopbank::loop::PolyLoop a = loopbank::loop::compose(fs, random_unitary(g, n));
    if (a.genus() == genus) return a;
  }
  throw std::runtime_error("random loop generation kept losing degree");
}

// Low-pass filter data: the first row of a random loop conditioned by a
// constant right factor so that every first-row entry evaluates to
// 1/sqrt(n) at z = 1 (hence m0(1) = sqrt(n) to roundoff).
inline loopbank::loop::PolyLoop random_lowpass_loop(Rng& g, int n, int genus) {
  loopbank::loop::PolyLoop a = random_loop(g, n, genus);
  const Eigen::RowVectorXcd row = a.body.eval(cx(1.0)).row(0);
  const Mat ua = unitary_with_first_column(g, row.adjoint()).adjoint();
  const Vec hcol = Vec::Constant(n, cx(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  const Mat uh = unitary_with_first_column(g, hcol).adjoint();
  const Mat r = ua.adjoint() * uh;
  return loopbank::loop::certify_loop(a.body * loopbank::cpoly::MatPoly::constant(r));
}

inline loopbank::filters::LowPassCandidate random_lowpass(Rng& g, int n, int genus) {
  const loopbank::filters::FilterBank bank =
      loopbank::filters::loop_to_filters(random_lowpass_loop(g, n, genus));
  loopbank::filters::LowPassCandidate c;
  c.n = n;
  c.m0 = bank.filters[0];
  return c;
}

// Largest coefficient-block distance between two matrix polynomials,
// comparing missing blocks against zero.
inline double coeff_dist(const loopbank::cpoly::MatPoly& x,
                         const loopbank::cpoly::MatPoly& y) {
  const int top = std::max(x.degree(), y.degree());
  double d = 0.0;
  for (int k = 0; k <= top; ++k)
    d = std::max(d, loopbank::opnorm(x.coeff(k) - y.coeff(k)));
  return d;
}

}  // namespace testutil
