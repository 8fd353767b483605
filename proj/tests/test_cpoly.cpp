#include <doctest.h>

#include <cmath>

#include "loopbank/cpoly.hpp"
#include "testutil.hpp"

using namespace loopbank;
using cpoly::LaurentMatPoly;
using cpoly::MatPoly;
using cpoly::ScalarPoly;
using testutil::Rng;

namespace {

MatPoly random_matpoly(Rng& g, int n, int deg) {
  std::vector<Mat> coeffs;
  for (int k = 0; k <= deg; ++k) coeffs.push_back(testutil::random_mat(g, n, n));
  return MatPoly{std::move(coeffs)};
}

double scale_of(const MatPoly& a) {
  double s = 0.0;
  for (int k = 0; k <= a.degree(); ++k) s = std::max(s, opnorm(a.coeff(k)));
  return s + 1.0;
}

}  // namespace

TEST_CASE("scalar polynomials evaluate, trim, and multiply consistently") {
  Rng g(101);
  ScalarPoly p;
  p.coeffs = {cx(1.0, 0.0), cx(0.0, -2.0), cx(3.0, 0.5)};
  ScalarPoly q = ScalarPoly::monomial(2, cx(0.5, 0.0));

  for (int t = 0; t < 8; ++t) {
    const cx z = testutil::circle_point(g);
    const cx direct = p.coeffs[0] + p.coeffs[1] * z + p.coeffs[2] * z * z;
    CHECK(std::abs(p.eval(z) - direct) <= 1e-13);
    CHECK(std::abs((p * q).eval(z) - p.eval(z) * q.eval(z)) <= 1e-12);
    CHECK(std::abs((p + q).eval(z) - (p.eval(z) + q.eval(z))) <= 1e-12);
    CHECK(std::abs((p - q).eval(z) - (p.eval(z) - q.eval(z))) <= 1e-12);
  }

  ScalarPoly padded = p;
  padded.coeffs.push_back(cx(0.0, 0.0));
  padded.coeffs.push_back(cx(1e-14, 0.0));
  CHECK(padded.trimmed().degree() == 2);
  CHECK(padded.trimmed(0.0).degree() == 4);  // exact trim keeps the tiny block

  CHECK_THROWS_AS((void)p.eval(cx(1.1, 0.0)), ValidationError);
}

TEST_CASE("matrix polynomial arithmetic is an evaluation homomorphism") {
  Rng g(202);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = testutil::random_int(g, 1, 3);
    const MatPoly a = random_matpoly(g, n, testutil::random_int(g, 0, 4));
    const MatPoly b = random_matpoly(g, n, testutil::random_int(g, 0, 4));
    const cx s = testutil::random_cx(g);
    const double tol = 1e-12 * scale_of(a) * scale_of(b) *
                       (a.degree() + b.degree() + 2);
    for (int t = 0; t < 16; ++t) {
      const cx z = testutil::circle_point(g);
      CHECK(opnorm((a + b).eval(z) - (a.eval(z) + b.eval(z))) <= tol);
      CHECK(opnorm((a - b).eval(z) - (a.eval(z) - b.eval(z))) <= tol);
      CHECK(opnorm((a * b).eval(z) - a.eval(z) * b.eval(z)) <= tol);
      CHECK(opnorm((s * a).eval(z) - s * a.eval(z)) <= tol);
    }
  }
}

TEST_CASE("trim and shift leave evaluations unchanged") {
  Rng g(303);
  const int n = 3;
  MatPoly a = random_matpoly(g, n, 3);
  MatPoly padded = a;
  {
    std::vector<Mat> c;
    for (int k = 0; k <= a.degree(); ++k) c.push_back(a.coeff(k));
    c.push_back(Mat::Zero(n, n));
    c.push_back(1e-13 * testutil::random_mat(g, n, n));
    padded = MatPoly{std::move(c)};
  }
  CHECK(padded.trimmed().degree() == a.degree());
  for (int t = 0; t < 8; ++t) {
    const cx z = testutil::circle_point(g);
    CHECK(opnorm(padded.trimmed().eval(z) - a.eval(z)) <= 1e-11);
    CHECK(opnorm(a.shifted(2).eval(z) - z * z * a.eval(z)) <= 1e-11);
  }
  CHECK(a.shifted(2).degree() == a.degree() + 2);
  CHECK(opnorm(a.shifted(2).coeff(0)) == 0.0);
}

TEST_CASE("determinants: pointwise agreement and multiplicativity") {
  Rng g(404);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = testutil::random_int(g, 1, 3);
    const MatPoly a = random_matpoly(g, n, testutil::random_int(g, 0, 3));
    const MatPoly b = random_matpoly(g, n, testutil::random_int(g, 0, 3));
    const ScalarPoly da = cpoly::det_poly(a);
    const ScalarPoly db = cpoly::det_poly(b);
    const ScalarPoly dab = cpoly::det_poly(a * b);
    const double scale = std::pow(scale_of(a) * scale_of(b) * (a.degree() + b.degree() + 2), n);
    for (int t = 0; t < 12; ++t) {
      const cx z = testutil::circle_point(g);
      CHECK(std::abs(da.eval(z) - a.eval(z).determinant()) <= 1e-11 * scale);
      CHECK(std::abs(dab.eval(z) - da.eval(z) * db.eval(z)) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("determinant of an elementary factor is the monomial z^rank") {
  Rng g(505);
  for (int rank = 1; rank <= 2; ++rank) {
    const Mat q = testutil::random_projection(g, 3, rank);
    std::vector<Mat> c{Mat::Identity(3, 3) - q, q};
    const ScalarPoly d = cpoly::det_poly(MatPoly{std::move(c)});
    CHECK(d.degree() <= rank);
    for (int k = 0; k < rank; ++k) CHECK(std::abs(d.coeffs[k]) <= 1e-12);
    CHECK(std::abs(d.coeffs[rank] - cx(1.0, 0.0)) <= 1e-12);
  }
}

TEST_CASE("Laurent polynomials: adjoint, shifts, and products") {
  Rng g(606);
  const int n = 2;
  std::vector<Mat> c;
  for (int k = 0; k < 4; ++k) c.push_back(testutil::random_mat(g, n, n));
  LaurentMatPoly a;
  a.min = -2;
  a.coeffs = c;
  const LaurentMatPoly astar = cpoly::adjoint(a);
  for (int t = 0; t < 8; ++t) {
    const cx z = testutil::circle_point(g);
    CHECK(opnorm(astar.eval(z) - a.eval(z).adjoint()) <= 1e-12 * 16);
    CHECK(opnorm((a * astar).eval(z) - a.eval(z) * a.eval(z).adjoint()) <= 1e-10 * 64);
  }
  CHECK(astar.min == -1);  // degrees -2..1 flip to -1..2
  CHECK_FALSE(a.is_polynomial(1e-12));

  LaurentMatPoly poly = a;
  poly.min = 0;
  CHECK(poly.is_polynomial(1e-12));
  const MatPoly back = poly.to_matpoly(1e-12);
  for (int t = 0; t < 4; ++t) {
    const cx z = testutil::circle_point(g);
    CHECK(opnorm(back.eval(z) - poly.eval(z)) <= 1e-11);
  }
}

TEST_CASE("operator norm and unitary defect behave on known matrices") {
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = cx(3.0, 0.0);
  d(1, 1) = cx(-1.0, 0.0);
  CHECK(opnorm(d) == doctest::Approx(3.0).epsilon(1e-12));
  Mat u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << cx(s, 0), cx(s, 0), cx(s, 0), cx(-s, 0);
  CHECK(unitary_defect(u) <= 1e-15);
  CHECK(is_unitary(u, 1e-12));
  CHECK_FALSE(is_unitary(d, 1e-12));
}
