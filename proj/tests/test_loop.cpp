#include <doctest.h>

#include <cmath>
#include <vector>

#include "loopbank/loop.hpp"
#include "testutil.hpp"

using namespace loopbank;
using cpoly::MatPoly;
using loop::ElementaryFactor;
using testutil::Rng;

TEST_CASE("certification accepts unitary loops and rejects the rest") {
  Rng g(11);
  const Mat u = testutil::random_unitary(g, 3);
  const loop::PolyLoop constant = loop::certify_loop(MatPoly::constant(u));
  CHECK(constant.genus() == 1);
  CHECK(constant.unitarity_defect <= 1e-12);

  const Mat q = testutil::random_projection(g, 3, 1);
  const loop::PolyLoop factor =
      loop::certify_loop(loop::factor_body(ElementaryFactor{q}));
  CHECK(factor.genus() == 2);

  Mat bad = u;
  bad(0, 0) += cx(0.05, 0.0);
  CHECK_THROWS_AS((void)loop::certify_loop(MatPoly::constant(bad)), ValidationError);
  CHECK_THROWS_AS((void)loop::certify_loop(MatPoly::constant(Mat::Zero(2, 3))),
                  ValidationError);
}

TEST_CASE("McMillan degree counts factor ranks and adds under products") {
  Rng g(22);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = testutil::random_int(g, 2, 4);
    std::vector<ElementaryFactor> fs;
    int total_rank = 0;
    const int m = testutil::random_int(g, 1, 3);
    for (int j = 0; j < m; ++j) {
      const int r = testutil::random_int(g, 1, n - 1);
      total_rank += r;
      fs.push_back(ElementaryFactor{testutil::random_projection(g, n, r)});
    }
    const loop::PolyLoop a = loop::compose(fs, testutil::random_unitary(g, n));
    CHECK(loop::mcmillan_degree(a) == total_rank);

    const loop::PolyLoop b = testutil::random_loop(g, n, 2);
    const loop::PolyLoop ab = loop::certify_loop(a.body * b.body);
    CHECK(loop::mcmillan_degree(ab) ==
          loop::mcmillan_degree(a) + loop::mcmillan_degree(b));
  }
}

TEST_CASE("diag(1, z) has degree one and factor diag(0, 1)") {
  Mat c0 = Mat::Zero(2, 2), c1 = Mat::Zero(2, 2);
  c0(0, 0) = 1.0;
  c1(1, 1) = 1.0;
  const loop::PolyLoop a = loop::certify_loop(MatPoly({c0, c1}));
  CHECK(loop::mcmillan_degree(a) == 1);
  const loop::Factorization f = loop::factorize(a);
  REQUIRE(f.rank_one_factors.size() == 1);
  Mat expect = Mat::Zero(2, 2);
  expect(1, 1) = 1.0;
  CHECK(opnorm(f.rank_one_factors[0].q - expect) <= 1e-12);
  CHECK(opnorm(f.constant - Mat::Identity(2, 2)) <= 1e-12);
}

TEST_CASE("peeling drops the degree by one and reconstructs the loop") {
  Rng g(33);
  for (int rep = 0; rep < 4; ++rep) {
    const int n = testutil::random_int(g, 2, 4);
    const int genus = testutil::random_int(g, 2, 4);
    const loop::PolyLoop a = testutil::random_loop(g, n, genus);
    const loop::PeelResult peel = loop::peel_factor(a);
    CHECK(peel.w.genus() == a.genus() - 1);
    CHECK(opnorm(peel.q - peel.q.adjoint()) <= 1e-10);
    CHECK(opnorm(peel.q * peel.q - peel.q) <= 1e-10);

    // ((1-Q) + zQ) W == A coefficientwise.
    const MatPoly rebuilt =
        loop::factor_body(ElementaryFactor{peel.q}) * peel.w.body;
    CHECK(testutil::coeff_dist(rebuilt, a.body) <= 1e-9);
  }
  const loop::PolyLoop constant =
      loop::certify_loop(MatPoly::constant(testutil::random_unitary(g, 2)));
  CHECK_THROWS_AS((void)loop::peel_factor(constant), ValidationError);
}

TEST_CASE("factorization recovers rank-one factor count and rebuilds exactly") {
  Rng g(44);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = testutil::random_int(g, 2, 4);
    const int d = testutil::random_int(g, 1, 5);
    std::vector<ElementaryFactor> fs;
    for (int j = 0; j < d; ++j) {
      const Vec u = testutil::random_unit_vec(g, n);
      fs.push_back(ElementaryFactor{u * u.adjoint()});
    }
    const loop::PolyLoop a = loop::compose(fs, testutil::random_unitary(g, n));
    const loop::Factorization f = loop::factorize(a);
    CHECK(static_cast<int>(f.rank_one_factors.size()) == loop::mcmillan_degree(a));
    for (const ElementaryFactor& e : f.rank_one_factors) {
      CHECK(opnorm(e.q * e.q - e.q) <= 1e-9);
      CHECK(std::abs(e.q.trace().real() - 1.0) <= 1e-9);
    }
    const loop::PolyLoop rebuilt = loop::compose(f.rank_one_factors, f.constant);
    CHECK(testutil::coeff_dist(rebuilt.body, a.body) <= 1e-9);
  }
}

TEST_CASE("compose validates projections and the constant") {
  Rng g(55);
  const Mat not_proj = testutil::random_mat(g, 3, 3);
  CHECK_THROWS_AS((void)loop::compose({ElementaryFactor{not_proj}},
                                      testutil::random_unitary(g, 3)),
                  ValidationError);
  CHECK_THROWS_AS((void)loop::compose({}, testutil::random_mat(g, 3, 3)),
                  ValidationError);
}

TEST_CASE("coefficient form pins the extreme coefficients") {
  Rng g(66);
  for (int rep = 0; rep < 4; ++rep) {
    const int n = testutil::random_int(g, 2, 4);
    const int genus = testutil::random_int(g, 2, 4);
    const loop::PolyLoop a = testutil::random_loop(g, n, genus);
    const loop::CoefficientForm cf = loop::coefficient_form(a);
    CHECK(is_unitary(cf.v, 1e-9));
    CHECK(static_cast<int>(cf.qs.size()) == genus - 1);

    Mat lo = Mat::Identity(n, n), hi = Mat::Identity(n, n);
    for (const Mat& q : cf.qs) {
      CHECK(opnorm(q * q - q) <= 1e-9);
      lo = lo * (Mat::Identity(n, n) - q);
      hi = hi * q;
    }
    CHECK(opnorm(a.body.coeff(0) - cf.v * lo) <= 1e-9);
    CHECK(opnorm(a.body.coeff(genus - 1) - cf.v * hi) <= 1e-9);
  }
}
