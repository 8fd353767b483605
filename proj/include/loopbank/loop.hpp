#pragma once

#include <vector>

#include "loopbank/cpoly.hpp"

namespace loopbank::loop {

// A certified polynomial unitary loop: A(z) unitary for every |z| = 1.
// Construct through certify_loop.
struct PolyLoop {
  cpoly::MatPoly body;
  double unitarity_defect = 0.0;

  int n() const { return static_cast<int>(body.rows()); }
  // genus = polynomial degree + 1 (number of coefficient blocks).
  int genus() const { return body.degree() + 1; }
};

// Certifies unitarity two ways: pointwise A(z)A(z)* = 1 at 32 circle samples,
// and the coefficient relations sum_k A^(k)* A^(k+n) = delta_{n,0} 1.
// Both must hold within tol. The body is trimmed before certification.
PolyLoop certify_loop(const cpoly::MatPoly& body, double tol = kCertTol);

// Elementary factor (1 - Q) + zQ for a projection Q.
struct ElementaryFactor {
  Mat q;
};

// The loop body of an elementary factor.
cpoly::MatPoly factor_body(const ElementaryFactor& f);

// Degree of the (necessarily monomial) determinant of the loop; equals the
// winding number of the determinant curve. Errors with "not_monomial" if a
// non-dominant determinant coefficient exceeds tol.
int mcmillan_degree(const PolyLoop& a, double tol = 1e-9);

struct PeelResult {
  Mat q;        // projection onto the range of the top coefficient
  PolyLoop w;   // ((1-Q) + z^{-1} Q) A, of degree deg(A) - 1
};

// One degree-reduction step. Rank decisions use a relative SVD threshold of
// 1e-8 * sigma_max; a singular value inside (0.1, 10) x threshold raises
// "rank_ambiguous". Degree-zero input raises "degree_zero".
PeelResult peel_factor(const PolyLoop& a, double tol = kCertTol);

struct Factorization {
  // Rank-one projections P with A(z) = prod ((1-P)+zP) * constant, in product
  // order; their count is the McMillan degree.
  std::vector<ElementaryFactor> rank_one_factors;
  // The per-degree peels Q_1..Q_{g-1}, each the projection extracted by one
  // peel step (general rank).
  std::vector<Mat> degree_projections;
  Mat constant;  // unitary V
};

Factorization factorize(const PolyLoop& a, double tol = kCertTol);

// Multiplies out prod_j ((1-Q_j) + z Q_j) * v and certifies the result.
// Validates each projection (Hermitian idempotent within 1e-10) and v.
PolyLoop compose(const std::vector<ElementaryFactor>& factors, const Mat& v,
                 double tol = kCertTol);

// A = V (1-Q_1+zQ_1) ... (1-Q_{g-1}+zQ_{g-1}) with the constant on the left;
// then A^(0) = V prod (1-Q_j) and A^(g-1) = V prod Q_j (both verified).
struct CoefficientForm {
  Mat v;
  std::vector<Mat> qs;
};

CoefficientForm coefficient_form(const PolyLoop& a, double tol = kCertTol);

}  // namespace loopbank::loop
