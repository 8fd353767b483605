#pragma once

#include <vector>

#include "loopbank/loop.hpp"

namespace loopbank::filters {

// N-band filter bank m_0..m_{N-1}; genus g is the least g with all
// degrees <= Ng - 1.
struct FilterBank {
  int n = 0;
  std::vector<cpoly::ScalarPoly> filters;

  int genus() const;
};

// A low-pass candidate: the single filter m_0 for an N-band bank.
struct LowPassCandidate {
  int n = 0;
  cpoly::ScalarPoly m0;
};

// First-row coefficient data alpha_0..alpha_{g-1} in C^N; the row relations
// sum_l <alpha_l, alpha_{l+m}> = delta_{m,0} make z |-> sum z^l alpha_l a
// pointwise unit row.
struct RowData {
  int n = 0;
  std::vector<Eigen::RowVectorXcd> rows;
};

// Exact coefficient reindexing between banks and loops:
// A_{i,j}^(k) = (coefficient of z^{j+Nk} in m_i) and back,
// m_i(z) = sum_j z^j A_{i,j}(z^N). Both directions are bit-exact.
loop::PolyLoop filters_to_loop(const FilterBank& bank, double tol = kCertTol);
FilterBank loop_to_filters(const loop::PolyLoop& a);

struct QmfReport {
  double defect = 0.0;
  bool pass = false;
};

// Unitarity of the demultiplexed matrix (1/sqrt(N)) (m_i(rho^k z)) sampled at
// 32 points of the fundamental domain 0 <= x < 2 pi / N.
QmfReport check_qmf(const FilterBank& bank, double tol = kCertTol);

struct LowPassReport {
  double m0_defect = 0.0;   // |m_0(1) - sqrt(N)|
  double row_defect = 0.0;  // max_j |A_{0,j}(1) - 1/sqrt(N)|
  bool pass = false;
};

// The two normalizations are equivalent; both are reported.
LowPassReport check_lowpass(const FilterBank& bank, double tol = kCertTol);
LowPassReport check_lowpass(const LowPassCandidate& c, double tol = kCertTol);

// Completes first-row data to a full certified loop by rank-one downdating:
// beta(z) = alpha(z)((1-P) + z^{-1}P) with P the projection onto alpha_{g-1},
// Householder completion at the constant base case. Raises "row_condition"
// when the row relations fail beyond 1e-10.
loop::PolyLoop complete_row(const RowData& rows, double tol = kCertTol);

// Low-pass completion: reindex m_0 into row data, complete, and reindex back.
// The first filter of the result reproduces the input coefficient-exactly.
// Raises "qmf_condition" when sum_k |m_0(z rho^k)|^2 != N on the circle.
FilterBank complete_lowpass(const LowPassCandidate& c, double tol = kCertTol);

struct PointwiseRow {
  cpoly::LaurentMatPoly row;  // 1 x 2
  bool polynomial = false;    // true only when both entries are constants
  double defect = 0.0;        // pointwise unitarity defect of the stacked 2x2
};

// Two-band pointwise completion (-conj a_1, conj a_0) with coefficientwise
// conjugation z^k -> z^{-k}; Laurent in general.
PointwiseRow daubechies_complete_pointwise(const cpoly::ScalarPoly& a0,
                                           const cpoly::ScalarPoly& a1);

// Explicit orthogonal completions of a unit first row, n = 4 (quaternion
// pattern) or n = 8 (Cayley pattern).
Eigen::MatrixXd real_orthogonal_completion(const Eigen::VectorXd& x);

// The 4x4 matrix obtained by translating the n = 8 pattern to complex
// entries; not unitary for generic unit first rows.
Mat cayley_like_u4(const Vec& z);

}  // namespace loopbank::filters
