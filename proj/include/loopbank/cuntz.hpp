#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopbank/filters.hpp"

namespace loopbank::cuntz {

// Dimension bound of the corner subspace K = span{e_0, e_{-1}, ..., e_{-r}}:
// r = g + floor((g-1)/(n-1)) = floor((gn-1)/(n-1)).
int corner_size(int n, int g);

// Independent enumeration: smallest r with {0,...,-r} containing everything
// reachable from 0 under m |-> (m-k)/n (k = 0..gn-1, integer results only).
int corner_size_oracle(int n, int g);

// The compressed isometries V_i on K; V_i* is the restriction of the adjoint
// band operator, acting on basis vectors by
//   V_i* e_{j+nl} = sum_k conj(A_{i,j}^(k)) e_{l-k}.
// Index m of a matrix corresponds to basis vector e_{-m}.
struct RepModel {
  int n = 0;
  int g = 0;  // effective genus (possibly padded)
  int r = 0;
  loop::PolyLoop loop;
  std::vector<Mat> v;  // V_i, each (r+1) x (r+1)
};

// genus_pad extends the coefficient range with zero blocks when comparing
// loops of different degree; 0 means the loop's own genus.
RepModel corner_isometries(const loop::PolyLoop& a, int genus_pad = 0);

// Matrix of X |-> sum_i V_i^(B) X V_i^(A)* on B(K_A, K_B) in the basis
// E_{-k,-l}, flattened as idx(k,l) = k*(r_a+1) + l.
struct SigmaMatrix {
  Mat mat;
  int r_a = 0;
  int r_b = 0;

  Eigen::Index dim() const { return mat.rows(); }
  Eigen::Index idx(int k, int l) const {
    return static_cast<Eigen::Index>(k) * (r_a + 1) + l;
  }
  Vec vec(const Mat& x) const;
  Mat unvec(const Vec& v) const;
};

SigmaMatrix sigma_matrix(const RepModel& b, const RepModel& a);

struct EigenCluster {
  cx value;
  int multiplicity = 0;
};

struct SpectrumResult {
  std::vector<cx> raw;                 // solver order
  Mat vectors;                         // columns align with raw
  std::vector<EigenCluster> clusters;  // within cluster_tol, sorted by value
  double spectral_radius = 0.0;
};

SpectrumResult spectrum(const SigmaMatrix& s, double cluster_tol = 1e-7);

// Null space of (sigma - 1) via SVD threshold; HS-orthonormal basis.
std::vector<Mat> fixed_point_space(const SigmaMatrix& s, double tol = 1e-8);

// (A^(0)* A^(0))_{0,0}; the sigma-eigenvalue on the E_{0,0} line.
double lambda0(const loop::PolyLoop& a);

// e_{-k} is a joint eigenvector: V_i* e_{-k} = conj(v_i) e_{-k}; the filters
// then satisfy sum_i conj(v_i) m_i(z) = z^{(n-1)k}.
struct CuntzState {
  int k = 0;
  Vec v;
};

std::vector<CuntzState> cuntz_states(const RepModel& m, double tol = 1e-10);

// Scale reduction engaged when lambda0 is within tol of 1: C(z) = A(1)* A(z)
// splits off a constant first band, C = (1) + B(z), and B is a certified
// loop one band smaller. The banks of C (n-band, m_0 = 1) and of B
// ((n-1)-band, n >= 3) are returned alongside.
struct Reduction {
  bool present = false;
  double block_residual = 0.0;
  double eq4_residual = 0.0;  // V_i* e_0 proportional to e_0
  double eq5_residual = 0.0;  // sigma(E_{0,0}) proportional to E_{0,0}
  std::optional<loop::PolyLoop> b;
  std::optional<filters::FilterBank> modified_bank;
  std::optional<filters::FilterBank> reduced_bank;
};

Reduction reduce_scale(const loop::PolyLoop& a, double tol = 1e-9);

struct MinimalProjection {
  Mat p;
  int rank = 0;
  int cyclic_index = 0;  // e_{-k} in the range, k = argmax of the diagonal
};

struct RepReport {
  int n = 0, g = 0, r = 0;
  double lambda0 = 0.0;
  SpectrumResult spec;
  int mult_one_algebraic = 0;
  std::vector<Mat> fixed_basis;  // geometric multiplicity = size
  bool irreducible = false;
  double identity_overlap = 0.0;  // |<1_K/sqrt(dim), X>| for the fixed line
  bool fixed_set_algebra = false;
  bool fixed_set_abelian = false;
  bool decomposition_resolved = false;
  std::vector<MinimalProjection> minimal_projections;
  bool summands_disjoint = false;
  std::vector<CuntzState> states;
  Reduction reduction;
};

RepReport analyze(const loop::PolyLoop& a);

// dim { X : sigma(X) = X and X = f X e } for projections e, f from the fixed
// set; 0 means the subrepresentations cut by e and f are disjoint.
int subrep_intertwiner_dimension(const SigmaMatrix& s, const Mat& e,
                                 const Mat& f, double tol = 1e-8);

struct Intertwiner {
  int dimension = 0;
  std::vector<Mat> basis;
  std::string verdict;  // "disjoint", "equivalent", or "overlapping"
  cx e00_scalar;        // sigma(E_{0,0}) = e00_scalar * E_{0,0}
  bool e00_fixed = false;
};

Intertwiner intertwiner_space(const loop::PolyLoop& a, const loop::PolyLoop& b,
                              double tol = 1e-8);

}  // namespace loopbank::cuntz
