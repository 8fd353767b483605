#pragma once

#include <vector>

#include "loopbank/common.hpp"
#include "loopbank/cpoly.hpp"
#include "loopbank/filters.hpp"

namespace loopbank::cascade {

// Samples of a scaling or wavelet function on the uniform grid
// x = x0 + i * h, i = 0 .. values.size()-1, with h = n^{-levels}.
// The grid spans the full coefficient-support window [0, n*genus - 1].
struct SampledFunction {
  int n = 0;
  int genus = 0;
  int levels = 0;
  double x0 = 0.0;
  double h = 1.0;
  std::vector<cx> values;

  double x_at(std::size_t i) const { return x0 + h * static_cast<double>(i); }
  // h * sum of samples; invariant under the refinement step when the mask
  // has unit mean.
  cx mass() const;
};

struct SupportReport {
  bool empty = true;
  double lo = 0.0;  // left edge of the observed support
  double hi = 0.0;  // right edge of the observed support
  double coarse_hi = 0.0;  // n*genus - 1: bound guaranteed by construction
  double sharp_hi = 0.0;   // (n*genus - 1)/(n - 1): fixed point of S -> (S + ng - 1)/n
  double tail_mass = 0.0;  // h * sum_{x > sharp_hi} |f(x)|^2
};

// Iterates phi_{m+1}(x) = sqrt(n) * sum_k c_k phi_m(n x - k) for `levels`
// steps starting from the indicator of [0,1), where c_k are the coefficients
// of m0.  Requires m0(1) = sqrt(n) within tol ("low_pass").
SampledFunction cascade_scaling(const cpoly::ScalarPoly& m0, int n, int levels,
                                double tol = 1e-8);

// Same, using the first filter of the bank as the mask.
SampledFunction cascade_scaling(const filters::FilterBank& bank, int levels,
                                double tol = 1e-8);

// psi_i(x) = sqrt(n) * sum_k (m_i)_k phi(n x - k) for i = 1..n-1, applied to
// the final scaling iterate.  Requires the bank to pass the unitarity check
// ("qmf_condition") and the low-pass check ("low_pass").
std::vector<SampledFunction> cascade_wavelets(const filters::FilterBank& bank,
                                              int levels, double tol = 1e-8);

// Observed support edges at a relative threshold, plus the two analytic
// bounds and the sample mass lying beyond the sharper one.
SupportReport support_report(const SampledFunction& f, double tol = 1e-9);

// Quadrature values g_k = h * sum_i f(x_i) conj(f(x_i - k)) for
// |k| <= n*genus, returned in order k = -n*genus .. n*genus.
// Diagnostic only: a unitary bank guarantees a tight frame, not
// orthonormal shifts.
std::vector<cx> orthonormality_diagnostic(const SampledFunction& f);

// Same quadrature between two functions on identical grids.
std::vector<cx> cross_diagnostic(const SampledFunction& f,
                                 const SampledFunction& g);

}  // namespace loopbank::cascade
