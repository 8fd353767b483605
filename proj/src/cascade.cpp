#include "loopbank/cascade.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

namespace loopbank::cascade {

namespace {

// Grid cells per unit interval, n^levels, guarded against overflow.
std::int64_t grid_scale(int n, int levels) {
  std::int64_t s = 1;
  for (int j = 0; j < levels; ++j) {
    if (s > (std::int64_t{1} << 34) / n)
      throw ValidationError("levels", "refinement level too large for the sample grid");
    s *= n;
  }
  return s;
}

// One refinement step: out(x) = sqrt(n) * sum_k c_k in(n x - k), with `in`
// read as zero outside the window.  Both functions live on the same grid of
// spacing 1/scale, so the argument shift k maps to an index shift k*scale.
std::vector<cx> apply_mask(const std::vector<cx>& coeffs, int n,
                           std::int64_t scale, const std::vector<cx>& in) {
  const auto count = static_cast<std::int64_t>(in.size());
  std::vector<cx> out(in.size(), cx(0.0, 0.0));
  const double root = std::sqrt(static_cast<double>(n));
  const auto ncoeff = static_cast<std::int64_t>(coeffs.size());
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t base = n * i;
    cx acc(0.0, 0.0);
    for (std::int64_t k = 0; k < ncoeff; ++k) {
      const std::int64_t j = base - k * scale;
      if (j < 0) break;  // j decreases with k
      if (j >= count) continue;
      acc += coeffs[static_cast<std::size_t>(k)] * in[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = root * acc;
  }
  return out;
}

SampledFunction scaling_on_window(const std::vector<cx>& coeffs, int n, int g,
                                  int levels) {
  const std::int64_t scale = grid_scale(n, levels);
  const std::int64_t window = static_cast<std::int64_t>(n) * g - 1;
  const std::int64_t count = window * scale + 1;
  if (count > (std::int64_t{1} << 28))
    throw ValidationError("levels", "sample grid too large");

  SampledFunction f;
  f.n = n;
  f.genus = g;
  f.levels = levels;
  f.x0 = 0.0;
  f.h = 1.0 / static_cast<double>(scale);
  f.values.assign(static_cast<std::size_t>(count), cx(0.0, 0.0));
  for (std::int64_t i = 0; i < scale && i < count; ++i)
    f.values[static_cast<std::size_t>(i)] = cx(1.0, 0.0);  // indicator of [0,1)
  for (int m = 0; m < levels; ++m)
    f.values = apply_mask(coeffs, n, scale, f.values);
  return f;
}

void require_shape(int n, int levels) {
  if (n < 2) throw ValidationError("shape", "cascade needs at least two bands");
  if (levels < 0) throw ValidationError("levels", "refinement level must be nonnegative");
}

}  // namespace

cx SampledFunction::mass() const {
  cx s(0.0, 0.0);
  for (const cx& v : values) s += v;
  return h * s;
}

SampledFunction cascade_scaling(const cpoly::ScalarPoly& m0, int n, int levels,
                                double tol) {
  require_shape(n, levels);
  const cpoly::ScalarPoly t = m0.trimmed();
  const double root = std::sqrt(static_cast<double>(n));
  if (std::abs(t.eval(cx(1.0)) - root) > tol)
    throw PreconditionError("low_pass", "mask does not satisfy m0(1) = sqrt(N)");
  const int g = (t.degree() + n) / n;
  return scaling_on_window(t.coeffs, n, g, levels);
}

SampledFunction cascade_scaling(const filters::FilterBank& bank, int levels,
                                double tol) {
  require_shape(bank.n, levels);
  const cpoly::ScalarPoly t = bank.filters[0].trimmed();
  const double root = std::sqrt(static_cast<double>(bank.n));
  if (std::abs(t.eval(cx(1.0)) - root) > tol)
    throw PreconditionError("low_pass", "mask does not satisfy m0(1) = sqrt(N)");
  return scaling_on_window(t.coeffs, bank.n, bank.genus(), levels);
}

std::vector<SampledFunction> cascade_wavelets(const filters::FilterBank& bank,
                                              int levels, double tol) {
  require_shape(bank.n, levels);
  const filters::QmfReport qmf = filters::check_qmf(bank, tol);
  if (!qmf.pass)
    throw PreconditionError("qmf_condition", "filter bank is not unitary on the circle");
  const filters::LowPassReport low = filters::check_lowpass(bank, tol);
  if (low.m0_defect > tol)
    throw PreconditionError("low_pass", "first filter is not low-pass");

  const SampledFunction phi = cascade_scaling(bank, levels, tol);
  const std::int64_t scale = grid_scale(bank.n, levels);
  std::vector<SampledFunction> out;
  out.reserve(static_cast<std::size_t>(bank.n - 1));
  for (int i = 1; i < bank.n; ++i) {
    SampledFunction psi = phi;
    psi.values =
        apply_mask(bank.filters[static_cast<std::size_t>(i)].trimmed().coeffs,
                   bank.n, scale, phi.values);
    out.push_back(std::move(psi));
  }
  return out;
}

SupportReport support_report(const SampledFunction& f, double tol) {
  SupportReport rep;
  const double ng1 = static_cast<double>(f.n) * f.genus - 1.0;
  rep.coarse_hi = ng1;
  rep.sharp_hi = ng1 / (static_cast<double>(f.n) - 1.0);

  double maxabs = 0.0;
  for (const cx& v : f.values) maxabs = std::max(maxabs, std::abs(v));
  if (maxabs == 0.0) return rep;

  const double thr = tol * maxabs;
  std::size_t first = f.values.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (std::abs(f.values[i]) > thr) {
      if (first == f.values.size()) first = i;
      last = i;
    }
  }
  if (first == f.values.size()) return rep;
  rep.empty = false;
  rep.lo = f.x_at(first);
  rep.hi = f.x_at(last) + f.h;  // right edge of the last active cell

  double tail = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.x_at(i) > rep.sharp_hi) tail += std::norm(f.values[i]);
  rep.tail_mass = f.h * tail;
  return rep;
}

std::vector<cx> cross_diagnostic(const SampledFunction& f,
                                 const SampledFunction& g) {
  if (f.n != g.n || f.levels != g.levels || f.values.size() != g.values.size() ||
      f.x0 != g.x0)
    throw ValidationError("shape", "diagnostic needs functions on a common grid");
  const std::int64_t scale = grid_scale(f.n, f.levels);
  const int reach = f.n * std::max(f.genus, g.genus);
  const auto count = static_cast<std::int64_t>(f.values.size());
  std::vector<cx> out;
  out.reserve(static_cast<std::size_t>(2 * reach + 1));
  for (int k = -reach; k <= reach; ++k) {
    const std::int64_t shift = static_cast<std::int64_t>(k) * scale;
    cx acc(0.0, 0.0);
    const std::int64_t lo = std::max<std::int64_t>(0, shift);
    const std::int64_t hi = std::min(count, count + shift);
    for (std::int64_t i = lo; i < hi; ++i)
      acc += f.values[static_cast<std::size_t>(i)] *
             std::conj(g.values[static_cast<std::size_t>(i - shift)]);
    out.push_back(f.h * acc);
  }
  return out;
}

std::vector<cx> orthonormality_diagnostic(const SampledFunction& f) {
  return cross_diagnostic(f, f);
}

}  // namespace loopbank::cascade
