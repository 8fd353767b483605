#include "loopbank/cuntz.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace loopbank::cuntz {

namespace {

void require_rep_params(int n, int g) {
  if (n < 2 || g < 1)
    throw ValidationError("shape", "representation needs n >= 2, g >= 1");
}

Mat stacked_null_projected(const Mat& top, const Mat& bottom) {
  Mat stack(top.rows() + bottom.rows(), top.cols());
  stack.topRows(top.rows()) = top;
  stack.bottomRows(bottom.rows()) = bottom;
  return stack;
}

}  // namespace

int corner_size(int n, int g) {
  require_rep_params(n, g);
  return (g * n - 1) / (n - 1);
}

int corner_size_oracle(int n, int g) {
  require_rep_params(n, g);
  std::set<long> seen{0};
  std::vector<long> frontier{0};
  while (!frontier.empty()) {
    std::vector<long> next;
    for (long m : frontier) {
      for (int k = 0; k < g * n; ++k) {
        long t = m - k;  // t <= 0
        if (((t % n) + n) % n != 0) continue;
        long image = t / n;  // exact for divisible t
        if (seen.insert(image).second) next.push_back(image);
      }
    }
    frontier = std::move(next);
  }
  return static_cast<int>(-*seen.begin());
}

RepModel corner_isometries(const loop::PolyLoop& a, int genus_pad) {
  const int n = a.n();
  const int g = std::max(a.genus(), genus_pad);
  require_rep_params(n, g);
  const int r = corner_size(n, g);

  RepModel model{n, g, r, a, {}};
  model.v.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Mat vstar = Mat::Zero(r + 1, r + 1);
    for (int m = 0; m <= r; ++m) {
      // -m = j + n*l with j in [0, n)
      int j = ((-m) % n + n) % n;
      int l = (-m - j) / n;
      for (int k = 0; k < g; ++k) {
        cx coeff = std::conj(a.body.coeff(k)(i, j));
        int row = k - l;  // basis index of e_{l-k}
        if (coeff == cx(0)) continue;
        if (row < 0 || row > r)
          throw InternalError("corner_leak",
                              "adjoint image escapes the corner basis");
        vstar(row, m) += coeff;
      }
    }
    model.v.push_back(vstar.adjoint());
  }

  Mat sum = Mat::Zero(r + 1, r + 1);
  for (const Mat& vi : model.v) sum += vi * vi.adjoint();
  if (opnorm(sum - Mat::Identity(r + 1, r + 1)) > 1e-10)
    throw InternalError("isometry_sum",
                        "sum_i V_i V_i* differs from the identity on K");
  return model;
}

Vec SigmaMatrix::vec(const Mat& x) const {
  if (x.rows() != r_b + 1 || x.cols() != r_a + 1)
    throw ValidationError("shape", "operand shape differs from the corners");
  Vec out(dim());
  for (int k = 0; k <= r_b; ++k)
    for (int l = 0; l <= r_a; ++l) out(idx(k, l)) = x(k, l);
  return out;
}

Mat SigmaMatrix::unvec(const Vec& v) const {
  if (v.size() != dim())
    throw ValidationError("shape", "vector length differs from the corners");
  Mat out(r_b + 1, r_a + 1);
  for (int k = 0; k <= r_b; ++k)
    for (int l = 0; l <= r_a; ++l) out(k, l) = v(idx(k, l));
  return out;
}

SigmaMatrix sigma_matrix(const RepModel& b, const RepModel& a) {
  if (a.n != b.n)
    throw ValidationError("shape", "band counts differ between the models");
  SigmaMatrix s;
  s.r_a = a.r;
  s.r_b = b.r;
  const Eigen::Index d = static_cast<Eigen::Index>(b.r + 1) * (a.r + 1);
  s.mat = Mat::Zero(d, d);
  for (int i = 0; i < a.n; ++i) {
    const Mat& vb = b.v[static_cast<size_t>(i)];
    const Mat va = a.v[static_cast<size_t>(i)].conjugate();
    for (int kp = 0; kp <= b.r; ++kp)
      for (int k = 0; k <= b.r; ++k)
        for (int lp = 0; lp <= a.r; ++lp)
          for (int l = 0; l <= a.r; ++l)
            s.mat(s.idx(kp, lp), s.idx(k, l)) += vb(kp, k) * va(lp, l);
  }

  // The matrix built from the adjoint map must be the conjugate transpose.
  Mat star = Mat::Zero(d, d);
  for (int i = 0; i < a.n; ++i) {
    const Mat vb = b.v[static_cast<size_t>(i)].adjoint();
    const Mat va = a.v[static_cast<size_t>(i)].adjoint().conjugate();
    for (int kp = 0; kp <= b.r; ++kp)
      for (int k = 0; k <= b.r; ++k)
        for (int lp = 0; lp <= a.r; ++lp)
          for (int l = 0; l <= a.r; ++l)
            star(s.idx(kp, lp), s.idx(k, l)) += vb(kp, k) * va(lp, l);
  }
  if ((star - s.mat.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw InternalError("sigma_adjoint",
                        "adjoint transfer matrix mismatch");
  return s;
}

SpectrumResult spectrum(const SigmaMatrix& s, double cluster_tol) {
  Eigen::ComplexEigenSolver<Mat> es(s.mat);
  SpectrumResult out;
  out.raw.assign(es.eigenvalues().data(),
                 es.eigenvalues().data() + es.eigenvalues().size());
  out.vectors = es.eigenvectors();
  for (cx v : out.raw)
    out.spectral_radius = std::max(out.spectral_radius, std::abs(v));

  std::vector<size_t> order(out.raw.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    if (out.raw[i].real() != out.raw[j].real())
      return out.raw[i].real() < out.raw[j].real();
    return out.raw[i].imag() < out.raw[j].imag();
  });
  for (size_t i : order) {
    bool placed = false;
    for (EigenCluster& c : out.clusters) {
      if (std::abs(out.raw[i] - c.value) <= cluster_tol) {
        c.value = (c.value * static_cast<double>(c.multiplicity) + out.raw[i]) /
                  static_cast<double>(c.multiplicity + 1);
        ++c.multiplicity;
        placed = true;
        break;
      }
    }
    if (!placed) out.clusters.push_back(EigenCluster{out.raw[i], 1});
  }
  return out;
}

std::vector<Mat> fixed_point_space(const SigmaMatrix& s, double tol) {
  Mat d = s.mat - Mat::Identity(s.dim(), s.dim());
  Eigen::JacobiSVD<Mat> svd(d, Eigen::ComputeFullV);
  std::vector<Mat> basis;
  for (Eigen::Index i = svd.singularValues().size() - 1; i >= 0; --i) {
    if (svd.singularValues()(i) >= tol) break;
    basis.push_back(s.unvec(svd.matrixV().col(i)));
  }
  return basis;
}

double lambda0(const loop::PolyLoop& a) {
  cx v = (a.body.coeff(0).adjoint() * a.body.coeff(0))(0, 0);
  if (std::abs(v.imag()) > 1e-12)
    throw InternalError("lambda0", "diagonal of a positive matrix went complex");
  return v.real();
}

std::vector<CuntzState> cuntz_states(const RepModel& m, double tol) {
  filters::FilterBank bank = filters::loop_to_filters(m.loop);
  std::vector<CuntzState> states;
  for (int k = 0; k <= m.r; ++k) {
    bool diagonal = true;
    Vec vbar(m.n);
    for (int i = 0; i < m.n && diagonal; ++i) {
      Vec col = m.v[static_cast<size_t>(i)].adjoint().col(k);
      for (int p = 0; p <= m.r; ++p)
        if (p != k && std::abs(col(p)) > tol) {
          diagonal = false;
          break;
        }
      vbar(i) = col(k);
    }
    if (!diagonal) continue;
    if (std::abs(vbar.squaredNorm() - 1.0) > 1e-8)
      throw InternalError("state_norm",
                          "joint eigencolumn is not a unit vector");
    // sum_i conj(v_i) m_i(z) must collapse to the monomial z^{(n-1)k}.
    cpoly::ScalarPoly acc;
    for (int i = 0; i < m.n; ++i)
      acc = acc + vbar(i) * bank.filters[static_cast<size_t>(i)];
    acc = acc - cpoly::ScalarPoly::monomial((m.n - 1) * k);
    double err = 0.0;
    for (int t = 0; t <= acc.degree(); ++t)
      err = std::max(err, std::abs(acc.coeff(t)));
    if (err > 1e-8)
      throw InternalError("state_identity",
                          "filter identity fails for a joint eigenvector");
    states.push_back(CuntzState{k, vbar.conjugate()});
  }
  return states;
}

Reduction reduce_scale(const loop::PolyLoop& a, double tol) {
  if (a.n() < 2)
    throw ValidationError("shape", "scale reduction needs at least two bands");
  Reduction red;
  double lam = lambda0(a);
  if (lam < 1.0 - tol) return red;
  red.present = true;

  const int n = a.n();
  const int g = a.genus();
  Mat a1 = a.body.eval(cx(1));
  std::vector<Mat> c(static_cast<size_t>(g));
  for (int k = 0; k < g; ++k) c[static_cast<size_t>(k)] = a1.adjoint() * a.body.coeff(k);

  for (int k = 0; k < g; ++k) {
    const Mat& ck = c[static_cast<size_t>(k)];
    double dev = std::abs(ck(0, 0) - (k == 0 ? cx(1) : cx(0)));
    dev = std::max(dev, ck.row(0).tail(n - 1).cwiseAbs().maxCoeff());
    dev = std::max(dev, ck.col(0).tail(n - 1).cwiseAbs().maxCoeff());
    red.block_residual = std::max(red.block_residual, dev);
  }
  if (red.block_residual > 1e-9)
    throw InternalError("block_form",
                        "normalized loop is not (1) + B(z); residual " +
                            std::to_string(red.block_residual));

  loop::PolyLoop cloop = loop::certify_loop(cpoly::MatPoly(c));
  std::vector<Mat> bc(static_cast<size_t>(g));
  for (int k = 0; k < g; ++k)
    bc[static_cast<size_t>(k)] = c[static_cast<size_t>(k)].bottomRightCorner(n - 1, n - 1);
  red.b = loop::certify_loop(cpoly::MatPoly(std::move(bc)));
  red.modified_bank = filters::loop_to_filters(cloop);
  if (n >= 3) red.reduced_bank = filters::loop_to_filters(*red.b);

  // The remaining equivalences, verified on the normalized loop: V_i* e_0 is
  // a multiple of e_0, and sigma fixes the line through E_{0,0}.
  RepModel model = corner_isometries(cloop);
  for (const Mat& vi : model.v) {
    Vec col = vi.adjoint().col(0);
    red.eq4_residual =
        std::max(red.eq4_residual, col.tail(model.r).cwiseAbs().maxCoeff());
  }
  Mat y = Mat::Zero(model.r + 1, model.r + 1);
  for (const Mat& vi : model.v)
    y += vi.col(0) * vi.col(0).adjoint();
  Mat e00 = Mat::Zero(model.r + 1, model.r + 1);
  e00(0, 0) = 1.0;
  red.eq5_residual = opnorm(y - e00);
  if (red.eq4_residual > 1e-7 || red.eq5_residual > 1e-7)
    throw InternalError("reduction_equivalence",
                        "scale reduction equivalences fail numerically");
  return red;
}

int subrep_intertwiner_dimension(const SigmaMatrix& s, const Mat& e,
                                 const Mat& f, double tol) {
  const Eigen::Index d = s.dim();
  // Projection of the vectorized space onto {X = f X e}.
  Mat compress = Mat::Zero(d, d);
  for (int k = 0; k <= s.r_b; ++k)
    for (int l = 0; l <= s.r_a; ++l)
      for (int k2 = 0; k2 <= s.r_b; ++k2)
        for (int l2 = 0; l2 <= s.r_a; ++l2)
          compress(s.idx(k, l), s.idx(k2, l2)) =
              f(k, k2) * std::conj(e(l, l2));
  Mat top = s.mat - Mat::Identity(d, d);
  Mat bottom = Mat::Identity(d, d) - compress;
  Eigen::JacobiSVD<Mat> svd(stacked_null_projected(top, bottom));
  int null_dim = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) < tol) ++null_dim;
  return null_dim;
}

namespace {

double hs_norm(const Mat& x) { return x.norm(); }

Mat project_span(const std::vector<Mat>& basis, const Mat& x) {
  Mat acc = Mat::Zero(x.rows(), x.cols());
  for (const Mat& b : basis)
    acc += (b.adjoint() * x).trace() * b;  // basis is HS-orthonormal
  return acc;
}

struct DecompositionResult {
  bool resolved = false;
  std::vector<MinimalProjection> minimal;
  bool disjoint = false;
};

DecompositionResult resolve_decomposition(const SigmaMatrix& s,
                                          const std::vector<Mat>& fixed) {
  DecompositionResult out;
  const size_t dim = fixed.size();
  const Eigen::Index k = fixed[0].rows();

  if (dim == 1) {
    MinimalProjection mp;
    mp.p = Mat::Identity(k, k);
    mp.rank = static_cast<int>(k);
    mp.cyclic_index = 0;
    out.minimal.push_back(std::move(mp));
    out.resolved = true;
    out.disjoint = true;
    return out;
  }

  // Hermitian spanning family of the (adjoint-closed) fixed set.
  std::vector<Mat> herm;
  for (const Mat& x : fixed) {
    herm.push_back((x + x.adjoint()) / 2.0);
    herm.push_back((x - x.adjoint()) / (2.0 * cx(0, 1)));
  }

  std::mt19937_64 rng(0x6c6f6f70u);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat h = Mat::Zero(k, k);
    for (const Mat& b : herm) h += gauss(rng) * b;
    h = ((h + h.adjoint()) / 2.0).eval();

    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    std::vector<std::pair<double, std::vector<Eigen::Index>>> groups;
    for (Eigen::Index i = 0; i < k; ++i) {
      double val = es.eigenvalues()(i);
      if (!groups.empty() && std::abs(val - groups.back().first) <= 1e-7) {
        groups.back().second.push_back(i);
      } else {
        groups.push_back({val, {i}});
      }
    }
    if (groups.size() != dim) continue;

    std::vector<MinimalProjection> minimal;
    bool ok = true;
    for (auto& [val, idxs] : groups) {
      Mat p = Mat::Zero(k, k);
      for (Eigen::Index i : idxs)
        p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      if (hs_norm(p - project_span(fixed, p)) > 1e-7 ||
          (s.mat * s.vec(p) - s.vec(p)).norm() > 1e-7) {
        ok = false;
        break;
      }
      MinimalProjection mp;
      mp.rank = static_cast<int>(idxs.size());
      Eigen::Index arg = 0;
      const Eigen::VectorXd diag_re = p.diagonal().real();
      diag_re.maxCoeff(&arg);
      mp.cyclic_index = static_cast<int>(arg);
      mp.p = std::move(p);
      minimal.push_back(std::move(mp));
    }
    if (!ok) continue;

    std::sort(minimal.begin(), minimal.end(),
              [](const MinimalProjection& a, const MinimalProjection& b) {
                if (a.cyclic_index != b.cyclic_index)
                  return a.cyclic_index < b.cyclic_index;
                return a.rank < b.rank;
              });
    out.minimal = std::move(minimal);
    out.resolved = true;

    out.disjoint = true;
    for (size_t i = 0; i < out.minimal.size() && out.disjoint; ++i)
      for (size_t j = 0; j < out.minimal.size() && out.disjoint; ++j)
        if (i != j &&
            subrep_intertwiner_dimension(s, out.minimal[i].p,
                                         out.minimal[j].p) > 0)
          out.disjoint = false;
    return out;
  }
  return out;
}

}  // namespace

RepReport analyze(const loop::PolyLoop& a) {
  RepReport report;
  RepModel model = corner_isometries(a);
  report.n = model.n;
  report.g = model.g;
  report.r = model.r;
  report.lambda0 = lambda0(a);

  SigmaMatrix s = sigma_matrix(model, model);
  report.spec = spectrum(s);
  for (const EigenCluster& c : report.spec.clusters)
    if (std::abs(c.value - cx(1)) <= 1e-7) report.mult_one_algebraic += c.multiplicity;

  report.fixed_basis = fixed_point_space(s);
  if (report.fixed_basis.empty())
    throw InternalError("fixed_space",
                        "unital transfer operator lost its fixed identity");

  const double dim_root = std::sqrt(static_cast<double>(model.r + 1));
  if (report.fixed_basis.size() == 1) {
    report.irreducible = true;
    report.identity_overlap =
        std::abs(report.fixed_basis[0].trace()) / dim_root;
  }

  double alg = 0.0, comm = 0.0;
  for (const Mat& x : report.fixed_basis) {
    alg = std::max(alg,
                   hs_norm(x.adjoint() - project_span(report.fixed_basis,
                                                      x.adjoint())));
    for (const Mat& y : report.fixed_basis) {
      alg = std::max(alg, hs_norm(x * y - project_span(report.fixed_basis, x * y)));
      comm = std::max(comm, hs_norm(x * y - y * x));
    }
  }
  report.fixed_set_algebra = alg <= 1e-8;
  report.fixed_set_abelian = comm <= 1e-8;

  if (report.fixed_set_algebra && report.fixed_set_abelian) {
    DecompositionResult dec = resolve_decomposition(s, report.fixed_basis);
    report.decomposition_resolved = dec.resolved;
    report.minimal_projections = std::move(dec.minimal);
    report.summands_disjoint = dec.disjoint;
  }

  report.states = cuntz_states(model);
  report.reduction = reduce_scale(a);
  return report;
}

Intertwiner intertwiner_space(const loop::PolyLoop& a, const loop::PolyLoop& b,
                              double tol) {
  if (a.n() != b.n())
    throw ValidationError("shape", "band counts differ between the loops");
  const int g = std::max(a.genus(), b.genus());
  RepModel ma = corner_isometries(a, g);
  RepModel mb = corner_isometries(b, g);
  SigmaMatrix s = sigma_matrix(mb, ma);

  Intertwiner out;
  out.basis = fixed_point_space(s, tol);
  out.dimension = static_cast<int>(out.basis.size());

  cx scalar(0);
  for (int i = 0; i < a.n(); ++i)
    scalar += std::conj(a.body.coeff(0)(i, 0)) * b.body.coeff(0)(i, 0);
  out.e00_scalar = scalar;
  Mat e00 = Mat::Zero(mb.r + 1, ma.r + 1);
  e00(0, 0) = 1.0;
  if ((s.unvec(s.mat * s.vec(e00)) - scalar * e00).norm() > 1e-8)
    throw InternalError("e00_scalar",
                        "sigma does not scale E_{0,0} by the filter overlap");
  out.e00_fixed = std::abs(scalar - cx(1)) <= tol;

  if (out.dimension == 0) {
    out.verdict = "disjoint";
  } else {
    bool irr_a = fixed_point_space(sigma_matrix(ma, ma), tol).size() == 1;
    bool irr_b = fixed_point_space(sigma_matrix(mb, mb), tol).size() == 1;
    out.verdict = (irr_a && irr_b) ? "equivalent" : "overlapping";
  }
  return out;
}

}  // namespace loopbank::cuntz
