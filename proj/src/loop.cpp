#include "loopbank/loop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace loopbank::loop {

namespace {

using cpoly::MatPoly;

double coefficient_relation_defect(const MatPoly& a) {
  // sum_k A^(k)* A^(k+n) = delta_{n,0} 1; negative n follow by adjoints.
  const int g = a.degree() + 1;
  const Eigen::Index n = a.cols();
  double worst = 0.0;
  for (int off = 0; off < g; ++off) {
    Mat acc = Mat::Zero(n, n);
    for (int k = 0; k + off < g; ++k)
      acc += a.coeff(k).adjoint() * a.coeff(k + off);
    if (off == 0) acc -= Mat::Identity(n, n);
    worst = std::max(worst, opnorm(acc));
  }
  return worst;
}

double pointwise_defect(const MatPoly& a, int samples = 32) {
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    cx z = std::polar(1.0, 2.0 * std::numbers::pi * t / samples);
    worst = std::max(worst, unitary_defect(a.eval(z)));
  }
  return worst;
}

void validate_projection(const Mat& q, double tol) {
  if (q.rows() != q.cols())
    throw ValidationError("shape", "projection is not square");
  if (opnorm(q - q.adjoint()) > tol || opnorm(q * q - q) > tol)
    throw ValidationError("projection",
                          "matrix is not a Hermitian idempotent");
}

// Splits a projection into phase-normalized rank-one columns, eigenvalue
// descending with a lexicographic tie-break. The order carries no meaning
// beyond determinism.
std::vector<Vec> rank_one_split(const Mat& q) {
  Eigen::SelfAdjointEigenSolver<Mat> es(q);
  std::vector<std::pair<double, Vec>> kept;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    if (es.eigenvalues()(i) <= 0.5) continue;
    Vec u = es.eigenvectors().col(i);
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      if (std::abs(u(j)) > 1e-8) {
        u *= std::conj(u(j)) / std::abs(u(j));
        break;
      }
    }
    kept.emplace_back(es.eigenvalues()(i), u);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.first - b.first) > 1e-9) return a.first > b.first;
    for (Eigen::Index j = 0; j < a.second.size(); ++j) {
      cx x = a.second(j), y = b.second(j);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
  });
  std::vector<Vec> out;
  out.reserve(kept.size());
  for (auto& [val, u] : kept) out.push_back(u);
  return out;
}

struct PeelChain {
  std::vector<Mat> projections;  // in product order, loop = E_1 ... E_m V
  Mat constant;
};

PeelChain peel_all(const PolyLoop& a, double tol) {
  PeelChain chain;
  PolyLoop work = a;
  while (work.body.degree() > 0) {
    PeelResult step = peel_factor(work, tol);
    chain.projections.push_back(step.q);
    work = step.w;
  }
  chain.constant = work.body.coeff(0);
  return chain;
}

}  // namespace

PolyLoop certify_loop(const cpoly::MatPoly& body, double tol) {
  if (body.rows() != body.cols() || body.rows() == 0)
    throw ValidationError("shape", "loop body must be square and nonempty");
  MatPoly trimmed = body.trimmed();
  double defect =
      std::max(pointwise_defect(trimmed), coefficient_relation_defect(trimmed));
  if (defect > tol)
    throw ValidationError("non_unitary",
                          "unitarity defect " + std::to_string(defect) +
                              " exceeds tolerance");
  return PolyLoop{std::move(trimmed), defect};
}

cpoly::MatPoly factor_body(const ElementaryFactor& f) {
  const Eigen::Index n = f.q.rows();
  return MatPoly({Mat::Identity(n, n) - f.q, f.q});
}

int mcmillan_degree(const PolyLoop& a, double tol) {
  cpoly::ScalarPoly det = cpoly::det_poly(a.body);
  int arg = 0;
  double best = 0.0;
  for (int k = 0; k <= det.degree(); ++k) {
    if (std::abs(det.coeff(k)) > best) {
      best = std::abs(det.coeff(k));
      arg = k;
    }
  }
  double residual = 0.0;
  for (int k = 0; k <= det.degree(); ++k)
    if (k != arg) residual = std::max(residual, std::abs(det.coeff(k)));
  if (residual > tol)
    throw ValidationError("not_monomial",
                          "determinant has a second coefficient of size " +
                              std::to_string(residual));
  return arg;
}

PeelResult peel_factor(const PolyLoop& a, double tol) {
  const int deg = a.body.degree();
  if (deg == 0)
    throw ValidationError("degree_zero", "constant loop has no factor to peel");
  const Eigen::Index n = a.body.rows();

  Eigen::JacobiSVD<Mat> svd(a.body.coeff(deg), Eigen::ComputeFullU);
  const double smax = svd.singularValues()(0);
  const double thresh = 1e-8 * smax;
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    double s = svd.singularValues()(i);
    if (s > 0.1 * thresh && s < 10.0 * thresh)
      throw PreconditionError("rank_ambiguous",
                              "singular value " + std::to_string(s) +
                                  " sits inside the rank decision window");
    if (s >= thresh) ++rank;
  }
  Mat u = svd.matrixU().leftCols(rank);
  Mat q = u * u.adjoint();

  // ((1-Q) + z^{-1}Q) A: the z^{-1} and z^deg boundary terms vanish because
  // ran(A^(deg)) = ran(Q) is orthogonal to ran(A^(0)).
  Mat one = Mat::Identity(n, n);
  std::vector<Mat> w;
  w.reserve(static_cast<size_t>(deg));
  for (int j = 0; j < deg; ++j)
    w.push_back((one - q) * a.body.coeff(j) + q * a.body.coeff(j + 1));
  return PeelResult{std::move(q), certify_loop(MatPoly(std::move(w)), tol)};
}

Factorization factorize(const PolyLoop& a, double tol) {
  PeelChain chain = peel_all(a, tol);

  Factorization out;
  out.degree_projections = chain.projections;
  out.constant = chain.constant;
  for (const Mat& q : chain.projections)
    for (const Vec& u : rank_one_split(q))
      out.rank_one_factors.push_back(ElementaryFactor{u * u.adjoint()});

  PolyLoop rebuilt = compose(out.rank_one_factors, out.constant, tol);
  double err = 0.0;
  int top = std::max(rebuilt.body.degree(), a.body.degree());
  for (int k = 0; k <= top; ++k)
    err = std::max(err, opnorm(rebuilt.body.coeff(k) - a.body.coeff(k)));
  if (err > 1e-9)
    throw InternalError("factorization",
                        "rank-one product misses the loop by " +
                            std::to_string(err));
  if (static_cast<int>(out.rank_one_factors.size()) != mcmillan_degree(a))
    throw InternalError("factorization",
                        "factor count disagrees with the McMillan degree");
  return out;
}

PolyLoop compose(const std::vector<ElementaryFactor>& factors, const Mat& v,
                 double tol) {
  if (v.rows() != v.cols() || v.rows() == 0)
    throw ValidationError("shape", "constant must be square and nonempty");
  if (!is_unitary(v, 1e-10))
    throw ValidationError("non_unitary", "constant matrix is not unitary");
  MatPoly acc = MatPoly::identity(v.rows());
  for (const ElementaryFactor& f : factors) {
    validate_projection(f.q, 1e-10);
    if (f.q.rows() != v.rows())
      throw ValidationError("shape", "factor size mismatch");
    acc = acc * factor_body(f);
  }
  acc = acc * MatPoly::constant(v);
  return certify_loop(acc, tol);
}

CoefficientForm coefficient_form(const PolyLoop& a, double tol) {
  PeelChain chain = peel_all(a, tol);
  const Mat& v = chain.constant;
  const Eigen::Index n = v.rows();

  CoefficientForm out;
  out.v = v;
  out.qs.reserve(chain.projections.size());
  for (const Mat& p : chain.projections) out.qs.push_back(v.adjoint() * p * v);

  Mat lo = Mat::Identity(n, n), hi = Mat::Identity(n, n);
  for (const Mat& q : out.qs) {
    lo = lo * (Mat::Identity(n, n) - q);
    hi = hi * q;
  }
  double err = std::max(opnorm(a.body.coeff(0) - v * lo),
                        opnorm(a.body.coeff(a.body.degree()) - v * hi));
  if (!chain.projections.empty() && err > 1e-9)
    throw InternalError("coefficient_form",
                        "extreme coefficients miss the projection products by " +
                            std::to_string(err));
  return out;
}

}  // namespace loopbank::loop
