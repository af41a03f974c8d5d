#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinlab/altform.hpp"
#include "spinlab/gamma.hpp"
#include "spinlab/rng.hpp"
#include "spinlab/scalar.hpp"

namespace spinlab {

/// sigma_T = 1/2 sum_i (e_i -| T) ^ (e_i -| T). Degree 4; vanishes for n <= 4.
template <class S>
AltForm<S> sigma_t(const AltForm<S>& t3) {
  AltForm<S> out(t3.n, 4);
  for (int i = 0; i < t3.n; ++i) {
    AltForm<S> ci = contract_index(i, t3);
    out = form_add(std::move(out), wedge(ci, ci));
  }
  return form_scale(S::from_ratio(1, 2), out);
}

/// Totally skew torsion with the norm convention |T|^2 = sum_{i<j<k} T_ijk^2,
/// pinned at construction by the endomorphism identity
/// sum_j (e_j -| T).(e_j -| T) = 2 sigma_T - 3 |T|^2.
template <class S>
struct Torsion3Form {
  AltForm<S> form;
  typename S::Real norm_sq = S::real_zero();

  // coefficient T(e_i, e_j, e_k), 0-based, any order
  typename S::Real coeff(int i, int j, int k) const { return form.get({i, j, k}).re_part(); }

  // components of the vector T(X, e_j)
  RVec<S> vector_t_x(const RVec<S>& x, int j) const {
    RVec<S> out(form.n, S::real_zero());
    AltForm<S> xc = contract(x, form);     // 2-form (X -| T)
    AltForm<S> v = contract_index(j, xc);  // 1-form (e_j -| X -| T) = T(X, e_j)^flat
    for (const auto& [mask, c] : v.coeffs) out[blade::indices(mask)[0]] = c.re_part();
    return out;
  }
};

template <class S>
Torsion3Form<S> make_torsion(const GammaRep<S>& rep, const AltForm<S>& form,
                             double tol = kDefaultTolerance) {
  if (form.degree != 3) throw std::invalid_argument("make_torsion: degree must be 3");
  if (form.n != rep.n) throw std::invalid_argument("make_torsion: dimension mismatch");
  double eps = backend_zero_tolerance<S>(tol);

  Torsion3Form<S> t;
  t.form = form;
  for (const auto& [mask, c] : form.coeffs) {
    S im = c - S::from_real(c.re_part());
    if (im.abs_approx() > eps) throw std::invalid_argument("make_torsion: coefficients must be real");
    t.norm_sq = t.norm_sq + c.re_part() * c.re_part();
  }

  Mat<S> tm = form_matrix(rep, form);
  if (!is_hermitian(tm, eps))
    throw std::invalid_argument("make_torsion: torsion does not act symmetrically");

  Mat<S> lhs(rep.dim, rep.dim);
  for (int j = 0; j < rep.n; ++j) {
    Mat<S> cj = form_matrix(rep, contract_index(j, form));
    lhs += mat_mul(cj, cj);
  }
  Mat<S> rhs = mat_scale(S::from_ratio(2, 1), form_matrix(rep, sigma_t(form))) -
               mat_scale(S::from_real(t.norm_sq) * S::from_ratio(3, 1), Mat<S>::identity(rep.dim));
  if (!mat_is_zero(lhs - rhs, eps))
    throw std::invalid_argument("make_torsion: norm convention violated");
  return t;
}

// ---------------------------------------------------------------------------
// Spinorial spectrum of T
// ---------------------------------------------------------------------------

template <class S>
struct EigenSpace {
  double eigenvalue_approx = 0.0;
  std::optional<Rat> eigenvalue_exact;  // set when snapped and certified
  int multiplicity = 0;
  // exact backend: exact kernel basis, pairwise orthogonal (not normalized);
  // float backend: orthonormal numeric eigenbasis
  std::vector<Spinor<S>> basis;
};

template <class S>
struct SpectralSplit {
  int dim = 0;
  std::vector<EigenSpace<S>> spaces;

  int total_multiplicity() const {
    int m = 0;
    for (const auto& e : spaces) m += e.multiplicity;
    return m;
  }
};

namespace detail {

inline Eigen::MatrixXcd to_eigen(const Mat<ExactScalar>& m) {
  Eigen::MatrixXcd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m.at(i, j).to_complex();
  return out;
}

inline Eigen::MatrixXcd to_eigen(const Mat<FloatScalar>& m) {
  Eigen::MatrixXcd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m.at(i, j).v;
  return out;
}

inline std::optional<Rat> snap_eigenvalue(double x, const std::vector<Rat>& extra_candidates,
                                          double snap_tol = 1e-8) {
  double half = std::round(2.0 * x) / 2.0;
  if (std::abs(x - half) < snap_tol) return rat(long(std::llround(2.0 * x)), 2);
  for (const auto& c : extra_candidates)
    if (std::abs(x - to_double(c)) < snap_tol) return c;
  return std::nullopt;
}

template <class S>
void attach_certified_basis(EigenSpace<S>& space, const Mat<S>& tm) {
  if constexpr (S::is_exact) {
    Mat<S> shifted = tm;
    S g = scalar_from_rat<S>(*space.eigenvalue_exact);
    for (int i = 0; i < tm.rows; ++i) shifted.at(i, i) -= g;
    auto kernel = kernel_basis_exact(shifted);
    if (int(kernel.size()) != space.multiplicity) {
      space.eigenvalue_exact.reset();  // snapped value failed certification
      return;
    }
    space.basis = orthogonalize_exact(kernel);
  }
}

}  // namespace detail

/// Full eigendecomposition of the symmetric endomorphism T on the spin
/// module. Spectra come from a dense Hermitian solver; eigenvalues within
/// 1e-8 of an integer, half-integer or supplied candidate are snapped and,
/// on the exact backend, re-certified by an exact kernel computation.
template <class S>
SpectralSplit<S> t_spectrum(const GammaRep<S>& rep, const Torsion3Form<S>& t,
                            const std::vector<Rat>& extra_candidates = {}) {
  Mat<S> tm = form_matrix(rep, t.form);
  Eigen::MatrixXcd m = detail::to_eigen(tm);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("t_spectrum: eigensolver failed");

  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();

  SpectralSplit<S> split;
  split.dim = rep.dim;
  const double cluster_tol = 1e-8;
  int k = 0;
  while (k < rep.dim) {
    int k2 = k;
    while (k2 + 1 < rep.dim && std::abs(vals(k2 + 1) - vals(k)) < cluster_tol) ++k2;
    EigenSpace<S> space;
    space.multiplicity = k2 - k + 1;
    double mean = 0.0;
    for (int j = k; j <= k2; ++j) mean += vals(j);
    mean /= space.multiplicity;
    space.eigenvalue_approx = mean;
    space.eigenvalue_exact = detail::snap_eigenvalue(mean, extra_candidates);
    if constexpr (S::is_exact) {
      if (space.eigenvalue_exact) detail::attach_certified_basis(space, tm);
    } else {
      for (int j = k; j <= k2; ++j) {
        Spinor<S> v(rep.dim);
        for (int r = 0; r < rep.dim; ++r) v[r] = S(std::complex<double>(vecs(r, j)));
        space.basis.push_back(std::move(v));
      }
    }
    split.spaces.push_back(std::move(space));
    k = k2 + 1;
  }
  return split;
}

// ---------------------------------------------------------------------------
// Contraction identities used throughout the curvature formulas
// ---------------------------------------------------------------------------

struct IdentityCheck {
  std::string id;
  bool pass = true;
  double max_residual = 0.0;
  std::string witness;
};

struct ContractionReport {
  std::vector<IdentityCheck> checks;
  bool pass = true;
  double max_residual = 0.0;
};

namespace detail {

template <class S>
void record(ContractionReport& report, const std::string& id, double residual, double tol,
            const std::string& witness) {
  auto* entry = [&]() -> IdentityCheck* {
    for (auto& c : report.checks)
      if (c.id == id) return &c;
    report.checks.push_back({id, true, 0.0, ""});
    return &report.checks.back();
  }();
  entry->max_residual = std::max(entry->max_residual, residual);
  report.max_residual = std::max(report.max_residual, residual);
  if (residual > tol && entry->pass) {
    entry->pass = false;
    entry->witness = witness;
    report.pass = false;
  }
}

template <class S>
std::string describe_vector(const RVec<S>& x) {
  std::ostringstream os;
  os << "X=(";
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k) os << ",";
    if constexpr (S::is_exact)
      os << to_string(x[k]);
    else
      os << x[k];
  }
  os << ")";
  return os.str();
}

}  // namespace detail

/// Verifies, as spinor endomorphisms and for `trials` random vectors X:
///   (ekT)    sum_j e_j . T(X,e_j)           = 2 (X -| T)
///   (norm)   sum_j (e_j -| T).(e_j -| T)    = 2 sigma_T - 3 |T|^2
///   (swap)   sum_j e_j . (T(X,e_j) -| T)    = - sum_j T(X,e_j) . (e_j -| T)
///   (quest)  sum_j T(X,e_j) . (e_j -| T)    = -1/2 sum_j e_j.(X -| T).(e_j -| T)
///                                             + 3/2 (X -| T).T
///   (sigma)  sigma_T                        = 1/2 (|T|^2 - T^2)
template <class S>
ContractionReport check_contraction_identities(const GammaRep<S>& rep, const Torsion3Form<S>& t,
                                               int trials, std::uint64_t seed = 1,
                                               double tol = kDefaultTolerance) {
  if (trials < 1) throw std::invalid_argument("check_contraction_identities: trials >= 1");
  const double eps = backend_zero_tolerance<S>(tol);
  const int n = rep.n;
  ContractionReport report;

  Mat<S> tmat = form_matrix(rep, t.form);
  AltForm<S> sig = sigma_t(t.form);
  Mat<S> sig_mat = form_matrix(rep, sig);
  std::vector<Mat<S>> contr(n, Mat<S>(rep.dim, rep.dim));
  for (int j = 0; j < n; ++j) contr[j] = form_matrix(rep, contract_index(j, t.form));

  // X-independent identities
  {
    Mat<S> lhs(rep.dim, rep.dim);
    for (int j = 0; j < n; ++j) lhs += mat_mul(contr[j], contr[j]);
    Mat<S> rhs = mat_scale(S::from_ratio(2, 1), sig_mat) -
                 mat_scale(S::from_ratio(3, 1) * S::from_real(t.norm_sq), Mat<S>::identity(rep.dim));
    detail::record<S>(report, "norm", max_abs(lhs - rhs), eps, "");

    Mat<S> rhs2 = mat_scale(S::from_ratio(1, 2),
                            mat_scale(S::from_real(t.norm_sq), Mat<S>::identity(rep.dim)) -
                                mat_mul(tmat, tmat));
    detail::record<S>(report, "sigma-endo", max_abs(sig_mat - rhs2), eps, "");
  }

  for (int trial = 0; trial < trials; ++trial) {
    TestRng rng = TestRng::for_trial(seed, trial);
    RVec<S> x = rng.frame_coeffs<S>(n);
    std::string witness = detail::describe_vector<S>(x);
    AltForm<S> xt = contract(x, t.form);
    Mat<S> xt_mat = form_matrix(rep, xt);

    std::vector<RVec<S>> txe(n);
    for (int j = 0; j < n; ++j) txe[j] = t.vector_t_x(x, j);

    {  // (ekT)
      Mat<S> lhs(rep.dim, rep.dim);
      for (int j = 0; j < n; ++j) lhs += mat_mul(rep.gamma[j], vector_matrix(rep, txe[j]));
      detail::record<S>(report, "ekT", max_abs(lhs - mat_scale(S::from_ratio(2, 1), xt_mat)), eps,
                        witness);
    }
    {  // (swap)
      Mat<S> lhs(rep.dim, rep.dim);
      Mat<S> rhs(rep.dim, rep.dim);
      for (int j = 0; j < n; ++j) {
        lhs += mat_mul(rep.gamma[j], form_matrix(rep, contract(txe[j], t.form)));
        rhs += mat_mul(vector_matrix(rep, txe[j]), contr[j]);
      }
      detail::record<S>(report, "swap", max_abs(lhs + rhs), eps, witness);
    }
    {  // (quest)
      Mat<S> lhs(rep.dim, rep.dim);
      for (int j = 0; j < n; ++j) lhs += mat_mul(vector_matrix(rep, txe[j]), contr[j]);
      Mat<S> rhs(rep.dim, rep.dim);
      for (int j = 0; j < n; ++j)
        rhs += mat_mul(rep.gamma[j], mat_mul(xt_mat, contr[j]));
      rhs = mat_scale(S::from_ratio(-1, 2), rhs) +
            mat_scale(S::from_ratio(3, 2), mat_mul(xt_mat, tmat));
      detail::record<S>(report, "quest", max_abs(lhs - rhs), eps, witness);
    }
  }
  return report;
}

}  // namespace spinlab
