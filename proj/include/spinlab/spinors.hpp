#pragma once

#include <string>
#include <utility>

#include "spinlab/torsion.hpp"

namespace spinlab {

/// Pointwise data of a nabla^c-parallel spinor: the torsion form, a constant
/// T-eigenvalue gamma and an eigenspinor. The einstein_killing flag asserts
/// the additional algebraic equation (X -| T).phi0 + (3 gamma/n) X.phi0 = 0,
/// which forces gamma^2 = 2n/(9-n) |T|^2 and puts phi0 in the Killing/twistor
/// correspondence for every parameter s.
template <class S>
struct ParallelSpinorDatum {
  Torsion3Form<S> torsion;
  typename S::Real gamma_eig = S::real_zero();
  Spinor<S> phi0;
  bool einstein_killing = false;
};

/// Cached Clifford matrices of one torsion form; the algebraic counterpart of
/// SpinOps for structures that carry no frame model.
template <class S>
struct TorsionOps {
  const GammaRep<S>* rep = nullptr;
  Torsion3Form<S> torsion;
  Mat<S> t_mat;
  std::vector<Mat<S>> t_contr;      // mat(e_i -| T)
  AltForm<S> sigma;
  Mat<S> sigma_mat;
  std::vector<Mat<S>> sigma_contr;  // mat(e_i -| sigma_T)

  int n() const { return rep->n; }
  int dim() const { return rep->dim; }
};

template <class S>
TorsionOps<S> make_torsion_ops(const GammaRep<S>& rep, const Torsion3Form<S>& t) {
  TorsionOps<S> ops;
  ops.rep = &rep;
  ops.torsion = t;
  ops.t_mat = form_matrix(rep, t.form);
  ops.sigma = sigma_t(t.form);
  ops.sigma_mat = form_matrix(rep, ops.sigma);
  for (int i = 0; i < rep.n; ++i) {
    ops.t_contr.push_back(form_matrix(rep, contract_index(i, t.form)));
    ops.sigma_contr.push_back(form_matrix(rep, contract_index(i, ops.sigma)));
  }
  return ops;
}

template <class S>
double datum_residual(const TorsionOps<S>& ops, const ParallelSpinorDatum<S>& d) {
  // (T - gamma) phi0 = 0
  Spinor<S> r = mat_vec(ops.t_mat, d.phi0);
  axpy(r, -S::from_real(d.gamma_eig), d.phi0);
  double worst = max_abs(r);
  if (d.einstein_killing) {
    const int n = ops.n();
    for (int a = 0; a < n; ++a) {
      Spinor<S> t1s = mat_vec(ops.t_contr[a], d.phi0);
      typename S::Real coef = real_of<S>(3, n) * d.gamma_eig;
      axpy(t1s, S::from_real(coef), mat_vec(ops.rep->gamma[a], d.phi0));
      worst = std::max(worst, max_abs(t1s));
    }
    // gamma^2 = 2n/(9-n) |T|^2
    typename S::Real gap =
        d.gamma_eig * d.gamma_eig - real_of<S>(2 * n, 9 - n) * ops.torsion.norm_sq;
    worst = std::max(worst, S::from_real(gap).abs_approx());
  }
  return worst;
}

template <class S>
void require_datum(const TorsionOps<S>& ops, const ParallelSpinorDatum<S>& d,
                   double tol = 0.0) {
  if (datum_residual(ops, d) > tol)
    throw std::invalid_argument("parallel-spinor datum violates its invariants");
}

namespace detail {

template <class S>
Mat<S> contract_with_vector(const TorsionOps<S>& ops, const std::vector<Mat<S>>& table,
                            const RVec<S>& x) {
  Mat<S> out(ops.dim(), ops.dim());
  for (int a = 0; a < ops.n(); ++a) {
    S c = S::from_real(x[a]);
    if (!c.is_zero()) out += mat_scale(c, table[a]);
  }
  return out;
}

// sum_j T(X,e_j) . (e_j -| T) . phi0
template <class S>
Spinor<S> torsion_pair_sum(const TorsionOps<S>& ops, const RVec<S>& x, const Spinor<S>& phi) {
  Spinor<S> acc = zero_vec<S>(ops.dim());
  for (int j = 0; j < ops.n(); ++j) {
    RVec<S> txj = ops.torsion.vector_t_x(x, j);
    add_into(acc, vector_action(*ops.rep, txj, mat_vec(ops.t_contr[j], phi)));
  }
  return acc;
}

// sum_j e_j . (T(X,e_j) -| T) . phi0
template <class S>
Spinor<S> torsion_pair_sum_swapped(const TorsionOps<S>& ops, const RVec<S>& x,
                                   const Spinor<S>& phi) {
  Spinor<S> acc = zero_vec<S>(ops.dim());
  for (int j = 0; j < ops.n(); ++j) {
    RVec<S> txj = ops.torsion.vector_t_x(x, j);
    AltForm<S> contracted = contract(txj, ops.torsion.form);
    add_into(acc, mat_vec(ops.rep->gamma[j], form_action(*ops.rep, contracted, phi)));
  }
  return acc;
}

}  // namespace detail

/// Ricci action on a nabla^c-parallel spinor, for any s:
///   Ric^s(X).phi0 = (16s^2-1)/4 sum_j T(X,e_j).(e_j -| T).phi0
///                   + (16s^2+3)/4 (X -| sigma_T).phi0.
/// Both displayed forms are evaluated and must agree; at s = 0 the result is
/// re-checked against the gamma-substituted Riemannian expression.
template <class S>
Spinor<S> ricci_action_parallel(const TorsionOps<S>& ops, const ParallelSpinorDatum<S>& d,
                                const typename S::Real& s, const RVec<S>& x,
                                double tol = 0.0) {
  require_datum(ops, d, tol);
  typename S::Real s2 = s * s;
  typename S::Real c_pair = (real_of<S>(16) * s2 - real_of<S>(1)) * real_of<S>(1, 4);
  typename S::Real c_sigma = (real_of<S>(16) * s2 + real_of<S>(3)) * real_of<S>(1, 4);

  Spinor<S> pair = detail::torsion_pair_sum(ops, x, d.phi0);
  Spinor<S> swapped = detail::torsion_pair_sum_swapped(ops, x, d.phi0);
  if (max_abs(vec_add(swapped, pair)) > tol)
    throw std::logic_error("ricci_action_parallel: the two torsion expressions disagree");

  Spinor<S> sigma_part = mat_vec(detail::contract_with_vector(ops, ops.sigma_contr, x), d.phi0);

  Spinor<S> out = vec_scale(S::from_real(c_pair), pair);
  axpy(out, S::from_real(c_sigma), sigma_part);

  if (S::from_real(s).is_zero()) {
    // Riemannian form with the eigenvalue substituted:
    // 1/8 sum_j e_j.(X -| T).(e_j -| T).phi0 - (3 gamma/8)(X -| T).phi0
    //   + 3/4 (X -| sigma_T).phi0
    Mat<S> xt = detail::contract_with_vector(ops, ops.t_contr, x);
    Spinor<S> alt = zero_vec<S>(ops.dim());
    for (int j = 0; j < ops.n(); ++j)
      add_into(alt, mat_vec(ops.rep->gamma[j], mat_vec(xt, mat_vec(ops.t_contr[j], d.phi0))));
    alt = vec_scale(S::from_ratio(1, 8), std::move(alt));
    typename S::Real c_mid = real_of<S>(-3, 8) * d.gamma_eig;
    axpy(alt, S::from_real(c_mid), mat_vec(xt, d.phi0));
    axpy(alt, S::from_ratio(3, 4), sigma_part);
    if (max_abs(vec_sub(out, alt)) > tol)
      throw std::logic_error("ricci_action_parallel: Riemannian reformulation disagrees");
  }
  return out;
}

/// Action of the symmetric torsion-square endomorphism:
///   S(X).phi0 = sum_j e_j.(T(X,e_j) -| T).phi0 - (X -| sigma_T).phi0,
/// re-derived through the eigenvalue-substituted form, and consistent with
/// Ric^s = Ric^c - (16s^2-1)/4 S as actions on phi0.
template <class S>
Spinor<S> s_endomorphism_parallel(const TorsionOps<S>& ops, const ParallelSpinorDatum<S>& d,
                                  const RVec<S>& x, double tol = 0.0) {
  require_datum(ops, d, tol);
  Spinor<S> sigma_part = mat_vec(detail::contract_with_vector(ops, ops.sigma_contr, x), d.phi0);
  Spinor<S> out = detail::torsion_pair_sum_swapped(ops, x, d.phi0);
  sub_into(out, sigma_part);

  {  // second displayed form
    Mat<S> xt = detail::contract_with_vector(ops, ops.t_contr, x);
    Spinor<S> alt = zero_vec<S>(ops.dim());
    for (int j = 0; j < ops.n(); ++j)
      add_into(alt, mat_vec(ops.rep->gamma[j], mat_vec(xt, mat_vec(ops.t_contr[j], d.phi0))));
    alt = vec_scale(S::from_ratio(1, 2), std::move(alt));
    typename S::Real c_mid = real_of<S>(-3, 2) * d.gamma_eig;
    axpy(alt, S::from_real(c_mid), mat_vec(xt, d.phi0));
    sub_into(alt, sigma_part);
    if (max_abs(vec_sub(out, alt)) > tol)
      throw std::logic_error("s_endomorphism_parallel: the two expressions disagree");
  }

  // Ric^s = Ric^c - (16s^2-1)/4 S on phi0, sampled at two parameters
  for (long num : {1L, -2L}) {
    typename S::Real s = real_of<S>(num, 3);
    typename S::Real s2 = s * s;
    typename S::Real c = (real_of<S>(16) * s2 - real_of<S>(1)) * real_of<S>(1, 4);
    Spinor<S> lhs = ricci_action_parallel(ops, d, s, x, tol);
    Spinor<S> rhs = ricci_action_parallel(ops, d, real_of<S>(1, 4), x, tol);
    axpy(rhs, -S::from_real(c), out);
    if (max_abs(vec_sub(lhs, rhs)) > tol)
      throw std::logic_error("s_endomorphism_parallel: Ric^s vs Ric^c - coef*S mismatch");
  }
  return out;
}

/// Killing/twistor correspondence for einstein-killing data: checks
/// (X -| T).phi0 = -(3 gamma/n) X.phi0 and nabla^s_X phi0 = zeta X.phi0 with
/// zeta = 3(1-4s) gamma / (4n), plus the characteristic Einstein condition
/// Ric^c(X).phi0 = (3 gamma^2 (n-3)/n^2) X.phi0. Returns zeta.
template <class S>
typename S::Real killing_correspondence(const TorsionOps<S>& ops,
                                        const ParallelSpinorDatum<S>& d,
                                        const typename S::Real& s, double tol = 0.0) {
  if (!d.einstein_killing)
    throw std::invalid_argument("killing_correspondence: datum is not einstein-killing type");
  require_datum(ops, d, tol);  // includes the t1s equation
  const int n = ops.n();
  typename S::Real one_minus_4s = real_of<S>(1) - (s + s + s + s);
  typename S::Real zeta = real_of<S>(3, 4 * n) * one_minus_4s * d.gamma_eig;

  // nabla^s_X phi0 = (4s-1)/4 (X -| T).phi0 must equal zeta X.phi0
  typename S::Real c_nabla = real_of<S>(-1, 4) * one_minus_4s;
  for (int a = 0; a < n; ++a) {
    Spinor<S> lhs = vec_scale(S::from_real(c_nabla), mat_vec(ops.t_contr[a], d.phi0));
    axpy(lhs, -S::from_real(zeta), mat_vec(ops.rep->gamma[a], d.phi0));
    if (max_abs(lhs) > tol)
      throw std::logic_error("killing_correspondence: Killing equation fails");
  }

  // Ric^c(X).phi0 = (X -| sigma_T).phi0 = 3 gamma^2 (n-3)/n^2 X.phi0
  typename S::Real c_ein = real_of<S>(3 * (n - 3), n * n) * d.gamma_eig * d.gamma_eig;
  for (int a = 0; a < n; ++a) {
    Spinor<S> ric = ricci_action_parallel(ops, d, real_of<S>(1, 4), frame_vector<S>(n, a), tol);
    axpy(ric, -S::from_real(c_ein), mat_vec(ops.rep->gamma[a], d.phi0));
    if (max_abs(ric) > tol)
      throw std::logic_error("killing_correspondence: characteristic Einstein condition fails");
  }
  return zeta;
}

/// Einstein ("harmony") factor: for einstein-killing data the Ricci action is
/// a multiple of the identity, Ric^s(X).phi0 = (Sca^s/n) X.phi0 with
/// Sca^s = 3 gamma^2 (-3 + 3n - 144 s^2 + 16 n s^2) / (4n). Returns Sca^s/n.
template <class S>
typename S::Real harmony_einstein(const TorsionOps<S>& ops, const ParallelSpinorDatum<S>& d,
                                  const typename S::Real& s, double tol = 0.0) {
  if (!d.einstein_killing)
    throw std::invalid_argument("harmony_einstein: datum is not einstein-killing type");
  const int n = ops.n();
  typename S::Real s2 = s * s;
  typename S::Real poly = real_of<S>(3 * n - 3) + real_of<S>(16 * n - 144) * s2;
  typename S::Real sca = real_of<S>(3, 4 * n) * d.gamma_eig * d.gamma_eig * poly;
  typename S::Real factor = sca * real_of<S>(1, n);

  for (int a = 0; a < n; ++a) {
    Spinor<S> ric = ricci_action_parallel(ops, d, s, frame_vector<S>(n, a), tol);
    axpy(ric, -S::from_real(factor), mat_vec(ops.rep->gamma[a], d.phi0));
    if (max_abs(ric) > tol)
      throw std::logic_error("harmony_einstein: Ricci action is not the expected multiple");
  }
  return factor;
}

/// slashed-D^s eigenvalue on a nabla^c-parallel spinor:
///   beta = -(4s-1)/4 (gamma^2 + 2 |T|^2),
/// computed through the substitution nabla^s phi0 = (4s-1)/4 (e_i -| T).phi0
/// and cross-checked against slashed-D^c + (4s-1)/4 (2 sigma_T - 3 |T|^2).
template <class S>
typename S::Real slashed_eigen_parallel(const TorsionOps<S>& ops,
                                        const ParallelSpinorDatum<S>& d,
                                        const typename S::Real& s, double tol = 0.0) {
  require_datum(ops, d, tol);
  typename S::Real q = (s + s + s + s - real_of<S>(1)) * real_of<S>(1, 4);  // (4s-1)/4
  typename S::Real beta =
      -q * (d.gamma_eig * d.gamma_eig + ops.torsion.norm_sq + ops.torsion.norm_sq);

  // route 1: blade-level substitution
  Spinor<S> lhs = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i)
    add_into(lhs, mat_vec(ops.t_contr[i], mat_vec(ops.t_contr[i], d.phi0)));
  lhs = vec_scale(S::from_real(q), std::move(lhs));
  Spinor<S> expected = vec_scale(S::from_real(beta), d.phi0);
  if (max_abs(vec_sub(lhs, expected)) > tol)
    throw std::logic_error("slashed_eigen_parallel: substitution route disagrees");

  // route 2: through the sigma_T matrix
  Spinor<S> alt = vec_scale(S::from_ratio(2, 1), mat_vec(ops.sigma_mat, d.phi0));
  axpy(alt, -S::from_ratio(3, 1) * S::from_real(ops.torsion.norm_sq), d.phi0);
  alt = vec_scale(S::from_real(q), std::move(alt));
  if (max_abs(vec_sub(alt, expected)) > tol)
    throw std::logic_error("slashed_eigen_parallel: sigma route disagrees");
  return beta;
}

/// slashed-D^s on Killing data: 3 zeta T.phi0, which is the twistor relation
/// slashed-D^s phi = -(3/n) T.D^s phi with D^s phi0 = -n zeta phi0.
template <class S>
Spinor<S> slashed_on_killing(const TorsionOps<S>& ops, const ParallelSpinorDatum<S>& d,
                             const typename S::Real& s, double tol = 0.0) {
  typename S::Real zeta = killing_correspondence(ops, d, s, tol);
  // direct substitution route
  Spinor<S> lhs = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i)
    add_into(lhs, mat_vec(ops.t_contr[i], mat_vec(ops.rep->gamma[i], d.phi0)));
  lhs = vec_scale(S::from_real(zeta), std::move(lhs));
  typename S::Real three_zeta = zeta + zeta + zeta;
  Spinor<S> rhs = vec_scale(S::from_real(three_zeta), mat_vec(ops.t_mat, d.phi0));
  if (max_abs(vec_sub(lhs, rhs)) > tol)
    throw std::logic_error("slashed_on_killing: twistor relation fails");
  // eigenvalue beta = 3 zeta gamma must match the parallel-spinor route
  typename S::Real beta = slashed_eigen_parallel(ops, d, s, tol);
  typename S::Real gap = beta - three_zeta * d.gamma_eig;
  if (S::from_real(gap).abs_approx() > tol)
    throw std::logic_error("slashed_on_killing: beta != 3 zeta gamma");
  return rhs;
}

/// Dirac eigenvalue recovered from a slashed-D^{s} eigenvalue on a restricted
/// twistor spinor:
///   D^s phi0 = (n-6) beta / (3 gamma) phi0 + 2(1-4s)/gamma sigma_T.phi0,
/// checked against D^s phi0 = 3(4s-1) gamma / 4 phi0.
template <class S>
Spinor<S> dirac_from_slashed(const TorsionOps<S>& ops, const ParallelSpinorDatum<S>& d,
                             const typename S::Real& s, const typename S::Real& beta,
                             double tol = 0.0) {
  if (!d.einstein_killing)
    throw std::invalid_argument("dirac_from_slashed: datum is not einstein-killing type");
  if (S::from_real(d.gamma_eig).is_zero())
    throw std::invalid_argument("dirac_from_slashed: gamma must be nonzero");
  const int n = ops.n();
  typename S::Real inv_gamma = real_of<S>(1) / d.gamma_eig;
  typename S::Real c1 = real_of<S>(n - 6, 3) * beta * inv_gamma;
  typename S::Real one_minus_4s = real_of<S>(1) - (s + s + s + s);
  typename S::Real c2 = (one_minus_4s + one_minus_4s) * inv_gamma;

  Spinor<S> out = vec_scale(S::from_real(c1), d.phi0);
  axpy(out, S::from_real(c2), mat_vec(ops.sigma_mat, d.phi0));

  typename S::Real expect = real_of<S>(-3, 4) * one_minus_4s * d.gamma_eig;
  Spinor<S> gap = vec_sub(out, vec_scale(S::from_real(expect), d.phi0));
  if (max_abs(gap) > tol)
    throw std::logic_error("dirac_from_slashed: result disagrees with the Dirac eigenvalue");
  return out;
}

}  // namespace spinlab
