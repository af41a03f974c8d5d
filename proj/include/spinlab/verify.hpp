#pragma once

#include "spinlab/jets.hpp"

namespace spinlab {

/// Spinorial action of the Ricci endomorphism, Ric^s(X).phi =
/// sum_i Ric^s(X, e_i) e_i . phi, with Ric^s taken from the frame curvature.
template <class S>
Spinor<S> ricci_endo_action(const SpinOps<S>& ops, const RVec<S>& x, const Spinor<S>& phi) {
  Spinor<S> out = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i) {
    typename S::Real coef = S::real_zero();
    for (int a = 0; a < ops.n(); ++a) coef = coef + x[a] * ops.curv.ric(a, i);
    S c = S::from_real(coef);
    if (!c.is_zero()) axpy(out, c, mat_vec(ops.rep->gamma[i], phi));
  }
  return out;
}

template <class S>
ValueJet1<S> nabla_s_field(const SpinOps<S>& ops, const RVec<S>& x, const SpinorJet2<S>& jet) {
  const int n = ops.n();
  ValueJet1<S> out;
  out.value = zero_vec<S>(ops.dim());
  out.d1.assign(n, zero_vec<S>(ops.dim()));
  for (int a = 0; a < n; ++a) {
    S c = S::from_real(x[a]);
    if (c.is_zero()) continue;
    axpy(out.value, c, vec_add(jet.d1[a], mat_vec(ops.omega[a], jet.value)));
    for (int l = 0; l < n; ++l)
      axpy(out.d1[l], c, vec_add(full_d2(ops, jet, l, a), mat_vec(ops.omega[a], jet.d1[l])));
  }
  return out;
}

namespace detail {

// s(3 - 4s) as a concrete backend real
template <class S>
typename S::Real s_torsion_weight(const typename S::Real& s) {
  typename S::Real four_s = s + s + s + s;
  typename S::Real coef = s * (S::real_from_rat(rat(3)) - four_s);
  return coef;
}

// sum_a x[a] * mat(e_a -| sigma_T), applied to phi with weight s(3-4s)
template <class S>
Spinor<S> sigma_term(const SpinOps<S>& ops, const RVec<S>& x, const Spinor<S>& phi) {
  typename S::Real coef = s_torsion_weight<S>(ops.s);
  Spinor<S> acc = zero_vec<S>(ops.dim());
  for (int a = 0; a < ops.n(); ++a) {
    S c = S::from_real(x[a]);
    if (!c.is_zero()) axpy(acc, c, mat_vec(ops.sigma_contr[a], phi));
  }
  return vec_scale(S::from_real(coef), std::move(acc));
}

template <class S>
RVec<S> nabla_s_of_vector(const SpinOps<S>& ops, int j, const RVec<S>& x) {
  // components of nabla^s_{e_j} X for constant-coefficient X
  RVec<S> out(ops.n(), S::real_zero());
  for (int k = 0; k < ops.n(); ++k) {
    typename S::Real acc = S::real_zero();
    for (int a = 0; a < ops.n(); ++a) acc = acc + x[a] * ops.conn_s.at(j, a, k);
    out[k] = acc;
  }
  return out;
}

template <class S>
RVec<S> bracket_with_frame(const SpinOps<S>& ops, const RVec<S>& x, int j) {
  // [X, e_j] = sum_a X_a c_{aj}^k e_k
  RVec<S> out(ops.n(), S::real_zero());
  for (int k = 0; k < ops.n(); ++k) {
    typename S::Real acc = S::real_zero();
    for (int a = 0; a < ops.n(); ++a) acc = acc + x[a] * ops.geom->cat(a, j, k);
    out[k] = acc;
  }
  return out;
}

}  // namespace detail

/// Residual of the 1/2-Ricci identity in its covariant form:
///   1/2 Ric^s(X).phi - [ D^s(nabla^s_X phi) - nabla^s_X(D^s phi)
///     - sum_j e_j.(nabla^s_{nabla^s_{e_j} X} phi + 4s nabla^s_{T(X,e_j)} phi)
///     + s(3-4s)(X -| sigma_T).phi ].
/// Defined under parallel characteristic torsion; throws otherwise.
template <class S>
Spinor<S> half_ricci_residual(const SpinOps<S>& ops, const RVec<S>& x, const SpinorJet2<S>& jet) {
  if (!ops.parallel_torsion)
    throw std::domain_error("half_ricci_residual: torsion is not nabla^c-parallel");
  const int n = ops.n();

  Spinor<S> lhs = vec_scale(S::from_ratio(1, 2), ricci_endo_action(ops, x, jet.value));

  ValueJet1<S> nx = nabla_s_field(ops, x, jet);
  ValueJet1<S> d = dirac(ops, jet);
  Spinor<S> rhs = dirac_of_field(ops, nx);
  sub_into(rhs, nabla_of_field(ops, x, d));

  S four_s = S::from_real(ops.s + ops.s + ops.s + ops.s);
  for (int j = 0; j < n; ++j) {
    Spinor<S> inner = nabla_s_vec(ops, detail::nabla_s_of_vector(ops, j, x), jet);
    axpy(inner, four_s, nabla_s_vec(ops, ops.geom->torsion.vector_t_x(x, j), jet));
    sub_into(rhs, mat_vec(ops.rep->gamma[j], inner));
  }
  add_into(rhs, detail::sigma_term(ops, x, jet.value));

  return vec_sub(std::move(lhs), std::move(rhs));
}

/// Gap between the covariant right-hand side above and the bracket form
///   D^s(nabla^s_X phi) - nabla^s_X(D^s phi) + sum_j e_j . nabla^s_{[X,e_j]} phi
///     + sum_j (nabla^s_X e_j).(nabla^s_{e_j} phi) + s(3-4s)(X -| sigma_T).phi,
/// written through honest frame brackets. The (nabla^s_X e_j) term compensates
/// for the invariant frame not being nabla^s-parallel; the gap vanishes on
/// every jet, with or without parallel torsion.
template <class S>
Spinor<S> half_ricci_bracket_gap(const SpinOps<S>& ops, const RVec<S>& x,
                                 const SpinorJet2<S>& jet) {
  const int n = ops.n();
  S four_s = S::from_real(ops.s + ops.s + ops.s + ops.s);

  // covariant form, third term
  Spinor<S> covariant = zero_vec<S>(ops.dim());
  for (int j = 0; j < n; ++j) {
    Spinor<S> inner = nabla_s_vec(ops, detail::nabla_s_of_vector(ops, j, x), jet);
    axpy(inner, four_s, nabla_s_vec(ops, ops.geom->torsion.vector_t_x(x, j), jet));
    sub_into(covariant, mat_vec(ops.rep->gamma[j], inner));
  }

  // bracket form, same slot
  Spinor<S> bracket = zero_vec<S>(ops.dim());
  for (int j = 0; j < n; ++j) {
    add_into(bracket,
             mat_vec(ops.rep->gamma[j], nabla_s_vec(ops, detail::bracket_with_frame(ops, x, j), jet)));
    RVec<S> nxe(n, S::real_zero());  // nabla^s_X e_j
    for (int k = 0; k < n; ++k) {
      typename S::Real acc = S::real_zero();
      for (int a = 0; a < n; ++a) acc = acc + x[a] * ops.conn_s.at(a, j, k);
      nxe[k] = acc;
    }
    add_into(bracket, vector_action(*ops.rep, nxe, nabla_s(ops, j, jet).value));
  }
  return vec_sub(std::move(covariant), std::move(bracket));
}

/// Residual of the curvature form of the same identity:
///   1/2 Ric^s(X).phi = - sum_i e_i . R^s_{X, e_i} phi + s(3-4s)(X -| sigma_T).phi,
/// with the spinorial curvature assembled from the tangent coefficients.
/// Pointwise in phi; only the jet value enters.
template <class S>
Spinor<S> jul1_residual(const SpinOps<S>& ops, const RVec<S>& x, const Spinor<S>& phi) {
  if (!ops.parallel_torsion)
    throw std::domain_error("jul1_residual: torsion is not nabla^c-parallel");
  const int n = ops.n();
  Spinor<S> lhs = vec_scale(S::from_ratio(1, 2), ricci_endo_action(ops, x, phi));

  Spinor<S> rhs = zero_vec<S>(ops.dim());
  for (int i = 0; i < n; ++i) {
    Mat<S> rx(ops.dim(), ops.dim());
    for (int a = 0; a < n; ++a) {
      S c = S::from_real(x[a]);
      if (!c.is_zero()) rx += mat_scale(c, spin_curvature_from_r(ops, a, i));
    }
    sub_into(rhs, mat_vec(ops.rep->gamma[i], mat_vec(rx, phi)));
  }
  add_into(rhs, detail::sigma_term(ops, x, phi));
  return vec_sub(std::move(lhs), std::move(rhs));
}

/// Residual of the Schroedinger-Lichnerowicz formula
///   (D^s)^2 phi = Delta^s phi + s(3-4s) dT.phi - 4s slashed-D^s phi + 1/4 Sca^s phi.
template <class S>
Spinor<S> sl_residual(const SpinOps<S>& ops, const SpinorJet2<S>& jet,
                      LaplaceConvention conv = LaplaceConvention::kStandard) {
  if (!ops.parallel_torsion)
    throw std::domain_error("sl_residual: torsion is not nabla^c-parallel");
  Spinor<S> lhs = dirac_squared(ops, jet);

  Spinor<S> rhs = laplacian(ops, jet, conv);
  typename S::Real c_dt = detail::s_torsion_weight<S>(ops.s);
  typename S::Real four_s = ops.s + ops.s + ops.s + ops.s;
  axpy(rhs, S::from_real(c_dt), mat_vec(ops.dt_mat, jet.value));
  axpy(rhs, -S::from_real(four_s), slashed_d(ops, jet));
  axpy(rhs, S::from_ratio(1, 4) * S::from_real(ops.curv.scalar_curv), jet.value);
  return vec_sub(std::move(lhs), std::move(rhs));
}

// ---------------------------------------------------------------------------
// First-order Dirac identities
// ---------------------------------------------------------------------------

/// D^s(f phi) = grad(f).phi + f D^s(phi) for an affine test function given by
/// value and frame gradient at the point.
template <class S>
Spinor<S> dirac_leibniz_residual(const SpinOps<S>& ops, const typename S::Real& f0,
                                 const RVec<S>& grad, const SpinorJet2<S>& jet) {
  S f = S::from_real(f0);
  Spinor<S> lhs = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i) {
    Spinor<S> di = vec_scale(S::from_real(grad[i]), jet.value);
    axpy(di, f, jet.d1[i]);
    add_into(di, vec_scale(f, mat_vec(ops.omega[i], jet.value)));
    add_into(lhs, mat_vec(ops.rep->gamma[i], di));
  }
  Spinor<S> rhs = vector_action(*ops.rep, grad, jet.value);
  axpy(rhs, f, dirac(ops, jet).value);
  return vec_sub(std::move(lhs), std::move(rhs));
}

/// D^s(X.phi) = sum_j e_j.(nabla^s_{e_j}X).phi - X.D^s(phi) - 2 nabla^s_X phi.
template <class S>
Spinor<S> dirac_vector_residual(const SpinOps<S>& ops, const RVec<S>& x,
                                const SpinorJet2<S>& jet) {
  Mat<S> xm = vector_matrix(*ops.rep, x);
  Spinor<S> lhs = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i) {
    Spinor<S> di = mat_vec(xm, jet.d1[i]);
    add_into(di, mat_vec(ops.omega[i], mat_vec(xm, jet.value)));
    add_into(lhs, mat_vec(ops.rep->gamma[i], di));
  }
  Spinor<S> rhs = zero_vec<S>(ops.dim());
  for (int j = 0; j < ops.n(); ++j)
    add_into(rhs, mat_vec(ops.rep->gamma[j],
                          vector_action(*ops.rep, detail::nabla_s_of_vector(ops, j, x), jet.value)));
  sub_into(rhs, mat_vec(xm, dirac(ops, jet).value));
  Spinor<S> nx = nabla_s_vec(ops, x, jet);
  sub_into(rhs, nx);
  sub_into(rhs, nx);
  return vec_sub(std::move(lhs), std::move(rhs));
}

/// D^s(w.phi) = (-1)^p w.D^s(phi) + (d^s w + delta^s w).phi
///              - 2 sum_j (e_j -| w).nabla^s_{e_j} phi,
/// for a constant-coefficient p-form w.
template <class S>
Spinor<S> dirac_form_residual(const SpinOps<S>& ops, const AltForm<S>& w,
                              const SpinorJet2<S>& jet) {
  Mat<S> wm = form_matrix(*ops.rep, w);
  Spinor<S> lhs = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i) {
    Spinor<S> di = mat_vec(wm, jet.d1[i]);
    add_into(di, mat_vec(ops.omega[i], mat_vec(wm, jet.value)));
    add_into(lhs, mat_vec(ops.rep->gamma[i], di));
  }
  Spinor<S> rhs = mat_vec(wm, dirac(ops, jet).value);
  if (w.degree % 2 == 1) rhs = vec_neg(std::move(rhs));
  AltForm<S> dsw = frame_d(*ops.geom, w, ops.s);
  AltForm<S> deltasw = frame_delta(*ops.geom, w, ops.s);
  add_into(rhs, mat_vec(form_matrix(*ops.rep, dsw), jet.value));
  add_into(rhs, mat_vec(form_matrix(*ops.rep, deltasw), jet.value));
  S minus_two = S::from_ratio(-2, 1);
  for (int j = 0; j < ops.n(); ++j) {
    Mat<S> cj = form_matrix(*ops.rep, contract_index(j, w));
    axpy(rhs, minus_two, mat_vec(cj, nabla_s(ops, j, jet).value));
  }
  return vec_sub(std::move(lhs), std::move(rhs));
}

/// Integrability conditions of a nabla^s-parallel spinor (for the parameter
/// baked into `ops`): residual magnitudes of
///   Ric^s(X).phi0 = 2s(3-4s)(X -| sigma_T).phi0   (max over frame X)
///   Sca^s.phi0    = -8s(3-4s) sigma_T.phi0.
/// The Ricci and scalar curvature come from the frame model; the right-hand
/// sides are purely algebraic.
template <class S>
std::pair<double, double> parallel_integrability_residuals(const SpinOps<S>& ops,
                                                           const Spinor<S>& phi0) {
  typename S::Real w = detail::s_torsion_weight<S>(ops.s);  // s(3-4s)
  double ricci_res = 0.0;
  for (int a = 0; a < ops.n(); ++a) {
    Spinor<S> r = ricci_endo_action(ops, frame_vector<S>(ops.n(), a), phi0);
    axpy(r, -S::from_real(w + w), mat_vec(ops.sigma_contr[a], phi0));
    ricci_res = std::max(ricci_res, max_abs(r));
  }
  Spinor<S> sres = vec_scale(S::from_real(ops.curv.scalar_curv), phi0);
  typename S::Real eight_w = w + w + w + w;
  eight_w = eight_w + eight_w;
  axpy(sres, S::from_real(eight_w), mat_vec(ops.sigma_mat, phi0));
  return {ricci_res, max_abs(sres)};
}

// ---------------------------------------------------------------------------
// Twistor restriction
// ---------------------------------------------------------------------------

template <class S>
bool is_twistor_jet(const SpinOps<S>& ops, const SpinorJet2<S>& jet, double tol = 0.0) {
  auto p = penrose_with_jets(ops, jet);
  for (const auto& pi : p) {
    if (!vec_is_zero(pi.value, tol)) return false;
    for (const auto& dl : pi.d1)
      if (!vec_is_zero(dl, tol)) return false;
  }
  return true;
}

/// Residual of the twistorial form of the 1/2-Ricci identity on ker P^s:
///   1/2 Ric^s(X).phi = (1/n) X.(D^s)^2 phi - ((n-2)/n) nabla^s_X(D^s phi)
///     + (8s/n)(X -| T).D^s phi + s(3-4s)(X -| sigma_T).phi.
/// Requires a jet that vanishes under P^s together with its derived 1-jet.
template <class S>
Spinor<S> twistor_ricci_residual(const SpinOps<S>& ops, const RVec<S>& x,
                                 const SpinorJet2<S>& jet, double tol = 0.0) {
  if (!is_twistor_jet(ops, jet, tol))
    throw std::domain_error("twistor_ricci_residual: jet does not lie in ker P^s to first order");
  const int n = ops.n();
  Spinor<S> lhs = vec_scale(S::from_ratio(1, 2), ricci_endo_action(ops, x, jet.value));

  ValueJet1<S> d = dirac(ops, jet);
  Spinor<S> d2 = dirac_of_field(ops, d);

  Spinor<S> rhs = vec_scale(S::from_ratio(1, n), vector_action(*ops.rep, x, d2));
  axpy(rhs, S::from_ratio(-(n - 2), n), nabla_of_field(ops, x, d));

  Mat<S> xt(ops.dim(), ops.dim());
  for (int a = 0; a < n; ++a) {
    S c = S::from_real(x[a]);
    if (!c.is_zero()) xt += mat_scale(c, ops.t_contr[a]);
  }
  S eight_s_over_n = S::from_ratio(8, n) * S::from_real(ops.s);
  axpy(rhs, eight_s_over_n, mat_vec(xt, d.value));
  add_into(rhs, detail::sigma_term(ops, x, jet.value));
  return vec_sub(std::move(lhs), std::move(rhs));
}

/// Frame contraction of the twistorial identity:
///   1/2 Sca^s phi = -(24s/n) T.D^s phi + (2(n-1)/n)(D^s)^2 phi
///                   - 4s(3-4s) sigma_T.phi.
template <class S>
Spinor<S> twistor_scalar_residual(const SpinOps<S>& ops, const SpinorJet2<S>& jet,
                                  double tol = 0.0) {
  if (!is_twistor_jet(ops, jet, tol))
    throw std::domain_error("twistor_scalar_residual: jet does not lie in ker P^s to first order");
  const int n = ops.n();
  Spinor<S> lhs = vec_scale(S::from_ratio(1, 2) * S::from_real(ops.curv.scalar_curv), jet.value);

  ValueJet1<S> d = dirac(ops, jet);
  Spinor<S> rhs = vec_scale(S::from_ratio(-24, n) * S::from_real(ops.s),
                            mat_vec(ops.t_mat, d.value));
  axpy(rhs, S::from_ratio(2 * (n - 1), n), dirac_of_field(ops, d));
  typename S::Real c = detail::s_torsion_weight<S>(ops.s);
  axpy(rhs, S::from_ratio(-4, 1) * S::from_real(c), mat_vec(ops.sigma_mat, jet.value));
  return vec_sub(std::move(lhs), std::move(rhs));
}

// ---------------------------------------------------------------------------
// Cross-checks for the slashed operator
// ---------------------------------------------------------------------------

/// slashed-D^s phi - 1/2 sum_{i,j} e_i.e_j.nabla^s_{T(e_i,e_j)} phi = 0.
template <class S>
Spinor<S> slashed_double_sum_residual(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  const int n = ops.n();
  Spinor<S> dbl = zero_vec<S>(ops.dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RVec<S> tij(n, S::real_zero());
      for (int k = 0; k < n; ++k) tij[k] = ops.geom->torsion.coeff(i, j, k);
      Spinor<S> inner = nabla_s_vec(ops, tij, jet);
      add_into(dbl, mat_vec(ops.rep->gamma[i], mat_vec(ops.rep->gamma[j], inner)));
    }
  Spinor<S> lhs = slashed_d(ops, jet);
  return vec_sub(std::move(lhs), vec_scale(S::from_ratio(1, 2), std::move(dbl)));
}

/// slashed-D^s phi + 1/2 sum_j e_j.T.nabla^s_{e_j} phi + 1/2 T.D^s phi = 0
/// (general, no parallel-torsion assumption).
template <class S>
Spinor<S> slashed_adjoint_residual(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  Spinor<S> acc = slashed_d(ops, jet);
  S half = S::from_ratio(1, 2);
  for (int j = 0; j < ops.n(); ++j)
    axpy(acc, half,
         mat_vec(ops.rep->gamma[j], mat_vec(ops.t_mat, nabla_s(ops, j, jet).value)));
  axpy(acc, half, mat_vec(ops.t_mat, dirac(ops, jet).value));
  return acc;
}

/// slashed-D^s phi + 1/2 [ D^s(T.phi) + T.D^s phi - 2(1-4s) sigma_T.phi ] = 0
/// under parallel characteristic torsion.
template <class S>
Spinor<S> slashed_dirac_residual(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  if (!ops.parallel_torsion)
    throw std::domain_error("slashed_dirac_residual: torsion is not nabla^c-parallel");
  Spinor<S> acc = slashed_d(ops, jet);
  S half = S::from_ratio(1, 2);
  // D^s(T.phi) from the pushed-through jet of the field T.phi
  Spinor<S> dt_phi = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i) {
    Spinor<S> di = mat_vec(ops.t_mat, jet.d1[i]);
    add_into(di, mat_vec(ops.omega[i], mat_vec(ops.t_mat, jet.value)));
    add_into(dt_phi, mat_vec(ops.rep->gamma[i], di));
  }
  axpy(acc, half, dt_phi);
  axpy(acc, half, mat_vec(ops.t_mat, dirac(ops, jet).value));
  typename S::Real four_s = ops.s + ops.s + ops.s + ops.s;
  typename S::Real one_minus_4s = S::real_from_rat(rat(1)) - four_s;
  axpy(acc, -S::from_real(one_minus_4s), mat_vec(ops.sigma_mat, jet.value));
  return acc;
}

}  // namespace spinlab
