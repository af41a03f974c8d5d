#pragma once

#include <stdexcept>
#include <vector>

#include "spinlab/geometry.hpp"

namespace spinlab {

/// 2-jet of a spinor field at the base point of a constant-structure model:
/// value, frame derivatives d1[i] = (e_i phi), and the symmetric part of the
/// second derivative. The antisymmetric part of d2 is never stored; it is
/// always reconstructed from the structure constants, so
///   d2[i][j] - d2[j][i] = sum_k c_{ijk} d1[k]
/// holds identically for every jet.
template <class S>
struct SpinorJet2 {
  Spinor<S> value;
  std::vector<Spinor<S>> d1;
  std::vector<std::vector<Spinor<S>>> d2sym;
};

template <class S>
struct ValueJet1 {
  Spinor<S> value;
  std::vector<Spinor<S>> d1;
};

enum class LaplaceConvention {
  // Delta = -sum_i [ nabla_i nabla_i - nabla_{nabla^g_{e_i} e_i} ]
  kStandard,
  // Delta = -sum_i [ nabla_i nabla_i + nabla_{nabla^g_{e_i} e_i} ]
  kPlusTrace,
};

/// Cached operator data for one (geometry, representation, s) triple. All
/// verifiers run off this; it is immutable once built.
template <class S>
struct SpinOps {
  using Real = typename S::Real;

  const ModelGeometry<S>* geom = nullptr;
  const GammaRep<S>* rep = nullptr;
  Real s = S::real_zero();

  ConnCoeffs<S> conn_g;  // Levi-Civita coefficients
  ConnCoeffs<S> conn_s;  // G^s = G^g + 2sT

  std::vector<Mat<S>> omega;  // spin connection 1/4 sum G^s_{ijk} g_j g_k
  Mat<S> t_mat;               // Clifford matrix of T
  std::vector<Mat<S>> t_contr;      // mat(e_i -| T)
  AltForm<S> sigma;                 // sigma_T
  Mat<S> sigma_mat;                 // mat(sigma_T)
  std::vector<Mat<S>> sigma_contr;  // mat(e_i -| sigma_T)
  AltForm<S> dt;                    // de Rham dT
  Mat<S> dt_mat;
  CurvatureData<S> curv;
  bool parallel_torsion = false;

  int n() const { return geom->n; }
  int dim() const { return rep->dim; }
};

template <class S>
SpinOps<S> make_spin_ops(const ModelGeometry<S>& geom, const GammaRep<S>& rep,
                         const typename S::Real& s, double tol = kDefaultTolerance) {
  if (rep.n != geom.n) throw std::invalid_argument("make_spin_ops: dimension mismatch");
  SpinOps<S> ops;
  ops.geom = &geom;
  ops.rep = &rep;
  ops.s = s;
  ops.conn_g = levi_civita(geom);
  ops.conn_s = connection_s(geom, s);

  const int n = geom.n;
  auto quarter = S::from_ratio(1, 4);
  ops.omega.assign(n, Mat<S>(rep.dim, rep.dim));
  for (int i = 0; i < n; ++i) {
    Mat<S> acc(rep.dim, rep.dim);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        S g = S::from_real(ops.conn_s.at(i, j, k));
        if (g.is_zero()) continue;
        acc += mat_scale(g, mat_mul(rep.gamma[j], rep.gamma[k]));
      }
    ops.omega[i] = mat_scale(quarter, acc);
  }

  ops.t_mat = form_matrix(rep, geom.torsion.form);
  ops.t_contr.clear();
  ops.sigma = sigma_t(geom.torsion.form);
  ops.sigma_mat = form_matrix(rep, ops.sigma);
  for (int i = 0; i < n; ++i) {
    ops.t_contr.push_back(form_matrix(rep, contract_index(i, geom.torsion.form)));
    ops.sigma_contr.push_back(form_matrix(rep, contract_index(i, ops.sigma)));
  }
  ops.dt = frame_d(geom, geom.torsion.form, S::real_zero());
  ops.dt_mat = form_matrix(rep, ops.dt);
  ops.curv = curvature(geom, s);
  ops.parallel_torsion = is_parallel_torsion(geom, tol).parallel;
  return ops;
}

// ---------------------------------------------------------------------------
// Jet plumbing
// ---------------------------------------------------------------------------

template <class S>
SpinorJet2<S> zero_jet(int n, int dim) {
  SpinorJet2<S> jet;
  jet.value = zero_vec<S>(dim);
  jet.d1.assign(n, zero_vec<S>(dim));
  jet.d2sym.assign(n, std::vector<Spinor<S>>(n, zero_vec<S>(dim)));
  return jet;
}

template <class S>
SpinorJet2<S> constant_jet(int n, const Spinor<S>& phi) {
  SpinorJet2<S> jet = zero_jet<S>(n, int(phi.size()));
  jet.value = phi;
  return jet;
}

template <class S>
SpinorJet2<S> random_jet(TestRng& rng, int n, int dim) {
  SpinorJet2<S> jet;
  jet.value = rng.spinor<S>(dim);
  jet.d1.reserve(n);
  for (int i = 0; i < n; ++i) jet.d1.push_back(rng.spinor<S>(dim));
  jet.d2sym.assign(n, std::vector<Spinor<S>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      jet.d2sym[i][j] = rng.spinor<S>(dim);
      if (j != i) jet.d2sym[j][i] = jet.d2sym[i][j];
    }
  return jet;
}

template <class S>
bool validate_jet(const SpinOps<S>& ops, const SpinorJet2<S>& jet, double tol = 0.0) {
  const int n = ops.n();
  if (int(jet.value.size()) != ops.dim() || int(jet.d1.size()) != n || int(jet.d2sym.size()) != n)
    return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!vec_is_zero(vec_sub(jet.d2sym[i][j], jet.d2sym[j][i]), tol)) return false;
  return true;
}

template <class S>
SpinorJet2<S> jet_add(const SpinorJet2<S>& a, const SpinorJet2<S>& b) {
  SpinorJet2<S> out = a;
  add_into(out.value, b.value);
  for (std::size_t i = 0; i < out.d1.size(); ++i) add_into(out.d1[i], b.d1[i]);
  for (std::size_t i = 0; i < out.d2sym.size(); ++i)
    for (std::size_t j = 0; j < out.d2sym[i].size(); ++j) add_into(out.d2sym[i][j], b.d2sym[i][j]);
  return out;
}

template <class S>
SpinorJet2<S> jet_scale(const S& c, SpinorJet2<S> jet) {
  jet.value = vec_scale(c, std::move(jet.value));
  for (auto& v : jet.d1) v = vec_scale(c, std::move(v));
  for (auto& row : jet.d2sym)
    for (auto& v : row) v = vec_scale(c, std::move(v));
  return jet;
}

/// Full second frame derivative (e_i e_j phi), antisymmetric part restored
/// from the structure constants.
template <class S>
Spinor<S> full_d2(const SpinOps<S>& ops, const SpinorJet2<S>& jet, int i, int j) {
  Spinor<S> out = jet.d2sym[i][j];
  auto half = S::from_ratio(1, 2);
  for (int k = 0; k < ops.n(); ++k) {
    S c = half * S::from_real(ops.geom->cat(i, j, k));
    if (!c.is_zero()) axpy(out, c, jet.d1[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// First and second order operators off the jet
// ---------------------------------------------------------------------------

/// nabla^s_{e_i} phi with its own 1-jet (connection coefficients constant).
template <class S>
ValueJet1<S> nabla_s(const SpinOps<S>& ops, int i, const SpinorJet2<S>& jet) {
  if (i < 0 || i >= ops.n()) throw std::out_of_range("nabla_s: frame index");
  ValueJet1<S> out;
  out.value = vec_add(jet.d1[i], mat_vec(ops.omega[i], jet.value));
  out.d1.reserve(ops.n());
  for (int l = 0; l < ops.n(); ++l)
    out.d1.push_back(vec_add(full_d2(ops, jet, l, i), mat_vec(ops.omega[i], jet.d1[l])));
  return out;
}

/// Value of nabla^s_X phi for a constant-coefficient frame vector X.
template <class S>
Spinor<S> nabla_s_vec(const SpinOps<S>& ops, const RVec<S>& x, const SpinorJet2<S>& jet) {
  Spinor<S> out = zero_vec<S>(ops.dim());
  for (int a = 0; a < ops.n(); ++a) {
    S c = S::from_real(x[a]);
    if (c.is_zero()) continue;
    axpy(out, c, vec_add(jet.d1[a], mat_vec(ops.omega[a], jet.value)));
  }
  return out;
}

/// Covariant derivative along X of a field known by value and 1-jet.
template <class S>
Spinor<S> nabla_of_field(const SpinOps<S>& ops, const RVec<S>& x, const ValueJet1<S>& field) {
  Spinor<S> out = zero_vec<S>(ops.dim());
  for (int a = 0; a < ops.n(); ++a) {
    S c = S::from_real(x[a]);
    if (c.is_zero()) continue;
    axpy(out, c, vec_add(field.d1[a], mat_vec(ops.omega[a], field.value)));
  }
  return out;
}

/// Dirac operator D^s phi = sum_i e_i . nabla^s_{e_i} phi with its 1-jet.
template <class S>
ValueJet1<S> dirac(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  const int n = ops.n();
  ValueJet1<S> out;
  out.value = zero_vec<S>(ops.dim());
  out.d1.assign(n, zero_vec<S>(ops.dim()));
  for (int i = 0; i < n; ++i) {
    add_into(out.value,
             mat_vec(ops.rep->gamma[i], vec_add(jet.d1[i], mat_vec(ops.omega[i], jet.value))));
    for (int l = 0; l < n; ++l)
      add_into(out.d1[l], mat_vec(ops.rep->gamma[i], vec_add(full_d2(ops, jet, l, i),
                                                             mat_vec(ops.omega[i], jet.d1[l]))));
  }
  return out;
}

/// Dirac applied to a field given by value and 1-jet (first order only).
template <class S>
Spinor<S> dirac_of_field(const SpinOps<S>& ops, const ValueJet1<S>& field) {
  Spinor<S> out = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i)
    add_into(out, mat_vec(ops.rep->gamma[i],
                          vec_add(field.d1[i], mat_vec(ops.omega[i], field.value))));
  return out;
}

template <class S>
Spinor<S> dirac_squared(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  return dirac_of_field(ops, dirac(ops, jet));
}

/// Spin Laplacian. All catalog geometries have nabla^g_{e_i} e_i = 0, which
/// makes the two conventions coincide there.
template <class S>
Spinor<S> laplacian(const SpinOps<S>& ops, const SpinorJet2<S>& jet,
                    LaplaceConvention conv = LaplaceConvention::kStandard) {
  const int n = ops.n();
  Spinor<S> acc = zero_vec<S>(ops.dim());
  for (int i = 0; i < n; ++i) {
    // nabla_i nabla_i phi
    add_into(acc, full_d2(ops, jet, i, i));
    Spinor<S> w = mat_vec(ops.omega[i], jet.d1[i]);
    add_into(acc, w);
    add_into(acc, w);
    add_into(acc, mat_vec(ops.omega[i], mat_vec(ops.omega[i], jet.value)));
    // trace term nabla_{nabla^g_{e_i} e_i} phi
    for (int k = 0; k < n; ++k) {
      S g = S::from_real(ops.conn_g.at(i, i, k));
      if (g.is_zero()) continue;
      Spinor<S> nk = vec_add(jet.d1[k], mat_vec(ops.omega[k], jet.value));
      if (conv == LaplaceConvention::kStandard)
        sub_into(acc, vec_scale(g, std::move(nk)));
      else
        add_into(acc, vec_scale(g, std::move(nk)));
    }
  }
  return vec_neg(std::move(acc));
}

/// slashed-D^s phi = sum_i (e_i -| T) . nabla^s_{e_i} phi.
template <class S>
Spinor<S> slashed_d(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  Spinor<S> out = zero_vec<S>(ops.dim());
  for (int i = 0; i < ops.n(); ++i)
    add_into(out, mat_vec(ops.t_contr[i], vec_add(jet.d1[i], mat_vec(ops.omega[i], jet.value))));
  return out;
}

/// Penrose operator components P^s_i = nabla^s_{e_i} phi + (1/n) e_i . D^s phi.
template <class S>
std::vector<Spinor<S>> penrose(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  const int n = ops.n();
  ValueJet1<S> d = dirac(ops, jet);
  S inv_n = S::from_ratio(1, n);
  std::vector<Spinor<S>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Spinor<S> p = vec_add(jet.d1[i], mat_vec(ops.omega[i], jet.value));
    axpy(p, inv_n, mat_vec(ops.rep->gamma[i], d.value));
    out.push_back(std::move(p));
  }
  return out;
}

/// Penrose components together with their frame 1-jets; a certified twistor
/// jet must vanish in both.
template <class S>
std::vector<ValueJet1<S>> penrose_with_jets(const SpinOps<S>& ops, const SpinorJet2<S>& jet) {
  const int n = ops.n();
  ValueJet1<S> d = dirac(ops, jet);
  S inv_n = S::from_ratio(1, n);
  std::vector<ValueJet1<S>> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    ValueJet1<S> ni = nabla_s(ops, i, jet);
    ValueJet1<S> p;
    p.value = ni.value;
    axpy(p.value, inv_n, mat_vec(ops.rep->gamma[i], d.value));
    p.d1.reserve(n);
    for (int l = 0; l < n; ++l) {
      Spinor<S> pl = ni.d1[l];
      axpy(pl, inv_n, mat_vec(ops.rep->gamma[i], d.d1[l]));
      p.d1.push_back(std::move(pl));
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Spinorial curvature matrix of nabla^s in the frame plane (i, j), from the
/// spin connection: [w_i, w_j] - sum_k c_{ijk} w_k.
template <class S>
Mat<S> spin_curvature(const SpinOps<S>& ops, int i, int j) {
  Mat<S> out = commutator(ops.omega[i], ops.omega[j]);
  for (int k = 0; k < ops.n(); ++k) {
    S c = S::from_real(ops.geom->cat(i, j, k));
    if (!c.is_zero()) out -= mat_scale(c, ops.omega[k]);
  }
  return out;
}

/// Same curvature assembled from the tangent-level coefficients:
/// 1/4 sum_{k,l} R^s_{ijkl} g_k g_l.
template <class S>
Mat<S> spin_curvature_from_r(const SpinOps<S>& ops, int i, int j) {
  Mat<S> out(ops.dim(), ops.dim());
  for (int k = 0; k < ops.n(); ++k)
    for (int l = 0; l < ops.n(); ++l) {
      S c = S::from_real(ops.curv.rat4(i, j, k, l));
      if (c.is_zero()) continue;
      out += mat_scale(c, mat_mul(ops.rep->gamma[k], ops.rep->gamma[l]));
    }
  return mat_scale(S::from_ratio(1, 4), out);
}

// ---------------------------------------------------------------------------
// Certified jet constructors
// ---------------------------------------------------------------------------

struct jet_inconsistency : std::runtime_error {
  int i, j;
  jet_inconsistency(int i_, int j_)
      : std::runtime_error("geometry does not admit this spinor (frame plane " +
                           std::to_string(i_ + 1) + "," + std::to_string(j_ + 1) + ")"),
        i(i_),
        j(j_) {}
};

namespace detail {

/// Jet of a field with prescribed first derivatives (e_i phi) = A_i phi.
/// Exists iff the commutator constraint [A_j, A_i] phi = sum_k c_{ijk} A_k phi
/// holds; that is exactly annihilation of phi by the spinorial curvature.
template <class S>
SpinorJet2<S> exponential_jet(const SpinOps<S>& ops, const std::vector<Mat<S>>& a,
                              const Spinor<S>& phi0, double tol) {
  const int n = ops.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Spinor<S> lhs = mat_vec(commutator(a[j], a[i]), phi0);
      for (int k = 0; k < n; ++k) {
        S c = S::from_real(ops.geom->cat(i, j, k));
        if (!c.is_zero()) axpy(lhs, -c, mat_vec(a[k], phi0));
      }
      if (!vec_is_zero(lhs, tol)) throw jet_inconsistency(i, j);
    }
  SpinorJet2<S> jet;
  jet.value = phi0;
  jet.d1.reserve(n);
  for (int i = 0; i < n; ++i) jet.d1.push_back(mat_vec(a[i], phi0));
  jet.d2sym.assign(n, std::vector<Spinor<S>>(n));
  auto half = S::from_ratio(1, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // sym part of (e_i e_j phi) = A_j A_i phi
      Spinor<S> sym = mat_vec(a[j], jet.d1[i]);
      add_into(sym, mat_vec(a[i], jet.d1[j]));
      sym = vec_scale(half, std::move(sym));
      jet.d2sym[i][j] = sym;
      jet.d2sym[j][i] = std::move(sym);
    }
  return jet;
}

}  // namespace detail

/// 2-jet of a nabla^s-parallel spinor field through phi0, certified by the
/// commutator constraint. s is the parameter baked into `ops`.
template <class S>
SpinorJet2<S> make_parallel_jet(const SpinOps<S>& ops, const Spinor<S>& phi0,
                                double tol = 0.0) {
  std::vector<Mat<S>> a;
  a.reserve(ops.n());
  for (int i = 0; i < ops.n(); ++i) a.push_back(-ops.omega[i]);
  return detail::exponential_jet(ops, a, phi0, tol);
}

/// 2-jet of a Killing spinor field: nabla^s_X phi = zeta X . phi.
template <class S>
SpinorJet2<S> make_killing_jet(const SpinOps<S>& ops, const typename S::Real& zeta,
                               const Spinor<S>& phi0, double tol = 0.0) {
  std::vector<Mat<S>> a;
  a.reserve(ops.n());
  S z = S::from_real(zeta);
  for (int i = 0; i < ops.n(); ++i)
    a.push_back(mat_scale(z, ops.rep->gamma[i]) - ops.omega[i]);
  return detail::exponential_jet(ops, a, phi0, tol);
}

}  // namespace spinlab
