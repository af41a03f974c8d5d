#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinlab/torsion.hpp"

namespace spinlab {

/// Constant-structure frame model: an orthonormal invariant frame with
/// bracket [e_i, e_j] = sum_k c[i][j][k] e_k and a fixed torsion 3-form.
/// All connection and curvature coefficients derived from it are constants,
/// so every differential identity becomes finite-dimensional linear algebra.
template <class S>
struct ModelGeometry {
  using Real = typename S::Real;

  std::string name;
  int n = 0;
  std::vector<Real> c;  // n^3 structure constants
  Torsion3Form<S> torsion;

  Real& cref(int i, int j, int k) { return c[(std::size_t(i) * n + j) * n + k]; }
  const Real& cat(int i, int j, int k) const { return c[(std::size_t(i) * n + j) * n + k]; }
};

/// Connection coefficients G_{ijk} = g(nabla_{e_i} e_j, e_k) in the frame.
template <class S>
struct ConnCoeffs {
  using Real = typename S::Real;
  int n = 0;
  std::vector<Real> g;  // n^3

  ConnCoeffs() = default;
  explicit ConnCoeffs(int n_) : n(n_), g(std::size_t(n_) * n_ * n_, S::real_zero()) {}
  Real& at(int i, int j, int k) { return g[(std::size_t(i) * n + j) * n + k]; }
  const Real& at(int i, int j, int k) const { return g[(std::size_t(i) * n + j) * n + k]; }
};

namespace detail {

template <class S>
double real_abs_approx(const typename S::Real& r) {
  S v = S::from_real(r);
  return v.abs_approx();
}

}  // namespace detail

template <class S>
ModelGeometry<S> make_model_geometry(std::string name, int n,
                                     const std::vector<typename S::Real>& structure,
                                     const AltForm<S>& torsion_form,
                                     double tol = kDefaultTolerance) {
  if (int(structure.size()) != n * n * n)
    throw std::invalid_argument("make_model_geometry: bad structure-constant table");
  ModelGeometry<S> geom;
  geom.name = std::move(name);
  geom.n = n;
  geom.c = structure;

  const double eps = backend_zero_tolerance<S>(tol);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (detail::real_abs_approx<S>(geom.cat(i, j, k) + geom.cat(j, i, k)) > eps)
          throw std::invalid_argument("make_model_geometry: bracket not antisymmetric");

  // Jacobi identity: the frame bracket must close into a Lie algebra.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          typename S::Real acc = S::real_zero();
          for (int m = 0; m < n; ++m)
            acc = acc + geom.cat(i, j, m) * geom.cat(m, k, l) +
                  geom.cat(j, k, m) * geom.cat(m, i, l) + geom.cat(k, i, m) * geom.cat(m, j, l);
          if (detail::real_abs_approx<S>(acc) > eps)
            throw std::invalid_argument("make_model_geometry: Jacobi identity fails");
        }

  auto rep = build_rep<S>(n);
  geom.torsion = make_torsion(rep, torsion_form, tol);
  return geom;
}

/// Koszul formula on an orthonormal invariant frame:
/// G^g_{ijk} = 1/2 (c_{ijk} - c_{jki} + c_{kij}).
template <class S>
ConnCoeffs<S> levi_civita(const ModelGeometry<S>& geom) {
  ConnCoeffs<S> out(geom.n);
  const typename S::Real half = S::real_from_rat(rat(1, 2));
  for (int i = 0; i < geom.n; ++i)
    for (int j = 0; j < geom.n; ++j)
      for (int k = 0; k < geom.n; ++k)
        out.at(i, j, k) = half * (geom.cat(i, j, k) - geom.cat(j, k, i) + geom.cat(k, i, j));
  return out;
}

/// G^s = G^g + 2s T; s = 1/4 is the characteristic connection.
template <class S>
ConnCoeffs<S> connection_s(const ModelGeometry<S>& geom, const typename S::Real& s) {
  ConnCoeffs<S> out = levi_civita(geom);
  typename S::Real two_s = s + s;
  for (int i = 0; i < geom.n; ++i)
    for (int j = 0; j < geom.n; ++j)
      for (int k = 0; k < geom.n; ++k)
        out.at(i, j, k) = out.at(i, j, k) + two_s * geom.torsion.coeff(i, j, k);
  return out;
}

template <class S>
struct CurvatureData {
  using Real = typename S::Real;
  int n = 0;
  std::vector<Real> r;        // n^4, R_{ijkl} = g(R(e_i,e_j)e_k, e_l)
  std::vector<Real> ricci;    // n^2, Ric(x,y) = sum_i R(x, e_i, e_i, y)
  Real scalar_curv = S::real_zero();
  std::vector<Real> s_tensor;  // n^2, S(x,y) = sum_i <T(x,e_i), T(y,e_i)>

  const Real& rat4(int i, int j, int k, int l) const {
    return r[((std::size_t(i) * n + j) * n + k) * n + l];
  }
  const Real& ric(int i, int j) const { return ricci[std::size_t(i) * n + j]; }
  const Real& s_at(int i, int j) const { return s_tensor[std::size_t(i) * n + j]; }
};

/// Frame curvature R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k
/// - nabla_{[e_i,e_j]} e_k with constant connection coefficients, plus the
/// contracted Ricci, scalar curvature and the torsion square S-tensor.
template <class S>
CurvatureData<S> curvature(const ModelGeometry<S>& geom, const typename S::Real& s) {
  const int n = geom.n;
  ConnCoeffs<S> G = connection_s(geom, s);
  CurvatureData<S> out;
  out.n = n;
  out.r.assign(std::size_t(n) * n * n * n, S::real_zero());
  out.ricci.assign(std::size_t(n) * n, S::real_zero());
  out.s_tensor.assign(std::size_t(n) * n, S::real_zero());

  auto rr = [&](int i, int j, int k, int l) -> typename S::Real& {
    return out.r[((std::size_t(i) * n + j) * n + k) * n + l];
  };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          typename S::Real acc = S::real_zero();
          for (int m = 0; m < n; ++m)
            acc = acc + G.at(j, k, m) * G.at(i, m, l) - G.at(i, k, m) * G.at(j, m, l) -
                  geom.cat(i, j, m) * G.at(m, k, l);
          rr(i, j, k, l) = acc;
        }

  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      typename S::Real acc = S::real_zero();
      for (int i = 0; i < n; ++i) acc = acc + rr(x, i, i, y);
      out.ricci[std::size_t(x) * n + y] = acc;
    }
  for (int x = 0; x < n; ++x) out.scalar_curv = out.scalar_curv + out.ric(x, x);

  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      typename S::Real acc = S::real_zero();
      for (int i = 0; i < n; ++i)
        for (int m = 0; m < n; ++m)
          acc = acc + geom.torsion.coeff(x, i, m) * geom.torsion.coeff(y, i, m);
      out.s_tensor[std::size_t(x) * n + y] = acc;
    }
  return out;
}

template <class S>
double ricci_symmetry_residual(const CurvatureData<S>& cd) {
  double worst = 0.0;
  for (int i = 0; i < cd.n; ++i)
    for (int j = 0; j < cd.n; ++j)
      worst = std::max(worst, detail::real_abs_approx<S>(cd.ric(i, j) - cd.ric(j, i)));
  return worst;
}

template <class S>
double pair_symmetry_residual(const CurvatureData<S>& cd) {
  double worst = 0.0;
  for (int i = 0; i < cd.n; ++i)
    for (int j = 0; j < cd.n; ++j)
      for (int k = 0; k < cd.n; ++k)
        for (int l = 0; l < cd.n; ++l)
          worst = std::max(worst, detail::real_abs_approx<S>(cd.rat4(i, j, k, l) - cd.rat4(k, l, i, j)));
  return worst;
}

// ---------------------------------------------------------------------------
// Frame differentials of constant-coefficient forms
// ---------------------------------------------------------------------------

/// nabla_{e_j} w for a constant-coefficient form, acting tensorially through
/// the connection coefficients: nabla_j e^k = - sum_m G_{jmk} e^m.
template <class S>
AltForm<S> nabla_form(const ConnCoeffs<S>& G, int j, const AltForm<S>& w) {
  AltForm<S> out(w.n, w.degree);
  for (const auto& [mask, x] : w.coeffs) {
    auto idx = blade::indices(mask);
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      int k = idx[pos];
      for (int m = 0; m < w.n; ++m) {
        const auto& gcoef = G.at(j, m, k);
        if (detail::real_abs_approx<S>(gcoef) == 0.0) continue;
        std::vector<int> replaced = idx;
        replaced[pos] = m;
        auto [rmask, sign] = blade::normalize(replaced);
        if (sign == 0) continue;
        S contrib = -(S::from_real(gcoef) * x);
        out.add_blade(rmask, sign < 0 ? -contrib : contrib);
      }
    }
  }
  return out;
}

/// d^s w = sum_j e^j ^ (nabla^s_{e_j} w).
template <class S>
AltForm<S> frame_d(const ModelGeometry<S>& geom, const AltForm<S>& w, const typename S::Real& s) {
  ConnCoeffs<S> G = connection_s(geom, s);
  AltForm<S> out(w.n, w.degree + 1);
  for (int j = 0; j < geom.n; ++j) {
    AltForm<S> nw = nabla_form(G, j, w);
    AltForm<S> ej(w.n, 1);
    ej.add_blade(1u << j, S::one());
    out = form_add(std::move(out), wedge(ej, nw));
  }
  return out;
}

/// delta^s w = - sum_j e_j -| (nabla^s_{e_j} w).
template <class S>
AltForm<S> frame_delta(const ModelGeometry<S>& geom, const AltForm<S>& w,
                       const typename S::Real& s) {
  ConnCoeffs<S> G = connection_s(geom, s);
  AltForm<S> out(w.n, w.degree > 0 ? w.degree - 1 : 0);
  for (int j = 0; j < geom.n; ++j)
    out = form_sub(std::move(out), contract_index(j, nabla_form(G, j, w)));
  return out;
}

struct ParallelTorsionResult {
  bool parallel = false;
  // derivative direction + form indices of the first nonvanishing component
  std::array<int, 4> witness = {-1, -1, -1, -1};
};

/// True iff the characteristic covariant derivative of the torsion vanishes
/// identically. On success the standing consequences are re-checked:
/// dT = 2 sigma_T, delta T = delta^s T = 0 and nabla^c sigma_T = 0.
template <class S>
ParallelTorsionResult is_parallel_torsion(const ModelGeometry<S>& geom,
                                          double tol = kDefaultTolerance) {
  const double eps = backend_zero_tolerance<S>(tol);
  auto quarter = S::real_from_rat(rat(1, 4));
  ConnCoeffs<S> Gc = connection_s(geom, quarter);

  ParallelTorsionResult out;
  for (int j = 0; j < geom.n; ++j) {
    AltForm<S> nt = nabla_form(Gc, j, geom.torsion.form);
    if (max_abs(nt) > eps) {
      auto idx = blade::indices(nt.coeffs.begin()->first);
      out.witness = {j, idx[0], idx[1], idx[2]};
      return out;
    }
  }
  out.parallel = true;

  AltForm<S> dt = frame_d(geom, geom.torsion.form, S::real_zero());
  AltForm<S> two_sigma = form_scale(S::from_ratio(2, 1), sigma_t(geom.torsion.form));
  if (max_abs(form_sub(dt, two_sigma)) > eps)
    throw std::logic_error("is_parallel_torsion: dT != 2 sigma_T with parallel torsion");

  for (const Rat& sq : {rat(0), rat(1, 4), rat(1, 3), rat(-2, 5)}) {
    auto sv = S::real_from_rat(sq);
    if (max_abs(frame_delta(geom, geom.torsion.form, sv)) > eps)
      throw std::logic_error("is_parallel_torsion: delta^s T != 0 with parallel torsion");
  }

  AltForm<S> sig = sigma_t(geom.torsion.form);
  for (int j = 0; j < geom.n; ++j)
    if (max_abs(nabla_form(Gc, j, sig)) > eps)
      throw std::logic_error("is_parallel_torsion: nabla^c sigma_T != 0 with parallel torsion");

  return out;
}

}  // namespace spinlab
