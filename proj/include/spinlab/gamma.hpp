#pragma once

#include <stdexcept>
#include <vector>

#include "spinlab/linalg.hpp"
#include "spinlab/scalar.hpp"

namespace spinlab {

template <class S>
using Spinor = Vec<S>;

/// Matrix model of Cl_n acting on the spin module of dimension 2^(n/2).
///
/// Convention: e_i.e_j + e_j.e_i = -2 delta_ij, every gamma_i anti-Hermitian,
/// entries in {0, +-1, +-i}. For odd n the volume element e_1...e_n acts as a
/// scalar; that scalar is recorded because it fixes the spinorial eigenvalues
/// of top-degree forms.
template <class S>
struct GammaRep {
  int n = 0;
  int dim = 0;
  std::vector<Mat<S>> gamma;
  bool volume_is_scalar = false;
  S volume_factor = S::zero();
};

namespace detail {

template <class S>
Mat<S> pauli(int which) {
  Mat<S> m(2, 2);
  switch (which) {
    case 0:  // identity
      m.at(0, 0) = S::one();
      m.at(1, 1) = S::one();
      break;
    case 1:
      m.at(0, 1) = S::one();
      m.at(1, 0) = S::one();
      break;
    case 2:
      m.at(0, 1) = -S::imag_unit();
      m.at(1, 0) = S::imag_unit();
      break;
    case 3:
      m.at(0, 0) = S::one();
      m.at(1, 1) = -S::one();
      break;
    default:
      throw std::logic_error("pauli: bad index");
  }
  return m;
}

}  // namespace detail

/// Deterministic gamma matrices for 3 <= n <= 8 via Kronecker products of
/// Pauli matrices: Hermitian generators G_j, then gamma_j = i*G_j.
template <class S>
GammaRep<S> build_rep(int n) {
  if (n < 3 || n > 8) throw std::invalid_argument("build_rep: dimension must be in [3,8]");
  const int m = n / 2;
  const S i = S::imag_unit();

  auto factor = [&](int slot, int which) {
    // sigma3^(x slot) (x) sigma_which (x) I^(x m-slot-1)
    Mat<S> acc = Mat<S>::identity(1);
    for (int k = 0; k < slot; ++k) acc = kron(acc, detail::pauli<S>(3));
    acc = kron(acc, detail::pauli<S>(which));
    for (int k = slot + 1; k < m; ++k) acc = kron(acc, detail::pauli<S>(0));
    return acc;
  };

  GammaRep<S> rep;
  rep.n = n;
  rep.dim = 1 << m;
  rep.gamma.reserve(n);
  for (int k = 0; k < m; ++k) {
    rep.gamma.push_back(mat_scale(i, factor(k, 1)));
    rep.gamma.push_back(mat_scale(i, factor(k, 2)));
  }
  if (n % 2 == 1) {
    Mat<S> acc = Mat<S>::identity(1);
    for (int k = 0; k < m; ++k) acc = kron(acc, detail::pauli<S>(3));
    rep.gamma.push_back(mat_scale(i, acc));
  }

  if (n % 2 == 1) {
    Mat<S> vol = rep.gamma[0];
    for (int k = 1; k < n; ++k) vol = mat_mul(vol, rep.gamma[k]);
    rep.volume_factor = vol.at(0, 0);
    rep.volume_is_scalar = mat_is_zero(vol - mat_scale(rep.volume_factor, Mat<S>::identity(rep.dim)));
    if (!rep.volume_is_scalar) throw std::logic_error("build_rep: odd-n volume element not scalar");
  }
  return rep;
}

/// Clifford action of a frame-coefficient vector: (sum_a X_a e_a) . phi.
template <class S>
Spinor<S> vector_action(const GammaRep<S>& rep, const RVec<S>& x, const Spinor<S>& phi) {
  if (int(x.size()) != rep.n) throw std::invalid_argument("vector_action: dimension mismatch");
  if (int(phi.size()) != rep.dim) throw std::invalid_argument("vector_action: spinor size mismatch");
  Spinor<S> out(rep.dim, S::zero());
  for (int a = 0; a < rep.n; ++a) {
    S c = S::from_real(x[a]);
    if (c.is_zero()) continue;
    axpy(out, c, mat_vec(rep.gamma[a], phi));
  }
  return out;
}

/// Matrix of the Clifford action of a coefficient vector.
template <class S>
Mat<S> vector_matrix(const GammaRep<S>& rep, const RVec<S>& x) {
  Mat<S> out(rep.dim, rep.dim);
  for (int a = 0; a < rep.n; ++a) {
    S c = S::from_real(x[a]);
    if (c.is_zero()) continue;
    out += mat_scale(c, rep.gamma[a]);
  }
  return out;
}

template <class S>
RVec<S> frame_vector(int n, int a) {
  RVec<S> x(n, S::real_zero());
  x.at(a) = S::real_from_rat(Rat(1));
  return x;
}

/// gamma_i gamma_j + gamma_j gamma_i + 2 delta_ij, reported as the worst
/// entry magnitude over all pairs. Zero for a valid representation.
template <class S>
double clifford_relation_residual(const GammaRep<S>& rep) {
  double worst = 0.0;
  for (int i = 0; i < rep.n; ++i)
    for (int j = i; j < rep.n; ++j) {
      Mat<S> r = anticommutator(rep.gamma[i], rep.gamma[j]);
      if (i == j) r += mat_scale(S::from_ratio(2, 1), Mat<S>::identity(rep.dim));
      worst = std::max(worst, max_abs(r));
    }
  return worst;
}

}  // namespace spinlab
