#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <vector>

#include "spinlab/gamma.hpp"
#include "spinlab/linalg.hpp"

namespace spinlab {

namespace blade {

inline int popcount(std::uint32_t m) { return std::popcount(m); }

// Sign of moving e_k to the front of the blade `mask` (k must be in mask).
inline int contract_sign(std::uint32_t mask, int k) {
  std::uint32_t below = mask & ((1u << k) - 1u);
  return (popcount(below) % 2 == 0) ? 1 : -1;
}

// Sign of concatenating sorted blades a, b (disjoint) into one sorted blade:
// (-1)^#{(x,y) in a x b : x > y}.
inline int merge_sign(std::uint32_t a, std::uint32_t b) {
  int inversions = 0;
  for (int y = 0; y < 32; ++y) {
    if (!(b & (1u << y))) continue;
    std::uint32_t above = a & ~((1u << (y + 1)) - 1u);
    inversions += popcount(above);
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

// Sorts a 0-based index tuple; returns {mask, sign}, sign = 0 on repeats.
inline std::pair<std::uint32_t, int> normalize(const std::vector<int>& idx) {
  std::uint32_t mask = 0;
  int sign = 1;
  for (std::size_t pos = 0; pos < idx.size(); ++pos) {
    int k = idx[pos];
    std::uint32_t bit = 1u << k;
    if (mask & bit) return {0u, 0};
    // parity of elements already inserted that are greater than k
    std::uint32_t above = mask & ~((bit << 1) - 1u);
    if (popcount(above) % 2 == 1) sign = -sign;
    mask |= bit;
  }
  return {mask, sign};
}

inline std::vector<int> indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int k = 0; k < 32; ++k)
    if (mask & (1u << k)) out.push_back(k);
  return out;
}

}  // namespace blade

/// Alternating p-form on the n-dimensional model fiber, stored blade-indexed:
/// only strictly increasing index tuples (bit masks) with nonzero coefficient.
template <class S>
struct AltForm {
  int n = 0;
  int degree = 0;
  std::map<std::uint32_t, S> coeffs;

  AltForm() = default;
  AltForm(int n_, int degree_) : n(n_), degree(degree_) {
    if (degree_ < 0) throw std::invalid_argument("AltForm: negative degree");
  }

  bool is_zero() const { return coeffs.empty(); }

  void add_blade(std::uint32_t mask, const S& c) {
    if (c.is_zero()) return;
    if (blade::popcount(mask) != degree) throw std::invalid_argument("AltForm: blade degree mismatch");
    if (mask >= (1u << n)) throw std::invalid_argument("AltForm: blade outside dimension");
    auto it = coeffs.find(mask);
    if (it == coeffs.end()) {
      coeffs.emplace(mask, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) coeffs.erase(it);
    }
  }

  // 0-based index tuple, arbitrary order; applies the sorting sign.
  void set(std::initializer_list<int> idx, const S& c) {
    auto [mask, sign] = blade::normalize(std::vector<int>(idx));
    if (sign == 0) throw std::invalid_argument("AltForm: repeated index");
    add_blade(mask, sign < 0 ? -c : c);
  }

  S get(std::initializer_list<int> idx) const { return get(std::vector<int>(idx)); }

  S get(const std::vector<int>& idx) const {
    auto [mask, sign] = blade::normalize(idx);
    if (sign == 0) return S::zero();
    auto it = coeffs.find(mask);
    if (it == coeffs.end()) return S::zero();
    return sign < 0 ? -it->second : it->second;
  }
};

template <class S>
AltForm<S> form_scale(const S& c, AltForm<S> w) {
  if (c.is_zero()) return AltForm<S>(w.n, w.degree);
  for (auto& [m, x] : w.coeffs) x = c * x;
  return w;
}

template <class S>
AltForm<S> form_add(AltForm<S> a, const AltForm<S>& b) {
  if (a.n != b.n || a.degree != b.degree) throw std::invalid_argument("form_add: shape mismatch");
  for (const auto& [m, x] : b.coeffs) a.add_blade(m, x);
  return a;
}

template <class S>
AltForm<S> form_sub(AltForm<S> a, const AltForm<S>& b) {
  if (a.n != b.n || a.degree != b.degree) throw std::invalid_argument("form_sub: shape mismatch");
  for (const auto& [m, x] : b.coeffs) a.add_blade(m, -x);
  return a;
}

template <class S>
double max_abs(const AltForm<S>& w) {
  double r = 0.0;
  for (const auto& [m, x] : w.coeffs) r = std::max(r, x.abs_approx());
  return r;
}

template <class S>
AltForm<S> wedge(const AltForm<S>& a, const AltForm<S>& b) {
  if (a.n != b.n) throw std::invalid_argument("wedge: dimension mismatch");
  AltForm<S> out(a.n, a.degree + b.degree);
  if (out.degree > a.n) return out;  // above top degree everything vanishes
  for (const auto& [ma, xa] : a.coeffs)
    for (const auto& [mb, xb] : b.coeffs) {
      if (ma & mb) continue;
      int sign = blade::merge_sign(ma, mb);
      S c = xa * xb;
      out.add_blade(ma | mb, sign < 0 ? -c : c);
    }
  return out;
}

/// Interior product e_k -| w (0-based frame index).
template <class S>
AltForm<S> contract_index(int k, const AltForm<S>& w) {
  if (w.degree == 0) return AltForm<S>(w.n, 0);
  AltForm<S> out(w.n, w.degree - 1);
  std::uint32_t bit = 1u << k;
  for (const auto& [m, x] : w.coeffs) {
    if (!(m & bit)) continue;
    int sign = blade::contract_sign(m, k);
    out.add_blade(m & ~bit, sign < 0 ? -x : x);
  }
  return out;
}

/// Interior product X -| w for a frame-coefficient vector X.
template <class S>
AltForm<S> contract(const RVec<S>& x, const AltForm<S>& w) {
  AltForm<S> out(w.n, w.degree > 0 ? w.degree - 1 : 0);
  for (int k = 0; k < int(x.size()); ++k) {
    S c = S::from_real(x[k]);
    if (c.is_zero()) continue;
    out = form_add(std::move(out), form_scale(c, contract_index(k, w)));
  }
  return out;
}

/// Exterior product X^flat ^ w.
template <class S>
AltForm<S> wedge_vector(const RVec<S>& x, const AltForm<S>& w) {
  AltForm<S> xi(w.n, 1);
  for (int k = 0; k < int(x.size()); ++k) xi.add_blade(1u << k, S::from_real(x[k]));
  return wedge(xi, w);
}

template <class S>
AltForm<S> one_form(const RVec<S>& x) {
  AltForm<S> xi(int(x.size()), 1);
  for (int k = 0; k < int(x.size()); ++k) xi.add_blade(1u << k, S::from_real(x[k]));
  return xi;
}

/// Clifford action of a form, blade by blade:
/// w.phi = sum over increasing tuples w_{i1...ip} e_i1 ... e_ip . phi.
template <class S>
Spinor<S> form_action(const GammaRep<S>& rep, const AltForm<S>& w, const Spinor<S>& phi) {
  if (w.n != rep.n) throw std::invalid_argument("form_action: dimension mismatch");
  Spinor<S> out(rep.dim, S::zero());
  for (const auto& [mask, c] : w.coeffs) {
    Spinor<S> cur = phi;
    auto idx = blade::indices(mask);
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) cur = mat_vec(rep.gamma[*it], cur);
    axpy(out, c, cur);
  }
  return out;
}

/// Dense matrix of the Clifford action of a form. Independent evaluation
/// path from form_action (products of gamma matrices, assembled once).
template <class S>
Mat<S> form_matrix(const GammaRep<S>& rep, const AltForm<S>& w) {
  if (w.n != rep.n) throw std::invalid_argument("form_matrix: dimension mismatch");
  Mat<S> out(rep.dim, rep.dim);
  for (const auto& [mask, c] : w.coeffs) {
    Mat<S> cur = Mat<S>::identity(rep.dim);
    for (int k : blade::indices(mask)) cur = mat_mul(cur, rep.gamma[k]);
    out += mat_scale(c, cur);
  }
  return out;
}

}  // namespace spinlab
