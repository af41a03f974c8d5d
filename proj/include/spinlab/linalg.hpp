#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "spinlab/scalar.hpp"

namespace spinlab {

template <class S>
using Vec = std::vector<S>;

// Frame vectors carry real coefficients in the chosen backend.
template <class S>
using RVec = std::vector<typename S::Real>;

template <class S>
Vec<S> zero_vec(int dim) {
  return Vec<S>(dim, S::zero());
}

template <class S>
Vec<S> basis_vec(int dim, int k) {
  Vec<S> v(dim, S::zero());
  v.at(k) = S::one();
  return v;
}

template <class S>
void add_into(Vec<S>& acc, const Vec<S>& v) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
}

template <class S>
void sub_into(Vec<S>& acc, const Vec<S>& v) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] -= v[k];
}

template <class S>
void axpy(Vec<S>& acc, const S& a, const Vec<S>& v) {
  if (a.is_zero()) return;
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += a * v[k];
}

template <class S>
Vec<S> vec_add(Vec<S> a, const Vec<S>& b) {
  add_into(a, b);
  return a;
}

template <class S>
Vec<S> vec_sub(Vec<S> a, const Vec<S>& b) {
  sub_into(a, b);
  return a;
}

template <class S>
Vec<S> vec_scale(const S& a, Vec<S> v) {
  for (auto& x : v) x = a * x;
  return v;
}

template <class S>
Vec<S> vec_neg(Vec<S> v) {
  for (auto& x : v) x = -x;
  return v;
}

template <class S>
double max_abs(const Vec<S>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.abs_approx());
  return m;
}

template <class S>
bool vec_is_zero(const Vec<S>& v, double tol = 0.0) {
  return max_abs(v) <= tol;
}

// Hermitian inner product <a, b>, antilinear in the second slot to match
// <X.phi, psi> = -<phi, X.psi> with anti-Hermitian gamma matrices.
template <class S>
S inner(const Vec<S>& a, const Vec<S>& b) {
  S acc = S::zero();
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k].conj();
  return acc;
}

template <class S>
typename S::Real norm_sq(const Vec<S>& v) {
  return inner(v, v).re_part();
}

// ---------------------------------------------------------------------------
// Dense square-free matrices. Dimensions stay tiny (spin modules up to 16),
// so everything is row-major and unblocked.
// ---------------------------------------------------------------------------

template <class S>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<S> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, S::zero()) {}

  S& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  const S& at(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = S::one();
    return m;
  }
  static Mat zero(int r, int c) { return Mat(r, c); }

  Mat operator+(const Mat& o) const {
    Mat r = *this;
    for (std::size_t k = 0; k < a.size(); ++k) r.a[k] += o.a[k];
    return r;
  }
  Mat operator-(const Mat& o) const {
    Mat r = *this;
    for (std::size_t k = 0; k < a.size(); ++k) r.a[k] -= o.a[k];
    return r;
  }
  Mat operator-() const {
    Mat r = *this;
    for (auto& x : r.a) x = -x;
    return r;
  }
  Mat& operator+=(const Mat& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += o.a[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= o.a[k];
    return *this;
  }
};

template <class S>
Mat<S> mat_scale(const S& c, Mat<S> m) {
  for (auto& x : m.a) x = c * x;
  return m;
}

template <class S>
Mat<S> mat_mul(const Mat<S>& x, const Mat<S>& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  Mat<S> r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const S& xik = x.at(i, k);
      if (xik.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j) {
        const S& ykj = y.at(k, j);
        if (!ykj.is_zero()) r.at(i, j) += xik * ykj;
      }
    }
  return r;
}

template <class S>
Vec<S> mat_vec(const Mat<S>& m, const Vec<S>& v) {
  if (m.cols != int(v.size())) throw std::invalid_argument("mat_vec: shape mismatch");
  Vec<S> r(m.rows, S::zero());
  for (int i = 0; i < m.rows; ++i) {
    S acc = S::zero();
    for (int j = 0; j < m.cols; ++j) {
      const S& mij = m.at(i, j);
      if (!mij.is_zero()) acc += mij * v[j];
    }
    r[i] = acc;
  }
  return r;
}

template <class S>
Mat<S> conj_transpose(const Mat<S>& m) {
  Mat<S> r(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r.at(j, i) = m.at(i, j).conj();
  return r;
}

template <class S>
Mat<S> commutator(const Mat<S>& x, const Mat<S>& y) {
  return mat_mul(x, y) - mat_mul(y, x);
}

template <class S>
Mat<S> anticommutator(const Mat<S>& x, const Mat<S>& y) {
  return mat_mul(x, y) + mat_mul(y, x);
}

template <class S>
double max_abs(const Mat<S>& m) {
  double r = 0.0;
  for (const auto& x : m.a) r = std::max(r, x.abs_approx());
  return r;
}

template <class S>
bool mat_is_zero(const Mat<S>& m, double tol = 0.0) {
  return max_abs(m) <= tol;
}

template <class S>
bool is_anti_hermitian(const Mat<S>& m, double tol = 0.0) {
  return mat_is_zero(conj_transpose(m) + m, tol);
}

template <class S>
bool is_hermitian(const Mat<S>& m, double tol = 0.0) {
  return mat_is_zero(conj_transpose(m) - m, tol);
}

// Kronecker product, used by the gamma-matrix construction.
template <class S>
Mat<S> kron(const Mat<S>& x, const Mat<S>& y) {
  Mat<S> r(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      if (x.at(i, j).is_zero()) continue;
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l)
          r.at(i * y.rows + k, j * y.cols + l) = x.at(i, j) * y.at(k, l);
    }
  return r;
}

// ---------------------------------------------------------------------------
// Exact elimination. Over the Gaussian rationals these are field operations,
// so rank and kernel are certified, not numeric.
// ---------------------------------------------------------------------------

template <class S>
int row_reduce(Mat<S>& m, std::vector<int>* pivot_cols = nullptr) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int piv = -1;
    for (int r = rank; r < m.rows; ++r)
      if (!m.at(r, col).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(rank, j));
    S inv = S::one() / m.at(rank, col);
    for (int j = col; j < m.cols; ++j) m.at(rank, j) = inv * m.at(rank, j);
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || m.at(r, col).is_zero()) continue;
      S f = m.at(r, col);
      for (int j = col; j < m.cols; ++j) m.at(r, j) -= f * m.at(rank, j);
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++rank;
  }
  return rank;
}

template <class S>
int rank_exact(Mat<S> m) {
  static_assert(S::is_exact, "rank_exact needs the exact backend");
  return row_reduce(m);
}

template <class S>
std::vector<Vec<S>> kernel_basis_exact(Mat<S> m) {
  static_assert(S::is_exact, "kernel_basis_exact needs the exact backend");
  std::vector<int> pivots;
  int rank = row_reduce(m, &pivots);
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<Vec<S>> basis;
  for (int free_col = 0; free_col < m.cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    Vec<S> v(m.cols, S::zero());
    v[free_col] = S::one();
    for (int r = 0; r < rank; ++r) v[pivots[r]] = -m.at(r, free_col);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Gram-Schmidt without normalization: exact pairwise-orthogonal vectors.
template <class S>
std::vector<Vec<S>> orthogonalize_exact(const std::vector<Vec<S>>& in) {
  static_assert(S::is_exact, "orthogonalize_exact needs the exact backend");
  std::vector<Vec<S>> out;
  for (Vec<S> v : in) {
    for (const auto& u : out) {
      S c = inner(v, u) / inner(u, u);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * u[k];
    }
    if (!vec_is_zero(v)) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace spinlab
