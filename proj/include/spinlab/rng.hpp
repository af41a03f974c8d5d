#pragma once

#include <cstdint>
#include <random>

#include "spinlab/altform.hpp"
#include "spinlab/linalg.hpp"
#include "spinlab/scalar.hpp"

namespace spinlab {

/// Deterministic source of small rational test data. Every trial derives its
/// own stream from (seed, trial index), so batches can run concurrently and
/// still reproduce byte-identical results.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : eng_(seed) {}

  static TestRng for_trial(std::uint64_t seed, std::uint64_t trial) {
    // splitmix-style mixing keeps per-trial streams decorrelated
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return TestRng(z ^ (z >> 31));
  }

  std::uint64_t raw() { return eng_(); }

  long int_in(long lo, long hi) {
    return lo + long(eng_() % std::uint64_t(hi - lo + 1));
  }

  // Rational in [-3, 3] with denominator 1..3; the exact backend stays cheap.
  Rat rational() {
    long den = int_in(1, 3);
    long num = int_in(-3 * den, 3 * den);
    return rat(num, den);
  }

  Rat nonzero_rational() {
    Rat q = rational();
    while (q == 0) q = rational();
    return q;
  }

  template <class S>
  typename S::Real real() {
    return S::real_from_rat(rational());
  }

  template <class S>
  S scalar() {
    S re = scalar_from_rat<S>(rational());
    S im = scalar_from_rat<S>(rational());
    return re + S::imag_unit() * im;
  }

  template <class S>
  Vec<S> spinor(int dim) {
    Vec<S> v(dim);
    for (auto& x : v) x = scalar<S>();
    return v;
  }

  template <class S>
  RVec<S> frame_coeffs(int n) {
    RVec<S> x(n);
    for (auto& c : x) c = real<S>();
    return x;
  }

  // Real-coefficient random p-form, every increasing tuple drawn.
  template <class S>
  AltForm<S> form(int n, int degree) {
    AltForm<S> w(n, degree);
    for (std::uint32_t m = 0; m < (1u << n); ++m)
      if (blade::popcount(m) == degree) w.add_blade(m, scalar_from_rat<S>(rational()));
    return w;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace spinlab
