#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spinlab/jets.hpp"
#include "spinlab/spinors.hpp"
#include "spinlab/verify.hpp"

namespace spinlab {

template <class S>
struct DistinguishedSpinor {
  std::string label;  // e.g. "plus4", "zero-1", "phi0"
  ParallelSpinorDatum<S> datum;
};

/// One shipped structure: either a full frame model (Lie group / flat torus)
/// or an algebraic-only structure (torsion plus distinguished spinor data).
template <class S>
struct CatalogEntry {
  std::string name;
  int n = 0;
  GammaRep<S> rep;
  std::optional<ModelGeometry<S>> geometry;
  Torsion3Form<S> torsion;
  std::vector<DistinguishedSpinor<S>> spinors;
  std::vector<Rat> spectrum_candidates;  // exact eigenvalue candidates for t_spectrum
  Rat lambda = rat(1);
  Rat tau0 = rat(6);
  bool structure_form_negated = false;  // orientation fix applied and recorded
};

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "flat_torus_3", "flat_torus_4", "su2", "heisenberg5",
      "sasaki5_alg",  "nk6_alg",      "g2_7_alg"};
  return names;
}

namespace detail {

template <class S>
S from_exact(const ExactScalar& x) {
  if constexpr (S::is_exact)
    return x;
  else
    return S(x.to_complex());
}

template <class S>
Spinor<S> spinor_from_exact(const Spinor<ExactScalar>& v) {
  Spinor<S> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(from_exact<S>(x));
  return out;
}

// Exact eigenvectors of the torsion action for a prescribed rational
// eigenvalue; used to locate the catalog's distinguished spinors.
inline std::vector<Spinor<ExactScalar>> exact_eigenvectors(const AltForm<ExactScalar>& t3,
                                                           const Rat& gamma) {
  auto rep = build_rep<ExactScalar>(t3.n);
  Mat<ExactScalar> m = form_matrix(rep, t3);
  ExactScalar g(gamma);
  for (int i = 0; i < rep.dim; ++i) m.at(i, i) -= g;
  return orthogonalize_exact(kernel_basis_exact(m));
}

template <class S>
AltForm<S> form_from_blades(int n, int degree,
                            const std::vector<std::pair<std::vector<int>, Rat>>& blades) {
  AltForm<S> w(n, degree);
  for (const auto& [idx, q] : blades) {
    auto [mask, sign] = blade::normalize(idx);
    S c = scalar_from_rat<S>(sign < 0 ? Rat(-q) : q);
    w.add_blade(mask, c);
  }
  return w;
}

inline int levi_civita_symbol(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  int sign = 1;
  int a[3] = {i, j, k};
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2 - p; ++q)
      if (a[q] > a[q + 1]) {
        std::swap(a[q], a[q + 1]);
        sign = -sign;
      }
  return sign;
}

}  // namespace detail

template <class S>
CatalogEntry<S> load_entry(const std::string& name, const Rat& lambda = rat(1),
                           const Rat& tau0 = rat(6), double tol = kDefaultTolerance) {
  using detail::form_from_blades;
  CatalogEntry<S> entry;
  entry.name = name;
  entry.lambda = lambda;
  entry.tau0 = tau0;

  auto finish_model = [&](int n, const std::vector<typename S::Real>& c, const AltForm<S>& t3) {
    entry.n = n;
    entry.rep = build_rep<S>(n);
    entry.geometry = make_model_geometry<S>(name, n, c, t3, tol);
    entry.torsion = entry.geometry->torsion;
    auto pt = is_parallel_torsion(*entry.geometry, tol);
    if (!pt.parallel)
      throw std::logic_error("load_entry: catalog model must have parallel torsion");
  };

  if (name == "flat_torus_3" || name == "flat_torus_4") {
    int n = (name == "flat_torus_3") ? 3 : 4;
    std::vector<typename S::Real> c(std::size_t(n) * n * n, S::real_zero());
    AltForm<S> t3 = form_from_blades<S>(n, 3, {{{0, 1, 2}, rat(1)}});
    finish_model(n, c, t3);
    entry.spectrum_candidates = {rat(-1), rat(1), rat(0)};
    return entry;
  }

  if (name == "su2") {
    const int n = 3;
    std::vector<typename S::Real> c(27, S::real_zero());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          int e = detail::levi_civita_symbol(i, j, k);
          if (e != 0) c[(std::size_t(i) * 3 + j) * 3 + k] = S::real_from_rat(Rat(e) * lambda);
        }
    AltForm<S> t3 = form_from_blades<S>(n, 3, {{{0, 1, 2}, lambda}});
    finish_model(n, c, t3);

    // the volume element acts as +Id here, so T = lambda vol has the single
    // eigenvalue gamma = lambda; every spinor is einstein-killing type
    AltForm<ExactScalar> t3x = form_from_blades<ExactScalar>(n, 3, {{{0, 1, 2}, lambda}});
    auto vecs = detail::exact_eigenvectors(t3x, lambda);
    if (vecs.size() != 2) throw std::logic_error("load_entry: su2 eigenspace must be all of D_3");
    TorsionOps<S> tops = make_torsion_ops(entry.rep, entry.torsion);
    for (std::size_t k = 0; k < vecs.size(); ++k) {
      ParallelSpinorDatum<S> d;
      d.torsion = entry.torsion;
      d.gamma_eig = S::real_from_rat(lambda);
      d.phi0 = detail::spinor_from_exact<S>(vecs[k]);
      d.einstein_killing = true;
      require_datum(tops, d, backend_zero_tolerance<S>(tol));
      entry.spinors.push_back({"phi" + std::to_string(k + 1), std::move(d)});
    }
    entry.spectrum_candidates = {lambda};
    return entry;
  }

  if (name == "heisenberg5") {
    const int n = 5;
    std::vector<typename S::Real> c(125, S::real_zero());
    auto put = [&](int i, int j, int k, long v) {
      c[(std::size_t(i) * 5 + j) * 5 + k] = real_of<S>(v);
      c[(std::size_t(j) * 5 + i) * 5 + k] = real_of<S>(-v);
    };
    // signs fixed so that d(e^5) = 2(e^12 + e^34) and T = e^5 ^ d(e^5)
    put(0, 1, 4, -2);
    put(2, 3, 4, -2);
    AltForm<S> t3 = form_from_blades<S>(n, 3, {{{0, 1, 4}, rat(2)}, {{2, 3, 4}, rat(2)}});
    finish_model(n, c, t3);

    AltForm<ExactScalar> t3x =
        form_from_blades<ExactScalar>(n, 3, {{{0, 1, 4}, rat(2)}, {{2, 3, 4}, rat(2)}});
    auto vecs = detail::exact_eigenvectors(t3x, rat(0));
    TorsionOps<S> tops = make_torsion_ops(entry.rep, entry.torsion);
    int count = 0;
    for (const auto& v : vecs) {
      ParallelSpinorDatum<S> d;
      d.torsion = entry.torsion;
      d.gamma_eig = S::real_zero();
      d.phi0 = detail::spinor_from_exact<S>(v);
      d.einstein_killing = false;
      require_datum(tops, d, backend_zero_tolerance<S>(tol));
      entry.spinors.push_back({"zero-" + std::to_string(++count), std::move(d)});
    }
    entry.spectrum_candidates = {rat(-4), rat(0), rat(4)};
    return entry;
  }

  if (name == "sasaki5_alg") {
    const int n = 5;
    entry.n = n;
    entry.rep = build_rep<S>(n);
    AltForm<S> t3 = form_from_blades<S>(n, 3, {{{0, 1, 4}, rat(2)}, {{2, 3, 4}, rat(2)}});
    entry.torsion = make_torsion(entry.rep, t3, tol);
    AltForm<ExactScalar> t3x =
        form_from_blades<ExactScalar>(n, 3, {{{0, 1, 4}, rat(2)}, {{2, 3, 4}, rat(2)}});
    TorsionOps<S> tops = make_torsion_ops(entry.rep, entry.torsion);
    auto add_case = [&](const Rat& gamma, const std::string& label) {
      auto vecs = detail::exact_eigenvectors(t3x, gamma);
      int count = 0;
      for (const auto& v : vecs) {
        ParallelSpinorDatum<S> d;
        d.torsion = entry.torsion;
        d.gamma_eig = S::real_from_rat(gamma);
        d.phi0 = detail::spinor_from_exact<S>(v);
        d.einstein_killing = false;
        require_datum(tops, d, backend_zero_tolerance<S>(tol));
        std::string suffix = vecs.size() > 1 ? "-" + std::to_string(++count) : "";
        entry.spinors.push_back({label + suffix, std::move(d)});
      }
    };
    add_case(rat(-4), "minus4");
    add_case(rat(4), "plus4");
    add_case(rat(0), "zero");
    entry.spectrum_candidates = {rat(-4), rat(0), rat(4)};
    return entry;
  }

  if (name == "nk6_alg") {
    const int n = 6;
    entry.n = n;
    entry.rep = build_rep<S>(n);
    // real part of the standard complex volume form, scaled by lambda
    std::vector<std::pair<std::vector<int>, Rat>> blades = {{{0, 2, 4}, lambda},
                                                            {{0, 3, 5}, Rat(-lambda)},
                                                            {{1, 2, 5}, Rat(-lambda)},
                                                            {{1, 3, 4}, Rat(-lambda)}};
    // orientation fix: the top eigenvalue +2|T| = 4 lambda must be realized
    AltForm<ExactScalar> t3x = form_from_blades<ExactScalar>(n, 3, blades);
    Rat top = Rat(4) * lambda;
    if (detail::exact_eigenvectors(t3x, top).empty()) {
      for (auto& b : blades) b.second = -b.second;
      t3x = form_from_blades<ExactScalar>(n, 3, blades);
      entry.structure_form_negated = true;
    }
    entry.torsion = make_torsion(entry.rep, form_from_blades<S>(n, 3, blades), tol);
    TorsionOps<S> tops = make_torsion_ops(entry.rep, entry.torsion);
    auto add_one = [&](const Rat& gamma, const std::string& label) {
      auto vecs = detail::exact_eigenvectors(t3x, gamma);
      if (vecs.size() != 1)
        throw std::logic_error("load_entry: nk6 extreme eigenspace must be 1-dimensional");
      ParallelSpinorDatum<S> d;
      d.torsion = entry.torsion;
      d.gamma_eig = S::real_from_rat(gamma);
      d.phi0 = detail::spinor_from_exact<S>(vecs[0]);
      d.einstein_killing = true;
      require_datum(tops, d, backend_zero_tolerance<S>(tol));
      entry.spinors.push_back({label, std::move(d)});
    };
    add_one(top, "phi+");
    add_one(Rat(-top), "phi-");
    entry.spectrum_candidates = {top, Rat(-top), rat(0)};
    return entry;
  }

  if (name == "g2_7_alg") {
    const int n = 7;
    entry.n = n;
    entry.rep = build_rep<S>(n);
    // G2 3-form, convention pinned by omega.phi0 = 7 phi0 on a line
    std::vector<std::pair<std::vector<int>, Rat>> omega = {
        {{0, 1, 6}, rat(1)},  {{2, 3, 6}, rat(1)},  {{4, 5, 6}, rat(1)}, {{0, 2, 4}, rat(1)},
        {{0, 3, 5}, rat(-1)}, {{1, 2, 5}, rat(-1)}, {{1, 3, 4}, rat(-1)}};
    AltForm<ExactScalar> omega_x = form_from_blades<ExactScalar>(n, 3, omega);
    if (detail::exact_eigenvectors(omega_x, rat(7)).empty()) {
      for (auto& b : omega) b.second = -b.second;
      omega_x = form_from_blades<ExactScalar>(n, 3, omega);
      entry.structure_form_negated = true;
    }
    auto eig7 = detail::exact_eigenvectors(omega_x, rat(7));
    if (eig7.size() != 1)
      throw std::logic_error("load_entry: g2 eigenvalue 7 must have multiplicity 1");

    // T = -(tau0/6) omega
    Rat t_scale = Rat(-tau0) / 6;
    std::vector<std::pair<std::vector<int>, Rat>> tb = omega;
    for (auto& b : tb) b.second = b.second * t_scale;
    entry.torsion = make_torsion(entry.rep, form_from_blades<S>(n, 3, tb), tol);
    TorsionOps<S> tops = make_torsion_ops(entry.rep, entry.torsion);

    ParallelSpinorDatum<S> d;
    d.torsion = entry.torsion;
    d.gamma_eig = S::real_from_rat(Rat(7) * t_scale);  // -7 tau0 / 6
    d.phi0 = detail::spinor_from_exact<S>(eig7[0]);
    d.einstein_killing = true;
    require_datum(tops, d, backend_zero_tolerance<S>(tol));
    entry.spinors.push_back({"phi0", std::move(d)});
    entry.spectrum_candidates = {Rat(7) * t_scale, Rat(-1) * t_scale};
    return entry;
  }

  throw std::invalid_argument("load_entry: unknown name '" + name + "'");
}

// ---------------------------------------------------------------------------
// Expected-constants tables
// ---------------------------------------------------------------------------

/// Reads off mu with v = mu.w (exactly on the exact backend); nullopt when v
/// is not that multiple.
template <class S>
std::optional<S> scalar_multiple(const Vec<S>& v, const Vec<S>& w, double tol = 0.0) {
  int pivot = -1;
  double best = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    double a = w[k].abs_approx();
    if (a > best) {
      best = a;
      pivot = int(k);
    }
  }
  if (pivot < 0) return std::nullopt;
  S mu = v[pivot] / w[pivot];
  Vec<S> r = v;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= mu * w[k];
  if (!vec_is_zero(r, tol)) return std::nullopt;
  return mu;
}

/// Same, but demands a real factor.
template <class S>
std::optional<typename S::Real> real_scalar_multiple(const Vec<S>& v, const Vec<S>& w,
                                                     double tol = 0.0) {
  auto mu = scalar_multiple(v, w, tol);
  if (!mu) return std::nullopt;
  if ((*mu - S::from_real(mu->re_part())).abs_approx() > tol) return std::nullopt;
  return mu->re_part();
}

struct TableCell {
  std::string quantity;
  std::string expected;  // closed form evaluated at s
  std::string computed;  // independently computed value
  bool pass = false;
};

struct TableRow {
  Rat s;
  std::vector<TableCell> cells;
  bool pass = true;
};

namespace detail {

template <class S>
std::string real_str(const typename S::Real& r) {
  if constexpr (S::is_exact) {
    return to_string(r);
  } else {
    std::ostringstream os;
    os.precision(15);
    os << r;
    return os.str();
  }
}

template <class S>
void push_cell(TableRow& row, const std::string& quantity, const typename S::Real& expected,
               const typename S::Real& computed, double tol) {
  TableCell cell;
  cell.quantity = quantity;
  cell.expected = real_str<S>(expected);
  cell.computed = real_str<S>(computed);
  typename S::Real gap = expected - computed;
  cell.pass = S::from_real(gap).abs_approx() <= tol;
  row.pass = row.pass && cell.pass;
  row.cells.push_back(std::move(cell));
}

}  // namespace detail

/// Sasakian Ricci eigenvalue lists over the grid: for each frame axis the
/// output of the algebraic Ricci action is certified to be a scalar multiple
/// of e_a.psi and compared with the closed-form list.
template <class S>
std::vector<TableRow> sasaki_ricci_table(const CatalogEntry<S>& entry, const std::string& label,
                                         const std::vector<Rat>& grid,
                                         double tol = kDefaultTolerance) {
  const DistinguishedSpinor<S>* pick = nullptr;
  for (const auto& ds : entry.spinors)
    if (ds.label.rfind(label, 0) == 0) {
      pick = &ds;
      break;
    }
  if (!pick) throw std::invalid_argument("sasaki_ricci_table: no spinor labeled " + label);
  const double eps = backend_zero_tolerance<S>(tol);
  TorsionOps<S> tops = make_torsion_ops(entry.rep, entry.torsion);

  std::vector<TableRow> rows;
  for (const Rat& sq : grid) {
    typename S::Real s = S::real_from_rat(sq);
    typename S::Real s2 = s * s;
    TableRow row;
    row.s = sq;
    bool zero_case = S::from_real(pick->datum.gamma_eig).is_zero();
    for (int a = 0; a < entry.n; ++a) {
      Spinor<S> ric = ricci_action_parallel(tops, pick->datum, s, frame_vector<S>(entry.n, a), eps);
      Spinor<S> ea_psi = mat_vec(entry.rep.gamma[a], pick->datum.phi0);
      auto mu = real_scalar_multiple(ric, ea_psi, eps);
      typename S::Real computed = mu ? *mu : S::real_from_rat(rat(999999));
      typename S::Real expected;
      if (a == 4)
        expected = real_of<S>(-4) * (real_of<S>(16) * s2 - real_of<S>(1));
      else if (zero_case)
        expected = -(real_of<S>(2) + real_of<S>(32) * s2);
      else
        expected = real_of<S>(6) - real_of<S>(32) * s2;
      detail::push_cell<S>(row, "ric_e" + std::to_string(a + 1), expected, computed, eps);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Einstein-type structures (nearly Kaehler 6, nearly parallel G2 7): scalar
/// quantities over the s-grid, closed form vs independently computed.
template <class S>
std::vector<TableRow> einstein_table(const CatalogEntry<S>& entry, const std::string& quantity,
                                     const std::vector<Rat>& grid,
                                     double tol = kDefaultTolerance) {
  const DistinguishedSpinor<S>* pick = nullptr;
  for (const auto& ds : entry.spinors)
    if (ds.datum.einstein_killing) {
      pick = &ds;
      break;
    }
  if (!pick) throw std::invalid_argument("einstein_table: entry has no einstein-killing datum");
  const double eps = backend_zero_tolerance<S>(tol);
  TorsionOps<S> tops = make_torsion_ops(entry.rep, entry.torsion);
  const ParallelSpinorDatum<S>& d = pick->datum;
  const int n = entry.n;
  typename S::Real u = entry.torsion.norm_sq;
  typename S::Real g = d.gamma_eig;

  std::vector<TableRow> rows;
  for (const Rat& sq : grid) {
    typename S::Real s = S::real_from_rat(sq);
    typename S::Real s2 = s * s;
    typename S::Real four_s_minus_1 = s + s + s + s - real_of<S>(1);
    TableRow row;
    row.s = sq;
    if (quantity == "ricci-factor" || quantity == "sca") {
      typename S::Real factor = harmony_einstein(tops, d, s, eps);
      if (quantity == "sca") {
        typename S::Real expected =
            real_of<S>(3, 4 * n) * g * g * (real_of<S>(3 * n - 3) + real_of<S>(16 * n - 144) * s2);
        detail::push_cell<S>(row, "sca", expected, factor * real_of<S>(n), eps);
      } else if (n == 7) {
        // 3(9-16s^2)|T|^2/14
        typename S::Real expected =
            real_of<S>(3, 14) * (real_of<S>(9) - real_of<S>(16) * s2) * u;
        detail::push_cell<S>(row, "ricci-factor", expected, factor, eps);
      } else {
        typename S::Real expected =
            real_of<S>(3, 4 * n * n) * g * g * (real_of<S>(3 * n - 3) + real_of<S>(16 * n - 144) * s2);
        detail::push_cell<S>(row, "ricci-factor", expected, factor, eps);
      }
    } else if (quantity == "s-factor") {
      // S(X).phi0 = -3 gamma^2 (n-9)/n^2 X.phi0
      typename S::Real expected = real_of<S>(-3 * (n - 9), n * n) * g * g;
      Spinor<S> sx = s_endomorphism_parallel(tops, d, frame_vector<S>(n, 0), eps);
      auto mu = real_scalar_multiple(sx, mat_vec(entry.rep.gamma[0], d.phi0), eps);
      typename S::Real computed = mu ? *mu : S::real_from_rat(rat(999999));
      detail::push_cell<S>(row, "s-factor", expected, computed, eps);
    } else if (quantity == "slashed-beta") {
      typename S::Real beta = slashed_eigen_parallel(tops, d, s, eps);
      typename S::Real expected =
          real_of<S>(-1, 4) * four_s_minus_1 * (g * g + u + u);
      detail::push_cell<S>(row, "slashed-beta", expected, beta, eps);
    } else if (quantity == "dirac-eigenvalue") {
      typename S::Real beta = slashed_eigen_parallel(tops, d, s, eps);
      Spinor<S> ds_phi = dirac_from_slashed(tops, d, s, beta, eps);
      auto mu = real_scalar_multiple(ds_phi, d.phi0, eps);
      typename S::Real computed = mu ? *mu : S::real_from_rat(rat(999999));
      typename S::Real expected = real_of<S>(3, 4) * four_s_minus_1 * g;
      detail::push_cell<S>(row, "dirac-eigenvalue", expected, computed, eps);
    } else if (quantity == "killing-zeta") {
      typename S::Real zeta = killing_correspondence(tops, d, s, eps);
      typename S::Real expected = real_of<S>(-3, 4 * n) * four_s_minus_1 * g;
      detail::push_cell<S>(row, "killing-zeta", expected, zeta, eps);
    } else {
      throw std::invalid_argument("einstein_table: unknown quantity '" + quantity + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Model geometries: Ricci diagonal and scalar curvature over the grid,
/// curvature-level computation against the closed forms
/// Ric^s = Ric^g - 4 s^2 S and Sca^s = Sca^g - 24 s^2 |T|^2.
template <class S>
std::vector<TableRow> model_curvature_table(const CatalogEntry<S>& entry,
                                            const std::vector<Rat>& grid,
                                            double tol = kDefaultTolerance) {
  if (!entry.geometry) throw std::invalid_argument("model_curvature_table: not a frame model");
  const double eps = backend_zero_tolerance<S>(tol);
  const auto& geom = *entry.geometry;
  CurvatureData<S> base = curvature(geom, S::real_zero());

  std::vector<TableRow> rows;
  for (const Rat& sq : grid) {
    typename S::Real s = S::real_from_rat(sq);
    typename S::Real four_s2 = (s * s) * real_of<S>(4);
    CurvatureData<S> cd = curvature(geom, s);
    TableRow row;
    row.s = sq;
    for (int a = 0; a < entry.n; ++a) {
      typename S::Real expected = base.ric(a, a) - four_s2 * base.s_at(a, a);
      detail::push_cell<S>(row, "ric_e" + std::to_string(a + 1), expected, cd.ric(a, a), eps);
    }
    typename S::Real sca_expected =
        base.scalar_curv - real_of<S>(24) * (s * s) * geom.torsion.norm_sq;
    detail::push_cell<S>(row, "sca", sca_expected, cd.scalar_curv, eps);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace spinlab
