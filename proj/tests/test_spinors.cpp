#include <catch2/catch_amalgamated.hpp>

#include "spinlab/catalog.hpp"

using namespace spinlab;
using S = ExactScalar;

namespace {

const std::vector<Rat>& s_grid() {
  static const std::vector<Rat> grid = {rat(-1, 2), rat(-1, 4), rat(0),    rat(1, 12),
                                        rat(1, 4),  rat(1, 2),  rat(3, 4), rat(1),
                                        rat(2, 7),  rat(-3, 5)};
  return grid;
}

}  // namespace

TEST_CASE("characteristic parameter reduces the Ricci action to X -| sigma_T") {
  for (const char* name : {"sasaki5_alg", "g2_7_alg", "nk6_alg"}) {
    auto entry = load_entry<S>(name);
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    for (const auto& ds : entry.spinors) {
      for (int a = 0; a < entry.n; ++a) {
        auto x = frame_vector<S>(entry.n, a);
        Spinor<S> ric = ricci_action_parallel(tops, ds.datum, real_of<S>(1, 4), x);
        Mat<S> xs(entry.rep.dim, entry.rep.dim);
        for (int b = 0; b < entry.n; ++b) {
          S c = S::from_real(x[b]);
          if (!c.is_zero()) xs += mat_scale(c, tops.sigma_contr[b]);
        }
        CHECK(vec_is_zero(vec_sub(ric, mat_vec(xs, ds.datum.phi0))));
      }
    }
  }
}

TEST_CASE("G2 Ricci action carries the factor 3(9-16s^2)|T|^2/14") {
  auto entry = load_entry<S>("g2_7_alg");  // tau0 = 6, |T|^2 = 7
  auto tops = make_torsion_ops(entry.rep, entry.torsion);
  const auto& d = entry.spinors.front().datum;
  for (const Rat& s : s_grid()) {
    Rat factor = Rat(3) * (Rat(9) - Rat(16) * s * s) * entry.torsion.norm_sq / 14;
    for (int a = 0; a < 7; ++a) {
      Spinor<S> ric =
          ricci_action_parallel(tops, d, S::real_from_rat(s), frame_vector<S>(7, a));
      Spinor<S> expect = vec_scale(scalar_from_rat<S>(factor),
                                   mat_vec(entry.rep.gamma[a], d.phi0));
      CHECK(vec_is_zero(vec_sub(ric, expect)));
    }
  }
}

TEST_CASE("Sasakian Ricci action on the eigenbundles") {
  auto entry = load_entry<S>("sasaki5_alg");
  auto tops = make_torsion_ops(entry.rep, entry.torsion);
  auto action_factor = [&](const ParallelSpinorDatum<S>& d, const Rat& s, int axis) {
    Spinor<S> ric = ricci_action_parallel(tops, d, S::real_from_rat(s), frame_vector<S>(5, axis));
    auto mu = real_scalar_multiple(ric, mat_vec(entry.rep.gamma[axis], d.phi0));
    REQUIRE(mu.has_value());
    return *mu;
  };
  for (const auto& ds : entry.spinors) {
    bool zero_case = S::from_real(ds.datum.gamma_eig).is_zero();
    for (const Rat& s : s_grid()) {
      Rat horizontal;
      if (zero_case)
        horizontal = -(Rat(2) + Rat(32) * s * s);
      else
        horizontal = Rat(6) - Rat(32) * s * s;
      Rat reeb = Rat(-4) * (Rat(16) * s * s - 1);
      CHECK(action_factor(ds.datum, s, 0) == horizontal);
      CHECK(action_factor(ds.datum, s, 4) == reeb);
    }
  }
}

TEST_CASE("S-endomorphism action") {
  SECTION("G2: S(X) = 6|T|^2/7") {
    auto entry = load_entry<S>("g2_7_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    const auto& d = entry.spinors.front().datum;
    Rat factor = Rat(6) * entry.torsion.norm_sq / 7;
    for (int a = 0; a < 7; ++a) {
      Spinor<S> sx = s_endomorphism_parallel(tops, d, frame_vector<S>(7, a));
      Spinor<S> expect = vec_scale(scalar_from_rat<S>(factor),
                                   mat_vec(entry.rep.gamma[a], d.phi0));
      CHECK(vec_is_zero(vec_sub(sx, expect)));
    }
  }
  SECTION("the closed-form factor dies at n = 9") {
    // -3 gamma^2 (n-9)/n^2 with n = 9
    CHECK(Rat(-3) * Rat(25) * Rat(9 - 9) / Rat(81) == Rat(0));
  }
  SECTION("einstein-killing data in general dimension: -3 gamma^2 (n-9)/n^2") {
    for (const char* name : {"nk6_alg", "g2_7_alg", "su2"}) {
      auto entry = load_entry<S>(name);
      auto tops = make_torsion_ops(entry.rep, entry.torsion);
      for (const auto& ds : entry.spinors) {
        REQUIRE(ds.datum.einstein_killing);
        Rat g2 = Rat(ds.datum.gamma_eig) * Rat(ds.datum.gamma_eig);
        Rat factor = Rat(-3) * g2 * (entry.n - 9) / (entry.n * entry.n);
        Spinor<S> sx = s_endomorphism_parallel(tops, ds.datum, frame_vector<S>(entry.n, 0));
        Spinor<S> expect =
            vec_scale(scalar_from_rat<S>(factor), mat_vec(entry.rep.gamma[0], ds.datum.phi0));
        CHECK(vec_is_zero(vec_sub(sx, expect)));
      }
    }
  }
}

TEST_CASE("integrability of nabla^s-parallel spinors against curvature") {
  SECTION("su2 at the flat parameter is Ricci-flat on spinors") {
    auto entry = load_entry<S>("su2");
    auto ops = make_spin_ops(*entry.geometry, entry.rep, real_of<S>(-1, 4));
    TestRng rng(3);
    for (int k = 0; k < 5; ++k) {
      Spinor<S> phi = rng.spinor<S>(2);
      for (int a = 0; a < 3; ++a)
        CHECK(vec_is_zero(ricci_endo_action(ops, frame_vector<S>(3, a), phi)));
      auto [ric_res, sca_res] = parallel_integrability_residuals(ops, phi);
      CHECK(ric_res == 0.0);
      CHECK(sca_res == 0.0);
    }
  }
  SECTION("heisenberg characteristic spinors clear both residuals") {
    auto entry = load_entry<S>("heisenberg5");
    auto ops = make_spin_ops(*entry.geometry, entry.rep, real_of<S>(1, 4));
    for (const auto& ds : entry.spinors) {
      auto [ric_res, sca_res] = parallel_integrability_residuals(ops, ds.datum.phi0);
      CHECK(ric_res == 0.0);
      CHECK(sca_res == 0.0);
    }
    // a spinor outside the parallel class leaves a nonzero witness
    auto sas = load_entry<S>("sasaki5_alg");
    auto [r1, r2] = parallel_integrability_residuals(ops, sas.spinors.front().datum.phi0);
    CHECK(r1 > 0.0);
    CHECK(r2 > 0.0);
  }
  SECTION("heisenberg characteristic spinor: curvature vs algebraic right sides") {
    auto entry = load_entry<S>("heisenberg5");
    auto ops = make_spin_ops(*entry.geometry, entry.rep, real_of<S>(1, 4));
    for (const auto& ds : entry.spinors) {
      const auto& phi0 = ds.datum.phi0;
      // Ric^c(X).phi0 = (X -| sigma_T).phi0
      for (int a = 0; a < 5; ++a) {
        Spinor<S> lhs = ricci_endo_action(ops, frame_vector<S>(5, a), phi0);
        Spinor<S> rhs = mat_vec(ops.sigma_contr[a], phi0);
        CHECK(vec_is_zero(vec_sub(lhs, rhs)));
      }
      // Sca^c.phi0 = -4 sigma_T.phi0, numerically -16 phi0 with sigma.phi0 = 4 phi0
      CHECK(ops.curv.scalar_curv == Rat(-16));
      Spinor<S> sig_phi = mat_vec(ops.sigma_mat, phi0);
      CHECK(vec_is_zero(vec_sub(sig_phi, vec_scale(S(4), phi0))));
      Spinor<S> lhs = vec_scale(S::from_real(ops.curv.scalar_curv), phi0);
      CHECK(vec_is_zero(vec_add(lhs, vec_scale(S(4), sig_phi))));
    }
  }
  SECTION("zero torsion at s = 0 degenerates to the classical statement") {
    auto geom = make_model_geometry<S>("flat3_no_t", 3, std::vector<Rat>(27, Rat(0)),
                                       AltForm<S>(3, 3));
    auto rep = build_rep<S>(3);
    auto ops = make_spin_ops(geom, rep, S::real_zero());
    TestRng rng(4);
    Spinor<S> phi = rng.spinor<S>(2);
    for (int a = 0; a < 3; ++a)
      CHECK(vec_is_zero(ricci_endo_action(ops, frame_vector<S>(3, a), phi)));
  }
}

TEST_CASE("harmony factor and scalar curvature for einstein-killing data") {
  SECTION("G2 matches its Ricci factor") {
    auto entry = load_entry<S>("g2_7_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    const auto& d = entry.spinors.front().datum;
    for (const Rat& s : s_grid()) {
      Rat factor = harmony_einstein(tops, d, S::real_from_rat(s));
      CHECK(factor == Rat(3) * (Rat(9) - Rat(16) * s * s) * entry.torsion.norm_sq / 14);
    }
  }
  SECTION("nearly Kaehler at s = 0: Sca^g = 9(n-1) gamma^2 / (4n)") {
    auto entry = load_entry<S>("nk6_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    const auto& d = entry.spinors.front().datum;
    Rat factor = harmony_einstein(tops, d, S::real_zero());
    Rat g2 = Rat(d.gamma_eig) * Rat(d.gamma_eig);
    CHECK(factor * 6 == Rat(9) * 5 * g2 / 24);   // Sca^g
    CHECK(factor == rat(15, 2) * entry.torsion.norm_sq / 6);
  }
  SECTION("n = 3 characteristic parameter is Ric^c-flat") {
    auto entry = load_entry<S>("su2");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    CHECK(harmony_einstein(tops, entry.spinors.front().datum, real_of<S>(1, 4)) == Rat(0));
  }
  SECTION("generic data are rejected") {
    auto entry = load_entry<S>("sasaki5_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    CHECK_THROWS_AS(harmony_einstein(tops, entry.spinors.front().datum, S::real_zero()),
                    std::invalid_argument);
  }
}

TEST_CASE("Killing correspondence") {
  auto entry = load_entry<S>("g2_7_alg");
  auto tops = make_torsion_ops(entry.rep, entry.torsion);
  const auto& d = entry.spinors.front().datum;  // gamma = -7
  SECTION("s = 0 returns the real Killing number 3 gamma/(4n)") {
    CHECK(killing_correspondence(tops, d, S::real_zero()) == rat(-3, 4));
  }
  SECTION("characteristic parameter is parallel") {
    CHECK(killing_correspondence(tops, d, real_of<S>(1, 4)) == Rat(0));
  }
  SECTION("zeta matches -3(4s-1)|T|/(4 sqrt 7) at the square level") {
    for (const Rat& s : s_grid()) {
      Rat zeta = killing_correspondence(tops, d, S::real_from_rat(s));
      Rat q = Rat(4) * s - 1;
      CHECK(Rat(112) * zeta * zeta == Rat(9) * q * q * entry.torsion.norm_sq);
    }
  }
  SECTION("misclassified data raise") {
    auto sas = load_entry<S>("sasaki5_alg");
    auto stops = make_torsion_ops(sas.rep, sas.torsion);
    CHECK_THROWS_AS(killing_correspondence(stops, sas.spinors.front().datum, S::real_zero()),
                    std::invalid_argument);
  }
}

TEST_CASE("slashed eigenvalues on parallel spinors") {
  SECTION("G2: beta = -9(4s-1)|T|^2/4") {
    auto entry = load_entry<S>("g2_7_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    const auto& d = entry.spinors.front().datum;
    for (const Rat& s : s_grid()) {
      Rat beta = slashed_eigen_parallel(tops, d, S::real_from_rat(s));
      CHECK(beta == Rat(-9) * (Rat(4) * s - 1) * entry.torsion.norm_sq / 4);
    }
  }
  SECTION("nearly Kaehler: -3(4s-1)|T|^2/2 on both spinors") {
    auto entry = load_entry<S>("nk6_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    for (const auto& ds : entry.spinors)
      for (const Rat& s : {rat(0), rat(1, 2), rat(-1, 4)}) {
        Rat beta = slashed_eigen_parallel(tops, ds.datum, S::real_from_rat(s));
        CHECK(beta == Rat(-3) * (Rat(4) * s - 1) * entry.torsion.norm_sq / 2);
      }
  }
  SECTION("the characteristic parameter is in the kernel") {
    auto entry = load_entry<S>("sasaki5_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    for (const auto& ds : entry.spinors)
      CHECK(slashed_eigen_parallel(tops, ds.datum, real_of<S>(1, 4)) == Rat(0));
  }
}

TEST_CASE("slashed operator on Killing data returns 3 zeta T.phi0") {
  auto entry = load_entry<S>("nk6_alg");
  auto tops = make_torsion_ops(entry.rep, entry.torsion);
  for (const auto& ds : entry.spinors)
    for (const Rat& s : {rat(0), rat(1, 3), rat(5, 4)}) {
      Spinor<S> out = slashed_on_killing(tops, ds.datum, S::real_from_rat(s));
      Rat zeta = Rat(3) * (Rat(1) - Rat(4) * s) * Rat(ds.datum.gamma_eig) / 24;
      Spinor<S> expect =
          vec_scale(scalar_from_rat<S>(Rat(3) * zeta), mat_vec(tops.t_mat, ds.datum.phi0));
      CHECK(vec_is_zero(vec_sub(out, expect)));
    }
}

TEST_CASE("Dirac eigenvalue recovered from the slashed eigenvalue") {
  SECTION("G2: D^s phi0 = -21(4s-1)|T|/(4 sqrt 7) phi0 = 3(4s-1) gamma/4 phi0") {
    auto entry = load_entry<S>("g2_7_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    const auto& d = entry.spinors.front().datum;
    for (const Rat& s : s_grid()) {
      Rat beta = slashed_eigen_parallel(tops, d, S::real_from_rat(s));
      Spinor<S> out = dirac_from_slashed(tops, d, S::real_from_rat(s), beta);
      Rat expect = Rat(3) * (Rat(4) * s - 1) * Rat(d.gamma_eig) / 4;
      CHECK(vec_is_zero(vec_sub(out, vec_scale(scalar_from_rat<S>(expect), d.phi0))));
      // square-level identity with the irrational normal form
      Rat q = Rat(4) * s - 1;
      CHECK(Rat(16 * 7) * expect * expect == Rat(441) * q * q * entry.torsion.norm_sq);
    }
  }
  SECTION("n = 6: the beta term drops out") {
    auto entry = load_entry<S>("nk6_alg");
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    const auto& d = entry.spinors.front().datum;
    for (const Rat& s : {rat(0), rat(3, 8)}) {
      Rat beta = slashed_eigen_parallel(tops, d, S::real_from_rat(s));
      Spinor<S> out = dirac_from_slashed(tops, d, S::real_from_rat(s), beta);
      Rat c = Rat(2) * (Rat(1) - Rat(4) * s) / Rat(d.gamma_eig);
      Spinor<S> expect = vec_scale(scalar_from_rat<S>(c), mat_vec(tops.sigma_mat, d.phi0));
      CHECK(vec_is_zero(vec_sub(out, expect)));
    }
  }
}

TEST_CASE("G2 sigma_T acts as -3|T|^2 on the distinguished spinor") {
  auto entry = load_entry<S>("g2_7_alg");
  auto tops = make_torsion_ops(entry.rep, entry.torsion);
  const auto& d = entry.spinors.front().datum;
  Spinor<S> lhs = mat_vec(tops.sigma_mat, d.phi0);
  Spinor<S> rhs = vec_scale(scalar_from_rat<S>(Rat(-3) * entry.torsion.norm_sq), d.phi0);
  CHECK(vec_is_zero(vec_sub(lhs, rhs)));
}

TEST_CASE("frame contraction of the Ricci action reproduces the scalar identity") {
  // sum_i e_i . Ric^s(e_i).phi0 = -Sca^s.phi0 with
  // Sca^s.phi0 = -4 sigma_T.phi0 - 3(16s^2-1)/2 |T|^2 phi0
  for (const char* name : {"sasaki5_alg", "g2_7_alg", "nk6_alg", "su2"}) {
    auto entry = load_entry<S>(name);
    auto tops = make_torsion_ops(entry.rep, entry.torsion);
    for (const auto& ds : entry.spinors) {
      for (const Rat& s : {rat(0), rat(1, 4), rat(-2, 3), rat(1, 12)}) {
        Spinor<S> contraction = zero_vec<S>(entry.rep.dim);
        for (int a = 0; a < entry.n; ++a)
          add_into(contraction,
                   mat_vec(entry.rep.gamma[a],
                           ricci_action_parallel(tops, ds.datum, S::real_from_rat(s),
                                                 frame_vector<S>(entry.n, a))));
        Spinor<S> sca_phi = vec_scale(S(-4), mat_vec(tops.sigma_mat, ds.datum.phi0));
        Rat c = Rat(-3) * (Rat(16) * s * s - 1) * entry.torsion.norm_sq / 2;
        axpy(sca_phi, scalar_from_rat<S>(c), ds.datum.phi0);
        CHECK(vec_is_zero(vec_add(contraction, sca_phi)));
      }
    }
  }
}

TEST_CASE("Sasakian Clifford algebra facts") {
  auto entry = load_entry<S>("sasaki5_alg");
  const auto& rep = entry.rep;
  auto tops = make_torsion_ops(rep, entry.torsion);

  // d(eta) = xi -| T as a 2-form; its matrix drives everything below
  AltForm<S> d_eta = contract_index(4, entry.torsion.form);
  Mat<S> d_eta_mat = form_matrix(rep, d_eta);

  SECTION("W = sum_j T(xi, e_j).(e_j -| T) = -16 xi as an endomorphism") {
    Mat<S> w(rep.dim, rep.dim);
    auto xi = frame_vector<S>(5, 4);
    for (int j = 0; j < 5; ++j)
      w += mat_mul(vector_matrix(rep, entry.torsion.vector_t_x(xi, j)), tops.t_contr[j]);
    CHECK(mat_is_zero(w + mat_scale(S(16), rep.gamma[4])));
  }

  SECTION("e2 . d(eta) = 2(e1 + e234) inside Cl_5") {
    AltForm<S> h(5, 3);
    h.set({1, 2, 3}, S(1));  // e234
    Mat<S> lhs = mat_mul(rep.gamma[1], d_eta_mat);
    Mat<S> rhs = mat_scale(S(2), rep.gamma[0] + form_matrix(rep, h));
    CHECK(mat_is_zero(lhs - rhs));
    // and H = e234 = 1/4 (e1 -| sigma_T)
    CHECK(mat_is_zero(form_matrix(rep, h) - mat_scale(S::from_ratio(1, 4), tops.sigma_contr[0])));
  }

  SECTION("H acts as +e1 on the extreme eigenbundles and -e1 on the kernel") {
    AltForm<S> h(5, 3);
    h.set({1, 2, 3}, S(1));
    Mat<S> hm = form_matrix(rep, h);
    for (const auto& ds : entry.spinors) {
      Spinor<S> lhs = mat_vec(hm, ds.datum.phi0);
      Spinor<S> rhs = mat_vec(rep.gamma[0], ds.datum.phi0);
      if (S::from_real(ds.datum.gamma_eig).is_zero())
        CHECK(vec_is_zero(vec_add(lhs, rhs)));
      else
        CHECK(vec_is_zero(vec_sub(lhs, rhs)));
    }
  }

  SECTION("contact relation X.d(eta) - d(eta).X = 4 phi(X)") {
    // phi(e1) = -e2, phi(e2) = e1, phi(e3) = -e4, phi(e4) = e3, phi(xi) = 0
    int pair_of[5] = {1, 0, 3, 2, -1};
    long sign_of[5] = {-1, 1, -1, 1, 0};
    for (int a = 0; a < 5; ++a) {
      Mat<S> lhs = commutator(rep.gamma[a], d_eta_mat);
      Mat<S> rhs(rep.dim, rep.dim);
      if (sign_of[a] != 0) rhs = mat_scale(S(4 * sign_of[a]), rep.gamma[pair_of[a]]);
      CHECK(mat_is_zero(lhs - rhs));
      // equivalently -2 (X -| d eta)
      Mat<S> viac = mat_scale(S(-2), form_matrix(rep, contract(frame_vector<S>(5, a), d_eta)));
      CHECK(mat_is_zero(lhs - viac));
    }
  }
}

TEST_CASE("the two Ricci expressions agree on random data, no parallelism needed") {
  TestRng rng(77);
  int checked = 0;
  for (int n : {3, 4, 5, 6}) {
    auto rep = build_rep<S>(n);
    for (int k = 0; k < 12; ++k) {
      auto t = make_torsion(rep, rng.form<S>(n, 3));
      auto tops = make_torsion_ops(rep, t);
      auto x = rng.frame_coeffs<S>(n);
      auto phi = rng.spinor<S>(rep.dim);
      Spinor<S> a = detail::torsion_pair_sum(tops, x, phi);
      Spinor<S> b = detail::torsion_pair_sum_swapped(tops, x, phi);
      CHECK(vec_is_zero(vec_add(a, b)));
      ++checked;
    }
  }
  CHECK(checked == 48);
}
