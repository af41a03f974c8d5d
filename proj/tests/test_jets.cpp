#include <catch2/catch_amalgamated.hpp>

#include "spinlab/catalog.hpp"
#include "spinlab/verify.hpp"

using namespace spinlab;
using S = ExactScalar;

namespace {

SpinOps<S> ops_for(const CatalogEntry<S>& entry, const Rat& s) {
  return make_spin_ops(*entry.geometry, entry.rep, S::real_from_rat(s));
}

}  // namespace

TEST_CASE("jet reconstruction honors the frame commutators") {
  auto entry = load_entry<S>("heisenberg5");
  auto ops = ops_for(entry, rat(1, 3));
  TestRng rng(7);
  auto jet = random_jet<S>(rng, 5, entry.rep.dim);
  REQUIRE(validate_jet(ops, jet));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      Spinor<S> gap = vec_sub(full_d2(ops, jet, i, j), full_d2(ops, jet, j, i));
      for (int k = 0; k < 5; ++k)
        axpy(gap, -S::from_real(ops.geom->cat(i, j, k)), jet.d1[k]);
      CHECK(vec_is_zero(gap));
    }
}

TEST_CASE("covariant derivative on constant spinors keeps only the torsion term") {
  auto entry = load_entry<S>("flat_torus_3");
  Spinor<S> phi = basis_vec<S>(2, 0);
  for (Rat s : {rat(1, 4), rat(-1, 2), rat(2, 7)}) {
    auto ops = ops_for(entry, s);
    auto jet = constant_jet<S>(3, phi);
    // nabla^s_{e_1} phi = s (e_1 -| T).phi = s e_23.phi
    AltForm<S> e23(3, 2);
    e23.set({1, 2}, S(1));
    Spinor<S> expect = vec_scale(scalar_from_rat<S>(s), form_action(entry.rep, e23, phi));
    CHECK(vec_is_zero(vec_sub(nabla_s(ops, 0, jet).value, expect)));
  }
}

TEST_CASE("flat Cartan-Schouten connection annihilates constant spinors") {
  auto entry = load_entry<S>("su2");
  auto ops = ops_for(entry, rat(-1, 4));
  TestRng rng(9);
  auto jet = constant_jet<S>(3, rng.spinor<S>(2));
  for (int i = 0; i < 3; ++i) CHECK(vec_is_zero(nabla_s(ops, i, jet).value));
  CHECK(vec_is_zero(dirac(ops, jet).value));
}

TEST_CASE("s = 0 on the abelian model is the plain frame derivative") {
  auto entry = load_entry<S>("flat_torus_4");
  auto geom_no_torsion =
      make_model_geometry<S>("flat4_no_t", 4, std::vector<Rat>(64, Rat(0)), AltForm<S>(4, 3));
  auto ops = make_spin_ops(geom_no_torsion, entry.rep, S::real_zero());
  TestRng rng(11);
  auto jet = random_jet<S>(rng, 4, 4);
  for (int i = 0; i < 4; ++i)
    CHECK(vec_is_zero(vec_sub(nabla_s(ops, i, jet).value, jet.d1[i])));
  CHECK(vec_is_zero(slashed_d(ops, jet)));  // T = 0
}

TEST_CASE("zero torsion recovers the classical statements for every s") {
  auto geom = make_model_geometry<S>("flat4_no_t", 4, std::vector<Rat>(64, Rat(0)),
                                     AltForm<S>(4, 3));
  auto rep = build_rep<S>(4);
  TestRng rng(12);
  for (Rat s : {rat(0), rat(1, 4), rat(-2, 3)}) {
    auto ops = make_spin_ops(geom, rep, S::real_from_rat(s));
    auto jet = random_jet<S>(rng, 4, 4);
    // (D^g)^2 = Delta^g + 1/4 Sca^g, all torsion terms gone
    CHECK(vec_is_zero(sl_residual(ops, jet)));
    for (int a = 0; a < 4; ++a) {
      CHECK(vec_is_zero(half_ricci_residual(ops, frame_vector<S>(4, a), jet)));
      CHECK(vec_is_zero(jul1_residual(ops, frame_vector<S>(4, a), jet.value)));
    }
  }
  // a constant spinor is parallel and twistorial at s = 0; the twistor form
  // degenerates with both sides zero
  auto ops0 = make_spin_ops(geom, rep, S::real_zero());
  auto jet = make_parallel_jet(ops0, rng.spinor<S>(4));
  REQUIRE(is_twistor_jet(ops0, jet));
  for (int a = 0; a < 4; ++a)
    CHECK(vec_is_zero(twistor_ricci_residual(ops0, frame_vector<S>(4, a), jet)));
  CHECK(vec_is_zero(twistor_scalar_residual(ops0, jet)));
}

TEST_CASE("Dirac on constant spinors is the torsion multiple 3sT") {
  auto entry = load_entry<S>("flat_torus_3");
  TestRng rng(13);
  Spinor<S> phi = rng.spinor<S>(2);
  for (Rat s : {rat(0), rat(1, 4), rat(5, 8)}) {
    auto ops = ops_for(entry, s);
    auto jet = constant_jet<S>(3, phi);
    Spinor<S> expect = vec_scale(scalar_from_rat<S>(Rat(3) * s), mat_vec(ops.t_mat, phi));
    CHECK(vec_is_zero(vec_sub(dirac(ops, jet).value, expect)));
  }
}

TEST_CASE("parallel jets: existence, failure witness, and the Dirac eigenvalue") {
  SECTION("su2 admits parallel jets at both flat parameters") {
    auto entry = load_entry<S>("su2");
    for (Rat s0 : {rat(1, 4), rat(-1, 4)}) {
      auto ops = ops_for(entry, s0);
      TestRng rng(17);
      auto jet = make_parallel_jet(ops, rng.spinor<S>(2));
      for (int i = 0; i < 3; ++i) CHECK(vec_is_zero(nabla_s(ops, i, jet).value));
      if (s0 == rat(-1, 4)) {
        for (int i = 0; i < 3; ++i) CHECK(vec_is_zero(jet.d1[i]));
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) CHECK(vec_is_zero(jet.d2sym[i][j]));
      }
    }
  }
  SECTION("heisenberg admits the zero-eigenbundle spinor and rejects the others") {
    auto entry = load_entry<S>("heisenberg5");
    auto ops = ops_for(entry, rat(1, 4));
    REQUIRE(entry.spinors.size() == 2);
    for (const auto& ds : entry.spinors) {
      auto jet = make_parallel_jet(ops, ds.datum.phi0);
      for (int i = 0; i < 5; ++i) CHECK(vec_is_zero(nabla_s(ops, i, jet).value));

      // D^s on a characteristic-parallel jet is 3(4s-1)/4 T.phi0
      for (Rat s : {rat(0), rat(1, 2), rat(-1, 3)}) {
        auto ops_s = ops_for(entry, s);
        auto jet_s = make_parallel_jet(ops, ds.datum.phi0);  // same field data
        Spinor<S> expect = vec_scale(scalar_from_rat<S>((Rat(4) * s - 1) * Rat(3) / 4),
                                     mat_vec(ops_s.t_mat, ds.datum.phi0));
        CHECK(vec_is_zero(vec_sub(dirac(ops_s, jet_s).value, expect)));
      }
    }
    // the +-4 eigenspinors do not extend to parallel jets here
    auto sas = load_entry<S>("sasaki5_alg");
    int rejected = 0;
    for (const auto& ds : sas.spinors) {
      if (S::from_real(ds.datum.gamma_eig).is_zero()) continue;
      try {
        make_parallel_jet(ops, ds.datum.phi0);
      } catch (const jet_inconsistency& e) {
        ++rejected;
        CHECK(e.i >= 0);
        CHECK(e.j > e.i);
      }
    }
    CHECK(rejected == 2);
  }
}

TEST_CASE("Killing jets on su2 are twistor jets for every parameter") {
  auto entry = load_entry<S>("su2");
  const auto& d = entry.spinors.front().datum;
  for (Rat s : {rat(0), rat(1, 2), rat(3, 4), rat(-1, 2)}) {
    auto ops = ops_for(entry, s);
    Rat zeta = Rat(3) * (Rat(1) - Rat(4) * s) / 12;  // 3(1-4s) gamma / (4n), gamma = 1
    auto jet = make_killing_jet(ops, S::real_from_rat(zeta), d.phi0);
    for (int i = 0; i < 3; ++i) {
      Spinor<S> expect = vec_scale(scalar_from_rat<S>(zeta), mat_vec(entry.rep.gamma[i], d.phi0));
      CHECK(vec_is_zero(vec_sub(nabla_s(ops, i, jet).value, expect)));
    }
    CHECK(is_twistor_jet(ops, jet));
  }
}

TEST_CASE("operators are linear in the jet") {
  auto entry = load_entry<S>("heisenberg5");
  auto ops = ops_for(entry, rat(2, 5));
  TestRng rng(23);
  auto a = random_jet<S>(rng, 5, 4);
  auto b = random_jet<S>(rng, 5, 4);
  S c = rng.scalar<S>();
  auto combo = jet_add(jet_scale(c, a), b);

  auto expect = [&](auto&& op) {
    Spinor<S> lhs = op(combo);
    Spinor<S> rhs = vec_scale(c, op(a));
    add_into(rhs, op(b));
    return vec_is_zero(vec_sub(lhs, rhs));
  };
  CHECK(expect([&](const SpinorJet2<S>& j) { return dirac(ops, j).value; }));
  CHECK(expect([&](const SpinorJet2<S>& j) { return dirac_squared(ops, j); }));
  CHECK(expect([&](const SpinorJet2<S>& j) { return laplacian(ops, j); }));
  CHECK(expect([&](const SpinorJet2<S>& j) { return slashed_d(ops, j); }));
  CHECK(expect([&](const SpinorJet2<S>& j) { return nabla_s(ops, 2, j).value; }));
}

TEST_CASE("both Laplacian conventions coincide on trace-free frames") {
  for (const char* name : {"su2", "heisenberg5"}) {
    auto entry = load_entry<S>(name);
    auto ops = ops_for(entry, rat(1, 4));
    TestRng rng(29);
    auto jet = random_jet<S>(rng, entry.n, entry.rep.dim);
    auto a = laplacian(ops, jet, LaplaceConvention::kStandard);
    auto b = laplacian(ops, jet, LaplaceConvention::kPlusTrace);
    CHECK(vec_is_zero(vec_sub(a, b)));
  }
}

TEST_CASE("spin curvature from the connection equals the tangent-level assembly") {
  for (const char* name : {"flat_torus_4", "su2", "heisenberg5"}) {
    auto entry = load_entry<S>(name);
    for (Rat s : {rat(0), rat(1, 4), rat(-2, 3)}) {
      auto ops = ops_for(entry, s);
      for (int i = 0; i < entry.n; ++i)
        for (int j = 0; j < entry.n; ++j)
          CHECK(mat_is_zero(spin_curvature(ops, i, j) - spin_curvature_from_r(ops, i, j)));
    }
  }
}

TEST_CASE("spin connection coefficients are anti-Hermitian") {
  for (const char* name : {"su2", "heisenberg5"}) {
    auto entry = load_entry<S>(name);
    auto ops = ops_for(entry, rat(3, 7));
    for (const auto& w : ops.omega) CHECK(is_anti_hermitian(w));
  }
}

TEST_CASE("frame index bounds are enforced") {
  auto entry = load_entry<S>("su2");
  auto ops = ops_for(entry, rat(0));
  auto jet = constant_jet<S>(3, basis_vec<S>(2, 0));
  CHECK_THROWS_AS(nabla_s(ops, 3, jet), std::out_of_range);
  CHECK_THROWS_AS(nabla_s(ops, -1, jet), std::out_of_range);
}

TEST_CASE("slashed operator: all three jet-level expressions coincide") {
  for (const char* name : {"su2", "heisenberg5", "flat_torus_4"}) {
    auto entry = load_entry<S>(name);
    for (Rat s : {rat(0), rat(1, 4), rat(-2, 5)}) {
      auto ops = ops_for(entry, s);
      TestRng rng(37);
      for (int k = 0; k < 3; ++k) {
        auto jet = random_jet<S>(rng, entry.n, entry.rep.dim);
        CHECK(vec_is_zero(slashed_double_sum_residual(ops, jet)));
        CHECK(vec_is_zero(slashed_adjoint_residual(ops, jet)));
        CHECK(vec_is_zero(slashed_dirac_residual(ops, jet)));
      }
    }
  }
}

TEST_CASE("form rule with the torsion itself reproduces the slashed expression") {
  // D^s(T.phi) via the form rule feeds the Dirac-based slashed formula
  auto entry = load_entry<S>("su2");
  auto ops = ops_for(entry, rat(1, 3));
  TestRng rng(39);
  auto jet = random_jet<S>(rng, 3, 2);
  CHECK(vec_is_zero(dirac_form_residual(ops, entry.torsion.form, jet)));
}

TEST_CASE("twistor jets satisfy slashed-D = -(3/n) T D^s") {
  auto entry = load_entry<S>("su2");
  for (Rat s : {rat(0), rat(1, 2), rat(-1, 4)}) {
    auto ops = ops_for(entry, s);
    for (const auto& ds : entry.spinors) {
      Rat zeta = Rat(3) * (Rat(1) - Rat(4) * s) * Rat(ds.datum.gamma_eig) / 12;
      auto jet = make_killing_jet(ops, S::real_from_rat(zeta), ds.datum.phi0);
      Spinor<S> lhs = slashed_d(ops, jet);
      Spinor<S> rhs = vec_scale(S::from_ratio(-3, 3), mat_vec(ops.t_mat, dirac(ops, jet).value));
      CHECK(vec_is_zero(vec_sub(lhs, rhs)));
    }
  }
}

TEST_CASE("twistor preconditions are enforced") {
  auto entry = load_entry<S>("heisenberg5");
  auto ops = ops_for(entry, rat(1, 2));
  TestRng rng(43);
  auto jet = random_jet<S>(rng, 5, 4);
  CHECK_FALSE(is_twistor_jet(ops, jet));
  CHECK_THROWS_AS(twistor_ricci_residual(ops, frame_vector<S>(5, 0), jet), std::domain_error);
  CHECK_THROWS_AS(twistor_scalar_residual(ops, jet), std::domain_error);
}

TEST_CASE("half-Ricci and SL verifiers demand parallel torsion") {
  // su(2)-shaped bracket on the first three axes with Sasakian-shaped torsion
  std::vector<Rat> c(125, Rat(0));
  auto put = [&](int i, int j, int k, long v) {
    c[(std::size_t(i) * 5 + j) * 5 + k] = Rat(v);
    c[(std::size_t(j) * 5 + i) * 5 + k] = Rat(-v);
  };
  put(0, 1, 2, 1);
  put(1, 2, 0, 1);
  put(2, 0, 1, 1);
  AltForm<S> t(5, 3);
  t.set({0, 1, 4}, S(1));
  t.set({2, 3, 4}, S(1));
  auto twisted = make_model_geometry<S>("twisted", 5, c, t);
  REQUIRE_FALSE(is_parallel_torsion(twisted).parallel);
  auto rep = build_rep<S>(5);
  auto ops = make_spin_ops(twisted, rep, S::real_from_rat(rat(1, 4)));
  TestRng rng(47);
  auto jet = random_jet<S>(rng, 5, 4);
  CHECK_THROWS_AS(half_ricci_residual(ops, frame_vector<S>(5, 0), jet), std::domain_error);
  CHECK_THROWS_AS(sl_residual(ops, jet), std::domain_error);
  CHECK_THROWS_AS(jul1_residual(ops, frame_vector<S>(5, 0), jet.value), std::domain_error);
  // the bracket-form agreement needs no parallelism at all
  CHECK(vec_is_zero(half_ricci_bracket_gap(ops, frame_vector<S>(5, 0), jet)));
}
