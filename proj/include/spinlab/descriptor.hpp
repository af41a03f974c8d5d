#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "spinlab/catalog.hpp"

namespace spinlab {

/// Geometry descriptor files: structured text with 1-based frame indices and
/// exact rational coefficients, e.g.
///   {"name":"heisenberg5","n":5,
///    "brackets":[{"i":1,"j":2,"coefficients":[{"k":5,"value":"-2"}]}, ...],
///    "torsion":[{"i":1,"j":2,"k":5,"value":"2"}, ...]}
inline nlohmann::ordered_json geometry_to_descriptor(const ModelGeometry<ExactScalar>& geom) {
  nlohmann::ordered_json out;
  out["name"] = geom.name;
  out["n"] = geom.n;
  auto brackets = nlohmann::ordered_json::array();
  for (int i = 0; i < geom.n; ++i)
    for (int j = i + 1; j < geom.n; ++j) {
      auto coeffs = nlohmann::ordered_json::array();
      for (int k = 0; k < geom.n; ++k)
        if (geom.cat(i, j, k) != 0)
          coeffs.push_back({{"k", k + 1}, {"value", to_string(geom.cat(i, j, k))}});
      if (!coeffs.empty()) brackets.push_back({{"i", i + 1}, {"j", j + 1}, {"coefficients", coeffs}});
    }
  out["brackets"] = brackets;
  auto torsion = nlohmann::ordered_json::array();
  for (const auto& [mask, c] : geom.torsion.form.coeffs) {
    auto idx = blade::indices(mask);
    torsion.push_back({{"i", idx[0] + 1}, {"j", idx[1] + 1}, {"k", idx[2] + 1},
                       {"value", to_string(c.re_part())}});
  }
  out["torsion"] = torsion;
  return out;
}

template <class S>
ModelGeometry<S> descriptor_to_geometry(const nlohmann::json& j,
                                        double tol = kDefaultTolerance) {
  std::string name = j.at("name").get<std::string>();
  int n = j.at("n").get<int>();
  if (n < 3 || n > 8) throw std::invalid_argument("descriptor: dimension out of range");
  std::vector<typename S::Real> c(std::size_t(n) * n * n, S::real_zero());
  for (const auto& b : j.at("brackets")) {
    int i = b.at("i").get<int>() - 1;
    int jj = b.at("j").get<int>() - 1;
    for (const auto& kv : b.at("coefficients")) {
      int k = kv.at("k").get<int>() - 1;
      Rat v = parse_rational(kv.at("value").get<std::string>());
      c[(std::size_t(i) * n + jj) * n + k] = S::real_from_rat(v);
      c[(std::size_t(jj) * n + i) * n + k] = S::real_from_rat(Rat(-v));
    }
  }
  AltForm<S> t3(n, 3);
  for (const auto& tv : j.at("torsion")) {
    std::vector<int> idx = {tv.at("i").get<int>() - 1, tv.at("j").get<int>() - 1,
                            tv.at("k").get<int>() - 1};
    Rat v = parse_rational(tv.at("value").get<std::string>());
    auto [mask, sign] = blade::normalize(idx);
    if (sign == 0) throw std::invalid_argument("descriptor: repeated torsion index");
    t3.add_blade(mask, scalar_from_rat<S>(sign < 0 ? Rat(-v) : v));
  }
  return make_model_geometry<S>(std::move(name), n, c, t3, tol);
}

template <class S>
ModelGeometry<S> load_geometry_file(const std::string& path, double tol = kDefaultTolerance) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open geometry descriptor '" + path + "'");
  nlohmann::json j;
  in >> j;
  return descriptor_to_geometry<S>(j, tol);
}

/// Constants side-table shipped with each catalog entry.
inline nlohmann::ordered_json entry_constants(const CatalogEntry<ExactScalar>& entry) {
  nlohmann::ordered_json out;
  out["name"] = entry.name;
  out["n"] = entry.n;
  out["torsion_norm_sq"] = to_string(entry.torsion.norm_sq);
  out["lambda"] = to_string(entry.lambda);
  out["tau0"] = to_string(entry.tau0);
  out["structure_form_negated"] = entry.structure_form_negated;
  auto spinors = nlohmann::ordered_json::array();
  for (const auto& ds : entry.spinors)
    spinors.push_back({{"label", ds.label},
                       {"t_eigenvalue", to_string(ds.datum.gamma_eig)},
                       {"einstein_killing", ds.datum.einstein_killing}});
  out["spinors"] = spinors;
  return out;
}

}  // namespace spinlab
