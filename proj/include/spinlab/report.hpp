#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "spinlab/catalog.hpp"
#include "spinlab/descriptor.hpp"
#include "spinlab/verify.hpp"
#include "spinlab/version.hpp"

namespace spinlab {

/// Parallelism cap: explicit request, then SPINLAB_THREADS, then hardware.
inline int thread_cap(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPINLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? int(hw) : 1;
}

/// Max-reduction of fn(trial) over [0, count). Results are independent of the
/// thread count because every trial derives its own RNG stream.
template <class Fn>
double parallel_max(int count, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    double worst = 0.0;
    for (int i = 0; i < count; ++i) worst = std::max(worst, fn(i));
    return worst;
  }
  std::vector<double> worst(threads, 0.0);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        worst[t] = std::max(worst[t], fn(i));
    });
  for (auto& th : pool) th.join();
  double m = 0.0;
  for (double w : worst) m = std::max(m, w);
  return m;
}

struct IdentityOutcome {
  std::string identity;
  std::string anchor;
  std::string s_value;
  long trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string witness;
};

struct SuiteReport {
  std::string geometry;
  std::string backend;
  std::uint64_t seed = 0;
  std::vector<IdentityOutcome> results;
  double wall_time_s = 0.0;

  bool pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["schema"] = kReportSchema;
    out["tool"] = kToolName;
    out["version"] = kVersion;
    out["geometry"] = geometry;
    out["backend"] = backend;
    out["seed"] = seed;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : results)
      rows.push_back({{"identity", r.identity},
                      {"anchor", r.anchor},
                      {"s", r.s_value},
                      {"trials", r.trials},
                      {"max_residual", r.max_residual},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass},
                      {"witness", r.witness}});
    out["results"] = rows;
    out["pass"] = pass();
    out["wall_time_s"] = wall_time_s;
    return out;
  }
};

struct SuiteConfig {
  std::vector<std::string> identities;
  std::vector<Rat> s_values;
  int trials = 100;
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 1;
  int threads = 0;
  LaplaceConvention laplace = LaplaceConvention::kStandard;
};

inline const std::vector<std::string>& known_identities() {
  static const std::vector<std::string> ids = {"half_ricci", "jul1", "sl",
                                               "usef1",      "twistorial", "contraction"};
  return ids;
}

inline const char* identity_anchor(const std::string& id) {
  if (id == "half_ricci") return "half-Ricci identity for nabla^s, covariant and bracket forms";
  if (id == "jul1") return "half-Ricci identity through the spin curvature";
  if (id == "sl") return "Schroedinger-Lichnerowicz formula for D^s";
  if (id == "usef1") return "first-order Dirac commutation rules";
  if (id == "twistorial") return "half-Ricci identity restricted to ker P^s";
  if (id == "contraction") return "torsion contraction identities";
  throw std::invalid_argument("unknown identity '" + id + "'");
}

namespace detail {

template <class S>
std::string s_label(const Rat& s) {
  return to_string(s);
}

// Certified twistor jets available at this parameter: Killing jets for
// einstein-killing data at every s, parallel jets for the rest at s = 1/4.
template <class S>
std::vector<SpinorJet2<S>> twistor_jets(const CatalogEntry<S>& entry, const SpinOps<S>& ops,
                                        const Rat& s, double tol) {
  std::vector<SpinorJet2<S>> jets;
  const int n = entry.n;
  for (const auto& ds : entry.spinors) {
    if (ds.datum.einstein_killing) {
      typename S::Real one_minus_4s = S::real_from_rat(Rat(1) - Rat(4) * s);
      typename S::Real zeta = real_of<S>(3, 4 * n) * one_minus_4s * ds.datum.gamma_eig;
      jets.push_back(make_killing_jet(ops, zeta, ds.datum.phi0, tol));
    } else if (s == rat(1, 4)) {
      jets.push_back(make_parallel_jet(ops, ds.datum.phi0, tol));
    }
  }
  return jets;
}

}  // namespace detail

/// Runs the selected identity suites on one catalog entry across the s-grid.
template <class S>
SuiteReport run_suite(const CatalogEntry<S>& entry, const SuiteConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport report;
  report.geometry = entry.name;
  report.backend = S::is_exact ? "exact" : "float";
  report.seed = cfg.seed;

  const double eps = backend_zero_tolerance<S>(cfg.tolerance);
  const int threads = thread_cap(cfg.threads);
  const int n = entry.n;

  for (const auto& id : cfg.identities) identity_anchor(id);  // validate names early

  for (const auto& id : cfg.identities) {
    if (id == "contraction") {
      auto cr = check_contraction_identities(entry.rep, entry.torsion, cfg.trials, cfg.seed,
                                             cfg.tolerance);
      IdentityOutcome row;
      row.identity = id;
      row.anchor = identity_anchor(id);
      row.s_value = "-";
      row.trials = cfg.trials;
      row.max_residual = cr.max_residual;
      row.tolerance = eps;
      row.pass = cr.pass;
      if (!cr.pass)
        for (const auto& c : cr.checks)
          if (!c.pass) {
            row.witness = c.id + " " + c.witness;
            break;
          }
      report.results.push_back(std::move(row));
      continue;
    }

    if (!entry.geometry)
      throw std::invalid_argument("identity '" + id + "' needs a frame model geometry; '" +
                                  entry.name + "' is algebraic-only");

    for (const Rat& sq : cfg.s_values) {
      SpinOps<S> ops = make_spin_ops(*entry.geometry, entry.rep, S::real_from_rat(sq),
                                     cfg.tolerance);
      IdentityOutcome row;
      row.identity = id;
      row.anchor = identity_anchor(id);
      row.s_value = detail::s_label<S>(sq);
      row.tolerance = eps;

      if (id == "half_ricci") {
        row.trials = cfg.trials;
        row.max_residual = parallel_max(cfg.trials, threads, [&](int trial) {
          TestRng rng = TestRng::for_trial(cfg.seed, trial);
          SpinorJet2<S> jet = random_jet<S>(rng, n, entry.rep.dim);
          double worst = 0.0;
          for (int a = 0; a < n; ++a) {
            RVec<S> x = frame_vector<S>(n, a);
            worst = std::max(worst, max_abs(half_ricci_residual(ops, x, jet)));
            worst = std::max(worst, max_abs(half_ricci_bracket_gap(ops, x, jet)));
          }
          RVec<S> xr = rng.frame_coeffs<S>(n);
          worst = std::max(worst, max_abs(half_ricci_residual(ops, xr, jet)));
          worst = std::max(worst, max_abs(half_ricci_bracket_gap(ops, xr, jet)));
          return worst;
        });
      } else if (id == "jul1") {
        row.trials = cfg.trials;
        row.max_residual = parallel_max(cfg.trials, threads, [&](int trial) {
          TestRng rng = TestRng::for_trial(cfg.seed, trial);
          Spinor<S> phi = rng.spinor<S>(entry.rep.dim);
          double worst = 0.0;
          for (int a = 0; a < n; ++a)
            worst = std::max(worst, max_abs(jul1_residual(ops, frame_vector<S>(n, a), phi)));
          worst = std::max(worst, max_abs(jul1_residual(ops, rng.frame_coeffs<S>(n), phi)));
          return worst;
        });
      } else if (id == "sl") {
        row.trials = cfg.trials;
        row.max_residual = parallel_max(cfg.trials, threads, [&](int trial) {
          TestRng rng = TestRng::for_trial(cfg.seed, trial);
          SpinorJet2<S> jet = random_jet<S>(rng, n, entry.rep.dim);
          return max_abs(sl_residual(ops, jet, cfg.laplace));
        });
      } else if (id == "usef1") {
        row.trials = cfg.trials;
        row.max_residual = parallel_max(cfg.trials, threads, [&](int trial) {
          TestRng rng = TestRng::for_trial(cfg.seed, trial);
          SpinorJet2<S> jet = random_jet<S>(rng, n, entry.rep.dim);
          double worst = 0.0;
          typename S::Real f0 = rng.real<S>();
          worst = std::max(
              worst, max_abs(dirac_leibniz_residual(ops, f0, rng.frame_coeffs<S>(n), jet)));
          worst = std::max(worst,
                           max_abs(dirac_vector_residual(ops, rng.frame_coeffs<S>(n), jet)));
          for (int degree : {2, 3})
            worst = std::max(
                worst, max_abs(dirac_form_residual(ops, rng.form<S>(n, degree), jet)));
          return worst;
        });
      } else if (id == "twistorial") {
        auto jets = detail::twistor_jets(entry, ops, sq, eps);
        if (jets.empty())
          throw std::invalid_argument("no certified twistor jets on '" + entry.name +
                                      "' at s = " + to_string(sq));
        row.trials = long(jets.size()) * n;
        double worst = 0.0;
        for (const auto& jet : jets) {
          for (int a = 0; a < n; ++a)
            worst = std::max(
                worst, max_abs(twistor_ricci_residual(ops, frame_vector<S>(n, a), jet, eps)));
          worst = std::max(worst, max_abs(twistor_scalar_residual(ops, jet, eps)));
        }
        row.max_residual = worst;
      } else {
        throw std::invalid_argument("unknown identity '" + id + "'");
      }

      row.pass = row.max_residual <= eps;
      report.results.push_back(std::move(row));
    }
  }

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace spinlab
