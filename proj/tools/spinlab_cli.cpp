// Command-line runner: machine-readable verification reports, torsion
// spectra and expected-vs-computed tables for the shipped structures.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spinlab/report.hpp"

namespace {

using namespace spinlab;

std::vector<Rat> parse_s_list(const std::string& text) {
  std::vector<Rat> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_rational(item));
  }
  if (out.empty()) throw std::invalid_argument("empty s list");
  return out;
}

// "a:b:step" inclusive grid, or a plain comma list
std::vector<Rat> parse_s_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_s_list(text);
  std::stringstream ss(text);
  std::string a, b, st;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, st))
    throw std::invalid_argument("bad s-grid '" + text + "'");
  Rat lo = parse_rational(a), hi = parse_rational(b), step = parse_rational(st);
  if (step <= 0) throw std::invalid_argument("s-grid step must be positive");
  std::vector<Rat> out;
  for (Rat s = lo; s <= hi; s += step) out.push_back(s);
  return out;
}

std::vector<Rat> default_grid() {
  return {rat(-1, 2), rat(-1, 4), rat(0), rat(1, 12), rat(1, 4), rat(1, 2), rat(3, 4), rat(1)};
}

void write_atomic(const std::string& path, const std::string& payload) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << payload;
  }
  std::filesystem::rename(tmp, path);
}

void emit(const std::string& out_path, const std::string& payload) {
  if (out_path.empty())
    std::cout << payload;
  else
    write_atomic(out_path, payload);
}

struct CommonArgs {
  std::string backend = "exact";
  std::string out_path;
  double tolerance = kDefaultTolerance;
  std::string lambda = "1";
  std::string tau0 = "6";
};

template <class S>
CatalogEntry<S> load_named_or_file(const std::string& name, const CommonArgs& common) {
  const auto& names = catalog_names();
  if (std::find(names.begin(), names.end(), name) != names.end())
    return load_entry<S>(name, parse_rational(common.lambda), parse_rational(common.tau0),
                         common.tolerance);
  if (std::filesystem::exists(name)) {
    CatalogEntry<S> entry;
    entry.geometry = load_geometry_file<S>(name, common.tolerance);
    entry.name = entry.geometry->name;
    entry.n = entry.geometry->n;
    entry.rep = build_rep<S>(entry.n);
    entry.torsion = entry.geometry->torsion;
    return entry;
  }
  throw std::invalid_argument("unknown geometry/structure '" + name + "'");
}

template <class S>
int cmd_verify(const std::string& geometry, const CommonArgs& common, SuiteConfig cfg) {
  CatalogEntry<S> entry = load_named_or_file<S>(geometry, common);
  if (cfg.identities.empty()) {
    cfg.identities = {"contraction"};
    if (entry.geometry) cfg.identities = {"half_ricci", "jul1", "sl", "usef1", "contraction"};
  }
  SuiteReport report = run_suite(entry, cfg);
  emit(common.out_path, report.to_json().dump(2) + "\n");
  for (const auto& r : report.results)
    std::cerr << (r.pass ? "pass" : "FAIL") << "  " << r.identity << "  s=" << r.s_value
              << "  max_residual=" << r.max_residual << "\n";
  return report.pass() ? 0 : 1;
}

template <class S>
int cmd_spectrum(const std::string& structure, const CommonArgs& common) {
  CatalogEntry<S> entry = load_named_or_file<S>(structure, common);
  auto split = t_spectrum(entry.rep, entry.torsion, entry.spectrum_candidates);
  std::ostringstream os;
  os << "eigenvalue,multiplicity,certified\n";
  std::ostringstream pretty;
  for (const auto& sp : split.spaces) {
    std::string ev = sp.eigenvalue_exact ? to_string(*sp.eigenvalue_exact)
                                         : std::to_string(sp.eigenvalue_approx);
    os << ev << "," << sp.multiplicity << "," << (sp.eigenvalue_exact ? 1 : 0) << "\n";
    pretty << " " << ev << ":" << sp.multiplicity;
  }
  emit(common.out_path, os.str());
  std::cerr << "spectrum(" << structure << "):" << pretty.str() << "\n";
  return 0;
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  if (rows.empty()) return "";
  os << "s";
  for (const auto& c : rows.front().cells)
    os << "," << c.quantity << "_expected," << c.quantity << "_computed";
  os << ",pass\n";
  for (const auto& row : rows) {
    os << to_string(row.s);
    for (const auto& c : row.cells) os << "," << c.expected << "," << c.computed;
    os << "," << (row.pass ? 1 : 0) << "\n";
  }
  return os.str();
}

template <class S>
int cmd_table(const std::string& structure, const std::string& case_label,
              const std::string& quantity, const std::vector<Rat>& grid,
              const CommonArgs& common) {
  CatalogEntry<S> entry = load_named_or_file<S>(structure, common);
  std::vector<TableRow> rows;
  if (entry.name == "sasaki5_alg" || !case_label.empty()) {
    std::string label = case_label.empty() ? "plus4" : case_label;
    rows = sasaki_ricci_table(entry, label, grid, common.tolerance);
  } else if (!quantity.empty() && !entry.spinors.empty() &&
             entry.spinors.front().datum.einstein_killing) {
    rows = einstein_table(entry, quantity, grid, common.tolerance);
  } else if (entry.geometry) {
    rows = model_curvature_table(entry, grid, common.tolerance);
  } else {
    throw std::invalid_argument("table: no quantity available for '" + structure + "'");
  }
  emit(common.out_path, table_to_csv(rows));
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.pass;
  std::cerr << "table(" << structure << "): " << rows.size() << " rows, "
            << (ok ? "all rows match" : "MISMATCH") << "\n";
  return ok ? 0 : 1;
}

int cmd_export(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& name : catalog_names()) {
    auto entry = load_entry<ExactScalar>(name);
    if (entry.geometry) {
      auto j = geometry_to_descriptor(*entry.geometry);
      write_atomic(dir + "/" + name + ".json", j.dump(2) + "\n");
    }
    write_atomic(dir + "/" + name + ".constants.json", entry_constants(entry).dump(2) + "\n");
  }
  std::cerr << "exported descriptors to " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin geometry with skew torsion: identity verification suite"};
  app.require_subcommand(1);

  CommonArgs common;
  SuiteConfig cfg;
  std::string geometry, structure, identities_csv, s_csv, s_grid_csv, case_label, quantity;
  std::string export_dir = "descriptors";
  std::uint64_t seed = 1;
  int trials = 100, threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--backend", common.backend, "arithmetic backend")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tolerance", common.tolerance, "float-backend comparison tolerance");
    sub->add_option("--out", common.out_path, "output file (stdout when omitted)");
    sub->add_option("--lambda", common.lambda, "structure scale for su2 / nk6_alg");
    sub->add_option("--tau0", common.tau0, "G2 torsion scale");
  };

  auto* verify = app.add_subcommand("verify", "run identity suites, write a JSON report");
  verify->add_option("--geometry,--structure", geometry, "catalog name or descriptor file")
      ->required();
  verify->add_option("--identity", identities_csv, "comma list of identities (default: all)");
  verify->add_option("--s", s_csv, "comma list of exact s values, e.g. 0,0.25,3/4");
  verify->add_option("--s-grid", s_grid_csv, "s grid: comma list or start:end:step");
  verify->add_option("--trials", trials, "random trials per identity and s");
  verify->add_option("--seed", seed, "deterministic seed");
  verify->add_option("--threads", threads, "parallelism cap (also SPINLAB_THREADS)");
  add_common(verify);

  auto* spectrum = app.add_subcommand("spectrum", "torsion eigenvalues with multiplicities");
  spectrum->add_option("--structure,--geometry", structure, "catalog name or descriptor file")
      ->required();
  add_common(spectrum);

  auto* table = app.add_subcommand("table", "expected-vs-computed table over an s grid");
  table->add_option("--structure,--geometry", structure, "catalog name or descriptor file")
      ->required();
  table->add_option("--case", case_label, "sasaki eigenbundle: plus4, minus4 or zero");
  table->add_option("--quantity", quantity,
                    "ricci-factor, s-factor, slashed-beta, dirac-eigenvalue, killing-zeta, sca");
  table->add_option("--s-grid", s_grid_csv, "s grid: comma list or start:end:step");
  add_common(table);

  auto* exporter = app.add_subcommand("export", "write geometry descriptors and constants");
  exporter->add_option("--dir", export_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.tolerance = common.tolerance;
    if (!identities_csv.empty()) {
      std::stringstream ss(identities_csv);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) cfg.identities.push_back(item);
    }
    if (!s_csv.empty())
      cfg.s_values = parse_s_list(s_csv);
    else if (!s_grid_csv.empty())
      cfg.s_values = parse_s_grid(s_grid_csv);
    else
      cfg.s_values = default_grid();
    std::vector<Rat> grid = s_grid_csv.empty()
                                ? (s_csv.empty() ? default_grid() : parse_s_list(s_csv))
                                : parse_s_grid(s_grid_csv);

    bool exact = common.backend == "exact";
    if (verify->parsed())
      return exact ? cmd_verify<ExactScalar>(geometry, common, cfg)
                   : cmd_verify<FloatScalar>(geometry, common, cfg);
    if (spectrum->parsed())
      return exact ? cmd_spectrum<ExactScalar>(structure, common)
                   : cmd_spectrum<FloatScalar>(structure, common);
    if (table->parsed())
      return exact ? cmd_table<ExactScalar>(structure, case_label, quantity, grid, common)
                   : cmd_table<FloatScalar>(structure, case_label, quantity, grid, common);
    if (exporter->parsed()) return cmd_export(export_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
