#include "cctlab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cctlab/checks.hpp"
#include "cctlab/hh.hpp"
#include "cctlab/io.hpp"
#include "cctlab/report.hpp"
#include "cctlab/shriek.hpp"
#include "cctlab/version.hpp"

namespace cctlab {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kCheckNames = {"prop21",     "prop32",   "prop37", "adjunction",
                                              "dstar-ff",   "scct",     "invariance", "gcct"};

struct FieldChoice {
  long mod = 0;  // 0 selects the rationals

  std::string name() const { return mod == 0 ? "Q" : "F_" + std::to_string(mod); }
};

std::string kind_word(CatKind k) {
  switch (k) {
    case CatKind::Poset:
      return "poset";
    case CatKind::Delta:
      return "delta";
    default:
      return "general";
  }
}

std::string fmt_ms(double ms) {
  std::ostringstream s;
  if (ms < 1000)
    s << std::fixed << std::setprecision(0) << ms << " ms";
  else
    s << std::fixed << std::setprecision(1) << ms / 1000 << " s";
  return s.str();
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
RankBudget budget_for() {
  // prime coefficients never grow, so the cap guarding rational fraction
  // blowup can sit far higher before elimination cost takes over
  RankBudget b;
  if constexpr (!std::is_same_v<F, RationalField>) b.sparse_max_cols = 2'000'000;
  return b;
}

// --------------------------------------------------------------------------
// validate

std::string infer_kind(const Json& j) {
  if (j.contains("kind") && j["kind"].is_string()) return j["kind"].get<std::string>();
  if (j.contains("objects")) return "category";
  if (j.contains("mul")) return "algebra";
  if (j.contains("algebras")) return "diagram";
  if (j.contains("spaces")) return "bimodule";
  throw IoError("cannot determine file kind (expected category, algebra, diagram, or bimodule)");
}

template <class F>
void describe_file(F fld, const std::string& path) {
  Json j = load_json_file(path);
  std::string kind = infer_kind(j);
  std::string stem = fs::path(path).stem().string();
  if (kind == "category") {
    CatPtr c = category_from_json(j, path);
    long non_id = c->num_morphisms() - c->num_objects();
    std::cout << path << ": OK category (" << kind_word(c->classify()) << ", "
              << c->num_objects() << " objects, " << non_id << " non-identity morphisms)\n";
  } else if (kind == "algebra") {
    auto a = algebra_from_json(fld, j, path);
    std::cout << path << ": OK algebra '" << stem << "' over " << fld.name() << " (dim "
              << a->dim << ")\n";
  } else if (kind == "diagram") {
    auto d = diagram_from_json(fld, j, fs::path(path).parent_path(), path);
    std::ostringstream dims;
    for (ObjId o = 0; o < d->base->num_objects(); ++o)
      dims << (o ? ", " : "") << d->at(o).dim;
    std::cout << path << ": OK diagram '" << d->name << "' on a "
              << kind_word(d->base->classify()) << " base (" << d->base->num_objects()
              << " objects; algebra dims " << dims.str() << ")\n";
  } else if (kind == "bimodule") {
    auto m = bimodule_from_file(fld, path);
    std::ostringstream dims;
    for (ObjId o = 0; o < m.dia->base->num_objects(); ++o) dims << (o ? ", " : "") << m.dim_at(o);
    std::cout << path << ": OK bimodule '" << m.name << "' over diagram '" << m.dia->name
              << "' (dims " << dims.str() << ")\n";
  } else {
    throw IoError(path + ": unknown kind '" + kind + "'");
  }
}

int cmd_validate(const std::vector<std::string>& files, const FieldChoice& fc) {
  int rc = 0;
  for (const auto& f : files) {
    try {
      if (fc.mod == 0)
        describe_file(RationalField{}, f);
      else
        describe_file(PrimeField(static_cast<std::uint64_t>(fc.mod)), f);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      rc = 2;
    }
  }
  return rc;
}

// --------------------------------------------------------------------------
// subdivide

int cmd_subdivide(const std::string& in_path, bool twice, const std::string& out_dir) {
  CatPtr c = category_from_json(load_json_file(in_path), in_path);
  CatKind k0 = c->classify();
  std::cout << "input:  " << kind_word(k0) << " (" << c->num_objects() << " objects, "
            << c->num_morphisms() - c->num_objects() << " non-identity morphisms)\n";
  if (k0 == CatKind::General) {
    std::cerr << "subdivide: '" << in_path
              << "' is a general category; only delta categories (and posets) subdivide\n";
    return 2;
  }
  std::string stem = fs::path(in_path).stem().string();
  Subdivision sd = subdivide(c);
  fs::path p1 = fs::path(out_dir) / (stem + "-sub.json");
  atomic_write_file(p1, category_to_json(*sd.prime).dump(2) + "\n");
  std::cout << "sub:    " << kind_word(sd.prime->classify()) << " (" << sd.prime->num_objects()
            << " objects, " << sd.prime->num_morphisms() - sd.prime->num_objects()
            << " non-identity morphisms) -> " << p1.string() << "\n";
  if (twice) {
    Subdivision sd2 = subdivide(sd.prime);
    fs::path p2 = fs::path(out_dir) / (stem + "-sub2.json");
    atomic_write_file(p2, category_to_json(*sd2.prime).dump(2) + "\n");
    std::cout << "sub^2:  " << kind_word(sd2.prime->classify()) << " ("
              << sd2.prime->num_objects() << " objects, "
              << sd2.prime->num_morphisms() - sd2.prime->num_objects()
              << " non-identity morphisms) -> " << p2.string() << "\n";
  }
  return 0;
}

// --------------------------------------------------------------------------
// hh

template <class F>
std::string render_hh_report(F fld, const std::string& instance, long max_degree,
                             const std::string& label, const HHResult& res) {
  Json j;
  j["check"] = "hh";
  j["instance"] = instance;
  j["parameters"] = {{"field", fld.name()}, {"max_degree", max_degree}};
  j["outcome"] = "pass";
  Json table = Json::array();
  for (long n = 0; n <= res.max_degree; ++n)
    table.push_back({{"label", label},
                     {"n", n},
                     {"dim", res.h[static_cast<size_t>(n)]},
                     {"exact", static_cast<bool>(res.h_exact[static_cast<size_t>(n)])}});
  j["table"] = std::move(table);
  std::ostringstream methods;
  for (size_t i = 0; i < res.method.size(); ++i) methods << (i ? "," : "") << res.method[i];
  j["witnesses"] = {{"flat dimension", static_cast<long>(res.cochain_dims.empty()
                                                             ? 0
                                                             : res.cochain_dims[0])},
                    {"rank methods", methods.str()}};
  return j.dump(2) + "\n";
}

template <class F>
int cmd_hh_for(F fld, const std::string& dia_path, const std::string& mod_path, long max_degree,
               const std::string& out_dir, bool no_cache) {
  LoadTrace trace;
  DiaPtr<F> dia = diagram_from_file(fld, dia_path, &trace);
  std::optional<DiagBimodule<F>> loaded;
  if (!mod_path.empty()) loaded = bimodule_from_file(fld, mod_path, dia, &trace);

  if (dia->base->classify() != CatKind::Poset) {
    std::cerr << "hh: the base category of '" << dia->name
              << "' is not a poset, so the diagram does not flatten; run 'cctlab subdivide' on "
                 "the base first\n";
    return 2;
  }

  std::string descriptor = "hh?field=" + fld.name() + "&max_degree=" + std::to_string(max_degree) +
                           "&inputs=" + sha256_hex(trace.bytes);
  std::string instance = sha256_hex(descriptor);
  std::string key = sha256_hex(std::string(CCTLAB_VERSION) + "|" + descriptor);
  std::string label = loaded ? dia->name + ":" + loaded->name : dia->name;

  auto t0 = std::chrono::steady_clock::now();
  std::string bytes;
  bool cached = false;
  if (!no_cache) {
    if (auto hit = cache_get(key)) {
      bytes = *hit;
      cached = true;
    }
  }
  if (!cached) {
    ShriekAlgebra<F> sa = shriek_algebra(dia, dia->name + "!");
    DiagBimodule<F> m = loaded ? *loaded : regular_diag_bimodule(dia);
    ShriekBimodule<F> sm = shriek_bimodule(sa, m, m.name + "!");
    HHResult res = hh_table(sa.alg, sm.mod, max_degree, budget_for<F>());
    bytes = render_hh_report(fld, instance, max_degree, label, res);
    if (!no_cache) cache_put(key, bytes);
  }
  double ms = elapsed_ms(t0);

  fs::path rpath = fs::path(out_dir) / ("hh-" + instance.substr(0, 12) + ".report.json");
  atomic_write_file(rpath, bytes);

  Json rep = Json::parse(bytes);
  std::cout << std::left << std::setw(28) << "LABEL" << std::setw(4) << "N"
            << "DIM H^N\n";
  bool all_exact = true;
  for (const auto& row : rep["table"]) {
    std::cout << std::left << std::setw(28) << row["label"].get<std::string>() << std::setw(4)
              << row["n"].get<long>() << row["dim"].get<long>();
    if (!row["exact"].get<bool>()) {
      std::cout << "  (upper bound)";
      all_exact = false;
    }
    std::cout << "\n";
  }
  if (!all_exact)
    std::cout << "note: some dimensions are modular upper bounds; rerun over a prime field for "
                 "exact values\n";
  std::cout << "report: " << rpath.string() << (cached ? " (cached, " : " (") << fmt_ms(ms)
            << ")\n";
  return 0;
}

int cmd_hh(const std::string& dia_path, const std::string& mod_path, const FieldChoice& fc,
           long max_degree, const std::string& out_dir, bool no_cache) {
  if (fc.mod == 0)
    return cmd_hh_for(RationalField{}, dia_path, mod_path, max_degree, out_dir, no_cache);
  return cmd_hh_for(PrimeField(static_cast<std::uint64_t>(fc.mod)), dia_path, mod_path, max_degree,
                    out_dir, no_cache);
}

// --------------------------------------------------------------------------
// check

template <class F>
CheckOutcome run_suite_for(F fld, const std::string& name, std::uint64_t seed, long max_degree,
                           bool mutate) {
  if (name == "prop21") return check_prop21(seed, mutate);
  if (name == "prop32") return check_prop32(fld, seed, mutate);
  if (name == "prop37") return check_prop37(fld, seed, mutate);
  if (name == "adjunction") return check_adjunction(fld, seed, mutate);
  if (name == "dstar-ff") return check_dstar_ff(fld, seed, mutate);
  if (name == "scct") return check_scct(fld, seed, mutate);
  if (name == "invariance") return check_invariance(fld, seed, mutate, max_degree, budget_for<F>());
  return check_gcct(fld, seed, mutate, max_degree, budget_for<F>());
}

CheckOutcome run_suite(const FieldChoice& fc, const std::string& name, std::uint64_t seed,
                       long max_degree, bool mutate) {
  if (fc.mod == 0) return run_suite_for(RationalField{}, name, seed, max_degree, mutate);
  return run_suite_for(PrimeField(static_cast<std::uint64_t>(fc.mod)), name, seed, max_degree,
                       mutate);
}

std::string render_check_report(const std::string& name, const std::string& instance,
                                const FieldChoice& fc, std::uint64_t seed, long max_degree,
                                bool mutate, const CheckOutcome& r) {
  Json j;
  j["check"] = name;
  j["instance"] = instance;
  j["parameters"] = {{"field", fc.name()},
                     {"seed", seed},
                     {"max_degree", max_degree},
                     {"mutated", mutate}};
  j["outcome"] = r.pass ? "pass" : "fail";
  if (!r.pass) j["failure"] = r.failure;
  Json w = Json::object();
  for (const auto& [k, v] : r.facts) w[k] = v;
  j["witnesses"] = std::move(w);
  return j.dump(2) + "\n";
}

int cmd_check(const std::vector<std::string>& names, const FieldChoice& fc, std::uint64_t seed,
              long max_degree, bool mutate, const std::string& out_dir, bool no_cache) {
  std::vector<std::string> todo;
  for (const auto& n : names) {
    if (n == "all") {
      todo = kCheckNames;
      break;
    }
    if (std::find(kCheckNames.begin(), kCheckNames.end(), n) == kCheckNames.end()) {
      std::cerr << "unknown check '" << n << "'; expected all";
      for (const auto& k : kCheckNames) std::cerr << ", " << k;
      std::cerr << "\n";
      return 2;
    }
    todo.push_back(n);
  }

  long failures = 0;
  std::cout << std::left << std::setw(13) << "CHECK" << std::setw(9) << "OUTCOME" << std::setw(11)
            << "TIME"
            << "REPORT\n";
  for (const auto& name : todo) {
    std::string descriptor = "check:" + name + "?field=" + fc.name() +
                             "&seed=" + std::to_string(seed) +
                             "&max_degree=" + std::to_string(max_degree) +
                             "&mutated=" + (mutate ? "1" : "0");
    std::string instance = sha256_hex(descriptor);
    std::string key = sha256_hex(std::string(CCTLAB_VERSION) + "|" + descriptor);

    auto t0 = std::chrono::steady_clock::now();
    std::string bytes;
    bool cached = false;
    if (!no_cache) {
      if (auto hit = cache_get(key)) {
        bytes = *hit;
        cached = true;
      }
    }
    if (!cached) {
      CheckOutcome r = run_suite(fc, name, seed, max_degree, mutate);
      bytes = render_check_report(name, instance, fc, seed, max_degree, mutate, r);
      if (!no_cache) cache_put(key, bytes);
    }
    double ms = elapsed_ms(t0);
    bool pass = Json::parse(bytes).at("outcome").get<std::string>() == "pass";
    if (!pass) ++failures;

    fs::path rpath = fs::path(out_dir) / (name + "-" + instance.substr(0, 12) + ".report.json");
    atomic_write_file(rpath, bytes);
    std::cout << std::left << std::setw(13) << name << std::setw(9) << (pass ? "pass" : "FAIL")
              << std::setw(11) << fmt_ms(ms) << rpath.string() << (cached ? " (cached)" : "")
              << "\n";
  }
  if (failures == 0) {
    std::cout << "all " << todo.size() << " checks passed\n";
    return 0;
  }
  std::cout << failures << " of " << todo.size() << " checks failed\n";
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"homological algebra over finite categories: validate, subdivide, hh, check"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CCTLAB_VERSION);

  FieldChoice fc;
  std::string out_dir = ".";
  bool no_cache = false;
  std::uint64_t seed = 2026;
  long max_degree_check = 3;
  long max_degree_hh = 2;
  bool twice = false;
  bool mutate = false;
  std::vector<std::string> files;
  std::string cat_file;
  std::string dia_file;
  std::string mod_file;
  std::vector<std::string> names;

  auto add_mod = [&](CLI::App* cmd) {
    cmd->add_option("--mod", fc.mod, "work over the prime field F_p instead of the rationals")
        ->check(CLI::Range(2l, 2147483647l));
  };

  CLI::App* val = app.add_subcommand("validate", "parse bundle files and report what they hold");
  val->add_option("files", files, "bundle files (category, algebra, diagram, or bimodule)")
      ->required()
      ->expected(-1);
  add_mod(val);

  CLI::App* sub = app.add_subcommand("subdivide", "write the subdivided category");
  sub->add_option("category", cat_file, "category file")->required();
  sub->add_flag("--twice", twice, "also write the double subdivision");
  sub->add_option("--out", out_dir, "output directory (default: current directory)");

  CLI::App* hh = app.add_subcommand(
      "hh", "cohomology table of the flattened diagram, coefficients in a flattened bimodule");
  hh->add_option("diagram", dia_file, "diagram bundle (base must be a poset)")->required();
  hh->add_option("bimodule", mod_file,
                 "bimodule bundle (default: the diagram acting on itself)");
  hh->add_option("--max-degree", max_degree_hh, "top degree of the table (default 2)")
      ->check(CLI::Range(0l, 8l));
  add_mod(hh);
  hh->add_option("--out", out_dir, "report directory (default: current directory)");
  hh->add_flag("--no-cache", no_cache, "recompute; do not read or write the report cache");

  CLI::App* chk = app.add_subcommand("check", "run verification suites and write reports");
  chk->add_option("names", names,
                  "prop21, prop32, prop37, adjunction, dstar-ff, scct, invariance, gcct, or all")
      ->required()
      ->expected(-1);
  chk->add_option("--seed", seed, "base seed for randomized instances (default 2026)");
  chk->add_option("--max-degree", max_degree_check,
                  "top degree for invariance and gcct (default 3)")
      ->check(CLI::Range(0l, 8l));
  add_mod(chk);
  chk->add_option("--out", out_dir, "report directory (default: current directory)");
  chk->add_flag("--no-cache", no_cache, "recompute; do not read or write the report cache");
  chk->add_flag("--mutate", mutate,
                "run each suite against a planted defect; the suite is expected to fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(val)) return cmd_validate(files, fc);
    if (app.got_subcommand(sub)) return cmd_subdivide(cat_file, twice, out_dir);
    if (app.got_subcommand(hh))
      return cmd_hh(dia_file, mod_file, fc, max_degree_hh, out_dir, no_cache);
    return cmd_check(names, fc, seed, max_degree_check, mutate, out_dir, no_cache);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("cctlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace cctlab
