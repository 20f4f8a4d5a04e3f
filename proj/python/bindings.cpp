#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "cctlab/checks.hpp"
#include "cctlab/hh.hpp"
#include "cctlab/io.hpp"
#include "cctlab/shriek.hpp"
#include "cctlab/version.hpp"

namespace py = pybind11;
using namespace cctlab;

namespace {

template <class F>
py::dict validate_for(F fld, const std::string& path) {
  Json j = load_json_file(path);
  std::string kind = j.contains("kind") && j["kind"].is_string()
                         ? j["kind"].get<std::string>()
                         : (j.contains("objects")    ? "category"
                            : j.contains("mul")      ? "algebra"
                            : j.contains("algebras") ? "diagram"
                            : j.contains("spaces")   ? "bimodule"
                                                     : "");
  py::dict out;
  out["kind"] = kind;
  if (kind == "category") {
    CatPtr c = category_from_json(j, path);
    out["objects"] = c->num_objects();
    out["morphisms"] = c->num_morphisms() - c->num_objects();
    out["classify"] = c->classify() == CatKind::Poset   ? "poset"
                      : c->classify() == CatKind::Delta ? "delta"
                                                        : "general";
  } else if (kind == "algebra") {
    auto a = algebra_from_json(fld, j, path);
    out["dim"] = a->dim;
    out["field"] = fld.name();
  } else if (kind == "diagram") {
    auto d = diagram_from_json(fld, j, std::filesystem::path(path).parent_path(), path);
    out["name"] = d->name;
    std::vector<long> dims;
    for (ObjId o = 0; o < d->base->num_objects(); ++o) dims.push_back(d->at(o).dim);
    out["algebra_dims"] = dims;
    out["poset_base"] = d->base->classify() == CatKind::Poset;
  } else if (kind == "bimodule") {
    auto m = bimodule_from_file(fld, path);
    out["name"] = m.name;
    out["diagram"] = m.dia->name;
    std::vector<long> dims;
    for (ObjId o = 0; o < m.dia->base->num_objects(); ++o) dims.push_back(m.dim_at(o));
    out["dims"] = dims;
  } else {
    throw IoError(path + ": cannot determine file kind");
  }
  return out;
}

py::dict validate_file(const std::string& path, long mod) {
  if (mod == 0) return validate_for(RationalField{}, path);
  return validate_for(PrimeField(static_cast<std::uint64_t>(mod)), path);
}

std::string subdivide_category(const std::string& category_json) {
  CatPtr c = category_from_json(Json::parse(category_json), "category");
  if (c->classify() == CatKind::General)
    throw IoError("general categories do not subdivide; only one-way (delta) categories do");
  Subdivision sd = subdivide(c);
  return category_to_json(*sd.prime).dump(2);
}

template <class F>
py::dict hh_for(F fld, const std::string& diagram_path, const std::string& bimodule_path,
                long max_degree) {
  DiaPtr<F> dia = diagram_from_file(fld, diagram_path);
  if (dia->base->classify() != CatKind::Poset)
    throw IoError(dia->name + ": the base category is not a poset; subdivide it first");
  ShriekAlgebra<F> sa = shriek_algebra(dia, dia->name + "!");
  DiagBimodule<F> m = bimodule_path.empty() ? regular_diag_bimodule(dia)
                                            : bimodule_from_file(fld, bimodule_path, dia);
  ShriekBimodule<F> sm = shriek_bimodule(sa, m, m.name + "!");
  HHResult res = hh_table(sa.alg, sm.mod, max_degree, RankBudget{});
  py::dict out;
  out["label"] = bimodule_path.empty() ? dia->name : dia->name + ":" + m.name;
  out["flat_dim"] = sa.alg->dim;
  py::list table;
  for (long n = 0; n <= res.max_degree; ++n) {
    py::dict row;
    row["n"] = n;
    row["dim"] = res.h[static_cast<size_t>(n)];
    row["exact"] = static_cast<bool>(res.h_exact[static_cast<size_t>(n)]);
    table.append(row);
  }
  out["table"] = table;
  return out;
}

py::dict hh_table_py(const std::string& diagram_path, const std::string& bimodule_path,
                     long max_degree, long mod) {
  if (mod == 0) return hh_for(RationalField{}, diagram_path, bimodule_path, max_degree);
  return hh_for(PrimeField(static_cast<std::uint64_t>(mod)), diagram_path, bimodule_path,
                max_degree);
}

template <class F>
CheckOutcome run_for(F fld, const std::string& name, std::uint64_t seed, long max_degree,
                     bool mutate) {
  if (name == "prop21") return check_prop21(seed, mutate);
  if (name == "prop32") return check_prop32(fld, seed, mutate);
  if (name == "prop37") return check_prop37(fld, seed, mutate);
  if (name == "adjunction") return check_adjunction(fld, seed, mutate);
  if (name == "dstar-ff") return check_dstar_ff(fld, seed, mutate);
  if (name == "scct") return check_scct(fld, seed, mutate);
  if (name == "invariance") return check_invariance(fld, seed, mutate, max_degree);
  if (name == "gcct") return check_gcct(fld, seed, mutate, max_degree);
  throw std::invalid_argument("unknown check '" + name +
                              "'; expected prop21, prop32, prop37, adjunction, dstar-ff, scct, "
                              "invariance, or gcct");
}

py::dict run_check(const std::string& name, std::uint64_t seed, long max_degree, long mod,
                   bool mutate) {
  CheckOutcome r = mod == 0
                       ? run_for(RationalField{}, name, seed, max_degree, mutate)
                       : run_for(PrimeField(static_cast<std::uint64_t>(mod)), name, seed,
                                 max_degree, mutate);
  py::dict out;
  out["check"] = r.check;
  out["seed"] = r.seed;
  out["mutated"] = r.mutated;
  out["outcome"] = r.pass ? "pass" : "fail";
  if (!r.pass) out["failure"] = r.failure;
  py::dict w;
  for (const auto& [k, v] : r.facts) w[py::str(k)] = v;
  out["witnesses"] = w;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "homological algebra over finite categories";

  m.def("version", [] { return std::string(CCTLAB_VERSION); });
  m.def("validate_file", &validate_file, py::arg("path"), py::arg("mod") = 0,
        "Parse a bundle file and summarize what it holds.");
  m.def("subdivide_category", &subdivide_category, py::arg("category_json"),
        "Subdivide a category given as a JSON string; returns the result as JSON.");
  m.def("hh_table", &hh_table_py, py::arg("diagram_path"), py::arg("bimodule_path") = "",
        py::arg("max_degree") = 2, py::arg("mod") = 0,
        "Cohomology table of the flattened diagram with flattened coefficients.");
  m.def("run_check", &run_check, py::arg("name"), py::arg("seed") = 2026,
        py::arg("max_degree") = 3, py::arg("mod") = 0, py::arg("mutate") = false,
        "Run one verification suite and return its outcome with witnesses.");

  py::register_exception<IoError>(m, "IoError", PyExc_ValueError);
}
