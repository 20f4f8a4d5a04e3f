#pragma once

// JSON bundle files: categories, algebras, diagrams of algebras, and diagram
// bimodules. Scalars are integers or "p/q" strings; matrices are row-major
// arrays of rows whose row/column order is pinned by the basis lists of the
// spaces they connect. Every bundle carries a "kind" field for dispatch.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cctlab/algkit.hpp"
#include "cctlab/diagram.hpp"
#include "cctlab/fincat.hpp"
#include "cctlab/mat.hpp"

namespace cctlab {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& w) : std::runtime_error(w) {}
};

using Json = nlohmann::ordered_json;

// Accumulates the raw bytes of every file a bundle load touches, in load
// order, so reports can carry a content hash of the full input closure.
struct LoadTrace {
  std::string bytes;

  void add(const std::string& file_bytes) {
    bytes += file_bytes;
    bytes += '\0';
  }
};

inline Json load_json_file(const std::filesystem::path& path, LoadTrace* trace = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (trace) trace->add(raw);
  try {
    return Json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

namespace detail {

inline const Json& need(const Json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw IoError(ctx + ": missing field '" + key + "'");
  return *it;
}

inline long need_count(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = need(j, key, ctx);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw IoError(ctx + ": field '" + key + "' must be a nonnegative integer");
  return static_cast<long>(v.get<long long>());
}

inline std::vector<std::string> string_list(const Json& j, const std::string& ctx) {
  if (!j.is_array()) throw IoError(ctx + ": expected a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw IoError(ctx + ": expected a list of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

}  // namespace detail

template <class F>
typename F::Elem scalar_from_json(const F& fld, const Json& j, const std::string& ctx) {
  if (j.is_number_integer()) return fld.from_long(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    try {
      size_t slash = s.find('/');
      if (slash == std::string::npos)
        return fld.from_long(static_cast<long>(std::stoll(s)));
      long long num = std::stoll(s.substr(0, slash));
      long long den = std::stoll(s.substr(slash + 1));
      typename F::Elem d = fld.from_long(static_cast<long>(den));
      if (fld.is_zero(d)) throw IoError(ctx + ": denominator vanishes in " + fld.name());
      return fld.div(fld.from_long(static_cast<long>(num)), d);
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
  }
  throw IoError(ctx + ": expected an integer or a \"p/q\" string");
}

template <class F>
Json scalar_to_json(const F& fld, const typename F::Elem& e) {
  std::string s = fld.str(e);
  if (s.find('/') == std::string::npos) {
    try {
      size_t pos = 0;
      long long v = std::stoll(s, &pos);
      if (pos == s.size()) return Json(v);
    } catch (const std::out_of_range&) {
    }
  }
  return Json(s);
}

template <class F>
Mat<F> matrix_from_json(const F& fld, const Json& j, long rows, long cols,
                        const std::string& ctx) {
  if (!j.is_array() || static_cast<long>(j.size()) != rows)
    throw IoError(ctx + ": expected " + std::to_string(rows) + " rows, got " +
                  (j.is_array() ? std::to_string(j.size()) : std::string("a non-list")));
  Mat<F> m(fld, rows, cols);
  for (long r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<long>(row.size()) != cols)
      throw IoError(ctx + ": row " + std::to_string(r) + " must have " + std::to_string(cols) +
                    " entries");
    for (long c = 0; c < cols; ++c)
      m.at(r, c) = scalar_from_json(fld, row[static_cast<size_t>(c)],
                                    ctx + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

template <class F>
Json matrix_to_json(const Mat<F>& m) {
  Json rows = Json::array();
  for (long r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m.field(), m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// categories

inline CatPtr category_from_json(const Json& j, const std::string& ctx = "category") {
  std::vector<std::string> objects = detail::string_list(detail::need(j, "objects", ctx), ctx + ".objects");
  auto object_index = [&](const Json& v, const std::string& where) -> int {
    if (v.is_number_integer()) {
      long long o = v.get<long long>();
      if (o < 0 || o >= static_cast<long long>(objects.size()))
        throw IoError(where + ": object index " + std::to_string(o) + " out of range");
      return static_cast<int>(o);
    }
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      for (size_t i = 0; i < objects.size(); ++i)
        if (objects[i] == s) return static_cast<int>(i);
      throw IoError(where + ": unknown object '" + s + "'");
    }
    throw IoError(where + ": object must be a name or an index");
  };

  if (j.contains("relations")) {
    std::vector<std::pair<int, int>> rel;
    for (const auto& r : j["relations"]) {
      if (!r.is_array() || r.size() != 2) throw IoError(ctx + ".relations: each entry is a pair");
      rel.emplace_back(object_index(r[0], ctx + ".relations"),
                       object_index(r[1], ctx + ".relations"));
    }
    FinCat c = FinCat::poset_from_relations(objects, rel);
    c.validate();
    return std::make_shared<const FinCat>(std::move(c));
  }

  std::vector<MorData> mors;
  std::vector<MorId> ids;
  std::map<std::string, MorId> by_name;
  for (size_t o = 0; o < objects.size(); ++o) {
    ids.push_back(static_cast<MorId>(mors.size()));
    by_name["id_" + objects[o]] = static_cast<MorId>(mors.size());
    mors.push_back({"id_" + objects[o], static_cast<ObjId>(o), static_cast<ObjId>(o)});
  }
  for (const auto& m : detail::need(j, "morphisms", ctx)) {
    std::string name = detail::need(m, "name", ctx + ".morphisms").get<std::string>();
    if (by_name.count(name)) throw IoError(ctx + ": duplicate or reserved morphism name '" + name + "'");
    by_name[name] = static_cast<MorId>(mors.size());
    mors.push_back({name, object_index(detail::need(m, "dom", ctx + ".morphisms"), ctx),
                    object_index(detail::need(m, "cod", ctx + ".morphisms"), ctx)});
  }
  auto morphism_id = [&](const Json& v, const std::string& where) -> MorId {
    if (!v.is_string()) throw IoError(where + ": morphism reference must be a name");
    auto it = by_name.find(v.get<std::string>());
    if (it == by_name.end()) throw IoError(where + ": unknown morphism '" + v.get<std::string>() + "'");
    return it->second;
  };
  std::map<std::pair<MorId, MorId>, MorId> given;
  if (j.contains("compose"))
    for (const auto& e : j["compose"]) {
      MorId g = morphism_id(detail::need(e, "g", ctx + ".compose"), ctx + ".compose");
      MorId f = morphism_id(detail::need(e, "f", ctx + ".compose"), ctx + ".compose");
      if (mors[static_cast<size_t>(f)].cod != mors[static_cast<size_t>(g)].dom)
        throw IoError(ctx + ": compose(" + mors[static_cast<size_t>(g)].name + ", " +
                      mors[static_cast<size_t>(f)].name + ") is not composable");
      given[{g, f}] = morphism_id(detail::need(e, "result", ctx + ".compose"), ctx + ".compose");
    }
  std::map<std::pair<MorId, MorId>, MorId> table;
  for (MorId g = 0; g < static_cast<MorId>(mors.size()); ++g)
    for (MorId f = 0; f < static_cast<MorId>(mors.size()); ++f) {
      if (mors[static_cast<size_t>(f)].cod != mors[static_cast<size_t>(g)].dom) continue;
      bool gid = ids[static_cast<size_t>(mors[static_cast<size_t>(g)].dom)] == g;
      bool fid = ids[static_cast<size_t>(mors[static_cast<size_t>(f)].dom)] == f;
      if (gid)
        table[{g, f}] = f;
      else if (fid)
        table[{g, f}] = g;
      else {
        auto it = given.find({g, f});
        if (it == given.end())
          throw IoError(ctx + ": incomplete table: compose(" + mors[static_cast<size_t>(g)].name +
                        ", " + mors[static_cast<size_t>(f)].name + ") is missing");
        table[{g, f}] = it->second;
      }
    }
  FinCat c(std::move(objects), std::move(mors), std::move(ids), table);
  c.validate();
  return std::make_shared<const FinCat>(std::move(c));
}

inline Json category_to_json(const FinCat& c) {
  Json j;
  j["kind"] = "category";
  Json objs = Json::array();
  for (ObjId o = 0; o < c.num_objects(); ++o) objs.push_back(c.obj_name(o));
  j["objects"] = std::move(objs);
  if (c.classify() == CatKind::Poset) {
    Json rel = Json::array();
    for (ObjId a = 0; a < c.num_objects(); ++a)
      for (ObjId b = 0; b < c.num_objects(); ++b)
        if (a != b && !c.hom(a, b).empty()) rel.push_back(Json::array({a, b}));
    j["relations"] = std::move(rel);
    return j;
  }
  Json mors = Json::array();
  for (MorId m = 0; m < c.num_morphisms(); ++m)
    if (!c.is_identity(m))
      mors.push_back({{"name", c.mor(m).name},
                      {"dom", c.obj_name(c.dom(m))},
                      {"cod", c.obj_name(c.cod(m))}});
  j["morphisms"] = std::move(mors);
  Json comp = Json::array();
  for (MorId g = 0; g < c.num_morphisms(); ++g) {
    if (c.is_identity(g)) continue;
    for (MorId f = 0; f < c.num_morphisms(); ++f) {
      if (c.is_identity(f) || !c.composable(g, f)) continue;
      comp.push_back({{"g", c.mor(g).name},
                      {"f", c.mor(f).name},
                      {"result", c.mor(c.compose(g, f)).name}});
    }
  }
  j["compose"] = std::move(comp);
  return j;
}

// ---------------------------------------------------------------------------
// algebras

template <class F>
void check_field_tag(const F& fld, const Json& j, const std::string& ctx) {
  std::string tag = j.value("field", "Q");
  if (tag != "Q" && tag != fld.name())
    throw IoError(ctx + ": file is over " + tag + " but the session field is " + fld.name());
}

template <class F>
AlgPtr<F> algebra_from_json(F fld, const Json& j, std::string name) {
  check_field_tag(fld, j, name);
  long dim = detail::need_count(j, "dim", name);
  std::vector<std::string> basis;
  if (j.contains("basis"))
    basis = detail::string_list(j["basis"], name + ".basis");
  else
    for (long i = 0; i < dim; ++i) basis.push_back("e" + std::to_string(i));
  if (static_cast<long>(basis.size()) != dim)
    throw IoError(name + ": basis list has " + std::to_string(basis.size()) + " names for dim " +
                  std::to_string(dim));
  const Json& ju = detail::need(j, "unit", name);
  if (!ju.is_array() || static_cast<long>(ju.size()) != dim)
    throw IoError(name + ": unit must list " + std::to_string(dim) + " coordinates");
  std::vector<typename F::Elem> unit;
  for (long i = 0; i < dim; ++i)
    unit.push_back(scalar_from_json(fld, ju[static_cast<size_t>(i)], name + ".unit"));

  Algebra<F> a;
  a.fld = fld;
  a.name = std::move(name);
  a.dim = dim;
  a.basis_names = std::move(basis);
  a.unit = std::move(unit);
  a.product.assign(static_cast<size_t>(dim),
                   std::vector<std::vector<typename Algebra<F>::Term>>(static_cast<size_t>(dim)));
  for (const auto& e : detail::need(j, "mul", a.name)) {
    long i = detail::need_count(e, "i", a.name + ".mul");
    long jj = detail::need_count(e, "j", a.name + ".mul");
    if (i >= dim || jj >= dim)
      throw IoError(a.name + ".mul: basis index out of range in (" + std::to_string(i) + ", " +
                    std::to_string(jj) + ")");
    const Json& co = detail::need(e, "coeffs", a.name + ".mul");
    if (!co.is_array() || static_cast<long>(co.size()) != dim)
      throw IoError(a.name + ".mul: coeffs must list " + std::to_string(dim) + " coordinates");
    std::vector<typename Algebra<F>::Term> terms;
    for (long t = 0; t < dim; ++t) {
      typename F::Elem v = scalar_from_json(fld, co[static_cast<size_t>(t)], a.name + ".mul");
      if (!fld.is_zero(v)) terms.emplace_back(t, v);
    }
    a.product[static_cast<size_t>(i)][static_cast<size_t>(jj)] = std::move(terms);
  }
  a.validate();
  return std::make_shared<const Algebra<F>>(std::move(a));
}

template <class F>
Json algebra_to_json(const Algebra<F>& a) {
  Json j;
  j["kind"] = "algebra";
  j["field"] = a.fld.name();
  j["dim"] = a.dim;
  j["basis"] = a.basis_names;
  Json unit = Json::array();
  for (long i = 0; i < a.dim; ++i) unit.push_back(scalar_to_json(a.fld, a.unit[static_cast<size_t>(i)]));
  j["unit"] = std::move(unit);
  Json mul = Json::array();
  for (long i = 0; i < a.dim; ++i)
    for (long jj = 0; jj < a.dim; ++jj) {
      const auto& terms = a.prod(i, jj);
      if (terms.empty()) continue;
      std::vector<typename F::Elem> dense(static_cast<size_t>(a.dim), a.fld.zero());
      for (const auto& [k, v] : terms)
        dense[static_cast<size_t>(k)] = a.fld.add(dense[static_cast<size_t>(k)], v);
      Json co = Json::array();
      for (long t = 0; t < a.dim; ++t) co.push_back(scalar_to_json(a.fld, dense[static_cast<size_t>(t)]));
      mul.push_back({{"i", i}, {"j", jj}, {"coeffs", std::move(co)}});
    }
  j["mul"] = std::move(mul);
  return j;
}

// ---------------------------------------------------------------------------
// diagram bundles (category by reference, algebras by reference, homs inline)

template <class F>
DiaPtr<F> diagram_from_json(F fld, const Json& j, const std::filesystem::path& dir,
                            std::string name, LoadTrace* trace = nullptr) {
  check_field_tag(fld, j, name);
  std::filesystem::path cat_path = dir / detail::need(j, "category", name).get<std::string>();
  CatPtr base = category_from_json(load_json_file(cat_path, trace), cat_path.string());
  const Json& paths = detail::need(j, "algebras", name);
  if (!paths.is_array() || static_cast<long>(paths.size()) != base->num_objects())
    throw IoError(name + ": 'algebras' must list one file per object (" +
                  std::to_string(base->num_objects()) + ")");
  Diagram<F> d;
  d.fld = fld;
  d.name = j.value("name", name);
  d.base = base;
  for (ObjId o = 0; o < base->num_objects(); ++o) {
    std::filesystem::path ap = dir / paths[static_cast<size_t>(o)].get<std::string>();
    d.alg.push_back(algebra_from_json(fld, load_json_file(ap, trace), ap.string()));
  }
  std::map<std::string, Json> homs;
  for (const auto& e : detail::need(j, "homs", name))
    homs[detail::need(e, "mor", name + ".homs").get<std::string>()] =
        detail::need(e, "matrix", name + ".homs");
  for (MorId v = 0; v < base->num_morphisms(); ++v) {
    long rows = d.alg[static_cast<size_t>(base->dom(v))]->dim;
    long cols = d.alg[static_cast<size_t>(base->cod(v))]->dim;
    if (base->is_identity(v)) {
      d.hom.push_back(Mat<F>::identity(fld, rows));
      continue;
    }
    auto it = homs.find(base->mor(v).name);
    if (it == homs.end())
      throw IoError(name + ": missing hom matrix for morphism '" + base->mor(v).name + "'");
    d.hom.push_back(matrix_from_json(fld, it->second, rows, cols,
                                     name + ".homs['" + base->mor(v).name + "']"));
    homs.erase(it);
  }
  if (!homs.empty())
    throw IoError(name + ": hom matrix for unknown morphism '" + homs.begin()->first + "'");
  d.validate();
  return std::make_shared<const Diagram<F>>(std::move(d));
}

template <class F>
DiaPtr<F> diagram_from_file(F fld, const std::filesystem::path& path, LoadTrace* trace = nullptr) {
  return diagram_from_json(fld, load_json_file(path, trace), path.parent_path(), path.string(),
                           trace);
}

// ---------------------------------------------------------------------------
// diagram bimodule bundles (spaces, action tensors, transition matrices)

template <class F>
DiagBimodule<F> bimodule_from_json(F fld, const Json& j, const DiaPtr<F>& dia, std::string name) {
  check_field_tag(fld, j, name);
  const FinCat& c = *dia->base;
  std::vector<long> dims(static_cast<size_t>(c.num_objects()), -1);
  auto object_of = [&](const Json& e, const std::string& where) -> ObjId {
    std::string o = detail::need(e, "object", where).get<std::string>();
    auto idx = c.object_by_name(o);
    if (!idx) throw IoError(where + ": unknown object '" + o + "'");
    return *idx;
  };
  for (const auto& e : detail::need(j, "spaces", name)) {
    ObjId o = object_of(e, name + ".spaces");
    dims[static_cast<size_t>(o)] = detail::need_count(e, "dim", name + ".spaces");
  }
  for (ObjId o = 0; o < c.num_objects(); ++o)
    if (dims[static_cast<size_t>(o)] < 0)
      throw IoError(name + ": no space given for object '" + c.obj_name(o) + "'");

  auto actions = [&](const char* key) {
    std::vector<std::vector<Mat<F>>> act(static_cast<size_t>(c.num_objects()));
    for (const auto& e : detail::need(j, key, name)) {
      ObjId o = object_of(e, name + "." + key);
      long dim = dims[static_cast<size_t>(o)];
      long adim = dia->alg[static_cast<size_t>(o)]->dim;
      const Json& ms = detail::need(e, "matrices", name + "." + key);
      if (!ms.is_array() || static_cast<long>(ms.size()) != adim)
        throw IoError(name + "." + key + ": object '" + c.obj_name(o) + "' needs one matrix per " +
                      "algebra basis element (" + std::to_string(adim) + ")");
      for (long b = 0; b < adim; ++b)
        act[static_cast<size_t>(o)].push_back(matrix_from_json(
            fld, ms[static_cast<size_t>(b)], dim, dim,
            name + "." + key + "['" + c.obj_name(o) + "'][" + std::to_string(b) + "]"));
    }
    for (ObjId o = 0; o < c.num_objects(); ++o)
      if (act[static_cast<size_t>(o)].empty() && dia->alg[static_cast<size_t>(o)]->dim > 0)
        throw IoError(name + ": no " + key + " action for object '" + c.obj_name(o) + "'");
    return act;
  };
  std::vector<std::vector<Mat<F>>> left = actions("left");
  std::vector<std::vector<Mat<F>>> right = actions("right");

  DiagBimodule<F> m;
  m.fld = fld;
  m.name = j.value("name", name);
  m.dia = dia;
  for (ObjId o = 0; o < c.num_objects(); ++o) {
    Bimodule<F> b{fld,
                  m.name + "@" + c.obj_name(o),
                  dia->alg[static_cast<size_t>(o)],
                  dims[static_cast<size_t>(o)],
                  std::move(left[static_cast<size_t>(o)]),
                  std::move(right[static_cast<size_t>(o)])};
    m.mod.push_back(std::move(b));
  }
  std::map<std::string, Json> trs;
  for (const auto& e : detail::need(j, "transitions", name))
    trs[detail::need(e, "mor", name + ".transitions").get<std::string>()] =
        detail::need(e, "matrix", name + ".transitions");
  for (MorId v = 0; v < c.num_morphisms(); ++v) {
    long rows = dims[static_cast<size_t>(c.dom(v))];
    long cols = dims[static_cast<size_t>(c.cod(v))];
    if (c.is_identity(v)) {
      m.tr.push_back(Mat<F>::identity(fld, rows));
      continue;
    }
    auto it = trs.find(c.mor(v).name);
    if (it == trs.end())
      throw IoError(name + ": missing transition matrix for morphism '" + c.mor(v).name + "'");
    m.tr.push_back(matrix_from_json(fld, it->second, rows, cols,
                                    name + ".transitions['" + c.mor(v).name + "']"));
    trs.erase(it);
  }
  if (!trs.empty())
    throw IoError(name + ": transition for unknown morphism '" + trs.begin()->first + "'");
  m.validate();
  return m;
}

template <class F>
DiagBimodule<F> bimodule_from_file(F fld, const std::filesystem::path& path, const DiaPtr<F>& dia,
                                   LoadTrace* trace = nullptr) {
  return bimodule_from_json(fld, load_json_file(path, trace), dia, path.string());
}

// resolves the bundle's own "diagram" reference
template <class F>
DiagBimodule<F> bimodule_from_file(F fld, const std::filesystem::path& path,
                                   LoadTrace* trace = nullptr) {
  Json j = load_json_file(path, trace);
  std::filesystem::path dp =
      path.parent_path() / detail::need(j, "diagram", path.string()).get<std::string>();
  DiaPtr<F> dia = diagram_from_file(fld, dp, trace);
  return bimodule_from_json(fld, j, dia, path.string());
}

}  // namespace cctlab
