#include "cctlab/fincat.hpp"

#include <algorithm>
#include <set>

namespace cctlab {

std::string to_string(CatKind k) {
  switch (k) {
    case CatKind::General: return "general";
    case CatKind::Delta: return "delta";
    case CatKind::Poset: return "poset";
  }
  return "?";
}

FinCat::FinCat(std::vector<std::string> objects, std::vector<MorData> morphisms,
               std::vector<MorId> identity,
               const std::map<std::pair<MorId, MorId>, MorId>& table)
    : objects_(std::move(objects)), mors_(std::move(morphisms)), identity_(std::move(identity)) {
  const size_t m = mors_.size();
  table_.assign(m * m, -1);
  for (const auto& [gf, r] : table) {
    auto [g, f] = gf;
    if (g < 0 || f < 0 || g >= static_cast<MorId>(m) || f >= static_cast<MorId>(m))
      throw CategoryError("composition table references unknown morphism");
    table_[static_cast<size_t>(g) * m + static_cast<size_t>(f)] = r;
  }
}

long FinCat::num_non_identity() const {
  long n = 0;
  for (MorId m = 0; m < num_morphisms(); ++m)
    if (!is_identity(m)) ++n;
  return n;
}

MorId FinCat::compose(MorId g, MorId f) const {
  if (!composable(g, f))
    throw CategoryError("compose(" + mor(g).name + ", " + mor(f).name + "): not composable");
  MorId r = table_at(g, f);
  if (r < 0)
    throw CategoryError("incomplete table: missing compose(" + mor(g).name + ", " + mor(f).name + ")");
  return r;
}

std::vector<MorId> FinCat::hom(ObjId a, ObjId b) const {
  std::vector<MorId> r;
  for (MorId m = 0; m < num_morphisms(); ++m)
    if (dom(m) == a && cod(m) == b) r.push_back(m);
  return r;
}

std::optional<ObjId> FinCat::object_by_name(const std::string& n) const {
  for (ObjId o = 0; o < num_objects(); ++o)
    if (objects_[static_cast<size_t>(o)] == n) return o;
  return std::nullopt;
}

std::optional<MorId> FinCat::morphism_by_name(const std::string& n) const {
  for (MorId m = 0; m < num_morphisms(); ++m)
    if (mors_[static_cast<size_t>(m)].name == n) return m;
  return std::nullopt;
}

void FinCat::validate() const {
  const long nm = num_morphisms();
  {
    std::set<std::string> seen;
    for (const auto& o : objects_)
      if (!seen.insert(o).second) throw CategoryError("duplicate object name: " + o);
    seen.clear();
    for (const auto& m : mors_)
      if (!seen.insert(m.name).second) throw CategoryError("duplicate morphism name: " + m.name);
  }
  for (const auto& m : mors_)
    if (m.dom < 0 || m.cod < 0 || m.dom >= num_objects() || m.cod >= num_objects())
      throw CategoryError("morphism " + m.name + " has an unknown endpoint");
  if (static_cast<long>(identity_.size()) != num_objects())
    throw CategoryError("identity table size mismatch");
  for (ObjId o = 0; o < num_objects(); ++o) {
    MorId id = identity_[static_cast<size_t>(o)];
    if (id < 0 || id >= nm || dom(id) != o || cod(id) != o)
      throw CategoryError("object " + obj_name(o) + " lacks a valid identity");
  }
  // totality and closure of the table
  for (MorId g = 0; g < nm; ++g)
    for (MorId f = 0; f < nm; ++f) {
      MorId r = table_at(g, f);
      if (!composable(g, f)) {
        if (r >= 0)
          throw CategoryError("table defines compose(" + mor(g).name + ", " + mor(f).name +
                              ") although cod/dom do not match");
        continue;
      }
      if (r < 0)
        throw CategoryError("incomplete table: missing compose(" + mor(g).name + ", " + mor(f).name + ")");
      if (r >= nm) throw CategoryError("table entry out of range");
      if (dom(r) != dom(f) || cod(r) != cod(g))
        throw CategoryError("compose(" + mor(g).name + ", " + mor(f).name +
                            ") has wrong endpoints: got " + mor(r).name);
    }
  // identity laws
  for (MorId f = 0; f < nm; ++f) {
    if (table_at(f, identity_[static_cast<size_t>(dom(f))]) != f)
      throw CategoryError("identity law fails: " + mor(f).name + " o id != " + mor(f).name);
    if (table_at(identity_[static_cast<size_t>(cod(f))], f) != f)
      throw CategoryError("identity law fails: id o " + mor(f).name + " != " + mor(f).name);
  }
  // associativity
  for (MorId h = 0; h < nm; ++h)
    for (MorId g = 0; g < nm; ++g) {
      if (!composable(h, g)) continue;
      MorId hg = table_at(h, g);
      for (MorId f = 0; f < nm; ++f) {
        if (!composable(g, f)) continue;
        if (table_at(h, table_at(g, f)) != table_at(hg, f))
          throw CategoryError("associativity fails on (" + mor(h).name + ", " + mor(g).name + ", " +
                              mor(f).name + ")");
      }
    }
}

CatKind FinCat::classify() const {
  for (MorId m = 0; m < num_morphisms(); ++m)
    if (dom(m) == cod(m) && !is_identity(m)) return CatKind::General;
  for (ObjId a = 0; a < num_objects(); ++a)
    for (ObjId b = a + 1; b < num_objects(); ++b)
      if (!hom(a, b).empty() && !hom(b, a).empty()) return CatKind::General;
  for (ObjId a = 0; a < num_objects(); ++a)
    for (ObjId b = 0; b < num_objects(); ++b)
      if (hom(a, b).size() > 1) return CatKind::Delta;
  return CatKind::Poset;
}

MorId FinCat::poset_arrow(ObjId i, ObjId j) const {
  auto h = hom(i, j);
  if (h.size() != 1)
    throw CategoryError("expected exactly one arrow " + obj_name(i) + " -> " + obj_name(j));
  return h[0];
}

FinCat FinCat::poset_from_relations(const std::vector<std::string>& objects,
                                    const std::vector<std::pair<int, int>>& le_pairs) {
  const long n = static_cast<long>(objects.size());
  std::vector<std::vector<bool>> le(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
  for (long i = 0; i < n; ++i) le[i][i] = true;
  for (auto [i, j] : le_pairs) {
    if (i < 0 || j < 0 || i >= n || j >= n) throw CategoryError("relation references unknown object");
    le[i][j] = true;
  }
  for (long k = 0; k < n; ++k)
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (i != j && le[i][j] && le[j][i])
        throw CategoryError("relations are not antisymmetric: " + objects[static_cast<size_t>(i)] +
                            " and " + objects[static_cast<size_t>(j)]);
  std::vector<MorData> mors;
  std::vector<MorId> identity(static_cast<size_t>(n));
  std::vector<std::vector<MorId>> arrow(static_cast<size_t>(n), std::vector<MorId>(static_cast<size_t>(n), -1));
  for (long i = 0; i < n; ++i) {
    identity[static_cast<size_t>(i)] = static_cast<MorId>(mors.size());
    arrow[i][i] = static_cast<MorId>(mors.size());
    mors.push_back({"id_" + objects[static_cast<size_t>(i)], static_cast<ObjId>(i), static_cast<ObjId>(i)});
  }
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      if (i == j || !le[i][j]) continue;
      arrow[i][j] = static_cast<MorId>(mors.size());
      mors.push_back({objects[static_cast<size_t>(i)] + "<=" + objects[static_cast<size_t>(j)],
                      static_cast<ObjId>(i), static_cast<ObjId>(j)});
    }
  std::map<std::pair<MorId, MorId>, MorId> table;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      if (arrow[i][j] < 0) continue;
      for (long k = 0; k < n; ++k) {
        if (arrow[j][k] < 0) continue;
        table[{arrow[j][k], arrow[i][j]}] = arrow[i][k];
      }
    }
  return FinCat(objects, std::move(mors), std::move(identity), table);
}

FinCat FinCat::free_on_quiver(const std::vector<std::string>& objects,
                              const std::vector<MorData>& edges, long max_paths) {
  const long n = static_cast<long>(objects.size());
  for (const auto& e : edges)
    if (e.dom < 0 || e.cod < 0 || e.dom >= n || e.cod >= n)
      throw CategoryError("edge " + e.name + " references unknown object");
  // paths as edge-index sequences, generated by increasing length
  std::vector<std::vector<int>> paths;
  std::map<std::vector<int>, MorId> path_id;
  std::vector<MorData> mors;
  std::vector<MorId> identity(static_cast<size_t>(n));
  auto path_dom = [&](const std::vector<int>& p) {
    return p.empty() ? -1 : edges[static_cast<size_t>(p.front())].dom;
  };
  auto path_cod = [&](const std::vector<int>& p) {
    return p.empty() ? -1 : edges[static_cast<size_t>(p.back())].cod;
  };
  for (long o = 0; o < n; ++o) {
    identity[static_cast<size_t>(o)] = static_cast<MorId>(paths.size());
    path_id[{-static_cast<int>(o) - 1}] = static_cast<MorId>(paths.size());
    paths.push_back({-static_cast<int>(o) - 1});  // sentinel for id at o
    mors.push_back({"id_" + objects[static_cast<size_t>(o)], static_cast<ObjId>(o), static_cast<ObjId>(o)});
  }
  std::vector<std::vector<int>> frontier;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) frontier.push_back({e});
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (auto& p : frontier) {
      if (static_cast<long>(paths.size()) > max_paths)
        throw CategoryError("free category on this quiver exceeds the path budget");
      path_id[p] = static_cast<MorId>(paths.size());
      std::string nm;
      for (auto it = p.rbegin(); it != p.rend(); ++it)
        nm += (nm.empty() ? "" : "*") + edges[static_cast<size_t>(*it)].name;
      mors.push_back({nm, path_dom(p), path_cod(p)});
      paths.push_back(p);
      for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        if (edges[static_cast<size_t>(e)].dom != path_cod(p)) continue;
        auto q = p;
        q.push_back(e);
        next.push_back(std::move(q));
      }
    }
    frontier = std::move(next);
  }
  std::map<std::pair<MorId, MorId>, MorId> table;
  auto concat = [&](const std::vector<int>& f, const std::vector<int>& g) {
    // g after f; sentinels are identities
    std::vector<int> r;
    if (f.front() >= 0) r = f;
    if (g.front() >= 0) r.insert(r.end(), g.begin(), g.end());
    if (r.empty()) return f;  // both identities at the same object
    return r;
  };
  for (const auto& [pf, fid] : path_id)
    for (const auto& [pg, gid] : path_id) {
      MorId f = fid, g = gid;
      ObjId codf = mors[static_cast<size_t>(f)].cod, domg = mors[static_cast<size_t>(g)].dom;
      if (codf != domg) continue;
      table[{g, f}] = path_id.at(concat(pf, pg));
    }
  return FinCat(objects, std::move(mors), std::move(identity), table);
}

std::string Simplex::label(const FinCat& c) const {
  // name an edge explicitly only when its endpoints leave a choice
  std::string s = "[";
  for (size_t i = 0; i < verts.size(); ++i) {
    if (i) {
      MorId e = edges[i - 1];
      if (c.hom(c.dom(e), c.cod(e)).size() > 1)
        s += "-" + c.mor(e).name + "->";
      else
        s += ">";
    }
    s += c.obj_name(verts[i]);
  }
  return s + "]";
}

std::vector<Simplex> nondegenerate_simplices(const FinCat& c) {
  if (c.classify() == CatKind::General)
    throw CategoryError("simplex enumeration requires a delta");
  std::vector<Simplex> out;
  std::vector<Simplex> stack;
  for (ObjId o = 0; o < c.num_objects(); ++o) stack.push_back({{o}, {}});
  while (!stack.empty()) {
    Simplex s = stack.back();
    stack.pop_back();
    out.push_back(s);
    ObjId end = s.verts.back();
    for (MorId m = 0; m < c.num_morphisms(); ++m) {
      if (c.dom(m) != end || c.is_identity(m)) continue;
      Simplex t = s;
      t.verts.push_back(c.cod(m));
      t.edges.push_back(m);
      stack.push_back(std::move(t));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void Functor::validate() const {
  if (static_cast<long>(obj_map.size()) != dom->num_objects() ||
      static_cast<long>(mor_map.size()) != dom->num_morphisms())
    throw CategoryError("functor tables have wrong size");
  for (MorId m = 0; m < dom->num_morphisms(); ++m) {
    MorId fm = on_mor(m);
    if (fm < 0 || fm >= cod->num_morphisms()) throw CategoryError("functor maps outside the target");
    if (cod->dom(fm) != on_obj(dom->dom(m)) || cod->cod(fm) != on_obj(dom->cod(m)))
      throw CategoryError("functor breaks endpoints on " + dom->mor(m).name);
  }
  for (ObjId o = 0; o < dom->num_objects(); ++o)
    if (on_mor(dom->identity(o)) != cod->identity(on_obj(o)))
      throw CategoryError("functor breaks the identity at " + dom->obj_name(o));
  for (MorId g = 0; g < dom->num_morphisms(); ++g)
    for (MorId f = 0; f < dom->num_morphisms(); ++f) {
      if (!dom->composable(g, f)) continue;
      if (on_mor(dom->compose(g, f)) != cod->compose(on_mor(g), on_mor(f)))
        throw CategoryError("functor breaks compose(" + dom->mor(g).name + ", " + dom->mor(f).name + ")");
    }
}

Functor identity_functor(const CatPtr& c) {
  Functor f;
  f.dom = f.cod = c;
  f.obj_map.resize(static_cast<size_t>(c->num_objects()));
  f.mor_map.resize(static_cast<size_t>(c->num_morphisms()));
  for (ObjId o = 0; o < c->num_objects(); ++o) f.obj_map[static_cast<size_t>(o)] = o;
  for (MorId m = 0; m < c->num_morphisms(); ++m) f.mor_map[static_cast<size_t>(m)] = m;
  return f;
}

Functor compose_functors(const Functor& g, const Functor& f) {
  if (g.dom.get() != f.cod.get()) throw CategoryError("functors are not composable");
  Functor r;
  r.dom = f.dom;
  r.cod = g.cod;
  for (ObjId o = 0; o < f.dom->num_objects(); ++o) r.obj_map.push_back(g.on_obj(f.on_obj(o)));
  for (MorId m = 0; m < f.dom->num_morphisms(); ++m) r.mor_map.push_back(g.on_mor(f.on_mor(m)));
  return r;
}

namespace {

// composite of edges [a, b) of s in the base category; identity at verts[a] if empty
MorId chain_composite(const FinCat& c, const Simplex& s, size_t a, size_t b) {
  MorId m = c.identity(s.verts[a]);
  for (size_t t = a; t < b; ++t) m = c.compose(s.edges[t], m);
  return m;
}

}  // namespace

Subdivision subdivide(const CatPtr& c) {
  CatKind kind = c->classify();
  if (kind == CatKind::General)
    throw CategoryError("subdivision requires a delta (no non-identity endomorphisms, "
                        "no arrows both ways)");
  Subdivision sd;
  sd.base = c;
  sd.simplices = nondegenerate_simplices(*c);
  for (ObjId i = 0; i < static_cast<ObjId>(sd.simplices.size()); ++i)
    sd.object_index[sd.simplices[static_cast<size_t>(i)]] = i;

  // collect arrow triples (tau, sigma, carrier); the strictly increasing
  // witness is a vertex subset of tau, and distinct witnesses give distinct
  // faces because chain vertices are pairwise distinct in a delta
  std::set<std::tuple<ObjId, ObjId, MorId>> triples;
  for (ObjId ti = 0; ti < static_cast<ObjId>(sd.simplices.size()); ++ti) {
    const Simplex& tau = sd.simplices[static_cast<size_t>(ti)];
    const size_t pv = tau.verts.size();
    for (unsigned long mask = 1; mask < (1ul << pv); ++mask) {
      std::vector<size_t> pos;
      for (size_t b = 0; b < pv; ++b)
        if (mask & (1ul << b)) pos.push_back(b);
      Simplex face;
      for (size_t t = 0; t < pos.size(); ++t) {
        face.verts.push_back(tau.verts[pos[t]]);
        if (t + 1 < pos.size()) face.edges.push_back(chain_composite(*c, tau, pos[t], pos[t + 1]));
      }
      auto it = sd.object_index.find(face);
      if (it == sd.object_index.end())
        throw CategoryError("internal: face of a chain is not a nondegenerate chain");
      MorId carrier = chain_composite(*c, tau, 0, pos[0]);
      triples.insert({ti, it->second, carrier});
    }
  }

  std::vector<std::string> names;
  std::vector<MorData> mors;
  std::vector<MorId> identity(sd.simplices.size(), -1);
  for (const auto& s : sd.simplices) names.push_back(s.label(*c));
  for (const auto& [tau, sigma, carrier] : triples) {
    MorId id = static_cast<MorId>(mors.size());
    sd.arrows.push_back({tau, sigma, carrier});
    sd.arrow_index[{tau, sigma, carrier}] = id;
    bool is_id = (tau == sigma);
    std::string nm = is_id ? "id_" + names[static_cast<size_t>(tau)]
                           : names[static_cast<size_t>(tau)] + "=>" + names[static_cast<size_t>(sigma)];
    if (is_id) identity[static_cast<size_t>(tau)] = id;
    mors.push_back({nm, tau, sigma});
  }
  std::map<std::pair<MorId, MorId>, MorId> table;
  for (MorId x = 0; x < static_cast<MorId>(sd.arrows.size()); ++x)
    for (MorId y = 0; y < static_cast<MorId>(sd.arrows.size()); ++y) {
      const SimplexArrow& X = sd.arrows[static_cast<size_t>(x)];
      const SimplexArrow& Y = sd.arrows[static_cast<size_t>(y)];
      if (X.sigma != Y.tau) continue;
      MorId carrier = c->compose(Y.carrier, X.carrier);
      auto it = sd.arrow_index.find({X.tau, Y.sigma, carrier});
      if (it == sd.arrow_index.end())
        throw CategoryError("internal: subdivision is not closed under composition");
      table[{y, x}] = it->second;
    }
  sd.prime = std::make_shared<const FinCat>(names, std::move(mors), std::move(identity), table);

  sd.to_base.dom = sd.prime;
  sd.to_base.cod = sd.base;
  for (const auto& s : sd.simplices) sd.to_base.obj_map.push_back(s.verts[0]);
  for (const auto& a : sd.arrows) sd.to_base.mor_map.push_back(a.carrier);
  return sd;
}

Functor subdivide_functor(const Functor& f, const Subdivision& sd_dom, const Subdivision& sd_cod) {
  if (f.dom.get() != sd_dom.base.get() || f.cod.get() != sd_cod.base.get())
    throw CategoryError("subdivide_functor: subdivisions do not match the functor");
  Functor r;
  r.dom = sd_dom.prime;
  r.cod = sd_cod.prime;
  for (const auto& s : sd_dom.simplices) {
    Simplex img;
    for (ObjId v : s.verts) img.verts.push_back(f.on_obj(v));
    for (MorId e : s.edges) {
      MorId fe = f.on_mor(e);
      if (f.cod->is_identity(fe))
        throw CategoryError("functor collapses the chain edge " + f.dom->mor(e).name +
                            "; its subdivision is undefined on " + s.label(*f.dom));
      img.edges.push_back(fe);
    }
    auto it = sd_cod.object_index.find(img);
    if (it == sd_cod.object_index.end())
      throw CategoryError("image chain is not a simplex of the target subdivision");
    r.obj_map.push_back(it->second);
  }
  for (const auto& a : sd_dom.arrows) {
    auto it = sd_cod.arrow_index.find({r.obj_map[static_cast<size_t>(a.tau)],
                                       r.obj_map[static_cast<size_t>(a.sigma)], f.on_mor(a.carrier)});
    if (it == sd_cod.arrow_index.end())
      throw CategoryError("image of a subdivision arrow is missing in the target");
    r.mor_map.push_back(it->second);
  }
  return r;
}

CommaCat comma_category(const Functor& f, ObjId i) {
  const FinCat& d = *f.dom;
  const FinCat& c = *f.cod;
  CommaCat cc;
  for (ObjId sigma = 0; sigma < d.num_objects(); ++sigma)
    for (MorId w : c.hom(i, f.on_obj(sigma))) {
      cc.object_index[{w, sigma}] = static_cast<ObjId>(cc.objects.size());
      cc.objects.push_back({w, sigma});
    }
  std::vector<std::string> names;
  for (const auto& o : cc.objects) names.push_back("<" + c.mor(o.w).name + "," + d.obj_name(o.sigma) + ">");
  std::vector<MorData> mors;
  std::vector<MorId> identity(cc.objects.size(), -1);
  // a map (u,tau) -> (w,sigma) is v: tau -> sigma with w = f(v) u
  for (ObjId a = 0; a < static_cast<ObjId>(cc.objects.size()); ++a)
    for (ObjId b = 0; b < static_cast<ObjId>(cc.objects.size()); ++b) {
      const CommaObject& A = cc.objects[static_cast<size_t>(a)];
      const CommaObject& B = cc.objects[static_cast<size_t>(b)];
      for (MorId v : d.hom(A.sigma, B.sigma)) {
        if (c.compose(f.on_mor(v), A.w) != B.w) continue;
        MorId id = static_cast<MorId>(mors.size());
        cc.carrier.push_back(v);
        cc.arrow_index[{a, b, v}] = id;
        bool is_id = (a == b && d.is_identity(v));
        if (is_id) identity[static_cast<size_t>(a)] = id;
        mors.push_back({is_id ? "id_" + names[static_cast<size_t>(a)]
                              : names[static_cast<size_t>(a)] + "->" + names[static_cast<size_t>(b)] +
                                    ":" + d.mor(v).name,
                        a, b});
      }
    }
  std::map<std::pair<MorId, MorId>, MorId> table;
  for (MorId x = 0; x < static_cast<MorId>(mors.size()); ++x)
    for (MorId y = 0; y < static_cast<MorId>(mors.size()); ++y) {
      if (mors[static_cast<size_t>(x)].cod != mors[static_cast<size_t>(y)].dom) continue;
      MorId v = d.compose(cc.carrier[static_cast<size_t>(y)], cc.carrier[static_cast<size_t>(x)]);
      auto it = cc.arrow_index.find({mors[static_cast<size_t>(x)].dom, mors[static_cast<size_t>(y)].cod, v});
      if (it == cc.arrow_index.end())
        throw CategoryError("internal: comma category is not closed under composition");
      table[{y, x}] = it->second;
    }
  cc.cat = std::make_shared<const FinCat>(names, std::move(mors), std::move(identity), table);
  return cc;
}

Functor comma_reindex(const Functor& f, MorId v, const CommaCat& from_i, const CommaCat& to_h) {
  const FinCat& c = *f.cod;
  Functor r;
  r.dom = from_i.cat;
  r.cod = to_h.cat;
  for (const auto& o : from_i.objects) {
    MorId wv = c.compose(o.w, v);
    auto it = to_h.object_index.find({wv, o.sigma});
    if (it == to_h.object_index.end()) throw CategoryError("re-indexing misses an object");
    r.obj_map.push_back(it->second);
  }
  for (MorId m = 0; m < from_i.cat->num_morphisms(); ++m) {
    ObjId a = from_i.cat->dom(m), b = from_i.cat->cod(m);
    auto it = to_h.arrow_index.find({r.obj_map[static_cast<size_t>(a)], r.obj_map[static_cast<size_t>(b)],
                                     from_i.carrier[static_cast<size_t>(m)]});
    if (it == to_h.arrow_index.end()) throw CategoryError("re-indexing misses an arrow");
    r.mor_map.push_back(it->second);
  }
  return r;
}

}  // namespace cctlab
