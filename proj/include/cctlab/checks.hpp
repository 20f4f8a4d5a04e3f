#pragma once

// Executable verification suites. Each suite re-derives the claims it makes on
// curated and seeded instances and reports a structured outcome; mutate=true
// plants a deliberate defect that a sound suite must flag as a failure.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/diagram.hpp"
#include "cctlab/fincat.hpp"
#include "cctlab/hh.hpp"
#include "cctlab/homalg.hpp"
#include "cctlab/instances.hpp"
#include "cctlab/kan.hpp"
#include "cctlab/mat.hpp"
#include "cctlab/shriek.hpp"

namespace cctlab {

struct CheckOutcome {
  std::string check;
  std::uint64_t seed = 0;
  bool mutated = false;
  bool pass = true;
  std::string failure;                                     // first broken claim
  std::vector<std::pair<std::string, std::string>> facts;  // witness values
};

namespace detail {

struct Judge {
  CheckOutcome out;
  Judge(std::string check, std::uint64_t seed, bool mutated) {
    out.check = std::move(check);
    out.seed = seed;
    out.mutated = mutated;
  }
  bool require(bool ok, const std::string& what) {
    if (!ok && out.pass) {
      out.pass = false;
      out.failure = what;
    }
    return ok;
  }
  void fact(const std::string& key, const std::string& value) { out.facts.emplace_back(key, value); }
  void fact(const std::string& key, long value) { out.facts.emplace_back(key, std::to_string(value)); }
};

template <class Body>
CheckOutcome run_suite(std::string check, std::uint64_t seed, bool mutated, Body&& body) {
  Judge j(std::move(check), seed, mutated);
  try {
    body(j);
  } catch (const std::exception& e) {
    j.require(false, e.what());
  }
  return std::move(j.out);
}

inline std::string fmt_dims(const std::vector<long>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

// rank of the span of a family of natural maps, as vectors of matrix entries
template <class F>
long stacked_rank(const std::vector<DiagMap<F>>& maps) {
  if (maps.empty()) return 0;
  std::vector<std::vector<typename F::Elem>> rows;
  for (const auto& e : maps) rows.push_back(flatten_map(e));
  Mat<F> s(maps[0].comp[0].field(), static_cast<long>(rows.size()),
           static_cast<long>(rows[0].size()));
  for (long i = 0; i < s.rows(); ++i)
    for (long c = 0; c < s.cols(); ++c)
      s.at(i, c) = rows[static_cast<size_t>(i)][static_cast<size_t>(c)];
  return rank(s);
}

template <class F>
long flat_rank(F fld, const std::vector<Mat<F>>& maps) {
  if (maps.empty()) return 0;
  long w = maps[0].rows() * maps[0].cols();
  Mat<F> s(fld, static_cast<long>(maps.size()), w);
  for (size_t i = 0; i < maps.size(); ++i)
    for (long r = 0; r < maps[i].rows(); ++r)
      for (long c = 0; c < maps[i].cols(); ++c)
        s.at(static_cast<long>(i), r * maps[i].cols() + c) = maps[i].at(r, c);
  return rank(s);
}

// basis of bimodule maps m -> n over one algebra, via the one-object diagram
template <class F>
std::vector<Mat<F>> bimodule_hom_basis(F fld, const Bimodule<F>& m, const Bimodule<F>& n) {
  CatPtr pt = chain_poset(1);
  DiaPtr<F> dia = constant_diagram(fld, pt, m.alg, m.alg->name + "-pt");
  auto wrap = [&](const Bimodule<F>& x) {
    DiagBimodule<F> b;
    b.fld = fld;
    b.name = x.name;
    b.dia = dia;
    b.mod = {x};
    b.tr = {Mat<F>::identity(fld, x.dim)};
    return b;
  };
  DiagBimodule<F> dm = wrap(m);
  DiagBimodule<F> dn = wrap(n);
  std::vector<DiagMap<F>> sols = hom_space_bimod(dm, dn);
  std::vector<Mat<F>> out;
  for (auto& s : sols) out.push_back(s.comp[0]);
  return out;
}

template <class F>
bool algebra_bimodule_map(const Bimodule<F>& m, const Bimodule<F>& n, const Mat<F>& x) {
  if (x.rows() != n.dim || x.cols() != m.dim) return false;
  for (long b = 0; b < m.alg->dim; ++b) {
    if (!(x * m.left[static_cast<size_t>(b)] == n.left[static_cast<size_t>(b)] * x)) return false;
    if (!(x * m.right[static_cast<size_t>(b)] == n.right[static_cast<size_t>(b)] * x)) return false;
  }
  return true;
}

// clone a category with one non-identity arrow doubled; composites route the
// copy through the original, so the clone is still a valid one-way category
// but is no longer thin
inline CatPtr with_duplicate_arrow(const CatPtr& c, MorId v) {
  std::vector<std::string> objs;
  for (ObjId o = 0; o < c->num_objects(); ++o) objs.push_back(c->obj_name(o));
  std::vector<MorData> mors;
  for (MorId m = 0; m < c->num_morphisms(); ++m) mors.push_back(c->mor(m));
  std::vector<MorId> ids;
  for (ObjId o = 0; o < c->num_objects(); ++o) ids.push_back(c->identity(o));
  MorId d = static_cast<MorId>(mors.size());
  mors.push_back({c->mor(v).name + "-copy", c->dom(v), c->cod(v)});
  std::map<std::pair<MorId, MorId>, MorId> table;
  for (MorId g = 0; g < c->num_morphisms(); ++g)
    for (MorId f = 0; f < c->num_morphisms(); ++f)
      if (c->composable(g, f)) table[{g, f}] = c->compose(g, f);
  for (MorId g = 0; g < c->num_morphisms(); ++g) {
    if (c->composable(g, v)) table[{g, d}] = c->is_identity(g) ? d : c->compose(g, v);
    if (c->composable(v, g)) table[{d, g}] = c->is_identity(g) ? d : c->compose(v, g);
  }
  FinCat out(std::move(objs), std::move(mors), std::move(ids), table);
  out.validate();
  return std::make_shared<const FinCat>(std::move(out));
}

}  // namespace detail

// subdividing a one-way category, or a poset, always yields a poset
inline CheckOutcome check_prop21(std::uint64_t seed, bool mutate, long deltas = 100,
                                 long posets = 100) {
  return detail::run_suite("prop21", seed, mutate, [&](detail::Judge& j) {
    if (mutate) {
      Subdivision planted = subdivide(parallel_pair());
      MorId v = 0;
      while (planted.prime->is_identity(v)) ++v;
      CatPtr bad = detail::with_duplicate_arrow(planted.prime, v);
      if (!j.require(bad->classify() == CatKind::Poset, "doubled arrow: category is not a poset"))
        return;
    }
    std::mt19937_64 rng(seed);
    for (long t = 0; t < deltas; ++t) {
      CatPtr c = random_delta(rng, 5, 8);
      CatKind kind = c->classify();
      if (!j.require(kind == CatKind::Delta || kind == CatKind::Poset,
                     "random one-way category misclassified"))
        return;
      Subdivision sd = subdivide(c);
      if (!j.require(sd.prime->classify() == CatKind::Poset,
                     "subdivided one-way category is not a poset"))
        return;
    }
    for (long t = 0; t < posets; ++t) {
      CatPtr c = random_poset(rng, 5);
      if (!j.require(c->classify() == CatKind::Poset, "random poset misclassified")) return;
      Subdivision sd = subdivide(c);
      if (!j.require(sd.prime->classify() == CatKind::Poset, "subdivided poset is not a poset"))
        return;
    }
    CatPtr pp = parallel_pair();
    j.require(pp->classify() == CatKind::Delta, "parallel pair should be one-way but not thin");
    Subdivision sd = subdivide(pp);
    j.require(sd.prime->num_objects() == 4, "parallel-pair subdivision: wrong object count");
    j.require(sd.prime->num_non_identity() == 4, "parallel-pair subdivision: wrong arrow count");
    j.require(sd.prime->classify() == CatKind::Poset, "parallel-pair subdivision is not a poset");
    Subdivision sd2 = subdivide(sd.prime);
    j.require(sd2.prime->classify() == CatKind::Poset, "twice-subdivided parallel pair is not a poset");
    j.fact("one-way categories", deltas);
    j.fact("posets", posets);
    j.fact("parallel-pair subdivision objects", sd.prime->num_objects());
  });
}

// cones of homotopy equivalences contract, and the contraction data converts
// both ways into two-sided homotopy inverses
template <class F>
CheckOutcome check_prop32(F fld, std::uint64_t seed, bool mutate, long count = 50) {
  return detail::run_suite("prop32", seed, mutate, [&](detail::Judge& j) {
    if (mutate) {
      // break the map block of a cone differential; d^2 must become nonzero
      Complex<F> x(fld, {1, 1}, {Mat<F>::identity(fld, 1)});
      ChainMap<F> idx = identity_chain_map(x);
      Complex<F> cf = cone(idx);
      std::vector<Mat<F>> diffs;
      for (long n = 1; n <= cf.top(); ++n) diffs.push_back(cf.diff(n));
      diffs[1].at(1, 0) = fld.zero();
      Complex<F> bad(fld, {cf.dim(0), cf.dim(1), cf.dim(2)}, diffs);
      bad.validate();
      j.require(false, "corrupted cone passed validation");
      return;
    }
    std::mt19937_64 rng(seed);
    long done = 0;
    long attempts = 0;
    while (done < count) {
      ++attempts;
      if (!j.require(attempts < count * 40 + 100, "instance sampling budget exhausted")) return;
      EquivalencePair<F> inst = random_equivalence(rng, fld);
      if (inst.src.total_dim() > 12 || inst.tgt.total_dim() > 12) continue;
      Complex<F> cf = cone(inst.f);
      cf.validate();
      auto r = contract_exact(cf);
      if (!j.require(r.ok, "cone of an equivalence did not contract")) return;
      if (!j.require(!contraction_defect(cf, r.s).has_value(),
                     "contraction identity fails on the cone"))
        return;
      EquivalenceData<F> e = extract_equivalence(inst.f, cf, r.s);
      e.g.validate();
      const Complex<F>& m = inst.src;
      const Complex<F>& n = inst.tgt;
      auto sm_at = [&](long d) {
        if (d >= 1 && d < static_cast<long>(e.sM.size())) return e.sM[static_cast<size_t>(d)];
        return Mat<F>(fld, m.dim(d), m.dim(d - 1));
      };
      auto sn_at = [&](long d) {
        if (d >= 1 && d < static_cast<long>(e.sN.size())) return e.sN[static_cast<size_t>(d)];
        return Mat<F>(fld, n.dim(d), n.dim(d - 1));
      };
      long top = std::max(m.top(), n.top());
      bool two_sided = true;
      for (long d = 0; d <= top && two_sided; ++d) {
        Mat<F> gf = e.g.at(d) * inst.f.at(d) - Mat<F>::identity(fld, m.dim(d));
        two_sided = gf == m.diff(d + 1) * sm_at(d + 1) + sm_at(d) * m.diff(d);
        if (!two_sided) break;
        Mat<F> fg = inst.f.at(d) * e.g.at(d) - Mat<F>::identity(fld, n.dim(d));
        two_sided = fg == n.diff(d + 1) * sn_at(d + 1) + sn_at(d) * n.diff(d);
      }
      if (!j.require(two_sided, "extracted homotopies miss the two-sided identities")) return;
      Homotopy<F> s2 = build_cone_contraction(inst.f, e);
      if (!j.require(!contraction_defect(cf, s2).has_value(),
                     "rebuilt contraction fails its identity"))
        return;
      ++done;
    }
    j.fact("equivalences contracted", done);
  });
}

// truncated bar rows assemble into a contraction of the total complex onto the
// coefficient complex, degree by degree where the truncation permits
template <class F>
CheckOutcome check_prop37(F fld, std::uint64_t seed, bool mutate) {
  return detail::run_suite("prop37", seed, mutate, [&](detail::Judge& j) {
    std::vector<NamedDouble<F>> grid = bar_double_instances(fld);
    bool plant = mutate;
    for (auto& inst : grid) {
      DoubleComplex<F>& dc = inst.dc;
      if (plant) {
        dc.t[0][0].at(0, 0) = fld.add(dc.t[0][0].at(0, 0), fld.one());
        plant = false;
      }
      dc.validate();  // throws on the planted defect
      Complex<F> tot = total_complex(dc);
      tot.validate();
      ChainMap<F> aug = total_augmentation(dc, tot);
      ChainMap<F> sec = total_section(dc, tot);
      aug.validate();
      sec.validate();
      bool split = true;
      for (long d = 0; d <= dc.base.top() && split; ++d)
        split = aug.at(d) * sec.at(d) == Mat<F>::identity(fld, dc.base.dim(d));
      if (!j.require(split, inst.label + ": collapse then include is not the identity")) return;
      Homotopy<F> h = total_homotopy(dc, tot);
      auto h_at = [&](long d) {
        if (d >= 1 && d < static_cast<long>(h.size())) return h[static_cast<size_t>(d)];
        return Mat<F>(fld, tot.dim(d), tot.dim(d - 1));
      };
      long upto = total_valid_top(dc);
      bool contracts = true;
      for (long d = 0; d <= upto && contracts; ++d) {
        Mat<F> lhs = tot.diff(d + 1) * h_at(d + 1) + h_at(d) * tot.diff(d);
        Mat<F> rhs = Mat<F>::identity(fld, tot.dim(d)) - sec.at(d) * aug.at(d);
        contracts = lhs == rhs;
      }
      if (!j.require(contracts, inst.label + ": row contraction does not assemble")) return;
      j.fact(inst.label, "identities hold through degree " + std::to_string(upto));
    }
  });
}

// pushforward along the subdivision collapse is left adjoint to restriction,
// with invertible counit and matching hom dimensions
template <class F>
CheckOutcome check_adjunction(F fld, std::uint64_t seed, bool mutate, long per_diagram = 6) {
  return detail::run_suite("adjunction", seed, mutate, [&](detail::Judge& j) {
    std::mt19937_64 rng(seed);
    long instances = 0;
    bool plant = mutate;
    for (auto& nd : chain_module_instances(fld)) {
      Subdivision sd = subdivide(nd.dia->base);
      DiaPtr<F> prime = subdivide_diagram(sd, nd.dia, nd.label + " subdivided");
      for (long t = 0; t < per_diagram; ++t) {
        DiagModule<F> m = random_chain_module(rng, nd.dia, 2, "m");
        DiagModule<F> nb = random_chain_module(rng, nd.dia, 2, "n");
        DiagModule<F> mp = subdivide_module(sd, prime, m, "m-sub");
        DiagModule<F> np = subdivide_module(sd, prime, nb, "n-sub");
        std::string why;

        // triangle on the restriction side, with an invertible counit
        KanExtension<F> km = f_shriek(sd.to_base, nd.dia, mp, "push-m");
        DiagMap<F> epsm = kan_counit(km, m);
        if (!j.require(is_module_map(km.out, m, epsm, &why),
                       nd.label + ": counit is not a module map: " + why))
          return;
        bool invertible = true;
        for (ObjId i = 0; i < nd.dia->base->num_objects() && invertible; ++i)
          invertible = epsm.at(i).rows() == epsm.at(i).cols() &&
                       rank(epsm.at(i)) == epsm.at(i).rows();
        if (!j.require(invertible, nd.label + ": counit is not invertible")) return;
        DiagMap<F> etam = kan_unit(km, mp);
        bool tri_restrict = true;
        for (ObjId s = 0; s < prime->base->num_objects() && tri_restrict; ++s)
          tri_restrict =
              epsm.at(sd.to_base.on_obj(s)) * etam.at(s) == Mat<F>::identity(fld, mp.dim_at(s));
        if (!j.require(tri_restrict, nd.label + ": restriction triangle fails")) return;

        // triangle on the pushforward side
        KanExtension<F> kn = f_shriek(sd.to_base, nd.dia, np, "push-n");
        DiagMap<F> etan = kan_unit(kn, np);
        if (plant) {
          // double one unit component; a triangle or naturality must notice
          etan.comp[0] = etan.comp[0].scaled(fld.add(fld.one(), fld.one()));
          plant = false;
        }
        DiagModule<F> pulled = pullback_module(sd.to_base, prime, kn.out, "restrict-push-n");
        if (!j.require(is_module_map(np, pulled, etan, &why),
                       nd.label + ": unit is not a module map: " + why))
          return;
        KanExtension<F> kn2 = f_shriek(sd.to_base, nd.dia, pulled, "push-restrict-push-n");
        DiagMap<F> lift = kan_on_map(kn, kn2, etan);
        DiagMap<F> epsn = kan_counit(kn2, kn.out);
        bool tri_push = true;
        for (ObjId i = 0; i < nd.dia->base->num_objects() && tri_push; ++i)
          tri_push = epsn.at(i) * lift.at(i) == Mat<F>::identity(fld, kn.out.dim_at(i));
        if (!j.require(tri_push, nd.label + ": pushforward triangle fails")) return;

        // hom spaces match across the adjunction, basis to basis
        std::vector<DiagMap<F>> below = hom_space(kn.out, m);
        std::vector<DiagMap<F>> above = hom_space(np, mp);
        if (!j.require(below.size() == above.size(),
                       nd.label + ": hom dimensions disagree across the adjunction"))
          return;
        std::vector<DiagMap<F>> crossed;
        for (const auto& th : below) {
          DiagMap<F> tr = adjoint_transpose(kn, etan, th);
          if (!j.require(is_module_map(np, mp, tr, &why),
                         nd.label + ": transposed map is not a module map: " + why))
            return;
          crossed.push_back(tr);
        }
        if (!j.require(detail::stacked_rank(crossed) == static_cast<long>(below.size()),
                       nd.label + ": transposition drops rank"))
          return;
        ++instances;
      }
    }
    j.fact("instances", instances);
  });
}

// restriction along the subdivision collapse is fully faithful on modules
template <class F>
CheckOutcome check_dstar_ff(F fld, std::uint64_t seed, bool mutate, long per_diagram = 6) {
  return detail::run_suite("dstar-ff", seed, mutate, [&](detail::Judge& j) {
    if (mutate) {
      // a doubled component on a restricted map must break naturality
      auto k = scalar_algebra(fld);
      CatPtr base = chain_poset(2);
      DiaPtr<F> dia = constant_diagram(fld, base, k, "k-c2");
      Subdivision sd = subdivide(base);
      DiaPtr<F> prime = subdivide_diagram(sd, dia, "k-c2-sub");
      DiagModule<F> m = regular_module(dia);
      DiagModule<F> mp = subdivide_module(sd, prime, m, "reg-sub");
      DiagMap<F> ident;
      for (ObjId i = 0; i < base->num_objects(); ++i)
        ident.comp.push_back(Mat<F>::identity(fld, m.dim_at(i)));
      DiagMap<F> moved = pullback_map(sd.to_base, ident);
      moved.comp[0] = moved.comp[0].scaled(fld.add(fld.one(), fld.one()));
      std::string why;
      if (!j.require(is_module_map(mp, mp, moved, &why),
                     "restricted identity is not a module map: " + why))
        return;
    }
    std::mt19937_64 rng(seed);
    long instances = 0;
    long widest = 0;
    for (auto& nd : chain_module_instances(fld)) {
      Subdivision sd = subdivide(nd.dia->base);
      DiaPtr<F> prime = subdivide_diagram(sd, nd.dia, nd.label + " subdivided");
      for (long t = 0; t < per_diagram; ++t) {
        DiagModule<F> m = random_chain_module(rng, nd.dia, 2, "m");
        DiagModule<F> n = random_chain_module(rng, nd.dia, 2, "n");
        DiagModule<F> mp = subdivide_module(sd, prime, m, "m-sub");
        DiagModule<F> np = subdivide_module(sd, prime, n, "n-sub");
        std::vector<DiagMap<F>> below = hom_space(m, n);
        std::vector<DiagMap<F>> above = hom_space(mp, np);
        if (!j.require(below.size() == above.size(),
                       nd.label + ": hom dimension changes under restriction"))
          return;
        std::vector<DiagMap<F>> moved;
        std::string why;
        for (const auto& th : below) {
          DiagMap<F> up = pullback_map(sd.to_base, th);
          if (!j.require(is_module_map(mp, np, up, &why),
                         nd.label + ": restricted map is not a module map: " + why))
            return;
          moved.push_back(up);
        }
        if (!moved.empty() &&
            !j.require(detail::stacked_rank(moved) == static_cast<long>(below.size()),
                       nd.label + ": restriction is not injective on homs"))
          return;
        widest = std::max(widest, static_cast<long>(below.size()));
        ++instances;
      }
    }
    j.fact("instances", instances);
    j.fact("largest hom dimension", widest);
  });
}

// flattening a poset diagram preserves bimodule hom spaces of regular bimodules
template <class F>
CheckOutcome check_scct(F fld, std::uint64_t seed, bool mutate) {
  return detail::run_suite("scct", seed, mutate, [&](detail::Judge& j) {
    bool plant = mutate;
    for (auto& nd : comparison_instances(fld)) {
      DiagBimodule<F> m = regular_diag_bimodule(nd.dia);
      std::vector<DiagMap<F>> over_diagram = hom_space_bimod(m, m);
      ShriekAlgebra<F> sa = shriek_algebra(nd.dia, nd.label + " flat");
      ShriekBimodule<F> sm = shriek_bimodule(sa, m, nd.label + " flat reg");
      if (plant) {
        sm.mod.left[0].at(0, 0) = fld.add(sm.mod.left[0].at(0, 0), fld.one());
        plant = false;
      }
      sm.mod.validate();  // throws on the planted defect
      std::vector<Mat<F>> over_algebra = detail::bimodule_hom_basis(fld, sm.mod, sm.mod);
      if (!j.require(over_diagram.size() == over_algebra.size(),
                     nd.label + ": hom dimensions disagree under flattening"))
        return;
      std::vector<Mat<F>> moved;
      for (const auto& eta : over_diagram) {
        Mat<F> x = shriek_map(sa, sm, sm, eta);
        if (!j.require(detail::algebra_bimodule_map(sm.mod, sm.mod, x),
                       nd.label + ": flattened map is not a bimodule map"))
          return;
        moved.push_back(x);
      }
      if (!j.require(detail::flat_rank(fld, moved) == static_cast<long>(moved.size()),
                     nd.label + ": flattening is not injective on homs"))
        return;
      j.fact(nd.label, "hom dimension " + std::to_string(over_diagram.size()) +
                           ", flat algebra dimension " + std::to_string(sa.alg->dim));
    }
  });
}

// cohomology of the flattened algebra with regular coefficients is invariant
// under subdivision of the underlying poset diagram
template <class F>
CheckOutcome check_invariance(F fld, std::uint64_t seed, bool mutate, long max_degree = 3,
                              const RankBudget& budget = RankBudget{}) {
  return detail::run_suite("invariance", seed, mutate, [&](detail::Judge& j) {
    bool plant = mutate;
    for (auto& nd : comparison_instances(fld)) {
      Subdivision sd = subdivide(nd.dia->base);
      DiaPtr<F> prime = subdivide_diagram(sd, nd.dia, nd.label + " subdivided");
      if (plant) {
        // zero one structure map; validation must reject the diagram
        Diagram<F> bad = *prime;
        MorId v = 0;
        while (bad.base->is_identity(v)) ++v;
        Mat<F>& hv = bad.hom[static_cast<size_t>(v)];
        hv = Mat<F>(fld, hv.rows(), hv.cols());
        bad.validate();
        j.require(false, "zeroed structure map passed validation");
        return;
      }
      ShriekAlgebra<F> sa = shriek_algebra(nd.dia, nd.label + " flat");
      ShriekBimodule<F> sm =
          shriek_bimodule(sa, regular_diag_bimodule(nd.dia), nd.label + " flat reg");
      ShriekAlgebra<F> sap = shriek_algebra(prime, nd.label + " flat sub");
      ShriekBimodule<F> smp =
          shriek_bimodule(sap, regular_diag_bimodule(prime), nd.label + " flat sub reg");
      HHResult a = hh_table(sa.alg, sm.mod, max_degree, budget);
      HHResult b = hh_table(sap.alg, smp.mod, max_degree, budget);
      for (long d = 0; d <= max_degree; ++d) {
        if (!j.require(a.h_exact[static_cast<size_t>(d)] && b.h_exact[static_cast<size_t>(d)],
                       nd.label + ": rank budget left degree " + std::to_string(d) +
                           " uncertified"))
          return;
        if (!j.require(a.h[static_cast<size_t>(d)] == b.h[static_cast<size_t>(d)],
                       nd.label + ": cohomology changes under subdivision in degree " +
                           std::to_string(d)))
          return;
      }
      if (nd.label == "k over the 2-chain") {
        bool pinned = a.h[0] == 1;
        for (long d = 1; d <= max_degree; ++d) pinned = pinned && a.h[static_cast<size_t>(d)] == 0;
        if (!j.require(pinned, "2-chain pin: expected dimension 1 in degree 0 and 0 above")) return;
      }
      j.fact(nd.label, detail::fmt_dims(a.h) + " on both sides; flat dimensions " +
                           std::to_string(sa.alg->dim) + " and " + std::to_string(sap.alg->dim));
    }
  });
}

// a diagram over a one-way category reaches flattenable ground after one
// subdivision; a second subdivision does not change the cohomology
template <class F>
CheckOutcome check_gcct(F fld, std::uint64_t seed, bool mutate, long max_degree = 3,
                        const RankBudget& budget = RankBudget{}) {
  return detail::run_suite("gcct", seed, mutate, [&](detail::Judge& j) {
    CatPtr pp = parallel_pair();
    if (!j.require(pp->classify() == CatKind::Delta, "parallel pair misclassified")) return;
    DiaPtr<F> top = constant_diagram(fld, pp, scalar_algebra(fld), "k-pp");
    bool rejected = false;
    try {
      shriek_algebra(top, "direct");
    } catch (const DiagError&) {
      rejected = true;
    }
    if (!j.require(rejected, "flattening over a non-poset base was not rejected")) return;
    Subdivision sd1 = subdivide(pp);
    if (!j.require(sd1.prime->classify() == CatKind::Poset, "first subdivision is not a poset"))
      return;
    DiaPtr<F> once = subdivide_diagram(sd1, top, "k-pp-sub");
    Subdivision sd2 = subdivide(sd1.prime);
    DiaPtr<F> twice = subdivide_diagram(sd2, once, "k-pp-sub-sub");
    if (mutate) {
      Diagram<F> bad = *twice;
      MorId v = 0;
      while (bad.base->is_identity(v)) ++v;
      Mat<F>& hv = bad.hom[static_cast<size_t>(v)];
      hv = Mat<F>(fld, hv.rows(), hv.cols());
      bad.validate();
      j.require(false, "zeroed structure map passed validation");
      return;
    }
    ShriekAlgebra<F> s1 = shriek_algebra(once, "once flat");
    ShriekAlgebra<F> s2 = shriek_algebra(twice, "twice flat");
    j.require(s1.alg->dim == 8, "flat dimension after one subdivision should be 8");
    j.require(s2.alg->dim == 16, "flat dimension after two subdivisions should be 16");
    ShriekBimodule<F> m1 = shriek_bimodule(s1, regular_diag_bimodule(once), "once flat reg");
    ShriekBimodule<F> m2 = shriek_bimodule(s2, regular_diag_bimodule(twice), "twice flat reg");
    HHResult a = hh_table(s1.alg, m1.mod, max_degree, budget);
    HHResult b = hh_table(s2.alg, m2.mod, max_degree, budget);
    for (long d = 0; d <= max_degree; ++d) {
      if (!j.require(a.h_exact[static_cast<size_t>(d)] && b.h_exact[static_cast<size_t>(d)],
                     "rank budget left degree " + std::to_string(d) + " uncertified"))
        return;
      if (!j.require(a.h[static_cast<size_t>(d)] == b.h[static_cast<size_t>(d)],
                     "cohomology changes under the second subdivision in degree " +
                         std::to_string(d)))
        return;
    }
    j.fact("cohomology", detail::fmt_dims(a.h) + " at flat dimensions 8 and 16");
  });
}

}  // namespace cctlab
