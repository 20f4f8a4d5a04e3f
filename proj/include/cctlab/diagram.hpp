#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/algkit.hpp"
#include "cctlab/fincat.hpp"
#include "cctlab/mat.hpp"

namespace cctlab {

struct DiagError : std::runtime_error {
  explicit DiagError(const std::string& w) : std::runtime_error(w) {}
};

// h maps coordinates of src to coordinates of tgt (rows = tgt.dim)
template <class F>
void check_algebra_hom(const Algebra<F>& src, const Algebra<F>& tgt, const Mat<F>& h,
                       const std::string& where) {
  if (h.rows() != tgt.dim || h.cols() != src.dim)
    throw DiagError(where + ": hom matrix has wrong shape");
  const F& K = src.fld;
  std::vector<typename F::Elem> u = h.apply(src.unit);
  for (long k = 0; k < tgt.dim; ++k)
    if (!K.eq(u[static_cast<size_t>(k)], tgt.unit[static_cast<size_t>(k)]))
      throw DiagError(where + ": hom does not preserve the unit");
  for (long i = 0; i < src.dim; ++i)
    for (long j = 0; j < src.dim; ++j) {
      std::vector<typename F::Elem> lhs(static_cast<size_t>(src.dim), K.zero());
      for (const auto& [k, v] : src.prod(i, j)) lhs[static_cast<size_t>(k)] = K.add(lhs[static_cast<size_t>(k)], v);
      std::vector<typename F::Elem> want = h.apply(lhs);
      std::vector<typename F::Elem> got = tgt.mul(h.col(i), h.col(j));
      for (long k = 0; k < tgt.dim; ++k)
        if (!K.eq(want[static_cast<size_t>(k)], got[static_cast<size_t>(k)]))
          throw DiagError(where + ": hom is not multiplicative on basis pair (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

// contravariant functor of algebras over a finite base category: an algebra
// per object and, for each morphism v, a hom from the codomain algebra to the
// domain algebra
template <class F>
struct Diagram {
  F fld;
  std::string name;
  CatPtr base;
  std::vector<AlgPtr<F>> alg;  // per object
  std::vector<Mat<F>> hom;     // hom[v] : A^{cod v} -> A^{dom v}

  const Algebra<F>& at(ObjId i) const { return *alg[static_cast<size_t>(i)]; }
  const Mat<F>& hom_of(MorId v) const { return hom[static_cast<size_t>(v)]; }

  void validate() const {
    if (!base) throw DiagError(name + ": no base category");
    if (static_cast<long>(alg.size()) != base->num_objects() ||
        static_cast<long>(hom.size()) != base->num_morphisms())
      throw DiagError(name + ": one algebra per object and one hom per morphism");
    for (const auto& a : alg)
      if (!a) throw DiagError(name + ": missing algebra");
    for (MorId v = 0; v < base->num_morphisms(); ++v) {
      const Algebra<F>& src = at(base->cod(v));
      const Algebra<F>& tgt = at(base->dom(v));
      check_algebra_hom(src, tgt, hom_of(v), name + ", morphism " + base->mor(v).name);
      if (base->is_identity(v) && !(hom_of(v) == Mat<F>::identity(fld, src.dim)))
        throw DiagError(name + ": identity morphism must carry the identity hom");
    }
    for (MorId g = 0; g < base->num_morphisms(); ++g)
      for (MorId f = 0; f < base->num_morphisms(); ++f) {
        if (!base->composable(g, f)) continue;
        // contravariance: the hom of g o f restricts through g first
        if (!(hom_of(base->compose(g, f)) == hom_of(f) * hom_of(g)))
          throw DiagError(name + ": homs break functoriality on " + base->mor(g).name + " o " +
                          base->mor(f).name);
      }
  }
};

template <class F>
using DiaPtr = std::shared_ptr<const Diagram<F>>;

template <class F>
DiaPtr<F> constant_diagram(F fld, const CatPtr& c, const AlgPtr<F>& a, std::string name) {
  Diagram<F> d;
  d.fld = fld;
  d.name = std::move(name);
  d.base = c;
  d.alg.assign(static_cast<size_t>(c->num_objects()), a);
  d.hom.assign(static_cast<size_t>(c->num_morphisms()), Mat<F>::identity(fld, a->dim));
  return std::make_shared<const Diagram<F>>(std::move(d));
}

template <class F>
DiaPtr<F> pullback_diagram(const Functor& f, const DiaPtr<F>& a, std::string name) {
  Diagram<F> d;
  d.fld = a->fld;
  d.name = std::move(name);
  d.base = f.dom;
  for (ObjId o = 0; o < f.dom->num_objects(); ++o) d.alg.push_back(a->alg[static_cast<size_t>(f.on_obj(o))]);
  for (MorId v = 0; v < f.dom->num_morphisms(); ++v) d.hom.push_back(a->hom_of(f.on_mor(v)));
  return std::make_shared<const Diagram<F>>(std::move(d));
}

// restriction along the collapse functor of a subdivision
template <class F>
DiaPtr<F> subdivide_diagram(const Subdivision& sd, const DiaPtr<F>& a, std::string name) {
  if (sd.base != a->base) throw DiagError(name + ": subdivision is not over the diagram base");
  return pullback_diagram(sd.to_base, a, std::move(name));
}

// objectwise left modules with transition maps running against the morphisms,
// like the homs of the diagram itself
template <class F>
struct DiagModule {
  using Elem = typename F::Elem;

  F fld;
  std::string name;
  DiaPtr<F> dia;
  std::vector<long> dims;                // per object
  std::vector<std::vector<Mat<F>>> act;  // act[i][b]: action of basis b of A^i
  std::vector<Mat<F>> tr;                // tr[v] : M^{cod v} -> M^{dom v}

  long dim_at(ObjId i) const { return dims[static_cast<size_t>(i)]; }
  const Mat<F>& act_basis(ObjId i, long b) const {
    return act[static_cast<size_t>(i)][static_cast<size_t>(b)];
  }
  const Mat<F>& tr_of(MorId v) const { return tr[static_cast<size_t>(v)]; }

  Mat<F> act_of(ObjId i, const std::vector<Elem>& a) const {
    Mat<F> m(fld, dim_at(i), dim_at(i));
    for (long b = 0; b < dia->at(i).dim; ++b)
      if (!fld.is_zero(a[static_cast<size_t>(b)])) m = m + act_basis(i, b).scaled(a[static_cast<size_t>(b)]);
    return m;
  }

  void validate() const {
    if (!dia) throw DiagError(name + ": no diagram");
    const FinCat& c = *dia->base;
    if (static_cast<long>(dims.size()) != c.num_objects() ||
        static_cast<long>(act.size()) != c.num_objects() ||
        static_cast<long>(tr.size()) != c.num_morphisms())
      throw DiagError(name + ": per-object and per-morphism tables have wrong size");
    for (ObjId i = 0; i < c.num_objects(); ++i) {
      const Algebra<F>& a = dia->at(i);
      if (static_cast<long>(act[static_cast<size_t>(i)].size()) != a.dim)
        throw DiagError(name + ": one action matrix per algebra basis element");
      for (const Mat<F>& m : act[static_cast<size_t>(i)])
        if (m.rows() != dim_at(i) || m.cols() != dim_at(i))
          throw DiagError(name + ": action matrix has wrong shape at object " + std::to_string(i));
      if (!(act_of(i, a.unit) == Mat<F>::identity(fld, dim_at(i))))
        throw DiagError(name + ": unit does not act as the identity at object " + std::to_string(i));
      for (long p = 0; p < a.dim; ++p)
        for (long q = 0; q < a.dim; ++q) {
          Mat<F> want(fld, dim_at(i), dim_at(i));
          for (const auto& [k, v] : a.prod(p, q)) want = want + act_basis(i, k).scaled(v);
          if (!(want == act_basis(i, p) * act_basis(i, q)))
            throw DiagError(name + ": action is not multiplicative at object " + std::to_string(i));
        }
    }
    for (MorId v = 0; v < c.num_morphisms(); ++v) {
      ObjId s = c.cod(v), t = c.dom(v);
      const Mat<F>& T = tr_of(v);
      if (T.rows() != dim_at(t) || T.cols() != dim_at(s))
        throw DiagError(name + ": transition has wrong shape on " + c.mor(v).name);
      if (c.is_identity(v) && !(T == Mat<F>::identity(fld, dim_at(s))))
        throw DiagError(name + ": identity morphism must carry the identity transition");
      // T is linear over the codomain algebra acting through the hom
      for (long b = 0; b < dia->at(s).dim; ++b)
        if (!(T * act_basis(s, b) == act_of(t, dia->hom_of(v).col(b)) * T))
          throw DiagError(name + ": transition on " + c.mor(v).name +
                          " is not linear over basis element " + std::to_string(b));
    }
    for (MorId g = 0; g < c.num_morphisms(); ++g)
      for (MorId f = 0; f < c.num_morphisms(); ++f) {
        if (!c.composable(g, f)) continue;
        if (!(tr_of(c.compose(g, f)) == tr_of(f) * tr_of(g)))
          throw DiagError(name + ": transitions break functoriality on " + c.mor(g).name + " o " +
                          c.mor(f).name);
      }
  }
};

// the diagram as a left module over itself
template <class F>
DiagModule<F> regular_module(const DiaPtr<F>& a) {
  DiagModule<F> m;
  m.fld = a->fld;
  m.name = a->name;
  m.dia = a;
  for (ObjId i = 0; i < a->base->num_objects(); ++i) {
    m.dims.push_back(a->at(i).dim);
    std::vector<Mat<F>> acts;
    for (long b = 0; b < a->at(i).dim; ++b) acts.push_back(a->at(i).left_mult_basis(b));
    m.act.push_back(std::move(acts));
  }
  m.tr = a->hom;
  return m;
}

template <class F>
DiagModule<F> pullback_module(const Functor& f, const DiaPtr<F>& pulled_dia, const DiagModule<F>& n,
                              std::string name) {
  DiagModule<F> m;
  m.fld = n.fld;
  m.name = std::move(name);
  m.dia = pulled_dia;
  for (ObjId o = 0; o < f.dom->num_objects(); ++o) {
    m.dims.push_back(n.dim_at(f.on_obj(o)));
    m.act.push_back(n.act[static_cast<size_t>(f.on_obj(o))]);
  }
  for (MorId v = 0; v < f.dom->num_morphisms(); ++v) m.tr.push_back(n.tr_of(f.on_mor(v)));
  return m;
}

template <class F>
DiagModule<F> subdivide_module(const Subdivision& sd, const DiaPtr<F>& prime_dia,
                               const DiagModule<F>& n, std::string name) {
  return pullback_module(sd.to_base, prime_dia, n, std::move(name));
}

// objectwise bimodules; transitions intertwine both actions through the homs
template <class F>
struct DiagBimodule {
  F fld;
  std::string name;
  DiaPtr<F> dia;
  std::vector<Bimodule<F>> mod;  // per object, over dia->alg[i]
  std::vector<Mat<F>> tr;

  long dim_at(ObjId i) const { return mod[static_cast<size_t>(i)].dim; }
  const Mat<F>& tr_of(MorId v) const { return tr[static_cast<size_t>(v)]; }

  void validate() const {
    if (!dia) throw DiagError(name + ": no diagram");
    const FinCat& c = *dia->base;
    if (static_cast<long>(mod.size()) != c.num_objects() ||
        static_cast<long>(tr.size()) != c.num_morphisms())
      throw DiagError(name + ": per-object and per-morphism tables have wrong size");
    for (ObjId i = 0; i < c.num_objects(); ++i) {
      if (mod[static_cast<size_t>(i)].alg != dia->alg[static_cast<size_t>(i)])
        throw DiagError(name + ": objectwise bimodule is not over the diagram algebra");
      mod[static_cast<size_t>(i)].validate();
    }
    for (MorId v = 0; v < c.num_morphisms(); ++v) {
      ObjId s = c.cod(v), t = c.dom(v);
      const Mat<F>& T = tr_of(v);
      if (T.rows() != dim_at(t) || T.cols() != dim_at(s))
        throw DiagError(name + ": transition has wrong shape on " + c.mor(v).name);
      if (c.is_identity(v) && !(T == Mat<F>::identity(fld, dim_at(s))))
        throw DiagError(name + ": identity morphism must carry the identity transition");
      for (long b = 0; b < dia->at(s).dim; ++b) {
        std::vector<typename F::Elem> im = dia->hom_of(v).col(b);
        if (!(T * mod[static_cast<size_t>(s)].left[static_cast<size_t>(b)] ==
              mod[static_cast<size_t>(t)].left_of(im) * T))
          throw DiagError(name + ": transition on " + c.mor(v).name + " breaks the left action");
        if (!(T * mod[static_cast<size_t>(s)].right[static_cast<size_t>(b)] ==
              mod[static_cast<size_t>(t)].right_of(im) * T))
          throw DiagError(name + ": transition on " + c.mor(v).name + " breaks the right action");
      }
    }
    for (MorId g = 0; g < c.num_morphisms(); ++g)
      for (MorId f = 0; f < c.num_morphisms(); ++f) {
        if (!c.composable(g, f)) continue;
        if (!(tr_of(c.compose(g, f)) == tr_of(f) * tr_of(g)))
          throw DiagError(name + ": transitions break functoriality on " + c.mor(g).name + " o " +
                          c.mor(f).name);
      }
  }
};

template <class F>
DiagBimodule<F> regular_diag_bimodule(const DiaPtr<F>& a) {
  DiagBimodule<F> m;
  m.fld = a->fld;
  m.name = a->name;
  m.dia = a;
  for (ObjId i = 0; i < a->base->num_objects(); ++i)
    m.mod.push_back(regular_bimodule(a->alg[static_cast<size_t>(i)]));
  m.tr = a->hom;
  return m;
}

template <class F>
DiagBimodule<F> pullback_bimodule(const Functor& f, const DiaPtr<F>& pulled_dia,
                                  const DiagBimodule<F>& n, std::string name) {
  DiagBimodule<F> m;
  m.fld = n.fld;
  m.name = std::move(name);
  m.dia = pulled_dia;
  for (ObjId o = 0; o < f.dom->num_objects(); ++o)
    m.mod.push_back(n.mod[static_cast<size_t>(f.on_obj(o))]);
  for (MorId v = 0; v < f.dom->num_morphisms(); ++v) m.tr.push_back(n.tr_of(f.on_mor(v)));
  return m;
}

template <class F>
DiagBimodule<F> subdivide_bimodule(const Subdivision& sd, const DiaPtr<F>& prime_dia,
                                   const DiagBimodule<F>& n, std::string name) {
  return pullback_bimodule(sd.to_base, prime_dia, n, std::move(name));
}

// a natural family of objectwise linear maps
template <class F>
struct DiagMap {
  std::vector<Mat<F>> comp;  // comp[i] : M^i -> N^i

  const Mat<F>& at(ObjId i) const { return comp[static_cast<size_t>(i)]; }
};

template <class F>
DiagMap<F> pullback_map(const Functor& f, const DiagMap<F>& eta) {
  DiagMap<F> m;
  for (ObjId o = 0; o < f.dom->num_objects(); ++o) m.comp.push_back(eta.at(f.on_obj(o)));
  return m;
}

template <class F>
bool is_module_map(const DiagModule<F>& m, const DiagModule<F>& n, const DiagMap<F>& eta,
                   std::string* why = nullptr) {
  const FinCat& c = *m.dia->base;
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (static_cast<long>(eta.comp.size()) != c.num_objects()) return fail("wrong component count");
  for (ObjId i = 0; i < c.num_objects(); ++i) {
    if (eta.at(i).rows() != n.dim_at(i) || eta.at(i).cols() != m.dim_at(i))
      return fail("component shape at object " + std::to_string(i));
    for (long b = 0; b < m.dia->at(i).dim; ++b)
      if (!(eta.at(i) * m.act_basis(i, b) == n.act_basis(i, b) * eta.at(i)))
        return fail("not linear at object " + std::to_string(i));
  }
  for (MorId v = 0; v < c.num_morphisms(); ++v)
    if (!(eta.at(c.dom(v)) * m.tr_of(v) == n.tr_of(v) * eta.at(c.cod(v))))
      return fail("naturality fails on " + c.mor(v).name);
  return true;
}

template <class F>
bool is_bimodule_map(const DiagBimodule<F>& m, const DiagBimodule<F>& n, const DiagMap<F>& eta,
                     std::string* why = nullptr) {
  const FinCat& c = *m.dia->base;
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  if (static_cast<long>(eta.comp.size()) != c.num_objects()) return fail("wrong component count");
  for (ObjId i = 0; i < c.num_objects(); ++i) {
    if (eta.at(i).rows() != n.dim_at(i) || eta.at(i).cols() != m.dim_at(i))
      return fail("component shape at object " + std::to_string(i));
    for (long b = 0; b < m.dia->at(i).dim; ++b) {
      if (!(eta.at(i) * m.mod[static_cast<size_t>(i)].left[static_cast<size_t>(b)] ==
            n.mod[static_cast<size_t>(i)].left[static_cast<size_t>(b)] * eta.at(i)))
        return fail("not left-linear at object " + std::to_string(i));
      if (!(eta.at(i) * m.mod[static_cast<size_t>(i)].right[static_cast<size_t>(b)] ==
            n.mod[static_cast<size_t>(i)].right[static_cast<size_t>(b)] * eta.at(i)))
        return fail("not right-linear at object " + std::to_string(i));
    }
  }
  for (MorId v = 0; v < c.num_morphisms(); ++v)
    if (!(eta.at(c.dom(v)) * m.tr_of(v) == n.tr_of(v) * eta.at(c.cod(v))))
      return fail("naturality fails on " + c.mor(v).name);
  return true;
}

namespace detail {

// linear system over the stacked unknowns eta^i, one row-major block per
// object; each added constraint reads eta^t X - Y eta^s = 0
template <class F>
struct HomSystem {
  const F& K;
  std::vector<long> rows_of, cols_of, offset;
  long total = 0;
  std::vector<std::vector<typename F::Elem>> eqs;

  HomSystem(const F& k, const std::vector<long>& nr, const std::vector<long>& nc) : K(k), rows_of(nr), cols_of(nc) {
    for (size_t i = 0; i < nr.size(); ++i) {
      offset.push_back(total);
      total += nr[i] * nc[i];
    }
  }

  long idx(long blk, long r, long c) const {
    return offset[static_cast<size_t>(blk)] + r * cols_of[static_cast<size_t>(blk)] + c;
  }

  void add(long t, const Mat<F>& x, long s, const Mat<F>& y) {
    for (long r = 0; r < rows_of[static_cast<size_t>(t)]; ++r)
      for (long c = 0; c < x.cols(); ++c) {
        std::vector<typename F::Elem> eq(static_cast<size_t>(total), K.zero());
        for (long k = 0; k < x.rows(); ++k)
          eq[static_cast<size_t>(idx(t, r, k))] =
              K.add(eq[static_cast<size_t>(idx(t, r, k))], x.at(k, c));
        for (long k = 0; k < y.cols(); ++k)
          eq[static_cast<size_t>(idx(s, k, c))] =
              K.sub(eq[static_cast<size_t>(idx(s, k, c))], y.at(r, k));
        eqs.push_back(std::move(eq));
      }
  }

  Mat<F> matrix() const {
    Mat<F> m(K, static_cast<long>(eqs.size()), total);
    for (long i = 0; i < m.rows(); ++i)
      for (long j = 0; j < total; ++j) m.at(i, j) = eqs[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
  }

  std::vector<Mat<F>> unpack(const std::vector<typename F::Elem>& flat) const {
    std::vector<Mat<F>> out;
    for (size_t i = 0; i < rows_of.size(); ++i) {
      Mat<F> m(K, rows_of[i], cols_of[i]);
      for (long r = 0; r < rows_of[i]; ++r)
        for (long c = 0; c < cols_of[i]; ++c) m.at(r, c) = flat[static_cast<size_t>(idx(static_cast<long>(i), r, c))];
      out.push_back(std::move(m));
    }
    return out;
  }
};

}  // namespace detail

// basis of the space of module maps M -> N over the same diagram
template <class F>
std::vector<DiagMap<F>> hom_space(const DiagModule<F>& m, const DiagModule<F>& n) {
  if (m.dia->base != n.dia->base) throw DiagError("hom_space: modules live over different bases");
  const FinCat& c = *m.dia->base;
  detail::HomSystem<F> sys(m.fld, n.dims, m.dims);
  for (ObjId i = 0; i < c.num_objects(); ++i)
    for (long b = 0; b < m.dia->at(i).dim; ++b) sys.add(i, m.act_basis(i, b), i, n.act_basis(i, b));
  for (MorId v = 0; v < c.num_morphisms(); ++v)
    if (!c.is_identity(v)) sys.add(c.dom(v), m.tr_of(v), c.cod(v), n.tr_of(v));
  Mat<F> ker = kernel_basis(sys.matrix());
  std::vector<DiagMap<F>> out;
  for (long j = 0; j < ker.cols(); ++j) out.push_back({sys.unpack(ker.col(j))});
  return out;
}

template <class F>
std::vector<DiagMap<F>> hom_space_bimod(const DiagBimodule<F>& m, const DiagBimodule<F>& n) {
  if (m.dia->base != n.dia->base) throw DiagError("hom_space: bimodules live over different bases");
  const FinCat& c = *m.dia->base;
  std::vector<long> mdims, ndims;
  for (ObjId i = 0; i < c.num_objects(); ++i) {
    mdims.push_back(m.dim_at(i));
    ndims.push_back(n.dim_at(i));
  }
  detail::HomSystem<F> sys(m.fld, ndims, mdims);
  for (ObjId i = 0; i < c.num_objects(); ++i)
    for (long b = 0; b < m.dia->at(i).dim; ++b) {
      sys.add(i, m.mod[static_cast<size_t>(i)].left[static_cast<size_t>(b)], i,
              n.mod[static_cast<size_t>(i)].left[static_cast<size_t>(b)]);
      sys.add(i, m.mod[static_cast<size_t>(i)].right[static_cast<size_t>(b)], i,
              n.mod[static_cast<size_t>(i)].right[static_cast<size_t>(b)]);
    }
  for (MorId v = 0; v < c.num_morphisms(); ++v)
    if (!c.is_identity(v)) sys.add(c.dom(v), m.tr_of(v), c.cod(v), n.tr_of(v));
  Mat<F> ker = kernel_basis(sys.matrix());
  std::vector<DiagMap<F>> out;
  for (long j = 0; j < ker.cols(); ++j) out.push_back({sys.unpack(ker.col(j))});
  return out;
}

// coordinates of a map family, for linear-independence checks across bases
template <class F>
std::vector<typename F::Elem> flatten_map(const DiagMap<F>& eta) {
  std::vector<typename F::Elem> out;
  for (const Mat<F>& m : eta.comp)
    for (long r = 0; r < m.rows(); ++r)
      for (long c = 0; c < m.cols(); ++c) out.push_back(m.at(r, c));
  return out;
}

}  // namespace cctlab
