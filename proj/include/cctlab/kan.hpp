#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/algkit.hpp"
#include "cctlab/diagram.hpp"
#include "cctlab/fincat.hpp"
#include "cctlab/mat.hpp"

namespace cctlab {

// one slice summand A^i (x) N^sigma, reduced by the tensor-balancing relations
template <class F>
struct KanComponent {
  MorId w = -1;     // w : i -> f(sigma) in the target category
  ObjId sigma = -1;
  QuotientPresentation<F> balance;
  long offset = 0;  // column offset within the direct sum of reduced summands
};

template <class F>
struct KanObject {
  std::shared_ptr<const CommaCat> comma;
  std::vector<KanComponent<F>> comp;  // indexed by comma object id
  long sum_dim = 0;
  QuotientPresentation<F> glue;       // coequalizer over comma morphisms
};

// left pushforward of a module along a functor, with the presentation data
// kept so elements can be traced back through the quotients
template <class F>
struct KanExtension {
  Functor f;
  DiaPtr<F> target;
  DiagModule<F> out;
  std::vector<KanObject<F>> at;  // per object of the target base
};

namespace detail {

// q.proj * raw must factor through the source quotient; returns the reduced
// map and checks the factorization, which certifies that raw preserves the
// relation subspaces
template <class F>
Mat<F> descend(const Mat<F>& raw, const QuotientPresentation<F>& src,
               const QuotientPresentation<F>& tgt, const std::string& what) {
  Mat<F> reduced = tgt.proj * raw * src.section;
  if (!(tgt.proj * raw == reduced * src.proj))
    throw DiagError(what + ": map does not preserve the quotient relations");
  return reduced;
}

template <class F>
void place_block(Mat<F>& big, long r0, long c0, const Mat<F>& blk) {
  for (long r = 0; r < blk.rows(); ++r)
    for (long c = 0; c < blk.cols(); ++c) big.at(r0 + r, c0 + c) = blk.at(r, c);
}

}  // namespace detail

// left Kan extension of n along f, where n lives over the pullback of a
template <class F>
KanExtension<F> f_shriek(const Functor& f, const DiaPtr<F>& a, const DiagModule<F>& n,
                         std::string name) {
  const F& K = a->fld;
  if (n.dia->base != f.dom) throw DiagError("f_shriek: module base is not the functor domain");
  if (a->base != f.cod) throw DiagError("f_shriek: diagram base is not the functor codomain");
  for (ObjId s = 0; s < f.dom->num_objects(); ++s)
    if (n.dia->alg[static_cast<size_t>(s)] != a->alg[static_cast<size_t>(f.on_obj(s))])
      throw DiagError("f_shriek: module is not over the pulled-back diagram");

  const FinCat& d = *f.cod;
  KanExtension<F> ke;
  ke.f = f;
  ke.target = a;

  for (ObjId i = 0; i < d.num_objects(); ++i) {
    const Algebra<F>& ai = a->at(i);
    KanObject<F> ko;
    ko.comma = std::make_shared<const CommaCat>(comma_category(f, i));
    const FinCat& cc = *ko.comma->cat;

    for (ObjId o = 0; o < cc.num_objects(); ++o) {
      const CommaObject& co = ko.comma->objects[static_cast<size_t>(o)];
      long nd = n.dim_at(co.sigma);
      long amb = ai.dim * nd;
      const Algebra<F>& mid = a->at(f.on_obj(co.sigma));
      const Mat<F>& phi_w = a->hom_of(co.w);  // A^{f sigma} -> A^i
      // balance a (x) b.m with a.phi(b) (x) m over the middle algebra
      Mat<F> rel(K, amb, mid.dim * amb);
      long col = 0;
      for (long b = 0; b < mid.dim; ++b) {
        Mat<F> ract = ai.right_mult(phi_w.col(b));  // right multiply by phi(e_b)
        const Mat<F>& lact = n.act_basis(co.sigma, b);
        for (long p = 0; p < ai.dim; ++p)
          for (long m = 0; m < nd; ++m, ++col) {
            for (long k = 0; k < ai.dim; ++k)
              rel.at(k * nd + m, col) = K.add(rel.at(k * nd + m, col), ract.at(k, p));
            for (long y = 0; y < nd; ++y)
              rel.at(p * nd + y, col) = K.sub(rel.at(p * nd + y, col), lact.at(y, m));
          }
      }
      KanComponent<F> kc;
      kc.w = co.w;
      kc.sigma = co.sigma;
      kc.balance = subspace_quotient(K, amb, rel);
      kc.offset = ko.sum_dim;
      ko.sum_dim += kc.balance.dim;
      ko.comp.push_back(std::move(kc));
    }

    // identify each reduced summand with its image under the slice maps
    std::vector<std::vector<typename F::Elem>> cols;
    for (MorId m = 0; m < cc.num_morphisms(); ++m) {
      if (cc.is_identity(m)) continue;
      const KanComponent<F>& src = ko.comp[static_cast<size_t>(cc.cod(m))];
      const KanComponent<F>& tgt = ko.comp[static_cast<size_t>(cc.dom(m))];
      MorId v = ko.comma->carrier[static_cast<size_t>(m)];
      Mat<F> raw = kron(Mat<F>::identity(K, ai.dim), n.tr_of(v));
      Mat<F> red = detail::descend(raw, src.balance, tgt.balance,
                                   name + ": slice map over " + f.dom->mor(v).name);
      for (long j = 0; j < src.balance.dim; ++j) {
        std::vector<typename F::Elem> c(static_cast<size_t>(ko.sum_dim), K.zero());
        c[static_cast<size_t>(src.offset + j)] = K.one();
        for (long r = 0; r < tgt.balance.dim; ++r)
          c[static_cast<size_t>(tgt.offset + r)] = K.sub(c[static_cast<size_t>(tgt.offset + r)], red.at(r, j));
        cols.push_back(std::move(c));
      }
    }
    Mat<F> glue_rel(K, ko.sum_dim, static_cast<long>(cols.size()));
    for (long j = 0; j < glue_rel.cols(); ++j) glue_rel.set_col(j, cols[static_cast<size_t>(j)]);
    ko.glue = subspace_quotient(K, ko.sum_dim, glue_rel);
    ke.at.push_back(std::move(ko));
  }

  DiagModule<F> out;
  out.fld = K;
  out.name = std::move(name);
  out.dia = a;
  for (ObjId i = 0; i < d.num_objects(); ++i) out.dims.push_back(ke.at[static_cast<size_t>(i)].glue.dim);

  for (ObjId i = 0; i < d.num_objects(); ++i) {
    const KanObject<F>& ko = ke.at[static_cast<size_t>(i)];
    const Algebra<F>& ai = a->at(i);
    std::vector<Mat<F>> acts;
    for (long b = 0; b < ai.dim; ++b) {
      Mat<F> big(K, ko.sum_dim, ko.sum_dim);
      for (const KanComponent<F>& kc : ko.comp) {
        Mat<F> raw = kron(ai.left_mult_basis(b), Mat<F>::identity(K, n.dim_at(kc.sigma)));
        Mat<F> red = detail::descend(raw, kc.balance, kc.balance, out.name + ": action");
        detail::place_block(big, kc.offset, kc.offset, red);
      }
      acts.push_back(detail::descend(big, ko.glue, ko.glue, out.name + ": action past gluing"));
    }
    out.act.push_back(std::move(acts));
  }

  for (MorId v = 0; v < d.num_morphisms(); ++v) {
    ObjId i = d.cod(v), h = d.dom(v);
    const KanObject<F>& from = ke.at[static_cast<size_t>(i)];
    const KanObject<F>& to = ke.at[static_cast<size_t>(h)];
    Functor re = comma_reindex(f, v, *from.comma, *to.comma);
    Mat<F> big(K, to.sum_dim, from.sum_dim);
    for (ObjId o = 0; o < from.comma->cat->num_objects(); ++o) {
      const KanComponent<F>& src = from.comp[static_cast<size_t>(o)];
      const KanComponent<F>& tgt = to.comp[static_cast<size_t>(re.on_obj(o))];
      Mat<F> raw = kron(a->hom_of(v), Mat<F>::identity(K, n.dim_at(src.sigma)));
      Mat<F> red = detail::descend(raw, src.balance, tgt.balance,
                                   out.name + ": transition over " + d.mor(v).name);
      detail::place_block(big, tgt.offset, src.offset, red);
    }
    Mat<F> t = to.glue.proj * big * from.glue.section;
    if (!(to.glue.proj * big == t * from.glue.proj))
      throw DiagError(out.name + ": transition over " + d.mor(v).name + " does not respect gluing");
    out.tr.push_back(std::move(t));
  }

  ke.out = std::move(out);
  return ke;
}

// unit of the pushforward adjunction: n -> pullback of the extension, with
// component at sigma landing in the summand indexed by the identity slice
template <class F>
DiagMap<F> kan_unit(const KanExtension<F>& ke, const DiagModule<F>& n) {
  const F& K = ke.target->fld;
  DiagMap<F> eta;
  for (ObjId s = 0; s < ke.f.dom->num_objects(); ++s) {
    ObjId i = ke.f.on_obj(s);
    const KanObject<F>& ko = ke.at[static_cast<size_t>(i)];
    const Algebra<F>& ai = ke.target->at(i);
    ObjId o = ko.comma->object_index.at({ke.f.cod->identity(i), s});
    const KanComponent<F>& kc = ko.comp[static_cast<size_t>(o)];
    long nd = n.dim_at(s);
    Mat<F> amb(K, ko.sum_dim, nd);
    for (long m = 0; m < nd; ++m) {
      std::vector<typename F::Elem> vec(static_cast<size_t>(ai.dim * nd), K.zero());
      for (long p = 0; p < ai.dim; ++p) vec[static_cast<size_t>(p * nd + m)] = ai.unit[static_cast<size_t>(p)];
      std::vector<typename F::Elem> q = kc.balance.proj.apply(vec);
      for (long r = 0; r < kc.balance.dim; ++r) amb.at(kc.offset + r, m) = q[static_cast<size_t>(r)];
    }
    eta.comp.push_back(ko.glue.proj * amb);
  }
  return eta;
}

// counit on a pushed-forward pullback: act after transporting along the slice
template <class F>
DiagMap<F> kan_counit(const KanExtension<F>& ke, const DiagModule<F>& m) {
  const F& K = ke.target->fld;
  if (m.dia != ke.target) throw DiagError("kan_counit: module is not over the target diagram");
  DiagMap<F> eps;
  for (ObjId i = 0; i < ke.f.cod->num_objects(); ++i) {
    const KanObject<F>& ko = ke.at[static_cast<size_t>(i)];
    const Algebra<F>& ai = ke.target->at(i);
    Mat<F> amb(K, m.dim_at(i), ko.sum_dim);
    for (const KanComponent<F>& kc : ko.comp) {
      Mat<F> raw(K, m.dim_at(i), 0);
      for (long p = 0; p < ai.dim; ++p)
        raw = Mat<F>::hcat(raw, m.act_basis(i, p) * m.tr_of(kc.w));
      Mat<F> red = raw * kc.balance.section;
      if (!(red * kc.balance.proj == raw))
        throw DiagError("kan_counit: evaluation does not kill the balancing relations");
      detail::place_block(amb, 0, kc.offset, red);
    }
    Mat<F> e = amb * ko.glue.section;
    if (!(e * ko.glue.proj == amb))
      throw DiagError("kan_counit: evaluation does not respect gluing");
    eps.comp.push_back(std::move(e));
  }
  return eps;
}

// one direction of the adjunction bijection: a map out of the extension
// corresponds to its restriction precomposed with the unit
template <class F>
DiagMap<F> adjoint_transpose(const KanExtension<F>& ke, const DiagMap<F>& unit,
                             const DiagMap<F>& theta) {
  DiagMap<F> out;
  for (ObjId s = 0; s < ke.f.dom->num_objects(); ++s)
    out.comp.push_back(theta.at(ke.f.on_obj(s)) * unit.at(s));
  return out;
}

// functoriality of the pushforward on a map of modules over the pullback
template <class F>
DiagMap<F> kan_on_map(const KanExtension<F>& src, const KanExtension<F>& tgt,
                      const DiagMap<F>& theta) {
  const F& K = src.target->fld;
  DiagMap<F> out;
  for (ObjId i = 0; i < src.f.cod->num_objects(); ++i) {
    const KanObject<F>& ks = src.at[static_cast<size_t>(i)];
    const KanObject<F>& kt = tgt.at[static_cast<size_t>(i)];
    if (ks.comma->objects.size() != kt.comma->objects.size())
      throw DiagError("kan_on_map: extensions have mismatched slice categories");
    const Algebra<F>& ai = src.target->at(i);
    Mat<F> big(K, kt.sum_dim, ks.sum_dim);
    for (size_t o = 0; o < ks.comp.size(); ++o) {
      const KanComponent<F>& cs = ks.comp[o];
      const KanComponent<F>& ct = kt.comp[o];
      Mat<F> raw = kron(Mat<F>::identity(K, ai.dim), theta.at(cs.sigma));
      Mat<F> red = detail::descend(raw, cs.balance, ct.balance, "kan_on_map component");
      detail::place_block(big, ct.offset, cs.offset, red);
    }
    Mat<F> t = kt.glue.proj * big * ks.glue.section;
    if (!(kt.glue.proj * big == t * ks.glue.proj))
      throw DiagError("kan_on_map: map does not respect gluing");
    out.comp.push_back(std::move(t));
  }
  return out;
}

}  // namespace cctlab
