#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/algkit.hpp"
#include "cctlab/diagram.hpp"
#include "cctlab/fincat.hpp"
#include "cctlab/mat.hpp"

namespace cctlab {

// flattened algebra of a diagram over a poset: one block per comparable pair
// (i, j), each carrying a copy of the algebra at the smaller index i
template <class F>
struct ShriekAlgebra {
  AlgPtr<F> alg;
  DiaPtr<F> dia;
  std::vector<std::pair<ObjId, ObjId>> pairs;         // lexicographic
  std::vector<long> offset;                           // per pair, into alg coordinates
  std::map<std::pair<ObjId, ObjId>, long> pair_index;
};

template <class F>
ShriekAlgebra<F> shriek_algebra(const DiaPtr<F>& dia, std::string name) {
  const F& K = dia->fld;
  const FinCat& c = *dia->base;
  if (c.classify() != CatKind::Poset)
    throw DiagError(name + ": flattening needs a poset base");

  ShriekAlgebra<F> sa;
  sa.dia = dia;
  Algebra<F> a;
  a.fld = K;
  a.name = std::move(name);
  a.dim = 0;
  for (ObjId i = 0; i < c.num_objects(); ++i)
    for (ObjId j = 0; j < c.num_objects(); ++j) {
      if (c.hom(i, j).empty()) continue;
      sa.pair_index[{i, j}] = static_cast<long>(sa.pairs.size());
      sa.pairs.push_back({i, j});
      sa.offset.push_back(a.dim);
      for (long b = 0; b < dia->at(i).dim; ++b)
        a.basis_names.push_back(dia->at(i).basis_names[static_cast<size_t>(b)] + "@" +
                                c.obj_name(i) + "<=" + c.obj_name(j));
      a.dim += dia->at(i).dim;
    }

  a.unit.assign(static_cast<size_t>(a.dim), K.zero());
  for (size_t p = 0; p < sa.pairs.size(); ++p) {
    auto [i, j] = sa.pairs[p];
    if (i != j) continue;
    const auto& u = dia->at(i).unit;
    for (long b = 0; b < dia->at(i).dim; ++b)
      a.unit[static_cast<size_t>(sa.offset[p] + b)] = u[static_cast<size_t>(b)];
  }

  a.product.assign(static_cast<size_t>(a.dim),
                   std::vector<std::vector<typename Algebra<F>::Term>>(static_cast<size_t>(a.dim)));
  for (size_t p1 = 0; p1 < sa.pairs.size(); ++p1) {
    auto [h, i] = sa.pairs[p1];
    const Algebra<F>& ah = dia->at(h);
    const Mat<F>& phi = dia->hom_of(c.poset_arrow(h, i));  // A^i -> A^h
    for (size_t p2 = 0; p2 < sa.pairs.size(); ++p2) {
      auto [j, l] = sa.pairs[p2];
      if (i != j) continue;  // blocks only compose when the inner indices meet
      long t = sa.pair_index.at({h, l});
      for (long x = 0; x < ah.dim; ++x)
        for (long y = 0; y < dia->at(j).dim; ++y) {
          std::vector<typename F::Elem> prod = ah.mul(ah.basis_vec(x), phi.col(y));
          auto& cell = a.product[static_cast<size_t>(sa.offset[p1] + x)]
                                [static_cast<size_t>(sa.offset[p2] + y)];
          for (long k = 0; k < ah.dim; ++k)
            if (!K.is_zero(prod[static_cast<size_t>(k)]))
              cell.push_back({sa.offset[static_cast<size_t>(t)] + k, prod[static_cast<size_t>(k)]});
        }
    }
  }
  sa.alg = std::make_shared<const Algebra<F>>(std::move(a));
  return sa;
}

// flattened bimodule over the flattened algebra, one block of M^i per pair
template <class F>
struct ShriekBimodule {
  Bimodule<F> mod;
  std::vector<long> offset;  // per pair, into mod coordinates
};

template <class F>
ShriekBimodule<F> shriek_bimodule(const ShriekAlgebra<F>& sa, const DiagBimodule<F>& m,
                                  std::string name) {
  const F& K = sa.dia->fld;
  const FinCat& c = *sa.dia->base;
  if (m.dia != sa.dia) throw DiagError(name + ": bimodule is not over the flattened diagram");

  ShriekBimodule<F> sm;
  Bimodule<F>& out = sm.mod;
  out.fld = K;
  out.name = std::move(name);
  out.alg = sa.alg;
  out.dim = 0;
  for (auto [i, j] : sa.pairs) {
    (void)j;
    sm.offset.push_back(out.dim);
    out.dim += m.dim_at(i);
  }

  out.left.assign(static_cast<size_t>(sa.alg->dim), Mat<F>(K, out.dim, out.dim));
  out.right.assign(static_cast<size_t>(sa.alg->dim), Mat<F>(K, out.dim, out.dim));
  for (size_t p1 = 0; p1 < sa.pairs.size(); ++p1) {
    auto [h, i] = sa.pairs[p1];
    MorId v = c.poset_arrow(h, i);
    for (size_t p2 = 0; p2 < sa.pairs.size(); ++p2) {
      auto [i2, j] = sa.pairs[p2];
      if (i2 != i) continue;
      long t = sa.pair_index.at({h, j});
      // algebra block at (h, i) moves module block (i, j) to (h, j)
      for (long b = 0; b < sa.dia->at(h).dim; ++b) {
        Mat<F> blk = m.mod[static_cast<size_t>(h)].left[static_cast<size_t>(b)] * m.tr_of(v);
        for (long r = 0; r < blk.rows(); ++r)
          for (long cl = 0; cl < blk.cols(); ++cl)
            out.left[static_cast<size_t>(sa.offset[p1] + b)]
                .at(sm.offset[static_cast<size_t>(t)] + r, sm.offset[p2] + cl) = blk.at(r, cl);
      }
      // module block at (h, i) absorbs algebra block (i, j) into (h, j)
      for (long b = 0; b < sa.dia->at(i).dim; ++b) {
        Mat<F> blk = m.mod[static_cast<size_t>(h)].right_of(sa.dia->hom_of(v).col(b));
        for (long r = 0; r < blk.rows(); ++r)
          for (long cl = 0; cl < blk.cols(); ++cl)
            out.right[static_cast<size_t>(sa.offset[p2] + b)]
                .at(sm.offset[static_cast<size_t>(t)] + r, sm.offset[p1] + cl) = blk.at(r, cl);
      }
    }
  }
  return sm;
}

// flattening of a map of diagram bimodules: one diagonal block per pair
template <class F>
Mat<F> shriek_map(const ShriekAlgebra<F>& sa, const ShriekBimodule<F>& m,
                  const ShriekBimodule<F>& n, const DiagMap<F>& eta) {
  const F& K = sa.dia->fld;
  Mat<F> out(K, n.mod.dim, m.mod.dim);
  for (size_t p = 0; p < sa.pairs.size(); ++p) {
    const Mat<F>& blk = eta.at(sa.pairs[p].first);
    for (long r = 0; r < blk.rows(); ++r)
      for (long c = 0; c < blk.cols(); ++c)
        out.at(n.offset[p] + r, m.offset[p] + c) = blk.at(r, c);
  }
  return out;
}

}  // namespace cctlab
