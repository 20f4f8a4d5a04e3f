#pragma once

// Curated categories, algebras, diagrams, and seeded random generators shared
// by the verification suites, the command-line driver, and the tests.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/algkit.hpp"
#include "cctlab/diagram.hpp"
#include "cctlab/fincat.hpp"
#include "cctlab/homalg.hpp"
#include "cctlab/mat.hpp"

namespace cctlab {

// Draw from [lo, hi] using raw engine output; uniform_int_distribution is not
// pinned across standard libraries, and reports must be reproducible.
inline long pick(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

template <class F>
typename F::Elem scalar_of(const F& k, long v) {
  typename F::Elem r = k.zero();
  const typename F::Elem one = k.one();
  for (long i = 0; i < (v < 0 ? -v : v); ++i) r = k.add(r, one);
  return v < 0 ? k.neg(r) : r;
}

// ---------------------------------------------------------------------------
// categories

inline CatPtr chain_poset(int n) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    if (i + 1 < n) rel.push_back({i, i + 1});
  }
  return std::make_shared<FinCat>(FinCat::poset_from_relations(names, rel));
}

inline CatPtr square_poset() {
  return std::make_shared<FinCat>(
      FinCat::poset_from_relations({"0", "1", "2", "3"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
}

inline CatPtr discrete_poset(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return std::make_shared<FinCat>(FinCat::poset_from_relations(names, {}));
}

// two parallel arrows a => b: no non-identity endomorphisms, but not a poset
inline CatPtr parallel_pair() {
  std::vector<MorData> mors{{"id_a", 0, 0}, {"id_b", 1, 1}, {"u", 0, 1}, {"v", 0, 1}};
  std::map<std::pair<MorId, MorId>, MorId> table;
  table[{0, 0}] = 0;
  table[{1, 1}] = 1;
  table[{2, 0}] = 2;
  table[{1, 2}] = 2;
  table[{3, 0}] = 3;
  table[{1, 3}] = 3;
  return std::make_shared<FinCat>(FinCat({"a", "b"}, mors, {0, 1}, table));
}

// ---------------------------------------------------------------------------
// algebra family: every suite instance draws from these four

namespace detail {

template <class F>
AlgPtr<F> algebra_from_table(F fld, std::string name, std::vector<std::string> basis,
                             const std::vector<std::vector<std::vector<std::pair<long, long>>>>& table,
                             const std::vector<long>& unit) {
  Algebra<F> a;
  a.fld = fld;
  a.name = std::move(name);
  a.dim = static_cast<long>(basis.size());
  a.basis_names = std::move(basis);
  for (const auto& row : table) {
    a.product.emplace_back();
    for (const auto& cell : row) {
      a.product.back().emplace_back();
      for (auto [k, v] : cell) a.product.back().back().push_back({k, scalar_of(fld, v)});
    }
  }
  for (long v : unit) a.unit.push_back(scalar_of(fld, v));
  a.validate();
  return std::make_shared<const Algebra<F>>(std::move(a));
}

}  // namespace detail

template <class F>
AlgPtr<F> scalar_algebra(F fld) {
  return detail::algebra_from_table(fld, "k", {"1"}, {{{{0, 1}}}}, {1});
}

template <class F>
AlgPtr<F> dual_number_algebra(F fld) {
  return detail::algebra_from_table(fld, "dual", {"1", "x"}, {{{{0, 1}}, {{1, 1}}}, {{{1, 1}}, {}}},
                                    {1, 0});
}

template <class F>
AlgPtr<F> split_pair_algebra(F fld) {
  return detail::algebra_from_table(fld, "kxk", {"p", "q"}, {{{{0, 1}}, {}}, {{}, {{1, 1}}}},
                                    {1, 1});
}

template <class F>
AlgPtr<F> triangular2_algebra(F fld) {
  return detail::algebra_from_table(
      fld, "ut2", {"e11", "e12", "e22"},
      {{{{0, 1}}, {{1, 1}}, {}}, {{}, {}, {{1, 1}}}, {{}, {}, {{2, 1}}}}, {1, 0, 1});
}

template <class F>
Mat<F> unit_column(const AlgPtr<F>& a) {
  Mat<F> m(a->fld, a->dim, 1);
  for (long i = 0; i < a->dim; ++i) m.at(i, 0) = a->unit[static_cast<size_t>(i)];
  return m;
}

namespace detail {

template <class F, class HomOf>
DiaPtr<F> diagram_over(F fld, const CatPtr& base, std::vector<AlgPtr<F>> algs,
                       const HomOf& hom_of, std::string name) {
  Diagram<F> d;
  d.fld = fld;
  d.name = std::move(name);
  d.base = base;
  d.alg = std::move(algs);
  for (MorId v = 0; v < base->num_morphisms(); ++v) {
    if (base->is_identity(v))
      d.hom.push_back(Mat<F>::identity(fld, d.alg[static_cast<size_t>(base->dom(v))]->dim));
    else
      d.hom.push_back(hom_of(v));
  }
  d.validate();
  return std::make_shared<const Diagram<F>>(std::move(d));
}

}  // namespace detail

// A^0 = a0 and A^1 = a1 over the 2-chain, with phi on the only non-identity arrow
template <class F>
DiaPtr<F> two_chain_diagram(F fld, const CatPtr& base, const AlgPtr<F>& a0, const AlgPtr<F>& a1,
                            const Mat<F>& phi, std::string name) {
  return detail::diagram_over(fld, base, {a0, a1}, [&](MorId) { return phi; }, std::move(name));
}

template <class F>
struct NamedDiagram {
  std::string label;
  DiaPtr<F> dia;
};

// the five poset instances every comparison suite runs on
template <class F>
std::vector<NamedDiagram<F>> comparison_instances(F fld) {
  auto k = scalar_algebra(fld);
  auto dual = dual_number_algebra(fld);
  auto kk = split_pair_algebra(fld);
  std::vector<NamedDiagram<F>> out;
  out.push_back({"k over the 2-chain", constant_diagram(fld, chain_poset(2), k, "k-c2")});
  out.push_back({"dual numbers to k over the 2-chain",
                 two_chain_diagram(fld, chain_poset(2), dual, k, unit_column(dual), "dual-c2")});
  out.push_back({"k over the 3-chain", constant_diagram(fld, chain_poset(3), k, "k-c3")});
  out.push_back({"k x k to k over the 2-chain",
                 two_chain_diagram(fld, chain_poset(2), kk, k, unit_column(kk), "kxk-c2")});
  out.push_back({"k over the square", constant_diagram(fld, square_poset(), k, "k-sq")});
  return out;
}

// diagrams over chain posets, where random module sampling is available
template <class F>
std::vector<NamedDiagram<F>> chain_module_instances(F fld) {
  auto k = scalar_algebra(fld);
  auto dual = dual_number_algebra(fld);
  CatPtr c2 = chain_poset(2);
  CatPtr c3 = chain_poset(3);
  std::vector<NamedDiagram<F>> out;
  out.push_back({"k over the 2-chain", constant_diagram(fld, c2, k, "k-c2")});
  out.push_back({"dual numbers to k over the 2-chain",
                 two_chain_diagram(fld, c2, dual, k, unit_column(dual), "dual-c2")});
  out.push_back({"k over the 3-chain", constant_diagram(fld, c3, k, "k-c3")});
  out.push_back({"dual numbers down the 3-chain",
                 detail::diagram_over(
                     fld, c3, {dual, dual, k},
                     [&](MorId v) {
                       return c3->cod(v) == 2 ? unit_column(dual)
                                              : Mat<F>::identity(fld, dual->dim);
                     },
                     "dual-c3")});
  return out;
}

// ---------------------------------------------------------------------------
// random categories

// free category on a random acyclic quiver; retry until the path count fits
inline CatPtr random_delta(std::mt19937_64& rng, int max_objects, int max_arrows) {
  for (;;) {
    int n = static_cast<int>(pick(rng, 1, max_objects));
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("o" + std::to_string(i));
    std::vector<MorData> edges;
    if (n >= 2) {
      int e = static_cast<int>(pick(rng, 0, max_arrows));
      for (int t = 0; t < e; ++t) {
        ObjId i = static_cast<ObjId>(pick(rng, 0, n - 2));
        ObjId j = static_cast<ObjId>(pick(rng, i + 1, n - 1));
        edges.push_back({"e" + std::to_string(t), i, j});
      }
    }
    FinCat c = FinCat::free_on_quiver(names, edges);
    if (c.num_non_identity() <= max_arrows) return std::make_shared<FinCat>(std::move(c));
  }
}

inline CatPtr random_poset(std::mt19937_64& rng, int max_objects) {
  int n = static_cast<int>(pick(rng, 1, max_objects));
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 2 == 0) rel.push_back({i, j});
  return std::make_shared<FinCat>(FinCat::poset_from_relations(names, rel));
}

// ---------------------------------------------------------------------------
// random complexes and homotopy equivalences

template <class F>
Mat<F> random_change_of_basis(std::mt19937_64& rng, F fld, long n) {
  Mat<F> lo = Mat<F>::identity(fld, n), up = Mat<F>::identity(fld, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      if (i > j) lo.at(i, j) = scalar_of(fld, pick(rng, -1, 1));
      if (i < j) up.at(i, j) = scalar_of(fld, pick(rng, -1, 1));
    }
  return lo * up;
}

template <class F>
Mat<F> inverse_of(const Mat<F>& p) {
  auto inv = solve_mat(p, Mat<F>::identity(p.field(), p.rows()));
  if (!inv) throw LinAlgError("matrix is not invertible");
  return *inv;
}

namespace detail {

// canonical complex with h[n] zero-differential summands and e[n] identity
// pairs spanning degrees (n, n-1); basis order per degree: h | lower e | upper e
template <class F>
Complex<F> canonical_complex(F fld, const std::vector<long>& h, const std::vector<long>& e) {
  long top = static_cast<long>(h.size()) - 1;
  auto e_at = [&](long n) {
    return (n >= 1 && n < static_cast<long>(e.size())) ? e[static_cast<size_t>(n)] : 0;
  };
  std::vector<long> dims;
  for (long n = 0; n <= top; ++n) dims.push_back(h[static_cast<size_t>(n)] + e_at(n) + e_at(n + 1));
  std::vector<Mat<F>> diffs;
  for (long n = 1; n <= top; ++n) {
    Mat<F> d(fld, dims[static_cast<size_t>(n - 1)], dims[static_cast<size_t>(n)]);
    long dst = h[static_cast<size_t>(n - 1)] + e_at(n - 1);
    long src = h[static_cast<size_t>(n)];
    for (long t = 0; t < e_at(n); ++t) d.at(dst + t, src + t) = fld.one();
    diffs.push_back(std::move(d));
  }
  return Complex<F>(fld, std::move(dims), std::move(diffs));
}

template <class F>
Complex<F> conjugate_complex(std::mt19937_64& rng, const Complex<F>& x, std::vector<Mat<F>>& p,
                             std::vector<Mat<F>>& pinv) {
  const F& fld = x.field();
  p.clear();
  pinv.clear();
  for (long n = 0; n <= x.top(); ++n) {
    p.push_back(random_change_of_basis(rng, fld, x.dim(n)));
    pinv.push_back(inverse_of(p.back()));
  }
  std::vector<long> dims;
  std::vector<Mat<F>> diffs;
  for (long n = 0; n <= x.top(); ++n) dims.push_back(x.dim(n));
  for (long n = 1; n <= x.top(); ++n)
    diffs.push_back(p[static_cast<size_t>(n - 1)] * x.diff(n) * pinv[static_cast<size_t>(n)]);
  return Complex<F>(fld, std::move(dims), std::move(diffs));
}

}  // namespace detail

template <class F>
Complex<F> random_complex(std::mt19937_64& rng, F fld, long max_top, long max_total) {
  long top = pick(rng, 1, max_top);
  std::vector<long> h(static_cast<size_t>(top) + 1, 0), e(static_cast<size_t>(top) + 1, 0);
  long total = 0;
  for (long n = 0; n <= top; ++n) {
    long hn = pick(rng, 0, 1);
    if (total + hn <= max_total) {
      h[static_cast<size_t>(n)] = hn;
      total += hn;
    }
    if (n >= 1) {
      long en = pick(rng, 0, 2);
      if (total + 2 * en <= max_total) {
        e[static_cast<size_t>(n)] = en;
        total += 2 * en;
      }
    }
  }
  if (total == 0) h[0] = 1;
  std::vector<Mat<F>> p, pinv;
  return detail::conjugate_complex(rng, detail::canonical_complex(fld, h, e), p, pinv);
}

template <class F>
struct EquivalencePair {
  Complex<F> src, tgt;
  ChainMap<F> f;  // a homotopy equivalence src -> tgt
};

// src and tgt share homology; tgt carries extra contractible summands, and both
// sides are disguised by random changes of basis
template <class F>
EquivalencePair<F> random_equivalence(std::mt19937_64& rng, F fld) {
  long top = pick(rng, 1, 3);
  std::vector<long> h(static_cast<size_t>(top) + 1, 0), em(static_cast<size_t>(top) + 1, 0),
      ee(static_cast<size_t>(top) + 1, 0);
  for (long n = 0; n <= top; ++n) {
    h[static_cast<size_t>(n)] = pick(rng, 0, 1);
    if (n >= 1) {
      em[static_cast<size_t>(n)] = pick(rng, 0, 1);
      ee[static_cast<size_t>(n)] = pick(rng, 0, 1);
    }
  }
  if (h[0] + em[1] == 0) h[0] = 1;
  Complex<F> m0 = detail::canonical_complex(fld, h, em);
  // tgt adds the contractible pairs ee on top of src's canonical summands
  std::vector<long> hn = h, en = em;
  for (long n = 1; n <= top; ++n) en[static_cast<size_t>(n)] += ee[static_cast<size_t>(n)];
  Complex<F> n0 = detail::canonical_complex(fld, hn, en);

  // canonical inclusion: h summands and src pairs map to their copies in tgt
  ChainMap<F> f0{m0, n0, {}};
  auto e_at = [&](const std::vector<long>& e, long n) {
    return (n >= 1 && n <= top) ? e[static_cast<size_t>(n)] : 0;
  };
  for (long n = 0; n <= top; ++n) {
    Mat<F> blk(fld, n0.dim(n), m0.dim(n));
    long hcount = h[static_cast<size_t>(n)];
    for (long t = 0; t < hcount; ++t) blk.at(t, t) = fld.one();
    // lower pairs of degree n: src offset hcount, tgt offset hcount
    for (long t = 0; t < e_at(em, n); ++t) blk.at(hcount + t, hcount + t) = fld.one();
    // upper pairs of degree n: src offset hcount + em[n], tgt offset hcount + en[n]
    for (long t = 0; t < e_at(em, n + 1); ++t)
      blk.at(hcount + e_at(en, n) + t, hcount + e_at(em, n) + t) = fld.one();
    f0.maps.push_back(std::move(blk));
  }
  f0.validate();

  std::vector<Mat<F>> pm, pminv, pn, pninv;
  Complex<F> src = detail::conjugate_complex(rng, m0, pm, pminv);
  Complex<F> tgt = detail::conjugate_complex(rng, n0, pn, pninv);
  std::vector<Mat<F>> fmaps;
  for (long n = 0; n <= top; ++n)
    fmaps.push_back(pn[static_cast<size_t>(n)] * f0.at(n) * pminv[static_cast<size_t>(n)]);
  EquivalencePair<F> out{src, tgt, ChainMap<F>{std::move(src), std::move(tgt), std::move(fmaps)}};
  out.f.validate();
  return out;
}

// ---------------------------------------------------------------------------
// random diagram modules over a chain base

// Objectwise: a quotient of a free module by the submodule generated by one
// random vector. Transitions: random points of the exact intertwiner space on
// consecutive arrows, extended to composites multiplicatively.
template <class F>
DiagModule<F> random_chain_module(std::mt19937_64& rng, const DiaPtr<F>& dia, long max_copies,
                                  std::string name) {
  const F& fld = dia->fld;
  const CatPtr& c = dia->base;
  const long nobj = c->num_objects();
  for (ObjId i = 0; i < nobj; ++i)
    for (ObjId j = i + 1; j < nobj; ++j)
      if (c->hom(i, j).size() != 1 || !c->hom(j, i).empty())
        throw DiagError(name + ": module sampling needs a chain base");

  DiagModule<F> m;
  m.fld = fld;
  m.name = std::move(name);
  m.dia = dia;
  std::vector<QuotientPresentation<F>> q(static_cast<size_t>(nobj));
  for (ObjId i = 0; i < nobj; ++i) {
    const auto& a = dia->at(i);
    long copies = pick(rng, 1, max_copies);
    long amb = copies * a.dim;
    std::vector<Mat<F>> amb_act;
    for (long b = 0; b < a.dim; ++b)
      amb_act.push_back(kron(Mat<F>::identity(fld, copies), a.left_mult_basis(b)));

    Mat<F> gen(fld, amb, 1);
    bool nonzero = false;
    if (pick(rng, 0, 1) == 1) {
      for (long r = 0; r < amb; ++r) {
        long v = pick(rng, -2, 2);
        gen.at(r, 0) = scalar_of(fld, v);
        nonzero = nonzero || v != 0;
      }
    }
    Mat<F> span(fld, amb, 0);
    if (nonzero) {
      span = gen;
      for (bool grew = true; grew;) {
        grew = false;
        for (long b = 0; b < a.dim; ++b) {
          Mat<F> bigger = Mat<F>::hcat(span, amb_act[static_cast<size_t>(b)] * span);
          Rref<F> e = rref(bigger.transpose());
          if (e.rank > span.cols()) {
            // keep an independent column set to bound growth
            Mat<F> trimmed(fld, amb, e.rank);
            for (long cc = 0; cc < e.rank; ++cc)
              for (long rr = 0; rr < amb; ++rr) trimmed.at(rr, cc) = e.r.at(cc, rr);
            span = std::move(trimmed);
            grew = true;
          }
        }
      }
    }
    if (span.cols() >= amb) span = Mat<F>(fld, amb, 0);  // keep the module nonzero
    q[static_cast<size_t>(i)] = subspace_quotient(fld, amb, span);
    m.dims.push_back(q[static_cast<size_t>(i)].dim);
    m.act.emplace_back();
    for (long b = 0; b < a.dim; ++b) {
      Mat<F> red = q[static_cast<size_t>(i)].proj * amb_act[static_cast<size_t>(b)] *
                   q[static_cast<size_t>(i)].section;
      if (!(q[static_cast<size_t>(i)].proj * amb_act[static_cast<size_t>(b)] ==
            red * q[static_cast<size_t>(i)].proj))
        throw DiagError(m.name + ": sampled submodule is not action-stable");
      m.act.back().push_back(std::move(red));
    }
  }

  auto act_of = [&](ObjId i, const std::vector<typename F::Elem>& a) {
    Mat<F> r(fld, m.dims[static_cast<size_t>(i)], m.dims[static_cast<size_t>(i)]);
    for (long b = 0; b < dia->at(i).dim; ++b)
      if (!fld.is_zero(a[static_cast<size_t>(b)]))
        r = r + m.act[static_cast<size_t>(i)][static_cast<size_t>(b)].scaled(a[static_cast<size_t>(b)]);
    return r;
  };

  // consecutive transitions from the intertwiner kernel, composites forced
  std::vector<Mat<F>> step;
  for (ObjId i = 0; i + 1 < nobj; ++i) {
    MorId v = c->poset_arrow(i, i + 1);
    const Mat<F>& phi = dia->hom_of(v);
    long rows = m.dims[static_cast<size_t>(i)], cols = m.dims[static_cast<size_t>(i + 1)];
    detail::HomSystem<F> sys(fld, {rows}, {cols});
    for (long b = 0; b < dia->at(i + 1).dim; ++b) {
      std::vector<typename F::Elem> phib;
      for (long y = 0; y < dia->at(i).dim; ++y) phib.push_back(phi.at(y, b));
      sys.add(0, m.act[static_cast<size_t>(i + 1)][static_cast<size_t>(b)], 0, act_of(i, phib));
    }
    Mat<F> ker = kernel_basis(sys.matrix());
    Mat<F> t(fld, rows, cols);
    for (long kcol = 0; kcol < ker.cols(); ++kcol) {
      long coeff = pick(rng, -2, 2);
      if (coeff == 0) continue;
      for (long r = 0; r < rows; ++r)
        for (long cc = 0; cc < cols; ++cc)
          t.at(r, cc) = fld.add(t.at(r, cc), fld.mul(scalar_of(fld, coeff),
                                                     ker.at(r * cols + cc, kcol)));
    }
    step.push_back(std::move(t));
  }

  for (MorId v = 0; v < c->num_morphisms(); ++v) {
    ObjId i = c->dom(v), j = c->cod(v);
    if (c->is_identity(v)) {
      m.tr.push_back(Mat<F>::identity(fld, m.dims[static_cast<size_t>(i)]));
    } else {
      Mat<F> t = Mat<F>::identity(fld, m.dims[static_cast<size_t>(i)]);
      for (ObjId s = i; s < j; ++s) t = t * step[static_cast<size_t>(s)];
      m.tr.push_back(std::move(t));
    }
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// bar-resolution rows over a single algebra
//
// Row i resolves M_i by A^{(x)(h+1)} (x) M_i with the unit-insertion
// contraction; vertical maps apply the base differential in the module slot.
// The base differentials must commute with the action, and the grid is a
// width-truncation (rows_complete stays false).

template <class F>
DoubleComplex<F> bar_row_double_complex(const AlgPtr<F>& a, const Complex<F>& m,
                                        const std::vector<std::vector<Mat<F>>>& act, long width) {
  const F& fld = a->fld;
  const long adim = a->dim;
  const long N = m.top();
  if (static_cast<long>(act.size()) != N + 1)
    throw HomAlgError("bar rows: one action table per base degree");
  for (long i = 0; i <= N; ++i) {
    if (static_cast<long>(act[static_cast<size_t>(i)].size()) != adim)
      throw HomAlgError("bar rows: one action matrix per algebra basis element");
    for (const auto& mt : act[static_cast<size_t>(i)])
      if (mt.rows() != m.dim(i) || mt.cols() != m.dim(i))
        throw HomAlgError("bar rows: action matrix shape mismatch");
  }

  auto apow = [&](long h) {
    long p = 1;
    for (long t = 0; t < h; ++t) p *= adim;
    return p;
  };

  DoubleComplex<F> dc{fld, m, false, {}, {}, {}, {}, {}};
  for (long h = 0; h < width; ++h) {
    dc.dims.emplace_back();
    for (long i = 0; i <= N; ++i) dc.dims.back().push_back(apow(h + 1) * m.dim(i));
  }

  // horizontal differentials: merge adjacent slots, then act on the module
  dc.horiz.emplace_back();  // h = 0 placeholder
  for (long h = 1; h < width; ++h) {
    dc.horiz.emplace_back();
    for (long i = 0; i <= N; ++i) {
      const long md = m.dim(i);
      Mat<F> d(fld, apow(h) * md, apow(h + 1) * md);
      std::vector<long> slot(static_cast<size_t>(h) + 1);
      for (long col = 0; col < d.cols(); ++col) {
        long x = col % md;
        long rest = col / md;
        for (long s = h; s >= 0; --s) {
          slot[static_cast<size_t>(s)] = rest % adim;
          rest /= adim;
        }
        typename F::Elem sign = fld.one();
        for (long t = 0; t < h; ++t) {
          for (const auto& [kk, v] : a->prod(slot[static_cast<size_t>(t)], slot[static_cast<size_t>(t + 1)])) {
            long row = 0;
            for (long s = 0; s <= h; ++s) {
              if (s == t + 1) continue;
              row = row * adim + (s == t ? kk : slot[static_cast<size_t>(s)]);
            }
            row = row * md + x;
            d.at(row, col) = fld.add(d.at(row, col), fld.mul(sign, v));
          }
          sign = fld.neg(sign);
        }
        const Mat<F>& last = act[static_cast<size_t>(i)][static_cast<size_t>(slot[static_cast<size_t>(h)])];
        for (long y = 0; y < md; ++y) {
          if (fld.is_zero(last.at(y, x))) continue;
          long row = 0;
          for (long s = 0; s < h; ++s) row = row * adim + slot[static_cast<size_t>(s)];
          row = row * md + y;
          d.at(row, col) = fld.add(d.at(row, col), fld.mul(sign, last.at(y, x)));
        }
      }
      dc.horiz.back().push_back(std::move(d));
    }
  }

  for (long i = 0; i <= N; ++i) {
    const long md = m.dim(i);
    Mat<F> e(fld, md, adim * md);
    for (long b = 0; b < adim; ++b) {
      const Mat<F>& ab = act[static_cast<size_t>(i)][static_cast<size_t>(b)];
      for (long x = 0; x < md; ++x)
        for (long y = 0; y < md; ++y)
          if (!fld.is_zero(ab.at(y, x))) e.at(y, b * md + x) = fld.add(e.at(y, b * md + x), ab.at(y, x));
    }
    dc.aug.push_back(std::move(e));
  }

  for (long h = 0; h < width; ++h) {
    dc.vert.emplace_back();
    dc.vert.back().push_back(Mat<F>(fld, 0, 0));  // i = 0 unused
    for (long i = 1; i <= N; ++i)
      dc.vert.back().push_back(kron(Mat<F>::identity(fld, apow(h + 1)), m.diff(i)));
  }

  // contractions insert the unit in a fresh leading slot
  for (long h = 0; h < width; ++h) {
    dc.t.emplace_back();
    for (long i = 0; i <= N; ++i) {
      const long md = m.dim(i);
      long cols = (h == 0) ? md : apow(h) * md;
      Mat<F> th(fld, apow(h + 1) * md, cols);
      for (long col = 0; col < cols; ++col)
        for (long b = 0; b < adim; ++b)
          if (!fld.is_zero(a->unit[static_cast<size_t>(b)]))
            th.at(b * cols + col, col) = a->unit[static_cast<size_t>(b)];
      dc.t.back().push_back(std::move(th));
    }
  }
  return dc;
}

template <class F>
struct NamedDouble {
  std::string label;
  DoubleComplex<F> dc;
};

// curated grids: scalar, commutative with nilpotents, and a noncommutative one
template <class F>
std::vector<NamedDouble<F>> bar_double_instances(F fld, long width = 4) {
  std::vector<NamedDouble<F>> out;

  auto regular_rows = [&](const AlgPtr<F>& a, const Mat<F>& d1, long height,
                          const std::string& label) {
    std::vector<long> dims(static_cast<size_t>(height), a->dim);
    std::vector<Mat<F>> diffs(static_cast<size_t>(height) - 1, d1);
    Complex<F> base(fld, std::move(dims), std::move(diffs));
    std::vector<std::vector<Mat<F>>> act;
    for (long i = 0; i < height; ++i) {
      act.emplace_back();
      for (long b = 0; b < a->dim; ++b) act.back().push_back(a->left_mult_basis(b));
    }
    out.push_back({label, bar_row_double_complex(a, base, act, width)});
  };

  auto k = scalar_algebra(fld);
  regular_rows(k, Mat<F>::identity(fld, 1), 2, "k with the identity tower");
  auto dual = dual_number_algebra(fld);
  regular_rows(dual, dual->left_mult_basis(1), 2, "dual numbers with x-multiplication");
  regular_rows(dual, dual->left_mult_basis(1), 3, "dual numbers, height-3 x-tower");
  auto ut2 = triangular2_algebra(fld);
  regular_rows(ut2, ut2->right_mult_basis(1), 2, "triangular 2x2 with the corner map");
  return out;
}

}  // namespace cctlab
