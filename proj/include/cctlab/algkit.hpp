#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/field.hpp"
#include "cctlab/fincat.hpp"
#include "cctlab/mat.hpp"
#include "cctlab/sparse.hpp"

namespace cctlab {

struct AlgError : std::runtime_error {
  explicit AlgError(const std::string& w) : std::runtime_error(w) {}
};

// finite-dimensional associative unital algebra given by structure constants
template <class F>
struct Algebra {
  using Elem = typename F::Elem;
  using Term = std::pair<long, Elem>;

  F fld;
  std::string name;
  long dim = 0;
  std::vector<std::string> basis_names;
  std::vector<std::vector<std::vector<Term>>> product;  // product[i][j] = e_i * e_j
  std::vector<Elem> unit;

  const std::vector<Term>& prod(long i, long j) const {
    return product[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }

  std::vector<Elem> mul(const std::vector<Elem>& x, const std::vector<Elem>& y) const {
    std::vector<Elem> r(static_cast<size_t>(dim), fld.zero());
    for (long i = 0; i < dim; ++i) {
      if (fld.is_zero(x[static_cast<size_t>(i)])) continue;
      for (long j = 0; j < dim; ++j) {
        if (fld.is_zero(y[static_cast<size_t>(j)])) continue;
        Elem c = fld.mul(x[static_cast<size_t>(i)], y[static_cast<size_t>(j)]);
        for (const auto& [k, v] : prod(i, j))
          r[static_cast<size_t>(k)] = fld.add(r[static_cast<size_t>(k)], fld.mul(c, v));
      }
    }
    return r;
  }

  Mat<F> left_mult_basis(long i) const {
    Mat<F> m(fld, dim, dim);
    for (long j = 0; j < dim; ++j)
      for (const auto& [k, v] : prod(i, j)) m.at(k, j) = fld.add(m.at(k, j), v);
    return m;
  }

  Mat<F> right_mult_basis(long i) const {
    Mat<F> m(fld, dim, dim);
    for (long j = 0; j < dim; ++j)
      for (const auto& [k, v] : prod(j, i)) m.at(k, j) = fld.add(m.at(k, j), v);
    return m;
  }

  Mat<F> left_mult(const std::vector<Elem>& a) const {
    Mat<F> m(fld, dim, dim);
    for (long i = 0; i < dim; ++i)
      if (!fld.is_zero(a[static_cast<size_t>(i)]))
        m = m + left_mult_basis(i).scaled(a[static_cast<size_t>(i)]);
    return m;
  }

  Mat<F> right_mult(const std::vector<Elem>& a) const {
    Mat<F> m(fld, dim, dim);
    for (long i = 0; i < dim; ++i)
      if (!fld.is_zero(a[static_cast<size_t>(i)]))
        m = m + right_mult_basis(i).scaled(a[static_cast<size_t>(i)]);
    return m;
  }

  std::vector<Elem> basis_vec(long i) const {
    std::vector<Elem> v(static_cast<size_t>(dim), fld.zero());
    v[static_cast<size_t>(i)] = fld.one();
    return v;
  }

  void validate() const {
    if (static_cast<long>(basis_names.size()) != dim ||
        static_cast<long>(product.size()) != dim || static_cast<long>(unit.size()) != dim)
      throw AlgError(name + ": structure tables have wrong size");
    for (const auto& row : product) {
      if (static_cast<long>(row.size()) != dim) throw AlgError(name + ": product table ragged");
      for (const auto& terms : row)
        for (const auto& [k, v] : terms)
          if (k < 0 || k >= dim || fld.is_zero(v))
            throw AlgError(name + ": malformed product term");
    }
    for (long i = 0; i < dim; ++i) {
      std::vector<Elem> li = mul(unit, basis_vec(i));
      std::vector<Elem> ri = mul(basis_vec(i), unit);
      for (long k = 0; k < dim; ++k) {
        Elem want = (k == i) ? fld.one() : fld.zero();
        if (!fld.eq(li[static_cast<size_t>(k)], want) || !fld.eq(ri[static_cast<size_t>(k)], want))
          throw AlgError(name + ": unit fails on basis element " + std::to_string(i));
      }
    }
    for (long i = 0; i < dim; ++i)
      for (long j = 0; j < dim; ++j) {
        std::vector<Elem> ij = mul(basis_vec(i), basis_vec(j));
        for (long k = 0; k < dim; ++k) {
          std::vector<Elem> a = mul(ij, basis_vec(k));
          std::vector<Elem> b = mul(basis_vec(i), mul(basis_vec(j), basis_vec(k)));
          for (long t = 0; t < dim; ++t)
            if (!fld.eq(a[static_cast<size_t>(t)], b[static_cast<size_t>(t)]))
              throw AlgError(name + ": associativity fails on (" + std::to_string(i) + "," +
                             std::to_string(j) + "," + std::to_string(k) + ")");
        }
      }
  }

  Algebra opposite() const {
    Algebra o = *this;
    o.name = name + "^op";
    for (long i = 0; i < dim; ++i)
      for (long j = 0; j < dim; ++j)
        o.product[static_cast<size_t>(i)][static_cast<size_t>(j)] = prod(j, i);
    return o;
  }
};

template <class F>
using AlgPtr = std::shared_ptr<const Algebra<F>>;

// basis (i,j) ~ i*b.dim + j with componentwise product
template <class F>
Algebra<F> tensor_algebra(const Algebra<F>& a, const Algebra<F>& b) {
  Algebra<F> t;
  t.fld = a.fld;
  t.name = a.name + "(x)" + b.name;
  t.dim = a.dim * b.dim;
  for (long i = 0; i < a.dim; ++i)
    for (long j = 0; j < b.dim; ++j)
      t.basis_names.push_back(a.basis_names[static_cast<size_t>(i)] + "(x)" +
                              b.basis_names[static_cast<size_t>(j)]);
  t.product.assign(static_cast<size_t>(t.dim), std::vector<std::vector<typename Algebra<F>::Term>>(
                                                   static_cast<size_t>(t.dim)));
  for (long i1 = 0; i1 < a.dim; ++i1)
    for (long j1 = 0; j1 < b.dim; ++j1)
      for (long i2 = 0; i2 < a.dim; ++i2)
        for (long j2 = 0; j2 < b.dim; ++j2) {
          std::vector<typename Algebra<F>::Term> terms;
          for (const auto& [k1, v1] : a.prod(i1, i2))
            for (const auto& [k2, v2] : b.prod(j1, j2))
              terms.push_back({k1 * b.dim + k2, a.fld.mul(v1, v2)});
          t.product[static_cast<size_t>(i1 * b.dim + j1)][static_cast<size_t>(i2 * b.dim + j2)] =
              std::move(terms);
        }
  t.unit.assign(static_cast<size_t>(t.dim), a.fld.zero());
  for (long i = 0; i < a.dim; ++i)
    for (long j = 0; j < b.dim; ++j)
      t.unit[static_cast<size_t>(i * b.dim + j)] =
          a.fld.mul(a.unit[static_cast<size_t>(i)], b.unit[static_cast<size_t>(j)]);
  return t;
}

template <class F>
Algebra<F> enveloping_algebra(const Algebra<F>& a) {
  Algebra<F> e = tensor_algebra(a, a.opposite());
  e.name = a.name + "^e";
  return e;
}

// linear span of the morphisms; composable pairs multiply, others vanish
template <class F>
Algebra<F> category_algebra(F fld, const CatPtr& c) {
  Algebra<F> a;
  a.fld = fld;
  a.name = "k[" + std::to_string(c->num_objects()) + "obj]";
  a.dim = c->num_morphisms();
  for (MorId m = 0; m < c->num_morphisms(); ++m) a.basis_names.push_back(c->mor(m).name);
  a.product.assign(static_cast<size_t>(a.dim), std::vector<std::vector<typename Algebra<F>::Term>>(
                                                   static_cast<size_t>(a.dim)));
  for (MorId g = 0; g < a.dim; ++g)
    for (MorId f = 0; f < a.dim; ++f)
      if (c->composable(g, f))
        a.product[static_cast<size_t>(g)][static_cast<size_t>(f)] = {{c->compose(g, f), fld.one()}};
  a.unit.assign(static_cast<size_t>(a.dim), fld.zero());
  for (ObjId o = 0; o < c->num_objects(); ++o)
    a.unit[static_cast<size_t>(c->identity(o))] = fld.one();
  return a;
}

template <class F>
long center_dim(const Algebra<F>& a) {
  // z with e_i z = z e_i for every i: stack the commutator conditions
  Mat<F> stack(a.fld, 0, a.dim);
  for (long i = 0; i < a.dim; ++i)
    stack = Mat<F>::vcat(stack, a.left_mult_basis(i) - a.right_mult_basis(i));
  return a.dim - rank(stack);
}

template <class F>
struct Bimodule {
  using Elem = typename F::Elem;

  F fld;
  std::string name;
  AlgPtr<F> alg;
  long dim = 0;
  std::vector<Mat<F>> left;   // left[i] = action of e_i
  std::vector<Mat<F>> right;  // right[i] = right action of e_i

  Mat<F> left_of(const std::vector<Elem>& a) const {
    Mat<F> m(fld, dim, dim);
    for (long i = 0; i < alg->dim; ++i)
      if (!fld.is_zero(a[static_cast<size_t>(i)])) m = m + left[static_cast<size_t>(i)].scaled(a[static_cast<size_t>(i)]);
    return m;
  }

  Mat<F> right_of(const std::vector<Elem>& a) const {
    Mat<F> m(fld, dim, dim);
    for (long i = 0; i < alg->dim; ++i)
      if (!fld.is_zero(a[static_cast<size_t>(i)])) m = m + right[static_cast<size_t>(i)].scaled(a[static_cast<size_t>(i)]);
    return m;
  }

  void validate() const {
    if (static_cast<long>(left.size()) != alg->dim || static_cast<long>(right.size()) != alg->dim)
      throw AlgError(name + ": one action matrix per algebra basis element");
    for (long i = 0; i < alg->dim; ++i)
      if (left[static_cast<size_t>(i)].rows() != dim || left[static_cast<size_t>(i)].cols() != dim ||
          right[static_cast<size_t>(i)].rows() != dim || right[static_cast<size_t>(i)].cols() != dim)
        throw AlgError(name + ": action matrix has wrong shape");
    Mat<F> id = Mat<F>::identity(fld, dim);
    if (!(left_of(alg->unit) == id)) throw AlgError(name + ": unit does not act as id on the left");
    if (!(right_of(alg->unit) == id)) throw AlgError(name + ": unit does not act as id on the right");
    for (long i = 0; i < alg->dim; ++i)
      for (long j = 0; j < alg->dim; ++j) {
        Mat<F> lij(fld, dim, dim), rij(fld, dim, dim);
        for (const auto& [k, v] : alg->prod(i, j)) {
          lij = lij + left[static_cast<size_t>(k)].scaled(v);
          rij = rij + right[static_cast<size_t>(k)].scaled(v);
        }
        if (!(lij == left[static_cast<size_t>(i)] * left[static_cast<size_t>(j)]))
          throw AlgError(name + ": left action breaks on (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (!(rij == right[static_cast<size_t>(j)] * right[static_cast<size_t>(i)]))
          throw AlgError(name + ": right action breaks on (" + std::to_string(i) + "," + std::to_string(j) + ")");
        if (!(left[static_cast<size_t>(i)] * right[static_cast<size_t>(j)] ==
              right[static_cast<size_t>(j)] * left[static_cast<size_t>(i)]))
          throw AlgError(name + ": left and right actions do not commute (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      }
  }
};

template <class F>
Bimodule<F> regular_bimodule(const AlgPtr<F>& a) {
  Bimodule<F> m;
  m.fld = a->fld;
  m.name = a->name;
  m.alg = a;
  m.dim = a->dim;
  for (long i = 0; i < a->dim; ++i) {
    m.left.push_back(a->left_mult_basis(i));
    m.right.push_back(a->right_mult_basis(i));
  }
  return m;
}

// ---------------------------------------------------------------------------
// bar cochain spaces C^n = Hom(A^{(x)n}, X) and their coboundaries, with
// matrix columns generated on demand:
//
//   (d f)(a_1,...,a_{n+1}) = a_1 f(a_2,...)
//     + sum_i (-1)^i f(..., a_i a_{i+1}, ...) + (-1)^{n+1} f(..., a_n) a_{n+1}
template <class F>
class BarCochain {
 public:
  using Elem = typename F::Elem;
  using Entry = std::pair<std::uint32_t, Elem>;

  BarCochain(AlgPtr<F> a, const Bimodule<F>& x) : fld_(a->fld), alg_(a), xdim_(x.dim) {
    const long n = a->dim;
    lcol_.assign(static_cast<size_t>(n), {});
    rcol_.assign(static_cast<size_t>(n), {});
    lrow_.assign(static_cast<size_t>(n), {});
    rrow_.assign(static_cast<size_t>(n), {});
    for (long i = 0; i < n; ++i) {
      auto& lc = lcol_[static_cast<size_t>(i)];
      auto& rc = rcol_[static_cast<size_t>(i)];
      auto& lr = lrow_[static_cast<size_t>(i)];
      auto& rr = rrow_[static_cast<size_t>(i)];
      lc.resize(static_cast<size_t>(xdim_));
      rc.resize(static_cast<size_t>(xdim_));
      lr.resize(static_cast<size_t>(xdim_));
      rr.resize(static_cast<size_t>(xdim_));
      for (long cx = 0; cx < xdim_; ++cx)
        for (long ry = 0; ry < xdim_; ++ry) {
          const Elem& lv = x.left[static_cast<size_t>(i)].at(ry, cx);
          if (!fld_.is_zero(lv)) {
            lc[static_cast<size_t>(cx)].push_back({ry, lv});
            lr[static_cast<size_t>(ry)].push_back({cx, lv});
          }
          const Elem& rv = x.right[static_cast<size_t>(i)].at(ry, cx);
          if (!fld_.is_zero(rv)) {
            rc[static_cast<size_t>(cx)].push_back({ry, rv});
            rr[static_cast<size_t>(ry)].push_back({cx, rv});
          }
        }
    }
    expand_.assign(static_cast<size_t>(n), {});
    for (long p = 0; p < n; ++p)
      for (long q = 0; q < n; ++q)
        for (const auto& [k, v] : a->prod(p, q)) expand_[static_cast<size_t>(k)].push_back({p, q, v});
  }

  long alg_dim() const { return alg_->dim; }
  long coeff_dim() const { return xdim_; }

  std::uint64_t space_dim(long n) const {
    std::uint64_t d = static_cast<std::uint64_t>(xdim_);
    for (long i = 0; i < n; ++i) {
      if (d > (std::uint64_t(1) << 62) / static_cast<std::uint64_t>(std::max(1l, alg_->dim)))
        throw AlgError("cochain space too large to index");
      d *= static_cast<std::uint64_t>(alg_->dim);
    }
    return d;
  }

  // column j of delta^n : C^n -> C^{n+1}; entries may repeat rows (summed later)
  std::vector<Entry> column(long n, std::uint64_t j) const {
    const std::uint64_t nA = static_cast<std::uint64_t>(alg_->dim);
    const std::uint64_t m = static_cast<std::uint64_t>(xdim_);
    if (space_dim(n + 1) > (std::uint64_t(1) << 32))
      throw AlgError("coboundary rows exceed streaming index range");
    long x = static_cast<long>(j % m);
    std::uint64_t jt = j / m;
    std::vector<long> t(static_cast<size_t>(n));
    for (long i = n - 1; i >= 0; --i) {
      t[static_cast<size_t>(i)] = static_cast<long>(jt % nA);
      jt /= nA;
    }
    std::vector<Entry> out;
    // prefix products for row packing: row((s_1..s_{n+1}), y) in C^{n+1}
    // term 1: s = (a, t), y runs over column x of L_a
    std::uint64_t tflat = 0;
    for (long i = 0; i < n; ++i) tflat = tflat * nA + static_cast<std::uint64_t>(t[static_cast<size_t>(i)]);
    std::uint64_t pow_n = 1;
    for (long i = 0; i < n; ++i) pow_n *= nA;
    for (long a = 0; a < alg_->dim; ++a) {
      std::uint64_t base = (static_cast<std::uint64_t>(a) * pow_n + tflat) * m;
      for (const auto& [y, c] : lcol_[static_cast<size_t>(a)][static_cast<size_t>(x)])
        out.push_back({static_cast<std::uint32_t>(base + static_cast<std::uint64_t>(y)), c});
    }
    // inner terms: slot i of t expands into a pair (p, q) with e_p e_q ~ e_{t_i}
    for (long i = 0; i < n; ++i) {
      bool neg = (i % 2 == 0);  // sign (-1)^{i+1} with i zero-based here
      for (const auto& [p, q, c] : expand_[static_cast<size_t>(t[static_cast<size_t>(i)])]) {
        std::uint64_t s = 0;
        for (long u = 0; u < i; ++u) s = s * nA + static_cast<std::uint64_t>(t[static_cast<size_t>(u)]);
        s = s * nA + static_cast<std::uint64_t>(p);
        s = s * nA + static_cast<std::uint64_t>(q);
        for (long u = i + 1; u < n; ++u) s = s * nA + static_cast<std::uint64_t>(t[static_cast<size_t>(u)]);
        out.push_back({static_cast<std::uint32_t>(s * m + static_cast<std::uint64_t>(x)),
                       neg ? fld_.neg(c) : c});
      }
    }
    // last term: s = (t, b), sign (-1)^{n+1}
    bool lneg = (n % 2 == 0);
    for (long b = 0; b < alg_->dim; ++b) {
      std::uint64_t base = (tflat * nA + static_cast<std::uint64_t>(b)) * m;
      for (const auto& [y, c] : rcol_[static_cast<size_t>(b)][static_cast<size_t>(x)])
        out.push_back({static_cast<std::uint32_t>(base + static_cast<std::uint64_t>(y)),
                       lneg ? fld_.neg(c) : c});
    }
    return out;
  }

  // row i of delta^n, as entries over column indices of C^n
  std::vector<Entry> row_of(long n, std::uint64_t i) const {
    const std::uint64_t nA = static_cast<std::uint64_t>(alg_->dim);
    const std::uint64_t m = static_cast<std::uint64_t>(xdim_);
    if (space_dim(n) > (std::uint64_t(1) << 32))
      throw AlgError("coboundary columns exceed streaming index range");
    long y = static_cast<long>(i % m);
    std::uint64_t is = i / m;
    std::vector<long> s(static_cast<size_t>(n) + 1);
    for (long u = n; u >= 0; --u) {
      s[static_cast<size_t>(u)] = static_cast<long>(is % nA);
      is /= nA;
    }
    std::vector<Entry> out;
    std::uint64_t tail = 0;  // flat(s_2..s_{n+1})
    for (long u = 1; u <= n; ++u) tail = tail * nA + static_cast<std::uint64_t>(s[static_cast<size_t>(u)]);
    for (const auto& [x, c] : lrow_[static_cast<size_t>(s[0])][static_cast<size_t>(y)])
      out.push_back({static_cast<std::uint32_t>(tail * m + static_cast<std::uint64_t>(x)), c});
    for (long i2 = 0; i2 < n; ++i2) {
      bool neg = (i2 % 2 == 0);
      long p = s[static_cast<size_t>(i2)], q = s[static_cast<size_t>(i2) + 1];
      for (const auto& [k, c] : alg_->prod(p, q)) {
        std::uint64_t tt = 0;
        for (long u = 0; u < i2; ++u) tt = tt * nA + static_cast<std::uint64_t>(s[static_cast<size_t>(u)]);
        tt = tt * nA + static_cast<std::uint64_t>(k);
        for (long u = i2 + 2; u <= n; ++u) tt = tt * nA + static_cast<std::uint64_t>(s[static_cast<size_t>(u)]);
        out.push_back({static_cast<std::uint32_t>(tt * m + static_cast<std::uint64_t>(y)),
                       neg ? fld_.neg(c) : c});
      }
    }
    bool lneg = (n % 2 == 0);
    std::uint64_t head = 0;  // flat(s_1..s_n)
    for (long u = 0; u < n; ++u) head = head * nA + static_cast<std::uint64_t>(s[static_cast<size_t>(u)]);
    for (const auto& [x, c] : rrow_[static_cast<size_t>(s[static_cast<size_t>(n)])][static_cast<size_t>(y)])
      out.push_back({static_cast<std::uint32_t>(head * m + static_cast<std::uint64_t>(x)),
                     lneg ? fld_.neg(c) : c});
    return out;
  }

  Mat<F> dense_delta(long n) const {
    std::uint64_t rows = space_dim(n + 1), cols = space_dim(n);
    Mat<F> d(fld_, static_cast<long>(rows), static_cast<long>(cols));
    for (std::uint64_t j = 0; j < cols; ++j)
      for (const auto& [r, v] : column(n, j))
        d.at(static_cast<long>(r), static_cast<long>(j)) = fld_.add(d.at(static_cast<long>(r), static_cast<long>(j)), v);
    return d;
  }

  SparseCols<F> sparse_delta(long n) const {
    SparseCols<F> s(fld_, space_dim(n + 1), space_dim(n));
    for (std::uint64_t j = 0; j < space_dim(n); ++j)
      for (const auto& [r, v] : column(n, j)) s.add(j, r, v);
    return s;
  }

  const F& field() const { return fld_; }

 private:
  F fld_;
  AlgPtr<F> alg_;
  long xdim_;
  // sparse columns/rows of the action matrices, and pair expansions of each
  // algebra basis element
  std::vector<std::vector<std::vector<std::pair<long, Elem>>>> lcol_, rcol_, lrow_, rrow_;
  std::vector<std::vector<std::tuple<long, long, Elem>>> expand_;
};

}  // namespace cctlab
