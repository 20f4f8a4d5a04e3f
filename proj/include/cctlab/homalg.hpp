#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/mat.hpp"

namespace cctlab {

struct HomAlgError : std::runtime_error {
  explicit HomAlgError(const std::string& w) : std::runtime_error(w) {}
};

// chain complex concentrated in degrees 0..top(); diff(n) : X_n -> X_{n-1}
template <class F>
class Complex {
 public:
  Complex(F fld, std::vector<long> dims, std::vector<Mat<F>> diffs)
      : fld_(fld), dims_(std::move(dims)), diffs_(std::move(diffs)) {
    if (dims_.empty()) dims_.push_back(0);
    if (diffs_.size() + 1 != dims_.size())
      throw HomAlgError("complex needs one differential per adjacent degree pair");
  }

  static Complex zero(F fld) { return Complex(fld, {0}, {}); }

  long top() const { return static_cast<long>(dims_.size()) - 1; }
  long dim(long n) const {
    return (n < 0 || n > top()) ? 0 : dims_[static_cast<size_t>(n)];
  }
  long total_dim() const {
    long s = 0;
    for (long d : dims_) s += d;
    return s;
  }
  // d_n for n in 1..top; zero matrix of the right shape outside
  Mat<F> diff(long n) const {
    if (n >= 1 && n <= top()) return diffs_[static_cast<size_t>(n - 1)];
    return Mat<F>(fld_, dim(n - 1), dim(n));
  }
  const F& field() const { return fld_; }

  void validate() const {
    for (long n = 1; n <= top(); ++n) {
      const Mat<F>& d = diffs_[static_cast<size_t>(n - 1)];
      if (d.rows() != dim(n - 1) || d.cols() != dim(n))
        throw HomAlgError("differential at degree " + std::to_string(n) + " has wrong shape");
    }
    for (long n = 2; n <= top(); ++n)
      if (!(diff(n - 1) * diff(n)).is_zero())
        throw HomAlgError("d o d != 0 at degree " + std::to_string(n));
  }

 private:
  F fld_;
  std::vector<long> dims_;
  std::vector<Mat<F>> diffs_;
};

template <class F>
std::vector<long> homology_dims(const Complex<F>& x) {
  std::vector<long> h;
  std::vector<long> rk(static_cast<size_t>(x.top()) + 2, 0);
  for (long n = 1; n <= x.top(); ++n) rk[static_cast<size_t>(n)] = rank(x.diff(n));
  for (long n = 0; n <= x.top(); ++n)
    h.push_back(x.dim(n) - rk[static_cast<size_t>(n)] - rk[static_cast<size_t>(n + 1)]);
  return h;
}

// degreewise map f_n : dom_n -> cod_n commuting with the differentials
template <class F>
struct ChainMap {
  Complex<F> dom;
  Complex<F> cod;
  std::vector<Mat<F>> maps;  // maps[n] for n = 0..max(dom.top, cod.top)

  long top() const { return std::max(dom.top(), cod.top()); }
  Mat<F> at(long n) const {
    if (n >= 0 && n < static_cast<long>(maps.size())) return maps[static_cast<size_t>(n)];
    return Mat<F>(dom.field(), cod.dim(n), dom.dim(n));
  }

  void validate() const {
    for (long n = 0; n <= top(); ++n) {
      Mat<F> f = at(n);
      if (f.rows() != cod.dim(n) || f.cols() != dom.dim(n))
        throw HomAlgError("chain map has wrong shape at degree " + std::to_string(n));
    }
    for (long n = 1; n <= top(); ++n)
      if (!(at(n - 1) * dom.diff(n) == cod.diff(n) * at(n)))
        throw HomAlgError("chain map does not commute with d at degree " + std::to_string(n));
  }
};

template <class F>
ChainMap<F> identity_chain_map(const Complex<F>& x) {
  ChainMap<F> f{x, x, {}};
  for (long n = 0; n <= x.top(); ++n) f.maps.push_back(Mat<F>::identity(x.field(), x.dim(n)));
  return f;
}

// mapping cone: C(f)_n = M_{n-1} (+) N_n with d = [[-d_M, 0], [f, d_N]]
template <class F>
Complex<F> cone(const ChainMap<F>& f) {
  const F& k = f.dom.field();
  long t = std::max(f.dom.top() + 1, f.cod.top());
  std::vector<long> dims;
  std::vector<Mat<F>> diffs;
  for (long n = 0; n <= t; ++n) dims.push_back(f.dom.dim(n - 1) + f.cod.dim(n));
  for (long n = 1; n <= t; ++n)
    diffs.push_back(Mat<F>::block2x2(-f.dom.diff(n - 1), Mat<F>(k, f.dom.dim(n - 2), f.cod.dim(n)),
                                     f.at(n - 1), f.cod.diff(n)));
  return Complex<F>(k, std::move(dims), std::move(diffs));
}

// degree +1 maps s[n] : X_{n-1} -> X_n, n = 1..top (s[0] is a placeholder)
template <class F>
using Homotopy = std::vector<Mat<F>>;

// first degree where d s + s d != id, if any
template <class F>
std::optional<long> contraction_defect(const Complex<F>& x, const Homotopy<F>& s) {
  auto s_at = [&](long n) {
    if (n >= 1 && n < static_cast<long>(s.size())) return s[static_cast<size_t>(n)];
    return Mat<F>(x.field(), x.dim(n), x.dim(n - 1));
  };
  for (long n = 0; n <= x.top(); ++n) {
    Mat<F> lhs = x.diff(n + 1) * s_at(n + 1) + s_at(n) * x.diff(n);
    if (!(lhs == Mat<F>::identity(x.field(), x.dim(n)))) return n;
  }
  return std::nullopt;
}

template <class F>
struct ContractResult {
  bool ok = false;
  long fail_degree = -1;  // meaningful when !ok
  Homotopy<F> s;
};

// builds a contraction of an exact complex degree by degree; on inexact input
// reports the lowest degree with nonzero homology instead
template <class F>
ContractResult<F> contract_exact(const Complex<F>& x) {
  ContractResult<F> r;
  r.s.assign(static_cast<size_t>(x.top()) + 1, Mat<F>(x.field(), 0, 0));
  if (x.top() == 0) {
    if (x.dim(0) != 0) {
      r.fail_degree = 0;
      return r;
    }
    r.ok = true;
    return r;
  }
  Mat<F> target = Mat<F>::identity(x.field(), x.dim(0));
  for (long n = 0; n < x.top(); ++n) {
    auto sol = solve_mat(x.diff(n + 1), target);
    if (!sol) {
      r.fail_degree = n;
      return r;
    }
    r.s[static_cast<size_t>(n + 1)] = *sol;
    target = Mat<F>::identity(x.field(), x.dim(n + 1)) - *sol * x.diff(n + 1);
  }
  if (!target.is_zero()) {
    r.fail_degree = x.top();
    return r;
  }
  r.ok = true;
  return r;
}

template <class F>
bool is_exact(const Complex<F>& x) {
  return contract_exact(x).ok;
}

// a map is a relative quasi-isomorphism exactly when its cone contracts
template <class F>
bool is_relative_qiso(const ChainMap<F>& f) {
  return contract_exact(cone(f)).ok;
}

// homotopy equivalence data extracted from a cone contraction:
// g : N -> M with g f ~ id via sM and f g ~ id via sN
template <class F>
struct EquivalenceData {
  ChainMap<F> g;
  Homotopy<F> sM;
  Homotopy<F> sN;
};

namespace detail {
template <class F>
Mat<F> slice(const Mat<F>& m, long r0, long nr, long c0, long nc) {
  Mat<F> out(m.field(), nr, nc);
  for (long i = 0; i < nr; ++i)
    for (long j = 0; j < nc; ++j) out.at(i, j) = m.at(r0 + i, c0 + j);
  return out;
}
}  // namespace detail

template <class F>
EquivalenceData<F> extract_equivalence(const ChainMap<F>& f, const Complex<F>& cf,
                                       const Homotopy<F>& s) {
  const F& k = f.dom.field();
  auto s_at = [&](long n) {
    if (n >= 1 && n < static_cast<long>(s.size())) return s[static_cast<size_t>(n)];
    return Mat<F>(k, cf.dim(n), cf.dim(n - 1));
  };
  EquivalenceData<F> e{ChainMap<F>{f.cod, f.dom, {}}, {}, {}};
  long t = f.top();
  for (long n = 0; n <= t; ++n) {
    // s_{n+1} : M_{n-1} (+) N_n -> M_n (+) N_{n+1}
    Mat<F> sn1 = s_at(n + 1);
    e.g.maps.push_back(detail::slice(sn1, 0, f.dom.dim(n), f.dom.dim(n - 1), f.cod.dim(n)));
  }
  e.sM.push_back(Mat<F>(k, 0, 0));
  e.sN.push_back(Mat<F>(k, 0, 0));
  for (long n = 1; n <= t; ++n) {
    Mat<F> sn1 = s_at(n + 1);  // top-left block is M_{n-1} -> M_n
    e.sM.push_back(detail::slice(sn1, 0, f.dom.dim(n), 0, f.dom.dim(n - 1)));
    Mat<F> sn = s_at(n);  // bottom-right block is N_{n-1} -> N_n, negated
    e.sN.push_back(-detail::slice(sn, f.dom.dim(n - 1), f.cod.dim(n), f.dom.dim(n - 2),
                                  f.cod.dim(n - 1)));
  }
  return e;
}

// reverse direction: explicit homotopy equivalence data induces a cone contraction
template <class F>
Homotopy<F> build_cone_contraction(const ChainMap<F>& f, const EquivalenceData<F>& e) {
  const F& k = f.dom.field();
  auto at = [&](const Homotopy<F>& h, long n, long rows, long cols) {
    if (n >= 1 && n < static_cast<long>(h.size())) return h[static_cast<size_t>(n)];
    return Mat<F>(k, rows, cols);
  };
  long t = std::max(f.dom.top() + 1, f.cod.top());
  Homotopy<F> s;
  s.push_back(Mat<F>(k, 0, 0));
  for (long n = 1; n <= t; ++n) {
    long mlo = f.dom.dim(n - 2), mhi = f.dom.dim(n - 1);
    long nlo = f.cod.dim(n - 1), nhi = f.cod.dim(n);
    Mat<F> sm = at(e.sM, n - 1, mhi, mlo);
    Mat<F> sN_lo = at(e.sN, n - 1, nlo, f.cod.dim(n - 2));
    Mat<F> sN_hi = at(e.sN, n, nhi, nlo);
    Mat<F> g_hi = e.g.at(n - 1);
    Mat<F> f_lo = f.at(n - 2), f_mid = f.at(n - 1);
    // blocks: [[sM + g (sN f - f sM), g], [sN (f sM - sN f), -sN]]
    Mat<F> a = sm + g_hi * (sN_lo * f_lo - f_mid * sm);
    Mat<F> b = e.g.at(n - 1);
    Mat<F> c = sN_hi * (f_mid * sm - sN_lo * f_lo);
    Mat<F> d = -sN_hi;
    s.push_back(Mat<F>::block2x2(a, b, c, d));
  }
  return s;
}

// ---------------------------------------------------------------------------
// first-quadrant double complex with an augmentation column
//
//   columns h = 0..width-1, rows i = 0..height-1 over a base complex M
//   horiz[h][i] : X_{h,i} -> X_{h-1,i}   (h >= 1)
//   aug[i]      : X_{0,i} -> M_i
//   vert[h][i]  : X_{h,i} -> X_{h,i-1}   (i >= 1)
//   t[0][i]     : M_i -> X_{0,i}         (section of the augmentation)
//   t[h][i]     : X_{h-1,i} -> X_{h,i}   (row contraction, h >= 1)
//
// rows_complete means each row is the whole augmented complex, so the row
// contraction identity also holds at the last column; otherwise the grid is a
// truncation and total-degree statements are valid only below the width.
template <class F>
struct DoubleComplex {
  F fld;
  Complex<F> base;
  bool rows_complete = false;
  std::vector<std::vector<long>> dims;       // dims[h][i]
  std::vector<std::vector<Mat<F>>> horiz;    // horiz[h][i], h >= 1
  std::vector<Mat<F>> aug;                   // aug[i]
  std::vector<std::vector<Mat<F>>> vert;     // vert[h][i], i >= 1
  std::vector<std::vector<Mat<F>>> t;        // as documented above

  long width() const { return static_cast<long>(dims.size()); }
  long height() const { return base.top() + 1; }
  long dim(long h, long i) const {
    if (h < 0 || i < 0 || h >= width() || i >= height()) return 0;
    return dims[static_cast<size_t>(h)][static_cast<size_t>(i)];
  }

  void validate() const {
    const long W = width(), N = base.top();
    base.validate();
    if (W == 0) throw HomAlgError("double complex needs at least one column");
    for (const auto& col : dims)
      if (static_cast<long>(col.size()) != N + 1)
        throw HomAlgError("column height mismatch");
    if (static_cast<long>(horiz.size()) != W || static_cast<long>(vert.size()) != W ||
        static_cast<long>(t.size()) != W || static_cast<long>(aug.size()) != N + 1)
      throw HomAlgError("double complex containers disagree with the grid size");
    for (long h = 1; h < W; ++h)
      if (static_cast<long>(horiz[static_cast<size_t>(h)].size()) != N + 1)
        throw HomAlgError("horiz column " + std::to_string(h) + " has wrong height");
    for (long h = 0; h < W; ++h) {
      if (static_cast<long>(vert[static_cast<size_t>(h)].size()) != N + 1)
        throw HomAlgError("vert column " + std::to_string(h) + " has wrong height");
      if (static_cast<long>(t[static_cast<size_t>(h)].size()) != N + 1)
        throw HomAlgError("t column " + std::to_string(h) + " has wrong height");
    }
    auto shape = [&](const Mat<F>& m, long r, long c, const char* what) {
      if (m.rows() != r || m.cols() != c)
        throw HomAlgError(std::string(what) + ": wrong shape");
    };
    for (long i = 0; i <= N; ++i) shape(aug[static_cast<size_t>(i)], base.dim(i), dim(0, i), "aug");
    for (long h = 1; h < W; ++h)
      for (long i = 0; i <= N; ++i)
        shape(horiz[static_cast<size_t>(h)][static_cast<size_t>(i)], dim(h - 1, i), dim(h, i), "horiz");
    for (long h = 0; h < W; ++h)
      for (long i = 1; i <= N; ++i)
        shape(vert[static_cast<size_t>(h)][static_cast<size_t>(i)], dim(h, i - 1), dim(h, i), "vert");
    for (long i = 0; i <= N; ++i) {
      shape(t[0][static_cast<size_t>(i)], dim(0, i), base.dim(i), "t0");
      for (long h = 1; h < W; ++h)
        shape(t[static_cast<size_t>(h)][static_cast<size_t>(i)], dim(h, i), dim(h - 1, i), "t");
    }

    for (long i = 0; i <= N; ++i) {
      // each row is a complex under the augmentation
      if (W > 1 && !(aug[static_cast<size_t>(i)] * hz(1, i)).is_zero())
        throw HomAlgError("row " + std::to_string(i) + ": aug o horiz != 0");
      for (long h = 2; h < W; ++h)
        if (!(hz(h - 1, i) * hz(h, i)).is_zero())
          throw HomAlgError("row " + std::to_string(i) + ": horiz o horiz != 0");
      // row contraction identities on the available range
      if (!(aug[static_cast<size_t>(i)] * t0(i) == Mat<F>::identity(fld, base.dim(i))))
        throw HomAlgError("row " + std::to_string(i) + ": aug o t0 != id");
      for (long h = 0; h < W; ++h) {
        Mat<F> lhs(fld, dim(h, i), dim(h, i));
        bool complete = true;
        if (h + 1 < W)
          lhs = lhs + hz(h + 1, i) * tt(h + 1, i);
        else if (!rows_complete)
          complete = false;
        lhs = lhs + (h == 0 ? t0(i) * aug[static_cast<size_t>(i)] : tt(h, i) * hz(h, i));
        if (complete && !(lhs == Mat<F>::identity(fld, dim(h, i))))
          throw HomAlgError("row " + std::to_string(i) + ": contraction fails at column " +
                            std::to_string(h));
      }
    }
    for (long h = 0; h < W; ++h)
      for (long i = 2; i <= N; ++i)
        if (!(vt(h, i - 1) * vt(h, i)).is_zero())
          throw HomAlgError("column " + std::to_string(h) + " is not a complex");
    for (long i = 1; i <= N; ++i) {
      if (!(base.diff(i) * aug[static_cast<size_t>(i)] == aug[static_cast<size_t>(i - 1)] * vt(0, i)))
        throw HomAlgError("augmentation square fails at row " + std::to_string(i));
      for (long h = 1; h < W; ++h)
        if (!(hz(h, i - 1) * vt(h, i) == vt(h - 1, i) * hz(h, i)))
          throw HomAlgError("square (" + std::to_string(h) + "," + std::to_string(i) + ") fails");
      // sections and contractions are vertical chain maps (down one row)
      if (!(vt(0, i) * t0(i) == t0(i - 1) * base.diff(i)))
        throw HomAlgError("t0 square fails at row " + std::to_string(i));
      for (long h = 1; h < W; ++h)
        if (!(vt(h, i) * tt(h, i) == tt(h, i - 1) * vt(h - 1, i)))
          throw HomAlgError("t square (" + std::to_string(h) + "," + std::to_string(i) + ") fails");
    }
  }

  Mat<F> hz(long h, long i) const { return horiz[static_cast<size_t>(h)][static_cast<size_t>(i)]; }
  Mat<F> vt(long h, long i) const { return vert[static_cast<size_t>(h)][static_cast<size_t>(i)]; }
  Mat<F> t0(long i) const { return t[0][static_cast<size_t>(i)]; }
  Mat<F> tt(long h, long i) const { return t[static_cast<size_t>(h)][static_cast<size_t>(i)]; }

  // summands of Tot_n are (h, i) with h+i = n, listed by ascending h
  std::vector<std::pair<long, long>> total_summands(long n) const {
    std::vector<std::pair<long, long>> out;
    for (long h = std::max(0l, n - base.top()); h <= std::min(n, width() - 1); ++h)
      out.push_back({h, n - h});
    return out;
  }
};

// Tot_n = (+)_{h+i=n} X_{h,i} with d = horiz + (-1)^h vert
template <class F>
Complex<F> total_complex(const DoubleComplex<F>& dc) {
  const F& k = dc.fld;
  long T = dc.width() - 1 + dc.base.top();
  std::vector<long> dims;
  for (long n = 0; n <= T; ++n) {
    long d = 0;
    for (auto [h, i] : dc.total_summands(n)) d += dc.dim(h, i);
    dims.push_back(d);
  }
  std::vector<Mat<F>> diffs;
  for (long n = 1; n <= T; ++n) {
    auto src = dc.total_summands(n), dst = dc.total_summands(n - 1);
    std::vector<long> src_off{0}, dst_off{0};
    for (auto [h, i] : src) src_off.push_back(src_off.back() + dc.dim(h, i));
    for (auto [h, i] : dst) dst_off.push_back(dst_off.back() + dc.dim(h, i));
    Mat<F> d(k, dims[static_cast<size_t>(n - 1)], dims[static_cast<size_t>(n)]);
    auto put = [&](long dst_idx, long src_idx, const Mat<F>& blk, bool negate) {
      for (long r = 0; r < blk.rows(); ++r)
        for (long c = 0; c < blk.cols(); ++c) {
          auto v = negate ? k.neg(blk.at(r, c)) : blk.at(r, c);
          d.at(dst_off[static_cast<size_t>(dst_idx)] + r, src_off[static_cast<size_t>(src_idx)] + c) = v;
        }
    };
    for (size_t sj = 0; sj < src.size(); ++sj) {
      auto [h, i] = src[sj];
      if (h >= 1)
        for (size_t dj = 0; dj < dst.size(); ++dj)
          if (dst[dj].first == h - 1 && dst[dj].second == i)
            put(static_cast<long>(dj), static_cast<long>(sj), dc.hz(h, i), false);
      if (i >= 1)
        for (size_t dj = 0; dj < dst.size(); ++dj)
          if (dst[dj].first == h && dst[dj].second == i - 1)
            put(static_cast<long>(dj), static_cast<long>(sj), dc.vt(h, i), h % 2 == 1);
    }
    diffs.push_back(std::move(d));
  }
  return Complex<F>(k, std::move(dims), std::move(diffs));
}

// augmentation Tot -> M: aug on the h = 0 summand, zero elsewhere
template <class F>
ChainMap<F> total_augmentation(const DoubleComplex<F>& dc, const Complex<F>& tot) {
  ChainMap<F> f{tot, dc.base, {}};
  for (long n = 0; n <= tot.top(); ++n) {
    Mat<F> m(dc.fld, dc.base.dim(n), tot.dim(n));
    long off = 0;
    for (auto [h, i] : dc.total_summands(n)) {
      if (h == 0)
        for (long r = 0; r < dc.base.dim(i); ++r)
          for (long c = 0; c < dc.dim(0, i); ++c) m.at(r, off + c) = dc.aug[static_cast<size_t>(i)].at(r, c);
      off += dc.dim(h, i);
    }
    f.maps.push_back(std::move(m));
  }
  return f;
}

// section M -> Tot landing in the h = 0 summand
template <class F>
ChainMap<F> total_section(const DoubleComplex<F>& dc, const Complex<F>& tot) {
  ChainMap<F> f{dc.base, tot, {}};
  for (long n = 0; n <= tot.top(); ++n) {
    Mat<F> m(dc.fld, tot.dim(n), dc.base.dim(n));
    long off = 0;
    for (auto [h, i] : dc.total_summands(n)) {
      if (h == 0)
        for (long r = 0; r < dc.dim(0, i); ++r)
          for (long c = 0; c < dc.base.dim(i); ++c) m.at(off + r, c) = dc.t0(i).at(r, c);
      off += dc.dim(h, i);
    }
    f.maps.push_back(std::move(m));
  }
  return f;
}

// degree +1 map on Tot whose components push summands one column left;
// satisfies h d + d h = id - t0 aug on the valid total-degree range
template <class F>
Homotopy<F> total_homotopy(const DoubleComplex<F>& dc, const Complex<F>& tot) {
  Homotopy<F> s;
  s.push_back(Mat<F>(dc.fld, tot.dim(0), 0));
  for (long n = 1; n <= tot.top() + 1; ++n) {
    auto src = dc.total_summands(n - 1), dst = dc.total_summands(n);
    std::vector<long> src_off{0}, dst_off{0};
    for (auto [h, i] : src) src_off.push_back(src_off.back() + dc.dim(h, i));
    for (auto [h, i] : dst) dst_off.push_back(dst_off.back() + dc.dim(h, i));
    Mat<F> m(dc.fld, tot.dim(n), tot.dim(n - 1));
    for (size_t sj = 0; sj < src.size(); ++sj) {
      auto [h, i] = src[sj];
      if (h + 1 >= dc.width()) continue;  // truncated grid: nothing to push into
      for (size_t dj = 0; dj < dst.size(); ++dj) {
        if (dst[dj].first != h + 1 || dst[dj].second != i) continue;
        Mat<F> blk = dc.tt(h + 1, i);
        for (long r = 0; r < blk.rows(); ++r)
          for (long c = 0; c < blk.cols(); ++c)
            m.at(dst_off[dj] + r, src_off[sj] + c) = blk.at(r, c);
      }
    }
    s.push_back(std::move(m));
  }
  return s;
}

// degrees where h d + d h = id - t0 aug is guaranteed on the nose
template <class F>
long total_valid_top(const DoubleComplex<F>& dc) {
  return dc.rows_complete ? dc.width() - 1 + dc.base.top() : dc.width() - 2;
}

}  // namespace cctlab
