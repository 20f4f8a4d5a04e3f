#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cctlab/field.hpp"

namespace cctlab {

struct LinAlgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix over a field F. Small by design: the heavy bar
// coboundaries go through sparse.hpp instead.
template <class F>
class Mat {
 public:
  using Elem = typename F::Elem;

  Mat() : fld_(), rows_(0), cols_(0) {}
  Mat(F f, long rows, long cols)
      : fld_(f), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), f.zero()) {
    if (rows < 0 || cols < 0) throw LinAlgError("negative matrix dimension");
  }

  static Mat identity(F f, long n) {
    Mat m(f, n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = f.one();
    return m;
  }

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  const F& field() const { return fld_; }

  Elem& at(long i, long j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
  const Elem& at(long i, long j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!fld_.is_zero(x)) return false;
    return true;
  }

  bool operator==(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t k = 0; k < a_.size(); ++k)
      if (!fld_.eq(a_[k], o.a_[k])) return false;
    return true;
  }

  Mat operator+(const Mat& o) const {
    check_same_shape(o);
    Mat r(fld_, rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = fld_.add(a_[k], o.a_[k]);
    return r;
  }
  Mat operator-(const Mat& o) const {
    check_same_shape(o);
    Mat r(fld_, rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = fld_.sub(a_[k], o.a_[k]);
    return r;
  }
  Mat operator-() const {
    Mat r(fld_, rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = fld_.neg(a_[k]);
    return r;
  }
  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw LinAlgError("shape mismatch in product");
    Mat r(fld_, rows_, o.cols_);
    for (long i = 0; i < rows_; ++i)
      for (long k = 0; k < cols_; ++k) {
        const Elem& x = at(i, k);
        if (fld_.is_zero(x)) continue;
        for (long j = 0; j < o.cols_; ++j)
          r.at(i, j) = fld_.add(r.at(i, j), fld_.mul(x, o.at(k, j)));
      }
    return r;
  }
  Mat scaled(const Elem& c) const {
    Mat r(fld_, rows_, cols_);
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = fld_.mul(a_[k], c);
    return r;
  }

  Mat transpose() const {
    Mat r(fld_, cols_, rows_);
    for (long i = 0; i < rows_; ++i)
      for (long j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  std::vector<Elem> apply(const std::vector<Elem>& v) const {
    if (static_cast<long>(v.size()) != cols_) throw LinAlgError("shape mismatch in apply");
    std::vector<Elem> r(static_cast<size_t>(rows_), fld_.zero());
    for (long i = 0; i < rows_; ++i)
      for (long j = 0; j < cols_; ++j)
        if (!fld_.is_zero(at(i, j))) r[i] = fld_.add(r[i], fld_.mul(at(i, j), v[j]));
    return r;
  }

  std::vector<Elem> col(long j) const {
    std::vector<Elem> r;
    r.reserve(rows_);
    for (long i = 0; i < rows_; ++i) r.push_back(at(i, j));
    return r;
  }
  void set_col(long j, const std::vector<Elem>& v) {
    for (long i = 0; i < rows_; ++i) at(i, j) = v[i];
  }

  static Mat hcat(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_) throw LinAlgError("hcat row mismatch");
    Mat r(a.fld_, a.rows_, a.cols_ + b.cols_);
    for (long i = 0; i < a.rows_; ++i) {
      for (long j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
      for (long j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
    }
    return r;
  }
  static Mat vcat(const Mat& a, const Mat& b) {
    if (a.cols_ != b.cols_) throw LinAlgError("vcat col mismatch");
    Mat r(a.fld_, a.rows_ + b.rows_, a.cols_);
    for (long i = 0; i < a.rows_; ++i)
      for (long j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (long i = 0; i < b.rows_; ++i)
      for (long j = 0; j < b.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
    return r;
  }
  // [[a b],[c d]]
  static Mat block2x2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    return vcat(hcat(a, b), hcat(c, d));
  }

 private:
  void check_same_shape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw LinAlgError("shape mismatch");
  }

  F fld_;
  long rows_, cols_;
  std::vector<Elem> a_;
};

template <class F>
struct Rref {
  Mat<F> r;                  // reduced row echelon form
  std::vector<long> pivots;  // pivot column per nonzero row
  long rank = 0;
};

template <class F>
Rref<F> rref(const Mat<F>& a) {
  const F& K = a.field();
  Rref<F> out{a, {}, 0};
  Mat<F>& m = out.r;
  long r = 0;
  for (long c = 0; c < m.cols() && r < m.rows(); ++c) {
    long piv = -1;
    for (long i = r; i < m.rows(); ++i)
      if (!K.is_zero(m.at(i, c))) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r)
      for (long j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(r, j));
    typename F::Elem iv = K.inv(m.at(r, c));
    for (long j = c; j < m.cols(); ++j) m.at(r, j) = K.mul(m.at(r, j), iv);
    for (long i = 0; i < m.rows(); ++i) {
      if (i == r || K.is_zero(m.at(i, c))) continue;
      typename F::Elem f = m.at(i, c);
      for (long j = c; j < m.cols(); ++j)
        m.at(i, j) = K.sub(m.at(i, j), K.mul(f, m.at(r, j)));
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

template <class F>
long rank(const Mat<F>& a) {
  return rref(a).rank;
}

// Columns form a basis of { x : a x = 0 }.
template <class F>
Mat<F> kernel_basis(const Mat<F>& a) {
  const F& K = a.field();
  Rref<F> e = rref(a);
  std::vector<bool> is_pivot(static_cast<size_t>(a.cols()), false);
  for (long p : e.pivots) is_pivot[static_cast<size_t>(p)] = true;
  Mat<F> ker(K, a.cols(), a.cols() - e.rank);
  long k = 0;
  for (long j = 0; j < a.cols(); ++j) {
    if (is_pivot[static_cast<size_t>(j)]) continue;
    ker.at(j, k) = K.one();
    for (long i = 0; i < e.rank; ++i)
      ker.at(e.pivots[static_cast<size_t>(i)], k) = K.neg(e.r.at(i, j));
    ++k;
  }
  return ker;
}

// One solution of a x = rhs_j for every column of rhs, or nullopt if any
// system is inconsistent.
template <class F>
std::optional<Mat<F>> solve_mat(const Mat<F>& a, const Mat<F>& rhs) {
  if (a.rows() != rhs.rows()) throw LinAlgError("solve: row mismatch");
  const F& K = a.field();
  Rref<F> e = rref(Mat<F>::hcat(a, rhs));
  for (long i = 0; i < e.rank; ++i)
    if (e.pivots[static_cast<size_t>(i)] >= a.cols()) return std::nullopt;
  Mat<F> x(K, a.cols(), rhs.cols());
  for (long i = 0; i < e.rank; ++i)
    for (long j = 0; j < rhs.cols(); ++j)
      x.at(e.pivots[static_cast<size_t>(i)], j) = e.r.at(i, a.cols() + j);
  return x;
}

template <class F>
std::optional<std::vector<typename F::Elem>> solve(const Mat<F>& a,
                                                   const std::vector<typename F::Elem>& b) {
  Mat<F> rhs(a.field(), a.rows(), 1);
  for (long i = 0; i < a.rows(); ++i) rhs.at(i, 0) = b[static_cast<size_t>(i)];
  auto x = solve_mat(a, rhs);
  if (!x) return std::nullopt;
  return x->col(0);
}

// Quotient of the ambient space k^n by the column span of w, presented by a
// projection p (q x n), a section s (n x q) with p s = id and p w = 0, and
// the list of ambient coordinates kept as representatives.
template <class F>
struct QuotientPresentation {
  long dim = 0;
  Mat<F> proj;
  Mat<F> section;
  std::vector<long> kept;
};

template <class F>
QuotientPresentation<F> subspace_quotient(const F& K, long n, const Mat<F>& w) {
  if (w.rows() != n) throw LinAlgError("quotient: ambient dimension mismatch");
  Rref<F> e = rref(w.transpose());
  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (long p : e.pivots) is_pivot[static_cast<size_t>(p)] = true;
  QuotientPresentation<F> out;
  out.dim = n - e.rank;
  out.proj = Mat<F>(K, out.dim, n);
  out.section = Mat<F>(K, n, out.dim);
  long q = 0;
  for (long c = 0; c < n; ++c) {
    if (is_pivot[static_cast<size_t>(c)]) continue;
    out.kept.push_back(c);
    out.proj.at(q, c) = K.one();
    // reducing by the echelon rows clears pivot coordinates
    for (long i = 0; i < e.rank; ++i)
      out.proj.at(q, e.pivots[static_cast<size_t>(i)]) = K.neg(e.r.at(i, c));
    out.section.at(c, q) = K.one();
    ++q;
  }
  return out;
}

// Quotient span(v)/span(w) for independent columns v and span(w) inside
// span(v): returns representative columns (inside the ambient space) and the
// projection matrix acting on v-coordinates.
template <class F>
struct QuotientBasis {
  long dim = 0;
  Mat<F> reps;  // ambient x dim
  Mat<F> proj;  // dim x v
};

template <class F>
QuotientBasis<F> quotient_basis(const Mat<F>& v, const Mat<F>& w) {
  const F& K = v.field();
  if (rank(v) != v.cols()) throw LinAlgError("quotient_basis: columns of v are dependent");
  auto coords = solve_mat(v, w);
  if (!coords) throw LinAlgError("quotient_basis: w is not contained in span(v)");
  QuotientPresentation<F> q = subspace_quotient(K, v.cols(), *coords);
  QuotientBasis<F> out;
  out.dim = q.dim;
  out.proj = q.proj;
  out.reps = v * q.section;
  return out;
}

template <class F>
Mat<F> kron(const Mat<F>& a, const Mat<F>& b) {
  const F& K = a.field();
  Mat<F> r(K, a.rows() * b.rows(), a.cols() * b.cols());
  for (long ia = 0; ia < a.rows(); ++ia)
    for (long ja = 0; ja < a.cols(); ++ja) {
      if (K.is_zero(a.at(ia, ja))) continue;
      for (long ib = 0; ib < b.rows(); ++ib)
        for (long jb = 0; jb < b.cols(); ++jb)
          r.at(ia * b.rows() + ib, ja * b.cols() + jb) = K.mul(a.at(ia, ja), b.at(ib, jb));
    }
  return r;
}

}  // namespace cctlab
