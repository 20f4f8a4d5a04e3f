#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "cctlab/mat.hpp"

namespace cctlab {

// Column-major sparse matrix. Row indices fit in 32 bits; the bar
// coboundaries this engine exists for have huge row counts but moderate
// column counts, so ranks are computed by left-looking column elimination
// keeping only the pivot columns.
template <class F>
struct SparseCols {
  using Elem = typename F::Elem;
  using Entry = std::pair<std::uint32_t, Elem>;

  F fld;
  std::uint64_t nrows = 0;
  std::uint64_t ncols = 0;
  std::vector<std::vector<Entry>> cols;  // each sorted by row

  SparseCols() = default;
  SparseCols(F f, std::uint64_t r, std::uint64_t c) : fld(f), nrows(r), ncols(c), cols(c) {}

  void add(std::uint64_t col, std::uint64_t row, const Elem& v) {
    cols[col].emplace_back(static_cast<std::uint32_t>(row), v);
  }

  std::uint64_t nnz() const {
    std::uint64_t n = 0;
    for (const auto& c : cols) n += c.size();
    return n;
  }

  Mat<F> dense() const {
    Mat<F> m(fld, static_cast<long>(nrows), static_cast<long>(ncols));
    for (std::uint64_t j = 0; j < ncols; ++j)
      for (const auto& [r, v] : cols[j])
        m.at(static_cast<long>(r), static_cast<long>(j)) = fld.add(m.at(static_cast<long>(r), static_cast<long>(j)), v);
    return m;
  }

  static SparseCols from_dense(const Mat<F>& m) {
    SparseCols s(m.field(), m.rows(), m.cols());
    for (long j = 0; j < m.cols(); ++j)
      for (long i = 0; i < m.rows(); ++i)
        if (!m.field().is_zero(m.at(i, j))) s.add(j, i, m.at(i, j));
    return s;
  }

  // s * v for a dense coordinate vector; result as sparse row->value map
  std::unordered_map<std::uint32_t, Elem> apply(const std::vector<Elem>& v) const {
    std::unordered_map<std::uint32_t, Elem> acc;
    for (std::uint64_t j = 0; j < ncols; ++j) {
      if (fld.is_zero(v[j])) continue;
      for (const auto& [r, x] : cols[j]) {
        auto it = acc.find(r);
        if (it == acc.end())
          acc.emplace(r, fld.mul(v[j], x));
        else {
          it->second = fld.add(it->second, fld.mul(v[j], x));
          if (fld.is_zero(it->second)) acc.erase(it);
        }
      }
    }
    return acc;
  }
};

// Streaming rank: columns are produced one at a time by gen(j) (entries need
// not be sorted; duplicate rows are summed). Only pivot columns are kept,
// fully reduced against earlier pivots at insertion time, so reducing a new
// column against pivots in creation order terminates: a pivot column can
// only mention pivot rows created after it.
template <class F>
class SparseEliminator {
 public:
  using Elem = typename F::Elem;
  using Entry = std::pair<std::uint32_t, Elem>;

  explicit SparseEliminator(F f) : fld_(f) {}

  // returns true if the column was independent (a new pivot was installed)
  bool feed(std::vector<Entry> col) {
    std::unordered_map<std::uint32_t, Elem> work;
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> todo;
    work.reserve(col.size() * 2);
    for (auto& [r, v] : col) {
      if (fld_.is_zero(v)) continue;
      auto it = work.find(r);
      if (it == work.end()) {
        work.emplace(r, std::move(v));
        auto p = pivot_of_row_.find(r);
        if (p != pivot_of_row_.end()) todo.push(p->second);
      } else {
        it->second = fld_.add(it->second, v);
        if (fld_.is_zero(it->second)) work.erase(it);
      }
    }
    while (!todo.empty()) {
      std::uint32_t t = todo.top();
      todo.pop();
      auto wit = work.find(pivot_row_[t]);
      if (wit == work.end() || fld_.is_zero(wit->second)) continue;
      Elem c = wit->second;
      work.erase(wit);  // stored pivot columns omit their (unit) pivot row
      for (const auto& [r, v] : pivot_col_[t]) {
        auto it = work.find(r);
        if (it == work.end()) {
          work.emplace(r, fld_.neg(fld_.mul(c, v)));
          auto p = pivot_of_row_.find(r);
          if (p != pivot_of_row_.end()) todo.push(p->second);
        } else {
          it->second = fld_.sub(it->second, fld_.mul(c, v));
          if (fld_.is_zero(it->second)) work.erase(it);
        }
      }
    }
    if (work.empty()) return false;
    // pivot choice: prefer +-1 entries (keeps integral data integral), then
    // the sparsest-looking proxy available: the smallest row index
    bool have = false, have_unit = false;
    std::uint32_t prow = 0;
    for (const auto& [r, v] : work) {
      bool unit = fld_.is_unit_pivot(v);
      if (!have || (unit && !have_unit) || (unit == have_unit && r < prow)) {
        have = true;
        have_unit = unit;
        prow = r;
      }
    }
    Elem iv = fld_.inv(work[prow]);
    std::vector<Entry> stored;
    stored.reserve(work.size() - 1);
    for (auto& [r, v] : work) {
      if (r == prow) continue;
      stored.emplace_back(r, fld_.mul(v, iv));
    }
    std::sort(stored.begin(), stored.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::uint32_t idx = static_cast<std::uint32_t>(pivot_row_.size());
    pivot_row_.push_back(prow);
    pivot_col_.push_back(std::move(stored));
    pivot_of_row_.emplace(prow, idx);
    return true;
  }

  long rank() const { return static_cast<long>(pivot_row_.size()); }

 private:
  F fld_;
  std::vector<std::uint32_t> pivot_row_;
  std::vector<std::vector<Entry>> pivot_col_;  // normalized, pivot row omitted
  std::unordered_map<std::uint32_t, std::uint32_t> pivot_of_row_;
};

template <class F>
long sparse_rank(const SparseCols<F>& m) {
  SparseEliminator<F> e(m.fld);
  for (const auto& c : m.cols) e.feed(c);
  return e.rank();
}

template <class F>
long sparse_rank_stream(
    F fld, std::uint64_t ncols,
    const std::function<std::vector<std::pair<std::uint32_t, typename F::Elem>>(std::uint64_t)>& gen) {
  SparseEliminator<F> e(fld);
  for (std::uint64_t j = 0; j < ncols; ++j) e.feed(gen(j));
  return e.rank();
}

}  // namespace cctlab
