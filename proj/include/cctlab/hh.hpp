#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

#include "cctlab/algkit.hpp"
#include "cctlab/field.hpp"
#include "cctlab/sparse.hpp"

namespace cctlab {

// how much work each rank computation may take, and which fallbacks are open
struct RankBudget {
  std::uint64_t dense_max_entries = 262'144;  // rows*cols for a dense matrix
  std::uint64_t sparse_max_cols = 20'000;     // direct sparse elimination in the field
  std::uint64_t escalate_max_cols = 200'000;  // sparse limit when exactness demands it
  bool allow_modular = true;                  // mod-p lower bounds for rational ranks
  std::uint64_t prime = 2147483647ull;
};

struct HHResult {
  long max_degree = 0;
  std::vector<std::uint64_t> cochain_dims;  // c_0 .. c_{max_degree+1}
  std::vector<long> ranks;                  // rank of delta^n, n = 0..max_degree
  std::vector<bool> rank_exact;             // false means: a lower bound from mod p
  std::vector<std::string> method;          // dense | sparse | modular
  std::vector<long> h;                      // cohomology dims (or upper bounds)
  std::vector<bool> h_exact;
};

namespace detail {

template <class F>
long sparse_rank_native(const BarCochain<F>& bar, long n) {
  SparseEliminator<F> e(bar.field());
  std::uint64_t cols = bar.space_dim(n);
  for (std::uint64_t j = 0; j < cols; ++j) e.feed(bar.column(n, j));
  return e.rank();
}

inline std::uint64_t mpq_mod_p(const mpq_class& v, const PrimeField& fp) {
  std::uint64_t num = mpz_fdiv_ui(v.get_num().get_mpz_t(), fp.p);
  std::uint64_t den = mpz_fdiv_ui(v.get_den().get_mpz_t(), fp.p);
  if (den == 0) throw AlgError("denominator vanishes mod the certificate prime");
  return fp.mul(num, fp.inv(den));
}

inline long modular_rank(const BarCochain<RationalField>& bar, long n, std::uint64_t p) {
  PrimeField fp(p);
  SparseEliminator<PrimeField> e(fp);
  std::uint64_t cols = bar.space_dim(n);
  std::vector<std::pair<std::uint32_t, std::uint64_t>> mapped;
  for (std::uint64_t j = 0; j < cols; ++j) {
    mapped.clear();
    for (const auto& [r, v] : bar.column(n, j)) {
      std::uint64_t mv = mpq_mod_p(v, fp);
      if (mv != 0) mapped.push_back({r, mv});
    }
    e.feed(mapped);
  }
  return e.rank();
}

}  // namespace detail

// ranks of the coboundaries delta^0..delta^max and the resulting cohomology
// dimensions; over the rationals, a rank computed mod p is a lower bound, so
// c_n - r(delta^n) - r(delta^{n-1}) is an upper bound for h^n and value 0 is
// exact; positive upper bounds are recomputed exactly while budgets permit
template <class F>
HHResult hh_table(const BarCochain<F>& bar, long max_degree, const RankBudget& budget) {
  HHResult out;
  out.max_degree = max_degree;
  for (long n = 0; n <= max_degree + 1; ++n) out.cochain_dims.push_back(bar.space_dim(n));

  auto rank_of = [&](long n, bool force_exact) -> std::pair<long, std::string> {
    std::uint64_t cols = bar.space_dim(n), rows = bar.space_dim(n + 1);
    if (rows != 0 && cols != 0 && rows <= budget.dense_max_entries / cols)
      return {rank(bar.dense_delta(n)), "dense"};
    if (cols == 0) return {0l, "dense"};
    std::uint64_t limit = force_exact ? budget.escalate_max_cols : budget.sparse_max_cols;
    if constexpr (!std::is_same_v<F, RationalField>) {
      // no modular fallback: the coefficients already live in a prime field,
      // so beyond the sparse cap there is nothing cheaper to fall back to
      if (cols <= limit) return {detail::sparse_rank_native(bar, n), "sparse"};
      throw AlgError("coboundary at degree " + std::to_string(n) +
                     " exceeds every enabled rank budget (" + std::to_string(cols) + " columns)");
    } else {
      if (cols <= limit) return {detail::sparse_rank_native(bar, n), "sparse"};
      if (!force_exact && budget.allow_modular)
        return {detail::modular_rank(bar, n, budget.prime), "modular"};
      throw AlgError("coboundary at degree " + std::to_string(n) +
                     " exceeds every enabled rank budget (" + std::to_string(cols) + " columns)");
    }
  };

  for (long n = 0; n <= max_degree; ++n) {
    auto [r, m] = rank_of(n, false);
    out.ranks.push_back(r);
    out.method.push_back(m);
    out.rank_exact.push_back(m != "modular");
  }

  auto recompute_h = [&]() {
    out.h.clear();
    out.h_exact.clear();
    for (long n = 0; n <= max_degree; ++n) {
      long rn = out.ranks[static_cast<size_t>(n)];
      long rp = n > 0 ? out.ranks[static_cast<size_t>(n - 1)] : 0;
      long value = static_cast<long>(out.cochain_dims[static_cast<size_t>(n)]) - rn - rp;
      bool ingredients_exact =
          out.rank_exact[static_cast<size_t>(n)] && (n == 0 || out.rank_exact[static_cast<size_t>(n - 1)]);
      out.h.push_back(value);
      out.h_exact.push_back(ingredients_exact || value == 0);
    }
  };
  recompute_h();

  // a positive upper bound built on modular ranks is not a certificate; redo
  // the offending ranks exactly if the escalation budget allows
  for (long n = 0; n <= max_degree; ++n) {
    if (out.h_exact[static_cast<size_t>(n)]) continue;
    for (long d : {n, n - 1}) {
      if (d < 0 || out.rank_exact[static_cast<size_t>(d)]) continue;
      try {
        auto [r, m] = rank_of(d, true);
        out.ranks[static_cast<size_t>(d)] = r;
        out.method[static_cast<size_t>(d)] = m + "(escalated)";
        out.rank_exact[static_cast<size_t>(d)] = true;
      } catch (const AlgError&) {
        // out of budget: the reported value stays an upper bound
      }
    }
    recompute_h();
  }
  return out;
}

template <class F>
HHResult hh_table(const AlgPtr<F>& a, const Bimodule<F>& x, long max_degree,
                  const RankBudget& budget = {}) {
  BarCochain<F> bar(a, x);
  return hh_table(bar, max_degree, budget);
}

}  // namespace cctlab
