#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctlab/algkit.hpp>
#include <cctlab/fincat.hpp>
#include <cctlab/hh.hpp>

#include "oracle_hh.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

using namespace cctlab;
using Q = RationalField;

namespace {

using IntTerms = std::vector<std::pair<long, long>>;

template <class F>
Algebra<F> make_alg(F fld, std::string name, std::vector<std::string> basis,
                    std::vector<std::vector<IntTerms>> mul, std::vector<long> unit) {
  Algebra<F> a;
  a.fld = fld;
  a.name = std::move(name);
  a.dim = static_cast<long>(basis.size());
  a.basis_names = std::move(basis);
  a.product.assign(static_cast<size_t>(a.dim),
                   std::vector<std::vector<typename Algebra<F>::Term>>(static_cast<size_t>(a.dim)));
  for (long i = 0; i < a.dim; ++i)
    for (long j = 0; j < a.dim; ++j)
      for (auto [k, c] : mul[static_cast<size_t>(i)][static_cast<size_t>(j)])
        a.product[static_cast<size_t>(i)][static_cast<size_t>(j)].push_back({k, fld.from_long(c)});
  for (long v : unit) a.unit.push_back(fld.from_long(v));
  return a;
}

// k[x]/(x^2), basis {1, x}
template <class F>
AlgPtr<F> dual_numbers(F fld) {
  return std::make_shared<const Algebra<F>>(
      make_alg(fld, "k[x]/(x^2)", {"1", "x"}, {{{{0, 1}}, {{1, 1}}}, {{{1, 1}}, {}}}, {1, 0}));
}

AlgPtr<Q> k_times_k() {
  return std::make_shared<const Algebra<Q>>(
      make_alg(Q{}, "kxk", {"e0", "e1"}, {{{{0, 1}}, {}}, {{}, {{1, 1}}}}, {1, 1}));
}

CatPtr chain_poset(int n) {
  std::vector<std::string> objs;
  std::vector<std::pair<int, int>> le;
  for (int i = 0; i < n; ++i) objs.push_back(std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) le.push_back({i, i + 1});
  return std::make_shared<const FinCat>(FinCat::poset_from_relations(objs, le));
}

// two incomparable bottoms, two incomparable tops, all four mixed relations
CatPtr crown_poset() {
  return std::make_shared<const FinCat>(
      FinCat::poset_from_relations({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}));
}

CatPtr parallel_pair() {
  std::vector<MorData> mors = {{"id_x", 0, 0}, {"id_y", 1, 1}, {"a", 0, 1}, {"b", 0, 1}};
  std::map<std::pair<MorId, MorId>, MorId> t;
  for (MorId m = 0; m < 4; ++m) {
    t[{m, mors[static_cast<size_t>(m)].dom == 0 ? 0 : 1}] = m;
    t[{mors[static_cast<size_t>(m)].cod == 0 ? 0 : 1, m}] = m;
  }
  return std::make_shared<const FinCat>(FinCat({"x", "y"}, mors, {0, 1}, t));
}

CatPtr c2_group() {
  std::vector<MorData> mors = {{"id_x", 0, 0}, {"g", 0, 0}};
  std::map<std::pair<MorId, MorId>, MorId> t;
  t[{0, 0}] = 0;
  t[{0, 1}] = 1;
  t[{1, 0}] = 1;
  t[{1, 1}] = 0;
  return std::make_shared<const FinCat>(FinCat({"x"}, mors, {0}, t));
}

AlgPtr<Q> cat_alg(const CatPtr& c, std::string name) {
  Algebra<Q> a = category_algebra(Q{}, c);
  a.name = std::move(name);
  return std::make_shared<const Algebra<Q>>(std::move(a));
}

// one-dimensional bimodule: basis element i acts by aug[i] on both sides
template <class F>
Bimodule<F> scalar_module(const AlgPtr<F>& a, const std::vector<long>& aug) {
  Bimodule<F> m;
  m.fld = a->fld;
  m.name = a->name + "-scalar";
  m.alg = a;
  m.dim = 1;
  for (long i = 0; i < a->dim; ++i) {
    Mat<F> act(a->fld, 1, 1);
    act.at(0, 0) = a->fld.from_long(aug[static_cast<size_t>(i)]);
    m.left.push_back(act);
    m.right.push_back(act);
  }
  return m;
}

oracle::Alg to_oracle(const Algebra<Q>& a) {
  oracle::Alg o;
  o.n = static_cast<int>(a.dim);
  o.mul.assign(static_cast<size_t>(o.n),
               std::vector<oracle::Vec>(static_cast<size_t>(o.n), oracle::Vec(static_cast<size_t>(o.n), 0)));
  for (long i = 0; i < a.dim; ++i)
    for (long j = 0; j < a.dim; ++j)
      for (const auto& [k, v] : a.prod(i, j))
        o.mul[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(k)] +=
            oracle::Rat(v.get_str());
  for (const auto& u : a.unit) o.unit.push_back(oracle::Rat(u.get_str()));
  return o;
}

oracle::Bimod to_oracle(const Bimodule<Q>& x) {
  oracle::Bimod o;
  o.m = static_cast<int>(x.dim);
  for (long i = 0; i < x.alg->dim; ++i) {
    oracle::Dense l(static_cast<size_t>(x.dim), oracle::Vec(static_cast<size_t>(x.dim), 0));
    oracle::Dense r = l;
    for (long y = 0; y < x.dim; ++y)
      for (long c = 0; c < x.dim; ++c) {
        l[static_cast<size_t>(y)][static_cast<size_t>(c)] =
            oracle::Rat(x.left[static_cast<size_t>(i)].at(y, c).get_str());
        r[static_cast<size_t>(y)][static_cast<size_t>(c)] =
            oracle::Rat(x.right[static_cast<size_t>(i)].at(y, c).get_str());
      }
    o.left.push_back(std::move(l));
    o.right.push_back(std::move(r));
  }
  return o;
}

Mat<Q> delta_from_rows(const BarCochain<Q>& bar, long n) {
  long rows = static_cast<long>(bar.space_dim(n + 1));
  long cols = static_cast<long>(bar.space_dim(n));
  Mat<Q> d(bar.field(), rows, cols);
  for (long i = 0; i < rows; ++i)
    for (const auto& [c, v] : bar.row_of(n, static_cast<std::uint64_t>(i)))
      d.at(i, static_cast<long>(c)) = bar.field().add(d.at(i, static_cast<long>(c)), v);
  return d;
}

void check_case(const AlgPtr<Q>& a, const Bimodule<Q>& x, long maxdeg,
                const std::vector<long>& expect, int oracle_deg) {
  HHResult r = hh_table(a, x, maxdeg);
  REQUIRE(static_cast<long>(r.h.size()) == maxdeg + 1);
  CHECK(r.h == expect);
  for (long n = 0; n <= maxdeg; ++n) CHECK(r.h_exact[static_cast<size_t>(n)]);
  if (oracle_deg >= 0) {
    std::vector<long> got = oracle::hh(to_oracle(*a), to_oracle(x), oracle_deg);
    std::vector<long> lib(r.h.begin(), r.h.begin() + oracle_deg + 1);
    CHECK(lib == got);
  }
}

}  // namespace

TEST_CASE("structure constants validate and transform") {
  AlgPtr<Q> dual = dual_numbers(Q{});
  AlgPtr<Q> kk = k_times_k();
  AlgPtr<Q> ut2 = cat_alg(chain_poset(2), "ut2");
  AlgPtr<Q> pp = cat_alg(parallel_pair(), "kronecker");
  AlgPtr<Q> zc2 = cat_alg(c2_group(), "kC2");
  dual->validate();
  kk->validate();
  ut2->validate();
  pp->validate();
  zc2->validate();
  CHECK(ut2->dim == 3);
  CHECK(pp->dim == 4);

  Algebra<Q> op = ut2->opposite();
  op.validate();
  for (long i = 0; i < ut2->dim; ++i)
    for (long j = 0; j < ut2->dim; ++j) CHECK(op.prod(i, j) == ut2->prod(j, i));

  Algebra<Q> tens = tensor_algebra(*dual, *kk);
  tens.validate();
  CHECK(tens.dim == 4);
  CHECK(tens.basis_names[1] == "1(x)e1");

  Algebra<Q> env = enveloping_algebra(*ut2);
  env.validate();
  CHECK(env.dim == 9);

  // non-composable pairs multiply to zero, encoded as an empty term list
  CatPtr ppc = parallel_pair();
  MorId ma = ppc->morphism_by_name("a").value(), mb = ppc->morphism_by_name("b").value();
  CHECK(pp->prod(ma, mb).empty());

  Algebra<Q> bad = *dual;
  bad.product[1][1].push_back({0, Q{}.zero()});
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("malformed"), AlgError);

  Algebra<Q> nonassoc = *pp;
  nonassoc.product[static_cast<size_t>(ma)][static_cast<size_t>(mb)] = {{ma, Q{}.one()}};
  CHECK_THROWS_WITH_AS(nonassoc.validate(), doctest::Contains("associativity"), AlgError);
}

TEST_CASE("center dimensions") {
  CHECK(center_dim(*cat_alg(chain_poset(2), "ut2")) == 1);
  CHECK(center_dim(*dual_numbers(Q{})) == 2);
  CHECK(center_dim(*k_times_k()) == 2);
  CHECK(center_dim(*cat_alg(subdivide(chain_poset(2)).prime, "inc")) == 1);
  CHECK(center_dim(*cat_alg(crown_poset(), "crown")) == 1);
  CHECK(center_dim(*cat_alg(parallel_pair(), "kronecker")) == 1);
  CHECK(center_dim(*cat_alg(c2_group(), "kC2")) == 2);
}

TEST_CASE("coboundary composites vanish and generators agree") {
  AlgPtr<Q> dual = dual_numbers(Q{});
  AlgPtr<Q> ut2 = cat_alg(chain_poset(2), "ut2");
  AlgPtr<Q> pp = cat_alg(parallel_pair(), "kronecker");
  BarCochain<Q> bdual(dual, regular_bimodule(dual));
  BarCochain<Q> but2(ut2, regular_bimodule(ut2));
  BarCochain<Q> bpp(pp, regular_bimodule(pp));
  Bimodule<Q> triv = scalar_module(dual, {1, 0});
  triv.validate();
  BarCochain<Q> btriv(dual, triv);

  for (long n = 0; n <= 2; ++n) {
    CHECK((bdual.dense_delta(n + 1) * bdual.dense_delta(n)).is_zero());
    CHECK((but2.dense_delta(n + 1) * but2.dense_delta(n)).is_zero());
    CHECK((btriv.dense_delta(n + 1) * btriv.dense_delta(n)).is_zero());
  }
  for (long n = 0; n <= 1; ++n) CHECK((bpp.dense_delta(n + 1) * bpp.dense_delta(n)).is_zero());

  // the row generator and the column generator describe the same matrix
  for (long n = 0; n <= 2; ++n) {
    CHECK(delta_from_rows(bdual, n) == bdual.dense_delta(n));
    CHECK(delta_from_rows(but2, n) == but2.dense_delta(n));
  }
  for (long n = 0; n <= 1; ++n) CHECK(delta_from_rows(bpp, n) == bpp.dense_delta(n));

  for (long n = 0; n <= 2; ++n) CHECK(bdual.sparse_delta(n).dense() == bdual.dense_delta(n));
  CHECK(but2.sparse_delta(1).dense() == but2.dense_delta(1));

  CHECK_THROWS_WITH_AS(but2.space_dim(40), doctest::Contains("too large"), AlgError);
  CHECK_THROWS_WITH_AS(but2.column(19, 0), doctest::Contains("streaming index range"), AlgError);
  CHECK_THROWS_WITH_AS(but2.row_of(20, 0), doctest::Contains("streaming index range"), AlgError);
}

TEST_CASE("cohomology tables match the oracle and pinned values") {
  AlgPtr<Q> base = cat_alg(chain_poset(1), "k");
  HHResult rk = hh_table(base, regular_bimodule(base), 3);
  CHECK(rk.h == std::vector<long>{1, 0, 0, 0});
  // one-dimensional coefficients: the coboundary alternates 0, id, 0, id
  CHECK(rk.ranks == std::vector<long>{0, 1, 0, 1});
  check_case(base, regular_bimodule(base), 3, {1, 0, 0, 0}, 3);

  AlgPtr<Q> dual = dual_numbers(Q{});
  HHResult rd = hh_table(dual, regular_bimodule(dual), 3);
  CHECK(rd.cochain_dims == std::vector<std::uint64_t>{2, 4, 8, 16, 32});
  check_case(dual, regular_bimodule(dual), 3, {2, 1, 1, 1}, 3);
  check_case(dual, scalar_module(dual, {1, 0}), 3, {1, 1, 1, 1}, 3);

  AlgPtr<Q> kk = k_times_k();
  check_case(kk, regular_bimodule(kk), 3, {2, 0, 0, 0}, 3);

  AlgPtr<Q> ut2 = cat_alg(chain_poset(2), "ut2");
  check_case(ut2, regular_bimodule(ut2), 3, {1, 0, 0, 0}, 3);

  // hereditary two-arrow quiver: outer derivations form a three-dimensional space
  AlgPtr<Q> pp = cat_alg(parallel_pair(), "kronecker");
  check_case(pp, regular_bimodule(pp), 2, {1, 3, 0}, 2);

  AlgPtr<Q> inc = cat_alg(subdivide(chain_poset(2)).prime, "inc");
  CHECK(inc->dim == 5);
  check_case(inc, regular_bimodule(inc), 3, {1, 0, 0, 0}, 2);

  AlgPtr<Q> crown = cat_alg(crown_poset(), "crown");
  CHECK(crown->dim == 8);
  HHResult rc = hh_table(crown, regular_bimodule(crown), 2);
  CHECK(rc.method == std::vector<std::string>{"dense", "dense", "sparse"});
  check_case(crown, regular_bimodule(crown), 2, {1, 1, 0}, 1);
}

TEST_CASE("rank budgets and the modular certificate") {
  AlgPtr<Q> ut2 = cat_alg(chain_poset(2), "ut2");
  Bimodule<Q> reg = regular_bimodule(ut2);

  RankBudget forced;
  forced.dense_max_entries = 0;
  forced.sparse_max_cols = 0;
  HHResult r = hh_table(ut2, reg, 3, forced);
  CHECK(r.h == std::vector<long>{1, 0, 0, 0});
  // h^0 is positive, so its modular ingredient gets recomputed exactly; every
  // other bound closes at zero and stays certified without escalation
  CHECK(r.method == std::vector<std::string>{"sparse(escalated)", "modular", "modular", "modular"});
  CHECK(r.rank_exact == std::vector<bool>{true, false, false, false});
  CHECK(r.h_exact == std::vector<bool>{true, true, true, true});

  RankBudget sparse_only;
  sparse_only.dense_max_entries = 0;
  HHResult rs = hh_table(ut2, reg, 3, sparse_only);
  CHECK(rs.h == std::vector<long>{1, 0, 0, 0});
  CHECK(rs.method == std::vector<std::string>{"sparse", "sparse", "sparse", "sparse"});

  RankBudget blocked;
  blocked.dense_max_entries = 0;
  blocked.sparse_max_cols = 0;
  blocked.allow_modular = false;
  CHECK_THROWS_WITH_AS(hh_table(ut2, reg, 3, blocked), doctest::Contains("rank budget"), AlgError);

  BarCochain<Q> bar(ut2, reg);
  CHECK(detail::modular_rank(bar, 2, 2147483647ull) == rank(bar.dense_delta(2)));

  PrimeField cp(2147483647ull);
  CHECK(detail::mpq_mod_p(mpq_class(-3, 4), cp) == cp.div(cp.from_long(-3), cp.from_long(4)));
  CHECK_THROWS_WITH_AS(detail::mpq_mod_p(mpq_class(1, 2147483647), cp),
                       doctest::Contains("certificate prime"), AlgError);
}

TEST_CASE("prime field coefficients") {
  AlgPtr<PrimeField> d5 = dual_numbers(PrimeField(5));
  HHResult r5 = hh_table(d5, regular_bimodule(d5), 3);
  CHECK(r5.h == std::vector<long>{2, 1, 1, 1});
  CHECK(r5.method == std::vector<std::string>(4, "dense"));

  // in characteristic two the two halves of the connecting map coincide, so
  // every induced map vanishes and each degree keeps the full two dimensions
  AlgPtr<PrimeField> d2 = dual_numbers(PrimeField(2));
  HHResult r2 = hh_table(d2, regular_bimodule(d2), 3);
  CHECK(r2.h == std::vector<long>{2, 2, 2, 2});

  RankBudget sparse_only;
  sparse_only.dense_max_entries = 0;
  HHResult r5s = hh_table(d5, regular_bimodule(d5), 3, sparse_only);
  CHECK(r5s.h == std::vector<long>{2, 1, 1, 1});
  CHECK(r5s.method == std::vector<std::string>(4, "sparse"));

  // no modular fallback exists for coefficients already in a prime field
  RankBudget blocked;
  blocked.dense_max_entries = 0;
  blocked.sparse_max_cols = 0;
  CHECK_THROWS_AS(hh_table(d5, regular_bimodule(d5), 3, blocked), AlgError);
}

TEST_CASE("bimodule validation") {
  AlgPtr<Q> dual = dual_numbers(Q{});
  Bimodule<Q> reg = regular_bimodule(dual);
  reg.validate();

  Bimodule<Q> corrupted = reg;
  corrupted.right[1].at(0, 0) = Q{}.one();
  CHECK_THROWS_AS(corrupted.validate(), AlgError);

  Bimodule<Q> short_list = reg;
  short_list.left.pop_back();
  CHECK_THROWS_WITH_AS(short_list.validate(), doctest::Contains("one action matrix"), AlgError);

  // weights sum to one so the unit acts correctly, but the assignment is not
  // multiplicative, so the action law breaks
  AlgPtr<Q> kk = k_times_k();
  Bimodule<Q> notmap = scalar_module(kk, {2, -1});
  CHECK_THROWS_WITH_AS(notmap.validate(), doctest::Contains("action breaks"), AlgError);

  Bimodule<Q> nounit = scalar_module(dual, {0, 0});
  CHECK_THROWS_WITH_AS(nounit.validate(), doctest::Contains("unit does not act"), AlgError);
}
