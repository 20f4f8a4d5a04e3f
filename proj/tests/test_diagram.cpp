#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctlab/algkit.hpp>
#include <cctlab/diagram.hpp>
#include <cctlab/fincat.hpp>
#include <cctlab/kan.hpp>
#include <cctlab/shriek.hpp>

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

using namespace cctlab;
using Q = RationalField;

namespace {

using IntTerms = std::vector<std::pair<long, long>>;

Algebra<Q> make_alg(std::string name, std::vector<std::string> basis,
                    std::vector<std::vector<IntTerms>> mul, std::vector<long> unit) {
  Q fld;
  Algebra<Q> a;
  a.fld = fld;
  a.name = std::move(name);
  a.dim = static_cast<long>(basis.size());
  a.basis_names = std::move(basis);
  a.product.assign(static_cast<size_t>(a.dim),
                   std::vector<std::vector<typename Algebra<Q>::Term>>(static_cast<size_t>(a.dim)));
  for (long i = 0; i < a.dim; ++i)
    for (long j = 0; j < a.dim; ++j)
      for (auto [k, c] : mul[static_cast<size_t>(i)][static_cast<size_t>(j)])
        a.product[static_cast<size_t>(i)][static_cast<size_t>(j)].push_back({k, fld.from_long(c)});
  for (long v : unit) a.unit.push_back(fld.from_long(v));
  return a;
}

AlgPtr<Q> scalar_field() {
  return std::make_shared<const Algebra<Q>>(make_alg("k", {"1"}, {{{{0, 1}}}}, {1}));
}

AlgPtr<Q> dual_numbers() {
  return std::make_shared<const Algebra<Q>>(
      make_alg("k[x]/(x^2)", {"1", "x"}, {{{{0, 1}}, {{1, 1}}}, {{{1, 1}}, {}}}, {1, 0}));
}

AlgPtr<Q> k_times_k() {
  return std::make_shared<const Algebra<Q>>(
      make_alg("kxk", {"e0", "e1"}, {{{{0, 1}}, {}}, {{}, {{1, 1}}}}, {1, 1}));
}

CatPtr chain_poset(int n) {
  std::vector<std::string> objs;
  std::vector<std::pair<int, int>> le;
  for (int i = 0; i < n; ++i) objs.push_back(std::to_string(i));
  for (int i = 0; i + 1 < n; ++i) le.push_back({i, i + 1});
  return std::make_shared<const FinCat>(FinCat::poset_from_relations(objs, le));
}

CatPtr square_poset() {
  return std::make_shared<const FinCat>(
      FinCat::poset_from_relations({"0", "1", "2", "3"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}));
}

CatPtr discrete_poset() {
  return std::make_shared<const FinCat>(FinCat::poset_from_relations({"p", "q"}, {}));
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

Mat<Q> eye(long n) { return Mat<Q>::identity(Q{}, n); }

// identities filled in automatically; hom_of supplies every non-identity
DiaPtr<Q> make_dia(const CatPtr& c, std::vector<AlgPtr<Q>> algs,
                   const std::function<Mat<Q>(MorId)>& hom_of, std::string name) {
  Diagram<Q> d;
  d.fld = Q{};
  d.name = std::move(name);
  d.base = c;
  d.alg = std::move(algs);
  for (MorId v = 0; v < c->num_morphisms(); ++v)
    d.hom.push_back(c->is_identity(v) ? eye(d.alg[static_cast<size_t>(c->dom(v))]->dim)
                                      : hom_of(v));
  return std::make_shared<const Diagram<Q>>(std::move(d));
}

// the unit map k -> a as a hom matrix
Mat<Q> unit_col(const AlgPtr<Q>& a) {
  Mat<Q> m(Q{}, a->dim, 1);
  for (long i = 0; i < a->dim; ++i) m.at(i, 0) = a->unit[static_cast<size_t>(i)];
  return m;
}

// A^0 = a0, A^1 = a1 over the poset 0 <= 1, with phi on the only non-identity
DiaPtr<Q> p2_dia(const CatPtr& c, const AlgPtr<Q>& a0, const AlgPtr<Q>& a1, const Mat<Q>& phi,
                 std::string name) {
  return make_dia(c, {a0, a1}, [&](MorId) { return phi; }, std::move(name));
}

DiagModule<Q> zero_module(const DiaPtr<Q>& dia) {
  DiagModule<Q> m;
  m.fld = dia->fld;
  m.name = "0";
  m.dia = dia;
  const FinCat& c = *dia->base;
  m.dims.assign(static_cast<size_t>(c.num_objects()), 0);
  for (ObjId i = 0; i < c.num_objects(); ++i)
    m.act.push_back(std::vector<Mat<Q>>(static_cast<size_t>(dia->at(i).dim), Mat<Q>(Q{}, 0, 0)));
  for (MorId v = 0; v < c.num_morphisms(); ++v) m.tr.push_back(Mat<Q>(Q{}, 0, 0));
  return m;
}

// wraps an algebra-level bimodule as a diagram bimodule over a point, so the
// diagram hom solver doubles as the plain bimodule hom solver
DiagBimodule<Q> point_bimod(const DiaPtr<Q>& point_dia, const Bimodule<Q>& m) {
  DiagBimodule<Q> b;
  b.fld = Q{};
  b.name = m.name;
  b.dia = point_dia;
  b.mod = {m};
  b.tr = {eye(m.dim)};
  return b;
}

long stacked_rank(const std::vector<DiagMap<Q>>& maps) {
  if (maps.empty()) return 0;
  std::vector<std::vector<Q::Elem>> rows;
  for (const auto& e : maps) rows.push_back(flatten_map(e));
  Mat<Q> m(Q{}, static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) m.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return rank(m);
}

}  // namespace

TEST_CASE("diagrams validate and pull back") {
  auto k = scalar_field();
  auto dia_k = constant_diagram(Q{}, chain_poset(3), k, "k-const");
  dia_k->validate();

  auto dual = dual_numbers();
  auto p2 = chain_poset(2);
  auto dia_dual = p2_dia(p2, dual, k, unit_col(dual), "dual-to-k");
  dia_dual->validate();

  // unit preservation failure
  auto bad_unit = p2_dia(p2, dual, k, Mat<Q>(Q{}, 2, 1), "bad-unit");
  CHECK_THROWS_WITH_AS(bad_unit->validate(), doctest::Contains("unit"), DiagError);

  // multiplicativity failure: 1 |-> 1, x |-> 1 is not a hom of k[x]/(x^2)
  Mat<Q> not_mult = eye(2);
  not_mult.at(0, 1) = Q{}.one();
  not_mult.at(1, 1) = Q{}.zero();
  auto bad_mult = p2_dia(p2, dual, dual, not_mult, "bad-mult");
  CHECK_THROWS_WITH_AS(bad_mult->validate(), doctest::Contains("multiplicative"), DiagError);

  // x |-> -x is a hom on each edge, but the composite is pinned to the
  // two-step product, so assigning it to the long arrow breaks functoriality
  Mat<Q> neg = eye(2);
  neg.at(1, 1) = Q{}.neg(Q{}.one());
  auto c3 = chain_poset(3);
  auto bad_fun = make_dia(
      c3, {dual, dual, dual},
      [&](MorId v) { return c3->dom(v) == 0 && c3->cod(v) == 2 ? neg : eye(2); }, "bad-fun");
  CHECK_THROWS_WITH_AS(bad_fun->validate(), doctest::Contains("functoriality"), DiagError);

  // identity functor pullback shares everything
  auto idf = identity_functor(p2);
  auto same = pullback_diagram(idf, dia_dual, "same");
  for (size_t i = 0; i < same->alg.size(); ++i) CHECK(same->alg[i] == dia_dual->alg[i]);
  for (size_t v = 0; v < same->hom.size(); ++v) CHECK(same->hom[v] == dia_dual->hom[v]);

  // restriction along the collapse copies the algebra at the first vertex
  Subdivision sd = subdivide(p2);
  auto prime = subdivide_diagram(sd, dia_dual, "dual'");
  prime->validate();
  ObjId v0 = prime->base->object_by_name("[0]").value();
  ObjId v1 = prime->base->object_by_name("[1]").value();
  ObjId e01 = prime->base->object_by_name("[0>1]").value();
  CHECK(prime->alg[static_cast<size_t>(v0)] == dual);
  CHECK(prime->alg[static_cast<size_t>(v1)] == k);
  CHECK(prime->alg[static_cast<size_t>(e01)] == dual);

  auto const_prime = subdivide_diagram(sd, constant_diagram(Q{}, p2, k, "k"), "k'");
  for (const auto& a : const_prime->alg) CHECK(a == k);
  const_prime->validate();
}

TEST_CASE("diagram modules and bimodules validate") {
  auto k = scalar_field();
  auto dual = dual_numbers();
  auto p2 = chain_poset(2);
  auto dia = p2_dia(p2, dual, k, unit_col(dual), "dual-to-k");

  DiagModule<Q> reg = regular_module(dia);
  reg.validate();
  CHECK(reg.dims == std::vector<long>{2, 1});

  DiagBimodule<Q> breg = regular_diag_bimodule(dia);
  breg.validate();

  zero_module(dia).validate();

  // a transition that fails to commute with the x action is rejected
  auto dia2 = constant_diagram(Q{}, p2, dual, "dual-const");
  DiagModule<Q> skew = regular_module(dia2);
  for (MorId v = 0; v < dia2->base->num_morphisms(); ++v)
    if (!dia2->base->is_identity(v)) {
      skew.tr[static_cast<size_t>(v)] = eye(2);
      skew.tr[static_cast<size_t>(v)].at(0, 1) = Q{}.one();
    }
  CHECK_THROWS_WITH_AS(skew.validate(), doctest::Contains("not linear"), DiagError);

  // x acting as the identity is not multiplicative
  DiagModule<Q> badact = regular_module(dia2);
  badact.act[0][1] = eye(2);
  CHECK_THROWS_WITH_AS(badact.validate(), doctest::Contains("multiplicative"), DiagError);

  DiagModule<Q> short_tr = reg;
  short_tr.tr.pop_back();
  CHECK_THROWS_WITH_AS(short_tr.validate(), doctest::Contains("wrong size"), DiagError);

  // pullback of the regular module is the regular module of the pullback
  Subdivision sd = subdivide(p2);
  auto prime = subdivide_diagram(sd, dia, "dual'");
  DiagModule<Q> pulled = subdivide_module(sd, prime, reg, "reg'");
  pulled.validate();
  DiagModule<Q> prime_reg = regular_module(prime);
  CHECK(pulled.dims == prime_reg.dims);
  for (ObjId i = 0; i < prime->base->num_objects(); ++i)
    for (long b = 0; b < prime->at(i).dim; ++b)
      CHECK(pulled.act_basis(i, b) == prime_reg.act_basis(i, b));
  for (MorId v = 0; v < prime->base->num_morphisms(); ++v)
    CHECK(pulled.tr_of(v) == prime_reg.tr_of(v));

  DiagBimodule<Q> bpulled = subdivide_bimodule(sd, prime, breg, "breg'");
  bpulled.validate();
}

TEST_CASE("hom spaces solve linearity and naturality") {
  auto k = scalar_field();
  auto dia_k = constant_diagram(Q{}, chain_poset(2), k, "k-const");
  DiagModule<Q> reg_k = regular_module(dia_k);

  // naturality ties the two scalar components together
  CHECK(hom_space(reg_k, reg_k).size() == 1);
  CHECK(hom_space_bimod(regular_diag_bimodule(dia_k), regular_diag_bimodule(dia_k)).size() == 1);

  CHECK(hom_space(reg_k, zero_module(dia_k)).empty());

  auto dual = dual_numbers();
  auto dia_dual = p2_dia(chain_poset(2), dual, k, unit_col(dual), "dual-to-k");
  DiagModule<Q> reg_d = regular_module(dia_dual);
  std::vector<DiagMap<Q>> endos = hom_space(reg_d, reg_d);
  CHECK(endos.size() == 1);
  CHECK(stacked_rank(endos) == 1);
  std::string why;
  CHECK(is_module_map(reg_d, reg_d, endos[0], &why));

  CHECK(hom_space_bimod(regular_diag_bimodule(dia_dual), regular_diag_bimodule(dia_dual)).size() ==
        1);

  DiagMap<Q> broken = endos[0];
  broken.comp[0] = broken.comp[0] + broken.comp[0];
  CHECK_FALSE(is_module_map(reg_d, reg_d, broken, &why));
  CHECK(why.find("naturality") != std::string::npos);

  auto other = constant_diagram(Q{}, chain_poset(3), k, "k3");
  CHECK_THROWS_WITH_AS(hom_space(reg_k, regular_module(other)),
                       doctest::Contains("different bases"), DiagError);
}

TEST_CASE("flattened algebra products are pinned") {
  auto k = scalar_field();
  auto dia = constant_diagram(Q{}, chain_poset(2), k, "k-const");
  ShriekAlgebra<Q> sa = shriek_algebra(dia, "flat");
  sa.alg->validate();
  CHECK(sa.alg->dim == 3);
  CHECK(sa.pairs == std::vector<std::pair<ObjId, ObjId>>{{0, 0}, {0, 1}, {1, 1}});

  // the three blocks multiply exactly like upper-triangular 2x2 matrix units
  Algebra<Q> ut2 = make_alg("ut2", {"e11", "e12", "e22"},
                            {{{{0, 1}}, {{1, 1}}, {}}, {{}, {}, {{1, 1}}}, {{}, {}, {{2, 1}}}},
                            {1, 0, 1});
  CHECK(sa.alg->product == ut2.product);
  CHECK(sa.alg->unit == ut2.unit);
  CHECK(center_dim(*sa.alg) == 1);

  // flattening the constant diagram gives the opposite category algebra
  auto sq = square_poset();
  ShriekAlgebra<Q> fsq = shriek_algebra(constant_diagram(Q{}, sq, k, "k-sq"), "flat-sq");
  Algebra<Q> op = category_algebra(Q{}, sq).opposite();
  CHECK(fsq.alg->dim == sq->num_morphisms());
  std::vector<MorId> arrow_of;
  for (auto [i, j] : fsq.pairs) arrow_of.push_back(sq->poset_arrow(i, j));
  std::vector<long> pair_of(static_cast<size_t>(sq->num_morphisms()), -1);
  for (size_t p = 0; p < arrow_of.size(); ++p) pair_of[static_cast<size_t>(arrow_of[p])] = static_cast<long>(p);
  for (long p1 = 0; p1 < fsq.alg->dim; ++p1)
    for (long p2 = 0; p2 < fsq.alg->dim; ++p2) {
      const auto& got = fsq.alg->prod(p1, p2);
      const auto& want = op.prod(arrow_of[static_cast<size_t>(p1)], arrow_of[static_cast<size_t>(p2)]);
      CHECK(got.size() == want.size());
      if (!got.empty()) {
        CHECK(got.size() == 1);
        CHECK(got[0].first == pair_of[static_cast<size_t>(want[0].first)]);
        CHECK(Q{}.eq(got[0].second, want[0].second));
      }
    }

  // a discrete base flattens to the product of the object algebras
  auto dd = make_dia(discrete_poset(), {dual_numbers(), k_times_k()},
                     [](MorId) { return Mat<Q>(Q{}, 0, 0); }, "disc");
  ShriekAlgebra<Q> fd = shriek_algebra(dd, "flat-disc");
  fd.alg->validate();
  CHECK(fd.alg->dim == 4);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 2; ++j) {
      CHECK(fd.alg->prod(i, j + 2).empty());
      CHECK(fd.alg->prod(i + 2, j).empty());
      CHECK(fd.alg->prod(i, j) == dd->at(0).prod(i, j));
      const auto& t = fd.alg->prod(i + 2, j + 2);
      const auto& s = dd->at(1).prod(i, j);
      CHECK(t.size() == s.size());
      for (size_t z = 0; z < t.size(); ++z) {
        CHECK(t[z].first == s[z].first + 2);
        CHECK(Q{}.eq(t[z].second, s[z].second));
      }
    }
  CHECK(center_dim(*fd.alg) == 4);

  // dimension bookkeeping over the curated bases and their subdivisions
  auto dim_of = [&](const DiaPtr<Q>& d) { return shriek_algebra(d, "t").alg->dim; };
  auto p2 = chain_poset(2);
  auto dual_p2 = p2_dia(p2, dual_numbers(), k, unit_col(dual_numbers()), "dual-to-k");
  auto kk_p2 = p2_dia(p2, k_times_k(), k, unit_col(k_times_k()), "kk-to-k");
  CHECK(dim_of(dual_p2) == 5);
  CHECK(dim_of(kk_p2) == 5);
  Subdivision sd2 = subdivide(p2);
  CHECK(dim_of(subdivide_diagram(sd2, dual_p2, "dual'")) == 9);
  CHECK(dim_of(subdivide_diagram(sd2, kk_p2, "kk'")) == 9);
  CHECK(dim_of(constant_diagram(Q{}, chain_poset(3), k, "k3")) == 6);
  Subdivision sd3 = subdivide(chain_poset(3));
  CHECK(dim_of(constant_diagram(Q{}, sd3.prime, k, "k3'")) == 19);
  CHECK(dim_of(constant_diagram(Q{}, sq, k, "ksq")) == 9);
  Subdivision sdsq = subdivide(sq);
  CHECK(dim_of(constant_diagram(Q{}, sdsq.prime, k, "ksq'")) == 33);
  Subdivision sdpp = subdivide(parallel_pair());
  CHECK(dim_of(constant_diagram(Q{}, sdpp.prime, k, "kcrown")) == 8);
  Subdivision sdcr = subdivide(sdpp.prime);
  CHECK(dim_of(constant_diagram(Q{}, sdcr.prime, k, "kcrown'")) == 16);

  CHECK_THROWS_WITH_AS(shriek_algebra(constant_diagram(Q{}, parallel_pair(), k, "kpp"), "bad"),
                       doctest::Contains("poset"), DiagError);
}

TEST_CASE("flattened bimodules and maps") {
  auto k = scalar_field();
  auto dual = dual_numbers();

  // flattening the diagram as a bimodule over itself gives the regular
  // bimodule of the flattened algebra
  for (const DiaPtr<Q>& dia :
       {constant_diagram(Q{}, chain_poset(2), k, "k-const"),
        p2_dia(chain_poset(2), dual, k, unit_col(dual), "dual-to-k"),
        constant_diagram(Q{}, subdivide(parallel_pair()).prime, k, "k-crown")}) {
    ShriekAlgebra<Q> sa = shriek_algebra(dia, dia->name + "!");
    ShriekBimodule<Q> sm = shriek_bimodule(sa, regular_diag_bimodule(dia), dia->name + "!m");
    sm.mod.validate();
    Bimodule<Q> reg = regular_bimodule(sa.alg);
    CHECK(sm.mod.dim == sa.alg->dim);
    for (long b = 0; b < sa.alg->dim; ++b) {
      CHECK(sm.mod.left[static_cast<size_t>(b)] == reg.left[static_cast<size_t>(b)]);
      CHECK(sm.mod.right[static_cast<size_t>(b)] == reg.right[static_cast<size_t>(b)]);
    }
  }

  // the (0,1) block element moves the (1,1) module block into the (0,1) slot
  auto dia_k = constant_diagram(Q{}, chain_poset(2), k, "k-const");
  ShriekAlgebra<Q> sa = shriek_algebra(dia_k, "flat");
  ShriekBimodule<Q> sm = shriek_bimodule(sa, regular_diag_bimodule(dia_k), "flat-m");
  Mat<Q> expected(Q{}, 3, 3);
  expected.at(1, 2) = Q{}.one();
  CHECK(sm.mod.left[1] == expected);

  // identity and zero maps flatten to identity and zero
  DiagMap<Q> ident{{eye(1), eye(1)}};
  CHECK(shriek_map(sa, sm, sm, ident) == eye(3));
  DiagMap<Q> zero{{Mat<Q>(Q{}, 1, 1), Mat<Q>(Q{}, 1, 1)}};
  CHECK(shriek_map(sa, sm, sm, zero).is_zero());

  // a discrete base leaves four independent bimodule endomorphisms, and
  // flattening is multiplicative on composites
  auto dd = make_dia(discrete_poset(), {dual, k_times_k()},
                     [](MorId) { return Mat<Q>(Q{}, 0, 0); }, "disc");
  ShriekAlgebra<Q> fd = shriek_algebra(dd, "disc!");
  ShriekBimodule<Q> fm = shriek_bimodule(fd, regular_diag_bimodule(dd), "disc!m");
  std::vector<DiagMap<Q>> endos = hom_space_bimod(regular_diag_bimodule(dd), regular_diag_bimodule(dd));
  CHECK(endos.size() == 4);
  DiagMap<Q> composite{{endos[0].at(0) * endos[1].at(0), endos[0].at(1) * endos[1].at(1)}};
  CHECK(shriek_map(fd, fm, fm, composite) ==
        shriek_map(fd, fm, fm, endos[0]) * shriek_map(fd, fm, fm, endos[1]));

  // flattening maps is injective and fills the whole flattened hom space
  std::vector<DiagMap<Q>> flats;
  for (const auto& e : endos) flats.push_back(DiagMap<Q>{{shriek_map(fd, fm, fm, e)}});
  CHECK(stacked_rank(flats) == 4);
  auto pt = chain_poset(1);
  auto pt_dia = constant_diagram(Q{}, pt, fd.alg, "disc!pt");
  CHECK(hom_space_bimod(point_bimod(pt_dia, fm.mod), point_bimod(pt_dia, fm.mod)).size() == 4);

  // same comparison on the chain instance, where naturality cuts it to one
  auto dia_dual = p2_dia(chain_poset(2), dual, k, unit_col(dual), "dual-to-k");
  ShriekAlgebra<Q> sd = shriek_algebra(dia_dual, "dual!");
  ShriekBimodule<Q> smd = shriek_bimodule(sd, regular_diag_bimodule(dia_dual), "dual!m");
  smd.mod.validate();
  CHECK(smd.mod.dim == 5);
  CHECK(hom_space_bimod(regular_diag_bimodule(dia_dual), regular_diag_bimodule(dia_dual)).size() ==
        1);
  auto pt_dual = constant_diagram(Q{}, pt, sd.alg, "dual!pt");
  CHECK(hom_space_bimod(point_bimod(pt_dual, smd.mod), point_bimod(pt_dual, smd.mod)).size() == 1);
  CHECK(center_dim(*sd.alg) == 1);
}

TEST_CASE("pushforward along the identity functor") {
  auto k = scalar_field();
  auto dual = dual_numbers();
  auto dia = p2_dia(chain_poset(2), dual, k, unit_col(dual), "dual-to-k");
  Functor idf = identity_functor(dia->base);
  auto pulled = pullback_diagram(idf, dia, "same");

  DiagModule<Q> m = regular_module(dia);
  DiagModule<Q> n = pullback_module(idf, pulled, m, "same-reg");
  KanExtension<Q> ke = f_shriek(idf, dia, n, "id_!");
  ke.out.validate();
  CHECK(ke.out.dims == n.dims);

  DiagMap<Q> eta = kan_unit(ke, n);
  DiagModule<Q> back = pullback_module(idf, pulled, ke.out, "restricted");
  std::string why;
  CHECK(is_module_map(n, back, eta, &why));

  DiagMap<Q> eps = kan_counit(ke, m);
  CHECK(is_module_map(ke.out, m, eps, &why));
  for (ObjId i = 0; i < dia->base->num_objects(); ++i) {
    CHECK(eps.at(i).rows() == eps.at(i).cols());
    CHECK(rank(eps.at(i)) == eps.at(i).rows());
  }

  // both triangle identities, the second through the lifted unit
  for (ObjId s = 0; s < dia->base->num_objects(); ++s)
    CHECK(eps.at(idf.on_obj(s)) * eta.at(s) == eye(n.dim_at(s)));
  DiagModule<Q> n2 = pullback_module(idf, pulled, ke.out, "restricted2");
  KanExtension<Q> ke2 = f_shriek(idf, dia, n2, "id_!2");
  DiagMap<Q> lift = kan_on_map(ke, ke2, eta);
  DiagMap<Q> eps2 = kan_counit(ke2, ke.out);
  for (ObjId i = 0; i < dia->base->num_objects(); ++i)
    CHECK(eps2.at(i) * lift.at(i) == eye(ke.out.dim_at(i)));

  // a module over algebras that differ from the pullback is rejected
  auto k_dia = constant_diagram(Q{}, dia->base, k, "k2");
  DiagModule<Q> wrong = regular_module(k_dia);
  CHECK_THROWS_WITH_AS(f_shriek(idf, dia, wrong, "wrong"), doctest::Contains("pulled-back"),
                       DiagError);
}

TEST_CASE("pushforward along the subdivision collapse") {
  auto k = scalar_field();
  auto base = chain_poset(2);
  Subdivision sd = subdivide(base);
  auto dia = constant_diagram(Q{}, base, k, "k-const");
  auto prime = subdivide_diagram(sd, dia, "k'");

  DiagModule<Q> m = regular_module(dia);
  DiagModule<Q> mp = subdivide_module(sd, prime, m, "reg'");
  KanExtension<Q> ke = f_shriek(sd.to_base, dia, mp, "d_!reg'");
  ke.out.validate();
  CHECK(ke.out.dims == std::vector<long>{1, 1});

  // the counit collapses the subdivision without losing anything
  DiagMap<Q> eps = kan_counit(ke, m);
  std::string why;
  CHECK(is_module_map(ke.out, m, eps, &why));
  for (ObjId i = 0; i < base->num_objects(); ++i) CHECK(rank(eps.at(i)) == m.dim_at(i));

  DiagMap<Q> eta = kan_unit(ke, mp);
  CHECK(is_module_map(mp, pullback_module(sd.to_base, prime, ke.out, "d*d_!"), eta, &why));
  for (ObjId s = 0; s < prime->base->num_objects(); ++s)
    CHECK(eps.at(sd.to_base.on_obj(s)) * eta.at(s) == eye(mp.dim_at(s)));

  DiagModule<Q> n2 = pullback_module(sd.to_base, prime, ke.out, "d*d_!2");
  KanExtension<Q> ke2 = f_shriek(sd.to_base, dia, n2, "d_!d*d_!");
  DiagMap<Q> lift = kan_on_map(ke, ke2, eta);
  DiagMap<Q> eps2 = kan_counit(ke2, ke.out);
  for (ObjId i = 0; i < base->num_objects(); ++i)
    CHECK(eps2.at(i) * lift.at(i) == eye(ke.out.dim_at(i)));

  // a module living only on the edge simplex pushes down to the first vertex
  ObjId edge = prime->base->object_by_name("[0>1]").value();
  DiagModule<Q> nmod;
  nmod.fld = Q{};
  nmod.name = "edge-only";
  nmod.dia = prime;
  nmod.dims.assign(3, 0);
  nmod.dims[static_cast<size_t>(edge)] = 1;
  for (ObjId i = 0; i < prime->base->num_objects(); ++i)
    nmod.act.push_back({Mat<Q>(Q{}, nmod.dim_at(i), nmod.dim_at(i))});
  for (ObjId i = 0; i < prime->base->num_objects(); ++i)
    if (nmod.dim_at(i) == 1) nmod.act[static_cast<size_t>(i)][0] = eye(1);
  for (MorId v = 0; v < prime->base->num_morphisms(); ++v)
    nmod.tr.push_back(Mat<Q>(Q{}, nmod.dim_at(prime->base->dom(v)), nmod.dim_at(prime->base->cod(v))));
  for (MorId v = 0; v < prime->base->num_morphisms(); ++v)
    if (prime->base->is_identity(v) && nmod.dim_at(prime->base->dom(v)) == 1)
      nmod.tr[static_cast<size_t>(v)] = eye(1);
  nmod.validate();

  KanExtension<Q> kn = f_shriek(sd.to_base, dia, nmod, "d_!edge");
  kn.out.validate();
  CHECK(kn.out.dims == std::vector<long>{1, 0});

  // adjunction bookkeeping: both hom spaces match and transpose lands right
  std::vector<DiagMap<Q>> down = hom_space(kn.out, m);
  std::vector<DiagMap<Q>> up = hom_space(nmod, mp);
  CHECK(down.size() == 1);
  CHECK(up.size() == 1);
  DiagMap<Q> eta_n = kan_unit(kn, nmod);
  std::vector<DiagMap<Q>> transposed;
  for (const auto& th : down) {
    DiagMap<Q> tr = adjoint_transpose(kn, eta_n, th);
    CHECK(is_module_map(nmod, mp, tr, &why));
    transposed.push_back(tr);
  }
  CHECK(stacked_rank(transposed) == static_cast<long>(up.size()));

  // restriction preserves hom spaces between regular modules
  CHECK(hom_space(m, m).size() == 1);
  CHECK(hom_space(mp, mp).size() == 1);
  auto dual = dual_numbers();
  auto dia_dual = p2_dia(base, dual, k, unit_col(dual), "dual-to-k");
  auto prime_dual = subdivide_diagram(sd, dia_dual, "dual'");
  DiagModule<Q> rd = regular_module(dia_dual);
  DiagModule<Q> rdp = subdivide_module(sd, prime_dual, rd, "dual-reg'");
  CHECK(hom_space(rd, rd).size() == hom_space(rdp, rdp).size());

  // pushing forward a map commutes with the units
  KanExtension<Q> km = ke;
  DiagMap<Q> theta = up[0];
  DiagMap<Q> pushed = kan_on_map(kn, km, theta);
  CHECK(is_module_map(kn.out, km.out, pushed, &why));
  DiagMap<Q> eta_m = kan_unit(km, mp);
  for (ObjId s = 0; s < prime->base->num_objects(); ++s)
    CHECK(pushed.at(sd.to_base.on_obj(s)) * eta_n.at(s) == eta_m.at(s) * theta.at(s));

  CHECK_THROWS_WITH_AS(f_shriek(sd.to_base, dia, m, "wrong"), doctest::Contains("functor domain"),
                       DiagError);
}
