#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctlab/field.hpp>
#include <cctlab/homalg.hpp>

#include <random>
#include <vector>

using namespace cctlab;
using Q = RationalField;

namespace {

Mat<Q> from_ints(const Q& k, long r, long c, std::initializer_list<long> xs) {
  Mat<Q> m(k, r, c);
  auto it = xs.begin();
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) m.at(i, j) = k.from_long(*it++);
  return m;
}

// P invertible with entries in a small range, together with its inverse
std::pair<Mat<Q>, Mat<Q>> random_unimodular(const Q& k, long n, std::mt19937_64& rng) {
  Mat<Q> p = Mat<Q>::identity(k, n), pinv = Mat<Q>::identity(k, n);
  for (long step = 0; step < 2 * n; ++step) {
    long i = static_cast<long>(rng() % static_cast<unsigned long>(std::max(1l, n)));
    long j = static_cast<long>(rng() % static_cast<unsigned long>(std::max(1l, n)));
    if (i == j) continue;
    long c = static_cast<long>(rng() % 5) - 2;
    Mat<Q> e = Mat<Q>::identity(k, n), einv = Mat<Q>::identity(k, n);
    e.at(i, j) = k.from_long(c);
    einv.at(i, j) = k.from_long(-c);
    p = e * p;
    pinv = pinv * einv;
  }
  return {p, pinv};
}

// complex with prescribed homology dims, disguised by a random basis change
Complex<Q> complex_with_homology(const Q& k, const std::vector<long>& hom,
                                 const std::vector<long>& extra, std::mt19937_64& rng) {
  // degree n holds: tops of length-two pieces ending here (e_n), bottoms of
  // pieces from above (e_{n+1}), and hom[n] spectators
  long top = static_cast<long>(hom.size()) - 1;
  std::vector<long> e(static_cast<size_t>(top) + 2, 0);
  for (long n = 1; n <= top; ++n) e[static_cast<size_t>(n)] = extra[static_cast<size_t>(n)];
  std::vector<long> dims;
  for (long n = 0; n <= top; ++n)
    dims.push_back(e[static_cast<size_t>(n)] + e[static_cast<size_t>(n + 1)] + hom[static_cast<size_t>(n)]);
  std::vector<Mat<Q>> diffs;
  for (long n = 1; n <= top; ++n) {
    Mat<Q> d(k, dims[static_cast<size_t>(n - 1)], dims[static_cast<size_t>(n)]);
    for (long t = 0; t < e[static_cast<size_t>(n)]; ++t)
      d.at(e[static_cast<size_t>(n - 1)] + t, t) = k.one();
    diffs.push_back(d);
  }
  std::vector<Mat<Q>> p, pinv;
  for (long n = 0; n <= top; ++n) {
    auto [a, b] = random_unimodular(k, dims[static_cast<size_t>(n)], rng);
    p.push_back(a);
    pinv.push_back(b);
  }
  for (long n = 1; n <= top; ++n)
    diffs[static_cast<size_t>(n - 1)] =
        p[static_cast<size_t>(n - 1)] * diffs[static_cast<size_t>(n - 1)] * pinv[static_cast<size_t>(n)];
  return Complex<Q>(k, std::move(dims), std::move(diffs));
}

Homotopy<Q> random_homotopy(const Complex<Q>& x, std::mt19937_64& rng) {
  Homotopy<Q> s;
  s.push_back(Mat<Q>(x.field(), x.dim(0), 0));
  for (long n = 1; n <= x.top(); ++n) {
    Mat<Q> m(x.field(), x.dim(n), x.dim(n - 1));
    for (long i = 0; i < m.rows(); ++i)
      for (long j = 0; j < m.cols(); ++j)
        m.at(i, j) = x.field().from_long(static_cast<long>(rng() % 5) - 2);
    s.push_back(m);
  }
  return s;
}

// id + d s + s d: a chain map homotopic to the identity
ChainMap<Q> perturbed_identity(const Complex<Q>& x, const Homotopy<Q>& s) {
  ChainMap<Q> f{x, x, {}};
  auto s_at = [&](long n) {
    if (n >= 1 && n < static_cast<long>(s.size())) return s[static_cast<size_t>(n)];
    return Mat<Q>(x.field(), x.dim(n), x.dim(n - 1));
  };
  for (long n = 0; n <= x.top(); ++n)
    f.maps.push_back(Mat<Q>::identity(x.field(), x.dim(n)) + x.diff(n + 1) * s_at(n + 1) +
                     s_at(n) * x.diff(n));
  return f;
}

Mat<Q> direct_sum(const Mat<Q>& a, const Mat<Q>& b) {
  const Q& k = a.field();
  return Mat<Q>::block2x2(a, Mat<Q>(k, a.rows(), b.cols()), Mat<Q>(k, b.rows(), a.cols()), b);
}

// rows 0 <- M_i (+) V_i <- V_i (+) W_i <- W_i <- 0 with the evident maps;
// every square commutes because the vertical maps are diagonal
DoubleComplex<Q> staircase_grid(const Q& k, const Complex<Q>& m, const Complex<Q>& v,
                                const Complex<Q>& w, bool keep_last) {
  long N = m.top();
  DoubleComplex<Q> dc{k, m, keep_last, {}, {}, {}, {}, {}};
  long W = keep_last ? 3 : 2;
  dc.dims.resize(static_cast<size_t>(W));
  dc.horiz.resize(static_cast<size_t>(W));
  dc.vert.resize(static_cast<size_t>(W));
  dc.t.resize(static_cast<size_t>(W));
  for (long i = 0; i <= N; ++i) {
    dc.dims[0].push_back(m.dim(i) + v.dim(i));
    dc.dims[1].push_back(v.dim(i) + w.dim(i));
    if (W > 2) dc.dims[2].push_back(w.dim(i));
    // aug (m, v) -> m ; t0 m -> (m, 0)
    Mat<Q> aug = Mat<Q>::hcat(Mat<Q>::identity(k, m.dim(i)), Mat<Q>(k, m.dim(i), v.dim(i)));
    dc.aug.push_back(aug);
    Mat<Q> t0 = Mat<Q>::vcat(Mat<Q>::identity(k, m.dim(i)), Mat<Q>(k, v.dim(i), m.dim(i)));
    dc.t[0].push_back(t0);
  }
  for (long i = 0; i <= N; ++i) {
    // horiz_1 (v, w) -> (0, v); t1 (m, v) -> (v, 0)
    Mat<Q> h1 = Mat<Q>::block2x2(Mat<Q>(k, m.dim(i), v.dim(i)), Mat<Q>(k, m.dim(i), w.dim(i)),
                                 Mat<Q>::identity(k, v.dim(i)), Mat<Q>(k, v.dim(i), w.dim(i)));
    dc.horiz[1].push_back(h1);
    Mat<Q> t1 = Mat<Q>::block2x2(Mat<Q>(k, v.dim(i), m.dim(i)), Mat<Q>::identity(k, v.dim(i)),
                                 Mat<Q>(k, w.dim(i), m.dim(i)), Mat<Q>(k, w.dim(i), v.dim(i)));
    dc.t[1].push_back(t1);
    if (W > 2) {
      // horiz_2 w -> (0, w); t2 (v, w) -> w
      Mat<Q> h2 = Mat<Q>::vcat(Mat<Q>(k, v.dim(i), w.dim(i)), Mat<Q>::identity(k, w.dim(i)));
      dc.horiz[2].push_back(h2);
      Mat<Q> t2 = Mat<Q>::hcat(Mat<Q>(k, w.dim(i), v.dim(i)), Mat<Q>::identity(k, w.dim(i)));
      dc.t[2].push_back(t2);
    }
  }
  for (long i = 0; i <= N; ++i) {
    dc.vert[0].push_back(i == 0 ? Mat<Q>(k, 0, 0) : direct_sum(m.diff(i), v.diff(i)));
    dc.vert[1].push_back(i == 0 ? Mat<Q>(k, 0, 0) : direct_sum(v.diff(i), w.diff(i)));
    if (W > 2) dc.vert[2].push_back(i == 0 ? Mat<Q>(k, 0, 0) : w.diff(i));
  }
  return dc;
}

void check_total_identity(const DoubleComplex<Q>& dc, const Complex<Q>& tot, long upto) {
  auto aug = total_augmentation(dc, tot);
  auto sec = total_section(dc, tot);
  auto h = total_homotopy(dc, tot);
  aug.validate();
  sec.validate();
  auto h_at = [&](long n) {
    if (n >= 1 && n < static_cast<long>(h.size())) return h[static_cast<size_t>(n)];
    return Mat<Q>(dc.fld, tot.dim(n), tot.dim(n - 1));
  };
  for (long n = 0; n <= upto; ++n) {
    Mat<Q> lhs = tot.diff(n + 1) * h_at(n + 1) + h_at(n) * tot.diff(n);
    Mat<Q> rhs = Mat<Q>::identity(dc.fld, tot.dim(n)) - sec.at(n) * aug.at(n);
    CHECK(lhs == rhs);
  }
}

}  // namespace

TEST_CASE("homology of a pinned three-term complex") {
  Q k;
  // Q <- Q^2 <- Q with d1 = [1 0], d2 = [0; 1]
  Complex<Q> x(k, {1, 2, 1},
               {from_ints(k, 1, 2, {1, 0}), from_ints(k, 2, 1, {0, 1})});
  x.validate();
  CHECK(homology_dims(x) == std::vector<long>{0, 0, 0});
  CHECK(is_exact(x));
  auto r = contract_exact(x);
  REQUIRE(r.ok);
  CHECK(!contraction_defect(x, r.s).has_value());

  Complex<Q> y(k, {1, 2, 1}, {from_ints(k, 1, 2, {1, 0}), Mat<Q>(k, 2, 1)});
  y.validate();
  CHECK(homology_dims(y) == std::vector<long>{0, 1, 1});
  auto ry = contract_exact(y);
  CHECK_FALSE(ry.ok);
  CHECK(ry.fail_degree == 1);
}

TEST_CASE("shape and d*d validation reject bad complexes") {
  Q k;
  CHECK_THROWS_AS(Complex<Q>(k, {1, 1}, {}), HomAlgError);
  Complex<Q> bad(k, {1, 1, 1}, {from_ints(k, 1, 1, {1}), from_ints(k, 1, 1, {1})});
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("d o d"), HomAlgError);
}

TEST_CASE("prescribed homology survives a random change of basis") {
  Q k;
  std::mt19937_64 rng(411u);
  for (int trial = 0; trial < 20; ++trial) {
    long top = 2 + static_cast<long>(rng() % 3);
    std::vector<long> hom, extra;
    bool exact = trial % 2 == 0;
    for (long n = 0; n <= top; ++n) {
      hom.push_back(exact ? 0 : static_cast<long>(rng() % 2));
      extra.push_back(1 + static_cast<long>(rng() % 3));
    }
    Complex<Q> x = complex_with_homology(k, hom, extra, rng);
    x.validate();
    CHECK(homology_dims(x) == hom);
    auto r = contract_exact(x);
    long first_nonzero = -1;
    for (long n = 0; n <= top; ++n)
      if (hom[static_cast<size_t>(n)] != 0) {
        first_nonzero = n;
        break;
      }
    if (first_nonzero < 0) {
      REQUIRE(r.ok);
      CHECK(!contraction_defect(x, r.s).has_value());
    } else {
      CHECK_FALSE(r.ok);
      CHECK(r.fail_degree == first_nonzero);
    }
  }
}

TEST_CASE("cone of the identity contracts by the closed form") {
  Q k;
  std::mt19937_64 rng(77u);
  Complex<Q> x = complex_with_homology(k, {1, 0, 1}, {0, 2, 1}, rng);
  auto f = identity_chain_map(x);
  f.validate();
  Complex<Q> cf = cone(f);
  cf.validate();
  CHECK(is_relative_qiso(f));
  // s = [[0, id], [0, 0]] in the M_{n-1} (+) N_n block layout
  Homotopy<Q> s;
  s.push_back(Mat<Q>(k, 0, 0));
  for (long n = 1; n <= cf.top(); ++n) {
    Mat<Q> m(k, cf.dim(n), cf.dim(n - 1));
    for (long i = 0; i < x.dim(n - 1); ++i) m.at(i, x.dim(n - 2) + i) = k.one();
    s.push_back(m);
  }
  CHECK(!contraction_defect(cf, s).has_value());
}

TEST_CASE("flipping the cone sign breaks d*d = 0") {
  Q k;
  std::mt19937_64 rng(78u);
  Complex<Q> x = complex_with_homology(k, {0, 0, 0}, {1, 2, 2}, rng);
  auto f = identity_chain_map(x);
  Complex<Q> good = cone(f);
  good.validate();
  std::vector<long> dims;
  std::vector<Mat<Q>> diffs;
  for (long n = 0; n <= good.top(); ++n) dims.push_back(good.dim(n));
  for (long n = 1; n <= good.top(); ++n) {
    // un-negate the M block
    Mat<Q> d = good.diff(n);
    for (long i = 0; i < x.dim(n - 2); ++i)
      for (long j = 0; j < x.dim(n - 1); ++j) d.at(i, j) = k.neg(d.at(i, j));
    diffs.push_back(d);
  }
  Complex<Q> flipped(k, std::move(dims), std::move(diffs));
  CHECK_THROWS_WITH_AS(flipped.validate(), doctest::Contains("d o d"), HomAlgError);
}

TEST_CASE("maps homotopic to the identity are relative quasi-isomorphisms") {
  Q k;
  std::mt19937_64 rng(5150u);
  for (int trial = 0; trial < 10; ++trial) {
    Complex<Q> x = complex_with_homology(
        k, {static_cast<long>(rng() % 2), 0, static_cast<long>(rng() % 2), 0},
        {0, 1 + static_cast<long>(rng() % 2), 1, 1 + static_cast<long>(rng() % 2)}, rng);
    auto hs = random_homotopy(x, rng);
    ChainMap<Q> f = perturbed_identity(x, hs);
    f.validate();
    Complex<Q> cf = cone(f);
    cf.validate();
    auto r = contract_exact(cf);
    REQUIRE(r.ok);

    auto e = extract_equivalence(f, cf, r.s);
    e.g.validate();
    auto sm_at = [&](long n) {
      if (n >= 1 && n < static_cast<long>(e.sM.size())) return e.sM[static_cast<size_t>(n)];
      return Mat<Q>(k, x.dim(n), x.dim(n - 1));
    };
    auto sn_at = [&](long n) {
      if (n >= 1 && n < static_cast<long>(e.sN.size())) return e.sN[static_cast<size_t>(n)];
      return Mat<Q>(k, x.dim(n), x.dim(n - 1));
    };
    for (long n = 0; n <= x.top(); ++n) {
      Mat<Q> gf = e.g.at(n) * f.at(n) - Mat<Q>::identity(k, x.dim(n));
      CHECK(gf == x.diff(n + 1) * sm_at(n + 1) + sm_at(n) * x.diff(n));
      Mat<Q> fg = f.at(n) * e.g.at(n) - Mat<Q>::identity(k, x.dim(n));
      CHECK(fg == x.diff(n + 1) * sn_at(n + 1) + sn_at(n) * x.diff(n));
    }

    // and back again: the extracted data rebuilds a cone contraction
    auto s2 = build_cone_contraction(f, e);
    CHECK(!contraction_defect(cf, s2).has_value());
  }
}

TEST_CASE("staircase double complex: totalization matches the base") {
  Q k;
  std::mt19937_64 rng(90210u);
  for (int trial = 0; trial < 6; ++trial) {
    Complex<Q> m = complex_with_homology(
        k, {static_cast<long>(rng() % 2), static_cast<long>(rng() % 2), 0}, {0, 2, 1}, rng);
    Complex<Q> v = complex_with_homology(k, {0, 1, 0}, {0, 1, 2}, rng);
    Complex<Q> w = complex_with_homology(k, {1, 0, 0}, {0, 2, 1}, rng);
    DoubleComplex<Q> dc = staircase_grid(k, m, v, w, true);
    dc.validate();
    Complex<Q> tot = total_complex(dc);
    tot.validate();
    CHECK(total_valid_top(dc) == tot.top());
    check_total_identity(dc, tot, tot.top());

    auto aug = total_augmentation(dc, tot);
    CHECK(is_relative_qiso(aug));
    auto hm = homology_dims(m);
    auto ht = homology_dims(tot);
    ht.resize(hm.size());  // top degrees of Tot beyond the base are zero here
    CHECK(ht == hm);

    Complex<Q> caug = cone(aug);
    auto r = contract_exact(caug);
    REQUIRE(r.ok);
    auto e = extract_equivalence(aug, caug, r.s);
    e.g.validate();
  }
}

TEST_CASE("truncated grid: identity valid below the width only") {
  Q k;
  std::mt19937_64 rng(31337u);
  Complex<Q> m = complex_with_homology(k, {1, 0, 0}, {0, 2, 1}, rng);
  Complex<Q> v = complex_with_homology(k, {0, 1, 0}, {0, 1, 1}, rng);
  Complex<Q> w = complex_with_homology(k, {0, 0, 1}, {0, 1, 1}, rng);
  DoubleComplex<Q> dc = staircase_grid(k, m, v, w, false);
  CHECK_FALSE(dc.rows_complete);
  dc.validate();
  Complex<Q> tot = total_complex(dc);
  tot.validate();
  CHECK(total_valid_top(dc) == 0);
  check_total_identity(dc, tot, 0);
}

TEST_CASE("perturbed grids fail validation") {
  Q k;
  std::mt19937_64 rng(64u);
  Complex<Q> m = complex_with_homology(k, {0, 0}, {0, 2}, rng);
  Complex<Q> v = complex_with_homology(k, {0, 1}, {0, 1}, rng);
  Complex<Q> w = complex_with_homology(k, {1, 0}, {0, 1}, rng);

  DoubleComplex<Q> a = staircase_grid(k, m, v, w, true);
  a.validate();
  REQUIRE(a.t[1][1].rows() > 0);
  a.t[1][1].at(0, 0) = k.add(a.t[1][1].at(0, 0), k.one());
  CHECK_THROWS_AS(a.validate(), HomAlgError);

  DoubleComplex<Q> b = staircase_grid(k, m, v, w, true);
  REQUIRE(b.aug[0].cols() > 0);
  b.aug[0].at(0, 0) = k.add(b.aug[0].at(0, 0), k.one());
  CHECK_THROWS_AS(b.validate(), HomAlgError);
}
