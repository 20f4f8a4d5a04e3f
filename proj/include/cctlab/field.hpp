#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace cctlab {

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact arithmetic backends. Linear algebra and everything above it is
// templated on a field type F providing F::Elem plus the operations below.
// Field objects are passed by value so a prime modulus can be runtime data.

struct RationalField {
  using Elem = mpq_class;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_long(long n) const { return Elem(n); }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const {
    if (a == 0) throw FieldError("division by zero");
    return Elem(1) / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

  bool is_zero(const Elem& a) const { return a == 0; }
  bool is_one(const Elem& a) const { return a == 1; }
  // true for +-1: such pivots keep integer matrices integer during elimination
  bool is_unit_pivot(const Elem& a) const { return a == 1 || a == -1; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }

  std::string str(const Elem& a) const { return a.get_str(); }
  Elem parse(const std::string& s) const {
    Elem e;
    if (e.set_str(s, 10) != 0) throw FieldError("bad scalar: " + s);
    e.canonicalize();
    return e;
  }

  std::string name() const { return "Q"; }
  std::uint64_t characteristic() const { return 0; }
};

// F_p for a prime p < 2^31 (products of reduced elements fit in 64 bits).
struct PrimeField {
  std::uint64_t p = 0;
  using Elem = std::uint64_t;

  PrimeField() = default;
  explicit PrimeField(std::uint64_t prime) : p(prime) {
    if (p < 2 || p >= (1ull << 31)) throw FieldError("modulus out of range (need 2 <= p < 2^31)");
    for (std::uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw FieldError("modulus " + std::to_string(p) + " is not prime");
  }

  Elem zero() const { return 0; }
  Elem one() const { return 1 % p; }
  Elem from_long(long n) const {
    long long r = n % static_cast<long long>(p);
    if (r < 0) r += static_cast<long long>(p);
    return static_cast<Elem>(r);
  }

  Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= p ? s - p : s; }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  Elem inv(Elem a) const {
    if (a == 0) throw FieldError("division by zero");
    // extended Euclid
    std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a);
    while (nr != 0) {
      std::int64_t q = r / nr;
      std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
      tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<Elem>(t);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  bool is_zero(Elem a) const { return a == 0; }
  bool is_one(Elem a) const { return a == one(); }
  bool is_unit_pivot(Elem a) const { return a == 1 || a == p - 1; }
  bool eq(Elem a, Elem b) const { return a == b; }

  std::string str(Elem a) const { return std::to_string(a); }
  Elem parse(const std::string& s) const {
    // accept integers and fractions, reduced into F_p
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw FieldError("bad scalar: " + s);
    q.canonicalize();
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class dm = den % pz;
    if (dm == 0) throw FieldError("denominator of " + s + " vanishes mod " + std::to_string(p));
    mpz_class nm = num % pz;
    if (nm < 0) nm += pz;
    Elem n = static_cast<Elem>(nm.get_ui());
    Elem d = static_cast<Elem>(mpz_class(dm < 0 ? dm + pz : dm).get_ui());
    return div(n, d);
  }

  std::string name() const { return "F_" + std::to_string(p); }
  std::uint64_t characteristic() const { return p; }
};

}  // namespace cctlab
