#ifndef MODEQ_RATIONAL_HPP
#define MODEQ_RATIONAL_HPP

#include <gmp.h>

#include <cstdint>
#include <iosfwd>
#include <ostream>
#include <string>
#include <utility>

#include "modeq/errors.hpp"

namespace modeq {

// Exact rational number, a value-semantic wrapper around GMP's mpq_t.
// Always kept canonical (reduced, positive denominator).
class Rat {
 public:
  Rat() { mpq_init(q_); }
  Rat(const Rat& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rat(Rat&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rat(long n) {  // NOLINT: implicit on purpose
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  Rat(int n) : Rat(static_cast<long>(n)) {}
  Rat(long num, long den) {
    mpq_init(q_);
    if (den == 0) throw ZeroDivision("rational with zero denominator");
    mpq_set_si(q_, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q_, q_, d);
    mpq_clear(d);
  }
  ~Rat() { mpq_clear(q_); }

  Rat& operator=(const Rat& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }

  // Parses "p", "-p", "p/q". Throws ParseError on malformed input.
  static Rat parse(const std::string& s) {
    Rat r;
    if (s.empty() || mpq_set_str(r.q_, s.c_str(), 10) != 0)
      throw ParseError("bad rational '" + s + "'");
    if (mpz_sgn(mpq_denref(r.q_)) == 0)
      throw ZeroDivision("rational with zero denominator: '" + s + "'");
    mpq_canonicalize(r.q_);
    return r;
  }

  std::string str() const {
    char* c = mpq_get_str(nullptr, 10, q_);
    std::string s(c);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(c, s.size() + 1);
    return s;
  }

  bool is_zero() const { return mpq_sgn(q_) == 0; }
  bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
  int sgn() const { return mpq_sgn(q_); }

  // Numerator/denominator as long; throws if they do not fit.
  long num_long() const {
    if (!mpz_fits_slong_p(mpq_numref(q_))) throw Error("numerator overflow");
    return mpz_get_si(mpq_numref(q_));
  }
  long den_long() const {
    if (!mpz_fits_slong_p(mpq_denref(q_))) throw Error("denominator overflow");
    return mpz_get_si(mpq_denref(q_));
  }
  double approx() const { return mpq_get_d(q_); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    Rat r;
    mpq_add(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    Rat r;
    mpq_sub(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    Rat r;
    mpq_mul(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw ZeroDivision("rational division by zero");
    Rat r;
    mpq_div(r.q_, a.q_, b.q_);
    return r;
  }
  Rat operator-() const {
    Rat r;
    mpq_neg(r.q_, q_);
    return r;
  }
  Rat& operator+=(const Rat& b) {
    mpq_add(q_, q_, b.q_);
    return *this;
  }
  Rat& operator-=(const Rat& b) {
    mpq_sub(q_, q_, b.q_);
    return *this;
  }
  Rat& operator*=(const Rat& b) {
    mpq_mul(q_, q_, b.q_);
    return *this;
  }
  Rat& operator/=(const Rat& b) {
    *this = *this / b;
    return *this;
  }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.q_, b.q_) != 0; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) < 0; }
  friend bool operator<=(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
  friend bool operator>(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) > 0; }
  friend bool operator>=(const Rat& a, const Rat& b) { return mpq_cmp(a.q_, b.q_) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

  // Integer power, e may be negative.
  Rat pow(long e) const {
    if (e == 0) return Rat(1);
    if (e < 0) return (Rat(1) / *this).pow(-e);
    Rat base = *this, acc(1);
    unsigned long n = static_cast<unsigned long>(e);
    while (n) {
      if (n & 1) acc *= base;
      base *= base;
      n >>= 1;
    }
    return acc;
  }

  // Exact square root when the value is a perfect square of a rational.
  bool sqrt_exact(Rat& out) const {
    if (sgn() < 0) return false;
    mpz_t sn, rn, sd, rd;
    mpz_inits(sn, rn, sd, rd, nullptr);
    mpz_sqrtrem(sn, rn, mpq_numref(q_));
    mpz_sqrtrem(sd, rd, mpq_denref(q_));
    bool ok = mpz_sgn(rn) == 0 && mpz_sgn(rd) == 0;
    if (ok) {
      mpz_set(mpq_numref(out.q_), sn);
      mpz_set(mpq_denref(out.q_), sd);
      mpq_canonicalize(out.q_);
    }
    mpz_clears(sn, rn, sd, rd, nullptr);
    return ok;
  }

  // gcd on rationals: the positive generator of aZ + bZ.
  friend Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a.is_zero()) return b.sgn() < 0 ? -b : b;
    if (b.is_zero()) return a.sgn() < 0 ? -a : a;
    Rat r;
    mpz_t x, y;
    mpz_inits(x, y, nullptr);
    mpz_mul(x, mpq_numref(a.q_), mpq_denref(b.q_));
    mpz_mul(y, mpq_numref(b.q_), mpq_denref(a.q_));
    mpz_gcd(mpq_numref(r.q_), x, y);
    mpz_mul(mpq_denref(r.q_), mpq_denref(a.q_), mpq_denref(b.q_));
    mpq_canonicalize(r.q_);
    mpz_clears(x, y, nullptr);
    return r;
  }

  // floor(num/den) as long. Exponent bookkeeping only; throws on overflow.
  long floor_long() const {
    mpz_t f;
    mpz_init(f);
    mpz_fdiv_q(f, mpq_numref(q_), mpq_denref(q_));
    if (!mpz_fits_slong_p(f)) {
      mpz_clear(f);
      throw Error("floor overflow");
    }
    long r = mpz_get_si(f);
    mpz_clear(f);
    return r;
  }

 private:
  mpq_t q_;
};

inline Rat abs(const Rat& a) { return a.sgn() < 0 ? -a : a; }

// gcd of two values interpreted as rationals: gcd(a/b, c/d) = gcd(ad, cb)/(bd).
// Used to normalize exponent grids.
inline long gcd_long(long a, long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline long lcm_long(long a, long b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_long(a, b) * b;
}

}  // namespace modeq

#endif
