#ifndef MODEQ_QSERIES_HPP
#define MODEQ_QSERIES_HPP

#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modeq/errors.hpp"
#include "modeq/rational.hpp"

namespace modeq {

// Truncated series in q^(1/N) with exact coefficients in a ring R.
// Stored exponents n mean coefficients of q^(n/N); the series is known
// modulo O(q^trunc).  Invariants: no stored zero coefficients, every
// stored n satisfies n/N < trunc, and N is minimal for the stored support.
template <class R>
class SeriesT {
 public:
  SeriesT() : grid_(1), trunc_(0) {}

  static SeriesT zero(Rat trunc) {
    SeriesT s;
    s.trunc_ = std::move(trunc);
    return s;
  }
  static SeriesT one(Rat trunc) { return monomial(Rat(0), R(Rat(1)), std::move(trunc)); }

  static SeriesT monomial(const Rat& exponent, R coeff, Rat trunc) {
    SeriesT s;
    s.grid_ = exponent.den_long();
    s.trunc_ = std::move(trunc);
    if (!coeff.is_zero() && exponent < s.trunc_) s.coeffs_[exponent.num_long()] = std::move(coeff);
    s.canonicalize();
    return s;
  }

  // Terms given as (exponent, coefficient) pairs on an explicit grid.
  static SeriesT from_terms(long grid, Rat trunc, std::vector<std::pair<long, R>> terms) {
    SeriesT s;
    s.grid_ = grid;
    s.trunc_ = std::move(trunc);
    for (auto& [n, c] : terms) {
      if (c.is_zero()) continue;
      if (Rat(n, grid) >= s.trunc_) continue;
      s.coeffs_[n] = std::move(c);
    }
    s.canonicalize();
    return s;
  }

  long grid_den() const { return grid_; }
  const Rat& trunc() const { return trunc_; }
  const std::map<long, R>& raw_coeffs() const { return coeffs_; }
  bool is_zero_series() const { return coeffs_.empty(); }

  // Least exponent with a nonzero coefficient, if any.
  std::optional<Rat> valuation() const {
    if (coeffs_.empty()) return std::nullopt;
    return Rat(coeffs_.begin()->first, grid_);
  }

  const R& leading_coeff() const {
    if (coeffs_.empty()) throw DivisionByZeroSeries("leading coefficient of zero series");
    return coeffs_.begin()->second;
  }

  // Coefficient of q^e.  Asking at or beyond the truncation is a bug in the
  // caller: the value there is not determined.
  R coeff_at(const Rat& e) const {
    if (e >= trunc_)
      throw InsufficientPrecision("coefficient at q^" + e.str() + " requested, series known mod q^" +
                                  trunc_.str());
    Rat scaled = e * Rat(grid_);
    if (!scaled.is_integer()) return R(Rat(0));
    auto it = coeffs_.find(scaled.num_long());
    return it == coeffs_.end() ? R(Rat(0)) : it->second;
  }

  SeriesT truncated(const Rat& t) const {
    SeriesT s = *this;
    if (t < s.trunc_) {
      s.trunc_ = t;
      s.drop_beyond_trunc();
      s.canonicalize();
    }
    return s;
  }

  friend SeriesT operator+(const SeriesT& a, const SeriesT& b) {
    long n = lcm_long(a.grid_, b.grid_);
    SeriesT r;
    r.grid_ = n;
    r.trunc_ = a.trunc_ < b.trunc_ ? a.trunc_ : b.trunc_;
    for (const auto& [k, c] : a.coeffs_) r.coeffs_[k * (n / a.grid_)] = c;
    for (const auto& [k, c] : b.coeffs_) {
      auto [it, fresh] = r.coeffs_.try_emplace(k * (n / b.grid_), c);
      if (!fresh) it->second = it->second + c;
    }
    r.drop_zeros();
    r.drop_beyond_trunc();
    r.canonicalize();
    return r;
  }

  friend SeriesT operator-(const SeriesT& a, const SeriesT& b) { return a + (-b); }

  SeriesT operator-() const {
    SeriesT r = *this;
    for (auto& [k, c] : r.coeffs_) c = -c;
    return r;
  }

  friend SeriesT operator*(const SeriesT& a, const SeriesT& b) {
    long n = lcm_long(a.grid_, b.grid_);
    long sa = n / a.grid_, sb = n / b.grid_;
    SeriesT r;
    r.grid_ = n;
    // Precision propagation: trunc = min(T_a + v_b, T_b + v_a), with the
    // valuation of a zero series taken as its own truncation.
    r.trunc_ = min_rat(a.trunc_ + b.val_lower(), b.trunc_ + a.val_lower());
    for (const auto& [ka, ca] : a.coeffs_) {
      for (const auto& [kb, cb] : b.coeffs_) {
        long k = ka * sa + kb * sb;
        if (Rat(k, n) >= r.trunc_) continue;
        R prod = ca * cb;
        if (prod.is_zero()) continue;
        auto it = r.coeffs_.find(k);
        if (it == r.coeffs_.end())
          r.coeffs_.emplace(k, std::move(prod));
        else
          it->second = it->second + prod;
      }
    }
    r.drop_zeros();
    r.canonicalize();
    return r;
  }

  SeriesT scaled(const R& c) const {
    SeriesT r = *this;
    if (c.is_zero()) {
      r.coeffs_.clear();
      r.canonicalize();
      return r;
    }
    for (auto& [k, v] : r.coeffs_) v = v * c;
    r.drop_zeros();
    return r;
  }

  // Multiplies by q^e.
  SeriesT shifted(const Rat& e) const {
    long n = lcm_long(grid_, e.den_long());
    long s = n / grid_;
    long off = (e * Rat(n)).num_long();
    SeriesT r;
    r.grid_ = n;
    r.trunc_ = trunc_ + e;
    for (const auto& [k, c] : coeffs_) r.coeffs_[k * s + off] = c;
    r.canonicalize();
    return r;
  }

  // Substitutes q -> q^d (d >= 1).
  SeriesT inflated(long d) const {
    SeriesT r;
    r.grid_ = grid_;
    r.trunc_ = trunc_ * Rat(d);
    for (const auto& [k, c] : coeffs_) r.coeffs_[k * d] = c;
    r.canonicalize();
    return r;
  }

  friend SeriesT operator/(const SeriesT& a, const SeriesT& b) {
    if (b.coeffs_.empty()) throw DivisionByZeroSeries("series division by zero series");
    long n = lcm_long(a.grid_, b.grid_);
    long sa = n / a.grid_, sb = n / b.grid_;
    long vb = b.coeffs_.begin()->first * sb;
    Rat vb_rat(vb, n);
    Rat tc = min_rat(a.trunc_ - vb_rat, b.trunc_ + a.val_lower() - vb_rat - vb_rat);
    SeriesT r;
    r.grid_ = n;
    r.trunc_ = tc;
    if (a.coeffs_.empty()) {
      r.canonicalize();
      return r;
    }
    const R lead = b.coeffs_.begin()->second;
    // Long division: maintain the running remainder rem = a - b * (partial c).
    std::map<long, R> rem;
    for (const auto& [k, c] : a.coeffs_) rem[k * sa] = c;
    while (!rem.empty()) {
      long ka = rem.begin()->first;
      long kc = ka - vb;
      if (Rat(kc, n) >= tc) break;
      R c = rem.begin()->second / lead;
      r.coeffs_[kc] = c;
      for (const auto& [kb, cb] : b.coeffs_) {
        long k = kb * sb + kc;
        R sub = c * cb;
        if (sub.is_zero()) continue;
        auto [it, fresh] = rem.try_emplace(k, -sub);
        if (!fresh) {
          it->second = it->second - sub;
          if (it->second.is_zero()) rem.erase(it);
        }
      }
    }
    r.drop_zeros();
    r.drop_beyond_trunc();
    r.canonicalize();
    return r;
  }

  // q d/dq: multiplies the coefficient of q^(n/N) by n/N.  Truncation kept.
  friend SeriesT dq(const SeriesT& a) {
    SeriesT r;
    r.grid_ = a.grid_;
    r.trunc_ = a.trunc_;
    for (const auto& [k, c] : a.coeffs_) {
      if (k == 0) continue;
      R v = c * R(Rat(k, a.grid_));
      if (!v.is_zero()) r.coeffs_[k] = std::move(v);
    }
    r.canonicalize();
    return r;
  }

  // Integer power by repeated squaring; e may be negative.
  friend SeriesT pow_int(const SeriesT& a, long e) {
    if (e < 0) return SeriesT::one(a.trunc_ - a.val_lower()) / pow_int(a, -e);
    SeriesT acc = SeriesT::one(a.trunc_ - a.val_lower());
    SeriesT base = a;
    long n = e;
    while (n) {
      if (n & 1) acc = acc * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return acc;
  }

  // Fractional power of a monic series (leading coefficient 1) via the
  // binomial series.  The output grid is enlarged to host e*v.
  friend SeriesT pow_frac(const SeriesT& a, const Rat& e) {
    if (a.coeffs_.empty()) throw NonMonicBase("fractional power of zero series");
    if (!a.leading_coeff().is_one()) throw NonMonicBase("fractional power requires leading coefficient 1");
    Rat v = *a.valuation();
    Rat rel = a.trunc_ - v;          // relative precision of the base
    Rat w = e * v;                   // leading exponent of the result
    SeriesT u = a.shifted(-v) - SeriesT::one(rel);  // u = a/q^v - 1, O(q^delta)
    SeriesT acc = SeriesT::one(rel);
    if (!u.coeffs_.empty()) {
      Rat delta = *u.valuation();
      SeriesT upow = SeriesT::one(rel);
      Rat binom(1);
      for (long k = 1; Rat(k) * delta < rel; ++k) {
        upow = upow * u;
        binom = binom * (e - Rat(k - 1)) / Rat(k);
        if (binom.is_zero()) break;  // integer exponent exhausted
        acc = acc + upow.scaled(R(binom));
        if (upow.coeffs_.empty()) break;
      }
    }
    return acc.shifted(w);
  }

  friend bool operator==(const SeriesT& a, const SeriesT& b) {
    return a.grid_ == b.grid_ && a.trunc_ == b.trunc_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const SeriesT& a, const SeriesT& b) { return !(a == b); }

  // Equality of all coefficients below the common truncation.
  friend bool agree_to_common_trunc(const SeriesT& a, const SeriesT& b) {
    SeriesT d = a - b;
    return d.coeffs_.empty();
  }

  std::string str() const {
    if (coeffs_.empty()) return "O(q^" + trunc_.str() + ")";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : coeffs_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")q^(" << Rat(k, grid_).str() << ")";
    }
    os << " + O(q^" << trunc_.str() << ")";
    return os.str();
  }

 private:
  static Rat min_rat(const Rat& a, const Rat& b) { return a < b ? a : b; }

  // Valuation used for precision propagation: a zero series known mod q^T
  // has valuation at least T.
  Rat val_lower() const {
    if (coeffs_.empty()) return trunc_;
    return Rat(coeffs_.begin()->first, grid_);
  }

  void drop_zeros() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (it->second.is_zero())
        it = coeffs_.erase(it);
      else
        ++it;
    }
  }

  void drop_beyond_trunc() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (Rat(it->first, grid_) >= trunc_)
        it = coeffs_.erase(it);
      else
        ++it;
    }
  }

  // Normalizes to the minimal grid denominator for the stored support.
  void canonicalize() {
    if (coeffs_.empty()) {
      grid_ = 1;
      return;
    }
    long g = grid_;
    for (const auto& [k, c] : coeffs_) {
      g = gcd_long(g, k);
      if (g == 1) break;
    }
    if (g <= 1) return;
    std::map<long, R> nc;
    for (auto& [k, c] : coeffs_) nc[k / g] = std::move(c);
    coeffs_ = std::move(nc);
    grid_ /= g;
  }

  long grid_;
  Rat trunc_;
  std::map<long, R> coeffs_;
};

using QSeries = SeriesT<Rat>;

}  // namespace modeq

#endif
