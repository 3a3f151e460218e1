#ifndef MODEQ_PARAMS_HPP
#define MODEQ_PARAMS_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modeq/errors.hpp"
#include "modeq/rational.hpp"

namespace modeq {

// Ordered list of free parameter symbols shared by a family of polynomials.
using ParamNames = std::shared_ptr<const std::vector<std::string>>;

inline ParamNames make_params(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

inline bool same_params(const ParamNames& a, const ParamNames& b) {
  if (a == b) return true;
  if (!a || !b) return !a && !b;
  return *a == *b;
}

// Multivariate polynomial in the declared parameters with exact rational
// coefficients.  The exponent vector length always equals the number of
// declared parameters; a constant polynomial may have an empty universe.
class ParamPoly {
 public:
  ParamPoly() = default;
  explicit ParamPoly(const Rat& c) { set_term({}, c); }

  static ParamPoly constant(ParamNames names, const Rat& c) {
    ParamPoly p;
    p.names_ = std::move(names);
    p.set_term(std::vector<int>(p.nvars(), 0), c);
    return p;
  }

  static ParamPoly var(ParamNames names, int i) {
    ParamPoly p;
    p.names_ = std::move(names);
    std::vector<int> e(p.nvars(), 0);
    e.at(i) = 1;
    p.set_term(e, Rat(1));
    return p;
  }

  const ParamNames& names() const { return names_; }
  int nvars() const { return names_ ? static_cast<int>(names_->size()) : 0; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && all_zero(terms_.begin()->first);
  }
  Rat constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant()) throw Error("ParamPoly not constant");
    return terms_.begin()->second;
  }
  const std::map<std::vector<int>, Rat>& terms() const { return terms_; }

  friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly r = promote(a, b);
    ParamPoly bb = promote(b, a);
    for (const auto& [e, c] : bb.terms_) {
      auto it = r.terms_.find(e);
      if (it == r.terms_.end())
        r.terms_.emplace(e, c);
      else {
        it->second += c;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
    return r;
  }
  friend ParamPoly operator-(const ParamPoly& a, const ParamPoly& b) { return a + (-b); }
  ParamPoly operator-() const {
    ParamPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly aa = promote(a, b);
    ParamPoly bb = promote(b, a);
    ParamPoly r;
    r.names_ = aa.nvars() >= bb.nvars() ? aa.names_ : bb.names_;
    for (const auto& [ea, ca] : aa.terms_) {
      for (const auto& [eb, cb] : bb.terms_) {
        std::vector<int> e(std::max(ea.size(), eb.size()), 0);
        for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
        for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        Rat c = ca * cb;
        auto it = r.terms_.find(e);
        if (it == r.terms_.end())
          r.terms_.emplace(std::move(e), c);
        else {
          it->second += c;
          if (it->second.is_zero()) r.terms_.erase(it);
        }
      }
    }
    return r;
  }
  ParamPoly scaled(const Rat& c) const {
    ParamPoly r;
    r.names_ = names_;
    if (c.is_zero()) return r;
    r.terms_ = terms_;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
  }

  friend bool operator==(const ParamPoly& a, const ParamPoly& b) {
    return (a - b).is_zero();
  }
  friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

  int degree_in(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms_)
      if (var < static_cast<int>(e.size())) d = std::max(d, e[var]);
    return d;
  }

  // Coefficient of var^k, a polynomial in the remaining parameters.
  ParamPoly coeff_in(int var, int k) const {
    ParamPoly r;
    r.names_ = names_;
    for (const auto& [e, c] : terms_) {
      int d = var < static_cast<int>(e.size()) ? e[var] : 0;
      if (d != k) continue;
      std::vector<int> e2 = e;
      if (var < static_cast<int>(e2.size())) e2[var] = 0;
      r.terms_[e2] = c;
    }
    return r;
  }

  ParamPoly substituted(int var, const Rat& value) const {
    ParamPoly r;
    r.names_ = names_;
    for (const auto& [e, c] : terms_) {
      int d = var < static_cast<int>(e.size()) ? e[var] : 0;
      std::vector<int> e2 = e;
      if (var < static_cast<int>(e2.size())) e2[var] = 0;
      Rat c2 = c * value.pow(d);
      auto it = r.terms_.find(e2);
      if (it == r.terms_.end()) {
        if (!c2.is_zero()) r.terms_.emplace(std::move(e2), c2);
      } else {
        it->second += c2;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
    return r;
  }

  // Content: gcd of the coefficients, signed so that the grevlex-leading
  // coefficient of poly/content is positive.
  Rat content() const {
    if (terms_.empty()) return Rat(1);
    Rat g(0);
    for (const auto& [e, c] : terms_) g = rat_gcd(g, c);
    if (leading_coeff_grevlex().sgn() < 0) g = -g;
    return g;
  }

  Rat leading_coeff_grevlex() const {
    if (terms_.empty()) return Rat(0);
    const std::vector<int>* best = nullptr;
    const Rat* bc = nullptr;
    for (const auto& [e, c] : terms_) {
      if (!best || grevlex_less(*best, e)) {
        best = &e;
        bc = &c;
      }
    }
    return *bc;
  }

  // Index of the only variable appearing, -1 for constants, nullopt when two
  // or more variables occur.
  std::optional<int> sole_variable() const {
    int found = -1;
    for (const auto& [e, c] : terms_) {
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (found == -1)
          found = static_cast<int>(i);
        else if (found != static_cast<int>(i))
          return std::nullopt;
      }
    }
    return found;
  }

  // Dense coefficients in the given variable, constant term first.  Only
  // valid when the polynomial is univariate in it (or constant).
  std::vector<Rat> univariate_coeffs(int var) const {
    std::vector<Rat> out(static_cast<size_t>(degree_in(var)) + 1, Rat(0));
    for (const auto& [e, c] : terms_) {
      int d = var >= 0 && var < static_cast<int>(e.size()) ? e[var] : 0;
      out[static_cast<size_t>(d)] = c;
    }
    return out;
  }

  static ParamPoly from_univariate(const ParamNames& names, int var, const std::vector<Rat>& cs) {
    ParamPoly p;
    p.names_ = names;
    for (size_t d = 0; d < cs.size(); ++d) {
      if (cs[d].is_zero()) continue;
      std::vector<int> e(p.nvars(), 0);
      if (var >= 0) e.at(static_cast<size_t>(var)) = static_cast<int>(d);
      p.terms_[std::move(e)] = cs[d];
    }
    return p;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<std::vector<int>, Rat>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& x, const auto& y) { return grevlex_less(y.first, x.first); });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : sorted) {
      Rat a = abs(c);
      if (first) {
        if (c.sgn() < 0) os << "-";
        first = false;
      } else {
        os << (c.sgn() < 0 ? " - " : " + ");
      }
      bool unit = a.is_one() && !all_zero(e);
      if (!unit) os << a.str();
      bool printed = !unit;
      for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (printed) os << "*";
        os << (*names_)[i];
        if (e[i] != 1) os << "^" << e[i];
        printed = true;
      }
      if (!printed) os << a.str();
    }
    return os.str();
  }

 private:
  static bool all_zero(const std::vector<int>& e) {
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
  }
  // true if a < b in graded reverse lexicographic order
  static bool grevlex_less(const std::vector<int>& a, const std::vector<int>& b) {
    long da = 0, db = 0;
    for (int x : a) da += x;
    for (int x : b) db += x;
    if (da != db) return da < db;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = n; i-- > 0;) {
      int xa = i < a.size() ? a[i] : 0;
      int xb = i < b.size() ? b[i] : 0;
      if (xa != xb) return xa > xb;  // smaller power of the last differing var wins
    }
    return false;
  }

  // Lifts a to the parameter universe of b when a's is a prefix (or empty).
  static ParamPoly promote(const ParamPoly& a, const ParamPoly& b) {
    if (a.nvars() >= b.nvars()) {
      check_compatible(a, b);
      return a;
    }
    check_compatible(b, a);
    ParamPoly r;
    r.names_ = b.names_;
    for (const auto& [e, c] : a.terms_) {
      std::vector<int> e2 = e;
      e2.resize(r.nvars(), 0);
      r.terms_[e2] = c;
    }
    return r;
  }

  static void check_compatible(const ParamPoly& big, const ParamPoly& small) {
    if (!small.names_ || small.nvars() == 0) return;
    if (!big.names_) throw ParamMismatch("parameter universes differ");
    for (int i = 0; i < small.nvars(); ++i)
      if ((*small.names_)[i] != (*big.names_)[i])
        throw ParamMismatch("parameter universes differ: " + (*small.names_)[i] + " vs " +
                            (*big.names_)[i]);
  }

  void set_term(std::vector<int> e, const Rat& c) {
    if (c.is_zero()) return;
    e.resize(nvars(), 0);
    terms_[std::move(e)] = c;
  }

  ParamNames names_;
  std::map<std::vector<int>, Rat> terms_;
};

// Fraction of two ParamPoly, kept with a primitive denominator (content 1,
// positive grevlex-leading coefficient).  Full multivariate gcd is not
// attempted; equality tests cross-multiply.
class ParamField {
 public:
  ParamField() : num_(), den_(Rat(1)) {}
  ParamField(const Rat& c) : num_(c), den_(Rat(1)) {}  // NOLINT: implicit
  explicit ParamField(ParamPoly num) : num_(std::move(num)), den_(Rat(1)) {}
  ParamField(ParamPoly num, ParamPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ZeroDivision("ParamField with zero denominator");
    normalize();
  }

  static ParamField var(const ParamNames& names, int i) {
    return ParamField(ParamPoly::var(names, i));
  }

  const ParamPoly& num() const { return num_; }
  const ParamPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
  Rat to_rat() const {
    if (!is_rational()) throw Error("ParamField not rational: " + str());
    return num_.constant_value() / den_.constant_value();
  }

  friend ParamField operator+(const ParamField& a, const ParamField& b) {
    return ParamField(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend ParamField operator-(const ParamField& a, const ParamField& b) {
    return ParamField(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  ParamField operator-() const {
    ParamField r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend ParamField operator*(const ParamField& a, const ParamField& b) {
    return ParamField(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend ParamField operator/(const ParamField& a, const ParamField& b) {
    if (b.is_zero()) throw ZeroDivision("ParamField division by zero");
    return ParamField(a.num_ * b.den_, a.den_ * b.num_);
  }
  ParamField& operator+=(const ParamField& b) { return *this = *this + b; }
  ParamField& operator-=(const ParamField& b) { return *this = *this - b; }
  ParamField& operator*=(const ParamField& b) { return *this = *this * b; }
  ParamField& operator/=(const ParamField& b) { return *this = *this / b; }

  ParamField inverse() const {
    if (is_zero()) throw ZeroDivision("inverse of zero ParamField");
    return ParamField(den_, num_);
  }

  friend bool operator==(const ParamField& a, const ParamField& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }
  friend bool operator!=(const ParamField& a, const ParamField& b) { return !(a == b); }

  ParamField substituted(int var, const Rat& value) const {
    ParamPoly d = den_.substituted(var, value);
    if (d.is_zero()) throw ZeroDivision("substitution makes denominator vanish");
    return ParamField(num_.substituted(var, value), d);
  }

  std::string str() const {
    if (den_.is_constant() && den_.constant_value().is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

 private:
  // Univariate polynomial division helpers over the rationals.
  static std::vector<Rat> upoly_trim(std::vector<Rat> p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
  }
  static std::vector<Rat> upoly_rem(std::vector<Rat> a, const std::vector<Rat>& b) {
    while (a.size() >= b.size() && !a.empty()) {
      Rat f = a.back() / b.back();
      size_t off = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
      a = upoly_trim(std::move(a));
    }
    return a;
  }
  static std::vector<Rat> upoly_div_exact(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> rem = a, q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rat(0));
    while (rem.size() >= b.size() && !rem.empty()) {
      Rat f = rem.back() / b.back();
      size_t off = rem.size() - b.size();
      q[off] = f;
      for (size_t i = 0; i < b.size(); ++i) rem[off + i] -= f * b[i];
      rem = upoly_trim(std::move(rem));
    }
    return q;
  }
  static std::vector<Rat> upoly_gcd(std::vector<Rat> a, std::vector<Rat> b) {
    a = upoly_trim(std::move(a));
    b = upoly_trim(std::move(b));
    while (!b.empty()) {
      std::vector<Rat> r = upoly_rem(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    if (!a.empty()) {
      Rat lead = a.back();
      for (auto& c : a) c /= lead;
    }
    return a;
  }

  void normalize() {
    if (num_.is_zero()) {
      den_ = ParamPoly(Rat(1));
      return;
    }
    // constant denominator folds into the numerator
    if (den_.is_constant()) {
      num_ = num_.scaled(Rat(1) / den_.constant_value());
      den_ = ParamPoly(Rat(1));
      return;
    }
    // proportional numerator and denominator collapse to a constant
    if (num_.terms().size() == den_.terms().size()) {
      Rat c = num_.leading_coeff_grevlex() / den_.leading_coeff_grevlex();
      if (num_ == den_.scaled(c)) {
        num_ = ParamPoly(c);
        den_ = ParamPoly(Rat(1));
        return;
      }
    }
    // full cancellation in the univariate case keeps pencil computations flat
    auto vn = num_.sole_variable();
    auto vd = den_.sole_variable();
    if (vn && vd && (*vn == *vd || *vn == -1 || *vd == -1)) {
      int var = *vn == -1 ? *vd : *vn;
      if (var >= 0) {
        std::vector<Rat> un = num_.univariate_coeffs(var);
        std::vector<Rat> ud = den_.univariate_coeffs(var);
        std::vector<Rat> g = upoly_gcd(un, ud);
        if (g.size() > 1) {
          num_ = ParamPoly::from_univariate(num_.names() ? num_.names() : den_.names(), var,
                                            upoly_div_exact(un, g));
          den_ = ParamPoly::from_univariate(den_.names() ? den_.names() : num_.names(), var,
                                            upoly_div_exact(ud, g));
          if (den_.is_constant()) {
            num_ = num_.scaled(Rat(1) / den_.constant_value());
            den_ = ParamPoly(Rat(1));
            return;
          }
        }
      }
    }
    Rat c = den_.content();
    den_ = den_.scaled(Rat(1) / c);
    num_ = num_.scaled(Rat(1) / c);
  }

  ParamPoly num_;
  ParamPoly den_;
};

}  // namespace modeq

#endif
