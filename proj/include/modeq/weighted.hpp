#ifndef MODEQ_WEIGHTED_HPP
#define MODEQ_WEIGHTED_HPP

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modeq/errors.hpp"
#include "modeq/params.hpp"
#include "modeq/rational.hpp"

namespace modeq {

// Each group carries exactly two ring generators.  The first has even
// weight everywhere it matters for reduction; the second is the one whose
// square gets eliminated at interior points.
struct GenTable {
  std::string name0, name1;
  int weight0, weight1;
};

using Expo = std::array<int, 2>;

// Polynomial in the two group generators, with ParamField coefficients and
// a weight grading (weight of g0^a g1^b is a*weight0 + b*weight1).
class WeightedPoly {
 public:
  WeightedPoly() : table_(nullptr) {}
  explicit WeightedPoly(const GenTable* table) : table_(table) {}

  static WeightedPoly constant(const GenTable* t, ParamField c) {
    WeightedPoly p(t);
    if (!c.is_zero()) p.terms_[{0, 0}] = std::move(c);
    return p;
  }
  static WeightedPoly monomial(const GenTable* t, Expo e, ParamField c) {
    WeightedPoly p(t);
    if (!c.is_zero()) p.terms_[e] = std::move(c);
    return p;
  }
  static WeightedPoly gen(const GenTable* t, int which) {
    return monomial(t, which == 0 ? Expo{1, 0} : Expo{0, 1}, ParamField(Rat(1)));
  }

  const GenTable* table() const { return table_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Expo, ParamField>& terms() const { return terms_; }

  int term_weight(const Expo& e) const { return e[0] * table_->weight0 + e[1] * table_->weight1; }

  // Total weight if homogeneous; nullopt marks an inhomogeneous value.
  std::optional<int> weight() const {
    std::optional<int> w;
    for (const auto& [e, c] : terms_) {
      int tw = term_weight(e);
      if (!w)
        w = tw;
      else if (*w != tw)
        return std::nullopt;
    }
    if (!w) return 0;  // zero counts as weight 0 (any weight)
    return w;
  }

  friend WeightedPoly operator+(const WeightedPoly& a, const WeightedPoly& b) {
    check_tables(a, b);
    if (!a.table_) return b;  // table-less polynomials are empty
    WeightedPoly r = a;
    for (const auto& [e, c] : b.terms_) {
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
  friend WeightedPoly operator-(const WeightedPoly& a, const WeightedPoly& b) { return a + (-b); }
  WeightedPoly operator-() const {
    WeightedPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend WeightedPoly operator*(const WeightedPoly& a, const WeightedPoly& b) {
    check_tables(a, b);
    WeightedPoly r(a.table_ ? a.table_ : b.table_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Expo e{ea[0] + eb[0], ea[1] + eb[1]};
        ParamField c = ca * cb;
        if (c.is_zero()) continue;
        auto it = r.terms_.find(e);
        if (it == r.terms_.end())
          r.terms_.emplace(e, std::move(c));
        else {
          it->second += c;
          if (it->second.is_zero()) r.terms_.erase(it);
        }
      }
    }
    return r;
  }
  WeightedPoly scaled(const ParamField& c) const {
    WeightedPoly r(table_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) {
      ParamField w = v * c;
      if (!w.is_zero()) r.terms_[e] = std::move(w);
    }
    return r;
  }

  friend bool operator==(const WeightedPoly& a, const WeightedPoly& b) { return (a - b).is_zero(); }
  friend bool operator!=(const WeightedPoly& a, const WeightedPoly& b) { return !(a == b); }

  WeightedPoly pow(int n) const {
    WeightedPoly acc = constant(table_, ParamField(Rat(1)));
    WeightedPoly base = *this;
    while (n) {
      if (n & 1) acc = acc * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return acc;
  }

  // Sends generator `which` to zero (evaluation at an elliptic point).
  WeightedPoly with_gen_zero(int which) const {
    WeightedPoly r(table_);
    for (const auto& [e, c] : terms_)
      if (e[which] == 0) r.terms_[e] = c;
    return r;
  }

  // Substitutes gen1^2 -> factor * gen0^repl, repeatedly, so gen1 appears to
  // degree <= 1 in the result.
  WeightedPoly with_square_reduced(int repl, const ParamField& factor) const {
    WeightedPoly r(table_);
    for (const auto& [e, c] : terms_) {
      int k = e[1] / 2;
      Expo e2{e[0] + k * repl, e[1] % 2};
      ParamField c2 = c;
      for (int i = 0; i < k; ++i) c2 *= factor;
      auto it = r.terms_.find(e2);
      if (it == r.terms_.end()) {
        if (!c2.is_zero()) r.terms_.emplace(e2, std::move(c2));
      } else {
        it->second += c2;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::vector<std::pair<Expo, ParamField>> sorted(terms_.begin(), terms_.end());
    std::sort(sorted.begin(), sorted.end(), [this](const auto& x, const auto& y) {
      int wx = term_weight(x.first), wy = term_weight(y.first);
      if (wx != wy) return wx > wy;
      return x.first > y.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : sorted) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.str() << ")";
      if (e[0]) {
        os << "*" << table_->name0;
        if (e[0] != 1) os << "^" << e[0];
      }
      if (e[1]) {
        os << "*" << table_->name1;
        if (e[1] != 1) os << "^" << e[1];
      }
    }
    return os.str();
  }

 private:
  static void check_tables(const WeightedPoly& a, const WeightedPoly& b) {
    if (a.table_ && b.table_ && a.table_ != b.table_)
      throw GeneratorMismatch("weighted polynomials over different generator tables");
  }

  const GenTable* table_;
  std::map<Expo, ParamField> terms_;
};

// Reduction rule at a point of the upper half-plane.
//  - elliptic: the named generator vanishes there.
//  - interior: gen1^2 = factor * gen0^repl_exp, from the defining relation
//    of the point (t_j fixed by the relation's parameter).
struct PointRule {
  enum Kind { kElliptic, kInterior } kind = kElliptic;
  int vanishing_gen = 0;   // elliptic only
  int repl_exp = 0;        // interior only
  ParamField factor;       // interior only

  bool operator==(const PointRule& o) const {
    return kind == o.kind && vanishing_gen == o.vanishing_gen && repl_exp == o.repl_exp &&
           factor == o.factor;
  }
};

// Value of a weighted rational expression at a point, reduced by the point
// rule.  Stored as num / (monomial with coefficient 1).
class LocalValue {
 public:
  LocalValue() : den_{0, 0} {}
  LocalValue(WeightedPoly num, PointRule rule)
      : num_(std::move(num)), den_{0, 0}, rule_(std::move(rule)) {
    reduce_num();
    normalize();
  }
  LocalValue(WeightedPoly num, Expo den, PointRule rule)
      : num_(std::move(num)), den_(den), rule_(std::move(rule)) {
    reduce_num();
    normalize();
  }

  static LocalValue zero(const GenTable* t, PointRule rule) {
    return LocalValue(WeightedPoly(t), std::move(rule));
  }
  static LocalValue from_rat(const GenTable* t, const Rat& c, PointRule rule) {
    return LocalValue(WeightedPoly::constant(t, ParamField(c)), std::move(rule));
  }

  const WeightedPoly& num() const { return num_; }
  const Expo& den() const { return den_; }
  const PointRule& rule() const { return rule_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const {
    return den_ == Expo{0, 0} && num_.terms().size() == 1 &&
           num_.terms().begin()->first == Expo{0, 0} && num_.terms().begin()->second.is_one();
  }

  std::optional<int> weight() const {
    auto w = num_.weight();
    if (!w) return std::nullopt;
    if (num_.is_zero()) return 0;
    return *w - den_weight();
  }

  friend LocalValue operator+(const LocalValue& a, const LocalValue& b) {
    a.check_rule(b);
    // common denominator: monomial lcm is the componentwise max
    Expo d{std::max(a.den_[0], b.den_[0]), std::max(a.den_[1], b.den_[1])};
    WeightedPoly na = a.num_ * mono(a.table(), {d[0] - a.den_[0], d[1] - a.den_[1]});
    WeightedPoly nb = b.num_ * mono(b.table(), {d[0] - b.den_[0], d[1] - b.den_[1]});
    return LocalValue(na + nb, d, a.rule_);
  }
  friend LocalValue operator-(const LocalValue& a, const LocalValue& b) { return a + (-b); }
  LocalValue operator-() const {
    LocalValue r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend LocalValue operator*(const LocalValue& a, const LocalValue& b) {
    a.check_rule(b);
    return LocalValue(a.num_ * b.num_, Expo{a.den_[0] + b.den_[0], a.den_[1] + b.den_[1]}, a.rule_);
  }
  LocalValue operator*(const ParamField& c) const {
    return LocalValue(num_.scaled(c), den_, rule_);
  }

  // Multiplicative inverse.  Requires the reduced numerator to be invertible
  // at the point: a monomial, or (interior) p0 + p1*gen1 with the conjugate
  // trick clearing gen1.
  LocalValue inverse() const {
    if (num_.is_zero()) throw ZeroDivision("inverse of zero local value");
    const GenTable* t = table();
    if (rule_.kind == PointRule::kElliptic) {
      // homogeneous values in one surviving generator are monomials
      if (num_.terms().size() != 1)
        throw Error("cannot invert non-monomial local value " + str());
      Expo e = num_.terms().begin()->first;
      ParamField c = num_.terms().begin()->second;
      return LocalValue(mono(t, den_).scaled(c.inverse()), e, rule_);
    }
    // interior: split num = p0 + p1 * gen1, clear gen1 by the conjugate
    WeightedPoly p0(t), p1(t);
    for (const auto& [e, c] : num_.terms()) {
      if (e[1] == 0)
        p0 = p0 + WeightedPoly::monomial(t, e, c);
      else if (e[1] == 1)
        p1 = p1 + WeightedPoly::monomial(t, {e[0], 0}, c);
      else
        throw Error("local value not reduced");
    }
    WeightedPoly conj = p0 - p1 * WeightedPoly::gen(t, 1);
    WeightedPoly norm = (p0 * p0 - p1 * p1 * WeightedPoly::gen(t, 1) * WeightedPoly::gen(t, 1))
                            .with_square_reduced(rule_.repl_exp, rule_.factor);
    if (norm.is_zero()) throw ZeroDivision("local value vanishes at the point");
    if (norm.terms().size() != 1)
      throw Error("inverse needs a monomial norm, got " + norm.str());
    Expo ne = norm.terms().begin()->first;
    ParamField nc = norm.terms().begin()->second;
    // 1/num = conj / (nc * gen^ne);  result = den_monomial * conj / (...)
    WeightedPoly adj = conj.scaled(nc.inverse()) * mono(t, den_);
    return LocalValue(std::move(adj), ne, rule_);
  }

  friend LocalValue operator/(const LocalValue& a, const LocalValue& b) { return a * b.inverse(); }

  friend bool operator==(const LocalValue& a, const LocalValue& b) { return (a - b).is_zero(); }
  friend bool operator!=(const LocalValue& a, const LocalValue& b) { return !(a == b); }

  // The scalar (parameter-field) part when the value is a pure monomial
  // times a scalar; weight-0 values always are.
  ParamField scalar_part() const {
    if (num_.is_zero()) return ParamField(Rat(0));
    if (num_.terms().size() != 1)
      throw Error("local value is not monomial: " + str());
    return num_.terms().begin()->second;
  }

  // For a weight-0 value the monomial parts cancel and the value is a pure
  // rational function of the parameters.
  ParamField as_scalar() const {
    if (num_.is_zero()) return ParamField(Rat(0));
    if (weight() != std::optional<int>(0)) throw Error("local value has nonzero weight: " + str());
    if (num_.terms().size() != 1) throw Error("weight-0 local value not monomial: " + str());
    if (num_.terms().begin()->first != den_)
      throw Error("weight-0 local value with mismatched monomials: " + str());
    return num_.terms().begin()->second;
  }

  std::string str() const {
    std::string s = num_.str();
    if (den_ != Expo{0, 0}) {
      const GenTable* t = table();
      std::ostringstream os;
      os << "(" << s << ")/(";
      bool printed = false;
      if (den_[0]) {
        os << t->name0;
        if (den_[0] != 1) os << "^" << den_[0];
        printed = true;
      }
      if (den_[1]) {
        if (printed) os << "*";
        os << t->name1;
        if (den_[1] != 1) os << "^" << den_[1];
      }
      os << ")";
      return os.str();
    }
    return s;
  }

 private:
  const GenTable* table() const { return num_.table(); }
  int den_weight() const {
    const GenTable* t = table();
    return den_[0] * t->weight0 + den_[1] * t->weight1;
  }
  static WeightedPoly mono(const GenTable* t, Expo e) {
    return WeightedPoly::monomial(t, e, ParamField(Rat(1)));
  }
  void check_rule(const LocalValue& b) const {
    if (num_.table() && b.num_.table() && num_.table() != b.num_.table())
      throw GeneratorMismatch("local values over different generator tables");
    if (!(rule_ == b.rule_)) throw GeneratorMismatch("local values at different points");
  }

  void reduce_num() {
    if (rule_.kind == PointRule::kElliptic)
      num_ = num_.with_gen_zero(rule_.vanishing_gen);
    else
      num_ = num_.with_square_reduced(rule_.repl_exp, rule_.factor);
  }

  // Cancels common monomial factors between num and den.  An elliptic rule
  // never leaves the vanishing generator in the numerator, so only shared
  // powers can cancel.
  void normalize() {
    if (num_.is_zero()) {
      den_ = {0, 0};
      return;
    }
    Expo m{den_[0], den_[1]};
    for (const auto& [e, c] : num_.terms()) {
      m[0] = std::min(m[0], e[0]);
      m[1] = std::min(m[1], e[1]);
    }
    if (m == Expo{0, 0}) return;
    WeightedPoly n2(table());
    for (const auto& [e, c] : num_.terms())
      n2 = n2 + WeightedPoly::monomial(table(), {e[0] - m[0], e[1] - m[1]}, c);
    num_ = std::move(n2);
    den_ = {den_[0] - m[0], den_[1] - m[1]};
  }

  WeightedPoly num_;
  Expo den_;
  PointRule rule_;
};

}  // namespace modeq

#endif
