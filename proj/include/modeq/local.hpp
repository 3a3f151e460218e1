#ifndef MODEQ_LOCAL_HPP
#define MODEQ_LOCAL_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modeq/errors.hpp"
#include "modeq/groups.hpp"
#include "modeq/mode.hpp"
#include "modeq/params.hpp"
#include "modeq/qseries.hpp"
#include "modeq/weighted.hpp"

namespace modeq {

// ---------------------------------------------------------------------------
// Iterated Serre derivative
// ---------------------------------------------------------------------------

// First Serre derivative as a derivation on the generator ring.
inline WeightedPoly serre_theta(const GroupContext& ctx, const WeightedPoly& p) {
  const GenTable* t = &ctx.gens;
  WeightedPoly out(t);
  for (const auto& [e, c] : p.terms()) {
    if (e[0] > 0) {
      WeightedPoly m = WeightedPoly::monomial(t, {e[0] - 1, e[1]}, c * ParamField(Rat(e[0])));
      out = out + m * ctx.theta_gen0;
    }
    if (e[1] > 0) {
      WeightedPoly m = WeightedPoly::monomial(t, {e[0], e[1] - 1}, c * ParamField(Rat(e[1])));
      out = out + m * ctx.theta_gen1;
    }
  }
  return out;
}

// theta^[n] g for homogeneous g of weight k, by the modified iteration with
// the weight-4 correction form.
inline std::vector<WeightedPoly> theta_tower(const GroupContext& ctx, const WeightedPoly& g,
                                             int nmax) {
  auto w = g.weight();
  if (!w) throw InhomogeneousInput("iterated Serre derivative needs a homogeneous input");
  int k = *w;
  std::vector<WeightedPoly> th;
  th.push_back(g);
  if (nmax >= 1) th.push_back(serre_theta(ctx, g));
  for (int n = 1; n < nmax; ++n) {
    WeightedPoly next = serre_theta(ctx, th[static_cast<size_t>(n)]) +
                        (ctx.m_form * th[static_cast<size_t>(n - 1)])
                            .scaled(ParamField(Rat(n) * Rat(k + n - 1) / Rat(ctx.anomaly)));
    th.push_back(std::move(next));
  }
  return th;
}

inline WeightedPoly theta_iter(const GroupContext& ctx, const WeightedPoly& g, int n) {
  return theta_tower(ctx, g, n).back();
}

// ---------------------------------------------------------------------------
// Jets: reduced local expansions sum a_n x^n at a point
// ---------------------------------------------------------------------------
struct Jet {
  const GroupContext* ctx = nullptr;
  PointRule rule;
  int weight = 0;  // coefficient a_n is homogeneous of weight `weight` + 2n
  int nmax = 0;    // coefficients known for n <= nmax
  std::map<int, LocalValue> a;

  LocalValue at(int n) const {
    auto it = a.find(n);
    if (it != a.end()) return it->second;
    return LocalValue::zero(&ctx->gens, rule);
  }
  std::optional<int> valuation() const {
    for (const auto& [n, v] : a)
      if (!v.is_zero()) return n;
    return std::nullopt;
  }
};

namespace detail {
inline void jet_set(Jet& j, int n, LocalValue v) {
  if (!v.is_zero() && n <= j.nmax) j.a[n] = std::move(v);
}
}  // namespace detail

// Jet of a generator polynomial: a_n = theta^[n] P (z_0) / n!.
inline Jet jet_of_poly(const GroupContext& ctx, const WeightedPoly& p, const PointRule& rule,
                       int nmax) {
  Jet j;
  j.ctx = &ctx;
  j.rule = rule;
  j.weight = p.weight().value_or(0);
  j.nmax = nmax;
  if (p.is_zero()) return j;
  auto tower = theta_tower(ctx, p, nmax);
  Rat fact(1);
  for (int n = 0; n <= nmax; ++n) {
    if (n > 0) fact *= Rat(n);
    detail::jet_set(j, n, LocalValue(tower[static_cast<size_t>(n)].scaled(ParamField(Rat(1) / fact)),
                                     rule));
  }
  return j;
}

inline Jet jet_add(const Jet& x, const Jet& y) {
  if (x.weight != y.weight) throw Error("jet addition mixes weights");
  Jet j;
  j.ctx = x.ctx;
  j.rule = x.rule;
  j.weight = x.weight;
  j.nmax = std::min(x.nmax, y.nmax);
  for (const auto& [n, v] : x.a)
    if (n <= j.nmax) j.a[n] = v;
  for (const auto& [n, v] : y.a) {
    if (n > j.nmax) continue;
    auto it = j.a.find(n);
    if (it == j.a.end())
      j.a.emplace(n, v);
    else {
      it->second = it->second + v;
      if (it->second.is_zero()) j.a.erase(it);
    }
  }
  return j;
}

inline Jet jet_scale(const Jet& x, const ParamField& c) {
  Jet j = x;
  if (c.is_zero()) {
    j.a.clear();
    return j;
  }
  for (auto& [n, v] : j.a) v = v * c;
  return j;
}

inline Jet jet_mul(const Jet& x, const Jet& y) {
  Jet j;
  j.ctx = x.ctx;
  j.rule = x.rule;
  j.weight = x.weight + y.weight;
  int vx = x.valuation().value_or(x.nmax + 1);
  int vy = y.valuation().value_or(y.nmax + 1);
  j.nmax = std::min(x.nmax + vy, y.nmax + vx);
  for (const auto& [nx, cx] : x.a)
    for (const auto& [ny, cy] : y.a) {
      int n = nx + ny;
      if (n > j.nmax) continue;
      LocalValue prod = cx * cy;
      if (prod.is_zero()) continue;
      auto it = j.a.find(n);
      if (it == j.a.end())
        j.a.emplace(n, std::move(prod));
      else {
        it->second = it->second + prod;
        if (it->second.is_zero()) j.a.erase(it);
      }
    }
  return j;
}

// Laurent inverse of a jet.  The leading coefficient must be invertible at
// the point; a vanishing linear coefficient under a leading zero means the
// underlying form fails to have a simple zero there.
inline Jet jet_inverse(const Jet& x) {
  auto v = x.valuation();
  if (!v) throw ZeroDivision("inverse of a zero jet");
  LocalValue lead = x.at(*v);
  LocalValue lead_inv = lead.inverse();
  Jet j;
  j.ctx = x.ctx;
  j.rule = x.rule;
  j.weight = -x.weight;
  j.nmax = x.nmax - 2 * *v;
  // b_m = coefficient of x^{v+m}; invert the unit part then shift by -v
  std::vector<LocalValue> c;  // c_m, m = 0..
  for (int m = 0; *v + m <= x.nmax && m <= j.nmax + *v; ++m) {
    if (m == 0) {
      c.push_back(lead_inv);
    } else {
      LocalValue acc = LocalValue::zero(&x.ctx->gens, x.rule);
      for (int i = 0; i < m; ++i) acc = acc + c[static_cast<size_t>(i)] * x.at(*v + m - i);
      c.push_back((-acc) * lead_inv);
    }
    detail::jet_set(j, -*v + m, c.back());
  }
  return j;
}

inline Jet jet_div(const Jet& x, const Jet& y) { return jet_mul(x, jet_inverse(y)); }

inline Jet jet_pow(const Jet& x, int p) {
  Jet acc = jet_of_poly(*x.ctx, WeightedPoly::constant(&x.ctx->gens, ParamField(Rat(1))), x.rule,
                        x.nmax);
  for (int i = 0; i < p; ++i) acc = jet_mul(acc, x);
  return acc;
}

// ---------------------------------------------------------------------------
// The weight-4 family with prescribed pole structure
// ---------------------------------------------------------------------------
struct QFamilyPole {
  ParamField t;   // relation-parameter of the point, never 0 or 1
  ParamField r1;  // double-pole coefficient
  ParamField r2;  // simple-pole coefficient
};

struct QFamily {
  GroupId group = GroupId::SL2Z;
  ParamField r, s, t;
  std::vector<QFamilyPole> poles;
};

namespace detail {
struct FamilyShapes {
  WeightedPoly base;      // weight-4 holomorphic part multiplying r
  WeightedPoly s_num;     // s * s_num / s_den
  WeightedPoly s_den;
  WeightedPoly t_num;     // t * t_num / t_den
  WeightedPoly t_den;
  WeightedPoly pole_m;    // the cusp form appearing in the pole terms
  // F_j(t) = relation polynomial vanishing at the point with parameter t
  std::function<WeightedPoly(const ParamField&)> relation;
};

inline FamilyShapes family_shapes(const GroupContext& ctx) {
  const GenTable* g = &ctx.gens;
  FamilyShapes f;
  switch (ctx.id) {
    case GroupId::SL2Z: {
      WeightedPoly e4 = WeightedPoly::gen(g, 0), e6 = WeightedPoly::gen(g, 1);
      WeightedPoly delta = ctx.named("Delta");
      f.base = e4;
      f.s_num = delta;
      f.s_den = e4.pow(2);
      f.t_num = e4 * delta;
      f.t_den = e6.pow(2);
      f.pole_m = delta;
      f.relation = [g](const ParamField& t) {
        return WeightedPoly::gen(g, 0).pow(3) - WeightedPoly::gen(g, 1).pow(2).scaled(t);
      };
      break;
    }
    case GroupId::G2plus: {
      WeightedPoly m2 = WeightedPoly::gen(g, 0), m4m = WeightedPoly::gen(g, 1);
      WeightedPoly m4 = ctx.named("M4"), m8 = ctx.named("M8");
      f.base = m4;
      f.s_num = m8;
      f.s_den = m4;
      f.t_num = m4 * m8;
      f.t_den = m4m.pow(2);
      f.pole_m = m8;
      f.relation = [g](const ParamField& t) {
        return WeightedPoly::gen(g, 1).pow(2) - WeightedPoly::gen(g, 0).pow(4).scaled(t);
      };
      break;
    }
    case GroupId::G3plus: {
      WeightedPoly m1 = WeightedPoly::gen(g, 0), m3 = WeightedPoly::gen(g, 1);
      WeightedPoly m4p = ctx.named("M4plus"), m6m = ctx.named("M6minus");
      f.base = m4p;
      f.s_num = m6m;
      f.s_den = m1.pow(2);
      f.t_num = m4p * m6m;
      f.t_den = m3.pow(2);
      f.pole_m = m6m;
      f.relation = [g](const ParamField& t) {
        return WeightedPoly::gen(g, 0).pow(6) - WeightedPoly::gen(g, 1).pow(2).scaled(t);
      };
      break;
    }
  }
  return f;
}
}  // namespace detail

// Jet of the family at a point, coefficients in the parameter field.
inline Jet jet_of_family(const QFamily& fam, const PointRule& rule, int nmax) {
  const GroupContext& ctx = group_context(fam.group);
  detail::FamilyShapes sh = detail::family_shapes(ctx);
  int work = nmax + 6;
  auto quot = [&](const WeightedPoly& num, const WeightedPoly& den) {
    Jet jn = jet_of_poly(ctx, num, rule, work);
    Jet jd = jet_of_poly(ctx, den, rule, work);
    return jet_div(jn, jd);
  };
  Jet acc = jet_scale(jet_of_poly(ctx, sh.base, rule, work), fam.r);
  if (!fam.s.is_zero()) acc = jet_add(acc, jet_scale(quot(sh.s_num, sh.s_den), fam.s));
  if (!fam.t.is_zero()) acc = jet_add(acc, jet_scale(quot(sh.t_num, sh.t_den), fam.t));
  for (const auto& p : fam.poles) {
    WeightedPoly fj = sh.relation(p.t);
    Jet jfj = jet_of_poly(ctx, fj, rule, work);
    if (rule.kind == PointRule::kInterior) {
      // the relation polynomial of the expansion point must vanish simply
      if (jfj.at(0).is_zero() && jfj.at(1).is_zero())
        throw NotSimpleZero("relation polynomial fails to have a simple zero");
    }
    Jet inv = jet_inverse(jfj);
    Jet inv2 = jet_mul(inv, inv);
    Jet base = jet_of_poly(ctx, sh.base, rule, work);
    Jet pm = jet_of_poly(ctx, sh.pole_m, rule, work);
    acc = jet_add(acc, jet_scale(jet_mul(base, jet_mul(jet_mul(pm, pm), inv2)), p.r1));
    acc = jet_add(acc, jet_scale(jet_mul(base, jet_mul(pm, inv)), p.r2));
  }
  if (acc.nmax < nmax) throw InsufficientPrecision("jet window collapsed below request");
  acc.nmax = nmax;
  std::erase_if(acc.a, [&](const auto& kv) { return kv.first > nmax; });
  return acc;
}

// ---------------------------------------------------------------------------
// Indicial data and the apparentness obstruction
// ---------------------------------------------------------------------------
struct IndicialRoots {
  ParamField a_minus2;                       // x^2 - x - a_minus2 = 0
  std::optional<std::pair<Rat, Rat>> roots;  // when rational
  std::optional<Rat> kappa;                  // roots are 1/2 -+ kappa
};

inline std::optional<Rat> rat_sqrt(const Rat& r) {
  Rat s;
  if (!r.sqrt_exact(s)) return std::nullopt;
  return s;
}

inline IndicialRoots indicial(const Jet& q_jet) {
  if (q_jet.weight != 4) throw Error("indicial data expects a weight-4 jet");
  LocalValue a2 = q_jet.at(-2);
  IndicialRoots out;
  out.a_minus2 = a2.is_zero() ? ParamField(Rat(0)) : a2.as_scalar();
  if (out.a_minus2.is_rational()) {
    Rat s = out.a_minus2.to_rat();
    if (auto d = rat_sqrt(Rat(1) + Rat(4) * s)) {
      Rat lo = (Rat(1) - *d) / Rat(2), hi = (Rat(1) + *d) / Rat(2);
      out.roots = std::make_pair(lo, hi);
      out.kappa = *d / Rat(2);
    }
  }
  return out;
}

struct ApparencyReport {
  Rat kappa;
  std::pair<Rat, Rat> local_exponents;  // 1/2 - kappa, 1/2 + kappa
  std::vector<LocalValue> c_coeffs;     // c_0 .. c_{2 kappa - 1}
  LocalValue obstruction;
  bool apparent = false;
};

// Runs the recursion from the smaller exponent 1/2 - kappa and evaluates the
// single obstruction sum at step 2 kappa.
inline ApparencyReport apparent_obstruction(const Jet& q_jet, const Rat& kappa) {
  if (!is_half_integer(kappa) || kappa <= Rat(0))
    throw Error("apparentness obstruction needs kappa in (1/2)N");
  long two_kappa = (kappa + kappa).num_long();
  LocalValue a2 = q_jet.at(-2);
  ParamField a2s = a2.is_zero() ? ParamField(Rat(0)) : a2.as_scalar();
  if (a2s != ParamField(kappa * kappa - Rat(1, 4)))
    throw IndicialMismatch("a_{-2} must equal kappa^2 - 1/4");
  if (q_jet.nmax < two_kappa - 2)
    throw InsufficientPrecision("jet too short for the obstruction sum");
  const GenTable* g = &q_jet.ctx->gens;
  std::vector<LocalValue> c{LocalValue::from_rat(g, Rat(1), q_jet.rule)};
  for (long n = 1; n < two_kappa; ++n) {
    LocalValue rhs = LocalValue::zero(g, q_jet.rule);
    for (long j = 0; j < n; ++j)
      rhs = rhs + q_jet.at(static_cast<int>(n - j - 2)) * c[static_cast<size_t>(j)];
    // ((alpha+n)(alpha+n-1) - a_{-2}) = n (n - 2 kappa) for alpha = 1/2-kappa
    ParamField denom(Rat(n) * (Rat(n) - Rat(two_kappa)));
    c.push_back(rhs * denom.inverse());
  }
  LocalValue obstruction = LocalValue::zero(g, q_jet.rule);
  for (long j = 0; j < two_kappa; ++j)
    obstruction = obstruction + q_jet.at(static_cast<int>(two_kappa - j - 2)) * c[static_cast<size_t>(j)];
  ApparencyReport rep;
  rep.kappa = kappa;
  rep.local_exponents = {Rat(1, 2) - kappa, Rat(1, 2) + kappa};
  rep.c_coeffs = std::move(c);
  rep.apparent = obstruction.is_zero();
  rep.obstruction = std::move(obstruction);
  return rep;
}

// ---------------------------------------------------------------------------
// Construction of Q from prescribed exponent data
// ---------------------------------------------------------------------------

// Parameter inversions of the indicial closed forms, per group:
// r = kinf^2 and (s, t, r1_j) are linear in kappa^2 at the matching points.
inline Rat family_s_param(GroupId g, const Rat& kappa_rho2) {
  Rat prod = Rat(1, 4) - kappa_rho2 * kappa_rho2;  // product of the local exponents
  switch (g) {
    case GroupId::SL2Z: return Rat(192) * prod;
    case GroupId::G2plus: return Rat(16) * prod;
    case GroupId::G3plus: return Rat(3) * prod;
  }
  throw Error("bad group");
}

inline Rat family_t_param(GroupId g, const Rat& kappa_rho1) {
  Rat m = kappa_rho1 * kappa_rho1 - Rat(1, 4);
  switch (g) {
    case GroupId::SL2Z: return Rat(432) * m;
    case GroupId::G2plus: return Rat(64) * m;
    case GroupId::G3plus: return Rat(27) * m;
  }
  throw Error("bad group");
}

inline Rat family_r1_param(GroupId g, const Rat& t_j, const Rat& kappa_j) {
  Rat m = (kappa_j * kappa_j - Rat(1, 4)) * t_j;
  switch (g) {
    case GroupId::SL2Z: return Rat(1728) * Rat(1728) * m;
    case GroupId::G2plus: return Rat(256) * Rat(256) * m;
    case GroupId::G3plus: return Rat(108) * Rat(108) * m;
  }
  throw Error("bad group");
}

struct ConstructQResult {
  long solution_count = 0;              // prod_j (2 kappa_j), with multiplicity
  QFamily family;                       // r2 left symbolic when m = 1
  std::vector<Rat> obstruction_poly;    // coefficients in r2, constant first (m = 1)
  std::vector<Rat> r2_roots;            // exact rational roots found
  std::vector<Rat> unresolved_factor;   // remaining factor after rational roots
  std::vector<QFamily> solutions;       // fully rational families
};

namespace detail {
// Rational roots of an exact-coefficient polynomial (constant term first).
// Degree <= 2 is solved in closed form; higher degrees use the rational
// root theorem with synthetic division.
inline std::pair<std::vector<Rat>, std::vector<Rat>> rational_roots(std::vector<Rat> poly) {
  std::vector<Rat> roots;
  auto degree = [&](const std::vector<Rat>& p) {
    long d = static_cast<long>(p.size()) - 1;
    while (d > 0 && p[static_cast<size_t>(d)].is_zero()) --d;
    return d;
  };
  auto divide_out = [&](std::vector<Rat>& p, const Rat& root) {
    // synthetic division by (x - root)
    long d = degree(p);
    std::vector<Rat> q(static_cast<size_t>(d), Rat(0));
    Rat carry(0);
    for (long i = d; i >= 1; --i) {
      carry = p[static_cast<size_t>(i)] + carry * root;
      q[static_cast<size_t>(i - 1)] = carry;
    }
    p = q;
  };
  while (true) {
    long d = degree(poly);
    if (d <= 0) break;
    if (d == 1) {
      roots.push_back(-poly[0] / poly[1]);
      poly = {Rat(1)};
      break;
    }
    if (d == 2) {
      Rat disc = poly[1] * poly[1] - Rat(4) * poly[0] * poly[2];
      auto sd = rat_sqrt(disc);
      if (!sd) break;
      roots.push_back((-poly[1] + *sd) / (Rat(2) * poly[2]));
      roots.push_back((-poly[1] - *sd) / (Rat(2) * poly[2]));
      poly = {Rat(1)};
      break;
    }
    // rational root theorem on the cleared polynomial
    Rat content(0);
    for (const auto& c : poly) content = rat_gcd(content, c);
    bool found = false;
    long a0 = (poly[0] / content).num_long();
    long an = (poly[static_cast<size_t>(d)] / content).num_long();
    auto divisors = [](long v) {
      std::vector<long> out;
      v = v < 0 ? -v : v;
      for (long i = 1; i * i <= v; ++i)
        if (v % i == 0) {
          out.push_back(i);
          out.push_back(v / i);
        }
      return out;
    };
    for (long p : divisors(a0 == 0 ? 1 : a0)) {
      for (long q : divisors(an)) {
        for (long sign : {1L, -1L}) {
          Rat cand(sign * p, q);
          Rat val(0), x(1);
          for (const auto& c : poly) {
            val += c * x;
            x *= cand;
          }
          if (val.is_zero()) {
            roots.push_back(cand);
            divide_out(poly, cand);
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found && a0 == 0) {
      roots.push_back(Rat(0));
      divide_out(poly, Rat(0));
      found = true;
    }
    if (!found) break;
  }
  return {roots, poly};
}
}  // namespace detail

inline ConstructQResult construct_Q(GroupId g, const SingularitySpec& spec) {
  for (const auto& p : spec.interior)
    if (p.t == Rat(0) || p.t == Rat(1))
      throw DegenerateParameter("interior parameter t must avoid 0 and 1");
  validate_spec(g, spec);
  if (spec.interior.size() > 1)
    throw UnsupportedArity("at most one interior singular point is supported");

  ConstructQResult out;
  out.family.group = g;
  out.family.r = ParamField(spec.kappa_inf * spec.kappa_inf);
  out.family.s = ParamField(family_s_param(g, spec.kappa_rho2));
  out.family.t = ParamField(family_t_param(g, spec.kappa_rho1));
  out.solution_count = 1;
  if (spec.interior.empty()) {
    out.solutions.push_back(out.family);
    return out;
  }

  const InteriorPoint& pt = spec.interior[0];
  long two_kappa = (pt.kappa + pt.kappa).num_long();
  out.solution_count = two_kappa;
  auto names = make_params({"r2"});
  QFamilyPole pole;
  pole.t = ParamField(pt.t);
  pole.r1 = ParamField(family_r1_param(g, pt.t, pt.kappa));
  pole.r2 = ParamField::var(names, 0);
  out.family.poles.push_back(pole);

  const GroupContext& ctx = group_context(g);
  Jet qj = jet_of_family(out.family, ctx.interior_rule(ParamField(pt.t)),
                         static_cast<int>(two_kappa));
  ApparencyReport rep = apparent_obstruction(qj, pt.kappa);
  ParamField obs = rep.obstruction.is_zero() ? ParamField(Rat(0)) : rep.obstruction.scalar_part();
  // clear the (parameter-free) denominator and read off the r2-polynomial
  if (obs.den().degree_in(0) != 0) throw Error("obstruction denominator depends on r2");
  ParamPoly num = obs.num();
  long deg = num.degree_in(0);
  if (deg != two_kappa) throw Error("obstruction degree differs from 2 kappa");
  std::vector<Rat> poly;
  for (long i = 0; i <= deg; ++i) {
    ParamPoly ci = num.coeff_in(0, static_cast<int>(i));
    if (!ci.is_constant()) throw Error("obstruction coefficient not rational");
    poly.push_back(ci.constant_value() / obs.den().constant_value());
  }
  out.obstruction_poly = poly;
  auto [roots, rest] = detail::rational_roots(poly);
  std::sort(roots.begin(), roots.end());
  out.r2_roots = roots;
  out.unresolved_factor = rest;
  for (const auto& r2 : roots) {
    QFamily fam = out.family;
    fam.poles[0].r2 = ParamField(r2);
    out.solutions.push_back(std::move(fam));
  }
  return out;
}

// q-expansion of a fully rational family.
inline QSeries qfamily_to_series(const QFamily& fam, const Rat& order) {
  auto rat = [](const ParamField& f) { return f.to_rat(); };
  GroupId g = fam.group;
  QSeries q = QSeries::zero(order);
  switch (g) {
    case GroupId::SL2Z: {
      QSeries e4 = generator_series(g, "E4", order), e6 = generator_series(g, "E6", order);
      QSeries delta = generator_series(g, "Delta", order);
      q = e4.scaled(rat(fam.r)) + (delta / (e4 * e4)).scaled(rat(fam.s)) +
          ((e4 * delta) / (e6 * e6)).scaled(rat(fam.t));
      for (const auto& p : fam.poles) {
        QSeries fj = pow_int(e4, 3) - (e6 * e6).scaled(rat(p.t));
        q = q + (e4 * delta * delta / (fj * fj)).scaled(rat(p.r1)) +
            (e4 * delta / fj).scaled(rat(p.r2));
      }
      break;
    }
    case GroupId::G2plus: {
      QSeries m2 = generator_series(g, "M2", order), m4m = generator_series(g, "M4minus", order);
      QSeries m4 = generator_series(g, "M4", order), m8 = generator_series(g, "M8", order);
      q = m4.scaled(rat(fam.r)) + (m8 / m4).scaled(rat(fam.s)) +
          ((m4 * m8) / (m4m * m4m)).scaled(rat(fam.t));
      for (const auto& p : fam.poles) {
        QSeries fj = m4m * m4m - (m4 * m4).scaled(rat(p.t));
        q = q + (m4 * m8 * m8 / (fj * fj)).scaled(rat(p.r1)) + (m4 * m8 / fj).scaled(rat(p.r2));
      }
      break;
    }
    case GroupId::G3plus: {
      QSeries m1 = generator_series(g, "M1", order), m3 = generator_series(g, "M3", order);
      QSeries m4p = generator_series(g, "M4plus", order);
      QSeries m6m = generator_series(g, "M6minus", order);
      q = m4p.scaled(rat(fam.r)) + (m6m / (m1 * m1)).scaled(rat(fam.s)) +
          ((m4p * m6m) / (m3 * m3)).scaled(rat(fam.t));
      for (const auto& p : fam.poles) {
        QSeries fj = pow_int(m1, 6) - (m3 * m3).scaled(rat(p.t));
        q = q + (m4p * m6m * m6m / (fj * fj)).scaled(rat(p.r1)) +
            (m4p * m6m / fj).scaled(rat(p.r2));
      }
      break;
    }
  }
  return q;
}

}  // namespace modeq

#endif
