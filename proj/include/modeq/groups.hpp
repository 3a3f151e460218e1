#ifndef MODEQ_GROUPS_HPP
#define MODEQ_GROUPS_HPP

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modeq/errors.hpp"
#include "modeq/linalg.hpp"
#include "modeq/params.hpp"
#include "modeq/qseries.hpp"
#include "modeq/rational.hpp"
#include "modeq/weighted.hpp"

namespace modeq {

enum class GroupId { SL2Z, G2plus, G3plus };

inline std::string group_name(GroupId g) {
  switch (g) {
    case GroupId::SL2Z: return "sl2z";
    case GroupId::G2plus: return "g2plus";
    case GroupId::G3plus: return "g3plus";
  }
  return "?";
}

inline GroupId parse_group(const std::string& s) {
  if (s == "sl2z" || s == "SL2Z" || s == "1") return GroupId::SL2Z;
  if (s == "g2plus" || s == "2") return GroupId::G2plus;
  if (s == "g3plus" || s == "3") return GroupId::G3plus;
  throw ParseError("unknown group '" + s + "'");
}

// Character of a space, as a power m of the group's basic character:
//   sl2z:   m = 0 only.
//   g2plus: m = 0 is the Atkin-Lehner eigenvalue +1, m = 2 is -1.
//   g3plus: chi^m, m in {0,1,2,3}, chi(S) = chi(R) = -i; m = 2 is the
//           Atkin-Lehner eigenvalue -1 on even weights.
struct CharacterLabel {
  int m = 0;
  friend bool operator==(const CharacterLabel&, const CharacterLabel&) = default;
};

inline std::string character_name(GroupId g, CharacterLabel c) {
  switch (g) {
    case GroupId::SL2Z: return "triv";
    case GroupId::G2plus: return c.m == 0 ? "+" : "-";
    case GroupId::G3plus:
      switch (((c.m % 4) + 4) % 4) {
        case 0: return "+";
        case 1: return "chi";
        case 2: return "-";
        default: return "chi^3";
      }
  }
  return "?";
}

inline CharacterLabel parse_character(GroupId g, const std::string& s) {
  if (s.empty() || s == "+" || s == "triv" || s == "chi^0" || s == "1") return {0};
  if (s == "-" || s == "chi^2") return {2};
  if (s == "chi" || s == "chi^1" || s == "i" ) return {1};
  if (s == "chi^3" || s == "chibar") return {3};
  throw ParseError("unknown character '" + s + "' for group " + group_name(g));
}

struct SpaceSpec {
  GroupId group = GroupId::SL2Z;
  int weight = 0;
  CharacterLabel character;
  int depth_bound = 0;  // 0: modular, 1: quasimodular of depth <= 1
};

// ---------------------------------------------------------------------------
// q-expansions of the standard generators
// ---------------------------------------------------------------------------

// sigma_k(n) divisor sums for 1 <= n < len, as exact rationals.
inline std::vector<Rat> divisor_sums(long k, long len) {
  std::vector<Rat> s(std::max<long>(len, 1), Rat(0));
  for (long d = 1; d < len; ++d) {
    Rat dk = Rat(d).pow(k);
    for (long n = d; n < len; n += d) s[n] += dk;
  }
  return s;
}

// E_k(scale * z) for k in {2, 4, 6}, to order q^T.
inline QSeries eisenstein(int k, long scale, const Rat& order) {
  long len = std::max<long>(0, order.floor_long() / scale + 1);
  std::vector<std::pair<long, Rat>> terms;
  terms.emplace_back(0, Rat(1));
  Rat c = k == 2 ? Rat(-24) : (k == 4 ? Rat(240) : Rat(-504));
  if (k != 2 && k != 4 && k != 6) throw Error("eisenstein weight must be 2, 4 or 6");
  std::vector<Rat> sig = divisor_sums(k - 1, len);
  for (long n = 1; n < len; ++n) terms.emplace_back(n * scale, c * sig[n]);
  return QSeries::from_terms(1, order, std::move(terms));
}

// prod_{n>=1} (1 - q^{dn}) mod q^T, by the pentagonal number theorem.
inline QSeries euler_product(long d, const Rat& order) {
  std::vector<std::pair<long, Rat>> terms;
  terms.emplace_back(0, Rat(1));
  for (long k = 1;; ++k) {
    long e1 = d * k * (3 * k - 1) / 2;
    long e2 = d * k * (3 * k + 1) / 2;
    bool any = false;
    Rat sign = (k % 2) ? Rat(-1) : Rat(1);
    if (Rat(e1) < order) {
      terms.emplace_back(e1, sign);
      any = true;
    }
    if (Rat(e2) < order) {
      terms.emplace_back(e2, sign);
      any = true;
    }
    if (!any) break;
  }
  return QSeries::from_terms(1, order, std::move(terms));
}

// prod_i eta(d_i z)^{e_i}, with the q^{sum d_i e_i / 24} prefactor.
// The total 24 | sum d_i e_i is required (all uses here satisfy it).
inline QSeries eta_quotient(const std::vector<std::pair<long, int>>& factors, const Rat& order) {
  long pref24 = 0;
  for (auto& [d, e] : factors) pref24 += d * e;
  if (pref24 % 24 != 0) throw Error("eta quotient with fractional leading exponent");
  long pref = pref24 / 24;
  QSeries acc = QSeries::one(order);
  for (auto& [d, e] : factors) acc = acc * pow_int(euler_product(d, order), e);
  return acc.shifted(Rat(pref)).truncated(order);
}

// theta series of the hexagonal lattice x^2 + xy + y^2: the weight-1 form on
// the level-3 chain.  Coefficients 6(d_{1 mod 3}(n) - d_{2 mod 3}(n)).
inline QSeries theta_hexagonal(const Rat& order) {
  long len = std::max<long>(1, order.floor_long() + 1);
  std::vector<long> r(len, 0);
  for (long d = 1; d < len; ++d) {
    int cls = d % 3 == 1 ? 1 : (d % 3 == 2 ? -1 : 0);
    if (cls == 0) continue;
    for (long n = d; n < len; n += d) r[n] += cls;
  }
  std::vector<std::pair<long, Rat>> terms;
  terms.emplace_back(0, Rat(1));
  for (long n = 1; n < len; ++n) terms.emplace_back(n, Rat(6 * r[n]));
  return QSeries::from_terms(1, order, std::move(terms));
}

// The weight-2 quasimodular generator phi of each group (E2, M2*, M2*).
inline QSeries phi_series(GroupId g, const Rat& order) {
  switch (g) {
    case GroupId::SL2Z: return eisenstein(2, 1, order);
    case GroupId::G2plus: {
      QSeries s = eisenstein(2, 2, order).scaled(Rat(2)) + eisenstein(2, 1, order);
      return s.scaled(Rat(1, 3));
    }
    case GroupId::G3plus: {
      QSeries s = eisenstein(2, 3, order).scaled(Rat(3)) + eisenstein(2, 1, order);
      return s.scaled(Rat(1, 4));
    }
  }
  throw Error("bad group");
}

namespace detail {
struct GenInfo {
  int weight;
  int char_m;
  std::function<QSeries(const Rat&)> series;
};

inline const std::map<std::string, GenInfo>& generator_table(GroupId g) {
  static const std::map<std::string, GenInfo> sl2z = {
      {"E2", {2, 0, [](const Rat& T) { return eisenstein(2, 1, T); }}},
      {"E4", {4, 0, [](const Rat& T) { return eisenstein(4, 1, T); }}},
      {"E6", {6, 0, [](const Rat& T) { return eisenstein(6, 1, T); }}},
      {"Delta", {12, 0, [](const Rat& T) { return eta_quotient({{1, 24}}, T); }}},
  };
  static const std::map<std::string, GenInfo> g2 = {
      {"E2", {2, 0, [](const Rat& T) { return eisenstein(2, 1, T); }}},
      {"E4", {4, 0, [](const Rat& T) { return eisenstein(4, 1, T); }}},
      {"E6", {6, 0, [](const Rat& T) { return eisenstein(6, 1, T); }}},
      {"Delta", {12, 0, [](const Rat& T) { return eta_quotient({{1, 24}}, T); }}},
      {"M2star", {2, 0, [](const Rat& T) { return phi_series(GroupId::G2plus, T); }}},
      {"M2",
       {2, 2,
        [](const Rat& T) { return eisenstein(2, 2, T).scaled(Rat(2)) - eisenstein(2, 1, T); }}},
      {"M4",
       {4, 0,
        [](const Rat& T) {
          return (eisenstein(4, 2, T).scaled(Rat(4)) + eisenstein(4, 1, T)).scaled(Rat(1, 5));
        }}},
      {"M4minus",
       {4, 2,
        [](const Rat& T) {
          return (eisenstein(4, 2, T).scaled(Rat(4)) - eisenstein(4, 1, T)).scaled(Rat(1, 3));
        }}},
      {"M6",
       {6, 0,
        [](const Rat& T) {
          return (eisenstein(6, 2, T).scaled(Rat(8)) + eisenstein(6, 1, T)).scaled(Rat(1, 9));
        }}},
      {"M8", {8, 0, [](const Rat& T) { return eta_quotient({{1, 8}, {2, 8}}, T); }}},
  };
  static const std::map<std::string, GenInfo> g3 = {
      {"E2", {2, 0, [](const Rat& T) { return eisenstein(2, 1, T); }}},
      {"E4", {4, 0, [](const Rat& T) { return eisenstein(4, 1, T); }}},
      {"E6", {6, 0, [](const Rat& T) { return eisenstein(6, 1, T); }}},
      {"Delta", {12, 0, [](const Rat& T) { return eta_quotient({{1, 24}}, T); }}},
      {"M2star", {2, 0, [](const Rat& T) { return phi_series(GroupId::G3plus, T); }}},
      {"M1", {1, 1, [](const Rat& T) { return theta_hexagonal(T); }}},
      {"M3",
       {3, 1,
        [](const Rat& T) {
          QSeries num = eisenstein(4, 3, T).scaled(Rat(9)) - eisenstein(4, 1, T);
          return num / theta_hexagonal(T).scaled(Rat(8));
        }}},
      {"M2minus",
       {2, 2,
        [](const Rat& T) {
          return (eisenstein(2, 3, T).scaled(Rat(3)) - eisenstein(2, 1, T)).scaled(Rat(1, 2));
        }}},
      {"M4plus",
       {4, 0,
        [](const Rat& T) {
          return (eisenstein(4, 3, T).scaled(Rat(9)) + eisenstein(4, 1, T)).scaled(Rat(1, 10));
        }}},
      {"M6minus", {6, 2, [](const Rat& T) { return eta_quotient({{1, 6}, {3, 6}}, T); }}},
  };
  switch (g) {
    case GroupId::SL2Z: return sl2z;
    case GroupId::G2plus: return g2;
    case GroupId::G3plus: return g3;
  }
  throw Error("bad group");
}

inline std::string resolve_alias(GroupId g, const std::string& name) {
  if (g == GroupId::G2plus) {
    if (name == "M2minus") return "M2";
    if (name == "M4plus") return "M4";
    if (name == "M6plus") return "M6";
    if (name == "M8plus") return "M8";
  }
  if (g == GroupId::G3plus) {
    if (name == "M2") return "M2minus";
    if (name == "M4") return "M4plus";
    if (name == "M6") return "M6minus";
  }
  return name;
}
}  // namespace detail

inline QSeries generator_series(GroupId g, const std::string& name, const Rat& order) {
  const auto& tab = detail::generator_table(g);
  auto it = tab.find(detail::resolve_alias(g, name));
  if (it == tab.end())
    throw UnknownGenerator("'" + name + "' on group " + group_name(g));
  return it->second.series(order);
}

inline std::pair<int, CharacterLabel> generator_weight_char(GroupId g, const std::string& name) {
  const auto& tab = detail::generator_table(g);
  auto it = tab.find(detail::resolve_alias(g, name));
  if (it == tab.end())
    throw UnknownGenerator("'" + name + "' on group " + group_name(g));
  return {it->second.weight, CharacterLabel{it->second.char_m}};
}

inline std::vector<std::string> generator_names(GroupId g) {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::generator_table(g)) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// Per-group constants: ring generators, Serre table, geometry, ell recipe.
// ---------------------------------------------------------------------------
struct GroupContext {
  GroupId id;
  int anomaly;  // the q-normalized weight-2 anomaly of phi: 12, 8, 6
  GenTable gens;
  WeightedPoly theta_gen0, theta_gen1;  // Serre derivative of each ring generator
  WeightedPoly m_form;                  // D_q(phi) - phi^2 / anomaly
  int genus, cusps;
  std::array<int, 2> elliptic_orders;   // rho1 has order 2; rho2 order in {3,4,6}
  // ell = -1 + c_inf*kinf + c_rho1*(krho1 - 1/2) + c_rho2*(krho2 - 1/2)
  //       + c_interior * sum_j (kappa_j - 1/2)
  int c_inf, c_rho1, c_rho2, c_interior;
  // named modular forms as polynomials in the ring generators
  std::map<std::string, WeightedPoly> named_polys;

  WeightedPoly gen(int which) const { return WeightedPoly::gen(&gens, which); }
  WeightedPoly named(const std::string& n) const {
    auto it = named_polys.find(n);
    if (it == named_polys.end()) throw UnknownGenerator(n + " as ring polynomial");
    return it->second;
  }

  // Point rules: gen1 vanishes at rho1, gen0 vanishes at rho2.
  PointRule rho1_rule() const { return PointRule{PointRule::kElliptic, 1, 0, ParamField()}; }
  PointRule rho2_rule() const { return PointRule{PointRule::kElliptic, 0, 0, ParamField()}; }
  // Interior relation gen1^2 = factor(t) * gen0^repl, from the vanishing of
  // the weight-graded relation polynomial at the point.
  PointRule interior_rule(const ParamField& t) const {
    switch (id) {
      case GroupId::SL2Z: return PointRule{PointRule::kInterior, 0, 3, t.inverse()};
      case GroupId::G2plus: return PointRule{PointRule::kInterior, 0, 4, t};
      case GroupId::G3plus: return PointRule{PointRule::kInterior, 0, 6, t.inverse()};
    }
    throw Error("bad group");
  }
};

inline const GroupContext& group_context(GroupId g) {
  static const GroupContext* sl2z = [] {
    auto* c = new GroupContext;
    c->id = GroupId::SL2Z;
    c->anomaly = 12;
    c->gens = GenTable{"e4", "e6", 4, 6};
    const GenTable* t = &c->gens;
    auto pf = [](long n, long d) { return ParamField(Rat(n, d)); };
    c->theta_gen0 = WeightedPoly::monomial(t, {0, 1}, pf(-1, 3));   // -e6/3
    c->theta_gen1 = WeightedPoly::monomial(t, {2, 0}, pf(-1, 2));   // -e4^2/2
    c->m_form = WeightedPoly::monomial(t, {1, 0}, pf(-1, 12));      // -e4/12
    c->genus = 0;
    c->cusps = 1;
    c->elliptic_orders = {2, 3};
    c->c_inf = 12;
    c->c_rho1 = 6;
    c->c_rho2 = 4;
    c->c_interior = 12;
    c->named_polys["E4"] = WeightedPoly::gen(t, 0);
    c->named_polys["E6"] = WeightedPoly::gen(t, 1);
    c->named_polys["Delta"] =
        (WeightedPoly::gen(t, 0).pow(3) - WeightedPoly::gen(t, 1).pow(2)).scaled(pf(1, 1728));
    return c;
  }();
  static const GroupContext* g2 = [] {
    auto* c = new GroupContext;
    c->id = GroupId::G2plus;
    c->anomaly = 8;
    c->gens = GenTable{"m2", "m4m", 2, 4};
    const GenTable* t = &c->gens;
    auto pf = [](long n, long d) { return ParamField(Rat(n, d)); };
    c->theta_gen0 = WeightedPoly::monomial(t, {0, 1}, pf(-1, 4));   // -m4m/4
    c->theta_gen1 = WeightedPoly::monomial(t, {3, 0}, pf(-1, 2));   // -m2^3/2
    c->m_form = WeightedPoly::monomial(t, {2, 0}, pf(-1, 8));       // -m2^2/8
    c->genus = 0;
    c->cusps = 1;
    c->elliptic_orders = {2, 4};
    c->c_inf = 8;
    c->c_rho1 = 4;
    c->c_rho2 = 2;
    c->c_interior = 8;
    c->named_polys["M2"] = WeightedPoly::gen(t, 0);
    c->named_polys["M2minus"] = WeightedPoly::gen(t, 0);
    c->named_polys["M4minus"] = WeightedPoly::gen(t, 1);
    c->named_polys["M4"] = WeightedPoly::gen(t, 0).pow(2);
    c->named_polys["M6"] = WeightedPoly::gen(t, 0) * WeightedPoly::gen(t, 1);
    c->named_polys["M8"] =
        (WeightedPoly::gen(t, 0).pow(4) - WeightedPoly::gen(t, 1).pow(2)).scaled(pf(1, 256));
    return c;
  }();
  static const GroupContext* g3 = [] {
    auto* c = new GroupContext;
    c->id = GroupId::G3plus;
    c->anomaly = 6;
    c->gens = GenTable{"m1", "m3", 1, 3};
    const GenTable* t = &c->gens;
    auto pf = [](long n, long d) { return ParamField(Rat(n, d)); };
    c->theta_gen0 = WeightedPoly::monomial(t, {0, 1}, pf(-1, 6));   // -m3/6
    c->theta_gen1 = WeightedPoly::monomial(t, {5, 0}, pf(-1, 2));   // -m1^5/2
    c->m_form = WeightedPoly::monomial(t, {4, 0}, pf(-1, 6));       // -m1^4/6
    c->genus = 0;
    c->cusps = 1;
    c->elliptic_orders = {2, 6};
    c->c_inf = 6;
    c->c_rho1 = 3;
    c->c_rho2 = 1;
    c->c_interior = 6;
    c->named_polys["M1"] = WeightedPoly::gen(t, 0);
    c->named_polys["M3"] = WeightedPoly::gen(t, 1);
    c->named_polys["M2minus"] = WeightedPoly::gen(t, 0).pow(2);
    c->named_polys["M4plus"] = WeightedPoly::gen(t, 0).pow(4);
    c->named_polys["M6minus"] =
        (WeightedPoly::gen(t, 0).pow(6) - WeightedPoly::gen(t, 1).pow(2)).scaled(pf(1, 108));
    return c;
  }();
  switch (g) {
    case GroupId::SL2Z: return *sl2z;
    case GroupId::G2plus: return *g2;
    case GroupId::G3plus: return *g3;
  }
  throw Error("bad group");
}

// q-expansion of the ring generators backing the symbolic tables.
inline QSeries ring_gen_series(GroupId g, int which, const Rat& order) {
  switch (g) {
    case GroupId::SL2Z: return generator_series(g, which == 0 ? "E4" : "E6", order);
    case GroupId::G2plus: return generator_series(g, which == 0 ? "M2" : "M4minus", order);
    case GroupId::G3plus: return generator_series(g, which == 0 ? "M1" : "M3", order);
  }
  throw Error("bad group");
}

// Evaluates a rational-coefficient generator polynomial as a q-series.
inline QSeries weighted_poly_series(const GroupContext& ctx, const WeightedPoly& p,
                                    const Rat& order) {
  QSeries g0 = ring_gen_series(ctx.id, 0, order);
  QSeries g1 = ring_gen_series(ctx.id, 1, order);
  QSeries acc = QSeries::zero(order);
  for (const auto& [e, c] : p.terms())
    acc = acc + (pow_int(g0, e[0]) * pow_int(g1, e[1])).scaled(c.to_rat());
  return acc;
}

// ---------------------------------------------------------------------------
// Dimensions
// ---------------------------------------------------------------------------
namespace detail {
// dim M_k for even k >= 0 on a genus-g curve with c cusps and elliptic
// orders es (trivial character).
inline long dim_curve(long k, long g, long c, std::initializer_list<long> es) {
  if (k < 0 || k % 2 != 0) return 0;
  if (k == 0) return 1;
  long d = (k - 1) * (g - 1) + c * k / 2;
  for (long e : es) d += (k / 2 * (e - 1)) / e;
  return d;
}
}  // namespace detail

// Dimension of the modular space (depth 0) for the given label.
inline long dim_modular(GroupId g, long k, CharacterLabel ch) {
  int m = ((ch.m % 4) + 4) % 4;
  if (k < 0) return 0;
  switch (g) {
    case GroupId::SL2Z:
      if (m != 0) throw UnsupportedSpace("sl2z has only the trivial character");
      return detail::dim_curve(k, 0, 1, {2, 3});
    case GroupId::G2plus: {
      if (m != 0 && m != 2) throw UnsupportedSpace("g2plus characters are +/-");
      if (k % 2 != 0) return 0;
      long plus = detail::dim_curve(k, 0, 1, {2, 4});
      if (m == 0) return plus;
      return detail::dim_curve(k, 0, 2, {2}) - plus;  // Gamma0(2) minus the +-part
    }
    case GroupId::G3plus: {
      if ((k % 2 + 2) % 2 != m % 2)
        throw UnsupportedSpace("character parity must match weight parity on g3plus");
      if (k % 2 == 0) {
        long plus = detail::dim_curve(k, 0, 1, {2, 6});
        if (m == 0) return plus;
        return detail::dim_curve(k, 0, 2, {3}) - plus;  // Gamma0(3) minus the +-part
      }
      // odd weight: reduce along multiplication by the weight-1 generator
      if (k % 3 != 0) {
        if (m == 1) return dim_modular(g, k - 1, CharacterLabel{0});
        return dim_modular(g, k - 1, CharacterLabel{2});
      }
      if (m == 1) return dim_modular(g, k + 1, CharacterLabel{2});
      return dim_modular(g, k + 1, CharacterLabel{0});
    }
  }
  throw Error("bad group");
}

// Dimension of M_k on the auxiliary ambient groups (used by tests).
inline long dim_ambient(const std::string& label, long k) {
  if (label == "gamma0_2") return detail::dim_curve(k, 0, 2, {2});
  if (label == "gamma0_3") return detail::dim_curve(k, 0, 2, {3});
  if (label == "gamma1_3") return k < 0 ? 0 : 1 + k / 3;
  throw UnsupportedSpace("ambient label " + label);
}

inline long dims(const SpaceSpec& s) {
  if (s.depth_bound == 0) return dim_modular(s.group, s.weight, s.character);
  if (s.depth_bound == 1)
    return dim_modular(s.group, s.weight, s.character) +
           dim_modular(s.group, s.weight - 2, s.character);
  throw UnsupportedSpace("depth bound must be 0 or 1");
}

// ---------------------------------------------------------------------------
// Echelon bases and membership
// ---------------------------------------------------------------------------

// Exponent pairs (a, b) of the generator monomials spanning the space.
inline std::vector<std::pair<int, int>> basis_monomials(GroupId g, long k, CharacterLabel ch) {
  int m = ((ch.m % 4) + 4) % 4;
  std::vector<std::pair<int, int>> out;
  if (k < 0) return out;
  switch (g) {
    case GroupId::SL2Z:
      for (int b = 0; 6 * b <= k; ++b)
        if ((k - 6 * b) % 4 == 0) out.emplace_back(static_cast<int>((k - 6 * b) / 4), b);
      break;
    case GroupId::G2plus:
      for (int b = 0; 4 * b <= k; ++b) {
        long rem = k - 4 * b;
        if (rem % 2) continue;
        int a = static_cast<int>(rem / 2);
        int eps = (a + b) % 2 ? 2 : 0;
        if (eps == m) out.emplace_back(a, b);
      }
      break;
    case GroupId::G3plus:
      for (int b = 0; 3 * b <= k; ++b) {
        int a = static_cast<int>(k - 3 * b);
        if (((a + b) % 4) == m) out.emplace_back(a, b);
      }
      break;
  }
  return out;
}

// q-expansion of the (a, b) generator monomial.
inline QSeries monomial_series(GroupId g, int a, int b, const Rat& order) {
  switch (g) {
    case GroupId::SL2Z:
      return pow_int(eisenstein(4, 1, order), a) * pow_int(eisenstein(6, 1, order), b);
    case GroupId::G2plus:
      return pow_int(generator_series(g, "M2", order), a) *
             pow_int(generator_series(g, "M4minus", order), b);
    case GroupId::G3plus:
      return pow_int(generator_series(g, "M1", order), a) *
             pow_int(generator_series(g, "M3", order), b);
  }
  throw Error("bad group");
}

// Conservative extra coefficients checked by membership-style solves.
inline constexpr long kMembershipMargin = 10;

// Reduced q-echelon basis: element i has leading term q^{v_i}, leading
// coefficient 1, v_0 < v_1 < ..., and vanishes at the other pivots.
inline std::vector<QSeries> basis(const SpaceSpec& s, const Rat& order) {
  if (s.depth_bound != 0) throw UnsupportedSpace("echelon basis is for modular spaces");
  long expected = dims(s);
  if (order < Rat(expected + kMembershipMargin))
    throw InsufficientPrecision("basis order must cover dims + margin");
  auto monos = basis_monomials(s.group, s.weight, s.character);
  if (static_cast<long>(monos.size()) != expected)
    throw Error("monomial count disagrees with the dimension formula");
  std::vector<QSeries> rows;
  rows.reserve(monos.size());
  for (auto [a, b] : monos) rows.push_back(monomial_series(s.group, a, b, order));
  if (rows.empty()) return rows;

  long len = order.floor_long();
  Mat m(rows.size(), Vec(static_cast<size_t>(len), Rat(0)));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].grid_den() != 1) throw Error("basis monomial off the integer grid");
    for (const auto& [n, c] : rows[i].raw_coeffs())
      if (n >= 0 && n < len) m[i][static_cast<size_t>(n)] = c;
  }
  rref(m);
  std::vector<QSeries> out;
  for (const auto& row : m) {
    std::vector<std::pair<long, Rat>> terms;
    for (long j = 0; j < len; ++j)
      if (!row[static_cast<size_t>(j)].is_zero()) terms.emplace_back(j, row[static_cast<size_t>(j)]);
    if (terms.empty()) continue;
    out.push_back(QSeries::from_terms(1, order, std::move(terms)));
  }
  if (static_cast<long>(out.size()) != expected)
    throw InsufficientPrecision("echelonization lost rank; raise the order");
  for (size_t i = 1; i < out.size(); ++i)
    if (!(*out[i - 1].valuation() < *out[i].valuation()))
      throw Error("echelon basis valuations not strictly increasing");
  return out;
}

// Exact coordinates of f in the echelon basis of the space, or nullopt if f
// provably fails to lie in it on the available coefficients.
inline std::optional<std::vector<Rat>> membership(const QSeries& f, const SpaceSpec& s,
                                                  const Rat& order) {
  long d = dims(s);
  Rat avail = f.trunc() < order ? f.trunc() : order;
  if (avail < Rat(d + kMembershipMargin))
    throw InsufficientPrecision("membership solve needs order >= dims + margin");
  std::vector<QSeries> bas = basis(s, avail);
  std::vector<Rat> coords(bas.size(), Rat(0));
  QSeries rem = f.truncated(avail);
  for (size_t i = 0; i < bas.size(); ++i) {
    Rat v = *bas[i].valuation();
    coords[i] = rem.coeff_at(v);
    if (!coords[i].is_zero()) rem = rem - bas[i].scaled(coords[i]);
  }
  if (!rem.is_zero_series()) return std::nullopt;
  return coords;
}

// Least exponent with nonzero coefficient; nullopt for the zero series.
inline std::optional<Rat> v_infinity(const QSeries& f) { return f.valuation(); }

}  // namespace modeq

#endif
