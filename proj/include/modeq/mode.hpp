#ifndef MODEQ_MODE_HPP
#define MODEQ_MODE_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modeq/errors.hpp"
#include "modeq/groups.hpp"
#include "modeq/qseries.hpp"
#include "modeq/quasi.hpp"

namespace modeq {

// Data of a second-order equation (D_q)^2 y = Q y under condition (H):
// exponent kappa_inf at the cusp, 1/2 +- kappa at the two elliptic points
// and at interior singular points.  Interior points are identified by the
// value t of the group's hauptmodul-style relation parameter.
struct InteriorPoint {
  Rat t;      // relation-parameter value, never 0 or 1
  Rat kappa;  // in (1/2) N
};

struct SingularitySpec {
  Rat kappa_inf;   // in (1/2) Z, >= 0
  Rat kappa_rho1;  // at the order-2 elliptic point
  Rat kappa_rho2;  // at the elliptic point of order 3, 4 or 6
  std::vector<InteriorPoint> interior;
};

inline bool is_half_integer(const Rat& r) { return (r + r).is_integer(); }

inline void validate_spec(GroupId g, const SingularitySpec& s) {
  const GroupContext& ctx = group_context(g);
  if (!is_half_integer(s.kappa_inf) || s.kappa_inf < Rat(0))
    throw ConditionHViolated("kappa_inf must be a nonnegative half-integer");
  auto check_elliptic = [&](const Rat& kappa, int order, const char* where) {
    if (!is_half_integer(kappa) || kappa < Rat(1, 2))
      throw ConditionHViolated(std::string(where) + ": kappa must be in (1/2)N");
    long two_kappa = (kappa + kappa).num_long();
    if (gcd_long(two_kappa, order) != 1)
      throw ConditionHViolated(std::string(where) + ": gcd(2 kappa, e) must be 1");
  };
  check_elliptic(s.kappa_rho1, ctx.elliptic_orders[0], "rho1");
  check_elliptic(s.kappa_rho2, ctx.elliptic_orders[1], "rho2");
  for (size_t i = 0; i < s.interior.size(); ++i) {
    const auto& p = s.interior[i];
    if (!is_half_integer(p.kappa) || p.kappa < Rat(1, 2))
      throw ConditionHViolated("interior kappa must be in (1/2)N");
    if (p.t == Rat(0) || p.t == Rat(1))
      throw ConditionHViolated("interior parameter t must avoid 0 and 1");
    for (size_t j = 0; j < i; ++j)
      if (s.interior[j].t == p.t) throw ConditionHViolated("interior parameters must be distinct");
  }
}

// ---------------------------------------------------------------------------
// Frobenius solution at the cusp
// ---------------------------------------------------------------------------
struct FrobeniusSolution {
  Rat exponent;
  QSeries series;       // q^kappa (1 + sum c_n q^n)
  Rat residual_order;   // (D_q)^2 y - Q y = O(q^residual_order), checked
};

inline FrobeniusSolution frobenius_plus(const QSeries& Q, const Rat& kappa, const Rat& order) {
  if (Q.grid_den() != 1 && !Q.is_zero_series())
    throw ExponentMismatch("Q must be holomorphic at the cusp on the integer grid");
  if (auto v = Q.valuation(); v && *v < Rat(0))
    throw ExponentMismatch("Q must be holomorphic at the cusp");
  if (Q.trunc() <= Rat(0)) throw InsufficientPrecision("Q carries no coefficients");
  if (Q.coeff_at(Rat(0)) != kappa * kappa)
    throw ExponentMismatch("Q(infinity) must equal kappa^2");
  // largest n with kappa + n < order and n < trunc(Q)
  Rat bound = order - kappa < Q.trunc() ? order - kappa : Q.trunc();
  std::vector<Rat> c{Rat(1)};
  std::vector<Rat> qc;  // Q_0 .. Q_m as far as known
  for (long m = 0; Rat(m) < Q.trunc(); ++m) qc.push_back(Q.coeff_at(Rat(m)));
  for (long n = 1; Rat(n) < bound; ++n) {
    Rat rhs(0);
    for (long j = 0; j < n; ++j) rhs += qc[static_cast<size_t>(n - j)] * c[static_cast<size_t>(j)];
    // ((kappa+n)^2 - kappa^2) c_n = rhs
    Rat denom = Rat(n) * (Rat(n) + kappa + kappa);
    c.push_back(rhs / denom);
  }
  long den = kappa.den_long();
  std::vector<std::pair<long, Rat>> terms;
  long k_num = (kappa * Rat(den)).num_long();
  for (size_t n = 0; n < c.size(); ++n)
    terms.emplace_back(k_num + static_cast<long>(n) * den, c[n]);
  QSeries y = QSeries::from_terms(den, kappa + Rat(static_cast<long>(c.size())), std::move(terms));
  // exact residual check
  QSeries resid = dq(dq(y)) - Q * y;
  if (!resid.is_zero_series())
    throw Error("Frobenius recursion left a nonzero residual, truncation bug");
  return FrobeniusSolution{kappa, std::move(y), resid.trunc()};
}

// Attempts the second power-series solution q^{-kappa}(1 + ...).  Returns
// true (not apparent) when kappa = 0 (double exponent) or the recursion hits
// a nonzero obstruction at step 2 kappa.
struct NonApparentReport {
  bool nonapparent = false;
  std::optional<Rat> obstruction;  // the blocking sum, when 2 kappa > 0
};

inline NonApparentReport nonapparent_infinity(const QSeries& Q, const Rat& kappa,
                                              const Rat& order) {
  if (!is_half_integer(kappa) || kappa < Rat(0))
    throw ExponentMismatch("kappa must be a nonnegative half-integer");
  if (Q.coeff_at(Rat(0)) != kappa * kappa)
    throw ExponentMismatch("Q(infinity) must equal kappa^2");
  if (kappa.is_zero()) return {true, std::nullopt};
  long two_kappa = (kappa + kappa).num_long();
  Rat avail = order < Q.trunc() ? order : Q.trunc();
  if (avail <= Rat(two_kappa))
    throw InsufficientPrecision("second-solution recursion needs order > 2 kappa");
  std::vector<Rat> c{Rat(1)};
  for (long n = 1; n < two_kappa; ++n) {
    Rat rhs(0);
    for (long j = 0; j < n; ++j) rhs += Q.coeff_at(Rat(n - j)) * c[static_cast<size_t>(j)];
    Rat denom = Rat(n) * (Rat(n) - kappa - kappa);  // never zero below 2 kappa
    c.push_back(rhs / denom);
  }
  Rat obstruction(0);
  for (long j = 0; j < two_kappa; ++j)
    obstruction += Q.coeff_at(Rat(two_kappa - j)) * c[static_cast<size_t>(j)];
  return {!obstruction.is_zero(), obstruction};
}

// ---------------------------------------------------------------------------
// The (ell, F, delta) recipe
// ---------------------------------------------------------------------------
struct EllFDelta {
  long ell = 0;
  QSeries F;
  CharacterLabel delta;
  std::string predicted_d;
};

namespace detail {
inline CharacterLabel delta_for_ell(GroupId g, long ell) {
  switch (g) {
    case GroupId::SL2Z:
      if (ell % 2 == 0) throw ConditionHViolated("ell must be odd on sl2z");
      return {0};
    case GroupId::G2plus: {
      long r = ((ell % 8) + 8) % 8;
      if (r == 1 || r == 7) return {0};
      if (r == 3 || r == 5) return {2};
      throw ConditionHViolated("ell must be odd on g2plus");
    }
    case GroupId::G3plus: {
      long r = ((ell % 12) + 12) % 12;
      if (r == 1 || r == 11) return {0};
      if (r == 2 || r == 4) return {1};
      if (r == 5 || r == 7) return {2};
      if (r == 8 || r == 10) return {3};
      throw ConditionHViolated("ell must be prime to 3 on g3plus");
    }
  }
  throw Error("bad group");
}

inline std::string predicted_d(GroupId g, CharacterLabel delta) {
  switch (g) {
    case GroupId::SL2Z: return "1";
    case GroupId::G2plus: return delta.m == 0 ? "sqrt(2)" : "-sqrt(2)";
    case GroupId::G3plus:
      switch (delta.m) {
        case 0: return "sqrt(3)";
        case 1: return "i*sqrt(3)";
        case 2: return "-sqrt(3)";
        default: return "-i*sqrt(3)";
      }
  }
  throw Error("bad group");
}

// Interior factor of F in the q-expansion recipe, normalized monic.  The
// spec of the point carries t in the local-relation convention; the recipe
// uses the complementary weight-graded combination, a scalar multiple of the
// relation polynomial, so the monic normalizations agree.
inline QSeries interior_F_factor(GroupId g, const Rat& t_local, const Rat& order) {
  QSeries f;
  switch (g) {
    case GroupId::SL2Z: {
      QSeries e4 = generator_series(g, "E4", order), e6 = generator_series(g, "E6", order);
      f = e6 * e6 - pow_int(e4, 3).scaled(Rat(1) / t_local);
      break;
    }
    case GroupId::G2plus: {
      QSeries m4 = generator_series(g, "M4", order), m8 = generator_series(g, "M8", order);
      f = m4 * m4 - m8.scaled(Rat(256) / (Rat(1) - t_local));
      break;
    }
    case GroupId::G3plus: {
      QSeries m2 = generator_series(g, "M2minus", order);
      QSeries m6 = generator_series(g, "M6minus", order);
      f = pow_int(m2, 3) - m6.scaled(Rat(108) * t_local / (t_local - Rat(1)));
      break;
    }
  }
  return f.scaled(Rat(1) / f.leading_coeff());
}
}  // namespace detail

inline EllFDelta ell_F_delta(GroupId g, const SingularitySpec& spec, const Rat& order) {
  validate_spec(g, spec);
  const GroupContext& ctx = group_context(g);
  Rat half(1, 2);
  Rat interior_sum(0);
  for (const auto& p : spec.interior) interior_sum += p.kappa - half;
  Rat ell_rat = Rat(-1) + Rat(ctx.c_inf) * spec.kappa_inf +
                Rat(ctx.c_rho1) * (spec.kappa_rho1 - half) +
                Rat(ctx.c_rho2) * (spec.kappa_rho2 - half) + Rat(ctx.c_interior) * interior_sum;
  if (!ell_rat.is_integer()) throw Error("ell formula produced a non-integer");
  long ell = ell_rat.num_long();

  auto pf = [&](const QSeries& base, const Rat& e) { return pow_frac(base, e); };
  QSeries F = QSeries::one(order);
  switch (g) {
    case GroupId::SL2Z: {
      F = pf(generator_series(g, "Delta", order), spec.kappa_inf) *
          pf(generator_series(g, "E6", order), spec.kappa_rho1 - half) *
          pf(generator_series(g, "E4", order), spec.kappa_rho2 - half);
      break;
    }
    case GroupId::G2plus: {
      QSeries m6_over_m2 =
          generator_series(g, "M6", order) / generator_series(g, "M2", order);
      F = pf(generator_series(g, "M8", order), spec.kappa_inf) *
          pf(m6_over_m2, spec.kappa_rho1 - half) *
          pf(generator_series(g, "M2", order), spec.kappa_rho2 - half);
      break;
    }
    case GroupId::G3plus: {
      F = pf(generator_series(g, "M6minus", order), spec.kappa_inf) *
          pf(generator_series(g, "M3", order), spec.kappa_rho1 - half) *
          pf(generator_series(g, "M1", order), spec.kappa_rho2 - half);
      break;
    }
  }
  for (const auto& p : spec.interior)
    F = F * pf(detail::interior_F_factor(g, p.t, order), p.kappa - half);
  CharacterLabel delta = detail::delta_for_ell(g, ell);
  return EllFDelta{ell, std::move(F), delta, detail::predicted_d(g, delta)};
}

// ---------------------------------------------------------------------------
// Certification:  F y_+ = phi g1 + g0 with memberships in weights ell -+ 1
// ---------------------------------------------------------------------------
struct ModeProblem {
  GroupId group = GroupId::SL2Z;
  QSeries Q;
  SingularitySpec spec;
};

struct Certificate {
  GroupId group;
  long ell;
  CharacterLabel delta;
  QSeries F;
  FrobeniusSolution y_plus;
  QSeries g1, g0;
  Vec coords1, coords0;
  std::string predicted_d;
  Rat order;
};

inline Rat default_certify_order(GroupId g, const SingularitySpec& spec) {
  EllFDelta efd = ell_F_delta(g, spec, Rat(6));
  long d1 = efd.ell >= 1 ? dims({g, static_cast<int>(efd.ell - 1), efd.delta, 0}) : 0;
  long d0 = efd.ell >= -1 ? dims({g, static_cast<int>(efd.ell + 1), efd.delta, 0}) : 0;
  Rat o = spec.kappa_inf + spec.kappa_inf + Rat(d1 + d0 + 10);
  return o < Rat(20) ? Rat(20) : o;
}

inline Certificate certify(const ModeProblem& problem, const Rat& order) {
  validate_spec(problem.group, problem.spec);
  const Rat& kinf = problem.spec.kappa_inf;
  if (problem.Q.coeff_at(Rat(0)) != kinf * kinf)
    throw ExponentMismatch("Q(infinity) must equal kappa_inf^2");
  // everything is expanded far enough that F y_+ carries `order` usable terms
  Rat work = order + kinf + kinf + Rat(2);
  EllFDelta efd = ell_F_delta(problem.group, problem.spec, work);
  FrobeniusSolution y = frobenius_plus(problem.Q.truncated(work), kinf, work);
  QSeries yhat = efd.F * y.series;
  if (yhat.grid_den() != 1)
    throw CertificationFailed("F y_+ does not live on the integer grid");
  Depth1Form d;
  try {
    d = depth1_decompose(yhat, problem.group, static_cast<int>(efd.ell + 1), efd.delta, order);
  } catch (const NotQuasimodular& e) {
    throw CertificationFailed(e.what());
  }
  return Certificate{problem.group,  efd.ell,
                     efd.delta,      std::move(efd.F),
                     std::move(y),   std::move(d.f1),
                     std::move(d.f0), std::move(d.coords1),
                     std::move(d.coords0), std::move(efd.predicted_d),
                     order};
}

// ---------------------------------------------------------------------------
// Forward direction: a depth-1 form determines a MODE
// ---------------------------------------------------------------------------

// Returns (Q, g2) where g2 = f / sqrt(W_f) up to a constant and
// Q = (D_q^2 g2)/g2.  The Wronskian is normalized monic before the square
// root; Q is insensitive to that scalar.
inline std::pair<QSeries, QSeries> quasiform_to_mode(const Depth1Form& d) {
  const GroupContext& ctx = group_context(d.group);
  QSeries w = wronskian_series(d.f, d.f1, ctx.anomaly);
  if (w.is_zero_series())
    throw WronskianNotSquareCompatible("Wronskian vanishes identically");
  QSeries w_monic = w.scaled(Rat(1) / w.leading_coeff());
  QSeries root = pow_frac(w_monic, Rat(1, 2));
  QSeries g2 = d.f / root;
  QSeries q = dq(dq(g2)) / g2;
  return {std::move(q), std::move(g2)};
}

}  // namespace modeq

#endif
