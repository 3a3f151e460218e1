#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modeq/local.hpp"

using namespace modeq;

namespace {

ParamField pf(long n, long d = 1) { return ParamField(Rat(n, d)); }

WeightedPoly gen(const GroupContext& ctx, int which) { return WeightedPoly::gen(&ctx.gens, which); }

Rat factorial(int n) {
  Rat f(1);
  for (int i = 2; i <= n; ++i) f *= Rat(i);
  return f;
}

}  // namespace

TEST_CASE("iterated serre derivative") {
  const GroupContext& ctx = group_context(GroupId::SL2Z);
  WeightedPoly e4 = gen(ctx, 0), e6 = gen(ctx, 1);
  CHECK(theta_iter(ctx, e4, 0) == e4);
  CHECK(theta_iter(ctx, e4, 1) == e6.scaled(pf(-1, 3)));
  // theta(theta E4) + (4/12) M E4 = e4^2/6 - e4^2/36
  CHECK(theta_iter(ctx, e4, 2) == e4.pow(2).scaled(pf(5, 36)));
  CHECK_THROWS_AS(theta_iter(ctx, e4 + e6, 1), InhomogeneousInput);

  // The local expansion is multiplicative, so the iterates of a product are
  // the convolution of the iterates.  This pins the correction coefficient.
  for (GroupId g : {GroupId::SL2Z, GroupId::G2plus, GroupId::G3plus}) {
    const GroupContext& c = group_context(g);
    WeightedPoly a = gen(c, 0), b = gen(c, 1), prod = a * b;
    auto ta = theta_tower(c, a, 4);
    auto tb = theta_tower(c, b, 4);
    auto tp = theta_tower(c, prod, 4);
    for (int n = 0; n <= 4; ++n) {
      // theta^[n](ab)/n! = sum_{r+s=n} theta^[r]a/r! theta^[s]b/s!
      WeightedPoly conv(&c.gens);
      for (int r = 0; r <= n; ++r)
        conv = conv + (ta[static_cast<size_t>(r)] * tb[static_cast<size_t>(n - r)])
                          .scaled(ParamField(Rat(1) / (factorial(r) * factorial(n - r))));
      CHECK(tp[static_cast<size_t>(n)].scaled(ParamField(Rat(1) / factorial(n))) == conv);
    }
  }
}

TEST_CASE("jets at elliptic points") {
  const GroupContext& ctx = group_context(GroupId::SL2Z);
  Jet j = jet_of_poly(ctx, gen(ctx, 0), ctx.rho1_rule(), 6);  // E4 at the order-2 point
  CHECK(j.at(0) == LocalValue(gen(ctx, 0), ctx.rho1_rule()));
  CHECK(j.at(1).is_zero());
  CHECK(j.at(3).is_zero());
  CHECK(j.at(5).is_zero());
  CHECK_FALSE(j.at(2).is_zero());

  Jet c = jet_of_poly(ctx, WeightedPoly::constant(&ctx.gens, pf(5)), ctx.rho2_rule(), 4);
  CHECK(c.at(0) == LocalValue::from_rat(&ctx.gens, Rat(5), ctx.rho2_rule()));
  for (int n = 1; n <= 4; ++n) CHECK(c.at(n).is_zero());
}

TEST_CASE("jets at an interior point") {
  auto names = make_params({"t1"});
  ParamField t1 = ParamField::var(names, 0);
  const GroupContext& ctx = group_context(GroupId::SL2Z);
  PointRule rule = ctx.interior_rule(t1);
  WeightedPoly f1 = gen(ctx, 0).pow(3) - gen(ctx, 1).pow(2).scaled(t1);
  Jet j = jet_of_poly(ctx, f1, rule, 4);
  CHECK(j.at(0).is_zero());
  LocalValue expect(gen(ctx, 0).pow(2) * gen(ctx, 1) * WeightedPoly::constant(&ctx.gens, t1 - pf(1)),
                    rule);
  CHECK(j.at(1) == expect);

  // jet division is consistent: F * (1/F) = 1
  Jet inv = jet_inverse(j);
  Jet prod = jet_mul(j, inv);
  CHECK(prod.at(0) == LocalValue::from_rat(&ctx.gens, Rat(1), rule));
  for (int n = 1; n <= prod.nmax; ++n) CHECK(prod.at(n).is_zero());
}

TEST_CASE("indicial data of the worked equations") {
  // t = 864 gives local exponents -1, 2 at the order-2 point
  QFamily fam;
  fam.group = GroupId::SL2Z;
  fam.r = pf(1, 4);
  fam.s = pf(0);
  fam.t = pf(864);
  const GroupContext& ctx = group_context(GroupId::SL2Z);
  Jet j = jet_of_family(fam, ctx.rho1_rule(), 3);
  IndicialRoots ir = indicial(j);
  CHECK(ir.a_minus2 == pf(2));
  REQUIRE(ir.roots.has_value());
  CHECK(ir.roots->first == Rat(-1));
  CHECK(ir.roots->second == Rat(2));
  CHECK(*ir.kappa == Rat(3, 2));

  // t = 324: a_{-2} = 3/4, local exponents -1/2 and 3/2
  fam.t = pf(324);
  IndicialRoots ir2 = indicial(jet_of_family(fam, ctx.rho1_rule(), 3));
  CHECK(ir2.a_minus2 == pf(3, 4));
  CHECK(ir2.roots->first == Rat(-1, 2));
  CHECK(ir2.roots->second == Rat(3, 2));

  // a holomorphic family has exponents 0 and 1
  fam.t = pf(0);
  IndicialRoots ir3 = indicial(jet_of_family(fam, ctx.rho1_rule(), 3));
  CHECK(ir3.a_minus2 == pf(0));
  CHECK(ir3.roots->first == Rat(0));
  CHECK(ir3.roots->second == Rat(1));
}

TEST_CASE("indicial closed forms, fully symbolic") {
  auto names = make_params({"r", "s", "t", "r1", "r2", "t1"});
  auto var = [&](int i) { return ParamField::var(names, i); };
  struct Expect {
    GroupId g;
    Rat c_rho1, c_rho2, c_int;  // a_{-2} = t/c_rho1, -s/c_rho2, r1/(c_int * t1)
  };
  std::vector<Expect> cases = {{GroupId::SL2Z, Rat(432), Rat(192), Rat(1728) * Rat(1728)},
                               {GroupId::G2plus, Rat(64), Rat(16), Rat(256) * Rat(256)},
                               {GroupId::G3plus, Rat(27), Rat(3), Rat(108) * Rat(108)}};
  for (const auto& e : cases) {
    QFamily fam;
    fam.group = e.g;
    fam.r = var(0);
    fam.s = var(1);
    fam.t = var(2);
    fam.poles.push_back({var(5), var(3), var(4)});
    const GroupContext& ctx = group_context(e.g);
    IndicialRoots at1 = indicial(jet_of_family(fam, ctx.rho1_rule(), 1));
    CHECK(at1.a_minus2 == var(2) / ParamField(e.c_rho1));
    IndicialRoots at2 = indicial(jet_of_family(fam, ctx.rho2_rule(), 1));
    CHECK(at2.a_minus2 == -var(1) / ParamField(e.c_rho2));
    IndicialRoots ati = indicial(jet_of_family(fam, ctx.interior_rule(var(5)), 1));
    CHECK(ati.a_minus2 == var(3) / (ParamField(e.c_int) * var(5)));
  }
}

TEST_CASE("elliptic points are automatically apparent") {
  // with the matching indicial parameter pinned, the obstruction vanishes
  // identically in the remaining parameters whenever e does not divide 2k
  auto names = make_params({"r", "x"});
  std::vector<Rat> kappas = {Rat(1, 2), Rat(1), Rat(3, 2), Rat(2), Rat(5, 2)};
  for (GroupId g : {GroupId::SL2Z, GroupId::G2plus, GroupId::G3plus}) {
    const GroupContext& ctx = group_context(g);
    for (int which : {0, 1}) {
      int e = ctx.elliptic_orders[static_cast<size_t>(which)];
      for (const Rat& kappa : kappas) {
        long two_kappa = (kappa + kappa).num_long();
        if (two_kappa % e == 0) continue;
        QFamily fam;
        fam.group = g;
        fam.r = ParamField::var(names, 0);
        if (which == 0) {
          fam.t = ParamField(family_t_param(g, kappa));
          fam.s = ParamField::var(names, 1);
        } else {
          fam.s = ParamField(family_s_param(g, kappa));
          fam.t = ParamField::var(names, 1);
        }
        PointRule rule = which == 0 ? ctx.rho1_rule() : ctx.rho2_rule();
        Jet j = jet_of_family(fam, rule, static_cast<int>(two_kappa));
        ApparencyReport rep = apparent_obstruction(j, kappa);
        CHECK(rep.apparent);
        CHECK(rep.obstruction.is_zero());
      }
    }
  }
}

TEST_CASE("interior obstruction polynomial") {
  // kappa_1 = 1, t_1 = 3/7: degree 2 with roots -4608/7 and -576
  SingularitySpec spec{Rat(0), Rat(1, 2), Rat(1, 2), {{Rat(3, 7), Rat(1)}}};
  ConstructQResult res = construct_Q(GroupId::SL2Z, spec);
  CHECK(res.solution_count == 2);
  REQUIRE(res.obstruction_poly.size() == 3);
  CHECK_FALSE(res.obstruction_poly[2].is_zero());
  REQUIRE(res.r2_roots.size() == 2);
  CHECK(res.r2_roots[0] == Rat(-4608, 7));
  CHECK(res.r2_roots[1] == Rat(-576));
  REQUIRE(res.solutions.size() == 2);

  // the leading coefficient does not involve the holomorphic parameter r
  auto names = make_params({"r", "r2"});
  QFamily fam;
  fam.group = GroupId::SL2Z;
  fam.r = ParamField::var(names, 0);
  fam.s = pf(0);
  fam.t = pf(0);
  fam.poles.push_back({pf(3, 7), ParamField(family_r1_param(GroupId::SL2Z, Rat(3, 7), Rat(1))),
                       ParamField::var(names, 1)});
  const GroupContext& ctx = group_context(GroupId::SL2Z);
  Jet j = jet_of_family(fam, ctx.interior_rule(pf(3, 7)), 2);
  ApparencyReport rep = apparent_obstruction(j, Rat(1));
  ParamField obs = rep.obstruction.scalar_part();
  CHECK(obs.num().degree_in(1) == 2);
  ParamPoly lead = obs.num().coeff_in(1, 2);
  CHECK(lead.degree_in(0) == 0);  // no r
  CHECK_FALSE(lead.is_zero());

  // kappa = 1/2 pole: obstruction is linear in r2 (holomorphy obstruction)
  QFamily fam2;
  fam2.group = GroupId::SL2Z;
  fam2.r = pf(0);
  fam2.s = pf(0);
  fam2.t = pf(0);
  fam2.poles.push_back({pf(3, 7), pf(0), ParamField::var(names, 1)});
  Jet j2 = jet_of_family(fam2, ctx.interior_rule(pf(3, 7)), 1);
  ApparencyReport rep2 = apparent_obstruction(j2, Rat(1, 2));
  ParamField obs2 = rep2.obstruction.scalar_part();
  CHECK(obs2.num().degree_in(1) == 1);
}

TEST_CASE("construct_Q without interior points") {
  // level 2 with kappa_rho2 = 3/2 pins s = -32, t = 0
  for (long k : {0L, 1L, 2L}) {
    SingularitySpec spec{Rat(k, 2), Rat(1, 2), Rat(3, 2), {}};
    ConstructQResult res = construct_Q(GroupId::G2plus, spec);
    CHECK(res.solution_count == 1);
    REQUIRE(res.solutions.size() == 1);
    QSeries q = qfamily_to_series(res.solutions[0], Rat(15));
    QSeries m4 = generator_series(GroupId::G2plus, "M4", Rat(15));
    QSeries m8 = generator_series(GroupId::G2plus, "M8", Rat(15));
    QSeries expect = m4.scaled(Rat(k * k, 4)) - (m8 / m4).scaled(Rat(32));
    CHECK(agree_to_common_trunc(q, expect));
  }
  CHECK_THROWS_AS(construct_Q(GroupId::SL2Z, {Rat(0), Rat(1, 2), Rat(1, 2),
                                              {{Rat(3, 7), Rat(1)}, {Rat(4, 7), Rat(1)}}}),
                  UnsupportedArity);
  CHECK_THROWS_AS(construct_Q(GroupId::SL2Z, {Rat(0), Rat(1, 2), Rat(1, 2), {{Rat(1), Rat(1)}}}),
                  DegenerateParameter);
}

TEST_CASE("indicial inversion round trip") {
  struct Case {
    GroupId g;
    SingularitySpec spec;
  };
  std::vector<Case> cases = {
      {GroupId::SL2Z, {Rat(1, 2), Rat(3, 2), Rat(1, 2), {}}},
      {GroupId::SL2Z, {Rat(1), Rat(1, 2), Rat(5, 2), {{Rat(3, 7), Rat(1)}}}},
      {GroupId::G2plus, {Rat(1), Rat(3, 2), Rat(1, 2), {{Rat(2, 5), Rat(1)}}}},
      {GroupId::G3plus, {Rat(1, 2), Rat(1, 2), Rat(5, 2), {}}},
      {GroupId::G3plus, {Rat(0), Rat(3, 2), Rat(1, 2), {{Rat(5, 3), Rat(1)}}}},
  };
  for (const auto& c : cases) {
    ConstructQResult res = construct_Q(c.g, c.spec);
    const GroupContext& ctx = group_context(c.g);
    const QFamily& fam = res.solutions.empty() ? res.family : res.solutions[0];
    IndicialRoots at1 = indicial(jet_of_family(fam, ctx.rho1_rule(), 1));
    REQUIRE(at1.kappa.has_value());
    CHECK(*at1.kappa == c.spec.kappa_rho1);
    IndicialRoots at2 = indicial(jet_of_family(fam, ctx.rho2_rule(), 1));
    REQUIRE(at2.kappa.has_value());
    CHECK(*at2.kappa == c.spec.kappa_rho2);
    for (const auto& p : c.spec.interior) {
      IndicialRoots ati =
          indicial(jet_of_family(fam, ctx.interior_rule(ParamField(p.t)), 1));
      REQUIRE(ati.kappa.has_value());
      CHECK(*ati.kappa == p.kappa);
    }
  }
}

TEST_CASE("the depth-1 pencil matches its constructed family") {
  // f = E2 E4 + a E6 gives Q with r1 = (3/4) t1 1728^2 and
  // r2 = -144 (1+31a)/(1+6a) at t1 = (4a-a^2)/(1+6a); checked per value of a
  for (Rat a : {Rat(1), Rat(2), Rat(-1, 5)}) {
    Rat t1 = (Rat(4) * a - a * a) / (Rat(1) + Rat(6) * a);
    Rat r1 = family_r1_param(GroupId::SL2Z, t1, Rat(1));
    Rat r2 = Rat(-144) * (Rat(1) + Rat(31) * a) / (Rat(1) + Rat(6) * a);
    QFamily fam;
    fam.group = GroupId::SL2Z;
    fam.r = pf(0);
    fam.s = pf(0);
    fam.t = pf(0);
    fam.poles.push_back({ParamField(t1), ParamField(r1), ParamField(r2)});
    QSeries q_fam = qfamily_to_series(fam, Rat(16));

    const Rat T(24);
    QSeries e2 = generator_series(GroupId::SL2Z, "E2", T);
    QSeries e4 = generator_series(GroupId::SL2Z, "E4", T);
    QSeries e6 = generator_series(GroupId::SL2Z, "E6", T);
    QSeries f = e2 * e4 + e6.scaled(a);
    Depth1Form d = depth1_decompose(f, GroupId::SL2Z, 6, {0}, T);
    auto [q_mode, g2] = quasiform_to_mode(d);
    CHECK(agree_to_common_trunc(q_fam, q_mode));

    // and the apparentness obstruction vanishes on the family
    const GroupContext& ctx = group_context(GroupId::SL2Z);
    Jet j = jet_of_family(fam, ctx.interior_rule(ParamField(t1)), 2);
    ApparencyReport rep = apparent_obstruction(j, Rat(1));
    CHECK(rep.apparent);
  }

  // the same identity with the pencil parameter kept symbolic
  auto names = make_params({"a"});
  ParamField a = ParamField::var(names, 0);
  ParamField t1 = (ParamField(Rat(4)) * a - a * a) / (ParamField(Rat(1)) + ParamField(Rat(6)) * a);
  ParamField r1 = ParamField(Rat(3, 4) * Rat(1728) * Rat(1728)) * t1;
  ParamField r2 = ParamField(Rat(-144)) * (ParamField(Rat(1)) + ParamField(Rat(31)) * a) /
                  (ParamField(Rat(1)) + ParamField(Rat(6)) * a);
  QFamily fam;
  fam.group = GroupId::SL2Z;
  fam.r = pf(0);
  fam.s = pf(0);
  fam.t = pf(0);
  fam.poles.push_back({t1, r1, r2});
  const GroupContext& ctx = group_context(GroupId::SL2Z);
  Jet j = jet_of_family(fam, ctx.interior_rule(t1), 2);
  ApparencyReport rep = apparent_obstruction(j, Rat(1));
  CHECK(rep.apparent);
}

TEST_CASE("parity of jet coefficients at elliptic points") {
  struct Law {
    GroupId g;
    std::string name;
    int point;  // 0: rho1, 1: rho2
    int residue, modulus;
  };
  std::vector<Law> laws = {
      {GroupId::SL2Z, "E4", 0, 0, 2},      {GroupId::SL2Z, "E6", 0, 1, 2},
      {GroupId::SL2Z, "Delta", 0, 0, 2},   {GroupId::SL2Z, "E4", 1, 1, 3},
      {GroupId::SL2Z, "E6", 1, 0, 3},      {GroupId::SL2Z, "Delta", 1, 0, 3},
      {GroupId::G2plus, "M2", 0, 0, 2},    {GroupId::G2plus, "M4minus", 0, 1, 2},
      {GroupId::G2plus, "M4", 0, 0, 2},    {GroupId::G2plus, "M6", 0, 1, 2},
      {GroupId::G2plus, "M8", 0, 0, 2},    {GroupId::G2plus, "M2", 1, 1, 4},
      {GroupId::G2plus, "M4minus", 1, 0, 4}, {GroupId::G2plus, "M4", 1, 2, 4},
      {GroupId::G2plus, "M6", 1, 1, 4},    {GroupId::G2plus, "M8", 1, 0, 4},
      {GroupId::G3plus, "M1", 0, 0, 2},    {GroupId::G3plus, "M3", 0, 1, 2},
      {GroupId::G3plus, "M4plus", 0, 0, 2}, {GroupId::G3plus, "M6minus", 0, 0, 2},
      {GroupId::G3plus, "M1", 1, 1, 6},    {GroupId::G3plus, "M3", 1, 0, 6},
      {GroupId::G3plus, "M4plus", 1, 4, 6}, {GroupId::G3plus, "M6minus", 1, 0, 6},
      {GroupId::G3plus, "M2minus", 1, 2, 6},
  };
  for (const auto& law : laws) {
    const GroupContext& ctx = group_context(law.g);
    PointRule rule = law.point == 0 ? ctx.rho1_rule() : ctx.rho2_rule();
    Jet j = jet_of_poly(ctx, ctx.named(law.name), rule, 8);
    bool some_nonzero = false;
    for (int n = 0; n <= 8; ++n) {
      if (n % law.modulus != law.residue) {
        CHECK(j.at(n).is_zero());
      } else if (!j.at(n).is_zero()) {
        some_nonzero = true;
      }
    }
    CHECK(some_nonzero);
  }
}
