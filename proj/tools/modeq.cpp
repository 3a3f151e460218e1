// Command-line front end: exact q-expansions, modular-form spaces, and
// certification of second-order equations (D_q)^2 y = Q y on sl2z, g2plus,
// g3plus.
//
// Exit codes: 0 success; 1 golden-corpus mismatch; 2 usage error or unknown
// name; 3 violated exponent hypotheses; 4 other domain errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modeq/io.hpp"
#include "modeq/local.hpp"
#include "modeq/mode.hpp"
#include "modeq/quasi.hpp"

using namespace modeq;

namespace {

struct Output {
  std::string path;       // empty: stdout
  std::string format = "json";

  void emit(const Json& j, const std::string& pretty) const {
    std::string text = format == "pretty" ? pretty : j.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(path, std::ios::binary);
      out << text;
    }
  }
};

Rat parse_order_flag(const std::string& order_flag) {
  Rat order(20);
  if (!order_flag.empty())
    order = Rat::parse(order_flag);
  else if (const char* env = std::getenv("MODEQ_ORDER"))
    order = Rat::parse(env);
  if (order <= Rat(0)) throw ParseError("order must be positive");
  return order;
}

// Solver commands keep a floor on the working order; plain expansions may go
// lower.
void check_solver_order(const Rat& order) {
  if (order < Rat(4)) throw ParseError("order must be at least 4");
}

QSeries read_series(const std::string& path) {
  Json j;
  if (path == "-") {
    std::cin >> j;
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    in >> j;
  }
  return series_from_json(j);
}

SingularitySpec spec_from_flags(const std::string& kinf, const std::string& krho1,
                                const std::string& krho2, const std::vector<std::string>& tj,
                                const std::vector<std::string>& kj) {
  SingularitySpec s;
  s.kappa_inf = Rat::parse(kinf);
  s.kappa_rho1 = Rat::parse(krho1);
  s.kappa_rho2 = Rat::parse(krho2);
  if (tj.size() != kj.size()) throw ParseError("--tj and --kj must be paired");
  for (size_t i = 0; i < tj.size(); ++i)
    s.interior.push_back({Rat::parse(tj[i]), Rat::parse(kj[i])});
  return s;
}

Json spec_to_json(const SingularitySpec& s) {
  Json j;
  j["kinf"] = s.kappa_inf.str();
  j["krho1"] = s.kappa_rho1.str();
  j["krho2"] = s.kappa_rho2.str();
  Json pts = Json::array();
  for (const auto& p : s.interior) pts.push_back(Json{{"t", p.t.str()}, {"kappa", p.kappa.str()}});
  j["interior"] = pts;
  return j;
}

Json cert_to_json(const Certificate& c) {
  Json j;
  j["group"] = group_name(c.group);
  j["ell"] = c.ell;
  j["delta"] = character_name(c.group, c.delta);
  j["F"] = series_to_json(c.F);
  Json yp;
  yp["exponent"] = c.y_plus.exponent.str();
  yp["series"] = series_to_json(c.y_plus.series);
  yp["residual_order"] = c.y_plus.residual_order.str();
  j["y_plus"] = yp;
  j["g1"] = series_to_json(c.g1);
  j["g0"] = series_to_json(c.g0);
  Json coords;
  Json c1 = Json::array(), c0 = Json::array();
  for (const auto& v : c.coords1) c1.push_back(v.str());
  for (const auto& v : c.coords0) c0.push_back(v.str());
  coords["g1"] = c1;
  coords["g0"] = c0;
  j["coords"] = coords;
  j["predicted_d"] = c.predicted_d;
  j["order"] = c.order.str();
  return j;
}

Json family_to_json(const QFamily& f) {
  Json j;
  j["group"] = group_name(f.group);
  j["r"] = f.r.str();
  j["s"] = f.s.str();
  j["t"] = f.t.str();
  Json poles = Json::array();
  for (const auto& p : f.poles)
    poles.push_back(Json{{"t", p.t.str()}, {"r1", p.r1.str()}, {"r2", p.r2.str()}});
  j["poles"] = poles;
  return j;
}

PointRule point_rule(const GroupContext& ctx, const std::string& point, const std::string& tflag) {
  if (point == "rho1") return ctx.rho1_rule();
  if (point == "rho2") return ctx.rho2_rule();
  if (point == "interior") {
    if (tflag.empty()) throw ParseError("--tj is required for interior points");
    return ctx.interior_rule(ParamField(Rat::parse(tflag)));
  }
  throw ParseError("point must be rho1, rho2 or interior");
}

// ---------------------------------------------------------------------------
// The golden corpus behind `paper-examples`
// ---------------------------------------------------------------------------
struct GoldenCert {
  std::string name;
  GroupId group;
  SingularitySpec spec;
  Rat order;
};

std::vector<GoldenCert> golden_certs() {
  std::vector<GoldenCert> v;
  v.push_back({"cert_sl2z_w12", GroupId::SL2Z, {Rat(1, 2), Rat(3, 2), Rat(1, 2), {}}, Rat(14)});
  v.push_back({"cert_g2plus_k1", GroupId::G2plus, {Rat(1, 2), Rat(3, 2), Rat(1, 2), {}}, Rat(14)});
  v.push_back({"cert_g2plus_k2", GroupId::G2plus, {Rat(1), Rat(3, 2), Rat(1, 2), {}}, Rat(14)});
  for (long k = 0; k <= 3; ++k)
    v.push_back({"cert_g3plus_k" + std::to_string(k), GroupId::G3plus,
                 {Rat(k, 2), Rat(3, 2), Rat(1, 2), {}}, Rat(14 + 2 * k)});
  v.push_back({"cert_sl2z_pencil_a1", GroupId::SL2Z,
               {Rat(0), Rat(1, 2), Rat(1, 2), {{Rat(3, 7), Rat(1)}}}, Rat(16)});
  return v;
}

Certificate compute_golden(const GoldenCert& gc) {
  ConstructQResult cq = construct_Q(gc.group, gc.spec);
  if (cq.solutions.empty()) throw Error("golden spec has no rational family");
  // the pencil entry picks the root -576 (a = 3/7 branch is the other one)
  const QFamily* fam = &cq.solutions[0];
  for (const auto& f : cq.solutions)
    if (f.poles.size() == 1 && f.poles[0].r2 == ParamField(Rat(-576))) fam = &f;
  QSeries q = qfamily_to_series(*fam, gc.order + gc.spec.kappa_inf + gc.spec.kappa_inf + Rat(2));
  return certify({gc.group, q, gc.spec}, gc.order);
}

int run_paper_examples(const std::string& golden_dir, const std::string& filter, bool update) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };
  auto matches = [&](const std::string& name) {
    return filter.empty() || name.find(filter) != std::string::npos;
  };

  for (const auto& gc : golden_certs()) {
    if (!matches(gc.name)) continue;
    std::string path = golden_dir + "/" + gc.name + ".json";
    Json got = cert_to_json(compute_golden(gc));
    if (update) {
      std::ofstream out(path, std::ios::binary);
      out << got.dump(2) << "\n";
      report(gc.name, true, "updated");
      continue;
    }
    std::ifstream in(path);
    if (!in) {
      report(gc.name, false, "missing golden file " + path);
      continue;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    std::string want = ss.str();
    std::string have = got.dump(2) + "\n";
    if (want == have) {
      report(gc.name, true);
    } else {
      report(gc.name, false, "recomputed certificate differs from " + path);
      // point at the first differing line
      std::istringstream a(want), b(have);
      std::string la, lb;
      int line = 1;
      while (std::getline(a, la) && std::getline(b, lb)) {
        if (la != lb) {
          std::cout << "  line " << line << ": golden " << la << " | computed " << lb << "\n";
          break;
        }
        ++line;
      }
    }
  }

  // closure identities: extremal forms divided by the cusp-form powers solve
  // the stated equations
  const Rat T(24);
  for (long k = 1; k <= 3 && matches("closure_g2plus"); ++k) {
    QSeries m2 = generator_series(GroupId::G2plus, "M2", T);
    QSeries m4 = generator_series(GroupId::G2plus, "M4", T);
    QSeries m8 = generator_series(GroupId::G2plus, "M8", T);
    int eps = k % 2 ? 2 : 0;
    {
      QSeries f = extremal({GroupId::G2plus, static_cast<int>(4 * k), {eps}, 1}, T);
      QSeries y = f / pow_frac(m8, Rat(k, 2));
      QSeries resid = dq(dq(y)) - m4.scaled(Rat(k * k, 4)) * y;
      report("closure_g2plus_holo_k" + std::to_string(k),
             resid.is_zero_series() && resid.trunc() >= Rat(15));
    }
    {
      QSeries f = extremal({GroupId::G2plus, static_cast<int>(4 * k + 2), {eps}, 1}, T);
      QSeries y = f / (pow_frac(m8, Rat(k, 2)) * m2);
      QSeries qq = m4.scaled(Rat(k * k, 4)) - (m8 / m4).scaled(Rat(32));
      QSeries resid = dq(dq(y)) - qq * y;
      report("closure_g2plus_pole_k" + std::to_string(k),
             resid.is_zero_series() && resid.trunc() >= Rat(15));
    }
  }
  for (long k = 1; k <= 3 && matches("closure_g3plus"); ++k) {
    QSeries m2m = generator_series(GroupId::G3plus, "M2minus", T);
    QSeries m4p = generator_series(GroupId::G3plus, "M4plus", T);
    QSeries m6m = generator_series(GroupId::G3plus, "M6minus", T);
    int m = static_cast<int>(k % 4);
    {
      QSeries f = extremal({GroupId::G3plus, static_cast<int>(3 * k), {m}, 1}, T);
      QSeries y = f / pow_frac(m6m, Rat(k, 2));
      QSeries resid = dq(dq(y)) - m4p.scaled(Rat(k * k, 4)) * y;
      report("closure_g3plus_holo_k" + std::to_string(k),
             resid.is_zero_series() && resid.trunc() >= Rat(15));
    }
    {
      QSeries f = extremal({GroupId::G3plus, static_cast<int>(3 * k + 2), {m}, 1}, T);
      QSeries y = f / (pow_frac(m6m, Rat(k, 2)) * m2m);
      QSeries qq = m4p.scaled(Rat(k * k, 4)) - (m6m / m2m).scaled(Rat(18));
      QSeries resid = dq(dq(y)) - qq * y;
      report("closure_g3plus_pole_k" + std::to_string(k),
             resid.is_zero_series() && resid.trunc() >= Rat(15));
    }
  }

  if (matches("wronskian_pencil")) {
    // W(E2 E4 + a E6) = (-1-6a) E4^3 - (a^2-4a) E6^2, identity in a
    auto names = make_params({"a"});
    ParamField a = ParamField::var(names, 0);
    using PSeries = SeriesT<ParamField>;
    auto lift = [&](const QSeries& s) {
      std::vector<std::pair<long, ParamField>> terms;
      for (const auto& [n, c] : s.raw_coeffs()) terms.emplace_back(n, ParamField(c));
      return PSeries::from_terms(s.grid_den(), s.trunc(), std::move(terms));
    };
    const Rat TW(21);
    PSeries e2 = lift(generator_series(GroupId::SL2Z, "E2", TW));
    PSeries e4 = lift(generator_series(GroupId::SL2Z, "E4", TW));
    PSeries e6 = lift(generator_series(GroupId::SL2Z, "E6", TW));
    PSeries f = e2 * e4 + e6.scaled(a);
    PSeries w = wronskian_series(f, e4, 12);
    PSeries rhs = (e4 * e4 * e4).scaled(ParamField(Rat(-1)) - ParamField(Rat(6)) * a) -
                  (e6 * e6).scaled(a * a - ParamField(Rat(4)) * a);
    report("wronskian_pencil", agree_to_common_trunc(w.truncated(Rat(20)), rhs.truncated(Rat(20))));
  }

  if (matches("obstruction_roots_sl2z")) {
    ConstructQResult res =
        construct_Q(GroupId::SL2Z, {Rat(0), Rat(1, 2), Rat(1, 2), {{Rat(3, 7), Rat(1)}}});
    bool ok = res.solution_count == 2 && res.r2_roots.size() == 2 &&
              res.r2_roots[0] == Rat(-4608, 7) && res.r2_roots[1] == Rat(-576);
    report("obstruction_roots_sl2z", ok);
  }

  std::cout << (failures ? "FAILURES: " : "ALL PASS: ") << failures << " failing item(s)\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact quasimodular forms and modular differential equations"};
  app.require_subcommand(1);

  std::string group_flag = "sl2z", name, character, order_flag, out_path, format = "json";
  std::string kinf = "0", krho1 = "1/2", krho2 = "1/2", point = "rho1", f_file, q_file;
  std::vector<std::string> tj, kj, r2j;
  int weight = 0, depth = 1, nmax = 4;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--group", group_flag, "sl2z | g2plus | g3plus");
    cmd->add_option("--order", order_flag, "working order, a rational like 20 or 41/2");
    cmd->add_option("--out", out_path, "write the result to this file");
    cmd->add_option("--format", format)->check(CLI::IsMember({"json", "pretty"}));
  };
  auto add_spec = [&](CLI::App* cmd) {
    cmd->add_option("--kinf", kinf, "exponent at the cusp, in (1/2)Z");
    cmd->add_option("--krho1", krho1, "kappa at the order-2 elliptic point");
    cmd->add_option("--krho2", krho2, "kappa at the other elliptic point");
    cmd->add_option("--tj", tj, "interior point parameter(s)");
    cmd->add_option("--kj", kj, "interior point kappa(s)");
  };

  CLI::App* c_expand = app.add_subcommand("expand", "q-expansion of a named generator");
  c_expand->add_option("--name", name)->required();
  add_common(c_expand);

  CLI::App* c_dims = app.add_subcommand("dims", "dimension of a (quasi)modular space");
  c_dims->add_option("--weight", weight)->required();
  c_dims->add_option("--character", character);
  c_dims->add_option("--depth", depth)->check(CLI::IsMember({0, 1}));
  add_common(c_dims);

  CLI::App* c_basis = app.add_subcommand("basis", "reduced q-echelon basis of a modular space");
  c_basis->add_option("--weight", weight)->required();
  c_basis->add_option("--character", character);
  add_common(c_basis);

  CLI::App* c_extremal = app.add_subcommand("extremal", "normalized extremal depth-1 form");
  c_extremal->add_option("--weight", weight)->required();
  c_extremal->add_option("--character", character);
  add_common(c_extremal);

  CLI::App* c_wron = app.add_subcommand("wronskian", "Wronskian of a depth-1 form");
  c_wron->add_option("--f", f_file, "series JSON file, or - for stdin")->required();
  c_wron->add_option("--weight", weight)->required();
  c_wron->add_option("--character", character);
  add_common(c_wron);

  CLI::App* c_dec = app.add_subcommand("decompose", "depth-1 decomposition f = phi f1 + f0");
  c_dec->add_option("--f", f_file)->required();
  c_dec->add_option("--weight", weight)->required();
  c_dec->add_option("--character", character);
  add_common(c_dec);

  CLI::App* c_solve = app.add_subcommand("mode-solve", "Frobenius solution at the cusp");
  c_solve->add_option("--q", q_file, "series JSON for Q; omit to build from the exponent flags");
  c_solve->add_option("--r2", r2j, "interior simple-pole coefficient(s), with --tj/--kj");
  add_spec(c_solve);
  add_common(c_solve);

  CLI::App* c_cert = app.add_subcommand("certify", "full certificate for a MODE");
  c_cert->add_option("--q", q_file, "series JSON for Q; omit to build from the exponent flags");
  c_cert->add_option("--r2", r2j, "interior simple-pole coefficient(s), with --tj/--kj");
  add_spec(c_cert);
  add_common(c_cert);

  CLI::App* c_tomode = app.add_subcommand("to-mode", "MODE attached to a depth-1 form");
  c_tomode->add_option("--f", f_file)->required();
  c_tomode->add_option("--weight", weight)->required();
  c_tomode->add_option("--character", character);
  add_common(c_tomode);

  CLI::App* c_jet = app.add_subcommand("jet", "local expansion of a named form at a point");
  c_jet->add_option("--name", name)->required();
  c_jet->add_option("--point", point, "rho1 | rho2 | interior");
  c_jet->add_option("--tj", tj, "interior point parameter");
  c_jet->add_option("--nmax", nmax);
  add_common(c_jet);

  CLI::App* c_ind = app.add_subcommand("indicial", "indicial roots of the family at a point");
  c_ind->add_option("--point", point, "rho1 | rho2 | interior");
  add_spec(c_ind);
  add_common(c_ind);

  CLI::App* c_app = app.add_subcommand("apparent", "apparentness obstruction at a point");
  c_app->add_option("--point", point, "rho1 | rho2 | interior");
  c_app->add_option("--r2", r2j, "interior simple-pole coefficient(s)");
  add_spec(c_app);
  add_common(c_app);

  CLI::App* c_cq = app.add_subcommand("construct-q", "families with prescribed exponents");
  add_spec(c_cq);
  add_common(c_cq);

  std::string golden_dir = "data/golden/v1", filter;
  bool update = false;
  CLI::App* c_pe = app.add_subcommand("paper-examples", "run the golden corpus");
  c_pe->add_option("--golden-dir", golden_dir);
  c_pe->add_option("--filter", filter);
  c_pe->add_flag("--update", update, "rewrite the golden files from this build");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    Output out{out_path, format};
    GroupId g = parse_group(group_flag);
    Rat order = parse_order_flag(order_flag);
    if (c_extremal->parsed() || c_wron->parsed() || c_dec->parsed() || c_tomode->parsed() ||
        c_solve->parsed() || c_cert->parsed() || c_cq->parsed())
      check_solver_order(order);

    if (c_expand->parsed()) {
      QSeries s = generator_series(g, name, order);
      out.emit(series_to_json(s), s.str() + "\n");
    } else if (c_dims->parsed()) {
      SpaceSpec sp{g, weight, parse_character(g, character), depth};
      Json j;
      j["group"] = group_name(g);
      j["weight"] = weight;
      j["character"] = character_name(g, sp.character);
      j["depth"] = depth;
      j["dim"] = dims(sp);
      out.emit(j, std::to_string(dims(sp)) + "\n");
    } else if (c_basis->parsed()) {
      SpaceSpec sp{g, weight, parse_character(g, character), 0};
      auto bs = basis(sp, order);
      Json j = Json::array();
      std::string pretty;
      for (const auto& b : bs) {
        j.push_back(series_to_json(b));
        pretty += b.str() + "\n";
      }
      out.emit(j, pretty);
    } else if (c_extremal->parsed()) {
      QSeries f = extremal({g, weight, parse_character(g, character), 1}, order);
      out.emit(series_to_json(f), f.str() + "\n");
    } else if (c_wron->parsed() || c_dec->parsed() || c_tomode->parsed()) {
      QSeries f = read_series(f_file);
      Depth1Form d = depth1_decompose(f, g, weight, parse_character(g, character), order);
      if (c_dec->parsed()) {
        Json j;
        j["f1"] = series_to_json(d.f1);
        j["f0"] = series_to_json(d.f0);
        Json c1 = Json::array(), c0 = Json::array();
        for (const auto& v : d.coords1) c1.push_back(v.str());
        for (const auto& v : d.coords0) c0.push_back(v.str());
        j["coords1"] = c1;
        j["coords0"] = c0;
        out.emit(j, "f1 = " + d.f1.str() + "\nf0 = " + d.f0.str() + "\n");
      } else if (c_wron->parsed()) {
        WronskianResult w = wronskian(d, order);
        Json j;
        j["weight"] = w.weight;
        j["character"] = character_name(g, w.character);
        j["w"] = series_to_json(w.w);
        Json cs = Json::array();
        for (const auto& v : w.coords) cs.push_back(v.str());
        j["coords"] = cs;
        out.emit(j, w.w.str() + "\n");
      } else {
        auto [q, g2] = quasiform_to_mode(d);
        Json j;
        j["q"] = series_to_json(q);
        j["g2"] = series_to_json(g2);
        out.emit(j, "Q = " + q.str() + "\ng2 = " + g2.str() + "\n");
      }
    } else if (c_solve->parsed() || c_cert->parsed()) {
      SingularitySpec spec = spec_from_flags(kinf, krho1, krho2, tj, kj);
      QSeries q;
      Rat work = order + spec.kappa_inf + spec.kappa_inf + Rat(2);
      if (!q_file.empty()) {
        q = read_series(q_file);
      } else {
        ConstructQResult cq = construct_Q(g, spec);
        QFamily fam = cq.family;
        if (!spec.interior.empty()) {
          if (r2j.size() != spec.interior.size())
            throw ParseError("--r2 must resolve each interior coefficient");
          for (size_t i = 0; i < r2j.size(); ++i)
            fam.poles[i].r2 = ParamField(Rat::parse(r2j[i]));
        }
        q = qfamily_to_series(fam, work);
      }
      if (c_solve->parsed()) {
        FrobeniusSolution y = frobenius_plus(q.truncated(order), spec.kappa_inf, order);
        NonApparentReport rep = nonapparent_infinity(q, spec.kappa_inf, order);
        Json j;
        j["exponent"] = y.exponent.str();
        j["series"] = series_to_json(y.series);
        j["residual_order"] = y.residual_order.str();
        j["cusp_nonapparent"] = rep.nonapparent;
        if (rep.obstruction) j["cusp_obstruction"] = rep.obstruction->str();
        out.emit(j, "y+ = " + y.series.str() + "\n");
      } else {
        Certificate cert = certify({g, q, spec}, order);
        Json j = cert_to_json(cert);
        out.emit(j, "ell = " + std::to_string(cert.ell) + ", delta = " +
                        character_name(g, cert.delta) + "\nF  = " + cert.F.str() +
                        "\ny+ = " + cert.y_plus.series.str() + "\ng1 = " + cert.g1.str() +
                        "\ng0 = " + cert.g0.str() + "\npredicted d = " + cert.predicted_d + "\n");
      }
    } else if (c_jet->parsed()) {
      const GroupContext& ctx = group_context(g);
      PointRule rule = point_rule(ctx, point, tj.empty() ? "" : tj[0]);
      Jet jet = jet_of_poly(ctx, ctx.named(name), rule, nmax);
      Json j = Json::array();
      std::string pretty;
      for (int n = 0; n <= jet.nmax; ++n) {
        j.push_back(Json{{"n", n}, {"a_n", jet.at(n).str()}});
        pretty += "a_" + std::to_string(n) + " = " + jet.at(n).str() + "\n";
      }
      out.emit(j, pretty);
    } else if (c_ind->parsed() || c_app->parsed()) {
      SingularitySpec spec = spec_from_flags(kinf, krho1, krho2, tj, kj);
      ConstructQResult cq = construct_Q(g, spec);
      QFamily fam = cq.family;
      if (c_app->parsed() && !r2j.empty()) {
        for (size_t i = 0; i < r2j.size() && i < fam.poles.size(); ++i)
          fam.poles[i].r2 = ParamField(Rat::parse(r2j[i]));
      }
      const GroupContext& ctx = group_context(g);
      PointRule rule = point_rule(ctx, point, spec.interior.empty() ? "" : spec.interior[0].t.str());
      if (c_ind->parsed()) {
        IndicialRoots ir = indicial(jet_of_family(fam, rule, 1));
        Json j;
        j["a_minus2"] = ir.a_minus2.str();
        if (ir.roots) {
          j["roots"] = Json::array({ir.roots->first.str(), ir.roots->second.str()});
          j["kappa"] = ir.kappa->str();
        }
        out.emit(j, "a_{-2} = " + ir.a_minus2.str() + "\n");
      } else {
        Rat kap = point == "rho1" ? spec.kappa_rho1
                                  : (point == "rho2" ? spec.kappa_rho2 : spec.interior.at(0).kappa);
        long two_kappa = (kap + kap).num_long();
        Jet jet = jet_of_family(fam, rule, static_cast<int>(two_kappa));
        ApparencyReport rep = apparent_obstruction(jet, kap);
        Json j;
        j["kappa"] = kap.str();
        j["exponents"] =
            Json::array({rep.local_exponents.first.str(), rep.local_exponents.second.str()});
        j["apparent"] = rep.apparent;
        j["obstruction"] = rep.obstruction.str();
        out.emit(j, std::string(rep.apparent ? "apparent" : "not apparent") + ", obstruction = " +
                        rep.obstruction.str() + "\n");
      }
    } else if (c_cq->parsed()) {
      SingularitySpec spec = spec_from_flags(kinf, krho1, krho2, tj, kj);
      ConstructQResult res = construct_Q(g, spec);
      Json j;
      j["solution_count"] = res.solution_count;
      j["family"] = family_to_json(res.family);
      Json poly = Json::array();
      for (const auto& c : res.obstruction_poly) poly.push_back(c.str());
      j["obstruction_poly"] = poly;
      Json roots = Json::array();
      for (const auto& r : res.r2_roots) roots.push_back(r.str());
      j["r2_roots"] = roots;
      Json sols = Json::array();
      for (const auto& fam : res.solutions) {
        Json s = family_to_json(fam);
        s["series"] = series_to_json(qfamily_to_series(fam, order));
        sols.push_back(s);
      }
      j["solutions"] = sols;
      std::string pretty = "count = " + std::to_string(res.solution_count) + "\n";
      for (const auto& r : res.r2_roots) pretty += "r2 = " + r.str() + "\n";
      out.emit(j, pretty);
    } else if (c_pe->parsed()) {
      return run_paper_examples(golden_dir, filter, update);
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const UnknownGenerator& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const UnsupportedSpace& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ConditionHViolated& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const DegenerateParameter& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 4;
  }
}
