#include "latticeforge/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>

#include "latticeforge/cyclicalg.hpp"
#include "latticeforge/errors.hpp"
#include "latticeforge/lattice.hpp"
#include "latticeforge/properties.hpp"

namespace lf {

namespace {

const std::set<std::string> kKinds{"number_field_code", "cyclic_algebra_code", "raw_quotient",
                                   "factorization_table", "skew_divisors"};

// ---------------------------------------------------------------- exact numbers

Int json_int(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Int(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    Rat r = parse_rational(v.get<std::string>());
    require(r.get_den() == 1, "schema: " + where + " must be an integer");
    return r.get_num();
  }
  throw PreconditionError("schema: " + where + " must be an integer or an integer string");
}

Rat json_rat(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rat(json_int(v, where));
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw PreconditionError("schema: " + where + " must be an exact number (integer or fraction string)");
}

long json_long(const json& v, const std::string& where) {
  Int z = json_int(v, where);
  require(z.fits_slong_p(), "schema: " + where + " out of range");
  return z.get_si();
}

const json& need(const json& obj, const std::string& key, const std::string& where) {
  require(obj.is_object() && obj.contains(key), "schema: " + where + " lacks \"" + key + "\"");
  return obj.at(key);
}

void reject_floats(const json& v, const std::string& where) {
  if (v.is_number_float()) throw PreconditionError("schema: floating-point value at " + where);
  if (v.is_object())
    for (auto it = v.begin(); it != v.end(); ++it) reject_floats(it.value(), where + "." + it.key());
  if (v.is_array())
    for (std::size_t i = 0; i < v.size(); ++i) reject_floats(v[i], where + "[" + std::to_string(i) + "]");
}

i64 parse_prime(const json& s) {
  long p = json_long(need(s, "p", "scenario"), "p");
  require(is_prime(p), "schema: p = " + std::to_string(p) + " is not prime");
  return p;
}

std::vector<i64> json_fp_vector(const json& v, i64 p, const std::string& where) {
  require(v.is_array(), "schema: " + where + " must be an array");
  std::vector<i64> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(mod_norm(json_long(v[i], where + "[" + std::to_string(i) + "]"), p));
  return out;
}

FpMatrix json_fp_matrix(const json& v, i64 p, std::size_t cols, const std::string& where) {
  require(v.is_array(), "schema: " + where + " must be an array of rows");
  FpMatrix m(p, 0, cols);
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto row = json_fp_vector(v[i], p, where + "[" + std::to_string(i) + "]");
    require(row.size() == cols, "schema: " + where + " row " + std::to_string(i) + " has length " +
                                    std::to_string(row.size()) + ", expected " + std::to_string(cols));
    m.append_row(row);
  }
  return m;
}

IntMatrix json_int_matrix(const json& v, const std::string& where) {
  require(v.is_array() && !v.empty(), "schema: " + where + " must be a nonempty array of rows");
  IntMatrix m(0, v[0].size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i].is_array() && v[i].size() == m.cols(), "schema: " + where + " rows must have equal length");
    std::vector<Int> row;
    for (std::size_t j = 0; j < v[i].size(); ++j) row.push_back(json_int(v[i][j], where));
    m.append_row(row);
  }
  return m;
}

RatMatrix json_rat_matrix(const json& v, const std::string& where) {
  require(v.is_array() && !v.empty(), "schema: " + where + " must be a nonempty array of rows");
  RatMatrix m(0, v[0].size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    require(v[i].is_array() && v[i].size() == m.cols(), "schema: " + where + " rows must have equal length");
    std::vector<Rat> row;
    for (std::size_t j = 0; j < v[i].size(); ++j) row.push_back(json_rat(v[i][j], where));
    m.append_row(row);
  }
  return m;
}

// ---------------------------------------------------------------- report values

json rat_json(const Rat& r) { return to_string(r); }

json rat_matrix_json(const RatMatrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json checks_json(const std::vector<CheckItem>& items) {
  json out = json::array();
  for (const auto& it : items) out.push_back({{"name", it.name}, {"passed", it.passed}, {"detail", it.detail}});
  return out;
}

bool all_passed(const std::vector<CheckItem>& items) {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
}

json element_json(const FieldElement& x) {
  json out = json::array();
  for (const auto& c : x.c) out.push_back(to_string(c));
  return out;
}

// Invariants, optional enumeration and optional named certificate.
json analyze_lattice(const ScaledLattice& l, const json& analysis, const RunOptions& opt, json& summary) {
  json out;
  LatticeInvariants inv = invariants(l);
  out["rank"] = inv.rank;
  out["det"] = rat_json(inv.det);
  out["integral"] = inv.integral;
  out["even"] = inv.even;
  out["unimodular"] = inv.unimodular;
  summary["rank"] = inv.rank;
  summary["det"] = rat_json(inv.det);
  summary["integral"] = inv.integral;
  summary["even"] = inv.even;
  summary["unimodular"] = inv.unimodular;

  bool enumerate = analysis.value("enumerate", true);
  if (enumerate && inv.rank <= opt.max_enum_rank) {
    MinimumKissing mk = minimum_and_kissing(l, opt.max_enum_rank);
    out["minimum"] = rat_json(mk.minimum);
    out["kissing"] = mk.kissing;
    summary["minimum"] = rat_json(mk.minimum);
    summary["kissing"] = mk.kissing;
    if (analysis.contains("count_norm")) {
      Rat nrm = json_rat(analysis["count_norm"], "analysis.count_norm");
      std::size_t cnt = count_vectors_of_norm(l, nrm, opt.max_enum_rank);
      out["vectors_of_norm"] = {{"norm", rat_json(nrm)}, {"count", cnt}};
      summary["vectors_of_norm_" + to_string(nrm)] = cnt;
    }
  } else {
    out["enumeration"] = enumerate ? "skipped: rank above the enumeration cap" : "disabled";
    summary["enumeration"] = "skipped";
  }

  if (analysis.contains("named")) {
    NamedLattice name = parse_named_lattice(analysis["named"].get<std::string>());
    Certificate cert = certify_named(l, name, opt.max_enum_rank);
    out["certificate"] = {{"name", cert.name}, {"level", cert.level}, {"passed", cert.passed},
                          {"checks", checks_json(cert.checks)}};
    summary["certificate"] = cert.name;
    summary["certificate_level"] = cert.level;
    summary["certificate_passed"] = cert.passed;
  }
  if (analysis.value("export_gram", false)) out["gram"] = rat_matrix_json(l.gram());
  return out;
}

bool subset_match(const json& expected, const json& actual, const std::string& path, std::vector<std::string>& out) {
  if (expected.is_object()) {
    if (!actual.is_object()) {
      out.push_back(path + ": expected an object");
      return false;
    }
    bool ok = true;
    for (auto it = expected.begin(); it != expected.end(); ++it) {
      std::string sub = path.empty() ? it.key() : path + "." + it.key();
      if (!actual.contains(it.key())) {
        out.push_back(sub + ": missing from report");
        ok = false;
        continue;
      }
      ok = subset_match(it.value(), actual.at(it.key()), sub, out) && ok;
    }
    return ok;
  }
  if (expected != actual) {
    out.push_back(path + ": expected " + expected.dump() + ", got " + actual.dump());
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- number field codes

IntegralIdeal select_ideal(const RingOfIntegers& r, const json& sel, i64 p) {
  if (sel.is_null() || sel == "p_radical") return p_radical(r, p);
  if (sel == "p") return ideal_from_generators(r, {r.scalar(Rat(p))});
  require(sel.is_object(), "schema: ideal must be \"p_radical\", \"p\" or an object");
  auto primes = primes_above(r, p);
  auto pick = [&](const json& idx) {
    long k = json_long(idx, "ideal index");
    require(k >= 0 && static_cast<std::size_t>(k) < primes.size(),
            "schema: ideal index " + std::to_string(k) + " but only " + std::to_string(primes.size()) +
                " primes lie above p");
    return primes[static_cast<std::size_t>(k)];
  };
  if (sel.contains("prime_above")) return pick(sel["prime_above"]).ideal;
  if (sel.contains("prime_power")) {
    const json& pp = sel["prime_power"];
    PrimeIdeal pr = pick(pp.value("index", json(0)));
    long j = json_long(need(pp, "exponent", "ideal.prime_power"), "exponent");
    require(j >= 1, "schema: prime_power exponent must be positive");
    return as_integral(ideal_power(r, as_fractional(pr.ideal), j));
  }
  throw PreconditionError("schema: unknown ideal selector " + sel.dump());
}

FpCode code_from_generator(const RingOfIntegers& r, const QuotientCtx& q, const ResiduePresentation& pres,
                           const FpPoly& g) {
  FieldElement gb = pres.from_class(g);
  FpMatrix gm(q.p, 0, q.dimension());
  for (std::size_t k = 0; k < r.degree(); ++k) gm.append_row(q.coords(r.mul(r.basis_element(k), gb).to_int()));
  return FpCode(q.p, q.dimension(), gm);
}

json run_number_field(const json& s, const RunOptions& opt) {
  RingPtr rp = parse_field(need(s, "field", "scenario"));
  const RingOfIntegers& r = *rp;
  const i64 p = parse_prime(s);
  RingAutomorphism conj = parse_automorphism(r, s.value("conj", json("conjugation")));
  IntegralIdeal I = select_ideal(r, s.value("ideal", json()), p);
  FieldElement lambda = parse_element(r, need(s, "lambda", "scenario"));
  FieldElement beta = s.contains("residue_generator") ? parse_element(r, s["residue_generator"]) : r.generator(0);

  json report, summary;
  report["field"] = r.label();
  report["degree"] = r.degree();
  report["p"] = p;
  report["ideal_norm"] = ideal_norm(I).get_str();

  ResiduePresentation pres(r, I, p, beta);
  const FpPoly& mu = pres.mu();
  report["mu"] = mu.to_string();
  summary["mu"] = mu.to_string();

  RatMatrix G = trace_form_gram(r, as_fractional(unit_ideal(r)), lambda, conj);
  QuotientCtx q = build_quotient(I.hnf, G, p);
  FpCode rad = radical_check(q);
  report["quotient_dimension"] = q.dimension();
  report["form_nondegenerate"] = rad.dimension() == 0;
  report["radical_dimension"] = rad.dimension();
  summary["quotient_dimension"] = q.dimension();
  summary["form_nondegenerate"] = rad.dimension() == 0;

  const json& code = need(s, "code", "scenario");
  FpCode C;
  if (code.is_object() && code.contains("generator_matrix")) {
    C = FpCode(p, q.dimension(), json_fp_matrix(code["generator_matrix"], p, q.dimension(), "code.generator_matrix"));
  } else {
    FpPoly g(p, {});
    if (code == "search_self_dual") {
      bool found = false;
      for (const auto& d : divisors(mu)) {
        if (dual_generator(d, mu, conjugate_image_polynomial(r, d, pres, conj)).self_dual) {
          g = d;
          found = true;
          break;
        }
      }
      require(found, "no monic divisor g of mu with g_* g = mu (no self-dual code)");
    } else {
      require(code.is_object() && code.contains("generator_polynomial"),
              "schema: code must be \"search_self_dual\" or have generator_polynomial / generator_matrix");
      g = FpPoly(p, json_fp_vector(code["generator_polynomial"], p, "code.generator_polynomial"));
      require(g.is_monic(), "generator polynomial must be monic");
      require((mu % g).is_zero(), "generator polynomial " + g.to_string() + " does not divide mu = " + mu.to_string());
    }
    FpPoly gs = conjugate_image_polynomial(r, g, pres, conj);
    DualGenerator dg = dual_generator(g, mu, gs);
    report["g"] = g.to_string();
    report["g_star"] = gs.to_string();
    report["g_perp"] = dg.g_perp.to_string();
    report["self_orthogonal"] = dg.self_orthogonal;
    report["self_dual"] = dg.self_dual;
    summary["g"] = g.to_string();
    summary["g_star"] = gs.to_string();
    summary["g_perp"] = dg.g_perp.to_string();
    summary["self_dual"] = dg.self_dual;
    C = code_from_generator(r, q, pres, g);
    if (rad.dimension() == 0) {
      bool match = code_orthogonal(C, q.form) == code_from_generator(r, q, pres, dg.g_perp);
      ensure(match, "dual code differs from the code of g_perp");
      report["dual_code_matches_g_perp"] = match;
    }
  }
  report["code_dimension"] = C.dimension();
  summary["code_dimension"] = C.dimension();
  if (rad.dimension() == 0) {
    bool so = C.subset_of(code_orthogonal(C, q.form));
    report["code_self_orthogonal"] = so;
    summary["self_orthogonal"] = so;
  }

  auto items = verify_thm_gamma(q, C);
  report["theorem_checks"] = checks_json(items);
  summary["theorem_checks_passed"] = all_passed(items);

  ScaledLattice L = gamma_of_code(q, C);
  json analysis = s.value("analysis", json::object());
  report["lattice"] = analyze_lattice(L, analysis, opt, summary);

  if (s.contains("even_unit")) {
    FieldElement u = parse_element(r, s["even_unit"]);
    bool pred = even_criterion(r, u, conj, p);
    report["even_predicted"] = pred;
    summary["even_predicted"] = pred;
    if (summary.value("self_orthogonal", false)) ensure(summary["even"].get<bool>(), "even criterion applies but lattice is odd");
  }
  report["summary"] = summary;
  return report;
}

// ---------------------------------------------------------------- cyclic algebras

struct CyclicSetup {
  RingPtr ring;
  CyclicAlgebraCtx ctx;
  i64 p;
  PrimeIdeal prime;
  CyclicResidue res;
  DualMode mode;
};

CyclicSetup cyclic_setup(const json& s) {
  const json& ca = need(s, "cyclic_algebra", "scenario");
  RingPtr rp = parse_field(need(ca, "field", "cyclic_algebra"));
  RingAutomorphism sigma = parse_automorphism(*rp, need(ca, "sigma", "cyclic_algebra"));
  FieldElement gamma = parse_element(*rp, need(ca, "gamma", "cyclic_algebra"));
  RingAutomorphism conj = parse_automorphism(*rp, ca.value("conj", json("conjugation")));
  long n = json_long(need(ca, "n", "cyclic_algebra"), "cyclic_algebra.n");
  require(n >= 1 && n <= 64, "schema: cyclic_algebra.n out of range");
  CyclicAlgebraCtx ctx(rp, sigma, gamma, conj, static_cast<int>(n));

  const i64 p = parse_prime(s);
  auto primes = primes_above(*rp, p);
  long idx = 0;
  json sel = s.value("ideal", json::object());
  if (sel.is_object() && sel.contains("prime_above")) idx = json_long(sel["prime_above"], "ideal.prime_above");
  require(idx >= 0 && static_cast<std::size_t>(idx) < primes.size(), "schema: ideal.prime_above out of range");
  PrimeIdeal pr = primes[static_cast<std::size_t>(idx)];

  std::optional<FieldElement> beta;
  if (s.contains("residue_generator")) beta = parse_element(*rp, s["residue_generator"]);
  CyclicResidue res = residue_skew_iso(ctx, pr.ideal, p, beta ? &*beta : nullptr);

  DualMode mode = pr.e > 1 ? DualMode::Ramified : DualMode::Inert;
  if (s.contains("mode")) {
    std::string m = s["mode"].get<std::string>();
    require(m == "ramified" || m == "inert", "schema: mode must be \"ramified\" or \"inert\"");
    mode = m == "ramified" ? DualMode::Ramified : DualMode::Inert;
  }
  return CyclicSetup{rp, std::move(ctx), p, pr, std::move(res), mode};
}

SkewPoly parse_skew(const Fq& fq, const json& v, const std::string& where) {
  require(v.is_array() && !v.empty(), "schema: " + where + " must be a nonempty coefficient list");
  std::vector<FpPoly> c;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string w = where + "[" + std::to_string(i) + "]";
    if (v[i].is_array()) {
      c.push_back(fq.from_coeffs(json_fp_vector(v[i], fq.p(), w)));
    } else {
      c.push_back(fq.scalar(mod_norm(json_long(v[i], w), fq.p())));
    }
  }
  return skew_trim(fq, c);
}

const char* mode_name(DualMode m) { return m == DualMode::Ramified ? "ramified" : "inert"; }

json run_cyclic(const json& s, const RunOptions& opt) {
  CyclicSetup cs = cyclic_setup(s);
  const CyclicAlgebraCtx& ctx = cs.ctx;
  const RingOfIntegers& r = *cs.ring;
  const Fq& fq = cs.res.fq;
  const i64 p = cs.p;
  const int n = ctx.n();
  FieldElement lambda = parse_element(r, need(s, "lambda", "scenario"));
  FpSymForm phi = residue_form(ctx, cs.res, lambda);
  FpPoly lc = residue_class_of_unit(r, lambda, cs.res.pres);

  json report, summary;
  report["field"] = r.label();
  report["n"] = n;
  report["rank"] = ctx.rank();
  report["p"] = p;
  report["residue_field"] = {{"p", p}, {"modulus", fq.modulus().to_string()}, {"degree", fq.degree()},
                             {"sigma_frobenius_power", fq.sigma_power()},
                             {"conj_frobenius_power", fq.conj_power()}};
  report["mode"] = mode_name(cs.mode);
  SkewPoly central = skew_central_binomial(fq, static_cast<std::size_t>(n), cs.res.gamma_bar);
  report["central"] = to_string(fq, central);
  summary["central"] = to_string(fq, central);

  report["quotient_dimension"] = phi.dimension();
  report["form_nondegenerate"] = is_nondegenerate(phi);
  summary["quotient_dimension"] = phi.dimension();
  summary["form_nondegenerate"] = is_nondegenerate(phi);

  const json& code = need(s, "code", "scenario");
  SkewPoly g;
  if (code == "search_self_dual") {
    require(n % 2 == 0, "a self-dual skew code needs even n");
    bool found = false;
    for (const auto& d : central_divisors(fq, cs.res.gamma_bar, n, n / 2, opt.budget)) {
      if (dual_divisor(fq, d, cs.mode, n, cs.res.gamma_bar, &lc).self_dual) {
        g = d;
        found = true;
        break;
      }
    }
    require(found, "no divisor g of X^n - gamma with g g_tau = X^n - gamma (no self-dual code)");
  } else {
    require(code.is_object() && code.contains("divisor"), "schema: code must be \"search_self_dual\" or {\"divisor\": [...]}");
    g = parse_skew(fq, code["divisor"], "code.divisor");
  }
  SkewDual du = dual_divisor(fq, g, cs.mode, n, cs.res.gamma_bar, &lc);
  report["g"] = to_string(fq, g);
  report["g_tau"] = to_string(fq, du.g_tau);
  report["h"] = to_string(fq, du.h);
  report["self_orthogonal"] = du.self_orthogonal;
  report["self_dual"] = du.self_dual;
  summary["g"] = to_string(fq, g);
  summary["g_tau"] = to_string(fq, du.g_tau);
  summary["h"] = to_string(fq, du.h);
  summary["self_orthogonal"] = du.self_orthogonal;
  summary["self_dual"] = du.self_dual;

  FpCode C = left_ideal_code(ctx, cs.res, g);
  if (is_nondegenerate(phi)) {
    bool match = code_orthogonal(C, phi) == left_ideal_code(ctx, cs.res, du.h);
    ensure(match, "dual code differs from the left ideal of h");
    report["dual_code_matches_h"] = match;
  }
  report["code_dimension"] = C.dimension();
  summary["code_dimension"] = C.dimension();

  RatMatrix G = order_gram(ctx, lambda);
  ScaledLattice L{G, left_ideal_lattice(ctx, cs.res, g), Rat(1, p)};

  // Second route: generic quotient Lambda / P with the code in quotient coordinates.
  QuotientCtx q = build_quotient(two_sided_P(ctx, cs.prime.ideal), G, p);
  AlgebraElement ge = lift_skew(ctx, cs.res, g);
  FpMatrix gm(p, 0, q.dimension());
  for (std::size_t k = 0; k < ctx.rank(); ++k) {
    auto v = algebra_coords(ctx, algebra_mul(ctx, algebra_basis(ctx, k), ge));
    std::vector<Int> iv;
    for (const auto& c : v) iv.push_back(c.get_num());
    gm.append_row(q.coords(iv));
  }
  FpCode Cq(p, q.dimension(), gm);
  bool routes = same_lattice(L, gamma_of_code(q, Cq));
  ensure(routes, "left ideal lattice differs from the preimage of its code");
  report["lattice_routes_agree"] = routes;
  auto items = verify_thm_gamma(q, Cq);
  report["theorem_checks"] = checks_json(items);
  summary["theorem_checks_passed"] = all_passed(items);

  json analysis = s.value("analysis", json::object());
  report["lattice"] = analyze_lattice(L, analysis, opt, summary);

  if (s.contains("even_unit")) {
    FieldElement u = parse_element(r, s["even_unit"]);
    bool pred = even_criterion(r, u, ctx.conj(), p);
    report["even_predicted"] = pred;
    summary["even_predicted"] = pred;
    if (du.self_orthogonal) ensure(summary["even"].get<bool>(), "even criterion applies but lattice is odd");
  }
  report["summary"] = summary;
  return report;
}

// ---------------------------------------------------------------- raw quotients

json run_raw(const json& s, const RunOptions& opt) {
  const i64 p = parse_prime(s);
  RatMatrix G = json_rat_matrix(need(s, "gram", "scenario"), "gram");
  const std::size_t n = G.rows();
  require(G.cols() == n, "schema: gram must be square");
  IntMatrix Mb = s.contains("m_basis") ? json_int_matrix(s["m_basis"], "m_basis") : IntMatrix::identity(n);
  IntMatrix Nb;
  if (s.contains("n_basis")) {
    Nb = json_int_matrix(s["n_basis"], "n_basis");
  } else {
    Nb = Mb;
    for (std::size_t i = 0; i < Nb.rows(); ++i)
      for (std::size_t j = 0; j < Nb.cols(); ++j) Nb(i, j) *= Int(static_cast<long>(p));
  }
  QuotientCtx q = build_quotient(Mb, Nb, G, p);
  FpCode rad = radical_check(q);

  json report, summary;
  report["p"] = p;
  report["rank"] = q.rank();
  report["quotient_dimension"] = q.dimension();
  report["form_nondegenerate"] = rad.dimension() == 0;
  report["radical_dimension"] = rad.dimension();
  summary["quotient_dimension"] = q.dimension();
  summary["form_nondegenerate"] = rad.dimension() == 0;

  const json& codes = need(s, "codes", "scenario");
  require(codes.is_array() && !codes.empty(), "schema: codes must be a nonempty array");
  std::vector<FpCode> cs;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    names.push_back(codes[i].value("name", "C" + std::to_string(i + 1)));
    cs.emplace_back(p, q.dimension(),
                    json_fp_matrix(need(codes[i], "generator_matrix", "codes[i]"), p, q.dimension(), "generator_matrix"));
  }
  json rows = json::array();
  json csum = json::object();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    json one, sum;
    one["name"] = names[i];
    one["dimension"] = cs[i].dimension();
    sum["dimension"] = cs[i].dimension();
    if (rad.dimension() == 0) {
      bool so = cs[i].subset_of(code_orthogonal(cs[i], q.form));
      one["self_orthogonal"] = so;
      sum["self_orthogonal"] = so;
      sum["self_dual"] = so && 2 * cs[i].dimension() == q.dimension();
    }
    std::optional<FpCode> c2;
    if (cs.size() > 1) c2 = cs[(i + 1) % cs.size()];
    auto items = verify_thm_gamma(q, cs[i], c2);
    one["theorem_checks"] = checks_json(items);
    sum["theorem_checks_passed"] = all_passed(items);
    ScaledLattice L = gamma_of_code(q, cs[i]);
    json analysis = codes[i].value("analysis", json::object());
    one["lattice"] = analyze_lattice(L, analysis, opt, sum);
    if (codes[i].contains("preimage_represents")) {
      ScaledLattice pre{L.ambient_gram, L.basis, 1};
      Rat nrm = json_rat(codes[i]["preimage_represents"], "preimage_represents");
      std::size_t cnt = count_vectors_of_norm(pre, nrm, opt.max_enum_rank);
      one["preimage"] = {{"gram", rat_matrix_json(pre.gram())}, {"norm", rat_json(nrm)}, {"count", cnt}};
      sum["preimage_represents"] = cnt > 0;
    }
    rows.push_back(one);
    csum[names[i]] = sum;
  }
  report["codes"] = rows;
  summary["codes"] = csum;
  report["summary"] = summary;
  return report;
}

// ---------------------------------------------------------------- tables

json table_rows(const json& s) {
  long m = json_long(need(s, "alpha_order", "scenario"), "alpha_order");
  const json& primes = need(s, "primes", "scenario");
  require(primes.is_array() && !primes.empty(), "schema: primes must be a nonempty array");
  RingPtr r = RingOfIntegers::cyclotomic(static_cast<int>(m));
  json rows = json::array();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    long p = json_long(primes[i], "primes[i]");
    require(is_prime(p), "schema: " + std::to_string(p) + " is not prime");
    require(m % p != 0, "p must not divide the cyclotomic index");
    IntegralIdeal I = ideal_from_generators(*r, {r->scalar(Rat(p))});
    ResiduePresentation pres(*r, I, p, r->generator(0));
    const FpPoly& mu = pres.mu();
    json row;
    row["p"] = p;
    row["mu"] = mu.to_string();
    json fac = json::array();
    for (const auto& f : factor(mu)) fac.push_back(f.factor.to_string());
    row["factors"] = fac;
    json pairs = json::array(), divs = json::array();
    std::set<std::string> seen;
    for (const auto& g : divisors(mu)) {
      FpPoly gs = conjugate_image_polynomial(*r, g, pres, r->conjugation());
      if (g.degree() > 0) ensure(gs == gstar_closed_form(g, GStarCase::Unitary), "g_* differs from the unitary closed form");
      DualGenerator dg = dual_generator(g, mu, gs);
      divs.push_back({{"g", g.to_string()}, {"g_star", gs.to_string()}, {"g_perp", dg.g_perp.to_string()},
                      {"self_orthogonal", dg.self_orthogonal}, {"self_dual", dg.self_dual}});
      if (dg.self_dual && !seen.count(gs.to_string())) {
        seen.insert(g.to_string());
        pairs.push_back(json::array({g.to_string(), gs.to_string()}));
      }
    }
    row["self_dual_pairs"] = pairs;
    row["divisors"] = divs;
    rows.push_back(row);
  }
  return rows;
}

json run_table(const json& s) {
  json report;
  json rows = table_rows(s);
  json srows = json::array();
  for (auto& row : rows) {
    srows.push_back({{"p", row["p"]}, {"mu", row["mu"]}, {"self_dual_pairs", row["self_dual_pairs"]}});
    row.erase("divisors");
  }
  report["rows"] = rows;
  report["summary"] = {{"rows", srows}};
  return report;
}

// ---------------------------------------------------------------- skew divisor tables

json skew_table(const Fq& fq, const FpPoly& gamma_bar, int n, DualMode mode, const FpPoly* lambda,
                const RunOptions& opt) {
  json rows = json::array();
  for (int d = 0; d <= n; ++d) {
    std::vector<SkewPoly> ds;
    try {
      ds = central_divisors(fq, gamma_bar, n, d, opt.budget);
    } catch (const UnsupportedError& e) {
      rows.push_back({{"degree", d}, {"skipped", e.what()}});
      continue;
    }
    for (const auto& g : ds) {
      SkewDual du = dual_divisor(fq, g, mode, n, gamma_bar, lambda);
      rows.push_back({{"g", to_string(fq, g)}, {"g_tau", to_string(fq, du.g_tau)}, {"h", to_string(fq, du.h)},
                      {"self_orthogonal", du.self_orthogonal}, {"self_dual", du.self_dual}});
    }
  }
  return rows;
}

json run_skew(const json& s, const RunOptions& opt) {
  Fq fq = parse_fq(need(s, "fq", "scenario"));
  long n = json_long(need(s, "n", "scenario"), "n");
  require(n >= 1 && n <= 64, "schema: n out of range");
  FpPoly gb = fq.from_coeffs(json_fp_vector(need(s, "gamma_bar", "scenario"), fq.p(), "gamma_bar"));
  std::string m = s.value("mode", "ramified");
  DualMode mode = m == "inert" ? DualMode::Inert : DualMode::Ramified;
  std::optional<FpPoly> lc;
  if (s.contains("lambda_bar")) lc = fq.from_coeffs(json_fp_vector(s["lambda_bar"], fq.p(), "lambda_bar"));
  json rows = skew_table(fq, gb, static_cast<int>(n), mode, lc ? &*lc : nullptr, opt);
  json report;
  report["central"] = to_string(fq, skew_central_binomial(fq, static_cast<std::size_t>(n), gb));
  report["divisors"] = rows;
  json sd = json::array();
  for (const auto& row : rows)
    if (row.value("self_dual", false)) sd.push_back(row["g"]);
  report["summary"] = {{"central", report["central"]}, {"divisor_count", rows.size()}, {"self_dual", sd}};
  return report;
}

}  // namespace

// ---------------------------------------------------------------- public parsers

RingPtr parse_field(const json& d) {
  require(d.is_object() && d.size() == 1, "schema: field description must be a one-key object");
  const std::string key = d.begin().key();
  const json& v = d.begin().value();
  if (key == "cyclotomic") return RingOfIntegers::cyclotomic(static_cast<int>(json_long(v, "cyclotomic")));
  if (key == "real_cyclotomic") return RingOfIntegers::real_cyclotomic(static_cast<int>(json_long(v, "real_cyclotomic")));
  if (key == "quadratic") return RingOfIntegers::quadratic(json_long(v, "quadratic"));
  if (key == "compositum") {
    require(v.is_array() && v.size() == 2, "schema: compositum needs exactly two field descriptions");
    return RingOfIntegers::compositum(parse_field(v[0]), parse_field(v[1]));
  }
  throw PreconditionError("schema: unknown field type \"" + key + "\"");
}

FieldElement parse_element(const RingOfIntegers& r, const json& v) {
  if (v.is_string() || v.is_number_integer()) return r.scalar(json_rat(v, "element"));
  require(v.is_array() && v.size() == r.degree(),
          "schema: element needs " + std::to_string(r.degree()) + " coordinates");
  std::vector<Rat> c;
  for (const auto& x : v) c.push_back(json_rat(x, "element coordinate"));
  return FieldElement(c);
}

RingAutomorphism parse_automorphism(const RingOfIntegers& r, const json& v) {
  if (v == "conjugation") return r.conjugation();
  if (v == "identity") return r.identity_automorphism();
  require(v.is_object() && v.contains("galois"), "schema: automorphism must be \"conjugation\", \"identity\" or {\"galois\": a}");
  const json& a = v["galois"];
  if (a.is_array()) {
    require(a.size() == 2, "schema: galois pair needs two exponents");
    return r.galois(json_long(a[0], "galois"), json_long(a[1], "galois"));
  }
  return r.galois(json_long(a, "galois"));
}

Fq parse_fq(const json& d) {
  long p = json_long(need(d, "p", "fq"), "fq.p");
  require(is_prime(p), "schema: fq.p is not prime");
  std::vector<i64> poly = d.contains("poly") ? json_fp_vector(d["poly"], p, "fq.poly") : std::vector<i64>{0, 1};
  return Fq(p, FpPoly(p, poly), static_cast<int>(json_long(d.value("sigma_frobenius_power", json(0)), "sigma")),
            static_cast<int>(json_long(d.value("conj_frobenius_power", json(0)), "conj")));
}

// ---------------------------------------------------------------- entry points

void validate_scenario(const json& s) {
  require(s.is_object(), "schema: scenario must be a JSON object");
  reject_floats(s, "scenario");
  require(s.contains("name") && s["name"].is_string(), "schema: scenario lacks a string \"name\"");
  require(s.contains("kind") && s["kind"].is_string(), "schema: scenario lacks a string \"kind\"");
  const std::string kind = s["kind"];
  require(kKinds.count(kind) > 0, "schema: unknown kind \"" + kind + "\"");
  if (s.contains("claim")) require(s["claim"].is_string(), "schema: claim must be a string");
  if (s.contains("expected")) require(s["expected"].is_object(), "schema: expected must be an object");
  if (kind == "number_field_code") {
    for (auto k : {"field", "p", "lambda", "code"}) need(s, k, "number_field_code");
  } else if (kind == "cyclic_algebra_code") {
    for (auto k : {"cyclic_algebra", "p", "lambda", "code"}) need(s, k, "cyclic_algebra_code");
    for (auto k : {"field", "sigma", "gamma", "n"}) need(s["cyclic_algebra"], k, "cyclic_algebra");
  } else if (kind == "raw_quotient") {
    for (auto k : {"gram", "p", "codes"}) need(s, k, "raw_quotient");
  } else if (kind == "factorization_table") {
    for (auto k : {"alpha_order", "primes"}) need(s, k, "factorization_table");
  } else {
    for (auto k : {"fq", "n", "gamma_bar"}) need(s, k, "skew_divisors");
  }
  if (s.contains("analysis")) {
    const json& a = s["analysis"];
    require(a.is_object(), "schema: analysis must be an object");
    if (a.contains("named")) parse_named_lattice(a["named"].get<std::string>());
  }
}

json load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open scenario file " + path.string());
  json s;
  try {
    s = json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError("schema: " + path.string() + " is not valid JSON: " + e.what());
  }
  validate_scenario(s);
  return s;
}

json run_scenario(const json& s, const RunOptions& opt) {
  validate_scenario(s);
  json report;
  report["scenario"] = s["name"];
  report["kind"] = s["kind"];
  if (s.contains("claim")) report["claim"] = s["claim"];
  json input = s;
  input.erase("expected");
  report["input"] = input;
  const std::string kind = s["kind"];
  json body;
  if (kind == "number_field_code") body = run_number_field(s, opt);
  else if (kind == "cyclic_algebra_code") body = run_cyclic(s, opt);
  else if (kind == "raw_quotient") body = run_raw(s, opt);
  else if (kind == "factorization_table") body = run_table(s);
  else body = run_skew(s, opt);
  for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = it.value();
  return report;
}

json list_divisors(const json& s, const RunOptions& opt) {
  validate_scenario(s);
  const std::string kind = s["kind"];
  json out;
  out["scenario"] = s["name"];
  if (kind == "factorization_table") {
    out["tables"] = table_rows(s);
  } else if (kind == "number_field_code") {
    RingPtr rp = parse_field(s["field"]);
    const i64 p = parse_prime(s);
    RingAutomorphism conj = parse_automorphism(*rp, s.value("conj", json("conjugation")));
    IntegralIdeal I = select_ideal(*rp, s.value("ideal", json()), p);
    FieldElement beta = s.contains("residue_generator") ? parse_element(*rp, s["residue_generator"]) : rp->generator(0);
    ResiduePresentation pres(*rp, I, p, beta);
    out["mu"] = pres.mu().to_string();
    json rows = json::array();
    for (const auto& g : divisors(pres.mu())) {
      FpPoly gs = conjugate_image_polynomial(*rp, g, pres, conj);
      DualGenerator dg = dual_generator(g, pres.mu(), gs);
      rows.push_back({{"g", g.to_string()}, {"g_star", gs.to_string()}, {"g_perp", dg.g_perp.to_string()},
                      {"self_orthogonal", dg.self_orthogonal}, {"self_dual", dg.self_dual}});
    }
    out["divisors"] = rows;
  } else if (kind == "cyclic_algebra_code") {
    CyclicSetup cs = cyclic_setup(s);
    FieldElement lambda = parse_element(*cs.ring, need(s, "lambda", "scenario"));
    FpPoly lc = residue_class_of_unit(*cs.ring, lambda, cs.res.pres);
    const Fq& fq = cs.res.fq;
    out["central"] = to_string(fq, skew_central_binomial(fq, static_cast<std::size_t>(cs.ctx.n()), cs.res.gamma_bar));
    out["mode"] = mode_name(cs.mode);
    out["divisors"] = skew_table(fq, cs.res.gamma_bar, cs.ctx.n(), cs.mode, &lc, opt);
  } else if (kind == "skew_divisors") {
    json r = run_skew(s, opt);
    out["central"] = r["central"];
    out["divisors"] = r["divisors"];
  } else {
    throw PreconditionError("list-divisors: kind \"" + kind + "\" has no divisor table");
  }
  return out;
}

std::vector<std::string> expectation_mismatches(const json& scenario, const json& report) {
  std::vector<std::string> out;
  if (!scenario.contains("expected")) return out;
  require(report.contains("summary"), "report has no summary");
  subset_match(scenario["expected"], report["summary"], "", out);
  return out;
}

std::vector<std::filesystem::path> fixture_paths(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

SelfcheckSummary selfcheck(const std::filesystem::path& fixture_dir, bool quick, const RunOptions& opt,
                           std::ostream& log) {
  SelfcheckSummary sum;
  for (const auto& path : fixture_paths(fixture_dir)) {
    std::string name = path.stem().string();
    try {
      json s = load_scenario(path);
      json report = run_scenario(s, opt);
      auto mism = expectation_mismatches(s, report);
      if (!s.contains("expected")) mism.push_back("fixture has no expected block");
      if (mism.empty()) {
        ++sum.passed;
        log << "PASS fixture " << name << "\n";
      } else {
        ++sum.failed;
        log << "FAIL fixture " << name;
        for (const auto& m : mism) log << "\n    " << m;
        log << "\n";
      }
    } catch (const std::exception& e) {
      ++sum.failed;
      log << "FAIL fixture " << name << ": " << e.what() << "\n";
    }
  }
  if (!quick) {
    for (const auto& pr : run_property_suites(kPropertySeed, kPropertyCases)) {
      if (pr.failures == 0) {
        ++sum.passed;
        log << "PASS property " << pr.name << " (" << pr.cases << " cases)\n";
      } else {
        ++sum.failed;
        log << "FAIL property " << pr.name << ": " << pr.failures << "/" << pr.cases << " failed; first: "
            << pr.first_failure << "\n";
      }
    }
  }
  log << "selfcheck: " << sum.passed << " passed, " << sum.failed << " failed\n";
  return sum;
}

}  // namespace lf
