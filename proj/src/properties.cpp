#include "latticeforge/properties.hpp"

#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include "latticeforge/cyclicalg.hpp"
#include "latticeforge/lattice.hpp"
#include "latticeforge/skewpoly.hpp"

namespace lf {

namespace {

using Rng = std::mt19937_64;

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

// Positive definite integral Gram A A^T with A random and nonsingular.
RatMatrix random_gram(Rng& rng, std::size_t n) {
  for (;;) {
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = uniform(rng, -3, 3);
    if (det_int(a) == 0) continue;
    return to_rat(a * a.transpose());
  }
}

FpCode random_code(Rng& rng, i64 p, std::size_t n) {
  std::size_t k = static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(n)));
  FpMatrix g(p, 0, n);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<i64> row(n);
    for (auto& x : row) x = uniform(rng, 0, p - 1);
    g.append_row(row);
  }
  return FpCode(p, n, g);
}

FpCode code_sum(const FpCode& a, const FpCode& b) {
  FpMatrix g = a.generator();
  for (std::size_t i = 0; i < b.dimension(); ++i) g.append_row(b.generator().row(i));
  return FpCode(a.p(), a.ambient(), g);
}

const i64 kPrimes[] = {2, 3, 5};

std::string thm_gamma_case(Rng& rng) {
  std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 6));
  i64 p = kPrimes[uniform(rng, 0, 2)];
  RatMatrix G = random_gram(rng, n);
  IntMatrix N = IntMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) N(i, i) = p;
  QuotientCtx q = build_quotient(N, G, p);
  FpCode c = random_code(rng, p, n);
  FpCode c2 = random_code(rng, p, n);
  if (uniform(rng, 0, 1)) c2 = code_sum(c, c2);
  for (const auto& it : verify_thm_gamma(q, c, c2))
    if (!it.passed) return "n=" + std::to_string(n) + " p=" + std::to_string(p) + " " + it.name + ": " + it.detail;
  return {};
}

// Radical dimension three ways: radical_check, kernel of the reduced Gram, and
// the index [pM^# cap M : pM] from an explicit intersection.
std::string radical_case(Rng& rng) {
  std::size_t n = static_cast<std::size_t>(uniform(rng, 1, 6));
  i64 p = kPrimes[uniform(rng, 0, 2)];
  RatMatrix G = random_gram(rng, n);
  IntMatrix N = IntMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) N(i, i) = p;
  QuotientCtx q = build_quotient(N, G, p);
  std::size_t d1 = radical_check(q).dimension();
  std::size_t d2 = form_radical(q.form).dimension();

  RatMatrix dual = inverse_exact(G);
  for (auto i = 0u; i < n; ++i)
    for (auto j = 0u; j < n; ++j) dual(i, j) *= p;
  auto [dint, den] = clear_denominators(dual);
  IntMatrix big = IntMatrix::identity(n);
  for (auto i = 0u; i < n; ++i) big(i, i) = den;
  IntMatrix x = lattice_intersection(dint, big);
  Int idx = abs(det_int(x));
  for (auto i = 0u; i < n; ++i) idx /= den;  // [M : pM^# cap M]
  std::size_t d3 = 0;
  Int rest = 1;
  for (auto i = 0u; i < n; ++i) rest *= p;
  rest /= idx;  // [pM^# cap M : pM] = p^dim
  while (rest > 1) {
    rest /= p;
    ++d3;
  }
  if (d1 != d2 || d1 != d3)
    return "radical dims " + std::to_string(d1) + "/" + std::to_string(d2) + "/" + std::to_string(d3);
  return {};
}

std::vector<RingPtr> determinant_fields() {
  return {RingOfIntegers::quadratic(-5), RingOfIntegers::quadratic(-3), RingOfIntegers::quadratic(2),
          RingOfIntegers::cyclotomic(5), RingOfIntegers::cyclotomic(8),
          RingOfIntegers::compositum(RingOfIntegers::quadratic(2), RingOfIntegers::quadratic(-3))};
}

FieldElement random_integral(Rng& rng, const RingOfIntegers& r, long bound) {
  std::vector<Rat> c(r.degree());
  for (auto& x : c) x = uniform(rng, -bound, bound);
  return FieldElement(c);
}

std::string trace_det_case(Rng& rng, const std::vector<RingPtr>& fields) {
  const RingOfIntegers& r = *fields[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(fields.size()) - 1))];
  FieldElement a = random_integral(rng, r, 4), b = random_integral(rng, r, 4);
  if (a.is_zero()) a = r.one();
  FractionalIdeal J = as_fractional(ideal_from_generators(r, {a, b}));
  if (uniform(rng, 0, 1)) J.den = uniform(rng, 1, 3);
  J = normalize(r, J);
  Rat lam(uniform(rng, 1, 7), uniform(rng, 1, 5));
  lam.canonicalize();
  RatMatrix G = trace_form_gram(r, J, r.scalar(lam), r.conjugation());
  Rat nj = ideal_norm(r, J);
  Rat expect = nj * nj * abs(r.discriminant());
  for (std::size_t i = 0; i < r.degree(); ++i) expect *= lam;
  Rat got = det_exact(G);
  if (got != expect) return r.label() + ": det " + to_string(got) + " != " + to_string(expect);
  return {};
}

std::vector<Fq> skew_fields() {
  return {Fq::prime_field(5), Fq(5, FpPoly(5, {2, 0, 1}), 1, 0), Fq(3, FpPoly(3, {1, 0, 1}), 1, 1),
          Fq(2, FpPoly(2, {1, 1, 0, 1}), 1, 0), Fq(3, FpPoly(3, {1, 2, 0, 1}), 2, 0)};
}

SkewPoly random_skew(Rng& rng, const Fq& fq, int deg, bool nonzero_lead) {
  std::vector<FpPoly> c;
  for (int i = 0; i <= deg; ++i) c.push_back(fq.element(static_cast<std::uint64_t>(uniform(rng, 0, static_cast<long>(fq.size()) - 1))));
  if (nonzero_lead && fq.is_zero(c.back())) c.back() = fq.one();
  return skew_trim(fq, c);
}

std::string skew_division_case(Rng& rng, const std::vector<Fq>& fields) {
  const Fq& fq = fields[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(fields.size()) - 1))];
  SkewPoly f = random_skew(rng, fq, static_cast<int>(uniform(rng, 0, 8)), false);
  SkewPoly g = random_skew(rng, fq, static_cast<int>(uniform(rng, 0, 4)), true);
  for (Side side : {Side::Left, Side::Right}) {
    SkewDivision d = skew_divmod(fq, f, g, side);
    SkewPoly back = side == Side::Left ? skew_mul(fq, g, d.q) : skew_mul(fq, d.q, g);
    back = skew_add(fq, back, d.r);
    if (back.c != f.c) return "reconstruction failed for " + to_string(fq, f) + " by " + to_string(fq, g);
    if (d.r.degree() >= g.degree()) return "remainder degree not below divisor degree";
  }
  SkewPoly fg = skew_mul(fq, f, g);
  if (!f.is_zero() && fg.degree() != f.degree() + g.degree()) return "degree law failed";
  return {};
}

struct SkewSetup {
  Fq fq;
  int n;
  FpPoly gamma_bar;
  DualMode mode;
  std::optional<FpPoly> lambda;
  std::vector<SkewPoly> divisors;
};

std::vector<SkewSetup> skew_setups() {
  std::vector<SkewSetup> out;
  auto add = [&](Fq fq, int n, i64 gamma, DualMode mode, std::optional<FpPoly> lambda) {
    FpPoly gb = fq.scalar(mod_norm(gamma, fq.p()));
    std::vector<SkewPoly> ds;
    for (int d = 0; d <= n; ++d)
      for (auto& g : central_divisors(fq, gb, n, d)) ds.push_back(g);
    out.push_back(SkewSetup{std::move(fq), n, gb, mode, std::move(lambda), std::move(ds)});
  };
  add(Fq::prime_field(5), 2, -1, DualMode::Ramified, std::nullopt);
  add(Fq::prime_field(5), 4, -1, DualMode::Ramified, std::nullopt);
  add(Fq::prime_field(13), 2, -1, DualMode::Ramified, std::nullopt);
  add(Fq(5, FpPoly(5, {2, 0, 1}), 1, 1), 2, -1, DualMode::Inert, FpPoly(5, {3}));
  add(Fq(3, FpPoly(3, {1, 0, 1}), 1, 1), 2, -1, DualMode::Inert, FpPoly(3, {2}));
  add(Fq(3, FpPoly(3, {1, 0, 1}), 1, 1), 4, -1, DualMode::Inert, FpPoly(3, {1}));
  return out;
}

std::string g_tau_case(Rng& rng, const std::vector<SkewSetup>& setups) {
  const SkewSetup& s = setups[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(setups.size()) - 1))];
  const SkewPoly& g = s.divisors[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(s.divisors.size()) - 1))];
  SkewDual du = dual_divisor(s.fq, g, s.mode, s.n, s.gamma_bar, s.lambda ? &*s.lambda : nullptr);
  SkewPoly central = skew_central_binomial(s.fq, static_cast<std::size_t>(s.n), s.gamma_bar);
  if (skew_mul(s.fq, du.h, du.g_tau).c != central.c)
    return "h g_tau != X^n - gamma for g = " + to_string(s.fq, g);
  return {};
}

struct ResidueSetup {
  RingPtr r;
  IntegralIdeal ideal;
  ResiduePresentation pres;
};

std::vector<ResidueSetup> residue_setups() {
  std::vector<ResidueSetup> out;
  auto add = [&](RingPtr r, IntegralIdeal I, i64 p, FieldElement beta) {
    ResiduePresentation pres(*r, I, p, beta);
    out.push_back(ResidueSetup{r, I, std::move(pres)});
  };
  {
    auto r = RingOfIntegers::compositum(RingOfIntegers::cyclotomic(8), RingOfIntegers::cyclotomic(3));
    add(r, p_radical(*r, 3), 3, r->generator(0));
  }
  {
    auto r = RingOfIntegers::cyclotomic(5);
    auto I = primes_above(*r, 5)[0].ideal;
    add(r, as_integral(ideal_power(*r, as_fractional(I), 3)), 5, r->generator(0));
  }
  {
    auto r = RingOfIntegers::quadratic(-5);
    add(r, primes_above(*r, 5)[0].ideal, 5, r->generator(0));
  }
  {
    auto r = RingOfIntegers::cyclotomic(7);
    add(r, ideal_from_generators(*r, {r->scalar(2)}), 2, r->generator(0));
  }
  return out;
}

std::string residue_case(Rng& rng, const std::vector<ResidueSetup>& setups) {
  const ResidueSetup& s = setups[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(setups.size()) - 1))];
  const RingOfIntegers& r = *s.r;
  const i64 p = s.pres.p();
  FieldElement x = random_integral(rng, r, 20);
  FieldElement back = s.pres.from_class(s.pres.to_class(x));
  if (!ideal_contains(as_fractional(s.ideal), r.sub(back, x))) return "from_class(to_class(x)) - x not in I";
  std::vector<i64> c(static_cast<std::size_t>(s.pres.mu().degree()));
  for (auto& v : c) v = uniform(rng, 0, p - 1);
  FpPoly cls(p, c);
  if (s.pres.to_class(s.pres.from_class(cls)) != cls) return "to_class(from_class(c)) != c";
  if (s.pres.reduce(x.to_int()) != s.pres.reduce(back.to_int())) return "reduce differs on congruent elements";
  return {};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

PropertyResult drive(const std::string& name, std::uint64_t seed, std::size_t cases,
                     const std::function<std::string(Rng&)>& one) {
  PropertyResult res{name, cases, 0, {}};
  Rng rng(seed ^ fnv1a(name));
  for (std::size_t i = 0; i < cases; ++i) {
    std::string fail;
    try {
      fail = one(rng);
    } catch (const std::exception& e) {
      fail = std::string("exception: ") + e.what();
    }
    if (!fail.empty()) {
      if (res.failures == 0) res.first_failure = "case " + std::to_string(i) + ": " + fail;
      ++res.failures;
    }
  }
  return res;
}

}  // namespace

PropertyResult run_property_suite(const std::string& name, std::uint64_t seed, std::size_t cases) {
  if (name == "thm_gamma") return drive(name, seed, cases, thm_gamma_case);
  if (name == "radical_two_routes") return drive(name, seed, cases, radical_case);
  if (name == "trace_form_determinant") {
    auto fields = determinant_fields();
    return drive(name, seed, cases, [&](Rng& rng) { return trace_det_case(rng, fields); });
  }
  if (name == "skew_division") {
    auto fields = skew_fields();
    return drive(name, seed, cases, [&](Rng& rng) { return skew_division_case(rng, fields); });
  }
  if (name == "g_tau_identity") {
    auto setups = skew_setups();
    return drive(name, seed, cases, [&](Rng& rng) { return g_tau_case(rng, setups); });
  }
  if (name == "residue_round_trip") {
    auto setups = residue_setups();
    return drive(name, seed, cases, [&](Rng& rng) { return residue_case(rng, setups); });
  }
  throw PreconditionError("unknown property suite \"" + name + "\"");
}

std::vector<PropertyResult> run_property_suites(std::uint64_t seed, std::size_t cases) {
  std::vector<PropertyResult> out;
  for (const char* n : {"thm_gamma", "radical_two_routes", "trace_form_determinant", "skew_division",
                        "g_tau_identity", "residue_round_trip"})
    out.push_back(run_property_suite(n, seed, cases));
  return out;
}

}  // namespace lf
