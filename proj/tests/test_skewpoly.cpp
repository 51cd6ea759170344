#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latticeforge/skewpoly.hpp"

using namespace lf;

namespace {

std::mt19937_64 rng(5151);

long rnd(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

std::vector<Fq> fields() {
  return {Fq::prime_field(5), Fq(2, FpPoly(2, {1, 1, 1}), 1, 1), Fq(3, FpPoly(3, {1, 0, 1}), 1, 1),
          Fq(5, FpPoly(5, {2, 0, 1}), 1, 1), Fq(2, FpPoly(2, {1, 1, 0, 1}), 1, 0)};
}

FpPoly random_elem(const Fq& fq) { return fq.element(static_cast<std::uint64_t>(rnd(0, static_cast<long>(fq.size()) - 1))); }

SkewPoly random_skew(const Fq& fq, int deg) {
  std::vector<FpPoly> c;
  for (int k = 0; k <= deg; ++k) c.push_back(random_elem(fq));
  return skew_trim(fq, c);
}

SkewPoly random_monic(const Fq& fq, int deg) {
  std::vector<FpPoly> c;
  for (int k = 0; k < deg; ++k) c.push_back(random_elem(fq));
  c.push_back(fq.one());
  return skew_trim(fq, c);
}

SkewPoly monomial(const Fq& fq, std::size_t k, const FpPoly& a) { return skew_x_power(fq, k, a); }

// All monic right divisors of X^n - gamma of the given degree, by exhaustion.
std::vector<SkewPoly> brute_divisors(const Fq& fq, const FpPoly& gamma, int n, int degree) {
  std::vector<SkewPoly> out;
  SkewPoly target = skew_central_binomial(fq, static_cast<std::size_t>(n), gamma);
  std::uint64_t total = 1;
  for (int k = 0; k < degree; ++k) total *= fq.size();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<FpPoly> c;
    std::uint64_t r = idx;
    for (int k = 0; k < degree; ++k) {
      c.push_back(fq.element(r % fq.size()));
      r /= fq.size();
    }
    c.push_back(fq.one());
    SkewPoly g = skew_trim(fq, c);
    if (skew_divmod(fq, target, g, Side::Right).r.is_zero()) out.push_back(g);
  }
  return out;
}

}  // namespace

TEST_CASE("finite field arithmetic") {
  for (const Fq& fq : fields()) {
    for (int t = 0; t < 100; ++t) {
      FpPoly a = random_elem(fq), b = random_elem(fq), c = random_elem(fq);
      CHECK(fq.mul(a, fq.add(b, c)) == fq.add(fq.mul(a, b), fq.mul(a, c)));
      CHECK(fq.frobenius(fq.mul(a, b), 1) == fq.mul(fq.frobenius(a, 1), fq.frobenius(b, 1)));
      CHECK(fq.frobenius(a, fq.degree()) == a);
      CHECK(fq.twist(fq.twist(a, 1), -1) == a);
      if (!fq.is_zero(a)) CHECK(fq.mul(a, fq.inv(a)) == fq.one());
    }
    // The Frobenius fixes exactly the prime field.
    std::uint64_t fixed = 0;
    for (std::uint64_t i = 0; i < fq.size(); ++i)
      if (fq.frobenius(fq.element(i), 1) == fq.element(i)) ++fixed;
    CHECK(fixed == static_cast<std::uint64_t>(fq.p()));
  }
  CHECK_THROWS_AS(Fq(3, FpPoly(3, {2, 0, 1}), 1, 1), PreconditionError);  // t^2 - 1 is reducible
}

TEST_CASE("skew multiplication follows the commutation rule") {
  for (const Fq& fq : fields()) {
    for (int t = 0; t < 30; ++t) {
      FpPoly a = random_elem(fq);
      // a X = X a^sigma
      CHECK(skew_mul(fq, skew_constant(fq, a), monomial(fq, 1, fq.one())) == skew_trim(fq, {fq.zero(), fq.twist(a, 1)}));
    }
  }
}

TEST_CASE("skew ring axioms") {
  for (const Fq& fq : fields()) {
    for (int t = 0; t < 60; ++t) {
      SkewPoly f = random_skew(fq, static_cast<int>(rnd(0, 4)));
      SkewPoly g = random_skew(fq, static_cast<int>(rnd(0, 4)));
      SkewPoly h = random_skew(fq, static_cast<int>(rnd(0, 4)));
      CHECK(skew_mul(fq, skew_mul(fq, f, g), h) == skew_mul(fq, f, skew_mul(fq, g, h)));
      CHECK(skew_mul(fq, f, skew_add(fq, g, h)) == skew_add(fq, skew_mul(fq, f, g), skew_mul(fq, f, h)));
      CHECK(skew_mul(fq, skew_add(fq, f, g), h) == skew_add(fq, skew_mul(fq, f, h), skew_mul(fq, g, h)));
      if (!f.is_zero() && !g.is_zero()) CHECK(skew_mul(fq, f, g).degree() == f.degree() + g.degree());
    }
  }
}

TEST_CASE("left and right division") {
  for (const Fq& fq : fields()) {
    for (int t = 0; t < 500; ++t) {
      SkewPoly f = random_skew(fq, static_cast<int>(rnd(0, 7)));
      SkewPoly g = random_skew(fq, static_cast<int>(rnd(0, 4)));
      if (g.is_zero()) continue;
      SkewDivision l = skew_divmod(fq, f, g, Side::Left);
      CHECK(skew_add(fq, skew_mul(fq, g, l.q), l.r) == f);
      CHECK(l.r.degree() < g.degree());
      SkewDivision r = skew_divmod(fq, f, g, Side::Right);
      CHECK(skew_add(fq, skew_mul(fq, r.q, g), r.r) == f);
      CHECK(r.r.degree() < g.degree());
    }
  }
  Fq f5 = Fq::prime_field(5);
  CHECK_THROWS_AS(skew_divmod(f5, skew_constant(f5, f5.one()), SkewPoly{}, Side::Left), PreconditionError);
}

TEST_CASE("centrality") {
  Fq f9(3, FpPoly(3, {1, 0, 1}), 1, 1);
  CHECK(is_central(f9, skew_central_binomial(f9, 2, f9.scalar(2)), 2));
  CHECK(is_central(f9, skew_central_binomial(f9, 4, f9.scalar(1)), 4));
  // X^2 - t is not central: t is not fixed by sigma.
  CHECK_FALSE(is_central(f9, skew_central_binomial(f9, 2, f9.gen()), 2));
  // X alone does not commute with F_9 when sigma is the Frobenius.
  CHECK_FALSE(is_central(f9, monomial(f9, 1, f9.one()), 2));
  CHECK(is_central(f9, skew_constant(f9, f9.scalar(2)), 2));
}

TEST_CASE("central divisor search matches exhaustion") {
  struct Case {
    Fq fq;
    int n;
    i64 gamma;
  };
  std::vector<Case> cases{{Fq(2, FpPoly(2, {1, 1, 1}), 1, 1), 2, 1},
                          {Fq(2, FpPoly(2, {1, 1, 1}), 1, 1), 4, 1},
                          {Fq(3, FpPoly(3, {1, 0, 1}), 1, 1), 2, 2},
                          {Fq(3, FpPoly(3, {1, 0, 1}), 1, 1), 4, 2},
                          {Fq::prime_field(5), 4, 4},
                          {Fq::prime_field(7), 3, 1}};
  for (const auto& c : cases) {
    for (int d = 1; d < c.n; ++d) {
      auto found = central_divisors(c.fq, c.fq.scalar(c.gamma), c.n, d);
      auto brute = brute_divisors(c.fq, c.fq.scalar(c.gamma), c.n, d);
      CHECK(found == brute);
      SkewPoly target = skew_central_binomial(c.fq, static_cast<std::size_t>(c.n), c.fq.scalar(c.gamma));
      for (const auto& g : found) CHECK(skew_divmod(c.fq, target, g, Side::Left).r.is_zero());
    }
  }
}

TEST_CASE("divisor search respects the budget") {
  Fq f9(3, FpPoly(3, {1, 0, 1}), 1, 1);
  CHECK_THROWS_AS(central_divisors(f9, f9.scalar(2), 8, 4, 1000), UnsupportedError);
  CHECK_THROWS_AS(central_divisors(f9, f9.gen(), 2, 1), PreconditionError);
}

TEST_CASE("g_tau on the prime field reverses coefficients") {
  Fq f5 = Fq::prime_field(5);
  SkewPoly g = skew_trim(f5, {f5.scalar(3), f5.zero(), f5.one()});
  SkewPoly gt = g_tau(f5, g, 4, f5.scalar(4));
  CHECK(to_string(f5, gt) == "X^2 + 2");
  SkewDual d = dual_divisor(f5, g, DualMode::Ramified, 4, f5.scalar(4));
  CHECK(d.h == g);
  CHECK(d.self_dual);
  // X + a maps to X + a^{-1}.
  for (i64 a = 1; a < 5; ++a) {
    SkewPoly x = skew_trim(f5, {f5.scalar(a), f5.one()});
    if (!skew_divmod(f5, skew_central_binomial(f5, 4, f5.scalar(4)), x, Side::Right).r.is_zero()) continue;
    CHECK(g_tau(f5, x, 4, f5.scalar(4)) == skew_trim(f5, {f5.scalar(mod_inv(a, 5)), f5.one()}));
  }
}

TEST_CASE("g_tau is an involution and h g_tau recovers the central element") {
  struct Case {
    Fq fq;
    int n;
    i64 gamma;
  };
  std::vector<Case> cases{{Fq(3, FpPoly(3, {1, 0, 1}), 1, 1), 2, 2},
                          {Fq(3, FpPoly(3, {1, 0, 1}), 1, 1), 4, 2},
                          {Fq(3, FpPoly(3, {1, 0, 1}), 0, 1), 4, 2},
                          {Fq::prime_field(7), 6, 6}};
  for (const auto& c : cases) {
    FpPoly gamma = c.fq.scalar(c.gamma);
    SkewPoly target = skew_central_binomial(c.fq, static_cast<std::size_t>(c.n), gamma);
    for (int d = 1; d < c.n; ++d) {
      for (const auto& g : central_divisors(c.fq, gamma, c.n, d)) {
        SkewPoly gt = g_tau(c.fq, g, c.n, gamma);
        CHECK(gt.degree() == g.degree());
        CHECK(g_tau(c.fq, gt, c.n, gamma) == g);
        // Ramified mode needs trivial sigma; the inert form with lambda = 1 covers the rest.
        FpPoly one = c.fq.one();
        SkewDual dd = c.fq.sigma_is_identity() ? dual_divisor(c.fq, g, DualMode::Ramified, c.n, gamma)
                                               : dual_divisor(c.fq, g, DualMode::Inert, c.n, gamma, &one);
        CHECK(skew_mul(c.fq, dd.h, gt) == target);
        CHECK(dd.self_dual == (dd.h == g));
      }
    }
  }
}

TEST_CASE("g_tau_lambda reduces to g_tau at lambda = 1") {
  Fq f25(5, FpPoly(5, {2, 0, 1}), 1, 1);
  FpPoly gamma = f25.scalar(4);
  for (const auto& g : central_divisors(f25, gamma, 2, 1)) {
    CHECK(g_tau_lambda(f25, g, f25.one(), 2, gamma) == g_tau(f25, g, 2, gamma));
    FpPoly lam = f25.scalar(3);
    SkewDual d = dual_divisor(f25, g, DualMode::Inert, 2, gamma, &lam);
    CHECK(skew_mul(f25, d.h, d.g_tau) == skew_central_binomial(f25, 2, gamma));
  }
  SkewPoly bad = skew_trim(f25, {f25.scalar(1), f25.one()});
  CHECK_THROWS_AS(g_tau(f25, skew_trim(f25, {f25.scalar(2), f25.scalar(2)}), 2, gamma), PreconditionError);
  CHECK_THROWS_AS(dual_divisor(f25, bad, DualMode::Inert, 2, gamma), PreconditionError);
}

TEST_CASE("monic random products divide their multiples") {
  Fq f8(2, FpPoly(2, {1, 1, 0, 1}), 1, 0);
  for (int t = 0; t < 100; ++t) {
    SkewPoly g = random_monic(f8, static_cast<int>(rnd(1, 3)));
    SkewPoly q = random_skew(f8, static_cast<int>(rnd(0, 3)));
    if (q.is_zero()) continue;
    CHECK(skew_divmod(f8, skew_mul(f8, q, g), g, Side::Right).r.is_zero());
    CHECK(skew_divmod(f8, skew_mul(f8, g, q), g, Side::Left).r.is_zero());
  }
}
