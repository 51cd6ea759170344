#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latticeforge/ringints.hpp"

using namespace lf;

namespace {

std::mt19937_64 rng(9090);

long rnd(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

FieldElement random_element(const RingOfIntegers& r, long b) {
  std::vector<Rat> c(r.degree());
  for (auto& x : c) x = rnd(-b, b);
  return FieldElement(c);
}

std::vector<RingPtr> fixture_fields() {
  return {RingOfIntegers::quadratic(-5),
          RingOfIntegers::quadratic(-3),
          RingOfIntegers::cyclotomic(5),
          RingOfIntegers::cyclotomic(8),
          RingOfIntegers::real_cyclotomic(17),
          RingOfIntegers::compositum(RingOfIntegers::quadratic(2), RingOfIntegers::quadratic(-3)),
          RingOfIntegers::compositum(RingOfIntegers::cyclotomic(8), RingOfIntegers::cyclotomic(3))};
}

ZPoly zp(std::initializer_list<long> c) {
  ZPoly out;
  for (long x : c) out.push_back(Int(x));
  return out;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(8) == zp({1, 0, 0, 0, 1}));
  CHECK(cyclotomic_polynomial(9) == zp({1, 0, 0, 1, 0, 0, 1}));
  CHECK(cyclotomic_polynomial(12) == zp({1, 0, -1, 0, 1}));
  CHECK(cyclotomic_polynomial(7) == zp({1, 1, 1, 1, 1, 1, 1}));
  // zeta_5 + zeta_5^-1 satisfies X^2 + X - 1.
  CHECK(real_cyclotomic_polynomial(5) == zp({-1, 1, 1}));
}

TEST_CASE("discriminants of the fixture fields") {
  CHECK(RingOfIntegers::quadratic(-5)->discriminant() == -20);
  CHECK(RingOfIntegers::quadratic(-3)->discriminant() == -3);
  CHECK(RingOfIntegers::quadratic(2)->discriminant() == 8);
  CHECK(RingOfIntegers::cyclotomic(5)->discriminant() == 125);
  CHECK(RingOfIntegers::cyclotomic(8)->discriminant() == 256);
  Int d17 = 1;
  for (int i = 0; i < 7; ++i) d17 *= 17;
  CHECK(RingOfIntegers::real_cyclotomic(17)->discriminant() == d17);
  auto c = RingOfIntegers::compositum(RingOfIntegers::quadratic(2), RingOfIntegers::quadratic(-3));
  CHECK(c->discriminant() == 576);
  CHECK_THROWS_AS(RingOfIntegers::compositum(RingOfIntegers::quadratic(2), RingOfIntegers::cyclotomic(8)),
                  PreconditionError);
}

TEST_CASE("trace, norm and multiplication are consistent") {
  for (const auto& rp : fixture_fields()) {
    const RingOfIntegers& r = *rp;
    CHECK(r.trace(r.one()) == Rat(static_cast<long>(r.degree())));
    for (int t = 0; t < 15; ++t) {
      FieldElement a = random_element(r, 5), b = random_element(r, 5);
      CHECK(r.norm(r.mul(a, b)) == r.norm(a) * r.norm(b));
      CHECK(r.trace(r.add(a, b)) == r.trace(a) + r.trace(b));
      if (!a.is_zero()) CHECK(r.mul(a, r.invert(a)) == r.one());
    }
  }
}

TEST_CASE("automorphisms are ring homomorphisms and conjugation is an involution") {
  for (const auto& rp : fixture_fields()) {
    const RingOfIntegers& r = *rp;
    RingAutomorphism c = r.conjugation();
    for (int t = 0; t < 10; ++t) {
      FieldElement a = random_element(r, 4), b = random_element(r, 4);
      CHECK(c.apply(r.mul(a, b)) == r.mul(c.apply(a), c.apply(b)));
      CHECK(c.apply(c.apply(a)) == a);
    }
  }
  auto z5 = RingOfIntegers::cyclotomic(5);
  CHECK(z5->galois(2).order() == 4);
  CHECK(z5->galois(4) == z5->conjugation());
  auto r17 = RingOfIntegers::real_cyclotomic(17);
  CHECK(r17->galois(9).order() == 4);
  CHECK(r17->conjugation().is_identity());
  auto q = RingOfIntegers::compositum(RingOfIntegers::quadratic(2), RingOfIntegers::quadratic(-3));
  CHECK(q->galois(-1, 1).order() == 2);
  CHECK(q->galois(1, -1) == q->conjugation());
}

TEST_CASE("prime decomposition recombines to pO") {
  struct Case {
    RingPtr r;
    i64 p;
    std::size_t count;
    int e, f;
  };
  std::vector<Case> cases{{RingOfIntegers::cyclotomic(5), 5, 1, 4, 1},
                          {RingOfIntegers::quadratic(-5), 5, 1, 2, 1},
                          {RingOfIntegers::quadratic(-5), 3, 2, 1, 1},
                          {RingOfIntegers::cyclotomic(8), 3, 2, 1, 2},
                          {RingOfIntegers::cyclotomic(13), 13, 1, 12, 1},
                          {RingOfIntegers::real_cyclotomic(17), 17, 1, 8, 1},
                          {RingOfIntegers::compositum(RingOfIntegers::quadratic(2), RingOfIntegers::quadratic(-3)), 3, 1,
                           2, 2}};
  for (const auto& c : cases) {
    const RingOfIntegers& r = *c.r;
    auto primes = primes_above(r, c.p);
    REQUIRE(primes.size() == c.count);
    FractionalIdeal prod = as_fractional(unit_ideal(r));
    for (const auto& pr : primes) {
      CHECK(pr.e == c.e);
      CHECK(pr.f == c.f);
      prod = ideal_product(r, prod, ideal_power(r, as_fractional(pr.ideal), pr.e));
    }
    CHECK(as_integral(prod) == ideal_from_generators(r, {r.scalar(Rat(c.p))}));
  }
}

TEST_CASE("different ideal has norm |d_L| and inverts the trace dual") {
  for (const auto& rp : fixture_fields()) {
    const RingOfIntegers& r = *rp;
    IntegralIdeal d = different_ideal(r);
    CHECK(ideal_norm(d) == abs(r.discriminant()));
    FractionalIdeal inv = ideal_inverse(r, as_fractional(d));
    CHECK(inv == trace_dual(r, as_fractional(unit_ideal(r))));
  }
}

TEST_CASE("trace form determinant formula") {
  for (const auto& rp : fixture_fields()) {
    const RingOfIntegers& r = *rp;
    for (int t = 0; t < 30; ++t) {
      FieldElement a = random_element(r, 3);
      if (a.is_zero()) a = r.one();
      FractionalIdeal J = as_fractional(ideal_from_generators(r, {a, random_element(r, 3)}));
      Rat lam(rnd(1, 5), rnd(1, 5));
      lam.canonicalize();
      RatMatrix G = trace_form_gram(r, J, r.scalar(lam), r.conjugation());
      Rat nj = ideal_norm(r, J);
      Rat expect = nj * nj * abs(r.discriminant());
      for (std::size_t i = 0; i < r.degree(); ++i) expect *= lam;
      CHECK(det_exact(G) == expect);
      CHECK(is_positive_definite(G));
    }
  }
}

TEST_CASE("dual ideal matches the inverse Gram") {
  auto r = RingOfIntegers::cyclotomic(5);
  FractionalIdeal J = as_fractional(primes_above(*r, 5)[0].ideal);
  FieldElement lam = r->one();
  RatMatrix G = trace_form_gram(*r, J, lam, r->conjugation());
  RatMatrix B = rational_basis(J);
  // Dual basis rows: G^{-1} B.
  RatMatrix dual = inverse_exact(G) * B;
  CHECK(fractional_from_basis(*r, dual) == dual_ideal(*r, J, lam, r->conjugation()));
}

TEST_CASE("totally positive certification") {
  auto r = RingOfIntegers::quadratic(2);
  // 1 + sqrt 2 has a negative conjugate; 3 + sqrt 2 is totally positive.
  CHECK_FALSE(certify_totally_positive(*r, FieldElement({Rat(1), Rat(1)})));
  CHECK(certify_totally_positive(*r, FieldElement({Rat(3), Rat(1)})));
  CHECK(certify_totally_positive(*r, r->scalar(Rat(1, 4))));
}

TEST_CASE("valuations") {
  auto r = RingOfIntegers::cyclotomic(5);
  IntegralIdeal P = primes_above(*r, 5)[0].ideal;
  CHECK(valuation(*r, r->scalar(5), P) == 4);
  FieldElement pi = r->sub(r->one(), r->generator(0));
  CHECK(valuation(*r, pi, P) == 1);
  CHECK(valuation(*r, r->invert(r->pow(pi, 3)), P) == -3);
}

TEST_CASE("residue presentation round trips") {
  auto r = RingOfIntegers::compositum(RingOfIntegers::cyclotomic(8), RingOfIntegers::cyclotomic(3));
  IntegralIdeal I = p_radical(*r, 3);
  ResiduePresentation pres(*r, I, 3, r->generator(0));
  CHECK(pres.mu().to_string() == "X^4 + 1");
  for (int t = 0; t < 50; ++t) {
    FieldElement x = random_element(*r, 9);
    FieldElement y = pres.from_class(pres.to_class(x));
    CHECK(ideal_contains(as_fractional(I), r->sub(x, y)));
  }
  auto z5 = RingOfIntegers::cyclotomic(5);
  IntegralIdeal P = primes_above(*z5, 5)[0].ideal;
  ResiduePresentation p1(*z5, P, 5, z5->generator(0));
  CHECK(p1.mu().to_string() == "X + 4");
  // O/P^3 has F_5-dimension 3 with basis classes of powers of (1 - zeta).
  IntegralIdeal P3 = as_integral(ideal_power(*z5, as_fractional(P), 3));
  ResiduePresentation p3(*z5, P3, 5, z5->sub(z5->one(), z5->generator(0)));
  CHECK(p3.dimension() == 3);
  CHECK(p3.mu().to_string() == "X^3");
}

TEST_CASE("conjugate image polynomial reproduces the closed forms") {
  struct Case {
    RingPtr r;
    i64 p;
    GStarCase c;
  };
  std::vector<Case> cases{{RingOfIntegers::cyclotomic(8), 3, GStarCase::Unitary},
                          {RingOfIntegers::cyclotomic(8), 17, GStarCase::Unitary},
                          {RingOfIntegers::cyclotomic(7), 2, GStarCase::Unitary},
                          {RingOfIntegers::cyclotomic(9), 7, GStarCase::Unitary},
                          {RingOfIntegers::quadratic(-5), 3, GStarCase::Negated},
                          {RingOfIntegers::quadratic(-5), 7, GStarCase::Negated},
                          {RingOfIntegers::quadratic(-3), 7, GStarCase::HalfInteger},
                          {RingOfIntegers::quadratic(-3), 13, GStarCase::HalfInteger},
                          {RingOfIntegers::quadratic(5), 11, GStarCase::Fixed}};
  for (const auto& c : cases) {
    const RingOfIntegers& r = *c.r;
    IntegralIdeal I = ideal_from_generators(r, {r.scalar(Rat(c.p))});
    ResiduePresentation pres(r, I, c.p, r.generator(0));
    for (const auto& g : divisors(pres.mu())) {
      if (g.degree() == 0) continue;
      CHECK(conjugate_image_polynomial(r, g, pres, r.conjugation()) == gstar_closed_form(g, c.c));
    }
  }
}

TEST_CASE("residue class of a P-unit") {
  auto r = RingOfIntegers::quadratic(-5);
  IntegralIdeal P = primes_above(*r, 5)[0].ideal;
  ResiduePresentation pres(*r, P, 5, r->generator(0));
  CHECK(residue_class_of_unit(*r, r->scalar(Rat(1, 2)), pres) == FpPoly(5, {3}));
  CHECK_THROWS_AS(residue_class_of_unit(*r, r->scalar(Rat(5)), pres), PreconditionError);
}

TEST_CASE("field constructors reject bad input") {
  CHECK_THROWS_AS(RingOfIntegers::quadratic(12), PreconditionError);
  CHECK_THROWS_AS(RingOfIntegers::quadratic(1), PreconditionError);
}
