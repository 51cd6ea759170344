#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latticeforge/lattice.hpp"

using namespace lf;

namespace {

std::mt19937_64 rng(6262);

long rnd(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

IntMatrix scalar_matrix(std::size_t n, long d) {
  IntMatrix m = IntMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = d;
  return m;
}

FpCode code_from_rows(i64 p, std::size_t n, const std::vector<std::vector<i64>>& rows) {
  FpMatrix g(p, 0, n);
  for (const auto& r : rows) g.append_row(r);
  return FpCode(p, n, g);
}

std::vector<std::vector<i64>> bits(const std::vector<std::string>& words) {
  std::vector<std::vector<i64>> out;
  for (const auto& w : words) {
    std::vector<i64> r;
    for (char ch : w) r.push_back(ch == '1');
    out.push_back(r);
  }
  return out;
}

// Cartan matrix of A_n blocks placed along the diagonal.
RatMatrix cartan_a(std::size_t n, std::size_t copies) {
  RatMatrix g(n * copies, n * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      g(c * n + i, c * n + i) = 2;
      if (i + 1 < n) g(c * n + i, c * n + i + 1) = g(c * n + i + 1, c * n + i) = -1;
    }
  return g;
}

RatMatrix cartan_e8() {
  RatMatrix g(8, 8);
  for (int i = 0; i < 8; ++i) g(i, i) = 2;
  auto link = [&](int a, int b) { g(a - 1, b - 1) = g(b - 1, a - 1) = -1; };
  link(1, 3);
  link(3, 4);
  link(4, 5);
  link(5, 6);
  link(6, 7);
  link(7, 8);
  link(2, 4);
  return g;
}

ScaledLattice from_gram(const RatMatrix& g) { return ScaledLattice{g, IntMatrix::identity(g.rows()), 1}; }

QuotientCtx standard(std::size_t n, i64 p) { return build_quotient(scalar_matrix(n, p), RatMatrix::identity(n), p); }

FpCode random_code(i64 p, std::size_t n) {
  FpMatrix g(p, 0, n);
  for (long k = rnd(0, static_cast<long>(n)); k > 0; --k) {
    std::vector<i64> r(n);
    for (auto& x : r) x = rnd(0, p - 1);
    g.append_row(r);
  }
  return FpCode(p, n, g);
}

const std::vector<std::string> kHamming8 = {"11110000", "00111100", "00001111", "01010101"};

}  // namespace

TEST_CASE("code over F_7 in Z^2") {
  QuotientCtx q = standard(2, 7);
  FpCode c = code_from_rows(7, 2, {{1, 1}});
  ScaledLattice l = gamma_of_code(q, c);
  CHECK(hnf_basis(l.basis) == IntMatrix{{1, 1}, {0, 7}});
  CHECK(l.scale == Rat(1, 7));
  LatticeInvariants inv = invariants(l);
  CHECK(inv.det == 1);
  CHECK_FALSE(inv.integral);
  // C is not self-orthogonal; the dual is the lattice of C^perp = <(1, -1)>.
  FpCode perp = code_orthogonal(c, q.form);
  CHECK(perp == code_from_rows(7, 2, {{1, 6}}));
  CHECK(same_lattice(dual_lattice(l), gamma_of_code(q, perp)));
}

TEST_CASE("isometric forms differ in represented norms") {
  // det 49 Grams diag(1, 49) and the code lattice above scaled by 7.
  ScaledLattice a = from_gram(RatMatrix{{Rat(1), Rat(0)}, {Rat(0), Rat(49)}});
  ScaledLattice b = from_gram(RatMatrix{{Rat(2), Rat(7)}, {Rat(7), Rat(49)}});
  CHECK(count_vectors_of_norm(a, Rat(2)) == 0);
  CHECK(count_vectors_of_norm(b, Rat(2)) == 2);
  CHECK(det_exact(a.gram()) == det_exact(b.gram()));
}

TEST_CASE("p^(n - dim M/N) divides det M") {
  int done = 0;
  while (done < 40) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 5));
    i64 p = std::vector<i64>{2, 3, 5}[static_cast<std::size_t>(rnd(0, 2))];
    IntMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = rnd(-3, 3);
    Int da = det_int(a);
    if (da == 0) continue;
    // N = pM^# cap M contains pM and lies in M.
    RatMatrix g = to_rat(a * a.transpose());
    RatMatrix dual = inverse_exact(g);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dual(i, j) *= p;
    auto [dint, den] = clear_denominators(dual);
    IntMatrix nb = lattice_intersection(dint, scalar_matrix(n, den.get_si()));
    for (std::size_t i = 0; i < nb.rows(); ++i)
      for (std::size_t j = 0; j < n; ++j) nb(i, j) /= den;
    QuotientCtx q = build_quotient(nb, g, p);
    Int pk = 1;
    for (std::size_t i = q.dimension(); i < n; ++i) pk *= p;
    CHECK(det_int(a) * det_int(a) % pk == 0);
    CHECK(radical_check(q).dimension() == 0);
    ++done;
  }
}

TEST_CASE("self-dual code over F_5 gives Z^2") {
  QuotientCtx q = standard(2, 5);
  FpCode c = code_from_rows(5, 2, {{1, 2}});
  CHECK(code_orthogonal(c, q.form) == c);
  ScaledLattice l = gamma_of_code(q, c);
  RatMatrix g = l.gram();
  // Basis (1,2), (0,5) scaled by 1/5.
  CHECK(det_exact(g) == 1);
  LatticeInvariants inv = invariants(l);
  CHECK(inv.integral);
  CHECK(inv.unimodular);
  CHECK_FALSE(inv.even);
  MinimumKissing mk = minimum_and_kissing(l);
  CHECK(mk.minimum == 1);
  CHECK(mk.kissing == 4);
  CHECK(certify_named(l, NamedLattice::Zn).passed);
  // (1,2)/sqrt 5 and (2,-1)/sqrt 5 have norm 1; 2 is represented by their sum.
  CHECK(count_vectors_of_norm(l, Rat(2)) == 4);
}

TEST_CASE("induced form is the Gram modulo p") {
  RatMatrix g{{Rat(2), Rat(1), Rat(0)}, {Rat(1), Rat(3), Rat(1)}, {Rat(0), Rat(1), Rat(4)}};
  QuotientCtx q = build_quotient(scalar_matrix(3, 5), g, 5);
  CHECK(q.dimension() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<i64> ei(3, 0), ej(3, 0);
      ei[i] = 1;
      ej[j] = 1;
      CHECK(q.form.eval(ei, ej) == mod_norm(g(i, j).get_num().get_si(), 5));
    }
}

TEST_CASE("radical of a degenerate quotient") {
  RatMatrix g{{Rat(1), Rat(0)}, {Rat(0), Rat(5)}};
  QuotientCtx q = build_quotient(scalar_matrix(2, 5), g, 5);
  FpCode rad = radical_check(q);
  CHECK(rad.dimension() == 1);
  CHECK(rad == code_from_rows(5, 2, {{0, 1}}));
  CHECK(form_radical(q.form) == rad);
  CHECK(radical_check(standard(3, 3)).dimension() == 0);
}

TEST_CASE("quotient preconditions") {
  // pM must lie in N.
  CHECK_THROWS_AS(build_quotient(scalar_matrix(2, 25), RatMatrix::identity(2), 5), PreconditionError);
  // N must lie in M.
  IntMatrix m = scalar_matrix(2, 2);
  CHECK_THROWS_AS(build_quotient(m, IntMatrix{{1, 0}, {0, 4}}, RatMatrix::identity(2), 2), PreconditionError);
  CHECK_THROWS_AS(build_quotient(scalar_matrix(2, 4), RatMatrix::identity(2), 4), PreconditionError);
}

TEST_CASE("zero and full codes") {
  for (i64 p : {2, 3, 7}) {
    QuotientCtx q = standard(3, p);
    ScaledLattice zero = gamma_of_code(q, FpCode(p, 3, FpMatrix(p, 0, 3)));
    ScaledLattice full = gamma_of_code(q, FpCode(p, 3, FpMatrix::identity(p, 3)));
    CHECK(same_lattice(zero, ScaledLattice{RatMatrix::identity(3), scalar_matrix(3, p), Rat(1, p)}));
    CHECK(same_lattice(full, ScaledLattice{RatMatrix::identity(3), IntMatrix::identity(3), Rat(1, p)}));
    CHECK(invariants(zero).det == Rat(p * p * p));
    CHECK(invariants(full).det == Rat(1, p * p * p));
  }
}

TEST_CASE("extended Hamming code gives E8") {
  QuotientCtx q = standard(8, 2);
  FpCode h = code_from_rows(2, 8, bits(kHamming8));
  CHECK(h.dimension() == 4);
  ScaledLattice l = gamma_of_code(q, h);
  LatticeInvariants inv = invariants(l);
  CHECK(inv.rank == 8);
  CHECK(inv.det == 1);
  CHECK(inv.even);
  CHECK(inv.unimodular);
  MinimumKissing mk = minimum_and_kissing(l);
  CHECK(mk.minimum == 2);
  CHECK(mk.kissing == 240);
  Certificate cert = certify_named(l, NamedLattice::E8);
  CHECK(cert.passed);
  CHECK(cert.level == "identified");
  CHECK_FALSE(certify_named(l, NamedLattice::Zn).passed);
  for (const auto& it : verify_thm_gamma(q, h)) CHECK_MESSAGE(it.passed, it.name << ": " << it.detail);
}

TEST_CASE("dual of a code lattice is the lattice of the orthogonal code") {
  int done = 0;
  while (done < 30) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 6));
    i64 p = std::vector<i64>{2, 3, 5, 7}[static_cast<std::size_t>(rnd(0, 3))];
    QuotientCtx q = standard(n, p);
    FpCode c = random_code(p, n);
    FpCode perp = code_orthogonal(c, q.form);
    ScaledLattice l = gamma_of_code(q, c);
    CHECK(same_lattice(dual_lattice(l), gamma_of_code(q, perp)));
    // det = p^{n - 2k} with the 1/p scaling.
    Rat expect = 1;
    long e = static_cast<long>(n) - 2 * static_cast<long>(c.dimension());
    for (long i = 0; i < std::abs(e); ++i) expect *= p;
    if (e < 0) expect = 1 / expect;
    CHECK(invariants(l).det == expect);
    CHECK(invariants(l).integral == c.subset_of(perp));
    for (const auto& it : verify_thm_gamma(q, c)) CHECK_MESSAGE(it.passed, it.name << ": " << it.detail);
    ++done;
  }
}

TEST_CASE("minimum and kissing number of root lattices") {
  auto z4 = minimum_and_kissing(from_gram(RatMatrix::identity(4)));
  CHECK(z4.minimum == 1);
  CHECK(z4.kissing == 8);
  auto e8 = minimum_and_kissing(from_gram(cartan_e8()));
  CHECK(e8.minimum == 2);
  CHECK(e8.kissing == 240);
  // |roots of A_n| = n (n + 1).
  auto a13 = minimum_and_kissing(from_gram(cartan_a(13, 2)));
  CHECK(a13.minimum == 2);
  CHECK(a13.kissing == 364);
  auto a12 = minimum_and_kissing(from_gram(cartan_a(12, 2)));
  CHECK(a12.minimum == 2);
  CHECK(a12.kissing == 312);
  CHECK_THROWS_AS(minimum_and_kissing(from_gram(RatMatrix::identity(40))), UnsupportedError);
}

TEST_CASE("named certificates") {
  Certificate a = certify_named(from_gram(cartan_a(13, 2)), NamedLattice::A13perpA13);
  CHECK(a.passed);
  CHECK(a.level == "invariants");
  CHECK_THROWS_AS(certify_named(from_gram(cartan_a(12, 2)), NamedLattice::A13perpA13), PreconditionError);

  RatMatrix ee(16, 16);
  RatMatrix e = cartan_e8();
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) ee(i, j) = ee(i + 8, j + 8) = e(i, j);
  CHECK(certify_named(from_gram(ee), NamedLattice::E8perpE8).passed);

  // D16+ shares rank, determinant, parity, minimum and kissing number with E8 + E8,
  // but its roots form a single component.
  QuotientCtx q = standard(16, 2);
  FpCode d16 = code_from_rows(2, 16,
                              bits({"1111000000000000", "0011110000000000", "0000111100000000", "0000001111000000",
                                    "0000000011110000", "0000000000111100", "0000000000001111",
                                    "1010101010101010"}));
  REQUIRE(d16.dimension() == 8);
  ScaledLattice d = gamma_of_code(q, d16);
  CHECK(invariants(d).even);
  CHECK(invariants(d).unimodular);
  CHECK(minimum_and_kissing(d).kissing == 480);
  CHECK_FALSE(certify_named(d, NamedLattice::E8perpE8).passed);

  CHECK(parse_named_lattice("E8") == NamedLattice::E8);
  CHECK_THROWS_AS(parse_named_lattice("Leech"), PreconditionError);
}

TEST_CASE("even criterion") {
  RingPtr r = RingOfIntegers::cyclotomic(5);
  // u = -zeta - zeta^2 satisfies u + u* = 1.
  FieldElement u({Rat(0), Rat(-1), Rat(-1), Rat(0)});
  CHECK(even_criterion(*r, u, r->conjugation(), 5));
  CHECK_THROWS_AS(even_criterion(*r, r->one(), r->conjugation(), 5), PreconditionError);
  CHECK_THROWS_AS(even_criterion(*r, u, r->conjugation(), 2), PreconditionError);
}

TEST_CASE("sublattice containment") {
  QuotientCtx q = standard(4, 3);
  FpCode c = code_from_rows(3, 4, {{1, 1, 1, 0}});
  FpCode big = code_from_rows(3, 4, {{1, 1, 1, 0}, {0, 1, 2, 1}});
  CHECK(lattice_contains(gamma_of_code(q, big), gamma_of_code(q, c)));
  CHECK_FALSE(lattice_contains(gamma_of_code(q, c), gamma_of_code(q, big)));
}
