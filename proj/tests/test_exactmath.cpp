#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>

#include "latticeforge/exactmath.hpp"

using namespace lf;

namespace {

std::mt19937_64 rng(7001);

long rnd(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

IntMatrix random_matrix(std::size_t r, std::size_t c, long b) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rnd(-b, b);
  return m;
}

// Cofactor expansion; independent of the elimination used by det_exact.
Rat cofactor_det(const RatMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Rat d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    RatMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = m(i, k);
    Rat t = m(0, j) * cofactor_det(minor);
    d += (j % 2 == 0) ? t : Rat(-t);
  }
  return d;
}

bool in_row_lattice(const IntMatrix& basis, std::span<const Int> v) {
  std::vector<Int> c;
  return solve_integral(basis, v, &c);
}

RatMatrix e8_cartan() {
  // Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4.
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

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/6") == Rat(1, 2));
  CHECK(parse_rational("-7") == Rat(-7));
  Rat r(-4, 6);
  r.canonicalize();
  CHECK(to_string(r) == "-2/3");
  CHECK_THROWS_AS(parse_rational("0.5"), PreconditionError);
  CHECK_THROWS_AS(parse_rational("1/0"), PreconditionError);
  CHECK_THROWS_AS(parse_rational(""), PreconditionError);
}

TEST_CASE("hnf spans the same lattice and is canonical") {
  for (int t = 0; t < 60; ++t) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 5));
    IntMatrix m = random_matrix(n + static_cast<std::size_t>(rnd(0, 2)), n, 9);
    HnfResult r = hnf(m);
    CHECK(r.u * m == r.h);
    CHECK(abs(det_int(r.u)) == 1);
    IntMatrix b = hnf_basis(m);
    for (std::size_t i = 0; i < b.rows(); ++i) {
      std::size_t piv = 0;
      while (piv < n && b(i, piv) == 0) ++piv;
      REQUIRE(piv < n);
      CHECK(b(i, piv) > 0);
      for (std::size_t k = 0; k < i; ++k) {
        CHECK(b(k, piv) >= 0);
        CHECK(b(k, piv) < b(i, piv));
      }
    }
    // Same HNF after a random unimodular change of generators.
    IntMatrix shuffled = m;
    if (shuffled.rows() > 1) {
      for (std::size_t j = 0; j < n; ++j) shuffled(0, j) += 3 * shuffled(1, j);
      shuffled.swap_rows(0, shuffled.rows() - 1);
    }
    CHECK(hnf_basis(shuffled) == b);
  }
}

TEST_CASE("hnf_modular agrees with the full hnf") {
  for (int t = 0; t < 40; ++t) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 5));
    Int D = rnd(2, 30);
    IntMatrix m = random_matrix(static_cast<std::size_t>(rnd(1, 6)), n, 40);
    IntMatrix full = m;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Int> row(n, 0);
      row[i] = D;
      full.append_row(row);
    }
    CHECK(hnf_modular(m, D) == hnf_basis(full));
  }
}

TEST_CASE("snf invariants divide each other and multiply to the determinant") {
  for (int t = 0; t < 40; ++t) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 5));
    IntMatrix m = random_matrix(n, n, 6);
    if (det_int(m) == 0) continue;
    SnfResult s = snf(m);
    CHECK(s.left * m * s.right == s.d);
    Int prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(s.d(i, i) > 0);
      if (i + 1 < n) CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
      prod *= s.d(i, i);
    }
    CHECK(prod == abs(det_int(m)));
  }
}

TEST_CASE("determinant and inverse against cofactor expansion") {
  for (int t = 0; t < 50; ++t) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 5));
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = Rat(rnd(-5, 5), rnd(1, 4));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j).canonicalize();
    Rat d = cofactor_det(m);
    CHECK(det_exact(m) == d);
    if (d != 0) CHECK(m * inverse_exact(m) == RatMatrix::identity(n));
  }
}

TEST_CASE("lll output is unimodular and size reduced with the Lovasz condition") {
  for (int t = 0; t < 30; ++t) {
    std::size_t n = static_cast<std::size_t>(rnd(2, 6));
    IntMatrix a = random_matrix(n, n, 20);
    if (det_int(a) == 0) continue;
    RatMatrix g = to_rat(a * a.transpose());
    IntMatrix u = lll_reduce(g);
    CHECK(abs(det_int(u)) == 1);
    RatMatrix h = to_rat(u) * g * to_rat(u).transpose();
    // Gram-Schmidt on the Gram matrix.
    RatMatrix mu(n, n);
    std::vector<Rat> bstar(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        Rat s = h(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * bstar[k];
        mu(i, j) = s / bstar[j];
      }
      bstar[i] = h(i, i);
      for (std::size_t k = 0; k < i; ++k) bstar[i] -= mu(i, k) * mu(i, k) * bstar[k];
    }
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) CHECK(abs(mu(i, j)) <= Rat(1, 2));
      CHECK(bstar[i] >= (Rat(3, 4) - mu(i, i - 1) * mu(i, i - 1)) * bstar[i - 1]);
    }
  }
}

TEST_CASE("lll on E8 starts with a root") {
  RatMatrix g = e8_cartan();
  IntMatrix u = lll_reduce(g);
  RatMatrix h = to_rat(u) * g * to_rat(u).transpose();
  CHECK(h(0, 0) == 2);
}

TEST_CASE("short vector enumeration matches a box search") {
  for (int t = 0; t < 25; ++t) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 3));
    IntMatrix a = random_matrix(n, n, 3);
    if (det_int(a) == 0) continue;
    RatMatrix g = to_rat(a * a.transpose());
    Rat bound = rnd(1, 12);
    RatMatrix gi = inverse_exact(g);
    // |x_i|^2 <= bound * (G^-1)_ii for every vector of norm <= bound.
    std::vector<long> box(n);
    for (std::size_t i = 0; i < n; ++i) {
      Rat b2 = bound * gi(i, i);
      long k = 0;
      while (Rat((k + 1) * (k + 1)) <= b2) ++k;
      box[i] = k;
    }
    std::size_t brute = 0;
    std::vector<long> x(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == n) {
        bool zero = std::all_of(x.begin(), x.end(), [](long v) { return v == 0; });
        if (zero) return;
        Rat q = 0;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) q += g(r, c) * x[r] * x[c];
        if (q <= bound) ++brute;
        return;
      }
      for (long v = -box[i]; v <= box[i]; ++v) {
        x[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
    auto sv = enumerate_short_vectors(g, bound, false);
    CHECK(sv.size() == brute);
    auto half = enumerate_short_vectors(g, bound, true);
    CHECK(2 * half.size() == brute);
    for (const auto& v : sv) CHECK(v.norm <= bound);
  }
}

TEST_CASE("enumeration refuses ranks above the cap") {
  RatMatrix g = RatMatrix::identity(40);
  CHECK_THROWS_AS(enumerate_short_vectors(g, Rat(1), true, 32), UnsupportedError);
}

TEST_CASE("lattice intersection membership") {
  for (int t = 0; t < 20; ++t) {
    std::size_t n = static_cast<std::size_t>(rnd(1, 4));
    IntMatrix a = random_matrix(n, n, 5), b = random_matrix(n, n, 5);
    if (det_int(a) == 0 || det_int(b) == 0) continue;
    IntMatrix c = lattice_intersection(a, b);
    for (std::size_t i = 0; i < c.rows(); ++i) {
      CHECK(in_row_lattice(a, c.row(i)));
      CHECK(in_row_lattice(b, c.row(i)));
    }
    // det(a) * det(b) * e_k lies in both lattices.
    Int m = det_int(a) * det_int(b);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Int> v(n, 0);
      v[k] = m;
      CHECK(in_row_lattice(c, v));
    }
  }
}

TEST_CASE("thread budget honours the environment") {
  setenv("LATTICEFORGE_THREADS", "3", 1);
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  CHECK(thread_budget() == std::min(3u, hw));
  setenv("LATTICEFORGE_THREADS", "1", 1);
  CHECK(thread_budget() == 1);
  unsetenv("LATTICEFORGE_THREADS");
  CHECK(thread_budget() >= 1);
}
