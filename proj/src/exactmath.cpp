#include "latticeforge/exactmath.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace lf {

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

std::pair<IntMatrix, Int> clear_denominators(const RatMatrix& m) {
  Int d = 1;
  for (const Rat& x : m.data()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
  IntMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rat& x = m(i, j);
      out(i, j) = x.get_num() * (d / x.get_den());
    }
  return {std::move(out), d};
}

bool is_symmetric(const RatMatrix& g) {
  if (!g.square()) return false;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (g(i, j) != g(j, i)) return false;
  return true;
}

bool is_integral(const RatMatrix& g) {
  return std::all_of(g.data().begin(), g.data().end(), [](const Rat& x) { return x.get_den() == 1; });
}

namespace {

// floor division for mpz
Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod_floor(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// r_i <- s r_i + t r_j ; r_j <- u r_i + v r_j (simultaneous)
void combine_rows(IntMatrix& m, std::size_t i, std::size_t j, const Int& s, const Int& t, const Int& u,
                  const Int& v, std::size_t from_col = 0) {
  Int a, b;
  for (std::size_t c = from_col; c < m.cols(); ++c) {
    a = s * m(i, c) + t * m(j, c);
    b = u * m(i, c) + v * m(j, c);
    m(i, c) = std::move(a);
    m(j, c) = std::move(b);
    a = Int();
    b = Int();
  }
}

void axpy_row(IntMatrix& m, std::size_t dst, const Int& q, std::size_t src, std::size_t from_col = 0) {
  if (q == 0) return;
  for (std::size_t c = from_col; c < m.cols(); ++c) m(dst, c) -= q * m(src, c);
}

void negate_row(IntMatrix& m, std::size_t i) {
  for (std::size_t c = 0; c < m.cols(); ++c) m(i, c) = -m(i, c);
}

struct Bezout {
  Int g, s, t;
};

Bezout ext_gcd(const Int& a, const Int& b) {
  Bezout r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

HnfResult hnf(const IntMatrix& m) {
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  std::size_t r = 0;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (h(i, c) == 0) continue;
      if (h(r, c) == 0) {
        h.swap_rows(r, i);
        u.swap_rows(r, i);
        continue;
      }
      Int a = h(r, c), b = h(i, c);
      Bezout e = ext_gcd(a, b);
      Int ua = -b / e.g, ub = a / e.g;
      combine_rows(h, r, i, e.s, e.t, ua, ub, c);
      combine_rows(u, r, i, e.s, e.t, ua, ub);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      negate_row(h, r);
      negate_row(u, r);
    }
    for (std::size_t k = 0; k < r; ++k) {
      Int q = floor_div(h(k, c), h(r, c));
      axpy_row(h, k, q, r);
      axpy_row(u, k, q, r);
    }
    ++r;
  }
  return {std::move(h), std::move(u)};
}

IntMatrix hnf_basis(const IntMatrix& m) {
  IntMatrix h = hnf(m).h;
  IntMatrix out(0, m.cols());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    auto row = h.row(i);
    if (std::any_of(row.begin(), row.end(), [](const Int& x) { return x != 0; })) out.append_row(row);
  }
  return out;
}

IntMatrix hnf_modular(const IntMatrix& m, const Int& modulus) {
  require(modulus > 0, "hnf_modular: modulus must be positive");
  const std::size_t n = m.cols();
  std::vector<std::vector<Int>> work;
  work.reserve(m.rows() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::vector<Int> r(n);
    bool nz = false;
    for (std::size_t j = 0; j < n; ++j) {
      r[j] = mod_floor(m(i, j), modulus);
      nz = nz || r[j] != 0;
    }
    if (nz) work.push_back(std::move(r));
  }
  IntMatrix h(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Int> piv(n);
    piv[c] = modulus;
    std::vector<std::vector<Int>> rest;
    rest.reserve(work.size());
    Int a, b;
    for (auto& r : work) {
      if (r[c] == 0) {
        rest.push_back(std::move(r));
        continue;
      }
      Bezout e = ext_gcd(piv[c], r[c]);
      Int ua = -r[c] / e.g, ub = piv[c] / e.g;
      for (std::size_t j = c; j < n; ++j) {
        a = e.s * piv[j] + e.t * r[j];
        b = ua * piv[j] + ub * r[j];
        piv[j] = mod_floor(a, modulus);
        r[j] = mod_floor(b, modulus);
      }
      // the pivot column entry must keep its exact gcd value (it divides modulus)
      piv[c] = e.g < 0 ? Int(-e.g) : e.g;
      bool nz = false;
      for (std::size_t j = c + 1; j < n; ++j) nz = nz || r[j] != 0;
      if (nz) rest.push_back(std::move(r));
    }
    work = std::move(rest);
    for (std::size_t j = 0; j < n; ++j) h(c, j) = piv[j];
  }
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t k = 0; k < c; ++k) {
      Int q = floor_div(h(k, c), h(c, c));
      axpy_row(h, k, q, c, c);
    }
  return h;
}

SnfResult snf(const IntMatrix& m) {
  require(m.square(), "snf: matrix must be square");
  const std::size_t n = m.rows();
  IntMatrix d = m, left = IntMatrix::identity(n), right = IntMatrix::identity(n);
  auto swap_cols = [](IntMatrix& x, std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < x.rows(); ++r) std::swap(x(r, i), x(r, j));
  };
  auto col_axpy = [](IntMatrix& x, std::size_t dst, const Int& q, std::size_t src) {
    if (q == 0) return;
    for (std::size_t r = 0; r < x.rows(); ++r) x(r, dst) -= q * x(r, src);
  };
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t bi = n, bj = n;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (d(i, j) != 0 && (bi == n || abs(d(i, j)) < abs(d(bi, bj)))) {
            bi = i;
            bj = j;
          }
      if (bi == n) throw PreconditionError("snf: singular matrix (degenerate sublattice)");
      d.swap_rows(t, bi);
      left.swap_rows(t, bi);
      swap_cols(d, t, bj);
      swap_cols(right, t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        axpy_row(d, i, q, t);
        axpy_row(left, i, q, t);
        clean = clean && d(i, t) == 0;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        col_axpy(d, j, q, t);
        col_axpy(right, j, q, t);
        clean = clean && d(t, j) == 0;
      }
      if (!clean) continue;
      bool divides = true;
      for (std::size_t i = t + 1; i < n && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (d(i, j) % d(t, t) != 0) {
            for (std::size_t c = 0; c < n; ++c) {
              d(t, c) += d(i, c);
              left(t, c) += left(i, c);
            }
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (d(t, t) < 0) {
      negate_row(d, t);
      negate_row(left, t);
    }
  }
  return {std::move(d), std::move(left), std::move(right)};
}

Int det_int(const IntMatrix& m) {
  require(m.square(), "det: matrix must be square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int prev = 1;
  int sign = 1;
  Int t;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        t = a(i, j) * a(k, k);
        t -= a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

Rat det_exact(const RatMatrix& g) {
  require(g.square(), "det_exact: matrix must be square");
  IntMatrix a(g.rows(), g.cols());
  Rat scale = 1;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Int d = 1;
    for (std::size_t j = 0; j < g.cols(); ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), g(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < g.cols(); ++j) a(i, j) = g(i, j).get_num() * (d / g(i, j).get_den());
    scale *= d;
  }
  Rat r(det_int(a));
  r /= scale;
  r.canonicalize();
  return r;
}

RatMatrix inverse_exact(const RatMatrix& g) {
  require(g.square(), "inverse_exact: matrix must be square");
  const std::size_t n = g.rows();
  RatMatrix a = g, inv = RatMatrix::identity(n);
  Rat f;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw PreconditionError("inverse_exact: singular matrix");
    a.swap_rows(c, p);
    inv.swap_rows(c, p);
    Rat piv = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      f = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (a(c, j) != 0) a(i, j) -= f * a(c, j);
        if (inv(c, j) != 0) inv(i, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

bool is_positive_definite(const RatMatrix& g) {
  require(is_symmetric(g), "is_positive_definite: matrix must be symmetric");
  const std::size_t n = g.rows();
  // Row scaling by positive integers preserves the sign of every leading minor;
  // Bareiss pivots without row exchanges are exactly those minors.
  IntMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    Int d = 1;
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), g(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) a(i, j) = g(i, j).get_num() * (d / g(i, j).get_den());
  }
  Int prev = 1, t;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        t = a(i, j) * a(k, k);
        t -= a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return true;
}

IntMatrix lll_reduce(const RatMatrix& g_in) {
  require(is_symmetric(g_in), "lll_reduce: Gram must be symmetric");
  const std::size_t n = g_in.rows();
  IntMatrix h = IntMatrix::identity(n);
  if (n <= 1) {
    if (n == 1 && g_in(0, 0) <= 0) throw PreconditionError("lll_reduce: Gram not positive definite");
    return h;
  }
  IntMatrix b = clear_denominators(g_in).first;
  // Integral LLL on the Gram matrix: d[i] are leading Gram determinants,
  // lam(k,j) the scaled Gram-Schmidt coefficients.
  std::vector<Int> d(n + 1);
  IntMatrix lam(n, n);
  d[0] = 1;
  auto fail = [] { throw PreconditionError("lll_reduce: Gram not positive definite"); };

  auto redi = [&](std::size_t k, std::size_t l) {
    Int two_abs = 2 * abs(lam(k, l));
    if (two_abs <= d[l + 1]) return;
    Int q = floor_div(2 * lam(k, l) + d[l + 1], 2 * d[l + 1]);
    axpy_row(h, k, q, l);
    // Gram update for v_k <- v_k - q v_l
    Int bkk = b(k, k), bkl = b(k, l), bll = b(l, l);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      b(k, j) -= q * b(l, j);
      b(j, k) = b(k, j);
    }
    b(k, k) = bkk - 2 * q * bkl + q * q * bll;
    lam(k, l) -= q * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam(k, i) -= q * lam(l, i);
  };

  std::size_t k = 1, kmax = 0;
  d[1] = b(0, 0);
  if (d[1] <= 0) fail();
  while (k < n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 0; j <= k; ++j) {
        Int u = b(k, j);
        for (std::size_t i = 0; i < j; ++i) {
          u = d[i + 1] * u - lam(k, i) * lam(j, i);
          mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i].get_mpz_t());
        }
        if (j < k) lam(k, j) = u;
        else {
          d[k + 1] = u;
          if (u <= 0) fail();
        }
      }
    }
    redi(k, k - 1);
    const Int& lk = lam(k, k - 1);
    if (4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lk * lk) {
      // SWAPI(k)
      h.swap_rows(k, k - 1);
      b.swap_rows(k, k - 1);
      for (std::size_t r = 0; r < n; ++r) std::swap(b(r, k), b(r, k - 1));
      for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam(k, j), lam(k - 1, j));
      Int l = lam(k, k - 1);
      Int bb = (d[k - 1] * d[k + 1] + l * l);
      mpz_divexact(bb.get_mpz_t(), bb.get_mpz_t(), d[k].get_mpz_t());
      for (std::size_t i = k + 1; i <= kmax; ++i) {
        Int t = lam(i, k);
        Int nik = d[k + 1] * lam(i, k - 1) - l * t;
        mpz_divexact(nik.get_mpz_t(), nik.get_mpz_t(), d[k].get_mpz_t());
        Int nik1 = bb * t + l * nik;
        mpz_divexact(nik1.get_mpz_t(), nik1.get_mpz_t(), d[k + 1].get_mpz_t());
        lam(i, k) = nik;
        lam(i, k - 1) = nik1;
      }
      d[k] = bb;
      if (k > 1) --k;
    } else {
      for (std::size_t l = k - 1; l-- > 0;) redi(k, l);
      ++k;
    }
  }
  return h;
}

namespace {

struct EnumTask {
  std::vector<Int> x;   // fixed coordinates for levels > level
  std::size_t level;    // next level to branch on
  Rat remaining;
  bool higher_zero;
};

struct Enumerator {
  std::size_t n;
  std::vector<Rat> dj;                  // LDL^T diagonal
  std::vector<std::vector<Rat>> l;      // l[i][j], i > j
  Rat bound;
  bool collapse;

  Rat center(const std::vector<Int>& x, std::size_t j) const {
    Rat c = 0;
    for (std::size_t i = j + 1; i < n; ++i)
      if (x[i] != 0 && l[i][j] != 0) c -= l[i][j] * x[i];
    return c;
  }

  template <class Visit>
  void branch(std::vector<Int>& x, std::size_t j, const Rat& rem, bool higher_zero, Visit&& visit) const {
    Rat c = center(x, j);
    Int start;
    mpz_fdiv_q(start.get_mpz_t(), c.get_num_mpz_t(), c.get_den_mpz_t());
    Rat t, used;
    auto try_value = [&](const Int& v) -> bool {
      t = v - c;
      used = dj[j] * t * t;
      if (used > rem) return false;
      if (collapse && higher_zero && v < 0) return true;
      x[j] = v;
      visit(x, j, Rat(rem - used), higher_zero && v == 0);
      return true;
    };
    for (Int v = start; try_value(v); --v) {
    }
    for (Int v = start + 1; try_value(v); ++v) {
    }
    x[j] = 0;
  }

  void descend(std::vector<Int>& x, std::size_t level, const Rat& rem, bool higher_zero,
               std::vector<std::pair<std::vector<Int>, Rat>>& out) const {
    branch(x, level, rem, higher_zero, [&](std::vector<Int>& xx, std::size_t j, const Rat& r, bool hz) {
      if (j == 0) {
        if (!hz) out.emplace_back(xx, Rat(bound - r));
      } else {
        descend(xx, j - 1, r, hz, out);
      }
    });
  }
};

}  // namespace

unsigned thread_budget() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LATTICEFORGE_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, hw));
  }
  return hw;
}

std::vector<ShortVector> enumerate_short_vectors(const RatMatrix& g, const Rat& bound, bool collapse_pairs,
                                                 std::size_t rank_cap) {
  require(g.square(), "enumerate_short_vectors: Gram must be square");
  const std::size_t n = g.rows();
  if (n > rank_cap)
    throw UnsupportedError("enumerate_short_vectors: rank " + std::to_string(n) + " exceeds the enumeration cap " +
                           std::to_string(rank_cap) + "; use determinant-level analysis");
  if (!is_positive_definite(g)) throw PreconditionError("enumerate_short_vectors: Gram not positive definite");
  std::vector<ShortVector> result;
  if (n == 0 || bound <= 0) return result;

  IntMatrix t = lll_reduce(g);
  RatMatrix tr = to_rat(t);
  RatMatrix gr = tr * g * tr.transpose();

  Enumerator e;
  e.n = n;
  e.bound = bound;
  e.collapse = collapse_pairs;
  e.dj.assign(n, Rat(0));
  e.l.assign(n, std::vector<Rat>(n, Rat(0)));
  // LDL^T: gr = L D L^T with L unit lower triangular.
  for (std::size_t j = 0; j < n; ++j) {
    Rat s = gr(j, j);
    for (std::size_t k = 0; k < j; ++k) s -= e.l[j][k] * e.l[j][k] * e.dj[k];
    e.dj[j] = s;
    for (std::size_t i = j + 1; i < n; ++i) {
      Rat v = gr(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= e.l[i][k] * e.l[j][k] * e.dj[k];
      e.l[i][j] = v / s;
    }
  }

  // Expand the top levels into independent tasks, then share them among threads.
  std::vector<EnumTask> tasks{{std::vector<Int>(n), n - 1, bound, true}};
  const unsigned threads = thread_budget();
  std::vector<std::pair<std::vector<Int>, Rat>> found;
  while (threads > 1 && tasks.size() < 64u * threads) {
    std::vector<EnumTask> next;
    bool expanded = false;
    for (auto& tk : tasks) {
      if (tk.level == 0) {
        next.push_back(std::move(tk));
        continue;
      }
      expanded = true;
      std::vector<Int> x = tk.x;
      e.branch(x, tk.level, tk.remaining, tk.higher_zero,
               [&](std::vector<Int>& xx, std::size_t j, const Rat& r, bool hz) { next.push_back({xx, j - 1, r, hz}); });
    }
    tasks = std::move(next);
    if (!expanded) break;
  }

  std::mutex mu;
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    std::vector<std::pair<std::vector<Int>, Rat>> local;
    for (std::size_t i; (i = cursor.fetch_add(1)) < tasks.size();) {
      std::vector<Int> x = tasks[i].x;
      e.descend(x, tasks[i].level, tasks[i].remaining, tasks[i].higher_zero, local);
    }
    std::lock_guard<std::mutex> lock(mu);
    for (auto& v : local) found.push_back(std::move(v));
  };
  if (threads > 1 && tasks.size() > 1) {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < std::min<std::size_t>(threads, tasks.size()); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  } else {
    worker();
  }

  result.reserve(found.size() * (collapse_pairs ? 1 : 1));
  for (auto& [x, norm] : found) {
    ShortVector sv;
    sv.coords.assign(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] != 0)
        for (std::size_t j = 0; j < n; ++j) sv.coords[j] += x[i] * t(i, j);
    sv.norm = norm;
    result.push_back(std::move(sv));
  }
  if (collapse_pairs) {
    // Normalize each representative so its last nonzero original coordinate is positive.
    for (auto& sv : result) {
      auto it = std::find_if(sv.coords.rbegin(), sv.coords.rend(), [](const Int& v) { return v != 0; });
      if (it != sv.coords.rend() && *it < 0)
        for (auto& c : sv.coords) c = -c;
    }
  }
  std::sort(result.begin(), result.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return a.coords < b.coords;
  });
  return result;
}

bool solve_integral(const IntMatrix& basis, std::span<const Int> v, std::vector<Int>* coeffs) {
  // Solve c * basis = v over Q, then test integrality.
  const std::size_t n = basis.rows();
  require(basis.square() && v.size() == n, "solve_integral: shape mismatch");
  RatMatrix a(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = basis(j, i);
    a(i, n) = v[i];
  }
  Rat f;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw PreconditionError("solve_integral: singular basis");
    a.swap_rows(c, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      f = a(i, c) / a(c, c);
      for (std::size_t j = c; j <= n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  std::vector<Int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rat x = a(i, n) / a(i, i);
    if (x.get_den() != 1) return false;
    out[i] = x.get_num();
  }
  if (coeffs) *coeffs = std::move(out);
  return true;
}

bool in_hnf_lattice(const IntMatrix& h, std::span<const Int> v) {
  std::vector<Int> r(v.begin(), v.end());
  std::size_t row = 0;
  for (std::size_t c = 0; c < r.size(); ++c) {
    if (row < h.rows() && h(row, c) != 0) {
      if (r[c] % h(row, c) != 0) return false;
      Int q = r[c] / h(row, c);
      if (q != 0)
        for (std::size_t j = c; j < r.size(); ++j) r[j] -= q * h(row, j);
      ++row;
    } else if (r[c] != 0) {
      return false;
    }
  }
  return true;
}

IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b) {
  require(a.square() && b.square() && a.rows() == b.rows(), "lattice_intersection: full-rank square bases required");
  const std::size_t n = a.rows();
  RatMatrix da = inverse_exact(to_rat(a)).transpose();
  RatMatrix db = inverse_exact(to_rat(b)).transpose();
  RatMatrix stacked(0, n);
  for (std::size_t i = 0; i < n; ++i) stacked.append_row(da.row(i));
  for (std::size_t i = 0; i < n; ++i) stacked.append_row(db.row(i));
  auto [si, d] = clear_denominators(stacked);
  IntMatrix sum = hnf_basis(si);
  ensure(sum.rows() == n, "lattice_intersection: dual sum lost rank");
  RatMatrix dual = inverse_exact(to_rat(sum)).transpose();
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat x = dual(i, j) * d;
      ensure(x.get_den() == 1, "lattice_intersection: non-integral result");
      out(i, j) = x.get_num();
    }
  return hnf_basis(out);
}

std::string to_string(const Rat& r) { return r.get_str(); }

Rat parse_rational(const std::string& s) {
  Rat r;
  if (s.empty() || r.set_str(s, 10) != 0) throw PreconditionError("not an exact rational: '" + s + "'");
  if (r.get_den() == 0) throw PreconditionError("zero denominator: '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace lf
