#include "latticeforge/fpcodes.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace lf {

i64 mod_norm(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}

i64 mod_mul(i64 a, i64 b, i64 p) {
  return static_cast<i64>((static_cast<__int128>(a) * b) % p);
}

i64 mod_pow(i64 a, std::uint64_t e, i64 p) {
  i64 r = 1 % p;
  a = mod_norm(a, p);
  while (e) {
    if (e & 1) r = mod_mul(r, a, p);
    a = mod_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

i64 mod_inv(i64 a, i64 p) {
  a = mod_norm(a, p);
  if (a == 0) throw PreconditionError("inverse of zero in F_" + std::to_string(p));
  i64 t = 0, nt = 1, r = p, nr = a;
  while (nr) {
    i64 q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  return mod_norm(t, p);
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_square_mod(i64 a, i64 p) {
  a = mod_norm(a, p);
  if (a == 0 || p == 2) return true;
  return mod_pow(a, static_cast<std::uint64_t>((p - 1) / 2), p) == 1;
}

// ---------------------------------------------------------------- FpPoly

FpPoly::FpPoly(i64 p, std::vector<i64> coeffs) : p_(p), c_(std::move(coeffs)) {
  if (p < 2) throw PreconditionError("FpPoly: characteristic must be a prime");
  for (auto& c : c_) c = mod_norm(c, p_);
  trim();
}

FpPoly FpPoly::x_power(i64 p, std::size_t k, i64 c) {
  std::vector<i64> v(k + 1, 0);
  v[k] = c;
  return FpPoly(p, std::move(v));
}

void FpPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

FpPoly FpPoly::monic() const {
  if (is_zero()) return *this;
  return scale(*this, mod_inv(leading(), p_));
}

i64 FpPoly::eval(i64 x) const {
  i64 r = 0;
  for (std::size_t k = c_.size(); k-- > 0;) r = mod_norm(mod_mul(r, x, p_) + c_[k], p_);
  return r;
}

std::string FpPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (c_[k] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << c_[k];
      continue;
    }
    if (c_[k] != 1) os << c_[k] << "*";
    os << "X";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

static void same_field(const FpPoly& a, const FpPoly& b) {
  if (a.p() != b.p()) throw PreconditionError("polynomials over different prime fields");
}

FpPoly operator+(const FpPoly& a, const FpPoly& b) {
  same_field(a, b);
  std::vector<i64> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
  return FpPoly(a.p(), std::move(c));
}

FpPoly operator-(const FpPoly& a, const FpPoly& b) {
  same_field(a, b);
  std::vector<i64> c(std::max(a.coeffs().size(), b.coeffs().size()), 0);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) - b.coeff(k);
  return FpPoly(a.p(), std::move(c));
}

FpPoly operator*(const FpPoly& a, const FpPoly& b) {
  same_field(a, b);
  if (a.is_zero() || b.is_zero()) return FpPoly(a.p(), {});
  const i64 p = a.p();
  std::vector<i64> c(a.coeffs().size() + b.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs().size(); ++j)
      c[i + j] = (c[i + j] + mod_mul(a.coeffs()[i], b.coeffs()[j], p)) % p;
  }
  return FpPoly(p, std::move(c));
}

FpPoly scale(const FpPoly& a, i64 s) {
  std::vector<i64> c = a.coeffs();
  for (auto& x : c) x = mod_mul(x, mod_norm(s, a.p()), a.p());
  return FpPoly(a.p(), std::move(c));
}

std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b) {
  same_field(a, b);
  if (b.is_zero()) throw PreconditionError("polynomial division by zero");
  const i64 p = a.p();
  std::vector<i64> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {FpPoly(p, {}), a};
  std::vector<i64> q(static_cast<std::size_t>(a.degree() - db + 1), 0);
  const i64 inv = mod_inv(b.leading(), p);
  for (int k = a.degree(); k >= db; --k) {
    i64 c = mod_mul(r[static_cast<std::size_t>(k)], inv, p);
    if (c == 0) continue;
    q[static_cast<std::size_t>(k - db)] = c;
    for (int j = 0; j <= db; ++j) {
      auto idx = static_cast<std::size_t>(k - db + j);
      r[idx] = mod_norm(r[idx] - mod_mul(c, b.coeffs()[static_cast<std::size_t>(j)], p), p);
    }
  }
  return {FpPoly(p, std::move(q)), FpPoly(p, std::move(r))};
}

FpPoly operator%(const FpPoly& a, const FpPoly& b) { return divmod(a, b).second; }

FpPoly poly_gcd(const FpPoly& a, const FpPoly& b) {
  same_field(a, b);
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

FpPoly derivative(const FpPoly& a) {
  if (a.degree() < 1) return FpPoly(a.p(), {});
  std::vector<i64> c(a.coeffs().size() - 1);
  for (std::size_t k = 1; k < a.coeffs().size(); ++k) c[k - 1] = mod_mul(a.coeffs()[k], static_cast<i64>(k) % a.p(), a.p());
  return FpPoly(a.p(), std::move(c));
}

FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod) {
  if (e < 0) throw PreconditionError("powmod: negative exponent");
  FpPoly r = FpPoly::constant(base.p(), 1) % mod;
  FpPoly b = base % mod;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = (r * r) % mod;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = (r * b) % mod;
  }
  return r;
}

FpPoly powmod(const FpPoly& base, std::uint64_t e, const FpPoly& mod) {
  return powmod(base, mpz_class(static_cast<unsigned long>(e)), mod);
}

FpPoly inverse_mod(const FpPoly& a, const FpPoly& m) {
  same_field(a, m);
  FpPoly r0 = m, r1 = a % m, t0(m.p(), {}), t1 = FpPoly::constant(m.p(), 1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    FpPoly t = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r0.degree() != 0) throw PreconditionError("inverse_mod: " + a.to_string() + " not invertible modulo " + m.to_string());
  return scale(t0, mod_inv(r0.leading(), m.p())) % m;
}

FpPoly exact_quotient(const FpPoly& a, const FpPoly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw PreconditionError(b.to_string() + " does not divide " + a.to_string());
  return q;
}

bool poly_less(const FpPoly& a, const FpPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int k = a.degree(); k >= 0; --k) {
    auto i = static_cast<std::size_t>(k);
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  }
  return false;
}

// ---------------------------------------------------------------- factorization

namespace {

std::vector<FactorPower> squarefree(const FpPoly& f) {
  const i64 p = f.p();
  std::vector<FactorPower> out;
  if (f.degree() < 1) return out;
  FpPoly c = poly_gcd(f, derivative(f));
  FpPoly w = exact_quotient(f, c);
  int i = 1;
  while (w.degree() > 0) {
    FpPoly y = poly_gcd(w, c);
    FpPoly z = exact_quotient(w, y);
    if (z.degree() > 0) out.push_back({z.monic(), i});
    ++i;
    w = y;
    c = exact_quotient(c, y);
  }
  if (c.degree() > 0) {
    std::vector<i64> root;
    for (std::size_t k = 0; k < c.coeffs().size(); k += static_cast<std::size_t>(p)) root.push_back(c.coeffs()[k]);
    for (auto& fp : squarefree(FpPoly(p, root))) out.push_back({fp.factor, fp.multiplicity * static_cast<int>(p)});
  }
  return out;
}

std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly g) {
  const i64 p = g.p();
  std::vector<std::pair<FpPoly, int>> out;
  const FpPoly x = FpPoly::x_power(p, 1);
  FpPoly h = x % g;
  for (int d = 1; g.degree() >= 2 * d; ++d) {
    h = powmod(h, static_cast<std::uint64_t>(p), g);
    FpPoly t = poly_gcd(h - x, g);
    if (t.degree() > 0) {
      out.emplace_back(t, d);
      g = exact_quotient(g, t).monic();
      h = h % g;
    }
  }
  if (g.degree() > 0) out.emplace_back(g.monic(), g.degree());
  return out;
}

void equal_degree(const FpPoly& t, int d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  const i64 p = t.p();
  if (t.degree() == d) {
    out.push_back(t.monic());
    return;
  }
  std::uniform_int_distribution<i64> coef(0, p - 1);
  mpz_class q;
  mpz_ui_pow_ui(q.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
  for (;;) {
    std::vector<i64> av(static_cast<std::size_t>(t.degree()));
    for (auto& c : av) c = coef(rng);
    FpPoly a(p, av);
    if (a.degree() < 1) continue;
    FpPoly b;
    if (p == 2) {
      b = a;
      FpPoly s = a;
      for (int i = 1; i < d; ++i) {
        s = (s * s) % t;
        b = b + s;
      }
    } else {
      b = powmod(a, mpz_class((q - 1) / 2), t) - FpPoly::constant(p, 1);
    }
    FpPoly g = poly_gcd(b, t);
    if (g.degree() > 0 && g.degree() < t.degree()) {
      equal_degree(g, d, rng, out);
      equal_degree(exact_quotient(t, g).monic(), d, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<FactorPower> factor(const FpPoly& f) {
  if (f.is_zero()) throw PreconditionError("factor: zero polynomial");
  std::mt19937_64 rng(kFactorSeed);
  std::vector<FactorPower> out;
  for (const auto& sq : squarefree(f.monic())) {
    for (const auto& [t, d] : distinct_degree(sq.factor)) {
      std::vector<FpPoly> parts;
      equal_degree(t, d, rng, parts);
      for (auto& q : parts) out.push_back({q, sq.multiplicity});
    }
  }
  std::sort(out.begin(), out.end(), [](const FactorPower& a, const FactorPower& b) {
    if (a.factor != b.factor) return poly_less(a.factor, b.factor);
    return a.multiplicity < b.multiplicity;
  });
  // merge equal factors that arrived from different squarefree layers
  std::vector<FactorPower> merged;
  for (auto& fp : out) {
    if (!merged.empty() && merged.back().factor == fp.factor) merged.back().multiplicity += fp.multiplicity;
    else merged.push_back(fp);
  }
  return merged;
}

bool is_irreducible(const FpPoly& f) {
  if (f.degree() < 1) return false;
  auto fs = factor(f);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

std::vector<FpPoly> divisors(const FpPoly& mu) {
  if (mu.is_zero() || !mu.is_monic()) throw PreconditionError("divisors: polynomial must be monic and nonzero");
  std::vector<FpPoly> out{FpPoly::constant(mu.p(), 1)};
  for (const auto& fp : factor(mu)) {
    std::vector<FpPoly> next;
    for (const auto& d : out) {
      FpPoly cur = d;
      next.push_back(cur);
      for (int k = 1; k <= fp.multiplicity; ++k) {
        cur = cur * fp.factor;
        next.push_back(cur);
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end(), poly_less);
  return out;
}

DualGenerator dual_generator(const FpPoly& g, const FpPoly& mu, const FpPoly& g_star) {
  if (!(mu % g).is_zero()) throw PreconditionError("dual_generator: g does not divide mu");
  if (!(mu % g_star).is_zero()) throw PreconditionError("dual_generator: g_* does not divide mu");
  DualGenerator d;
  d.g_perp = exact_quotient(mu, g_star.monic());
  FpPoly prod = g_star.monic() * g.monic();
  d.self_orthogonal = (prod % mu).is_zero();
  d.self_dual = prod == mu.monic();
  return d;
}

FpPoly gstar_closed_form(const FpPoly& g, GStarCase c) {
  const i64 p = g.p();
  const int deg = g.degree();
  if (deg < 0) throw PreconditionError("gstar_closed_form: zero polynomial");
  switch (c) {
    case GStarCase::Fixed:
      return g.monic();
    case GStarCase::Negated: {
      // (-1)^deg g(-X)
      std::vector<i64> v = g.coeffs();
      for (std::size_t k = 0; k < v.size(); ++k)
        if ((static_cast<int>(k) + deg) % 2 == 1) v[k] = mod_norm(-v[k], p);
      return FpPoly(p, v).monic();
    }
    case GStarCase::HalfInteger: {
      // (-1)^deg g(1 - X)
      FpPoly r(p, {});
      FpPoly base(p, {1, p - 1});
      FpPoly pw = FpPoly::constant(p, 1);
      for (std::size_t k = 0; k < g.coeffs().size(); ++k) {
        r = r + scale(pw, g.coeffs()[k]);
        pw = pw * base;
      }
      if (deg % 2 == 1) r = scale(r, p - 1);
      return r.monic();
    }
    case GStarCase::Unitary: {
      if (g.coeff(0) == 0) throw PreconditionError("gstar_closed_form: unitary case needs g(0) != 0");
      std::vector<i64> v(g.coeffs().rbegin(), g.coeffs().rend());
      return scale(FpPoly(p, v), mod_inv(g.coeff(0), p));
    }
  }
  throw InternalError("gstar_closed_form: unknown case");
}

// ---------------------------------------------------------------- matrices

FpMatrix FpMatrix::identity(i64 p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % p;
  return m;
}

void FpMatrix::append_row(const std::vector<i64>& r) {
  if (r.size() != cols_) throw PreconditionError("FpMatrix::append_row: width mismatch");
  for (i64 x : r) d_.push_back(mod_norm(x, p_));
  ++rows_;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix t(p_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
  if (a.cols() != b.rows() || a.p() != b.p()) throw PreconditionError("FpMatrix product: shape mismatch");
  const i64 p = a.p();
  FpMatrix c(p, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      i64 x = a(i, k);
      if (!x) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = (c(i, j) + mod_mul(x, b(k, j), p)) % p;
    }
  return c;
}

FpMatrix rref(const FpMatrix& m, std::vector<std::size_t>* pivots) {
  const i64 p = m.p();
  FpMatrix a = m;
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t s = r;
    while (s < a.rows() && a(s, c) == 0) ++s;
    if (s == a.rows()) continue;
    if (s != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(s, j));
    i64 inv = mod_inv(a(r, c), p);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = mod_mul(a(r, j), inv, p);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      i64 f = a(i, c);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = mod_norm(a(i, j) - mod_mul(f, a(r, j), p), p);
    }
    piv.push_back(c);
    ++r;
  }
  FpMatrix out(p, 0, m.cols());
  for (std::size_t i = 0; i < r; ++i) out.append_row(a.row(i));
  if (pivots) *pivots = std::move(piv);
  return out;
}

std::size_t rank(const FpMatrix& m) { return rref(m).rows(); }

FpMatrix kernel(const FpMatrix& m) {
  std::vector<std::size_t> piv;
  FpMatrix r = rref(m, &piv);
  const i64 p = m.p();
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  FpMatrix k(p, 0, m.cols());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<i64> v(m.cols(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = mod_norm(-r(i, f), p);
    k.append_row(v);
  }
  return k;
}

i64 det_mod(const FpMatrix& m) {
  if (m.rows() != m.cols()) throw PreconditionError("det_mod: square matrix required");
  const i64 p = m.p();
  FpMatrix a = m;
  i64 det = 1 % p;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    std::size_t s = c;
    while (s < a.rows() && a(s, c) == 0) ++s;
    if (s == a.rows()) return 0;
    if (s != c) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(c, j), a(s, j));
      det = mod_norm(-det, p);
    }
    det = mod_mul(det, a(c, c), p);
    i64 inv = mod_inv(a(c, c), p);
    for (std::size_t i = c + 1; i < a.rows(); ++i) {
      if (!a(i, c)) continue;
      i64 f = mod_mul(a(i, c), inv, p);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) = mod_norm(a(i, j) - mod_mul(f, a(c, j), p), p);
    }
  }
  return det;
}

// ---------------------------------------------------------------- codes and forms

FpCode::FpCode(i64 p, std::size_t n, const FpMatrix& generators) : p_(p), n_(n) {
  if (generators.cols() != n || generators.p() != p) throw PreconditionError("FpCode: generator shape mismatch");
  g_ = rref(generators, &piv_);
}

bool FpCode::contains(const std::vector<i64>& v) const {
  if (v.size() != n_) throw PreconditionError("FpCode::contains: length mismatch");
  std::vector<i64> r(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) r[j] = mod_norm(v[j], p_);
  for (std::size_t i = 0; i < g_.rows(); ++i) {
    i64 f = r[piv_[i]];
    if (!f) continue;
    for (std::size_t j = 0; j < n_; ++j) r[j] = mod_norm(r[j] - mod_mul(f, g_(i, j), p_), p_);
  }
  return std::all_of(r.begin(), r.end(), [](i64 x) { return x == 0; });
}

bool FpCode::subset_of(const FpCode& o) const {
  for (std::size_t i = 0; i < g_.rows(); ++i)
    if (!o.contains(g_.row(i))) return false;
  return true;
}

FpSymForm::FpSymForm(const FpMatrix& m) : m_(m) {
  if (m.rows() != m.cols()) throw PreconditionError("FpSymForm: square matrix required");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m(i, j) != m(j, i)) throw PreconditionError("FpSymForm: matrix not symmetric");
}

i64 FpSymForm::eval(const std::vector<i64>& x, const std::vector<i64>& y) const {
  const i64 p = m_.p();
  i64 s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    i64 t = 0;
    for (std::size_t j = 0; j < y.size(); ++j) t = (t + mod_mul(m_(i, j), mod_norm(y[j], p), p)) % p;
    s = (s + mod_mul(mod_norm(x[i], p), t, p)) % p;
  }
  return s;
}

FpCode form_radical(const FpSymForm& phi) {
  return FpCode(phi.p(), phi.dimension(), kernel(phi.matrix()));
}

bool is_nondegenerate(const FpSymForm& phi) { return rank(phi.matrix()) == phi.dimension(); }

FpCode code_orthogonal(const FpCode& c, const FpSymForm& phi) {
  if (c.ambient() != phi.dimension() || c.p() != phi.p()) throw PreconditionError("code_orthogonal: dimension mismatch");
  if (c.dimension() == 0) return FpCode::full(c.p(), c.ambient());
  FpCode perp(c.p(), c.ambient(), kernel(c.generator() * phi.matrix()));
  if (is_nondegenerate(phi) && perp.dimension() + c.dimension() != c.ambient())
    throw InternalError("code_orthogonal: dimension count violated for a nondegenerate form");
  return perp;
}

bool lagrangian_exists(const FpSymForm& phi) {
  const std::size_t n = phi.dimension();
  if (n % 2) return false;
  const i64 p = phi.p();
  if (p == 2) return true;
  const std::size_t m = n / 2;
  i64 target = (m % 2) ? p - 1 : 1;
  i64 det = det_mod(phi.matrix());
  // same square class: det * target^{-1} is a nonzero square
  return det != 0 && is_square_mod(mod_mul(det, mod_inv(target, p), p), p);
}

namespace {

using Vec = std::vector<i64>;

Vec combine(const FpMatrix& basis, const Vec& coef) {
  const i64 p = basis.p();
  Vec v(basis.cols(), 0);
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    if (!coef[i]) continue;
    for (std::size_t j = 0; j < basis.cols(); ++j) v[j] = (v[j] + mod_mul(coef[i], basis(i, j), p)) % p;
  }
  return v;
}

i64 sqrt_mod(i64 a, i64 p) {
  a = mod_norm(a, p);
  for (i64 x = 0; x < p; ++x)
    if (mod_mul(x, x, p) == a) return x;
  throw InternalError("sqrt_mod: not a square");
}

constexpr double kLexBudget = 1 << 20;

// First nonzero isotropic vector of V (rows of basis) in lexicographic order of
// its coefficient vector, least significant coordinate first; a diagonal
// (Chevalley) construction takes over when V is too large to scan.
std::optional<Vec> isotropic_vector(const FpSymForm& phi, const FpMatrix& basis) {
  const i64 p = phi.p();
  const std::size_t k = basis.rows();
  if (k == 0) return std::nullopt;
  double total = 1;
  for (std::size_t i = 0; i < k && total <= kLexBudget; ++i) total *= static_cast<double>(p);
  if (total <= kLexBudget) {
    Vec coef(k, 0);
    for (;;) {
      std::size_t i = 0;
      while (i < k && coef[i] == p - 1) coef[i++] = 0;
      if (i == k) return std::nullopt;
      ++coef[i];
      Vec v = combine(basis, coef);
      if (phi.eval(v, v) == 0) return v;
    }
  }
  if (p == 2) {
    // x -> phi(x,x) is F_2-linear; isotropic vectors form its kernel.
    FpMatrix f(p, 1, k);
    for (std::size_t i = 0; i < k; ++i) {
      Vec b = basis.row(i);
      f(0, i) = phi.eval(b, b);
    }
    FpMatrix ker = kernel(f);
    if (ker.rows() == 0) return std::nullopt;
    return combine(basis, ker.row(0));
  }
  // Diagonalize on V, then solve a x^2 + b y^2 + c z^2 = 0.
  std::vector<Vec> orth;
  std::vector<i64> diag;
  std::vector<Vec> work;
  for (std::size_t i = 0; i < k; ++i) work.push_back(basis.row(i));
  while (!work.empty()) {
    std::size_t pick = work.size();
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (std::all_of(work[i].begin(), work[i].end(), [](i64 x) { return x == 0; })) continue;
      if (phi.eval(work[i], work[i]) == 0) return work[i];
      pick = i;
      break;
    }
    if (pick == work.size()) break;
    Vec v = work[pick];
    i64 a = phi.eval(v, v);
    i64 ia = mod_inv(a, p);
    std::vector<Vec> rest;
    for (std::size_t i = 0; i < work.size(); ++i) {
      if (i == pick) continue;
      i64 f = mod_mul(phi.eval(work[i], v), ia, p);
      Vec w = work[i];
      for (std::size_t j = 0; j < w.size(); ++j) w[j] = mod_norm(w[j] - mod_mul(f, v[j], p), p);
      rest.push_back(w);
    }
    orth.push_back(v);
    diag.push_back(a);
    work = std::move(rest);
    if (orth.size() == 3) break;
  }
  auto lin = [&](i64 x, i64 y, i64 z) {
    Vec v(basis.cols(), 0);
    i64 c[3] = {x, y, z};
    for (std::size_t i = 0; i < orth.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = (v[j] + mod_mul(c[i], orth[i][j], p)) % p;
    return v;
  };
  if (orth.size() >= 3) {
    for (i64 x = 0; x < p; ++x)
      for (i64 y = 0; y < p; ++y) {
        if (!x && !y) continue;
        i64 s = mod_norm(-(mod_mul(diag[0], mod_mul(x, x, p), p) + mod_mul(diag[1], mod_mul(y, y, p), p)), p);
        i64 val = mod_mul(s, mod_inv(diag[2], p), p);
        if (is_square_mod(val, p)) return lin(x, y, sqrt_mod(val, p));
      }
  } else if (orth.size() == 2) {
    i64 val = mod_mul(mod_norm(-diag[0], p), mod_inv(diag[1], p), p);
    if (is_square_mod(val, p)) return lin(1, sqrt_mod(val, p), 0);
  }
  return std::nullopt;
}

// Greedy hyperbolic splitting: returns up to `steps` mutually orthogonal isotropic vectors.
FpMatrix split_isotropic(const FpSymForm& phi, std::size_t steps) {
  const i64 p = phi.p();
  const std::size_t n = phi.dimension();
  FpMatrix w(p, 0, n);
  FpMatrix v = FpMatrix::identity(p, n);
  for (std::size_t s = 0; s < steps; ++s) {
    auto x = isotropic_vector(phi, v);
    if (!x) break;
    w.append_row(*x);
    Vec y;
    for (std::size_t i = 0; i < v.rows(); ++i) {
      Vec b = v.row(i);
      if (phi.eval(*x, b) != 0) {
        y = b;
        break;
      }
    }
    if (y.empty()) throw InternalError("split_isotropic: restricted form degenerate");
    // V' = {c*V : phi(cV, x) = phi(cV, y) = 0}
    FpMatrix cond(p, 2, v.rows());
    for (std::size_t i = 0; i < v.rows(); ++i) {
      Vec b = v.row(i);
      cond(0, i) = phi.eval(b, *x);
      cond(1, i) = phi.eval(b, y);
    }
    FpMatrix ker = kernel(cond);
    FpMatrix next(p, 0, n);
    for (std::size_t i = 0; i < ker.rows(); ++i) next.append_row(combine(v, ker.row(i)));
    v = std::move(next);
  }
  return w;
}

}  // namespace

std::optional<FpCode> find_lagrangian(const FpSymForm& phi) {
  if (!is_nondegenerate(phi)) throw PreconditionError("find_lagrangian: form is degenerate");
  if (!lagrangian_exists(phi)) return std::nullopt;
  const std::size_t m = phi.dimension() / 2;
  FpMatrix w = split_isotropic(phi, m);
  if (w.rows() != m) throw InternalError("find_lagrangian: construction stopped early");
  FpCode code(phi.p(), phi.dimension(), w);
  if (!(code_orthogonal(code, phi) == code)) throw InternalError("find_lagrangian: result is not its own orthogonal");
  return code;
}

FpCode find_totally_isotropic(const FpSymForm& phi, std::size_t d) {
  if (!is_nondegenerate(phi)) throw PreconditionError("find_totally_isotropic: form is degenerate");
  const std::size_t n = phi.dimension();
  const std::size_t m = (n + 1) / 2;
  bool ok = d + 1 <= m || (n % 2 == 0 && d <= m && lagrangian_exists(phi));
  if (!ok)
    throw PreconditionError("find_totally_isotropic: d = " + std::to_string(d) + " outside the guaranteed range for dimension " +
                            std::to_string(n));
  FpMatrix w = split_isotropic(phi, d);
  if (w.rows() != d) throw InternalError("find_totally_isotropic: construction stopped early");
  FpCode code(phi.p(), n, w);
  if (!code.subset_of(code_orthogonal(code, phi))) throw InternalError("find_totally_isotropic: W not inside W^perp");
  return code;
}

}  // namespace lf
