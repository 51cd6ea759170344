#include "latticeforge/ringints.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lf {

namespace {

ZPoly zpoly_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// a / b for monic b, exact.
ZPoly zpoly_divexact(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  if (a.size() < b.size()) throw InternalError("zpoly_divexact: degree");
  ZPoly q(a.size() - db);
  for (std::size_t k = a.size(); k-- > db;) {
    Int c = a[k];
    q[k - db] = c;
    if (c != 0)
      for (std::size_t j = 0; j <= db; ++j) a[k - db + j] -= c * b[j];
  }
  for (std::size_t j = 0; j < db; ++j) ensure(a[j] == 0, "zpoly_divexact: nonzero remainder");
  return q;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }

std::vector<Int> zeros(std::size_t n) { return std::vector<Int>(n); }

std::vector<Int> unit_vec(std::size_t n, std::size_t k) {
  auto v = zeros(n);
  v[k] = 1;
  return v;
}

Int vec_content(const std::vector<Int>& v) {
  Int g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

Int matrix_content(const IntMatrix& m) {
  Int g = 0;
  for (const auto& x : m.data()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

// z with z*m = v over Q; m nonsingular.
std::vector<Rat> solve_left(const RatMatrix& m, const std::vector<Rat>& v) {
  const std::size_t n = m.rows();
  RatMatrix a(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(j, i);
    a(i, n) = v[i];
  }
  Rat f;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw PreconditionError("solve: singular system");
    a.swap_rows(c, p);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c) == 0) continue;
      f = a(i, c) / a(c, c);
      for (std::size_t j = c; j <= n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  std::vector<Rat> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a(i, n) / a(i, i);
  return out;
}

std::vector<i64> to_mod(const std::vector<Int>& v, i64 p) {
  std::vector<i64> out(v.size());
  Int t;
  for (std::size_t i = 0; i < v.size(); ++i) {
    t = v[i] % p;
    if (t < 0) t += p;
    out[i] = t.get_si();
  }
  return out;
}

std::vector<Int> from_mod(const std::vector<i64>& v) {
  std::vector<Int> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<long>(v[i]);
  return out;
}

FpPoly reduce_zpoly(const ZPoly& f, i64 p) { return FpPoly(p, to_mod(f, p)); }

ZPoly lift_fppoly(const FpPoly& f) {
  ZPoly out(f.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<long>(f.coeffs()[i]);
  return out;
}

IntMatrix rows_to_matrix(const std::vector<std::vector<Int>>& rows, std::size_t n) {
  IntMatrix m(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

// ------------------------------------------------------------ polynomials

ZPoly cyclotomic_polynomial(int n) {
  require(n >= 1, "cyclotomic_polynomial: n must be positive");
  std::vector<int> divs;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) divs.push_back(d);
  std::vector<ZPoly> phi(divs.size());
  for (std::size_t i = 0; i < divs.size(); ++i) {
    int d = divs[i];
    ZPoly f(d + 1);
    f[0] = -1;
    f[d] = 1;
    for (std::size_t j = 0; j < i; ++j)
      if (d % divs[j] == 0) f = zpoly_divexact(f, phi[j]);
    phi[i] = f;
  }
  return phi.back();
}

ZPoly real_cyclotomic_polynomial(int n) {
  require(n >= 3, "real_cyclotomic_polynomial: n must be at least 3");
  ZPoly phi = cyclotomic_polynomial(n);
  const std::size_t k = (phi.size() - 1) / 2;
  for (std::size_t j = 0; j < phi.size(); ++j) ensure(phi[j] == phi[phi.size() - 1 - j], "cyclotomic not palindromic");
  // X^{-k} Phi(X) = c_k + sum_j c_{k+j} D_j(t), D_j(X + 1/X) = X^j + X^{-j}
  ZPoly d_prev{2}, d_cur{0, 1};
  ZPoly psi(k + 1);
  psi[0] = phi[k];
  for (std::size_t j = 1; j <= k; ++j) {
    for (std::size_t i = 0; i < d_cur.size(); ++i) psi[i] += phi[k + j] * d_cur[i];
    ZPoly next = zpoly_mul(ZPoly{0, 1}, d_cur);
    for (std::size_t i = 0; i < d_prev.size(); ++i) next[i] -= d_prev[i];
    d_prev = std::move(d_cur);
    d_cur = std::move(next);
  }
  return psi;
}

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::TotallyReal:
      return "totally_real";
    case FieldKind::CM:
      return "cm";
    default:
      return "other";
  }
}

// ------------------------------------------------------------ elements

bool FieldElement::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x == 0; });
}

bool FieldElement::is_integral() const {
  return std::all_of(c.begin(), c.end(), [](const Rat& x) { return x.get_den() == 1; });
}

std::vector<Int> FieldElement::to_int() const {
  require(is_integral(), "element is not integral");
  std::vector<Int> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].get_num();
  return out;
}

Int FieldElement::denominator() const {
  Int d = 1;
  for (const auto& x : c) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
  return d;
}

FieldElement from_int(const std::vector<Int>& v) {
  std::vector<Rat> c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i];
  return FieldElement(std::move(c));
}

std::string element_to_string(const FieldElement& x) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < x.c.size(); ++i) os << (i ? ", " : "") << x.c[i].get_str();
  os << ']';
  return os.str();
}

// ------------------------------------------------------------ ring

RingPtr RingOfIntegers::monogenic(ZPoly m, FieldKind kind, std::string label) {
  while (!m.empty() && m.back() == 0) m.pop_back();
  require(m.size() >= 2, "monogenic ring: defining polynomial must have positive degree");
  require(m.back() == 1, "monogenic ring: defining polynomial must be monic");
  std::shared_ptr<RingOfIntegers> r(new RingOfIntegers());
  r->m_ = std::move(m);
  r->kind_ = kind;
  r->label_ = std::move(label);
  r->build_tables();
  return r;
}

RingPtr RingOfIntegers::cyclotomic(int n) {
  require(n >= 1, "cyclotomic field: n must be positive");
  auto r = std::const_pointer_cast<RingOfIntegers>(
      monogenic(cyclotomic_polynomial(n), n <= 2 ? FieldKind::TotallyReal : FieldKind::CM,
                "Q(zeta_" + std::to_string(n) + ")"));
  r->family_ = Family::Cyclotomic;
  r->family_param_ = n;
  return r;
}

RingPtr RingOfIntegers::real_cyclotomic(int n) {
  require(n >= 3, "real cyclotomic field: n must be at least 3");
  auto r = std::const_pointer_cast<RingOfIntegers>(monogenic(
      real_cyclotomic_polynomial(n), FieldKind::TotallyReal, "Q(zeta_" + std::to_string(n) + ")^+"));
  r->family_ = Family::RealCyclotomic;
  r->family_param_ = n;
  return r;
}

RingPtr RingOfIntegers::quadratic(long d) {
  require(d != 0 && d != 1, "quadratic field: d must differ from 0 and 1");
  for (long q = 2; q * q <= std::abs(d); ++q) require(std::abs(d) % (q * q) != 0, "quadratic field: d must be squarefree");
  ZPoly m;
  long r4 = ((d % 4) + 4) % 4;
  if (r4 == 1)
    m = {Int(-(d - 1) / 4), Int(-1), Int(1)};
  else
    m = {Int(-d), Int(0), Int(1)};
  auto r = std::const_pointer_cast<RingOfIntegers>(monogenic(
      m, d < 0 ? FieldKind::CM : FieldKind::TotallyReal, "Q(sqrt(" + std::to_string(d) + "))"));
  r->family_ = Family::Quadratic;
  r->family_param_ = d;
  return r;
}

RingPtr RingOfIntegers::compositum(RingPtr a, RingPtr b) {
  require(a && b, "compositum: null factor");
  require(!a->is_compositum() && !b->is_compositum(), "compositum: factors must be monogenic");
  Int g;
  mpz_gcd(g.get_mpz_t(), a->disc_.get_mpz_t(), b->disc_.get_mpz_t());
  require(g == 1, "compositum: factor discriminants must be coprime");
  std::shared_ptr<RingOfIntegers> r(new RingOfIntegers());
  r->factors_ = {a, b};
  r->family_ = Family::Compositum;
  auto ka = a->kind_, kb = b->kind_;
  if (ka == FieldKind::TotallyReal && kb == FieldKind::TotallyReal)
    r->kind_ = FieldKind::TotallyReal;
  else if (ka != FieldKind::Other && kb != FieldKind::Other)
    r->kind_ = FieldKind::CM;
  else
    r->kind_ = FieldKind::Other;
  r->label_ = a->label_ + "*" + b->label_;
  r->build_tables();
  return r;
}

const ZPoly& RingOfIntegers::defining_polynomial() const {
  if (is_compositum()) throw UnsupportedError("defining_polynomial: ring is a compositum");
  return m_;
}

void RingOfIntegers::build_tables() {
  auto reductions = [](const ZPoly& m, std::size_t count) {
    const std::size_t n = m.size() - 1;
    std::vector<std::vector<Int>> red;
    red.reserve(count);
    for (std::size_t k = 0; k < std::min(n, count); ++k) red.push_back(unit_vec(n, k));
    while (red.size() < count) {
      const auto& prev = red.back();
      std::vector<Int> next = zeros(n);
      for (std::size_t i = 0; i + 1 < n; ++i) next[i + 1] = prev[i];
      const Int& top = prev[n - 1];
      if (top != 0)
        for (std::size_t i = 0; i < n; ++i) next[i] -= top * m[i];
      red.push_back(std::move(next));
    }
    return red;
  };
  // Tr(alpha^k) = sum_c [alpha^c] (alpha^{k+c})
  auto traces = [](const std::vector<std::vector<Int>>& red3, std::size_t n, std::size_t count) {
    std::vector<Int> tr(count);
    for (std::size_t k = 0; k < count; ++k)
      for (std::size_t c = 0; c < n; ++c) tr[k] += red3[k + c][c];
    return tr;
  };
  if (is_compositum()) {
    const auto& a = *factors_[0];
    const auto& b = *factors_[1];
    n1_ = a.n_;
    n2_ = b.n_;
    red1_ = a.red1_;
    red2_ = b.red1_;
    tr1_ = a.tr1_;
    tr2_ = b.tr1_;
  } else {
    n1_ = m_.size() - 1;
    n2_ = 1;
    auto red3 = reductions(m_, 3 * n1_);
    tr1_ = traces(red3, n1_, 2 * n1_ - 1);
    red3.resize(2 * n1_ - 1);
    red1_ = std::move(red3);
    red2_ = {unit_vec(1, 0)};
    tr2_ = {Int(1)};
  }
  n_ = n1_ * n2_;
  trace_matrix_ = IntMatrix(n_, n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b)
      trace_matrix_(a, b) = tr1_[a / n2_ + b / n2_] * tr2_[a % n2_ + b % n2_];
  disc_ = det_int(trace_matrix_);
  require(disc_ != 0, "ring: defining polynomial is not separable");
  check_structure();
}

void RingOfIntegers::check_structure() const {
  // Full associativity/commutativity check on small rings, a fixed sample otherwise.
  std::vector<std::size_t> idx;
  if (n_ <= 12) {
    for (std::size_t k = 0; k < n_; ++k) idx.push_back(k);
  } else {
    for (std::size_t k = 0; k < n_; k += std::max<std::size_t>(1, n_ / 7)) idx.push_back(k);
    idx.push_back(n_ - 1);
  }
  const auto one_v = unit_vec(n_, 0);
  for (std::size_t a : idx) {
    auto ea = unit_vec(n_, a);
    ensure(mul_int(one_v, ea) == ea, "ring: basis element 0 is not the identity");
    for (std::size_t b : idx) {
      auto eb = unit_vec(n_, b);
      auto ab = mul_int(ea, eb);
      ensure(ab == mul_int(eb, ea), "ring: multiplication table not commutative");
      for (std::size_t c : idx) {
        auto ec = unit_vec(n_, c);
        ensure(mul_int(ab, ec) == mul_int(ea, mul_int(eb, ec)), "ring: multiplication table not associative");
      }
    }
  }
}

FieldElement RingOfIntegers::one() const { return basis_element(0); }

FieldElement RingOfIntegers::scalar(const Rat& r) const {
  FieldElement x = zero();
  x.c[0] = r;
  return x;
}

FieldElement RingOfIntegers::basis_element(std::size_t k) const {
  require(k < n_, "basis_element: index out of range");
  FieldElement x = zero();
  x.c[k] = 1;
  return x;
}

FieldElement RingOfIntegers::generator(std::size_t which) const {
  require(which < generator_count(), "generator: index out of range");
  if (is_compositum()) return embed(which, factors_[which]->generator(0));
  if (n_ == 1) return scalar(Rat(-m_[0]));
  return basis_element(1);
}

FieldElement RingOfIntegers::embed(std::size_t i, const FieldElement& x) const {
  require(is_compositum() && i < 2, "embed: ring is not a compositum");
  require(x.size() == factors_[i]->n_, "embed: size mismatch");
  FieldElement y = zero();
  for (std::size_t k = 0; k < x.size(); ++k) y.c[i == 0 ? k * n2_ : k] = x.c[k];
  return y;
}

FieldElement RingOfIntegers::add(const FieldElement& a, const FieldElement& b) const {
  require(a.size() == n_ && b.size() == n_, "add: size mismatch");
  FieldElement r = a;
  for (std::size_t i = 0; i < n_; ++i) r.c[i] += b.c[i];
  return r;
}

FieldElement RingOfIntegers::sub(const FieldElement& a, const FieldElement& b) const {
  require(a.size() == n_ && b.size() == n_, "sub: size mismatch");
  FieldElement r = a;
  for (std::size_t i = 0; i < n_; ++i) r.c[i] -= b.c[i];
  return r;
}

FieldElement RingOfIntegers::neg(const FieldElement& a) const { return scale(a, Rat(-1)); }

FieldElement RingOfIntegers::scale(const FieldElement& a, const Rat& s) const {
  FieldElement r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

std::vector<Int> RingOfIntegers::mul_int(const std::vector<Int>& a, const std::vector<Int>& b) const {
  require(a.size() == n_ && b.size() == n_, "mul: size mismatch");
  const std::size_t U = 2 * n1_ - 1, V = 2 * n2_ - 1;
  std::vector<Int> t(U * V);
  for (std::size_t x = 0; x < n_; ++x) {
    if (a[x] == 0) continue;
    const std::size_t i1 = x / n2_, j1 = x % n2_;
    for (std::size_t y = 0; y < n_; ++y) {
      if (b[y] == 0) continue;
      mpz_addmul(t[(i1 + y / n2_) * V + j1 + y % n2_].get_mpz_t(), a[x].get_mpz_t(), b[y].get_mpz_t());
    }
  }
  std::vector<Int> s(U * n2_);
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t v = 0; v < V; ++v) {
      const Int& tv = t[u * V + v];
      if (tv == 0) continue;
      if (v < n2_) {
        s[u * n2_ + v] += tv;
      } else {
        for (std::size_t j = 0; j < n2_; ++j)
          if (red2_[v][j] != 0) mpz_addmul(s[u * n2_ + j].get_mpz_t(), tv.get_mpz_t(), red2_[v][j].get_mpz_t());
      }
    }
  std::vector<Int> out(n_);
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t j = 0; j < n2_; ++j) {
      const Int& sv = s[u * n2_ + j];
      if (sv == 0) continue;
      if (u < n1_) {
        out[u * n2_ + j] += sv;
      } else {
        for (std::size_t i = 0; i < n1_; ++i)
          if (red1_[u][i] != 0) mpz_addmul(out[i * n2_ + j].get_mpz_t(), sv.get_mpz_t(), red1_[u][i].get_mpz_t());
      }
    }
  return out;
}

std::vector<i64> RingOfIntegers::mul_mod(const std::vector<i64>& a, const std::vector<i64>& b, i64 p) const {
  require(a.size() == n_ && b.size() == n_, "mul_mod: size mismatch");
  require(p > 1 && p < (i64(1) << 31), "mul_mod: modulus out of range");
  const std::size_t U = 2 * n1_ - 1, V = 2 * n2_ - 1;
  std::vector<i64> t(U * V, 0);
  for (std::size_t x = 0; x < n_; ++x) {
    if (a[x] == 0) continue;
    const std::size_t i1 = x / n2_, j1 = x % n2_;
    for (std::size_t y = 0; y < n_; ++y) {
      if (b[y] == 0) continue;
      i64& slot = t[(i1 + y / n2_) * V + j1 + y % n2_];
      slot = (slot + a[x] * b[y]) % p;
    }
  }
  auto rmod = [p](const Int& v) {
    Int r = v % p;
    if (r < 0) r += p;
    return static_cast<i64>(r.get_si());
  };
  std::vector<i64> s(U * n2_, 0);
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t v = 0; v < V; ++v) {
      i64 tv = t[u * V + v];
      if (tv == 0) continue;
      if (v < n2_) {
        s[u * n2_ + v] = (s[u * n2_ + v] + tv) % p;
      } else {
        for (std::size_t j = 0; j < n2_; ++j)
          if (red2_[v][j] != 0) s[u * n2_ + j] = (s[u * n2_ + j] + tv * rmod(red2_[v][j])) % p;
      }
    }
  std::vector<i64> out(n_, 0);
  for (std::size_t u = 0; u < U; ++u)
    for (std::size_t j = 0; j < n2_; ++j) {
      i64 sv = s[u * n2_ + j];
      if (sv == 0) continue;
      if (u < n1_) {
        out[u * n2_ + j] = (out[u * n2_ + j] + sv) % p;
      } else {
        for (std::size_t i = 0; i < n1_; ++i)
          if (red1_[u][i] != 0) out[i * n2_ + j] = (out[i * n2_ + j] + sv * rmod(red1_[u][i])) % p;
      }
    }
  return out;
}

FieldElement RingOfIntegers::mul(const FieldElement& a, const FieldElement& b) const {
  require(a.size() == n_ && b.size() == n_, "mul: size mismatch");
  Int da = a.denominator(), db = b.denominator();
  std::vector<Int> ai(n_), bi(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    ai[k] = Rat(a.c[k] * da).get_num();
    bi[k] = Rat(b.c[k] * db).get_num();
  }
  auto prod = mul_int(ai, bi);
  Int d = da * db;
  FieldElement r = zero();
  for (std::size_t k = 0; k < n_; ++k) {
    r.c[k] = Rat(prod[k], d);
    r.c[k].canonicalize();
  }
  return r;
}

FieldElement RingOfIntegers::invert(const FieldElement& a) const {
  require(a.size() == n_, "invert: size mismatch");
  require(!a.is_zero(), "invert: zero element");
  std::vector<Rat> e0(n_);
  e0[0] = 1;
  return FieldElement(solve_left(mult_matrix(a), e0));
}

FieldElement RingOfIntegers::pow(const FieldElement& a, long k) const {
  FieldElement base = k < 0 ? invert(a) : a;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  FieldElement r = one();
  while (e) {
    if (e & 1) r = mul(r, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return r;
}

FieldElement RingOfIntegers::eval(const ZPoly& f, const FieldElement& x) const {
  FieldElement r = zero();
  for (std::size_t k = f.size(); k-- > 0;) {
    r = mul(r, x);
    r.c[0] += f[k];
  }
  return r;
}

RatMatrix RingOfIntegers::mult_matrix(const FieldElement& x) const {
  RatMatrix m(n_, n_);
  for (std::size_t k = 0; k < n_; ++k) {
    FieldElement row = mul(basis_element(k), x);
    for (std::size_t j = 0; j < n_; ++j) m(k, j) = row.c[j];
  }
  return m;
}

Rat RingOfIntegers::trace(const FieldElement& x) const {
  require(x.size() == n_, "trace: size mismatch");
  Rat t = 0;
  for (std::size_t k = 0; k < n_; ++k)
    if (x.c[k] != 0) t += x.c[k] * trace_matrix_(0, k);
  return t;
}

Rat RingOfIntegers::norm(const FieldElement& x) const { return det_exact(mult_matrix(x)); }

std::vector<std::vector<std::vector<Int>>> RingOfIntegers::multiplication_table() const {
  std::vector<std::vector<std::vector<Int>>> t(n_, std::vector<std::vector<Int>>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t[i][j] = mul_int(unit_vec(n_, i), unit_vec(n_, j));
  return t;
}

RingAutomorphism RingOfIntegers::identity_automorphism() const {
  std::vector<FieldElement> imgs;
  for (std::size_t i = 0; i < generator_count(); ++i) imgs.push_back(generator(i));
  return RingAutomorphism(*this, imgs);
}

RingAutomorphism RingOfIntegers::galois(long a) const {
  if (is_compositum()) return galois(a, a);
  switch (family_) {
    case Family::Cyclotomic: {
      long n = family_param_;
      require(gcd_long(((a % n) + n) % n, n) == 1 || n == 1, "galois: exponent must be prime to n");
      long e = n == 1 ? 0 : ((a % n) + n) % n;
      return RingAutomorphism(*this, {pow(generator(), e)});
    }
    case Family::RealCyclotomic: {
      long n = family_param_;
      long e = ((a % n) + n) % n;
      require(gcd_long(e, n) == 1, "galois: exponent must be prime to n");
      // D_e(t) = zeta^e + zeta^{-e}
      FieldElement t = generator();
      FieldElement d_prev = scalar(2), d_cur = t;
      for (long k = 1; k < e; ++k) {
        FieldElement next = sub(mul(t, d_cur), d_prev);
        d_prev = std::move(d_cur);
        d_cur = std::move(next);
      }
      return RingAutomorphism(*this, {e == 0 ? d_prev : d_cur});
    }
    case Family::Quadratic: {
      require(a == 1 || a == -1, "galois: quadratic fields take exponent +1 or -1");
      if (a == 1) return identity_automorphism();
      // alpha -> -alpha, or alpha -> 1 - alpha when alpha = (1 + sqrt d)/2
      FieldElement img = m_[1] == 0 ? neg(generator()) : sub(one(), generator());
      return RingAutomorphism(*this, {img});
    }
    default:
      require(a == 1, "galois: only the identity is known for a generic monogenic ring");
      return identity_automorphism();
  }
}

RingAutomorphism RingOfIntegers::galois(long a1, long a2) const {
  require(is_compositum(), "galois: two exponents require a compositum");
  auto s1 = factors_[0]->galois(a1);
  auto s2 = factors_[1]->galois(a2);
  return RingAutomorphism(*this, {embed(0, s1.generator_images()[0]), embed(1, s2.generator_images()[0])});
}

RingAutomorphism RingOfIntegers::conjugation() const {
  if (is_compositum()) {
    auto s1 = factors_[0]->conjugation();
    auto s2 = factors_[1]->conjugation();
    return RingAutomorphism(*this, {embed(0, s1.generator_images()[0]), embed(1, s2.generator_images()[0])});
  }
  switch (family_) {
    case Family::Cyclotomic:
      return family_param_ <= 2 ? identity_automorphism() : galois(-1);
    case Family::RealCyclotomic:
      return identity_automorphism();
    case Family::Quadratic:
      return family_param_ < 0 ? galois(-1) : identity_automorphism();
    default:
      if (kind_ == FieldKind::TotallyReal) return identity_automorphism();
      throw UnsupportedError("conjugation: unknown for a generic monogenic ring that is not totally real");
  }
}

// ------------------------------------------------------------ automorphisms

RingAutomorphism::RingAutomorphism(const RingOfIntegers& r, std::vector<FieldElement> generator_images)
    : images_(std::move(generator_images)) {
  const std::size_t n = r.degree();
  require(images_.size() == r.generator_count(), "automorphism: wrong number of generator images");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    require(images_[i].size() == n && images_[i].is_integral(), "automorphism: images must be integral elements");
    const ZPoly& m = r.is_compositum() ? r.factor(i).defining_polynomial() : r.defining_polynomial();
    require(r.eval(m, images_[i]).is_zero(), "automorphism: image is not a root of the defining polynomial");
  }
  std::vector<std::vector<Int>> p1, p2;
  auto powers = [&](const FieldElement& g, std::size_t count) {
    std::vector<std::vector<Int>> out;
    auto gi = g.to_int();
    std::vector<Int> cur = unit_vec(n, 0);
    for (std::size_t k = 0; k < count; ++k) {
      out.push_back(cur);
      cur = r.mul_int(cur, gi);
    }
    return out;
  };
  const std::size_t n1 = r.is_compositum() ? r.factor(0).degree() : n;
  const std::size_t n2 = r.is_compositum() ? r.factor(1).degree() : 1;
  p1 = powers(images_[0], n1);
  if (r.is_compositum()) p2 = powers(images_[1], n2);
  m_ = IntMatrix(n, n);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      auto v = r.is_compositum() ? r.mul_int(p1[i], p2[j]) : p1[i];
      for (std::size_t k = 0; k < n; ++k) m_(i * n2 + j, k) = v[k];
    }
  Int d = det_int(m_);
  require(d == 1 || d == -1, "automorphism: induced map is not bijective on the ring");
  // ring morphism spot check on a few basis products
  for (std::size_t a = 0; a < std::min<std::size_t>(n, 4); ++a)
    for (std::size_t b = 0; b < std::min<std::size_t>(n, 4); ++b) {
      auto ab = r.mul_int(unit_vec(n, a), unit_vec(n, b));
      auto lhs = apply_int(ab);
      auto rhs = r.mul_int(m_.row_vector(a), m_.row_vector(b));
      ensure(lhs == rhs, "automorphism: not multiplicative on basis products");
    }
}

FieldElement RingAutomorphism::apply(const FieldElement& x) const {
  const std::size_t n = m_.rows();
  require(x.size() == n, "automorphism: size mismatch");
  FieldElement y{std::vector<Rat>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    if (x.c[k] == 0) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (m_(k, j) != 0) y.c[j] += x.c[k] * m_(k, j);
  }
  return y;
}

std::vector<Int> RingAutomorphism::apply_int(const std::vector<Int>& x) const {
  const std::size_t n = m_.rows();
  require(x.size() == n, "automorphism: size mismatch");
  std::vector<Int> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (x[k] == 0) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (m_(k, j) != 0) mpz_addmul(y[j].get_mpz_t(), x[k].get_mpz_t(), m_(k, j).get_mpz_t());
  }
  return y;
}

RingAutomorphism RingAutomorphism::compose(const RingAutomorphism& inner) const {
  RingAutomorphism out;
  out.m_ = inner.m_ * m_;
  for (const auto& g : inner.images_) out.images_.push_back(apply(g));
  return out;
}

bool RingAutomorphism::is_identity() const { return m_ == IntMatrix::identity(m_.rows()); }

int RingAutomorphism::order() const {
  RingAutomorphism cur = *this;
  for (int k = 1; k <= static_cast<int>(m_.rows()) + 1; ++k) {
    if (cur.is_identity()) return k;
    cur = compose(cur);
  }
  throw InternalError("automorphism: order exceeds the degree");
}

RingAutomorphism RingAutomorphism::power(long k) const {
  const long ord = order();
  long e = ((k % ord) + ord) % ord;
  RingAutomorphism out = *this;
  for (long i = 1; i < (e == 0 ? ord : e); ++i) out = compose(out);
  return out;
}

FieldElement relative_trace(const RingOfIntegers& r, const FieldElement& x, const RingAutomorphism& sigma, int n) {
  require(n >= 1, "relative_trace: n must be positive");
  require(sigma.power(n).is_identity(), "relative_trace: sigma^n is not the identity");
  FieldElement s = r.zero(), cur = x;
  for (int i = 0; i < n; ++i) {
    s = r.add(s, cur);
    cur = sigma.apply(cur);
  }
  ensure(sigma.apply(s) == s, "relative_trace: result not fixed by sigma");
  return s;
}

// ------------------------------------------------------------ ideals

IntegralIdeal unit_ideal(const RingOfIntegers& r) { return {IntMatrix::identity(r.degree())}; }

namespace {

IntegralIdeal ideal_from_int_generators(const RingOfIntegers& r, const std::vector<std::vector<Int>>& gens,
                                        Int modulus) {
  const std::size_t n = r.degree();
  std::vector<std::vector<Int>> rows;
  for (const auto& g : gens) {
    if (vec_content(g) == 0) continue;
    for (std::size_t k = 0; k < n; ++k) rows.push_back(r.mul_int(unit_vec(n, k), g));
  }
  require(!rows.empty(), "ideal: zero ideal is not supported");
  return {hnf_modular(rows_to_matrix(rows, n), modulus)};
}

Int int_norm(const RingOfIntegers& r, const std::vector<Int>& g) {
  Rat nm = r.norm(from_int(g));
  ensure(nm.get_den() == 1, "norm of an integral element is not an integer");
  return abs_int(nm.get_num());
}

// O-module generators of an integral ideal: its norm plus HNF rows until the span closes.
std::vector<std::vector<Int>> o_generators(const RingOfIntegers& r, const IntegralIdeal& a) {
  const std::size_t n = r.degree();
  Int nm = ideal_norm(a);
  std::vector<std::vector<Int>> gens{unit_vec(n, 0)};
  gens[0][0] = nm;
  if (nm == 1) return gens;
  for (std::size_t i = n; i-- > 0;) {
    auto row = a.hnf.row_vector(i);
    bool diag_only = true;
    for (std::size_t j = 1; j < n; ++j) diag_only = diag_only && row[j] == 0;
    if (diag_only) continue;
    gens.push_back(row);
    if (ideal_from_int_generators(r, gens, nm) == a) return gens;
  }
  if (ideal_from_int_generators(r, gens, nm) == a) return gens;
  gens.resize(1);
  for (std::size_t i = 0; i < n; ++i) gens.push_back(a.hnf.row_vector(i));
  return gens;
}

}  // namespace

IntegralIdeal ideal_from_generators(const RingOfIntegers& r, const std::vector<FieldElement>& gens) {
  std::vector<std::vector<Int>> ig;
  Int modulus = 0;
  for (const auto& g : gens) {
    require(g.size() == r.degree(), "ideal: generator size mismatch");
    auto v = g.to_int();
    if (vec_content(v) == 0) continue;
    Int nm = int_norm(r, v);
    mpz_gcd(modulus.get_mpz_t(), modulus.get_mpz_t(), nm.get_mpz_t());
    ig.push_back(std::move(v));
  }
  require(!ig.empty(), "ideal: zero ideal is not supported");
  return ideal_from_int_generators(r, ig, modulus);
}

IntegralIdeal make_ideal(const RingOfIntegers& r, const IntMatrix& basis) {
  const std::size_t n = r.degree();
  require(basis.cols() == n, "ideal: basis width mismatch");
  IntMatrix h = hnf_basis(basis);
  require(h.rows() == n, "ideal: basis is not of full rank");
  for (std::size_t g = 0; g < r.generator_count(); ++g) {
    auto gi = r.generator(g).to_int();
    for (std::size_t i = 0; i < n; ++i)
      require(in_hnf_lattice(h, r.mul_int(h.row_vector(i), gi)), "ideal: basis is not closed under multiplication");
  }
  return {h};
}

FractionalIdeal as_fractional(const IntegralIdeal& a) { return {a, Int(1)}; }

FractionalIdeal normalize(const RingOfIntegers&, FractionalIdeal a) {
  require(a.den > 0, "fractional ideal: denominator must be positive");
  Int g = matrix_content(a.num.hnf);
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.den.get_mpz_t());
  if (g > 1) {
    for (std::size_t i = 0; i < a.num.hnf.rows(); ++i)
      for (std::size_t j = 0; j < a.num.hnf.cols(); ++j) a.num.hnf(i, j) /= g;
    a.den /= g;
  }
  return a;
}

FractionalIdeal principal_ideal(const RingOfIntegers& r, const FieldElement& x) {
  require(!x.is_zero(), "principal ideal: zero element");
  Int d = x.denominator();
  FieldElement y = r.scale(x, Rat(d));
  return normalize(r, {ideal_from_generators(r, {y}), d});
}

IntegralIdeal as_integral(const FractionalIdeal& a) {
  require(a.den == 1, "ideal is not integral");
  return a.num;
}

FractionalIdeal fractional_from_basis(const RingOfIntegers& r, const RatMatrix& basis) {
  require(basis.square() && basis.rows() == r.degree(), "fractional ideal: basis must be square of ring rank");
  auto [z, d] = clear_denominators(basis);
  Int det = abs_int(det_int(z));
  require(det != 0, "fractional ideal: singular basis");
  return normalize(r, {{hnf_modular(z, det)}, d});
}

RatMatrix rational_basis(const FractionalIdeal& a) {
  RatMatrix m = to_rat(a.num.hnf);
  Rat inv(Int(1), a.den);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= inv;
  return m;
}

Int ideal_norm(const IntegralIdeal& a) {
  Int d = 1;
  for (std::size_t i = 0; i < a.hnf.rows(); ++i) d *= a.hnf(i, i);
  return abs_int(d);
}

Rat ideal_norm(const RingOfIntegers& r, const FractionalIdeal& a) {
  Int dn;
  mpz_pow_ui(dn.get_mpz_t(), a.den.get_mpz_t(), r.degree());
  Rat q(ideal_norm(a.num), dn);
  q.canonicalize();
  return q;
}

IntegralIdeal ideal_product(const RingOfIntegers& r, const IntegralIdeal& a, const IntegralIdeal& b) {
  const std::size_t n = r.degree();
  auto gens = o_generators(r, b);
  std::vector<std::vector<Int>> rows;
  for (const auto& g : gens)
    for (std::size_t i = 0; i < n; ++i) rows.push_back(r.mul_int(a.hnf.row_vector(i), g));
  return {hnf_modular(rows_to_matrix(rows, n), ideal_norm(a) * ideal_norm(b))};
}

FractionalIdeal ideal_product(const RingOfIntegers& r, const FractionalIdeal& a, const FractionalIdeal& b) {
  return normalize(r, {ideal_product(r, a.num, b.num), a.den * b.den});
}

IntegralIdeal ideal_sum(const RingOfIntegers& r, const IntegralIdeal& a, const IntegralIdeal& b) {
  const std::size_t n = r.degree();
  IntMatrix s(0, n);
  for (std::size_t i = 0; i < n; ++i) s.append_row(a.hnf.row(i));
  for (std::size_t i = 0; i < n; ++i) s.append_row(b.hnf.row(i));
  Int g;
  Int na = ideal_norm(a), nb = ideal_norm(b);
  mpz_gcd(g.get_mpz_t(), na.get_mpz_t(), nb.get_mpz_t());
  return {hnf_modular(s, g)};
}

namespace {
IntMatrix scaled(const IntMatrix& m, const Int& c) {
  IntMatrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= c;
  return out;
}
}  // namespace

FractionalIdeal ideal_sum(const RingOfIntegers& r, const FractionalIdeal& a, const FractionalIdeal& b) {
  const std::size_t n = r.degree();
  Int l;
  mpz_lcm(l.get_mpz_t(), a.den.get_mpz_t(), b.den.get_mpz_t());
  Int ca = l / a.den, cb = l / b.den;
  IntMatrix s(0, n);
  IntMatrix sa = scaled(a.num.hnf, ca), sb = scaled(b.num.hnf, cb);
  for (std::size_t i = 0; i < n; ++i) s.append_row(sa.row(i));
  for (std::size_t i = 0; i < n; ++i) s.append_row(sb.row(i));
  Int ma = ca * ideal_norm(a.num), mb = cb * ideal_norm(b.num), g;
  mpz_gcd(g.get_mpz_t(), ma.get_mpz_t(), mb.get_mpz_t());
  return normalize(r, {{hnf_modular(s, g)}, l});
}

FractionalIdeal ideal_intersection(const RingOfIntegers& r, const FractionalIdeal& a, const FractionalIdeal& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.den.get_mpz_t(), b.den.get_mpz_t());
  IntMatrix sa = scaled(a.num.hnf, l / a.den), sb = scaled(b.num.hnf, l / b.den);
  return normalize(r, {{lattice_intersection(sa, sb)}, l});
}

FractionalIdeal trace_dual(const RingOfIntegers& r, const FractionalIdeal& a) {
  RatMatrix x = rational_basis(a);
  RatMatrix y = inverse_exact(x * to_rat(r.trace_matrix())).transpose();
  return fractional_from_basis(r, y);
}

FractionalIdeal ideal_inverse(const RingOfIntegers& r, const FractionalIdeal& a) {
  // trace dual of A is A^{-1} D^{-1}
  FractionalIdeal inv = ideal_product(r, trace_dual(r, a), as_fractional(different_ideal(r)));
  return inv;
}

FractionalIdeal ideal_power(const RingOfIntegers& r, const FractionalIdeal& a, long k) {
  FractionalIdeal base = k < 0 ? ideal_inverse(r, a) : a;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  FractionalIdeal out = as_fractional(unit_ideal(r));
  while (e) {
    if (e & 1) out = ideal_product(r, out, base);
    e >>= 1;
    if (e) base = ideal_product(r, base, base);
  }
  return out;
}

FractionalIdeal ideal_conjugate(const RingOfIntegers& r, const FractionalIdeal& a, const RingAutomorphism& s) {
  IntMatrix rows = a.num.hnf * s.matrix();
  return normalize(r, {{hnf_modular(rows, ideal_norm(a.num))}, a.den});
}

bool ideal_contains(const FractionalIdeal& a, const FieldElement& x) {
  std::vector<Int> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rat y = x.c[i] * a.den;
    if (y.get_den() != 1) return false;
    v[i] = y.get_num();
  }
  return in_hnf_lattice(a.num.hnf, v);
}

bool ideal_contains(const RingOfIntegers&, const FractionalIdeal& a, const FractionalIdeal& b) {
  const std::size_t n = b.num.hnf.rows();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = Rat(b.num.hnf(i, j), b.den);
    for (auto& x : c) x.canonicalize();
    if (!ideal_contains(a, FieldElement(std::move(c)))) return false;
  }
  return true;
}

IntegralIdeal different_ideal(const RingOfIntegers& r) {
  auto deriv = [](const ZPoly& m) {
    ZPoly d(m.size() > 1 ? m.size() - 1 : 0);
    for (std::size_t k = 1; k < m.size(); ++k) d[k - 1] = m[k] * static_cast<long>(k);
    return d;
  };
  if (!r.is_compositum()) return ideal_from_generators(r, {r.eval(deriv(r.defining_polynomial()), r.generator())});
  FieldElement d1 = r.eval(deriv(r.factor(0).defining_polynomial()), r.generator(0));
  FieldElement d2 = r.eval(deriv(r.factor(1).defining_polynomial()), r.generator(1));
  return ideal_from_generators(r, {r.mul(d1, d2)});
}

// ------------------------------------------------------------ primes

std::vector<PrimeIdeal> primes_above(const RingOfIntegers& r, i64 p) {
  require(is_prime(p), "primes_above: p must be prime");
  const FieldElement pe = r.scalar(Rat(p));
  std::vector<PrimeIdeal> out;
  auto check = [&](const IntegralIdeal& P, int f) {
    Int expect;
    mpz_ui_pow_ui(expect.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(f));
    ensure(ideal_norm(P) == expect, "primes_above: prime ideal has unexpected norm");
  };
  if (!r.is_compositum()) {
    for (const auto& fp : factor(reduce_zpoly(r.defining_polynomial(), p))) {
      FieldElement g = r.eval(lift_fppoly(fp.factor), r.generator());
      IntegralIdeal P = ideal_from_generators(r, {pe, g});
      check(P, fp.factor.degree());
      out.push_back({P, fp.multiplicity, fp.factor.degree()});
    }
  } else {
    auto f1 = factor(reduce_zpoly(r.factor(0).defining_polynomial(), p));
    auto f2 = factor(reduce_zpoly(r.factor(1).defining_polynomial(), p));
    auto unramified = [](const std::vector<FactorPower>& f) {
      return std::all_of(f.begin(), f.end(), [](const FactorPower& x) { return x.multiplicity == 1; });
    };
    auto totally_ramified = [&](const std::vector<FactorPower>& f, std::size_t deg) {
      return f.size() == 1 && f[0].factor.degree() == 1 && static_cast<std::size_t>(f[0].multiplicity) == deg &&
             deg > 1;
    };
    const std::size_t d1 = r.factor(0).degree(), d2 = r.factor(1).degree();
    int ram = -1;
    if (totally_ramified(f1, d1) && unramified(f2)) ram = 0;
    if (totally_ramified(f2, d2) && unramified(f1)) ram = 1;
    if (ram >= 0) {
      const auto& fr = ram == 0 ? f1 : f2;
      const auto& fu = ram == 0 ? f2 : f1;
      std::size_t u = 1 - static_cast<std::size_t>(ram);
      i64 root = mod_norm(-fr[0].factor.coeff(0), p);
      FieldElement lin = r.sub(r.generator(static_cast<std::size_t>(ram)), r.scalar(Rat(root)));
      int e = static_cast<int>(ram == 0 ? d1 : d2);
      for (const auto& g : fu) {
        FieldElement gu = r.eval(lift_fppoly(g.factor), r.generator(u));
        IntegralIdeal P = ideal_from_generators(r, {pe, lin, gu});
        check(P, g.factor.degree());
        out.push_back({P, e, g.factor.degree()});
      }
    } else if (unramified(f1) && unramified(f2)) {
      for (const auto& g : f1)
        for (const auto& h : f2) {
          require(std::gcd(g.factor.degree(), h.factor.degree()) == 1,
                  "primes_above: compositum with p unramified in both factors needs coprime residue degrees");
          FieldElement a = r.eval(lift_fppoly(g.factor), r.generator(0));
          FieldElement b = r.eval(lift_fppoly(h.factor), r.generator(1));
          IntegralIdeal P = ideal_from_generators(r, {pe, a, b});
          int f = g.factor.degree() * h.factor.degree();
          check(P, f);
          out.push_back({P, 1, f});
        }
    } else {
      throw UnsupportedError(
          "primes_above: compositum requires p totally ramified in one factor and unramified in the other, "
          "or unramified in both");
    }
  }
  std::size_t total = 0;
  for (const auto& q : out) total += static_cast<std::size_t>(q.e * q.f);
  ensure(total == r.degree(), "primes_above: sum of e*f differs from the degree");
  return out;
}

IntegralIdeal p_radical(const RingOfIntegers& r, i64 p) {
  require(is_prime(p), "p_radical: p must be prime");
  const std::size_t n = r.degree();
  FpMatrix frob(p, n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<i64> base(n, 0), acc(n, 0);
    base[k] = 1;
    acc[0] = 1;
    for (i64 e = p; e; e >>= 1) {
      if (e & 1) acc = r.mul_mod(acc, base, p);
      if (e > 1) base = r.mul_mod(base, base, p);
    }
    for (std::size_t j = 0; j < n; ++j) frob(k, j) = acc[j];
  }
  FpMatrix f = frob;
  for (i64 pt = p; pt < static_cast<i64>(n); pt *= p) f = f * frob;
  FpMatrix ker = kernel(f.transpose());
  IntMatrix rows(0, n);
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    auto v = from_mod(ker.row(i));
    rows.append_row(v);
  }
  rows.append_row(unit_vec(n, 0));
  rows(rows.rows() - 1, 0) = p;
  return {hnf_modular(rows, Int(p))};
}

long valuation(const RingOfIntegers& r, const FractionalIdeal& a, const IntegralIdeal& prime) {
  FractionalIdeal P = as_fractional(prime);
  FractionalIdeal pinv = ideal_inverse(r, P);
  auto vint = [&](FractionalIdeal b) {
    long v = 0;
    while (ideal_contains(r, P, b)) {
      b = ideal_product(r, b, pinv);
      ensure(b.den == 1, "valuation: quotient by a contained prime is not integral");
      ++v;
    }
    return v;
  };
  long v = vint(as_fractional(a.num));
  if (a.den != 1) {
    IntegralIdeal d = ideal_from_generators(r, {r.scalar(Rat(a.den))});
    v -= vint(as_fractional(d));
  }
  return v;
}

long valuation(const RingOfIntegers& r, const FieldElement& x, const IntegralIdeal& prime) {
  return valuation(r, principal_ideal(r, x), prime);
}

// ------------------------------------------------------------ trace forms

RatMatrix trace_form_gram(const RingOfIntegers& r, const FractionalIdeal& j, const FieldElement& lambda,
                          const RingAutomorphism& conj) {
  require(conj.apply(lambda) == lambda, "trace form: lambda must be fixed by conjugation");
  const std::size_t n = r.degree();
  RatMatrix b = rational_basis(j);
  RatMatrix z(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    FieldElement x(b.row_vector(a));
    FieldElement w = r.mul(lambda, conj.apply(x));
    for (std::size_t k = 0; k < n; ++k) z(a, k) = w.c[k];
  }
  RatMatrix g = z * to_rat(r.trace_matrix()) * b.transpose();
  Rat nj = ideal_norm(r, j);
  Rat expect = r.norm(lambda) * nj * nj * Rat(abs_int(r.discriminant()));
  ensure(det_exact(g) == expect, "trace form: determinant differs from N(lambda) N(J)^2 |d_L|");
  return g;
}

bool certify_totally_positive(const RingOfIntegers& r, const FieldElement& lambda) {
  if (r.kind() == FieldKind::Other)
    throw UnsupportedError("certify_totally_positive: field must be totally real or CM");
  RingAutomorphism conj = r.conjugation();
  require(conj.apply(lambda) == lambda, "certify_totally_positive: lambda must be fixed by conjugation");
  if (lambda.is_zero()) return false;
  return is_positive_definite(trace_form_gram(r, as_fractional(unit_ideal(r)), lambda, conj));
}

FractionalIdeal dual_ideal(const RingOfIntegers& r, const FractionalIdeal& j, const FieldElement& lambda,
                           const RingAutomorphism& conj) {
  require(!lambda.is_zero(), "dual ideal: lambda must be nonzero");
  require(conj.apply(lambda) == lambda, "dual ideal: lambda must be fixed by conjugation");
  FractionalIdeal prod = ideal_product(r, principal_ideal(r, lambda), ideal_conjugate(r, j, conj));
  prod = ideal_product(r, prod, as_fractional(different_ideal(r)));
  FractionalIdeal dual = ideal_inverse(r, prod);
  // lattice-theoretic dual basis: rows of G^{-1} B
  RatMatrix g = trace_form_gram(r, j, lambda, conj);
  RatMatrix y = inverse_exact(g) * rational_basis(j);
  ensure(fractional_from_basis(r, y) == dual, "dual ideal: formula disagrees with the Gram inverse");
  return dual;
}

// ------------------------------------------------------------ residues

namespace {

// Inverse of a square matrix over F_p.
FpMatrix inverse_mod_p(const FpMatrix& a) {
  const std::size_t n = a.rows();
  const i64 p = a.p();
  FpMatrix aug(p, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<std::size_t> piv;
  FpMatrix red = rref(aug, &piv);
  ensure(red.rows() == n && piv.size() == n && piv.back() == n - 1, "residue: singular power matrix");
  FpMatrix inv(p, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = red(i, n + j);
  return inv;
}

}  // namespace

ResiduePresentation::ResiduePresentation(const RingOfIntegers& r, const IntegralIdeal& ideal, i64 p,
                                         const FieldElement& beta)
    : p_(p), ideal_(ideal), beta_(beta) {
  require(is_prime(p), "residue presentation: p must be prime");
  const std::size_t n = r.degree();
  require(ideal.hnf.rows() == n, "residue presentation: ideal size mismatch");
  auto pv = unit_vec(n, 0);
  pv[0] = p;
  require(in_hnf_lattice(ideal.hnf, pv), "residue presentation: p must lie in the ideal");
  FpMatrix im(p, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = to_mod(ideal.hnf.row_vector(i), p);
    for (std::size_t j = 0; j < n; ++j) im(i, j) = row[j];
  }
  ibar_ = rref(im, &pivots_);
  for (std::size_t c = 0, k = 0; c < n; ++c) {
    if (k < pivots_.size() && pivots_[k] == c)
      ++k;
    else
      free_.push_back(c);
  }
  const std::size_t d = free_.size();
  require(d >= 1, "residue presentation: ideal is the whole ring");
  auto bi = to_mod(beta.to_int(), p);
  std::vector<i64> cur(n, 0);
  cur[0] = 1;
  FpMatrix span(p, 0, d);
  std::vector<std::vector<i64>> reduced;
  for (;;) {
    auto red = reduce(from_mod(cur));
    FpMatrix trial = span;
    trial.append_row(red);
    if (rank(trial) == span.rows()) {
      // dependent: solve red = sum c_i reduced_i
      const std::size_t k = span.rows();
      FpMatrix sys(p, d, k + 1);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < d; ++j) sys(j, i) = reduced[i][j];
      for (std::size_t j = 0; j < d; ++j) sys(j, k) = red[j];
      FpMatrix rs = rref(sys);
      std::vector<i64> mu(k + 1, 0);
      mu[k] = 1;
      for (std::size_t i = 0; i < k; ++i) mu[i] = mod_norm(-rs(i, k), p);
      if (k < d) {
        throw PreconditionError("residue presentation: beta generates a subalgebra of dimension " +
                                std::to_string(k) + " out of " + std::to_string(d));
      }
      mu_ = FpPoly(p, mu);
      break;
    }
    span = std::move(trial);
    reduced.push_back(red);
    powers_.push_back(from_mod(cur));
    cur = r.mul_mod(cur, bi, p);
  }
  FpMatrix pm(p, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) pm(i, j) = reduced[i][j];
  solve_rref_ = inverse_mod_p(pm);
}

std::vector<i64> ResiduePresentation::reduce(const std::vector<Int>& x) const {
  auto v = to_mod(x, p_);
  for (std::size_t i = 0; i < pivots_.size(); ++i) {
    i64 c = v[pivots_[i]];
    if (c == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod_norm(v[j] - mod_mul(c, ibar_(i, j), p_), p_);
  }
  std::vector<i64> out(free_.size());
  for (std::size_t k = 0; k < free_.size(); ++k) out[k] = v[free_[k]];
  return out;
}

FpPoly ResiduePresentation::to_class(const FieldElement& x) const {
  auto red = reduce(x.to_int());
  const std::size_t d = free_.size();
  std::vector<i64> c(d, 0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) c[j] = (c[j] + red[i] * solve_rref_(i, j)) % p_;
  return FpPoly(p_, c);
}

FieldElement ResiduePresentation::from_class(const FpPoly& c) const {
  require(c.p() == p_, "residue presentation: characteristic mismatch");
  FpPoly cc = c % mu_;
  const std::size_t n = beta_.size();
  std::vector<Int> out(n);
  for (std::size_t k = 0; k < cc.coeffs().size(); ++k) {
    Int ck = static_cast<long>(cc.coeffs()[k]);
    for (std::size_t j = 0; j < n; ++j) out[j] += ck * powers_[k][j];
  }
  for (auto& x : out) {
    x %= p_;
    if (x < 0) x += p_;
  }
  return from_int(out);
}

FpPoly conjugate_image_polynomial(const RingOfIntegers& r, const FpPoly& g, const ResiduePresentation& pres,
                                  const RingAutomorphism& conj) {
  require(g.p() == pres.p(), "conjugate image: characteristic mismatch");
  FractionalIdeal I = as_fractional(pres.ideal());
  require(ideal_conjugate(r, I, conj) == I, "conjugate image: ideal is not stable under conjugation");
  FieldElement y = r.eval(lift_fppoly(g), pres.beta());
  FpPoly g0 = pres.to_class(from_int(conj.apply_int(y.to_int())));
  return poly_gcd(g0, pres.mu());
}

FpPoly residue_class_of_unit(const RingOfIntegers& r, const FieldElement& lambda, const ResiduePresentation& pres) {
  const IntegralIdeal& P = pres.ideal();
  require(!lambda.is_zero(), "residue class: lambda must be nonzero");
  require(valuation(r, lambda, P) == 0, "residue class: lambda is not a unit at the prime");
  FractionalIdeal b = ideal_intersection(r, as_fractional(unit_ideal(r)), principal_ideal(r, r.invert(lambda)));
  IntegralIdeal bi = as_integral(b);
  std::vector<std::vector<Int>> outside;
  for (std::size_t i = 0; i < bi.hnf.rows() && outside.size() < 2; ++i) {
    auto row = bi.hnf.row_vector(i);
    if (!in_hnf_lattice(P.hnf, row)) outside.push_back(row);
  }
  ensure(!outside.empty(), "residue class: O cap lambda^{-1} O lies inside the prime");
  if (outside.size() < 2) outside.push_back(r.mul_int(outside[0], outside[0]));
  std::vector<FpPoly> classes;
  for (const auto& c : outside) {
    FieldElement cf = from_int(c);
    FpPoly num = pres.to_class(r.mul(cf, lambda));
    FpPoly den = pres.to_class(cf);
    classes.push_back((num * inverse_mod(den, pres.mu())) % pres.mu());
  }
  ensure(classes[0] == classes[1], "residue class: value depends on the chosen fraction");
  return classes[0];
}

FieldElement find_residue_generator(const RingOfIntegers& r, const IntegralIdeal& prime, i64 p) {
  std::vector<FieldElement> cands;
  for (std::size_t g = 0; g < r.generator_count(); ++g) cands.push_back(r.generator(g));
  if (r.is_compositum())
    for (long c = 1; c < 4; ++c) cands.push_back(r.add(r.generator(0), r.scale(r.generator(1), Rat(c))));
  for (std::size_t k = 1; k < r.degree(); ++k) cands.push_back(r.basis_element(k));
  for (const auto& b : cands) {
    try {
      ResiduePresentation pres(r, prime, p, b);
      return b;
    } catch (const PreconditionError&) {
    }
  }
  throw UnsupportedError("find_residue_generator: no simple generator of the residue ring found");
}

}  // namespace lf
