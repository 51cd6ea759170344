#include "latticeforge/skewpoly.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "latticeforge/exactmath.hpp"

namespace lf {

Fq::Fq(i64 p, const FpPoly& modulus, int sigma_frobenius_power, int conj_frobenius_power)
    : p_(p), f_(modulus.monic()) {
  require(is_prime(p), "Fq: characteristic must be prime");
  require(modulus.p() == p, "Fq: modulus over the wrong prime");
  require(f_.degree() >= 1, "Fq: modulus must have positive degree");
  require(is_irreducible(f_), "Fq: modulus " + f_.to_string() + " is not irreducible");
  d_ = f_.degree();
  q_ = 1;
  for (int i = 0; i < d_; ++i) {
    require(q_ <= UINT64_MAX / static_cast<std::uint64_t>(p), "Fq: field too large");
    q_ *= static_cast<std::uint64_t>(p);
  }
  s_ = ((sigma_frobenius_power % d_) + d_) % d_;
  c_ = ((conj_frobenius_power % d_) + d_) % d_;
  require((2 * c_) % d_ == 0, "Fq: conjugation must have order at most 2");

  FpPoly t = d_ == 1 ? FpPoly(p, {0}) : FpPoly(p, {0, 1});
  t = t % f_;
  frob_t_.push_back(t);
  for (int k = 1; k < d_; ++k) frob_t_.push_back(powmod(frob_t_.back(), static_cast<std::uint64_t>(p), f_));
  if (d_ > 1) ensure(powmod(frob_t_.back(), static_cast<std::uint64_t>(p), f_) == t, "Fq: Frobenius order");
}

int Fq::sigma_order() const { return d_ / std::gcd(d_, s_ == 0 ? d_ : s_); }

Fq::Elem Fq::gen() const { return frob_t_[0]; }

Fq::Elem Fq::from_coeffs(const std::vector<i64>& c) const { return FpPoly(p_, c) % f_; }

Fq::Elem Fq::element(std::uint64_t idx) const {
  std::vector<i64> c(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    c[static_cast<std::size_t>(i)] = static_cast<i64>(idx % static_cast<std::uint64_t>(p_));
    idx /= static_cast<std::uint64_t>(p_);
  }
  return FpPoly(p_, c);
}

Fq::Elem Fq::inv(const Elem& a) const {
  require(!a.is_zero(), "Fq: inverse of zero");
  return inverse_mod(a, f_);
}

Fq::Elem Fq::frobenius(const Elem& a, long k) const {
  long kk = ((k % d_) + d_) % d_;
  if (kk == 0 || a.degree() <= 0) return a;
  const FpPoly& x = frob_t_[static_cast<std::size_t>(kk)];
  FpPoly r = zero();
  for (int i = a.degree(); i >= 0; --i) r = mul(r, x) + scalar(a.coeff(static_cast<std::size_t>(i)));
  return r;
}

std::string Fq::to_string(const Elem& a) const {
  if (d_ == 1) return std::to_string(a.coeff(0));
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = a.degree(); i >= 0; --i) {
    i64 v = a.coeff(static_cast<std::size_t>(i));
    if (v == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << v;
    } else {
      if (v != 1) os << v << "*";
      os << "w";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// ----------------------------------------------------------------- SkewPoly

SkewPoly skew_trim(const Fq& fq, std::vector<FpPoly> c) {
  for (auto& a : c) a = a % fq.modulus();
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  return SkewPoly{std::move(c)};
}

SkewPoly skew_constant(const Fq& fq, const FpPoly& a) { return skew_trim(fq, {a}); }

SkewPoly skew_x_power(const Fq& fq, std::size_t n, const FpPoly& a) {
  std::vector<FpPoly> c(n + 1, fq.zero());
  c[n] = a;
  return skew_trim(fq, std::move(c));
}

SkewPoly skew_central_binomial(const Fq& fq, std::size_t n, const FpPoly& gamma) {
  std::vector<FpPoly> c(n + 1, fq.zero());
  c[n] = fq.one();
  c[0] = c[0] - gamma;
  return skew_trim(fq, std::move(c));
}

bool skew_is_monic(const Fq& fq, const SkewPoly& f) { return !f.is_zero() && f.c.back() == fq.one(); }

SkewPoly skew_add(const Fq& fq, const SkewPoly& f, const SkewPoly& g) {
  std::vector<FpPoly> c(std::max(f.c.size(), g.c.size()), fq.zero());
  for (std::size_t i = 0; i < f.c.size(); ++i) c[i] = c[i] + f.c[i];
  for (std::size_t i = 0; i < g.c.size(); ++i) c[i] = c[i] + g.c[i];
  return skew_trim(fq, std::move(c));
}

SkewPoly skew_sub(const Fq& fq, const SkewPoly& f, const SkewPoly& g) {
  std::vector<FpPoly> c(std::max(f.c.size(), g.c.size()), fq.zero());
  for (std::size_t i = 0; i < f.c.size(); ++i) c[i] = c[i] + f.c[i];
  for (std::size_t i = 0; i < g.c.size(); ++i) c[i] = c[i] - g.c[i];
  return skew_trim(fq, std::move(c));
}

// (sum X^n a_n)(sum X^m b_m) = sum X^{n+m} a_n^{sigma^m} b_m
SkewPoly skew_mul(const Fq& fq, const SkewPoly& f, const SkewPoly& g) {
  if (f.is_zero() || g.is_zero()) return {};
  std::vector<FpPoly> c(f.c.size() + g.c.size() - 1, fq.zero());
  for (std::size_t m = 0; m < g.c.size(); ++m) {
    if (g.c[m].is_zero()) continue;
    for (std::size_t n = 0; n < f.c.size(); ++n) {
      if (f.c[n].is_zero()) continue;
      c[n + m] = c[n + m] + fq.mul(fq.twist(f.c[n], static_cast<long>(m)), g.c[m]);
    }
  }
  SkewPoly r = skew_trim(fq, std::move(c));
  ensure(r.degree() == f.degree() + g.degree(), "skew_mul: degree law violated");
  return r;
}

SkewPoly skew_scale_right(const Fq& fq, const SkewPoly& f, const FpPoly& a) {
  std::vector<FpPoly> c;
  c.reserve(f.c.size());
  for (const auto& x : f.c) c.push_back(fq.mul(x, a));
  return skew_trim(fq, std::move(c));
}

SkewPoly skew_monic(const Fq& fq, const SkewPoly& f) {
  require(!f.is_zero(), "skew_monic: zero polynomial");
  return skew_scale_right(fq, f, fq.inv(f.c.back()));
}

SkewDivision skew_divmod(const Fq& fq, const SkewPoly& f, const SkewPoly& g, Side side) {
  require(!g.is_zero(), "skew_divmod: division by zero");
  const int m = g.degree();
  const FpPoly bm_inv = fq.inv(g.c.back());
  SkewPoly r = f;
  std::vector<FpPoly> q(f.degree() >= m ? static_cast<std::size_t>(f.degree() - m + 1) : 0, fq.zero());
  while (!r.is_zero() && r.degree() >= m) {
    const int n = r.degree();
    const FpPoly& an = r.c.back();
    FpPoly coef;
    SkewPoly term;
    if (side == Side::Left) {
      coef = fq.mul(fq.twist(bm_inv, n - m), an);
      term = skew_mul(fq, g, skew_x_power(fq, static_cast<std::size_t>(n - m), coef));
    } else {
      coef = fq.twist(fq.mul(an, bm_inv), -m);
      term = skew_mul(fq, skew_x_power(fq, static_cast<std::size_t>(n - m), coef), g);
    }
    q[static_cast<std::size_t>(n - m)] = q[static_cast<std::size_t>(n - m)] + coef;
    r = skew_sub(fq, r, term);
    ensure(r.is_zero() || r.degree() < n, "skew_divmod: leading term not eliminated");
  }
  SkewDivision out{skew_trim(fq, std::move(q)), r};
  SkewPoly back = side == Side::Left ? skew_mul(fq, g, out.q) : skew_mul(fq, out.q, g);
  ensure(skew_add(fq, back, out.r) == f, "skew_divmod: reconstruction failed");
  return out;
}

bool is_central(const Fq& fq, const SkewPoly& f, int n) {
  require(n >= 1 && n % fq.sigma_order() == 0, "is_central: order of sigma must divide n");
  const SkewPoly x = skew_x_power(fq, 1, fq.one());
  if (skew_mul(fq, f, x) != skew_mul(fq, x, f)) return false;
  const SkewPoly t = skew_constant(fq, fq.gen());
  return skew_mul(fq, f, t) == skew_mul(fq, t, f);
}

std::vector<SkewPoly> central_divisors(const Fq& fq, const FpPoly& gamma_bar, int n, int degree,
                                       std::uint64_t budget) {
  require(degree >= 0 && degree <= n, "central_divisors: degree out of range");
  const SkewPoly target = skew_central_binomial(fq, static_cast<std::size_t>(n), gamma_bar);
  require(is_central(fq, target, n), "central_divisors: X^n - gamma is not central");
  if (degree == 0) return {skew_constant(fq, fq.one())};
  if (degree == n) return {target};

  std::uint64_t count = 1;
  for (int i = 0; i < degree; ++i) {
    if (count > budget / fq.size()) {
      throw UnsupportedError("central_divisors: q^" + std::to_string(degree) +
                             " candidates exceed the search budget; supply an explicit divisor candidate");
    }
    count *= fq.size();
  }

  std::vector<std::pair<std::uint64_t, SkewPoly>> found;
  std::mutex mu;
  auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::pair<std::uint64_t, SkewPoly>> local;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::vector<FpPoly> c;
      std::uint64_t rest = idx;
      for (int i = 0; i < degree; ++i) {
        c.push_back(fq.element(rest % fq.size()));
        rest /= fq.size();
      }
      c.push_back(fq.one());
      SkewPoly g = skew_trim(fq, std::move(c));
      if (!skew_divmod(fq, target, g, Side::Right).r.is_zero()) continue;
      ensure(skew_divmod(fq, target, g, Side::Left).r.is_zero(),
             "central_divisors: right divisor of a central polynomial is not a left divisor");
      local.emplace_back(idx, std::move(g));
    }
    std::lock_guard<std::mutex> lock(mu);
    for (auto& e : local) found.push_back(std::move(e));
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(thread_budget(), static_cast<unsigned>(count / 4096 + 1)));
  std::vector<std::thread> pool;
  const std::uint64_t block = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::uint64_t lo = t * block, hi = std::min(count, lo + block);
    if (lo < hi) pool.emplace_back(scan, lo, hi);
  }
  for (auto& th : pool) th.join();
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<SkewPoly> out;
  for (auto& e : found) out.push_back(std::move(e.second));
  return out;
}

namespace {

void check_divisor(const Fq& fq, const SkewPoly& g, int n, const FpPoly& gamma_bar, const char* who) {
  require(skew_is_monic(fq, g), std::string(who) + ": g must be monic");
  const SkewPoly target = skew_central_binomial(fq, static_cast<std::size_t>(n), gamma_bar);
  require(skew_divmod(fq, target, g, Side::Right).r.is_zero(), std::string(who) + ": g does not divide X^n - gamma");
}

// sum_k X^k [l a*_{d-k}]^{sigma^k} [l a_0^{*-1}]^{sigma^d}, monic.
SkewPoly transpose_divisor(const Fq& fq, const SkewPoly& g, const FpPoly& lam) {
  const int d = g.degree();
  require(!g.c[0].is_zero(), "g_tau: constant coefficient is zero");
  const FpPoly tail = fq.twist(fq.mul(lam, fq.inv(fq.conj(g.c[0]))), d);
  std::vector<FpPoly> c;
  for (int k = 0; k <= d; ++k) {
    FpPoly a = fq.mul(lam, fq.conj(g.c[static_cast<std::size_t>(d - k)]));
    c.push_back(fq.mul(fq.twist(a, k), tail));
  }
  return skew_monic(fq, skew_trim(fq, std::move(c)));
}

}  // namespace

SkewPoly g_tau(const Fq& fq, const SkewPoly& g, int n, const FpPoly& gamma_bar) {
  check_divisor(fq, g, n, gamma_bar, "g_tau");
  SkewPoly r = transpose_divisor(fq, g, fq.one());
  ensure(r.c.back() == fq.one(), "g_tau: result not monic before normalization");
  ensure(skew_divmod(fq, skew_central_binomial(fq, static_cast<std::size_t>(n), gamma_bar), r, Side::Right).r.is_zero(),
         "g_tau: result does not divide X^n - gamma");
  return r;
}

SkewPoly g_tau_lambda(const Fq& fq, const SkewPoly& g, const FpPoly& lambda_class, int n,
                      const FpPoly& gamma_bar) {
  check_divisor(fq, g, n, gamma_bar, "g_tau_lambda");
  require(!(lambda_class % fq.modulus()).is_zero(), "g_tau_lambda: lambda class is not invertible");
  SkewPoly r = transpose_divisor(fq, g, lambda_class % fq.modulus());
  ensure(skew_divmod(fq, skew_central_binomial(fq, static_cast<std::size_t>(n), gamma_bar), r, Side::Right).r.is_zero(),
         "g_tau_lambda: result does not divide X^n - gamma");
  return r;
}

SkewDual dual_divisor(const Fq& fq, const SkewPoly& g, DualMode mode, int n, const FpPoly& gamma_bar,
                      const FpPoly* lambda_class) {
  SkewDual out;
  if (mode == DualMode::Ramified) {
    require(fq.sigma_is_identity(), "dual_divisor: ramified mode requires the induced sigma to be trivial");
    out.g_tau = g_tau(fq, g, n, gamma_bar);
  } else {
    require(lambda_class != nullptr, "dual_divisor: inert mode requires the class of lambda");
    out.g_tau = g_tau_lambda(fq, g, *lambda_class, n, gamma_bar);
  }
  const SkewPoly target = skew_central_binomial(fq, static_cast<std::size_t>(n), gamma_bar);
  SkewDivision qr = skew_divmod(fq, target, out.g_tau, Side::Right);
  ensure(qr.r.is_zero(), "dual_divisor: g_tau does not divide X^n - gamma");
  out.h = qr.q;
  ensure(skew_divmod(fq, target, out.g_tau, Side::Left).q == out.h, "dual_divisor: left and right quotients differ");
  ensure(g.degree() + out.h.degree() == n, "dual_divisor: degree law");
  // The ideal of g lies in the ideal of h iff h right-divides g.
  out.self_orthogonal = skew_divmod(fq, g, out.h, Side::Right).r.is_zero();
  out.self_dual = out.h == g;
  return out;
}

std::string to_string(const Fq& fq, const SkewPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = f.degree(); k >= 0; --k) {
    const FpPoly& a = f.c[static_cast<std::size_t>(k)];
    if (a.is_zero()) continue;
    std::string s = fq.to_string(a);
    bool compound = s.find(' ') != std::string::npos;
    if (!first) os << " + ";
    first = false;
    if (k == 0) {
      os << (compound ? "(" + s + ")" : s);
      continue;
    }
    os << "X";
    if (k > 1) os << "^" << k;
    if (a != fq.one()) os << "*" << (compound ? "(" + s + ")" : s);
  }
  return os.str();
}

}  // namespace lf
