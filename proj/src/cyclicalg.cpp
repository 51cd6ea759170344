#include "latticeforge/cyclicalg.hpp"

#include <sstream>

namespace lf {

CyclicAlgebraCtx::CyclicAlgebraCtx(RingPtr ring, RingAutomorphism sigma, FieldElement gamma, RingAutomorphism conj,
                                   int n)
    : ring_(std::move(ring)), sigma_(std::move(sigma)), conj_(std::move(conj)), gamma_(std::move(gamma)), n_(n) {
  require(ring_ != nullptr, "cyclic algebra: missing ring");
  const RingOfIntegers& r = *ring_;
  require(n_ >= 1, "cyclic algebra: degree must be positive");
  require(gamma_.size() == r.degree(), "cyclic algebra: gamma has the wrong size");
  require(sigma_.order() == n_, "cyclic algebra: sigma must have order exactly n");
  require(conj_.compose(conj_).is_identity(), "cyclic algebra: conjugation must be an involution");
  require(conj_.compose(sigma_) == sigma_.compose(conj_), "cyclic algebra: sigma and conjugation must commute");
  require(gamma_.is_integral(), "cyclic algebra: gamma must be integral");
  require(sigma_.apply(gamma_) == gamma_, "cyclic algebra: gamma must be fixed by sigma");
  require(r.mul(gamma_, conj_.apply(gamma_)) == r.one(), "cyclic algebra: gamma gamma* must equal 1");
  gamma_inv_ = r.invert(gamma_);
  powers_.push_back(r.identity_automorphism());
  for (int k = 1; k < n_; ++k) powers_.push_back(sigma_.compose(powers_.back()));
}

const RingAutomorphism& CyclicAlgebraCtx::sigma_power(long k) const {
  long m = ((k % n_) + n_) % n_;
  return powers_[static_cast<std::size_t>(m)];
}

AlgebraElement algebra_zero(const CyclicAlgebraCtx& ctx) {
  return AlgebraElement{std::vector<FieldElement>(static_cast<std::size_t>(ctx.n()), ctx.ring().zero())};
}

AlgebraElement algebra_one(const CyclicAlgebraCtx& ctx) { return algebra_monomial(ctx, 0, ctx.ring().one()); }

AlgebraElement algebra_monomial(const CyclicAlgebraCtx& ctx, int j, const FieldElement& a) {
  require(j >= 0 && j < ctx.n(), "algebra_monomial: exponent out of range");
  AlgebraElement x = algebra_zero(ctx);
  x.x[static_cast<std::size_t>(j)] = a;
  return x;
}

AlgebraElement algebra_basis(const CyclicAlgebraCtx& ctx, std::size_t idx) {
  const std::size_t nl = ctx.ring().degree();
  require(idx < ctx.rank(), "algebra_basis: index out of range");
  return algebra_monomial(ctx, static_cast<int>(idx / nl), ctx.ring().basis_element(idx % nl));
}

AlgebraElement algebra_add(const CyclicAlgebraCtx& ctx, const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement s = algebra_zero(ctx);
  for (int j = 0; j < ctx.n(); ++j) s.x[static_cast<std::size_t>(j)] = ctx.ring().add(a.x[j], b.x[j]);
  return s;
}

// (e^i x)(e^j y) = e^{i+j} sigma^{cj}(x) y, with e^n = gamma.
AlgebraElement algebra_mul(const CyclicAlgebraCtx& ctx, const AlgebraElement& a, const AlgebraElement& b) {
  const RingOfIntegers& r = ctx.ring();
  const int n = ctx.n();
  AlgebraElement out = algebra_zero(ctx);
  for (int j = 0; j < n; ++j) {
    const FieldElement& y = b.x[static_cast<std::size_t>(j)];
    if (y.is_zero()) continue;
    const RingAutomorphism& s = ctx.sigma_power(static_cast<long>(kCommutationExponent) * j);
    for (int i = 0; i < n; ++i) {
      const FieldElement& x = a.x[static_cast<std::size_t>(i)];
      if (x.is_zero()) continue;
      FieldElement t = r.mul(s.apply(x), y);
      int k = i + j;
      if (k >= n) {
        k -= n;
        t = r.mul(ctx.gamma(), t);
      }
      out.x[static_cast<std::size_t>(k)] = r.add(out.x[static_cast<std::size_t>(k)], t);
    }
  }
  return out;
}

// tau(sum e^j x_j) = sum x_j^* e^{-j}, with e^{-j} = e^{n-j} gamma^{-1}.
AlgebraElement tau(const CyclicAlgebraCtx& ctx, const AlgebraElement& x) {
  const RingOfIntegers& r = ctx.ring();
  const int n = ctx.n();
  AlgebraElement out = algebra_zero(ctx);
  for (int j = 0; j < n; ++j) {
    const FieldElement& xj = x.x[static_cast<std::size_t>(j)];
    if (xj.is_zero()) continue;
    FieldElement c = ctx.conj().apply(xj);
    if (j == 0) {
      out.x[0] = r.add(out.x[0], c);
      continue;
    }
    const int m = n - j;
    FieldElement t = r.mul(ctx.sigma_power(static_cast<long>(kCommutationExponent) * m).apply(c), ctx.gamma_inverse());
    out.x[static_cast<std::size_t>(m)] = r.add(out.x[static_cast<std::size_t>(m)], t);
  }
  return out;
}

FieldElement reduced_trace(const CyclicAlgebraCtx& ctx, const AlgebraElement& x) {
  return relative_trace(ctx.ring(), x.x[0], ctx.sigma(), ctx.n());
}

bool in_order(const AlgebraElement& x) {
  for (const auto& c : x.x)
    if (!c.is_integral()) return false;
  return true;
}

std::vector<Rat> algebra_coords(const CyclicAlgebraCtx& ctx, const AlgebraElement& x) {
  std::vector<Rat> v;
  v.reserve(ctx.rank());
  for (const auto& c : x.x) v.insert(v.end(), c.c.begin(), c.c.end());
  return v;
}

AlgebraElement algebra_from_coords(const CyclicAlgebraCtx& ctx, const std::vector<Rat>& v) {
  require(v.size() == ctx.rank(), "algebra_from_coords: wrong length");
  const std::size_t nl = ctx.ring().degree();
  AlgebraElement x;
  for (int j = 0; j < ctx.n(); ++j)
    x.x.emplace_back(std::vector<Rat>(v.begin() + static_cast<long>(j * nl), v.begin() + static_cast<long>((j + 1) * nl)));
  return x;
}

AlgebraElement algebra_from_int(const CyclicAlgebraCtx& ctx, const std::vector<Int>& v) {
  std::vector<Rat> r(v.begin(), v.end());
  return algebra_from_coords(ctx, r);
}

RatMatrix regular_representation(const CyclicAlgebraCtx& ctx, const AlgebraElement& x) {
  const std::size_t N = ctx.rank();
  RatMatrix m(N, N);
  for (std::size_t b = 0; b < N; ++b) {
    auto v = algebra_coords(ctx, algebra_mul(ctx, algebra_basis(ctx, b), x));
    for (std::size_t k = 0; k < N; ++k) m(b, k) = v[k];
  }
  return m;
}

Rat q_B_lambda(const CyclicAlgebraCtx& ctx, const AlgebraElement& x, const AlgebraElement& y, const FieldElement& lambda) {
  const RingOfIntegers& r = ctx.ring();
  Rat s = 0;
  for (int j = 0; j < ctx.n(); ++j) {
    const auto& xj = x.x[static_cast<std::size_t>(j)];
    const auto& yj = y.x[static_cast<std::size_t>(j)];
    if (xj.is_zero() || yj.is_zero()) continue;
    s += r.trace(r.mul(lambda, r.mul(ctx.conj().apply(xj), yj)));
  }
  return s;
}

Rat q_B_lambda_via_trd(const CyclicAlgebraCtx& ctx, const AlgebraElement& x, const AlgebraElement& y,
                       const FieldElement& lambda) {
  AlgebraElement l = algebra_monomial(ctx, 0, lambda);
  FieldElement t = reduced_trace(ctx, algebra_mul(ctx, algebra_mul(ctx, l, tau(ctx, x)), y));
  // t lies in k, and Tr_{k/Q} = Tr_{L/Q} / n there.
  return ctx.ring().trace(t) / Rat(ctx.n());
}

RatMatrix order_gram(const CyclicAlgebraCtx& ctx, const FieldElement& lambda) {
  const RingOfIntegers& r = ctx.ring();
  RatMatrix block = trace_form_gram(r, as_fractional(unit_ideal(r)), lambda, ctx.conj());
  const std::size_t nl = r.degree(), N = ctx.rank();
  RatMatrix g(N, N);
  for (int j = 0; j < ctx.n(); ++j)
    for (std::size_t a = 0; a < nl; ++a)
      for (std::size_t b = 0; b < nl; ++b) g(j * nl + a, j * nl + b) = block(a, b);
  Rat base = r.norm(lambda) * Rat(abs(r.discriminant()));
  Rat expect = 1;
  for (int j = 0; j < ctx.n(); ++j) expect *= base;
  ensure(det_exact(g) == expect, "order_gram: determinant differs from (N(lambda)|d_L|)^n");
  return g;
}

namespace {

void check_stable_prime(const CyclicAlgebraCtx& ctx, const IntegralIdeal& prime) {
  const RingOfIntegers& r = ctx.ring();
  FractionalIdeal P = as_fractional(prime);
  require(ideal_conjugate(r, P, ctx.sigma()) == P, "two-sided ideal: the prime is not stable under sigma");
  require(ideal_conjugate(r, P, ctx.conj()) == P, "two-sided ideal: the prime is not stable under conjugation");
}

}  // namespace

IntMatrix two_sided_P(const CyclicAlgebraCtx& ctx, const IntegralIdeal& prime) {
  check_stable_prime(ctx, prime);
  const std::size_t nl = ctx.ring().degree(), N = ctx.rank();
  IntMatrix b(N, N);
  for (int j = 0; j < ctx.n(); ++j)
    for (std::size_t a = 0; a < nl; ++a)
      for (std::size_t c = 0; c < nl; ++c) b(j * nl + a, j * nl + c) = prime.hnf(a, c);
  // membership of e*x, x*e and tau(x) for the generators x of P
  for (std::size_t row = 0; row < nl; ++row) {
    AlgebraElement x = algebra_monomial(ctx, 0, from_int(prime.hnf.row_vector(row)));
    std::vector<AlgebraElement> images{tau(ctx, x)};
    if (ctx.n() > 1) {
      AlgebraElement e = algebra_monomial(ctx, 1, ctx.ring().one());
      images.push_back(algebra_mul(ctx, e, x));
      images.push_back(algebra_mul(ctx, x, e));
    }
    for (const auto& y : images) {
      ensure(in_order(y), "two-sided ideal: image left the order");
      auto v = algebra_coords(ctx, y);
      std::vector<Int> iv;
      for (const auto& c : v) iv.push_back(c.get_num());
      ensure(in_hnf_lattice(b, iv), "two-sided ideal: P is not stable under e or tau");
    }
  }
  return b;
}

namespace {

SkewPoly reduce_central(const CyclicResidue& res, const SkewPoly& f, int n) {
  return skew_divmod(res.fq, f, skew_central_binomial(res.fq, static_cast<std::size_t>(n), res.gamma_bar), Side::Right).r;
}

int frobenius_exponent(const Fq& fq, const FpPoly& image) {
  for (int s = 0; s < fq.degree(); ++s)
    if (fq.frobenius(fq.gen(), s) == image) return s;
  throw InternalError("residue: induced automorphism is not a power of Frobenius");
}

}  // namespace

CyclicResidue residue_skew_iso(const CyclicAlgebraCtx& ctx, const IntegralIdeal& prime, i64 p, const FieldElement* beta) {
  const RingOfIntegers& r = ctx.ring();
  check_stable_prime(ctx, prime);
  FieldElement b = beta ? *beta : find_residue_generator(r, prime, p);
  ResiduePresentation pres(r, prime, p, b);
  require(is_irreducible(pres.mu()), "residue: the ideal is not prime (residue ring is not a field)");
  Fq base(p, pres.mu(), 0, 0);
  int s = 0, c = 0;
  if (pres.mu().degree() > 1) {
    s = frobenius_exponent(base, pres.to_class(ctx.sigma().apply(b)));
    c = frobenius_exponent(base, pres.to_class(ctx.conj().apply(b)));
  }
  CyclicResidue res{prime, pres, Fq(p, pres.mu(), s, c), pres.to_class(ctx.gamma())};
  const Fq& fq = res.fq;
  const int n = ctx.n();
  require(n % fq.sigma_order() == 0, "residue: order of the induced sigma does not divide n");
  require(!res.gamma_bar.is_zero(), "residue: gamma vanishes modulo the prime");

  // |Lambda/P| = q^n
  Int q = 1;
  for (int i = 0; i < fq.degree(); ++i) q *= Int(static_cast<long>(p));
  ensure(ideal_norm(prime) == q, "residue: N(P) differs from the residue field size");

  // Right multiplication by the ring generators e and the generators of O_L.
  std::vector<AlgebraElement> gens;
  if (n > 1) gens.push_back(algebra_monomial(ctx, 1, r.one()));
  for (std::size_t g = 0; g < r.generator_count(); ++g) gens.push_back(algebra_monomial(ctx, 0, r.generator(g)));
  for (std::size_t idx = 0; idx < ctx.rank(); ++idx) {
    AlgebraElement u = algebra_basis(ctx, idx);
    SkewPoly fu = residue_image(ctx, res, u);
    for (const auto& v : gens) {
      SkewPoly lhs = residue_image(ctx, res, algebra_mul(ctx, u, v));
      SkewPoly rhs = reduce_central(res, skew_mul(fq, fu, residue_image(ctx, res, v)), n);
      ensure(lhs == rhs, "residue: the map to the skew quotient is not multiplicative");
    }
  }
  return res;
}

SkewPoly residue_image(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const AlgebraElement& x) {
  std::vector<FpPoly> c;
  for (int j = 0; j < ctx.n(); ++j) c.push_back(res.pres.to_class(x.x[static_cast<std::size_t>(j)]));
  return skew_trim(res.fq, std::move(c));
}

AlgebraElement lift_skew(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const SkewPoly& g) {
  AlgebraElement out = algebra_zero(ctx);
  AlgebraElement epow = algebra_one(ctx);
  AlgebraElement e = ctx.n() > 1 ? algebra_monomial(ctx, 1, ctx.ring().one())
                                 : algebra_monomial(ctx, 0, ctx.gamma());
  for (std::size_t k = 0; k < g.c.size(); ++k) {
    if (!g.c[k].is_zero())
      out = algebra_add(ctx, out, algebra_mul(ctx, epow, algebra_monomial(ctx, 0, res.pres.from_class(g.c[k]))));
    epow = algebra_mul(ctx, epow, e);
  }
  return out;
}

std::vector<i64> residue_coords(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const AlgebraElement& x) {
  const std::size_t d = static_cast<std::size_t>(res.fq.degree());
  std::vector<i64> v(static_cast<std::size_t>(ctx.n()) * d, 0);
  for (int j = 0; j < ctx.n(); ++j) {
    FpPoly c = res.pres.to_class(x.x[static_cast<std::size_t>(j)]);
    for (std::size_t i = 0; i < d; ++i) v[static_cast<std::size_t>(j) * d + i] = c.coeff(i);
  }
  return v;
}

namespace {

void check_divisor(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const SkewPoly& g) {
  require(skew_is_monic(res.fq, g), "left ideal: g must be monic");
  SkewPoly target = skew_central_binomial(res.fq, static_cast<std::size_t>(ctx.n()), res.gamma_bar);
  require(skew_divmod(res.fq, target, g, Side::Right).r.is_zero(), "left ideal: g does not divide X^n - gamma");
}

}  // namespace

IntMatrix left_ideal_lattice(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const SkewPoly& g) {
  check_divisor(ctx, res, g);
  const i64 p = res.fq.p();
  AlgebraElement ge = lift_skew(ctx, res, g);
  IntMatrix rows = two_sided_P(ctx, res.prime);
  for (std::size_t idx = 0; idx < ctx.rank(); ++idx) {
    auto v = algebra_coords(ctx, algebra_mul(ctx, algebra_basis(ctx, idx), ge));
    std::vector<Int> iv;
    for (const auto& c : v) {
      ensure(c.get_den() == 1, "left ideal: product left the order");
      iv.push_back(c.get_num());
    }
    rows.append_row(iv);
  }
  IntMatrix h = hnf_modular(rows, Int(static_cast<long>(p)));
  Int expect = 1;
  for (int i = 0; i < res.fq.degree() * g.degree(); ++i) expect *= Int(static_cast<long>(p));
  ensure(det_int(h) == expect, "left ideal: index differs from p^(d deg g)");
  return h;
}

FpCode left_ideal_code(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const SkewPoly& g) {
  check_divisor(ctx, res, g);
  const i64 p = res.fq.p();
  const std::size_t dim = static_cast<std::size_t>(ctx.n() * res.fq.degree());
  AlgebraElement ge = lift_skew(ctx, res, g);
  FpMatrix m(p, 0, dim);
  for (int j = 0; j < ctx.n(); ++j)
    for (int i = 0; i < res.fq.degree(); ++i) {
      AlgebraElement b = algebra_monomial(ctx, j, res.pres.from_class(FpPoly::x_power(p, static_cast<std::size_t>(i))));
      m.append_row(residue_coords(ctx, res, algebra_mul(ctx, b, ge)));
    }
  FpCode c(p, dim, m);
  ensure(c.dimension() == dim - static_cast<std::size_t>(res.fq.degree() * g.degree()),
         "left ideal code: codimension differs from d deg g");
  return c;
}

FpSymForm residue_form(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const FieldElement& lambda) {
  const RingOfIntegers& r = ctx.ring();
  const i64 p = res.fq.p();
  const FractionalIdeal P = as_fractional(res.prime);
  const FractionalIdeal D = as_fractional(different_ideal(r));
  const FractionalIdeal pO = principal_ideal(r, r.scalar(Rat(static_cast<long>(p))));
  const FractionalIdeal lam = principal_ideal(r, lambda);
  require(ctx.conj().apply(lambda) == lambda, "residue form: lambda must be fixed by conjugation");
  // lambda P subset p D^{-1}
  require(ideal_contains(r, ideal_product(r, pO, ideal_inverse(r, D)), ideal_product(r, lam, P)),
          "residue form: lambda P is not contained in p D_L^{-1}");
  // p (lambda D)^{-1} cap O = P
  FractionalIdeal lhs = ideal_intersection(r, ideal_product(r, pO, ideal_inverse(r, ideal_product(r, lam, D))),
                                           as_fractional(unit_ideal(r)));
  require(lhs == P, "residue form: p (lambda D_L)^{-1} cap O_L differs from the prime");

  const int d = res.fq.degree();
  std::vector<FieldElement> lifts;
  for (int i = 0; i < d; ++i) lifts.push_back(res.pres.from_class(FpPoly::x_power(p, static_cast<std::size_t>(i))));
  const std::size_t dim = static_cast<std::size_t>(ctx.n() * d);
  FpMatrix g(p, dim, dim);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      Rat v = r.trace(r.mul(lambda, r.mul(ctx.conj().apply(lifts[i]), lifts[k])));
      ensure(v.get_den() == 1, "residue form: form is not integral on the order");
      Int m = v.get_num() % Int(static_cast<long>(p));
      i64 mv = mod_norm(m.get_si(), p);
      for (int j = 0; j < ctx.n(); ++j) g(j * d + i, j * d + k) = mv;
    }
  FpSymForm phi(g);
  ensure(is_nondegenerate(phi), "residue form: induced form is degenerate");
  return phi;
}

std::string algebra_to_string(const AlgebraElement& x) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < x.x.size(); ++j) {
    if (x.x[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (j > 0) os << "e" << (j > 1 ? "^" + std::to_string(j) : "") << "*";
    os << "(" << element_to_string(x.x[j]) << ")";
  }
  return first ? "0" : os.str();
}

}  // namespace lf
