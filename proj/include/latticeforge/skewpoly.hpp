#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latticeforge/fpcodes.hpp"

namespace lf {

// F_q = F_p[t]/(f) with a designated automorphism sigma = Frob^s and a
// conjugation * = Frob^c. Elements are FpPoly values reduced modulo f.
class Fq {
 public:
  using Elem = FpPoly;

  Fq(i64 p, const FpPoly& modulus, int sigma_frobenius_power = 0, int conj_frobenius_power = 0);
  static Fq prime_field(i64 p) { return Fq(p, FpPoly(p, {0, 1}), 0, 0); }

  i64 p() const { return p_; }
  int degree() const { return d_; }
  std::uint64_t size() const { return q_; }
  const FpPoly& modulus() const { return f_; }
  int sigma_power() const { return s_; }
  int conj_power() const { return c_; }
  int sigma_order() const;
  bool sigma_is_identity() const { return s_ == 0; }

  Elem zero() const { return FpPoly(p_, {}); }
  Elem one() const { return FpPoly(p_, {1}); }
  Elem scalar(i64 a) const { return FpPoly(p_, {a}); }
  // The class of t (the primitive generator used for centrality checks).
  Elem gen() const;
  Elem from_coeffs(const std::vector<i64>& c) const;
  // Base-p digits of idx as coefficients, idx < q.
  Elem element(std::uint64_t idx) const;

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return zero() - a; }
  Elem mul(const Elem& a, const Elem& b) const { return (a * b) % f_; }
  Elem inv(const Elem& a) const;
  bool is_zero(const Elem& a) const { return a.is_zero(); }

  // a -> a^(p^k), k taken modulo d.
  Elem frobenius(const Elem& a, long k) const;
  Elem sigma(const Elem& a) const { return frobenius(a, s_); }
  Elem conj(const Elem& a) const { return frobenius(a, c_); }
  // a^{sigma^m} in the right-coefficient convention a^sigma = sigma^{-1}(a).
  Elem twist(const Elem& a, long m) const { return frobenius(a, -static_cast<long>(s_) * m); }

  std::string to_string(const Elem& a) const;

 private:
  i64 p_;
  int d_;
  std::uint64_t q_;
  FpPoly f_;
  int s_, c_;
  std::vector<FpPoly> frob_t_;  // t^(p^k) mod f, k < d
};

// sum_n X^n a_n, coefficients on the right; no trailing zeros.
struct SkewPoly {
  std::vector<FpPoly> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool operator==(const SkewPoly& o) const { return c == o.c; }
  bool operator!=(const SkewPoly& o) const { return c != o.c; }
};

SkewPoly skew_trim(const Fq& fq, std::vector<FpPoly> c);
SkewPoly skew_constant(const Fq& fq, const FpPoly& a);
SkewPoly skew_x_power(const Fq& fq, std::size_t n, const FpPoly& a);
// X^n - gamma
SkewPoly skew_central_binomial(const Fq& fq, std::size_t n, const FpPoly& gamma);
bool skew_is_monic(const Fq& fq, const SkewPoly& f);

SkewPoly skew_add(const Fq& fq, const SkewPoly& f, const SkewPoly& g);
SkewPoly skew_sub(const Fq& fq, const SkewPoly& f, const SkewPoly& g);
SkewPoly skew_mul(const Fq& fq, const SkewPoly& f, const SkewPoly& g);
// f * a for a constant a (right scalar multiplication acts coefficientwise).
SkewPoly skew_scale_right(const Fq& fq, const SkewPoly& f, const FpPoly& a);
SkewPoly skew_monic(const Fq& fq, const SkewPoly& f);

enum class Side { Left, Right };

struct SkewDivision {
  SkewPoly q;
  SkewPoly r;
};
// Left: f = g*Q + R. Right: f = Q*g + R. deg R < deg g.
SkewDivision skew_divmod(const Fq& fq, const SkewPoly& f, const SkewPoly& g, Side side);

// f commutes with X and with the generator of F_q. n is the degree of the
// cyclic algebra; the order of sigma must divide it.
bool is_central(const Fq& fq, const SkewPoly& f, int n);

inline constexpr std::uint64_t kDivisorSearchBudget = 1000000;

std::vector<SkewPoly> central_divisors(const Fq& fq, const FpPoly& gamma_bar, int n, int degree,
                                       std::uint64_t budget = kDivisorSearchBudget);

SkewPoly g_tau(const Fq& fq, const SkewPoly& g, int n, const FpPoly& gamma_bar);
SkewPoly g_tau_lambda(const Fq& fq, const SkewPoly& g, const FpPoly& lambda_class, int n,
                      const FpPoly& gamma_bar);

enum class DualMode { Ramified, Inert };

struct SkewDual {
  SkewPoly g_tau;  // g_tau or g_tau_lambda depending on the mode
  SkewPoly h;      // (X^n - gamma) / g_tau
  bool self_orthogonal;
  bool self_dual;
};
SkewDual dual_divisor(const Fq& fq, const SkewPoly& g, DualMode mode, int n, const FpPoly& gamma_bar,
                      const FpPoly* lambda_class = nullptr);

std::string to_string(const Fq& fq, const SkewPoly& f);

}  // namespace lf
