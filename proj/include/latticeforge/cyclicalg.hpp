#pragma once

#include <vector>

#include "latticeforge/fpcodes.hpp"
#include "latticeforge/ringints.hpp"
#include "latticeforge/skewpoly.hpp"

namespace lf {

// a*e = e*sigma^{COMMUTATION}(a). Must agree with the skew convention a^sigma = sigma^{-1}(a).
inline constexpr int kCommutationExponent = -1;

// B = (gamma, L/k, sigma) = L + eL + ... + e^{n-1}L with e^n = gamma and a e = e a^sigma.
// k is implicit as the fixed field of sigma.
class CyclicAlgebraCtx {
 public:
  CyclicAlgebraCtx(RingPtr ring, RingAutomorphism sigma, FieldElement gamma, RingAutomorphism conj, int n);

  const RingOfIntegers& ring() const { return *ring_; }
  const RingPtr& ring_ptr() const { return ring_; }
  const RingAutomorphism& sigma() const { return sigma_; }
  const RingAutomorphism& conj() const { return conj_; }
  const FieldElement& gamma() const { return gamma_; }
  const FieldElement& gamma_inverse() const { return gamma_inv_; }
  int n() const { return n_; }
  // Rank of Lambda = n [L:Q].
  std::size_t rank() const { return static_cast<std::size_t>(n_) * ring_->degree(); }
  // sigma^k for any integer k.
  const RingAutomorphism& sigma_power(long k) const;

 private:
  RingPtr ring_;
  RingAutomorphism sigma_, conj_;
  FieldElement gamma_, gamma_inv_;
  int n_;
  std::vector<RingAutomorphism> powers_;
};

// sum_j e^j x_j
struct AlgebraElement {
  std::vector<FieldElement> x;
  bool operator==(const AlgebraElement& o) const { return x == o.x; }
  bool operator!=(const AlgebraElement& o) const { return x != o.x; }
};

AlgebraElement algebra_zero(const CyclicAlgebraCtx& ctx);
AlgebraElement algebra_one(const CyclicAlgebraCtx& ctx);
// e^j a
AlgebraElement algebra_monomial(const CyclicAlgebraCtx& ctx, int j, const FieldElement& a);
// Lambda-basis element e^j omega_k at index j*[L:Q] + k.
AlgebraElement algebra_basis(const CyclicAlgebraCtx& ctx, std::size_t idx);
AlgebraElement algebra_add(const CyclicAlgebraCtx& ctx, const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement algebra_mul(const CyclicAlgebraCtx& ctx, const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement tau(const CyclicAlgebraCtx& ctx, const AlgebraElement& x);
FieldElement reduced_trace(const CyclicAlgebraCtx& ctx, const AlgebraElement& x);
bool in_order(const AlgebraElement& x);

std::vector<Rat> algebra_coords(const CyclicAlgebraCtx& ctx, const AlgebraElement& x);
AlgebraElement algebra_from_coords(const CyclicAlgebraCtx& ctx, const std::vector<Rat>& v);
AlgebraElement algebra_from_int(const CyclicAlgebraCtx& ctx, const std::vector<Int>& v);

// Row b is the coordinate vector of basis_b * x.
RatMatrix regular_representation(const CyclicAlgebraCtx& ctx, const AlgebraElement& x);

// sum_j Tr_{L/Q}(lambda x_j^* y_j)
Rat q_B_lambda(const CyclicAlgebraCtx& ctx, const AlgebraElement& x, const AlgebraElement& y, const FieldElement& lambda);
// Tr_{L/Q}(Trd(lambda tau(x) y)), evaluated through the algebra product.
Rat q_B_lambda_via_trd(const CyclicAlgebraCtx& ctx, const AlgebraElement& x, const AlgebraElement& y,
                       const FieldElement& lambda);

// n copies of the trace form Gram of O_L.
RatMatrix order_gram(const CyclicAlgebraCtx& ctx, const FieldElement& lambda);

// HNF basis of P = sum_j e^j P_L inside Lambda.
IntMatrix two_sided_P(const CyclicAlgebraCtx& ctx, const IntegralIdeal& prime);

// Lambda/P ~ F_q[X;sigma]/(X^n - gamma) with X -> [e].
struct CyclicResidue {
  IntegralIdeal prime;
  ResiduePresentation pres;
  Fq fq;
  FpPoly gamma_bar;
};
CyclicResidue residue_skew_iso(const CyclicAlgebraCtx& ctx, const IntegralIdeal& prime, i64 p,
                               const FieldElement* beta = nullptr);

// Image of x in F_q[X;sigma] (degree < n).
SkewPoly residue_image(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const AlgebraElement& x);
// g(e) = sum_k e^k a_k with each a_k lifted from its class.
AlgebraElement lift_skew(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const SkewPoly& g);
// F_p coordinates of [x] in Lambda/P on the basis e^j beta^i, index j*d + i.
std::vector<i64> residue_coords(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const AlgebraElement& x);

// Lambda g(e) + P as an HNF basis in Lambda coordinates.
IntMatrix left_ideal_lattice(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const SkewPoly& g);
// The image of Lambda g(e) in Lambda/P as a code in residue coordinates.
FpCode left_ideal_code(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const SkewPoly& g);

// Gram of phi(x, y) = [q_{B,lambda}(x, y)]_p on the basis of residue_coords.
FpSymForm residue_form(const CyclicAlgebraCtx& ctx, const CyclicResidue& res, const FieldElement& lambda);

std::string algebra_to_string(const AlgebraElement& x);

}  // namespace lf
