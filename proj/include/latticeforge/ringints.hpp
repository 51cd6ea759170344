#pragma once

#include <memory>
#include <string>
#include <vector>

#include "latticeforge/exactmath.hpp"
#include "latticeforge/fpcodes.hpp"

namespace lf {

// Integer polynomial, coefficients low to high.
using ZPoly = std::vector<Int>;

ZPoly cyclotomic_polynomial(int n);
// Minimal polynomial of zeta_n + zeta_n^{-1}.
ZPoly real_cyclotomic_polynomial(int n);

enum class FieldKind { TotallyReal, CM, Other };
std::string to_string(FieldKind k);

struct FieldElement {
  std::vector<Rat> c;

  FieldElement() = default;
  explicit FieldElement(std::vector<Rat> coords) : c(std::move(coords)) {}
  std::size_t size() const { return c.size(); }
  bool is_zero() const;
  bool is_integral() const;
  // Coordinates of an integral element; throws otherwise.
  std::vector<Int> to_int() const;
  // Least positive d with d*x integral.
  Int denominator() const;
  bool operator==(const FieldElement& o) const { return c == o.c; }
  bool operator!=(const FieldElement& o) const { return c != o.c; }
};

FieldElement from_int(const std::vector<Int>& v);

class RingOfIntegers;
using RingPtr = std::shared_ptr<const RingOfIntegers>;

// Field automorphism given by the images of the generators; stored as the
// integer matrix whose row k is the image of basis element k.
class RingAutomorphism {
 public:
  RingAutomorphism() = default;
  RingAutomorphism(const RingOfIntegers& r, std::vector<FieldElement> generator_images);

  const IntMatrix& matrix() const { return m_; }
  const std::vector<FieldElement>& generator_images() const { return images_; }
  FieldElement apply(const FieldElement& x) const;
  std::vector<Int> apply_int(const std::vector<Int>& x) const;
  RingAutomorphism compose(const RingAutomorphism& inner) const;  // this o inner
  RingAutomorphism power(long k) const;
  int order() const;
  bool is_identity() const;
  bool operator==(const RingAutomorphism& o) const { return m_ == o.m_; }

 private:
  std::vector<FieldElement> images_;
  IntMatrix m_;
};

class RingOfIntegers {
 public:
  // O = Z[alpha] with alpha a root of the monic irreducible m.
  static RingPtr monogenic(ZPoly m, FieldKind kind, std::string label);
  static RingPtr cyclotomic(int n);
  static RingPtr real_cyclotomic(int n);
  static RingPtr quadratic(long d);
  // Tensor product of two monogenic rings with coprime discriminants.
  static RingPtr compositum(RingPtr a, RingPtr b);

  std::size_t degree() const { return n_; }
  bool is_compositum() const { return factors_.size() == 2; }
  const RingOfIntegers& factor(std::size_t i) const { return *factors_.at(i); }
  const RingPtr& factor_ptr(std::size_t i) const { return factors_.at(i); }
  const ZPoly& defining_polynomial() const;
  FieldKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  // Galois action tag: cyclotomic index, real cyclotomic index, or quadratic d.
  enum class Family { Cyclotomic, RealCyclotomic, Quadratic, Generic, Compositum };
  Family family() const { return family_; }
  long family_parameter() const { return family_param_; }

  FieldElement zero() const { return FieldElement(std::vector<Rat>(n_)); }
  FieldElement one() const;
  FieldElement scalar(const Rat& r) const;
  FieldElement basis_element(std::size_t k) const;
  // alpha (monogenic) or alpha_{which+1} embedded in the compositum.
  FieldElement generator(std::size_t which = 0) const;
  std::size_t generator_count() const { return is_compositum() ? 2 : 1; }
  // Embed an element of factor i into the compositum.
  FieldElement embed(std::size_t i, const FieldElement& x) const;

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement scale(const FieldElement& a, const Rat& s) const;
  FieldElement invert(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, long k) const;
  std::vector<Int> mul_int(const std::vector<Int>& a, const std::vector<Int>& b) const;
  std::vector<i64> mul_mod(const std::vector<i64>& a, const std::vector<i64>& b, i64 p) const;
  // Evaluate an integer polynomial at x.
  FieldElement eval(const ZPoly& f, const FieldElement& x) const;

  // Row k holds the coordinates of omega_k * x.
  RatMatrix mult_matrix(const FieldElement& x) const;
  Rat trace(const FieldElement& x) const;
  Rat norm(const FieldElement& x) const;
  // Tr(omega_i omega_j).
  const IntMatrix& trace_matrix() const { return trace_matrix_; }
  // Signed discriminant det(Tr(omega_i omega_j)).
  const Int& discriminant() const { return disc_; }
  // Full structure constants: entry [i][j] is omega_i * omega_j.
  std::vector<std::vector<std::vector<Int>>> multiplication_table() const;

  RingAutomorphism identity_automorphism() const;
  // Complex conjugation (identity for totally real fields).
  RingAutomorphism conjugation() const;
  // zeta -> zeta^a for (real) cyclotomic fields; +-1 for quadratic fields.
  RingAutomorphism galois(long a) const;
  RingAutomorphism galois(long a1, long a2) const;

 private:
  RingOfIntegers() = default;
  void build_tables();
  void check_structure() const;

  std::size_t n_ = 0;
  std::size_t n1_ = 0, n2_ = 1;  // factor degrees (n2_ = 1 when monogenic)
  ZPoly m_;                      // monogenic defining polynomial
  std::vector<RingPtr> factors_;
  FieldKind kind_ = FieldKind::Other;
  Family family_ = Family::Generic;
  long family_param_ = 0;
  std::string label_;
  // red1_[k] = alpha_1^k reduced, k < 2*n1-1; red2_ likewise for alpha_2.
  std::vector<std::vector<Int>> red1_, red2_;
  std::vector<Int> tr1_, tr2_;  // Tr(alpha_i^k) in the factor, k < 2*n_i-1
  IntMatrix trace_matrix_;
  Int disc_;
};

// sum_{i<n} sigma^i(x); sigma must have order dividing n.
FieldElement relative_trace(const RingOfIntegers& r, const FieldElement& x, const RingAutomorphism& sigma, int n);

// ---------------------------------------------------------------- ideals

struct IntegralIdeal {
  IntMatrix hnf;  // n x n HNF, rows a Z-basis in ring coordinates
  bool operator==(const IntegralIdeal& o) const { return hnf == o.hnf; }
};

struct FractionalIdeal {
  IntegralIdeal num;
  Int den = 1;
  bool operator==(const FractionalIdeal& o) const { return den == o.den && num == o.num; }
};

IntegralIdeal unit_ideal(const RingOfIntegers& r);
// Ideal generated by integral elements.
IntegralIdeal ideal_from_generators(const RingOfIntegers& r, const std::vector<FieldElement>& gens);
// Validates closure under multiplication by the generators and returns the canonical form.
IntegralIdeal make_ideal(const RingOfIntegers& r, const IntMatrix& basis);
FractionalIdeal principal_ideal(const RingOfIntegers& r, const FieldElement& x);
FractionalIdeal as_fractional(const IntegralIdeal& a);
FractionalIdeal normalize(const RingOfIntegers& r, FractionalIdeal a);
// Integral ideal of a fractional ideal with denominator 1; throws otherwise.
IntegralIdeal as_integral(const FractionalIdeal& a);
// Fractional ideal with Z-basis given by the rows of a nonsingular rational matrix.
FractionalIdeal fractional_from_basis(const RingOfIntegers& r, const RatMatrix& basis);
RatMatrix rational_basis(const FractionalIdeal& a);

Int ideal_norm(const IntegralIdeal& a);
Rat ideal_norm(const RingOfIntegers& r, const FractionalIdeal& a);
IntegralIdeal ideal_product(const RingOfIntegers& r, const IntegralIdeal& a, const IntegralIdeal& b);
FractionalIdeal ideal_product(const RingOfIntegers& r, const FractionalIdeal& a, const FractionalIdeal& b);
IntegralIdeal ideal_sum(const RingOfIntegers& r, const IntegralIdeal& a, const IntegralIdeal& b);
FractionalIdeal ideal_sum(const RingOfIntegers& r, const FractionalIdeal& a, const FractionalIdeal& b);
FractionalIdeal ideal_intersection(const RingOfIntegers& r, const FractionalIdeal& a, const FractionalIdeal& b);
// Trace dual {y : Tr(xy) in Z for all x in a}.
FractionalIdeal trace_dual(const RingOfIntegers& r, const FractionalIdeal& a);
FractionalIdeal ideal_inverse(const RingOfIntegers& r, const FractionalIdeal& a);
FractionalIdeal ideal_power(const RingOfIntegers& r, const FractionalIdeal& a, long k);
FractionalIdeal ideal_conjugate(const RingOfIntegers& r, const FractionalIdeal& a, const RingAutomorphism& s);
bool ideal_contains(const FractionalIdeal& a, const FieldElement& x);
// b subset of a
bool ideal_contains(const RingOfIntegers& r, const FractionalIdeal& a, const FractionalIdeal& b);

IntegralIdeal different_ideal(const RingOfIntegers& r);

struct PrimeIdeal {
  IntegralIdeal ideal;
  int e;
  int f;
};
std::vector<PrimeIdeal> primes_above(const RingOfIntegers& r, i64 p);
// Product of the distinct primes above p, computed as the kernel of a Frobenius power on O/pO.
IntegralIdeal p_radical(const RingOfIntegers& r, i64 p);

long valuation(const RingOfIntegers& r, const FractionalIdeal& a, const IntegralIdeal& prime);
long valuation(const RingOfIntegers& r, const FieldElement& x, const IntegralIdeal& prime);

bool certify_totally_positive(const RingOfIntegers& r, const FieldElement& lambda);
// Gram of (x,y) -> Tr(lambda x* y) on the Z-basis of j; the determinant formula is asserted.
RatMatrix trace_form_gram(const RingOfIntegers& r, const FractionalIdeal& j, const FieldElement& lambda,
                          const RingAutomorphism& conj);
FractionalIdeal dual_ideal(const RingOfIntegers& r, const FractionalIdeal& j, const FieldElement& lambda,
                           const RingAutomorphism& conj);

// O/I presented as F_p[X]/(mu) through X -> [beta].
class ResiduePresentation {
 public:
  ResiduePresentation(const RingOfIntegers& r, const IntegralIdeal& ideal, i64 p, const FieldElement& beta);

  i64 p() const { return p_; }
  const FpPoly& mu() const { return mu_; }
  std::size_t dimension() const { return free_.size(); }
  const IntegralIdeal& ideal() const { return ideal_; }
  const FieldElement& beta() const { return beta_; }
  // Coordinates of [x] on the F_p-basis of O/I given by the non-pivot unit vectors.
  std::vector<i64> reduce(const std::vector<Int>& x) const;
  FpPoly to_class(const FieldElement& x) const;
  FieldElement from_class(const FpPoly& c) const;

 private:
  i64 p_;
  IntegralIdeal ideal_;
  FieldElement beta_;
  FpMatrix ibar_;                     // RREF of I mod p
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> free_;
  std::vector<std::vector<Int>> powers_;  // beta^k, k < deg mu
  FpMatrix solve_rref_;                // RREF of [reduced powers | identity] for to_class
  FpPoly mu_;
};

FpPoly conjugate_image_polynomial(const RingOfIntegers& r, const FpPoly& g, const ResiduePresentation& pres,
                                  const RingAutomorphism& conj);

// Class of a P-unit lambda in O/P, expressed as a polynomial in [beta] modulo mu.
FpPoly residue_class_of_unit(const RingOfIntegers& r, const FieldElement& lambda, const ResiduePresentation& pres);

// Search a generator beta of O/P as an F_p-algebra among simple candidates.
FieldElement find_residue_generator(const RingOfIntegers& r, const IntegralIdeal& prime, i64 p);

std::string element_to_string(const FieldElement& x);

}  // namespace lf
