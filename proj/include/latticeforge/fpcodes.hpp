#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticeforge/errors.hpp"

namespace lf {

using i64 = std::int64_t;

i64 mod_norm(i64 a, i64 p);
i64 mod_mul(i64 a, i64 b, i64 p);
i64 mod_pow(i64 a, std::uint64_t e, i64 p);
i64 mod_inv(i64 a, i64 p);
bool is_prime(i64 n);
// Legendre-style square test in F_p (every element is a square when p = 2).
bool is_square_mod(i64 a, i64 p);

// Polynomial over F_p, coefficients low to high, no trailing zeros.
class FpPoly {
 public:
  FpPoly() = default;
  FpPoly(i64 p, std::vector<i64> coeffs);
  static FpPoly constant(i64 p, i64 c) { return FpPoly(p, {c}); }
  static FpPoly x_power(i64 p, std::size_t k, i64 c = 1);

  i64 p() const { return p_; }
  const std::vector<i64>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  i64 coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0; }
  i64 leading() const { return c_.empty() ? 0 : c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  FpPoly monic() const;
  i64 eval(i64 x) const;

  bool operator==(const FpPoly& o) const { return p_ == o.p_ && c_ == o.c_; }
  bool operator!=(const FpPoly& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  void trim();
  i64 p_ = 2;
  std::vector<i64> c_;
};

FpPoly operator+(const FpPoly& a, const FpPoly& b);
FpPoly operator-(const FpPoly& a, const FpPoly& b);
FpPoly operator*(const FpPoly& a, const FpPoly& b);
FpPoly scale(const FpPoly& a, i64 c);
std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b);
FpPoly operator%(const FpPoly& a, const FpPoly& b);
FpPoly poly_gcd(const FpPoly& a, const FpPoly& b);
FpPoly derivative(const FpPoly& a);
FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod);
FpPoly powmod(const FpPoly& base, std::uint64_t e, const FpPoly& mod);
// Inverse of a modulo m (gcd must be 1).
FpPoly inverse_mod(const FpPoly& a, const FpPoly& m);
// Exact quotient; throws if b does not divide a.
FpPoly exact_quotient(const FpPoly& a, const FpPoly& b);
// Canonical order: by degree, then coefficients compared from the top down.
bool poly_less(const FpPoly& a, const FpPoly& b);

inline constexpr std::uint64_t kFactorSeed = 0x1f2e3d4c5b6a7988ULL;

struct FactorPower {
  FpPoly factor;
  int multiplicity;
};
// Monic irreducible factorization, sorted canonically; leading coefficient dropped.
std::vector<FactorPower> factor(const FpPoly& f);
bool is_irreducible(const FpPoly& f);
std::vector<FpPoly> divisors(const FpPoly& mu);

struct DualGenerator {
  FpPoly g_perp;
  bool self_orthogonal;
  bool self_dual;
};
DualGenerator dual_generator(const FpPoly& g, const FpPoly& mu, const FpPoly& g_star);

enum class GStarCase { Fixed, Negated, HalfInteger, Unitary };
FpPoly gstar_closed_form(const FpPoly& g, GStarCase c);

// Dense matrix over F_p.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(i64 p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols), d_(rows * cols, 0) {}
  static FpMatrix identity(i64 p, std::size_t n);

  i64 p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  i64& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
  i64 operator()(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }
  std::vector<i64> row(std::size_t i) const {
    return {d_.begin() + static_cast<long>(i * cols_), d_.begin() + static_cast<long>((i + 1) * cols_)};
  }
  void append_row(const std::vector<i64>& r);
  FpMatrix transpose() const;
  bool operator==(const FpMatrix& o) const {
    return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
  }

 private:
  i64 p_ = 2;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<i64> d_;
};

FpMatrix operator*(const FpMatrix& a, const FpMatrix& b);
// Reduced row echelon form with zero rows removed; pivots receives pivot columns.
FpMatrix rref(const FpMatrix& m, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const FpMatrix& m);
// Basis (rows) of {x : m x = 0}.
FpMatrix kernel(const FpMatrix& m);
i64 det_mod(const FpMatrix& m);

// Linear code: row space of an RREF generator matrix in F_p^n.
class FpCode {
 public:
  FpCode() = default;
  FpCode(i64 p, std::size_t n, const FpMatrix& generators);
  static FpCode zero(i64 p, std::size_t n) { return FpCode(p, n, FpMatrix(p, 0, n)); }
  static FpCode full(i64 p, std::size_t n) { return FpCode(p, n, FpMatrix::identity(p, n)); }

  i64 p() const { return p_; }
  std::size_t ambient() const { return n_; }
  std::size_t dimension() const { return g_.rows(); }
  const FpMatrix& generator() const { return g_; }
  const std::vector<std::size_t>& pivots() const { return piv_; }
  bool contains(const std::vector<i64>& v) const;
  bool subset_of(const FpCode& o) const;
  bool operator==(const FpCode& o) const { return p_ == o.p_ && n_ == o.n_ && g_ == o.g_; }

 private:
  i64 p_ = 2;
  std::size_t n_ = 0;
  FpMatrix g_;
  std::vector<std::size_t> piv_;
};

class FpSymForm {
 public:
  FpSymForm() = default;
  explicit FpSymForm(const FpMatrix& m);
  i64 p() const { return m_.p(); }
  std::size_t dimension() const { return m_.rows(); }
  const FpMatrix& matrix() const { return m_; }
  i64 eval(const std::vector<i64>& x, const std::vector<i64>& y) const;

 private:
  FpMatrix m_;
};

FpCode form_radical(const FpSymForm& phi);
bool is_nondegenerate(const FpSymForm& phi);
FpCode code_orthogonal(const FpCode& c, const FpSymForm& phi);
// Existence criterion for a Lagrangian of a nondegenerate form.
bool lagrangian_exists(const FpSymForm& phi);
std::optional<FpCode> find_lagrangian(const FpSymForm& phi);
FpCode find_totally_isotropic(const FpSymForm& phi, std::size_t d);

}  // namespace lf
