#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "latticeforge/errors.hpp"

namespace lf {

using Int = mpz_class;
using Rat = mpq_class;

// Dense row-major matrix over an exact scalar type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::vector<T> row_vector(std::size_t i) const { return {row(i).begin(), row(i).end()}; }

  void append_row(std::span<const T> r);
  void swap_rows(std::size_t i, std::size_t j);
  Matrix transpose() const;
  Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <class T>
void Matrix<T>::append_row(std::span<const T> r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw PreconditionError("append_row: width mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

template <class T>
void Matrix<T>::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

template <class T>
Matrix<T> Matrix<T>::submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  Matrix s(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
  return s;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw PreconditionError("matrix product: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  T t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        t = aik * b(k, j);
        c(i, j) += t;
      }
    }
  return c;
}

RatMatrix to_rat(const IntMatrix& m);
// Common positive denominator d and integer matrix d*m.
std::pair<IntMatrix, Int> clear_denominators(const RatMatrix& m);
bool is_symmetric(const RatMatrix& g);
bool is_integral(const RatMatrix& g);

// Row Hermite normal form: row echelon, positive pivots, entries above each
// pivot reduced into [0, pivot), zero rows last. u is unimodular, u*m = h.
struct HnfResult {
  IntMatrix h;
  IntMatrix u;
};
HnfResult hnf(const IntMatrix& m);

// HNF of the row space with zero rows removed.
IntMatrix hnf_basis(const IntMatrix& m);

// HNF of rowspace(m) + D*Z^n, for a full-rank lattice known to contain D*Z^n.
// All intermediate entries stay below D.
IntMatrix hnf_modular(const IntMatrix& m, const Int& modulus);

struct SnfResult {
  IntMatrix d;
  IntMatrix left;
  IntMatrix right;
};
// Smith normal form of a nonsingular square matrix: left*m*right = d.
SnfResult snf(const IntMatrix& m);

Int det_int(const IntMatrix& m);
Rat det_exact(const RatMatrix& g);
RatMatrix inverse_exact(const RatMatrix& g);
bool is_positive_definite(const RatMatrix& g);

// Rows of the returned unimodular matrix form an LLL-reduced basis (delta = 3/4)
// for the lattice with Gram matrix g.
IntMatrix lll_reduce(const RatMatrix& g);

struct ShortVector {
  std::vector<Int> coords;
  Rat norm;
};

inline constexpr std::size_t kEnumerationRankCap = 32;

// All nonzero v with v^T g v <= bound, sorted by (norm, coords). With
// collapse_pairs only the representative whose last nonzero coordinate in the
// reduced basis is positive is kept.
std::vector<ShortVector> enumerate_short_vectors(const RatMatrix& g, const Rat& bound,
                                                 bool collapse_pairs = true,
                                                 std::size_t rank_cap = kEnumerationRankCap);

IntMatrix lattice_intersection(const IntMatrix& a, const IntMatrix& b);

// Membership of an integer vector in the row lattice of a full-rank HNF basis.
bool in_hnf_lattice(const IntMatrix& hnf_rows, std::span<const Int> v);
// Coefficients c with c*basis = v for a nonsingular square basis, if integral.
bool solve_integral(const IntMatrix& basis, std::span<const Int> v, std::vector<Int>* coeffs);

// Thread budget from LATTICEFORGE_THREADS, defaulting to hardware concurrency.
unsigned thread_budget();

std::string to_string(const Rat& r);
Rat parse_rational(const std::string& s);

}  // namespace lf
