#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latticeforge/exactmath.hpp"
#include "latticeforge/fpcodes.hpp"
#include "latticeforge/ringints.hpp"

namespace lf {

// The lattice spanned by sqrt(scale) * rows(basis) in (Q^n, ambient_gram).
struct ScaledLattice {
  RatMatrix ambient_gram;
  IntMatrix basis;
  Rat scale = 1;

  std::size_t rank() const { return basis.rows(); }
  RatMatrix gram() const;
};

// M/N with pM in N in M. Everything is stored in M-coordinates.
struct QuotientCtx {
  i64 p = 2;
  RatMatrix gram;                   // Gram of b on the basis of M
  IntMatrix n_basis;                // HNF of N in M-coordinates
  std::vector<std::size_t> pivots;  // RREF pivots of N mod p
  std::vector<std::size_t> free;    // M/N basis: classes of unit vectors e_k, k in free
  FpMatrix nbar;                    // RREF of N mod p
  std::vector<Int> snf_invariants;
  FpSymForm form;

  std::size_t rank() const { return gram.rows(); }
  std::size_t dimension() const { return free.size(); }
  // F_p coordinates of [x] for x in M.
  std::vector<i64> coords(const std::vector<Int>& x) const;
  // Representative in M of the class with the given coordinates.
  std::vector<Int> lift(const std::vector<i64>& c) const;
};

// m_basis, n_basis: rows in ambient coordinates; gram on the ambient basis.
QuotientCtx build_quotient(const IntMatrix& m_basis, const IntMatrix& n_basis, const RatMatrix& ambient_gram, i64 p);
// Shortcut for M = Z^n.
QuotientCtx build_quotient(const IntMatrix& n_basis, const RatMatrix& gram, i64 p);

// (pM^# cap M)/N as a code; empty iff the induced form is nondegenerate.
FpCode radical_check(const QuotientCtx& ctx);

ScaledLattice gamma_of_code(const QuotientCtx& ctx, const FpCode& c);
// The ambient lattice M with scale 1.
ScaledLattice ambient_lattice(const QuotientCtx& ctx);

struct LatticeInvariants {
  std::size_t rank = 0;
  Rat det;
  bool integral = false;
  bool even = false;
  bool unimodular = false;
};
LatticeInvariants invariants(const ScaledLattice& l);

ScaledLattice dual_lattice(const ScaledLattice& l);
// Equality of the underlying point sets (scales may differ by a rational square).
bool same_lattice(const ScaledLattice& a, const ScaledLattice& b);
// a subset of b
bool lattice_contains(const ScaledLattice& b, const ScaledLattice& a);

struct CheckItem {
  std::string name;
  bool passed;
  std::string detail;
};

// Items (1)-(5) of the code-to-lattice theorem for C, with c2 as the second
// code in items (2) and (3) (C^perp when omitted).
std::vector<CheckItem> verify_thm_gamma(const QuotientCtx& ctx, const FpCode& c,
                                        const std::optional<FpCode>& c2 = std::nullopt);

struct MinimumKissing {
  Rat minimum;
  std::size_t kissing = 0;
};
MinimumKissing minimum_and_kissing(const ScaledLattice& l, std::size_t rank_cap = kEnumerationRankCap);
// Number of vectors of norm exactly `norm` (both signs).
std::size_t count_vectors_of_norm(const ScaledLattice& l, const Rat& norm, std::size_t rank_cap = kEnumerationRankCap);

enum class NamedLattice { Zn, E8, E8perpE8, A13perpA13 };
std::string to_string(NamedLattice n);
NamedLattice parse_named_lattice(const std::string& s);

struct Certificate {
  std::string name;
  // "identified": the checks determine the lattice up to isometry;
  // "invariants": rank/det/parity/min/kissing agree but do not prove isometry;
  // "determinant-level": enumeration skipped above the rank cap.
  std::string level;
  bool passed = false;
  std::vector<CheckItem> checks;
};
Certificate certify_named(const ScaledLattice& l, NamedLattice name, std::size_t rank_cap = kEnumerationRankCap);

// u + u* = 1 with u integral and p odd: Gamma_C is even for every self-orthogonal C.
bool even_criterion(const RingOfIntegers& r, const FieldElement& u, const RingAutomorphism& conj, i64 p);

}  // namespace lf
