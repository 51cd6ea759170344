#include "latticeforge/lattice.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace lf {

namespace {

std::vector<i64> to_mod_vec(const std::vector<Int>& v, i64 p) {
  std::vector<i64> out(v.size());
  Int pp = static_cast<long>(p);
  for (std::size_t i = 0; i < v.size(); ++i) {
    Int r = v[i] % pp;
    if (r < 0) r += pp;
    out[i] = r.get_si();
  }
  return out;
}

Int int_pow(long b, std::size_t e) {
  Int r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= Int(b);
  return r;
}

Rat rat_pow(const Rat& b, long e) {
  Rat r = 1;
  Rat base = e < 0 ? Rat(1) / b : b;
  for (long i = 0; i < std::labs(e); ++i) r *= base;
  return r;
}

bool rational_sqrt(const Rat& x, Rat* out) {
  if (x < 0) return false;
  Int n = x.get_num(), d = x.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  Int sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  *out = Rat(sn, sd);
  out->canonicalize();
  return true;
}

// Rows of basis * r as an integral HNF after clearing a shared denominator.
IntMatrix scaled_hnf(const IntMatrix& basis, const Rat& r, const Int& common) {
  IntMatrix out(basis.rows(), basis.cols());
  for (std::size_t i = 0; i < basis.rows(); ++i)
    for (std::size_t j = 0; j < basis.cols(); ++j) {
      Rat v = Rat(basis(i, j)) * r * Rat(common);
      ensure(v.get_den() == 1, "scaled_hnf: denominator not cleared");
      out(i, j) = v.get_num();
    }
  return hnf_basis(out);
}

}  // namespace

RatMatrix ScaledLattice::gram() const {
  RatMatrix b = to_rat(basis);
  RatMatrix g = b * ambient_gram * b.transpose();
  if (scale != 1)
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= scale;
  return g;
}

std::vector<i64> QuotientCtx::coords(const std::vector<Int>& x) const {
  auto v = to_mod_vec(x, p);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    i64 c = v[pivots[i]];
    if (c == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod_norm(v[j] - mod_mul(c, nbar(i, j), p), p);
  }
  std::vector<i64> out(free.size());
  for (std::size_t k = 0; k < free.size(); ++k) out[k] = v[free[k]];
  return out;
}

std::vector<Int> QuotientCtx::lift(const std::vector<i64>& c) const {
  require(c.size() == free.size(), "quotient lift: wrong length");
  std::vector<Int> x(rank());
  for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = static_cast<long>(mod_norm(c[k], p));
  return x;
}

QuotientCtx build_quotient(const IntMatrix& m_basis, const IntMatrix& n_basis, const RatMatrix& ambient_gram, i64 p) {
  require(is_prime(p), "build_quotient: p must be prime");
  const std::size_t n = m_basis.rows();
  require(m_basis.square() && ambient_gram.rows() == n && ambient_gram.square(), "build_quotient: shape mismatch");
  require(is_symmetric(ambient_gram), "build_quotient: Gram must be symmetric");
  require(n_basis.cols() == n, "build_quotient: N has the wrong width");
  RatMatrix minv = inverse_exact(to_rat(m_basis));
  RatMatrix nm = to_rat(n_basis) * minv;
  auto [nmi, den] = clear_denominators(nm);
  require(den == 1, "build_quotient: N is not contained in M");

  QuotientCtx ctx;
  ctx.p = p;
  RatMatrix mb = to_rat(m_basis);
  ctx.gram = mb * ambient_gram * mb.transpose();
  ctx.n_basis = hnf_basis(nmi);
  require(ctx.n_basis.rows() == n, "build_quotient: N must have full rank");
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Int> pe(n);
    pe[i] = static_cast<long>(p);
    require(in_hnf_lattice(ctx.n_basis, pe), "build_quotient: pM is not contained in N (basis vector " +
                                                  std::to_string(i) + ")");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      require(ctx.gram(i, j).get_den() == 1, "build_quotient: b(x, y) not integral on M at basis pair (" +
                                                 std::to_string(i) + ", " + std::to_string(j) + ")");
  RatMatrix bn = ctx.gram * to_rat(ctx.n_basis).transpose();
  const Int pp = static_cast<long>(p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      require(bn(i, j).get_num() % pp == 0, "build_quotient: b(x, y) not in pZ for x in M, y in N at pair (" +
                                                std::to_string(i) + ", " + std::to_string(j) + ")");

  FpMatrix nbar(p, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = to_mod_vec(ctx.n_basis.row_vector(i), p);
    for (std::size_t j = 0; j < n; ++j) nbar(i, j) = r[j];
  }
  ctx.nbar = rref(nbar, &ctx.pivots);
  for (std::size_t c = 0, k = 0; c < n; ++c) {
    if (k < ctx.pivots.size() && ctx.pivots[k] == c)
      ++k;
    else
      ctx.free.push_back(c);
  }
  // SNF invariants of N in M are 1 or p; the number of p's is dim M/N.
  if (n <= 48) {
    SnfResult s = snf(ctx.n_basis);
    std::size_t count_p = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Int d = abs(s.d(i, i));
      ctx.snf_invariants.push_back(d);
      ensure(d == 1 || d == pp, "build_quotient: invariant factor other than 1 or p");
      if (d == pp) ++count_p;
    }
    ensure(count_p == ctx.free.size(), "build_quotient: SNF and RREF disagree on dim M/N");
  }
  const std::size_t d = ctx.free.size();
  FpMatrix f(p, d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Int v = ctx.gram(ctx.free[a], ctx.free[b]).get_num() % pp;
      f(a, b) = mod_norm(v.get_si(), p);
    }
  ctx.form = FpSymForm(f);
  return ctx;
}

QuotientCtx build_quotient(const IntMatrix& n_basis, const RatMatrix& gram, i64 p) {
  return build_quotient(IntMatrix::identity(gram.rows()), n_basis, gram, p);
}

FpCode radical_check(const QuotientCtx& ctx) {
  const std::size_t n = ctx.rank();
  const i64 p = ctx.p;
  // pM^# cap M = {x in Z^n : x G in pZ^n}
  FpMatrix gm(p, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gm(i, j) = mod_norm(Int(ctx.gram(i, j).get_num() % Int(static_cast<long>(p))).get_si(), p);
  FpMatrix ker = kernel(gm);
  IntMatrix rows(0, n);
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    std::vector<Int> r(n);
    for (std::size_t j = 0; j < n; ++j) r[j] = static_cast<long>(ker(i, j));
    rows.append_row(r);
  }
  for (std::size_t i = 0; i < n; ++i) rows.append_row(ctx.n_basis.row(i));
  IntMatrix rad = hnf_modular(rows, Int(static_cast<long>(p)));

  if (n <= 24) {
    RatMatrix dual = inverse_exact(ctx.gram);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dual(i, j) *= p;
    auto [di, den] = clear_denominators(dual);
    IntMatrix scaled_m = IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) scaled_m(i, i) = den;
    IntMatrix inter = lattice_intersection(hnf_basis(di), scaled_m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ensure(inter(i, j) % den == 0, "radical_check: intersection not in M");
        inter(i, j) /= den;
      }
    ensure(hnf_basis(inter) == rad, "radical_check: two routes to pM^# cap M disagree");
  }

  FpMatrix g(p, 0, ctx.dimension());
  for (std::size_t i = 0; i < n; ++i) g.append_row(ctx.coords(rad.row_vector(i)));
  FpCode code(p, ctx.dimension(), g);
  ensure(code.dimension() == form_radical(ctx.form).dimension(), "radical_check: disagrees with the form radical");
  return code;
}

ScaledLattice gamma_of_code(const QuotientCtx& ctx, const FpCode& c) {
  require(c.p() == ctx.p && c.ambient() == ctx.dimension(), "gamma_of_code: code lives in a different space");
  const std::size_t n = ctx.rank();
  IntMatrix rows = ctx.n_basis;
  for (std::size_t i = 0; i < c.dimension(); ++i) rows.append_row(ctx.lift(c.generator().row(i)));
  IntMatrix h = hnf_modular(rows, Int(static_cast<long>(ctx.p)));
  ensure(h.rows() == n, "gamma_of_code: lost rank");
  ensure(det_int(h) == int_pow(ctx.p, ctx.dimension() - c.dimension()), "gamma_of_code: [M : pi^{-1}(C)] differs from [M/N : C]");
  return ScaledLattice{ctx.gram, h, Rat(1, ctx.p)};
}

ScaledLattice ambient_lattice(const QuotientCtx& ctx) {
  return ScaledLattice{ctx.gram, IntMatrix::identity(ctx.rank()), Rat(1)};
}

LatticeInvariants invariants(const ScaledLattice& l) {
  LatticeInvariants inv;
  RatMatrix g = l.gram();
  inv.rank = g.rows();
  inv.det = det_exact(g);
  inv.integral = is_integral(g);
  inv.even = inv.integral;
  for (std::size_t i = 0; i < g.rows() && inv.even; ++i)
    if (g(i, i).get_num() % 2 != 0) inv.even = false;
  inv.unimodular = inv.integral && inv.det == 1;
  return inv;
}

ScaledLattice dual_lattice(const ScaledLattice& l) {
  RatMatrix q = l.gram();
  RatMatrix y = inverse_exact(q) * to_rat(l.basis);
  auto [yi, den] = clear_denominators(y);
  ScaledLattice d{l.ambient_gram, hnf_basis(yi), l.scale / (Rat(den) * Rat(den))};
  ensure(det_exact(d.gram()) * det_exact(q) == 1, "dual_lattice: det(L) det(L^#) != 1");
  return d;
}

namespace {

// Bases of a and b in a common integral frame (same ambient space, comparable scales).
std::pair<IntMatrix, IntMatrix> common_frame(const ScaledLattice& a, const ScaledLattice& b) {
  require(a.ambient_gram == b.ambient_gram, "lattice comparison: different ambient spaces");
  Rat r;
  require(rational_sqrt(a.scale / b.scale, &r), "lattice comparison: scales differ by a non-square");
  Int common = r.get_den();
  return {scaled_hnf(a.basis, r, common), scaled_hnf(b.basis, Rat(1), common)};
}

}  // namespace

bool same_lattice(const ScaledLattice& a, const ScaledLattice& b) {
  auto [ha, hb] = common_frame(a, b);
  return ha == hb;
}

bool lattice_contains(const ScaledLattice& b, const ScaledLattice& a) {
  auto [ha, hb] = common_frame(a, b);
  require(hb.rows() == hb.cols(), "lattice_contains: container must have full rank");
  for (std::size_t i = 0; i < ha.rows(); ++i)
    if (!in_hnf_lattice(hb, ha.row_vector(i))) return false;
  return true;
}

std::vector<CheckItem> verify_thm_gamma(const QuotientCtx& ctx, const FpCode& c, const std::optional<FpCode>& c2_in) {
  std::vector<CheckItem> out;
  const FpSymForm& phi = ctx.form;
  const bool nondeg = is_nondegenerate(phi);
  const FpCode cp = code_orthogonal(c, phi);
  const FpCode c2 = c2_in ? *c2_in : cp;
  const std::size_t n = ctx.rank();
  const Rat det_m = det_exact(ctx.gram);
  const long codim = static_cast<long>(ctx.dimension() - c.dimension());

  ScaledLattice gc = gamma_of_code(ctx, c);
  ScaledLattice g2 = gamma_of_code(ctx, c2);
  LatticeInvariants inv = invariants(gc);

  Rat expect1 = det_m * rat_pow(Rat(ctx.p), 2 * codim - static_cast<long>(n));
  out.push_back({"(1) det formula", inv.det == expect1, "det " + to_string(inv.det) + ", formula " + to_string(expect1)});

  bool sub_codes = c.subset_of(c2);
  bool sub_lat = lattice_contains(g2, gc);
  out.push_back({"(2) inclusion", sub_codes == sub_lat,
                 std::string("C1 in C2: ") + (sub_codes ? "yes" : "no") + ", lattices: " + (sub_lat ? "yes" : "no")});

  // Gamma_C1 in Gamma_C2^# iff (1/p) B1 G B2^T is integral.
  RatMatrix cross = to_rat(gc.basis) * ctx.gram * to_rat(g2.basis).transpose();
  bool in_dual = true;
  for (std::size_t i = 0; i < cross.rows() && in_dual; ++i)
    for (std::size_t j = 0; j < cross.cols(); ++j)
      if (Rat(cross(i, j) / ctx.p).get_den() != 1) {
        in_dual = false;
        break;
      }
  bool orth = c.subset_of(code_orthogonal(c2, phi));
  out.push_back({"(3) dual inclusion", in_dual == orth,
                 std::string("C1 in C2^perp: ") + (orth ? "yes" : "no") + ", Gamma_C1 in Gamma_C2^#: " + (in_dual ? "yes" : "no")});

  bool self_orth = c.subset_of(cp);
  out.push_back({"(4) integrality", inv.integral == self_orth,
                 std::string("C in C^perp: ") + (self_orth ? "yes" : "no") + ", integral: " + (inv.integral ? "yes" : "no")});

  if (nondeg) {
    ScaledLattice gperp = gamma_of_code(ctx, cp);
    ScaledLattice dual = dual_lattice(gc);
    bool incl = lattice_contains(dual, gperp);
    Rat sq = det_exact(gperp.gram()) * inv.det;
    Rat idx;
    bool is_sq = rational_sqrt(sq, &idx);
    Rat expect5 = det_m * rat_pow(Rat(ctx.p), static_cast<long>(ctx.dimension()) - static_cast<long>(n));
    out.push_back({"(5) index", incl && is_sq && idx == expect5,
                   "[Gamma_C^# : Gamma_C^perp] = " + (is_sq ? to_string(idx) : std::string("?")) + ", formula " + to_string(expect5)});
  } else {
    out.push_back({"(5) index", true, "skipped: induced form is degenerate"});
  }
  return out;
}

MinimumKissing minimum_and_kissing(const ScaledLattice& l, std::size_t rank_cap) {
  RatMatrix g = l.gram();
  if (g.rows() > rank_cap)
    throw UnsupportedError("minimum_and_kissing: rank " + std::to_string(g.rows()) + " exceeds the enumeration cap " +
                           std::to_string(rank_cap) + "; use determinant-level analysis");
  require(is_positive_definite(g), "minimum_and_kissing: Gram not positive definite");
  IntMatrix t = lll_reduce(g);
  RatMatrix tr = to_rat(t);
  RatMatrix red = tr * g * tr.transpose();
  Rat bound = red(0, 0);
  for (std::size_t i = 1; i < red.rows(); ++i) bound = std::min(bound, red(i, i));
  auto sv = enumerate_short_vectors(g, bound, true, rank_cap);
  ensure(!sv.empty(), "minimum_and_kissing: enumeration missed the basis vector");
  MinimumKissing mk;
  mk.minimum = sv.front().norm;
  for (const auto& v : sv)
    if (v.norm == mk.minimum) mk.kissing += 2;
  return mk;
}

std::size_t count_vectors_of_norm(const ScaledLattice& l, const Rat& norm, std::size_t rank_cap) {
  auto sv = enumerate_short_vectors(l.gram(), norm, true, rank_cap);
  std::size_t c = 0;
  for (const auto& v : sv)
    if (v.norm == norm) c += 2;
  return c;
}

std::string to_string(NamedLattice n) {
  switch (n) {
    case NamedLattice::Zn: return "Zn";
    case NamedLattice::E8: return "E8";
    case NamedLattice::E8perpE8: return "E8perpE8";
    case NamedLattice::A13perpA13: return "A13perpA13";
  }
  return "?";
}

NamedLattice parse_named_lattice(const std::string& s) {
  if (s == "Zn" || (s.size() > 1 && s[0] == 'Z' && std::all_of(s.begin() + 1, s.end(), ::isdigit))) return NamedLattice::Zn;
  if (s == "E8") return NamedLattice::E8;
  if (s == "E8perpE8") return NamedLattice::E8perpE8;
  if (s == "A13perpA13") return NamedLattice::A13perpA13;
  throw PreconditionError("unknown named lattice '" + s + "'");
}

namespace {

// Sizes of the connected components of the graph on root representatives,
// edges joining non-orthogonal pairs.
std::vector<std::size_t> root_components(const RatMatrix& g, const std::vector<ShortVector>& roots) {
  const std::size_t m = roots.size();
  std::vector<std::vector<Rat>> gv;
  for (const auto& r : roots) {
    std::vector<Rat> w(g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.rows(); ++j)
        if (r.coords[j] != 0) w[i] += g(i, j) * Rat(r.coords[j]);
    gv.push_back(std::move(w));
  }
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      Rat ip = 0;
      for (std::size_t i = 0; i < g.rows(); ++i)
        if (roots[a].coords[i] != 0) ip += Rat(roots[a].coords[i]) * gv[b][i];
      if (ip != 0) parent[find(a)] = find(b);
    }
  std::vector<std::size_t> sizes(m, 0);
  for (std::size_t a = 0; a < m; ++a) ++sizes[find(a)];
  std::vector<std::size_t> out;
  for (auto s : sizes)
    if (s) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Certificate certify_named(const ScaledLattice& l, NamedLattice name, std::size_t rank_cap) {
  Certificate cert;
  LatticeInvariants inv = invariants(l);
  auto add = [&](const std::string& what, bool ok, const std::string& detail) { cert.checks.push_back({what, ok, detail}); };
  const bool enumerable = inv.rank <= rank_cap;
  switch (name) {
    case NamedLattice::Zn: {
      cert.name = "Z" + std::to_string(inv.rank);
      add("unimodular", inv.unimodular, "det " + to_string(inv.det));
      add("odd", inv.integral && !inv.even, inv.even ? "lattice is even" : "");
      if (enumerable) {
        auto sv = enumerate_short_vectors(l.gram(), Rat(1), true, rank_cap);
        // In an integral lattice norm-1 vectors are pairwise orthogonal or opposite,
        // so rank-many of them span a copy of Z^n of determinant 1.
        add("norm-1 witness", !sv.empty(), std::to_string(2 * sv.size()) + " vectors of norm 1");
        add("norm-1 vectors span", sv.size() == inv.rank, std::to_string(sv.size()) + " of " + std::to_string(inv.rank) + " needed");
        cert.level = "identified";
      } else {
        cert.level = "determinant-level";
      }
      break;
    }
    case NamedLattice::E8: {
      cert.name = "E8";
      require(inv.rank == 8, "certify_named: E8 needs rank 8, lattice has rank " + std::to_string(inv.rank));
      add("rank 8", true, "");
      add("even", inv.even, "");
      add("unimodular", inv.unimodular, "det " + to_string(inv.det));
      MinimumKissing mk = minimum_and_kissing(l, rank_cap);
      add("minimum 2", mk.minimum == 2, to_string(mk.minimum));
      add("kissing 240", mk.kissing == 240, std::to_string(mk.kissing));
      cert.level = "identified";  // even unimodular of rank 8 is E8
      break;
    }
    case NamedLattice::E8perpE8: {
      cert.name = "E8perpE8";
      require(inv.rank == 16, "certify_named: E8perpE8 needs rank 16, lattice has rank " + std::to_string(inv.rank));
      add("rank 16", true, "");
      add("even", inv.even, "");
      add("unimodular", inv.unimodular, "det " + to_string(inv.det));
      MinimumKissing mk = minimum_and_kissing(l, rank_cap);
      add("minimum 2", mk.minimum == 2, to_string(mk.minimum));
      add("kissing 480", mk.kissing == 480, std::to_string(mk.kissing));
      // The two even unimodular lattices of rank 16 have root systems E8+E8 and D16.
      auto roots = enumerate_short_vectors(l.gram(), Rat(2), true, rank_cap);
      auto comps = root_components(l.gram(), roots);
      add("root system E8+E8", comps == std::vector<std::size_t>{120, 120},
          std::to_string(comps.size()) + " irreducible components");
      cert.level = "identified";
      break;
    }
    case NamedLattice::A13perpA13: {
      cert.name = "A13perpA13";
      require(inv.rank == 26, "certify_named: A13perpA13 needs rank 26, lattice has rank " + std::to_string(inv.rank));
      add("rank 26", true, "");
      add("even", inv.even, "");
      add("det 196", inv.integral && inv.det == 196, "det " + to_string(inv.det));
      MinimumKissing mk = minimum_and_kissing(l, rank_cap);
      add("minimum 2", mk.minimum == 2, to_string(mk.minimum));
      add("kissing 364", mk.kissing == 364, std::to_string(mk.kissing));
      cert.level = "invariants";
      break;
    }
  }
  cert.passed = std::all_of(cert.checks.begin(), cert.checks.end(), [](const CheckItem& c) { return c.passed; });
  return cert;
}

bool even_criterion(const RingOfIntegers& r, const FieldElement& u, const RingAutomorphism& conj, i64 p) {
  require(p % 2 == 1, "even_criterion: p must be odd");
  require(u.is_integral(), "even_criterion: u must be integral");
  require(r.add(u, conj.apply(u)) == r.one(), "even_criterion: u + u* differs from 1");
  return true;
}

}  // namespace lf
