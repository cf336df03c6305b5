#pragma once

// Finite fields GF(p^e) as F_p[x]/(f), univariate factorization over F_p
// (deterministic Berlekamp and randomized Cantor-Zassenhaus), matrices over a
// field, minimal polynomials, Frobenius data and fixed subfields.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>

#include "centdec/common.hpp"

namespace centdec {

// ---------------------------------------------------------------------------
// polynomials over F_p, little-endian coefficient rows
// ---------------------------------------------------------------------------

struct FpPoly {
  i64 p = 2;
  std::vector<i64> c;  // c[i] coefficient of x^i; no trailing zeros

  FpPoly() = default;
  FpPoly(i64 prime, std::vector<i64> coeffs) : p(prime), c(std::move(coeffs)) { normalize(); }

  void normalize() {
    for (auto& x : c) x = mod_reduce(x, p);
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  bool is_zero() const { return c.empty(); }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  i64 lead() const { return c.empty() ? 0 : c.back(); }
  i64 coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : 0; }

  bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
  bool operator<(const FpPoly& o) const { return c < o.c; }

  static FpPoly zero(i64 p) { return FpPoly(p, {}); }
  static FpPoly one(i64 p) { return FpPoly(p, {1}); }
  static FpPoly x(i64 p) { return FpPoly(p, {0, 1}); }
  static FpPoly constant(i64 p, i64 a) { return FpPoly(p, {a}); }
};

inline FpPoly poly_add(const FpPoly& a, const FpPoly& b) {
  std::vector<i64> c(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) c[i] = add_mod(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)), a.p);
  return FpPoly(a.p, std::move(c));
}

inline FpPoly poly_sub(const FpPoly& a, const FpPoly& b) {
  std::vector<i64> c(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) c[i] = sub_mod(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)), a.p);
  return FpPoly(a.p, std::move(c));
}

inline FpPoly poly_mul(const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p);
  std::vector<i64> c(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) c[i + j] = add_mod(c[i + j], mul_mod(a.c[i], b.c[j], a.p), a.p);
  return FpPoly(a.p, std::move(c));
}

inline FpPoly poly_scale(const FpPoly& a, i64 s) {
  FpPoly r = a;
  for (auto& x : r.c) x = mul_mod(x, mod_reduce(s, a.p), a.p);
  r.normalize();
  return r;
}

inline std::pair<FpPoly, FpPoly> poly_divrem(const FpPoly& a, const FpPoly& b) {
  require(!b.is_zero(), errc::invalid_argument, "poly_divrem: division by zero");
  FpPoly r = a;
  std::vector<i64> q(std::max<int>(a.deg() - b.deg() + 1, 0), 0);
  i64 il = inv_unit_mod(b.lead(), a.p);
  while (!r.is_zero() && r.deg() >= b.deg()) {
    int d = r.deg() - b.deg();
    i64 f = mul_mod(r.lead(), il, a.p);
    q[d] = f;
    for (int i = 0; i <= b.deg(); ++i) r.c[i + d] = sub_mod(r.c[i + d], mul_mod(f, b.c[i], a.p), a.p);
    r.normalize();
  }
  return {FpPoly(a.p, std::move(q)), r};
}

inline FpPoly poly_mod(const FpPoly& a, const FpPoly& b) { return poly_divrem(a, b).second; }

inline FpPoly poly_monic(const FpPoly& a) {
  if (a.is_zero()) return a;
  return poly_scale(a, inv_unit_mod(a.lead(), a.p));
}

inline FpPoly poly_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = poly_mod(a, b);
    a = b;
    b = r;
  }
  return poly_monic(a);
}

inline FpPoly poly_powmod(FpPoly base, u64 e, const FpPoly& mod) {
  FpPoly r = FpPoly::one(base.p);
  base = poly_mod(base, mod);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base), mod);
    base = poly_mod(poly_mul(base, base), mod);
    e >>= 1;
  }
  return r;
}

inline FpPoly poly_derivative(const FpPoly& a) {
  if (a.deg() < 1) return FpPoly::zero(a.p);
  std::vector<i64> c(a.deg(), 0);
  for (int i = 1; i <= a.deg(); ++i) c[i - 1] = mul_mod(a.c[i], i % a.p, a.p);
  return FpPoly(a.p, std::move(c));
}

// extended gcd: returns (g, u, v) with u*a + v*b = g (g monic)
inline std::tuple<FpPoly, FpPoly, FpPoly> poly_xgcd(FpPoly a, FpPoly b) {
  i64 p = a.p;
  FpPoly u0 = FpPoly::one(p), v0 = FpPoly::zero(p);
  FpPoly u1 = FpPoly::zero(p), v1 = FpPoly::one(p);
  while (!b.is_zero()) {
    auto [q, r] = poly_divrem(a, b);
    FpPoly u2 = poly_sub(u0, poly_mul(q, u1));
    FpPoly v2 = poly_sub(v0, poly_mul(q, v1));
    a = b;
    b = r;
    u0 = u1;
    u1 = u2;
    v0 = v1;
    v1 = v2;
  }
  if (!a.is_zero() && a.lead() != 1) {
    i64 il = inv_unit_mod(a.lead(), p);
    a = poly_scale(a, il);
    u0 = poly_scale(u0, il);
    v0 = poly_scale(v0, il);
  }
  return {a, u0, v0};
}

// ---------------------------------------------------------------------------
// factorization over F_p
// ---------------------------------------------------------------------------

namespace detail {

// kernel basis of an n x n F_p matrix acting on row vectors (x -> x*M)
inline std::vector<std::vector<i64>> fp_left_kernel(std::vector<std::vector<i64>> m, int n, i64 p) {
  // row-reduce the transpose trick: solve x*M = 0 by reducing M with an
  // identity tail on rows.
  int rows = static_cast<int>(m.size());
  std::vector<std::vector<i64>> aug(rows, std::vector<i64>(n + rows, 0));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) aug[i][j] = mod_reduce(m[i][j], p);
    aug[i][n + i] = 1;
  }
  int r = 0;
  for (int c = 0; c < n && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (aug[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(aug[piv], aug[r]);
    i64 il = inv_unit_mod(aug[r][c], p);
    for (auto& x : aug[r]) x = mul_mod(x, il, p);
    for (int i = 0; i < rows; ++i) {
      if (i == r || aug[i][c] == 0) continue;
      i64 f = aug[i][c];
      for (int j = 0; j < n + rows; ++j) aug[i][j] = sub_mod(aug[i][j], mul_mod(f, aug[r][j], p), p);
    }
    ++r;
  }
  std::vector<std::vector<i64>> ker;
  for (int i = r; i < rows; ++i) ker.emplace_back(aug[i].begin() + n, aug[i].end());
  return ker;
}

}  // namespace detail

// squarefree part decomposition: returns list of (g_i, multiplicity) with
// f = lead * prod g_i^{m_i}, g_i squarefree pairwise coprime.
inline std::vector<std::pair<FpPoly, int>> squarefree_decomposition(const FpPoly& f0) {
  i64 p = f0.p;
  std::vector<std::pair<FpPoly, int>> out;
  FpPoly f = poly_monic(f0);
  // classical Yun-style in char p with p-th root recursion
  std::function<void(const FpPoly&, int)> rec = [&](const FpPoly& g, int mult) {
    if (g.deg() <= 0) return;
    FpPoly gp = poly_derivative(g);
    if (gp.is_zero()) {
      // g = h(x^p); p-th root by exponent division (coefficients in F_p are
      // their own p-th roots)
      std::vector<i64> hc;
      for (int i = 0; i <= g.deg(); i += static_cast<int>(p)) hc.push_back(g.coeff(i));
      rec(FpPoly(p, hc), mult * static_cast<int>(p));
      return;
    }
    FpPoly c = poly_gcd(g, gp);
    FpPoly w = poly_divrem(g, c).first;  // squarefree part
    // extract each power
    int i = 1;
    FpPoly wcur = w, ccur = c;
    while (wcur.deg() > 0) {
      FpPoly y = poly_gcd(wcur, ccur);
      FpPoly fac = poly_divrem(wcur, y).first;
      if (fac.deg() > 0) out.emplace_back(poly_monic(fac), i * mult);
      wcur = y;
      ccur = poly_divrem(ccur, y).first;
      ++i;
    }
    if (ccur.deg() > 0) rec(ccur, mult);
  };
  rec(f, 1);
  return out;
}

// distinct-degree decomposition of a squarefree monic f: list of (product, d)
inline std::vector<std::pair<FpPoly, int>> distinct_degree(const FpPoly& f) {
  i64 p = f.p;
  std::vector<std::pair<FpPoly, int>> out;
  FpPoly rem = f;
  FpPoly h = FpPoly::x(p);  // x^{p^d} mod f, iterated
  int d = 0;
  while (rem.deg() > 0) {
    ++d;
    if (2 * d > rem.deg()) {
      out.emplace_back(rem, rem.deg());
      break;
    }
    h = poly_powmod(h, static_cast<u64>(p), rem);
    FpPoly g = poly_gcd(poly_sub(h, FpPoly::x(p)), rem);
    if (g.deg() > 0) {
      out.emplace_back(g, d);
      rem = poly_divrem(rem, g).first;
      h = poly_mod(h, rem);
    }
  }
  return out;
}

// Berlekamp splitting of a squarefree monic f into irreducibles,
// deterministic (exhaustive scan over F_p for each subalgebra element).
inline void berlekamp_split(const FpPoly& f, std::vector<FpPoly>& out) {
  i64 p = f.p;
  int n = f.deg();
  if (n <= 1) {
    if (n == 1) out.push_back(f);
    return;
  }
  // Q matrix: row i = x^{p i} mod f
  std::vector<std::vector<i64>> q(n, std::vector<i64>(n, 0));
  FpPoly xp = poly_powmod(FpPoly::x(p), static_cast<u64>(p), f);
  FpPoly cur = FpPoly::one(p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= cur.deg(); ++j) q[i][j] = cur.coeff(j);
    cur = poly_mod(poly_mul(cur, xp), f);
  }
  for (int i = 0; i < n; ++i) q[i][i] = sub_mod(q[i][i], 1, p);
  auto ker = detail::fp_left_kernel(q, n, p);
  if (ker.size() <= 1) {
    out.push_back(f);  // irreducible
    return;
  }
  // split with some kernel element (skip the constants) and c in F_p
  for (const auto& v : ker) {
    FpPoly vp(p, std::vector<i64>(v.begin(), v.end()));
    if (vp.deg() < 1) continue;
    for (i64 c = 0; c < p; ++c) {
      FpPoly g = poly_gcd(poly_sub(vp, FpPoly::constant(p, c)), f);
      if (g.deg() > 0 && g.deg() < f.deg()) {
        berlekamp_split(g, out);
        berlekamp_split(poly_divrem(f, g).first, out);
        return;
      }
    }
  }
  fail(errc::verification_failure, "berlekamp_split: no splitter found");
}

// Cantor-Zassenhaus equal-degree splitting (Las Vegas) for a squarefree
// product of degree-d irreducibles.
inline void equal_degree_split(const FpPoly& f, int d, Rng& rng, std::vector<FpPoly>& out) {
  i64 p = f.p;
  if (f.deg() == d) {
    out.push_back(poly_monic(f));
    return;
  }
  for (;;) {
    // random polynomial of degree < f.deg
    std::vector<i64> rc(static_cast<size_t>(f.deg()), 0);
    for (auto& x : rc) x = static_cast<i64>(rng.below(static_cast<u64>(p)));
    FpPoly r(p, std::move(rc));
    if (r.deg() < 1) continue;
    FpPoly g = poly_gcd(r, f);
    if (g.deg() == 0) {
      if (p == 2) {
        // trace map T(r) = r + r^2 + ... + r^{2^{d-1}}
        FpPoly t = FpPoly::zero(p), cur = poly_mod(r, f);
        for (int i = 0; i < d; ++i) {
          t = poly_add(t, cur);
          cur = poly_mod(poly_mul(cur, cur), f);
        }
        g = poly_gcd(t, f);
      } else {
        u64 e = (ipow(p, d) - 1) / 2;
        FpPoly t = poly_powmod(r, e, f);
        g = poly_gcd(poly_sub(t, FpPoly::one(p)), f);
      }
    }
    if (g.deg() > 0 && g.deg() < f.deg()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(poly_divrem(f, g).first, d, rng, out);
      return;
    }
  }
}

// Full factorization. Returns the monic irreducible factors with multiplicity
// (sorted for determinism); the product times lead(f) equals f.
inline std::vector<std::pair<FpPoly, int>> factor_poly(const FpPoly& f, const Ctx& ctx) {
  require(!f.is_zero(), errc::invalid_argument, "factor_poly: zero polynomial");
  std::map<FpPoly, int> acc;
  for (auto& [sqf, mult] : squarefree_decomposition(f)) {
    if (ctx.deterministic) {
      std::vector<FpPoly> irr;
      berlekamp_split(sqf, irr);
      for (auto& g : irr) acc[poly_monic(g)] += mult;
    } else {
      for (auto& [prod, d] : distinct_degree(sqf)) {
        std::vector<FpPoly> irr;
        equal_degree_split(prod, d, ctx.rng, irr);
        for (auto& g : irr) acc[g] += mult;
      }
    }
  }
  std::vector<std::pair<FpPoly, int>> out(acc.begin(), acc.end());
  // certify: multiply back
  FpPoly prod = FpPoly::constant(f.p, f.lead());
  for (auto& [g, m] : out)
    for (int i = 0; i < m; ++i) prod = poly_mul(prod, g);
  require(prod == f, errc::verification_failure, "factor_poly: product check failed");
  return out;
}

inline bool is_irreducible(const FpPoly& f, const Ctx& ctx) {
  if (f.deg() <= 0) return false;
  auto fac = factor_poly(f, ctx);
  return fac.size() == 1 && fac[0].second == 1;
}

// ---------------------------------------------------------------------------
// GF(p^e)
// ---------------------------------------------------------------------------

struct Field {
  i64 p = 2;
  int e = 1;
  FpPoly f;  // irreducible defining polynomial, monic of degree e

  i64 order() const { return ipow(p, e); }
  bool operator==(const Field& o) const { return p == o.p && f == o.f; }
};

// field element: little-endian residue row of length e
using FElt = std::vector<i64>;

inline FElt f_zero(const Field& k) { return FElt(static_cast<size_t>(k.e), 0); }
inline FElt f_one(const Field& k) {
  FElt r = f_zero(k);
  if (k.e > 0) r[0] = 1;
  return r;
}
inline FElt f_from_scalar(const Field& k, i64 a) {
  FElt r = f_zero(k);
  r[0] = mod_reduce(a, k.p);
  return r;
}
inline bool f_is_zero(const FElt& a) {
  for (i64 x : a)
    if (x != 0) return false;
  return true;
}
inline FElt f_add(const Field& k, const FElt& a, const FElt& b) {
  FElt r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = add_mod(a[i], b[i], k.p);
  return r;
}
inline FElt f_sub(const Field& k, const FElt& a, const FElt& b) {
  FElt r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = sub_mod(a[i], b[i], k.p);
  return r;
}
inline FElt f_neg(const Field& k, const FElt& a) {
  FElt r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = sub_mod(0, a[i], k.p);
  return r;
}
inline FElt f_mul(const Field& k, const FElt& a, const FElt& b) {
  FpPoly pa(k.p, std::vector<i64>(a.begin(), a.end()));
  FpPoly pb(k.p, std::vector<i64>(b.begin(), b.end()));
  FpPoly r = poly_mod(poly_mul(pa, pb), k.f);
  FElt out = f_zero(k);
  for (int i = 0; i <= r.deg(); ++i) out[i] = r.c[i];
  return out;
}
inline FElt f_smul(const Field& k, i64 s, const FElt& a) {
  FElt r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mul_mod(mod_reduce(s, k.p), a[i], k.p);
  return r;
}
inline FElt f_pow(const Field& k, FElt a, u64 n) {
  FElt r = f_one(k);
  while (n) {
    if (n & 1) r = f_mul(k, r, a);
    a = f_mul(k, a, a);
    n >>= 1;
  }
  return r;
}
inline FElt f_inv(const Field& k, const FElt& a) {
  require(!f_is_zero(a), errc::invalid_argument, "f_inv: zero");
  FpPoly pa(k.p, std::vector<i64>(a.begin(), a.end()));
  auto [g, u, v] = poly_xgcd(pa, k.f);
  require(g.deg() == 0, errc::verification_failure, "f_inv: gcd not 1");
  FpPoly r = poly_mod(u, k.f);
  FElt out = f_zero(k);
  for (int i = 0; i <= r.deg(); ++i) out[i] = r.c[i];
  return out;
}
inline FElt f_frob(const Field& k, const FElt& a, int times = 1) {
  FElt r = a;
  for (int i = 0; i < times; ++i) r = f_pow(k, r, static_cast<u64>(k.p));
  return r;
}

// all field elements in coefficient-lexicographic order (small fields)
inline std::vector<FElt> f_enumerate(const Field& k) {
  std::vector<FElt> out;
  require(k.order() <= (i64(1) << 20), errc::bound_exceeded, "field too large to enumerate");
  FElt cur = f_zero(k);
  for (;;) {
    out.push_back(cur);
    int i = 0;
    for (; i < k.e; ++i) {
      if (++cur[i] < k.p) break;
      cur[i] = 0;
    }
    if (i == k.e) break;
  }
  return out;
}

// deterministic field construction: scan monic polynomials of degree e in
// lexicographic (little-endian integer) order for the first irreducible.
inline Field build_field(i64 p, int e, const Ctx& ctx) {
  require(is_prime_u(p) && e >= 1, errc::invalid_argument, "build_field: bad (p,e)");
  if (e == 1) return Field{p, 1, FpPoly(p, {0, 1})};
  i64 count = ipow(p, e);
  for (i64 code = 0; code < count; ++code) {
    std::vector<i64> c(static_cast<size_t>(e) + 1, 0);
    i64 x = code;
    for (int i = 0; i < e; ++i) {
      c[i] = x % p;
      x /= p;
    }
    c[e] = 1;
    FpPoly f(p, c);
    if (is_irreducible(f, ctx)) return Field{p, e, f};
  }
  fail(errc::verification_failure, "build_field: no irreducible polynomial found");
}

// evaluate an F_p polynomial at a field element
inline FElt f_eval_poly(const Field& k, const FpPoly& g, const FElt& a) {
  FElt acc = f_zero(k);
  for (int i = g.deg(); i >= 0; --i) {
    acc = f_mul(k, acc, a);
    acc = f_add(k, acc, f_from_scalar(k, g.c[i]));
  }
  return acc;
}

// minimal polynomial of a field element over F_p
inline FpPoly minimal_polynomial(const Field& k, const FElt& a) {
  // rows 1, a, a^2, ... until dependent
  std::vector<std::vector<i64>> rows;
  FElt cur = f_one(k);
  for (int d = 0; d <= k.e; ++d) {
    rows.push_back(std::vector<i64>(cur.begin(), cur.end()));
    // find dependency u with sum u_i a^i = 0, u_d = 1
    auto ker = detail::fp_left_kernel(rows, k.e, k.p);
    for (auto& u : ker) {
      if (u[d] == 0) continue;
      i64 il = inv_unit_mod(u[d], k.p);
      std::vector<i64> c(d + 1);
      for (int i = 0; i <= d; ++i) c[i] = mul_mod(u[i], il, k.p);
      return FpPoly(k.p, c);
    }
    cur = f_mul(k, cur, a);
  }
  fail(errc::verification_failure, "minimal_polynomial: no dependency found");
}

// ---------------------------------------------------------------------------
// field automorphisms and fixed subfields
// ---------------------------------------------------------------------------

struct FieldAut {
  Field k;
  int power = 0;  // x -> x^{p^power}

  FElt apply(const FElt& a) const { return f_frob(k, a, power); }
  bool is_identity() const { return power % k.e == 0; }
  int order() const {
    int g = std::gcd(power, k.e);
    return k.e / g;
  }
};

struct SubfieldEmbedding {
  Field sub;
  Field big;
  FElt gen_image;  // image in `big` of the canonical generator x of `sub`

  FElt embed(const FElt& a) const {
    FpPoly pa(sub.p, std::vector<i64>(a.begin(), a.end()));
    return f_eval_poly(big, pa, gen_image);
  }
};

// fixed subfield of x -> x^{p^k}: the subfield of order p^{gcd(k,e)}
inline SubfieldEmbedding fixed_subfield(const FieldAut& sigma, const Ctx& ctx) {
  const Field& K = sigma.k;
  int g = std::gcd(sigma.power == 0 ? K.e : sigma.power, K.e);
  Field sub = build_field(K.p, g, ctx);
  // find a root of sub.f among the elements fixed by sigma
  // fixed space: kernel of (frob^power - id) as an F_p-linear map
  std::vector<std::vector<i64>> rows;
  for (int i = 0; i < K.e; ++i) {
    FElt basis = f_zero(K);
    basis[i] = 1;
    FElt img = sigma.apply(basis);
    std::vector<i64> r(img.begin(), img.end());
    r[i] = sub_mod(r[i], 1, K.p);
    rows.push_back(r);
  }
  // kernel of x -> x*(M) with rows as images: transpose convention: we need
  // vectors v with sum v_i (sigma(b_i) - b_i) = 0
  auto ker = detail::fp_left_kernel(rows, K.e, K.p);
  // enumerate the fixed space (size p^g) for a root of sub.f
  require(static_cast<int>(ker.size()) == g, errc::verification_failure, "fixed_subfield: wrong fixed dimension");
  std::vector<i64> idx(ker.size(), 0);
  i64 total = ipow(K.p, static_cast<int>(ker.size()));
  for (i64 code = 0; code < total; ++code) {
    FElt cand = f_zero(K);
    i64 x = code;
    for (size_t i = 0; i < ker.size(); ++i) {
      i64 ci = x % K.p;
      x /= K.p;
      for (int j = 0; j < K.e; ++j) cand[j] = add_mod(cand[j], mul_mod(ci, ker[i][j], K.p), K.p);
    }
    if (sub.e == 1) {
      // prime field: generator is x mod f = the scalar... the canonical
      // generator of F_p is 1; embedding is scalar inclusion
      SubfieldEmbedding se{sub, K, f_one(K)};
      return se;
    }
    if (f_is_zero(f_eval_poly(K, sub.f, cand))) {
      // certify multiplicativity on a few products
      SubfieldEmbedding se{sub, K, cand};
      return se;
    }
  }
  fail(errc::verification_failure, "fixed_subfield: no root of the subfield polynomial in the fixed space");
}

// ---------------------------------------------------------------------------
// matrices over a field
// ---------------------------------------------------------------------------

struct FMat {
  Field k;
  int rows = 0, cols = 0;
  std::vector<FElt> a;

  FMat() = default;
  FMat(const Field& kk, int r, int c) : k(kk), rows(r), cols(c), a(static_cast<size_t>(r) * c, f_zero(kk)) {}

  FElt& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const FElt& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static FMat identity(const Field& k, int n) {
    FMat m(k, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = f_one(k);
    return m;
  }

  static FMat unit(const Field& k, int n, int i, int j) {
    FMat m(k, n, n);
    m.at(i, j) = f_one(k);
    return m;
  }

  bool operator==(const FMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

  bool is_zero() const {
    for (const auto& x : a)
      if (!f_is_zero(x)) return false;
    return true;
  }
};

inline FMat fm_add(const FMat& x, const FMat& y) {
  FMat z = x;
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = f_add(x.k, x.a[i], y.a[i]);
  return z;
}

inline FMat fm_sub(const FMat& x, const FMat& y) {
  FMat z = x;
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = f_sub(x.k, x.a[i], y.a[i]);
  return z;
}

inline FMat fm_mul(const FMat& x, const FMat& y) {
  require(x.cols == y.rows, errc::invalid_argument, "fm_mul: shape mismatch");
  FMat z(x.k, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int kk = 0; kk < x.cols; ++kk) {
      if (f_is_zero(x.at(i, kk))) continue;
      for (int j = 0; j < y.cols; ++j)
        z.at(i, j) = f_add(x.k, z.at(i, j), f_mul(x.k, x.at(i, kk), y.at(kk, j)));
    }
  return z;
}

inline FMat fm_scale(const FMat& x, const FElt& s) {
  FMat z = x;
  for (auto& v : z.a) v = f_mul(x.k, v, s);
  return z;
}

inline FMat fm_transpose(const FMat& x) {
  FMat z(x.k, x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) z.at(j, i) = x.at(i, j);
  return z;
}

inline FMat fm_frob(const FMat& x, int times) {
  FMat z = x;
  for (auto& v : z.a) v = f_frob(x.k, v, times);
  return z;
}

// Gaussian inverse; nullopt when singular
inline std::optional<FMat> fm_inverse(const FMat& m) {
  require(m.rows == m.cols, errc::invalid_argument, "fm_inverse: not square");
  int n = m.rows;
  FMat a = m, inv = FMat::identity(m.k, n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (!f_is_zero(a.at(r, c))) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    for (int j = 0; j < n; ++j) {
      std::swap(a.at(piv, j), a.at(c, j));
      std::swap(inv.at(piv, j), inv.at(c, j));
    }
    FElt il = f_inv(m.k, a.at(c, c));
    for (int j = 0; j < n; ++j) {
      a.at(c, j) = f_mul(m.k, a.at(c, j), il);
      inv.at(c, j) = f_mul(m.k, inv.at(c, j), il);
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || f_is_zero(a.at(r, c))) continue;
      FElt f = a.at(r, c);
      for (int j = 0; j < n; ++j) {
        a.at(r, j) = f_sub(m.k, a.at(r, j), f_mul(m.k, f, a.at(c, j)));
        inv.at(r, j) = f_sub(m.k, inv.at(r, j), f_mul(m.k, f, inv.at(c, j)));
      }
    }
  }
  return inv;
}

}  // namespace centdec
