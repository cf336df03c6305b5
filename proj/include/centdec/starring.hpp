#pragma once

// Structure theory of the adjoint *-ring: reduction mod p, Jacobson radical
// (characteristic-p trace filtration), Wedderburn-Malcev complement, simple
// quotients with effective epimorphisms, *-pairing, Skolem-Noether, and
// idempotent lifting modulo the radical.

#include <algorithm>
#include <map>
#include <optional>

#include "centdec/bilinear.hpp"
#include "centdec/forms.hpp"
#include "centdec/gfield.hpp"

namespace centdec {

// ---------------------------------------------------------------------------
// F_p algebras with structure constants and a faithful matrix representation
// ---------------------------------------------------------------------------

struct FpAlgebra {
  i64 p = 2;
  int dim = 0;
  int nmat = 0;                 // faithful representation size
  std::vector<Mat> rep;         // basis images in M_nmat(F_p)
  std::vector<std::vector<Vec>> mul;  // mul[i][j] = coords of e_i e_j
  Vec unit;                     // coords of 1
  Echelon coord_ech;            // echelon of flattened rep basis (mod p)

  Vec zero() const { return Vec(dim, 0); }

  Vec add(Vec a, const Vec& b) const {
    for (int i = 0; i < dim; ++i) a[i] = add_mod(a[i], b[i], p);
    return a;
  }

  Vec sub(Vec a, const Vec& b) const {
    for (int i = 0; i < dim; ++i) a[i] = sub_mod(a[i], b[i], p);
    return a;
  }

  Vec smul(i64 c, Vec a) const {
    c = mod_reduce(c, p);
    for (int i = 0; i < dim; ++i) a[i] = mul_mod(c, a[i], p);
    return a;
  }

  Vec mulv(const Vec& a, const Vec& b) const {
    Vec out = zero();
    for (int i = 0; i < dim; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < dim; ++j) {
        if (b[j] == 0) continue;
        i64 c = mul_mod(a[i], b[j], p);
        for (int k = 0; k < dim; ++k) out[k] = add_mod(out[k], mul_mod(c, mul[i][j][k], p), p);
      }
    }
    return out;
  }

  bool is_zero(const Vec& a) const {
    for (i64 x : a)
      if (x != 0) return false;
    return true;
  }

  Mat to_matrix(const Vec& a) const {
    Mat m(nmat, nmat);
    for (int i = 0; i < dim; ++i) {
      if (a[i] == 0) continue;
      for (int r = 0; r < nmat; ++r)
        for (int c = 0; c < nmat; ++c) m.at(r, c) = add_mod(m.at(r, c), mul_mod(a[i], rep[i].at(r, c), p), p);
    }
    return m;
  }

  std::optional<Vec> from_matrix(const Mat& m) const {
    Vec flat(static_cast<size_t>(nmat) * nmat);
    for (int r = 0; r < nmat; ++r)
      for (int c = 0; c < nmat; ++c) flat[static_cast<size_t>(r) * nmat + c] = mod_reduce(m.at(r, c), p);
    return solve_left(coord_ech, flat);
  }

  Vec powv(Vec a, i64 e) const {
    Vec r = unit;
    while (e) {
      if (e & 1) r = mulv(r, a);
      a = mulv(a, a);
      e >>= 1;
    }
    return r;
  }
};

namespace detail {

inline FpAlgebra make_fp_algebra(i64 p, std::vector<Mat> rep_basis, int nmat) {
  FpAlgebra a;
  a.p = p;
  a.nmat = nmat;
  a.rep = std::move(rep_basis);
  a.dim = static_cast<int>(a.rep.size());
  std::vector<Vec> flats;
  for (const Mat& m : a.rep) {
    Vec f(static_cast<size_t>(nmat) * nmat);
    for (int r = 0; r < nmat; ++r)
      for (int c = 0; c < nmat; ++c) f[static_cast<size_t>(r) * nmat + c] = mod_reduce(m.at(r, c), p);
    flats.push_back(std::move(f));
  }
  a.coord_ech = howell(flats, nmat * nmat, p, 1);
  require(a.coord_ech.rank() == a.dim, errc::invalid_argument, "make_fp_algebra: basis not independent");
  a.mul.assign(a.dim, std::vector<Vec>(a.dim));
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      Mat prod = mat_mul_mod(a.rep[i], a.rep[j], p);
      auto co = a.from_matrix(prod);
      require(co.has_value(), errc::invalid_argument, "make_fp_algebra: not closed under products");
      a.mul[i][j] = *co;
    }
  auto u = a.from_matrix(Mat::identity(nmat));
  require(u.has_value(), errc::invalid_argument, "make_fp_algebra: identity not in algebra");
  a.unit = *u;
  return a;
}

// canonical echelon basis of a subspace given spanning coordinate vectors
inline std::vector<Vec> fp_span_basis(const std::vector<Vec>& gens, int n, i64 p) {
  if (gens.empty()) return {};
  Echelon e = howell(gens, n, p, 1);
  std::vector<Vec> out;
  for (int i = 0; i < e.rank(); ++i) out.push_back(e.h[i]);
  return out;
}

inline bool fp_in_span(const std::vector<Vec>& basis, const Vec& v, int n, i64 p) {
  if (basis.empty()) {
    for (i64 x : v)
      if (x) return false;
    return true;
  }
  Echelon e = howell(basis, n, p, 1);
  return e.in_rowspace(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// R/pR with the swap involution and effective lifts
// ---------------------------------------------------------------------------

struct FpStarAlgebra {
  FpAlgebra alg;
  Mat star;  // dim x dim over F_p: coords(x*) = coords(x) * star
  std::vector<std::pair<Mat, Mat>> lift;  // integer pair preimage per basis element

  Vec star_of(const Vec& c) const {
    Vec out(alg.dim, 0);
    for (int i = 0; i < alg.dim; ++i) {
      if (c[i] == 0) continue;
      for (int j = 0; j < alg.dim; ++j) out[j] = add_mod(out[j], mul_mod(c[i], star.at(i, j), alg.p), alg.p);
    }
    return out;
  }
};

// pair (F, G) -> block diag(F, G^t) over F_p: a faithful algebra map since
// the second component multiplies in the opposite ring
inline Mat pair_rep_mod_p(const AbelianModule& v, const Mat& f, const Mat& g, i64 p) {
  int s = v.rank();
  Mat m(2 * s, 2 * s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      m.at(i, j) = mod_reduce(f.at(i, j), p);
      m.at(s + i, s + j) = mod_reduce(g.at(j, i), p);
    }
  return m;
}

inline FpStarAlgebra reduce_mod_p(const StarRing& r) {
  i64 p = r.v.p;
  int s = r.v.rank();
  // select a basis of R/pR among the images of the R-basis
  std::vector<Vec> flats;
  for (auto& [f, g] : r.basis) {
    Mat m = pair_rep_mod_p(r.v, f, g, p);
    Vec fl(static_cast<size_t>(2 * s) * (2 * s));
    for (int a = 0; a < 2 * s; ++a)
      for (int b = 0; b < 2 * s; ++b) fl[static_cast<size_t>(a) * 2 * s + b] = m.at(a, b);
    flats.push_back(fl);
  }
  Echelon sel = flats.empty() ? Echelon{} : howell(flats, 4 * s * s, p, 1);
  FpStarAlgebra out;
  std::vector<Mat> rep_basis;
  std::vector<std::pair<Mat, Mat>> lifts;
  for (int i = 0; i < sel.rank(); ++i) {
    // transform row i gives integer coefficients over the R basis
    std::pair<Mat, Mat> acc{Mat(s, s), Mat(s, s)};
    bool first = true;
    for (int j = 0; j < sel.nsrc; ++j) {
      if (sel.t[i][j] == 0) continue;
      auto term = r.smul(sel.t[i][j], r.basis[j]);
      acc = first ? term : r.add(acc, term);
      first = false;
    }
    lifts.push_back(acc);
    rep_basis.push_back(pair_rep_mod_p(r.v, acc.first, acc.second, p));
  }
  out.alg = detail::make_fp_algebra(p, rep_basis, 2 * s);
  out.lift = std::move(lifts);
  out.star = Mat(out.alg.dim, out.alg.dim);
  for (int i = 0; i < out.alg.dim; ++i) {
    Mat sw = pair_rep_mod_p(r.v, out.lift[i].second, out.lift[i].first, p);
    auto co = out.alg.from_matrix(sw);
    require(co.has_value(), errc::verification_failure, "reduce_mod_p: swap does not preserve R/pR");
    for (int j = 0; j < out.alg.dim; ++j) out.star.at(i, j) = (*co)[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Jacobson radical via the characteristic-p trace filtration: descend through
// the kernels of g_i(x,y) = p^{-i} tr((xy)^{p^i}) mod p on integer lifts.
// ---------------------------------------------------------------------------

inline std::vector<Vec> jacobson_radical(const FpAlgebra& a) {
  i64 p = a.p;
  std::vector<Vec> cur;
  for (int i = 0; i < a.dim; ++i) {
    Vec e = a.zero();
    e[i] = 1;
    cur.push_back(e);
  }
  for (int level = 0;; ++level) {
    if (cur.empty()) break;
    i64 mod = ipow(p, level + 1);
    auto trace_form = [&](const Vec& x, const Vec& y) {
      // integer-lift product, power p^level, trace / p^level mod p
      Mat mx = a.to_matrix(x), my = a.to_matrix(y);
      Mat prod = mat_mul_mod(mx, my, mod);
      Mat pw = Mat::identity(a.nmat);
      i64 e = ipow(p, level);
      Mat base = prod;
      while (e) {
        if (e & 1) pw = mat_mul_mod(pw, base, mod);
        base = mat_mul_mod(base, base, mod);
        e >>= 1;
      }
      i64 tr = 0;
      for (int d = 0; d < a.nmat; ++d) tr = add_mod(tr, pw.at(d, d), mod);
      require(tr % ipow(p, level) == 0, errc::verification_failure, "radical: trace filtration not divisible");
      return (tr / ipow(p, level)) % p;
    };
    int m = static_cast<int>(cur.size());
    std::vector<Vec> gram(m, Vec(m, 0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) gram[i][j] = trace_form(cur[i], cur[j]);
    Echelon ge = howell(gram, m, p, 1);
    std::vector<Vec> next;
    for (const Vec& k : ge.kernel) {
      Vec v = a.zero();
      for (int i = 0; i < m; ++i)
        if (k[i] != 0) v = a.add(v, a.smul(k[i], cur[i]));
      next.push_back(v);
    }
    cur = detail::fp_span_basis(next, a.dim, p);
    if (ipow(p, level) >= a.nmat) break;
  }
  // verification: two-sided ideal and nilpotent
  for (const Vec& x : cur)
    for (int i = 0; i < a.dim; ++i) {
      Vec e = a.zero();
      e[i] = 1;
      require(detail::fp_in_span(cur, a.mulv(x, e), a.dim, p) && detail::fp_in_span(cur, a.mulv(e, x), a.dim, p),
              errc::verification_failure, "radical: not an ideal");
    }
  // J^k = 0 check by powering the ideal
  std::vector<Vec> pow = cur;
  for (int iter = 0; iter < a.dim + 1 && !pow.empty(); ++iter) {
    std::vector<Vec> nxt;
    for (const Vec& x : pow)
      for (const Vec& y : cur) {
        Vec z = a.mulv(x, y);
        if (!a.is_zero(z)) nxt.push_back(z);
      }
    pow = detail::fp_span_basis(nxt, a.dim, p);
  }
  require(pow.empty(), errc::verification_failure, "radical: computed ideal not nilpotent");
  return cur;
}

// ideal powers J, J^2, ... until zero (bases)
inline std::vector<std::vector<Vec>> ideal_powers(const FpAlgebra& a, const std::vector<Vec>& j) {
  std::vector<std::vector<Vec>> out;
  std::vector<Vec> cur = j;
  while (!cur.empty()) {
    out.push_back(cur);
    std::vector<Vec> nxt;
    for (const Vec& x : cur)
      for (const Vec& y : j) nxt.push_back(a.mulv(x, y));
    cur = detail::fp_span_basis(nxt, a.dim, a.p);
    require(out.size() <= static_cast<size_t>(a.dim) + 1, errc::verification_failure, "ideal_powers: runaway");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wedderburn-Malcev complement: subalgebra S with A = S ⊕ J(A)
// ---------------------------------------------------------------------------

inline std::vector<Vec> wedderburn_complement(const FpAlgebra& a, const std::vector<Vec>& rad) {
  i64 p = a.p;
  if (rad.empty()) {
    std::vector<Vec> all;
    for (int i = 0; i < a.dim; ++i) {
      Vec e = a.zero();
      e[i] = 1;
      all.push_back(e);
    }
    return detail::fp_span_basis(all, a.dim, p);
  }
  auto powers = ideal_powers(a, rad);
  // initial linear complement of J
  std::vector<Vec> s_basis;
  {
    std::vector<Vec> rows = rad;
    Echelon re = howell(rows, a.dim, p, 1);
    for (int i = 0; i < a.dim; ++i) {
      Vec e = a.zero();
      e[i] = 1;
      if (!re.in_rowspace(e)) {
        rows.push_back(e);
        Echelon re2 = howell(rows, a.dim, p, 1);
        if (re2.rank() > re.rank()) {
          s_basis.push_back(e);
          re = re2;
        } else {
          rows.pop_back();
        }
      }
    }
  }
  int ds = static_cast<int>(s_basis.size());
  // lift along J ⊇ J^2 ⊇ J^4 ...: at stage m, products close modulo J^m;
  // correct by a linear map h: S -> J^{m/2} (mod J^m) solving the cocycle
  // condition, then modular products close modulo J^m.
  size_t stage = 1;  // s_basis closes modulo J^{stage}
  while (stage <= powers.size()) {
    size_t half = stage;
    stage = std::min(stage * 2, powers.size() + 1);
    const std::vector<Vec>& jh = powers[half - 1];          // J^{half}... basis of J^{half}
    std::vector<Vec> jm = stage <= powers.size() ? powers[stage - 1] : std::vector<Vec>{};  // J^{stage}
    // coordinates: correction space C := J^{half} / J^{stage}
    // pick coset basis of C inside J^{half}
    std::vector<Vec> cb;
    {
      std::vector<Vec> rows = jm;
      Echelon re = howell(rows.empty() ? std::vector<Vec>{Vec(a.dim, 0)} : rows, a.dim, p, 1);
      for (const Vec& x : jh)
        if (!re.in_rowspace(x)) {
          rows.push_back(x);
          Echelon re2 = howell(rows, a.dim, p, 1);
          if (re2.rank() > re.rank()) {
            cb.push_back(x);
            re = re2;
          } else {
            rows.pop_back();
          }
        }
    }
    int dc = static_cast<int>(cb.size());
    if (dc == 0) continue;
    // projections onto S-part and C-part modulo J^{stage}
    std::vector<Vec> full_rows;
    for (const Vec& x : s_basis) full_rows.push_back(x);
    for (const Vec& x : cb) full_rows.push_back(x);
    for (const Vec& x : jm) full_rows.push_back(x);
    Echelon fe = howell(full_rows, a.dim, p, 1);
    auto decompose = [&](const Vec& x) {
      // coefficients over [S | C | J^{stage}]
      Vec coef;
      Vec res = fe.sift(x, &coef);
      require(detail::row_zero(res), errc::verification_failure, "wedderburn: element escapes A");
      // translate echelon coefficients back to source rows
      Vec src(full_rows.size(), 0);
      for (size_t r = 0; r < coef.size(); ++r)
        if (coef[r]) {
          for (size_t jx = 0; jx < full_rows.size(); ++jx)
            src[jx] = add_mod(src[jx], mul_mod(coef[r], fe.t[r][jx], p), p);
        }
      return src;
    };
    // unknowns: h[k][c]: image of s_k in C (dc coords each). equations per (i,j):
    // d_ij + s_i h_j + h_i s_j - h(prod coeffs) ≡ 0 mod J^{stage}
    int nunk = ds * dc;
    std::vector<Vec> rows(nunk, Vec(static_cast<size_t>(ds) * ds * dc, 0));
    Vec rhs(static_cast<size_t>(ds) * ds * dc, 0);
    for (int i = 0; i < ds; ++i)
      for (int j = 0; j < ds; ++j) {
        Vec prod = a.mulv(s_basis[i], s_basis[j]);
        Vec dec = decompose(prod);
        // defect in C coordinates, and s-coefficients of the product
        int eq0 = (i * ds + j) * dc;
        for (int c = 0; c < dc; ++c) rhs[eq0 + c] = sub_mod(0, dec[ds + c], p);
        // h(prod) term: -sum_k dec_s[k] h[k];  s_i h_j term: +proj_C(s_i * cb[c]) etc.
        for (int k = 0; k < ds; ++k) {
          i64 ck = dec[k];
          if (ck == 0) continue;
          for (int c = 0; c < dc; ++c) {
            int unk = k * dc + c;
            rows[unk][eq0 + c] = sub_mod(rows[unk][eq0 + c], ck, p);
          }
        }
        for (int c = 0; c < dc; ++c) {
          // s_i * cb[c] contributes to h_j-unknowns (j slot): coefficient of
          // equation (i,j) from unknown h[j][c]: proj_C(s_i cb[c])
          Vec left = decompose(a.mulv(s_basis[i], cb[c]));
          Vec right = decompose(a.mulv(cb[c], s_basis[j]));
          for (int c2 = 0; c2 < dc; ++c2) {
            int unkj = j * dc + c;
            rows[unkj][eq0 + c2] = add_mod(rows[unkj][eq0 + c2], left[ds + c2], p);
            int unki = i * dc + c;
            rows[unki][eq0 + c2] = add_mod(rows[unki][eq0 + c2], right[ds + c2], p);
          }
        }
      }
    Echelon se = howell(rows, static_cast<int>(rhs.size()), p, 1);
    auto sol = solve_left(se, rhs);
    require(sol.has_value(), errc::verification_failure, "wedderburn: cocycle system unsolvable");
    for (int k = 0; k < ds; ++k) {
      Vec upd = s_basis[k];
      for (int c = 0; c < dc; ++c)
        if ((*sol)[k * dc + c] != 0) upd = a.add(upd, a.smul((*sol)[k * dc + c], cb[c]));
      s_basis[k] = upd;
    }
  }
  s_basis = detail::fp_span_basis(s_basis, a.dim, p);
  // verify: closure and complement
  Echelon se = howell(s_basis, a.dim, p, 1);
  for (const Vec& x : s_basis)
    for (const Vec& y : s_basis)
      require(se.in_rowspace(a.mulv(x, y)), errc::verification_failure, "wedderburn: complement not closed");
  std::vector<Vec> uni = s_basis;
  uni.insert(uni.end(), rad.begin(), rad.end());
  require(static_cast<int>(detail::fp_span_basis(uni, a.dim, p).size()) == a.dim &&
              static_cast<int>(s_basis.size()) + static_cast<int>(rad.size()) == a.dim,
          errc::verification_failure, "wedderburn: not a direct complement");
  require(se.in_rowspace(a.unit), errc::verification_failure, "wedderburn: unit not in complement");
  return s_basis;
}

// ---------------------------------------------------------------------------
// subalgebras as algebras, centers, minimal polynomials inside algebras
// ---------------------------------------------------------------------------

// subalgebra on given coordinate basis, with its own structure constants;
// carries the embedding back to the parent coordinates
struct SubAlgebra {
  FpAlgebra alg;
  std::vector<Vec> embed;  // basis in parent coords

  Vec to_parent(const FpAlgebra& parent, const Vec& c) const {
    Vec out = parent.zero();
    for (size_t i = 0; i < embed.size(); ++i)
      if (c[i] != 0) out = parent.add(out, parent.smul(c[i], embed[i]));
    return out;
  }

  std::optional<Vec> from_parent(const FpAlgebra& parent, const Vec& x) const {
    // solve x over the embedded basis
    std::vector<Vec> rows = embed;
    Echelon e = howell(rows, parent.dim, parent.p, 1);
    Vec coef;
    Vec res = e.sift(x, &coef);
    if (!detail::row_zero(res)) return std::nullopt;
    Vec src(embed.size(), 0);
    for (size_t r = 0; r < coef.size(); ++r)
      if (coef[r])
        for (size_t j = 0; j < embed.size(); ++j) src[j] = add_mod(src[j], mul_mod(coef[r], e.t[r][j], parent.p), parent.p);
    return src;
  }
};

// unit: identity element of the subalgebra (must be supplied; may differ from
// the parent unit, e.g. a corner algebra eAe)
inline SubAlgebra subalgebra(const FpAlgebra& parent, std::vector<Vec> basis) {
  SubAlgebra s;
  s.embed = detail::fp_span_basis(basis, parent.dim, parent.p);
  std::vector<Mat> rep;
  for (const Vec& b : s.embed) rep.push_back(parent.to_matrix(b));
  // the subalgebra may not contain the parent identity; extend the rep with a
  // synthetic identity block so make_fp_algebra's unit solve works on eAe.
  // Instead: build directly.
  FpAlgebra a;
  a.p = parent.p;
  a.nmat = parent.nmat;
  a.rep = rep;
  a.dim = static_cast<int>(rep.size());
  std::vector<Vec> flats;
  for (const Mat& m : a.rep) {
    Vec f(static_cast<size_t>(a.nmat) * a.nmat);
    for (int r = 0; r < a.nmat; ++r)
      for (int c = 0; c < a.nmat; ++c) f[static_cast<size_t>(r) * a.nmat + c] = mod_reduce(m.at(r, c), a.p);
    flats.push_back(std::move(f));
  }
  a.coord_ech = flats.empty() ? Echelon{} : howell(flats, a.nmat * a.nmat, a.p, 1);
  require(a.coord_ech.rank() == a.dim, errc::verification_failure, "subalgebra: dependent basis");
  a.mul.assign(a.dim, std::vector<Vec>(a.dim));
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      auto co = a.from_matrix(mat_mul_mod(a.rep[i], a.rep[j], a.p));
      require(co.has_value(), errc::verification_failure, "subalgebra: not closed");
      a.mul[i][j] = *co;
    }
  a.unit = a.zero();  // set by callers that know the identity
  s.alg = std::move(a);
  return s;
}

// center of an algebra (as coordinate basis)
inline std::vector<Vec> center_of(const FpAlgebra& a) {
  // kernel of x -> (x e_i - e_i x)_i
  std::vector<Vec> rows(a.dim, Vec(static_cast<size_t>(a.dim) * a.dim, 0));
  for (int x = 0; x < a.dim; ++x) {
    Vec ex = a.zero();
    ex[x] = 1;
    for (int i = 0; i < a.dim; ++i) {
      Vec ei = a.zero();
      ei[i] = 1;
      Vec d = a.sub(a.mulv(ex, ei), a.mulv(ei, ex));
      for (int k = 0; k < a.dim; ++k) rows[x][static_cast<size_t>(i) * a.dim + k] = d[k];
    }
  }
  Echelon e = howell(rows, a.dim * a.dim, a.p, 1);
  std::vector<Vec> out;
  for (const Vec& k : e.kernel) out.push_back(k);
  return detail::fp_span_basis(out, a.dim, a.p);
}

// minimal polynomial of y relative to a unit u (u acts as 1): least monic
// f with f(y) = 0 where the constant term is c*u.
inline FpPoly algebra_min_poly(const FpAlgebra& a, const Vec& u, const Vec& y) {
  std::vector<Vec> rows;
  Vec cur = u;
  for (int d = 0; d <= a.dim + 1; ++d) {
    rows.push_back(cur);
    Echelon e = howell(rows, a.dim, a.p, 1);
    if (e.rank() < static_cast<int>(rows.size())) {
      // dependency: express cur over previous rows
      rows.pop_back();
      Echelon e2 = howell(rows, a.dim, a.p, 1);
      Vec coef;
      Vec res = e2.sift(cur, &coef);
      require(detail::row_zero(res), errc::verification_failure, "algebra_min_poly: dependency not resolvable");
      Vec src(rows.size(), 0);
      for (size_t r = 0; r < coef.size(); ++r)
        if (coef[r])
          for (size_t j = 0; j < rows.size(); ++j) src[j] = add_mod(src[j], mul_mod(coef[r], e2.t[r][j], a.p), a.p);
      std::vector<i64> c(d + 1, 0);
      for (int i = 0; i < d; ++i) c[i] = sub_mod(0, src[i], a.p);
      c[d] = 1;
      return FpPoly(a.p, c);
    }
    cur = a.mulv(cur, y);
  }
  fail(errc::verification_failure, "algebra_min_poly: no dependency found");
}

// evaluate an F_p polynomial at y with the constant term scaled by u
inline Vec algebra_eval_poly(const FpAlgebra& a, const Vec& u, const Vec& y, const FpPoly& f) {
  Vec acc = a.zero();
  for (int i = f.deg(); i >= 0; --i) {
    acc = a.mulv(acc, y);
    acc = a.add(acc, a.smul(f.c[i], u));
  }
  return acc;
}

// algebra from a structure-constant table (right regular representation);
// associativity and the unit law are verified on basis triples
inline FpAlgebra algebra_from_table(i64 p, std::vector<std::vector<Vec>> mul, Vec unit) {
  FpAlgebra a;
  a.p = p;
  a.dim = static_cast<int>(unit.size());
  a.nmat = a.dim;
  a.mul = std::move(mul);
  a.unit = std::move(unit);
  for (int i = 0; i < a.dim; ++i) {
    Mat m(a.dim, a.dim);
    for (int r = 0; r < a.dim; ++r) {
      Vec er = a.zero();
      er[r] = 1;
      Vec prod = a.mulv(er, [&] {
        Vec ei = a.zero();
        ei[i] = 1;
        return ei;
      }());
      for (int c = 0; c < a.dim; ++c) m.at(r, c) = prod[c];
    }
    a.rep.push_back(m);
  }
  std::vector<Vec> flats;
  for (const Mat& m : a.rep) {
    Vec f(static_cast<size_t>(a.nmat) * a.nmat);
    for (int r = 0; r < a.nmat; ++r)
      for (int c = 0; c < a.nmat; ++c) f[static_cast<size_t>(r) * a.nmat + c] = m.at(r, c);
    flats.push_back(std::move(f));
  }
  a.coord_ech = flats.empty() ? Echelon{} : howell(flats, a.nmat * a.nmat, p, 1);
  // unit law and associativity on basis triples
  for (int i = 0; i < a.dim; ++i) {
    Vec ei = a.zero();
    ei[i] = 1;
    require(a.mulv(a.unit, ei) == ei && a.mulv(ei, a.unit) == ei, errc::invalid_argument,
            "algebra_from_table: unit law fails");
  }
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      for (int k = 0; k < a.dim; ++k) {
        Vec ei = a.zero(), ej = a.zero(), ek = a.zero();
        ei[i] = 1;
        ej[j] = 1;
        ek[k] = 1;
        require(a.mulv(a.mulv(ei, ej), ek) == a.mulv(ei, a.mulv(ej, ek)), errc::invalid_argument,
                "algebra_from_table: associativity fails");
      }
  require(a.coord_ech.rank() == a.dim, errc::invalid_argument, "algebra_from_table: regular rep not faithful");
  return a;
}

// quotient A / I for a two-sided ideal with coset-basis projection
struct QuotientAlgebra {
  FpAlgebra alg;
  std::vector<Vec> coset_basis;  // representatives in A-coords
  std::vector<Vec> ideal;        // echelon basis of I

  Vec project(const FpAlgebra& parent, const Vec& x) const {
    // coefficients of x over [coset_basis | ideal]
    std::vector<Vec> rows = coset_basis;
    rows.insert(rows.end(), ideal.begin(), ideal.end());
    Echelon e = howell(rows, parent.dim, parent.p, 1);
    Vec coef;
    Vec res = e.sift(x, &coef);
    require(detail::row_zero(res), errc::verification_failure, "QuotientAlgebra::project: not in A");
    Vec src(rows.size(), 0);
    for (size_t r = 0; r < coef.size(); ++r)
      if (coef[r])
        for (size_t j = 0; j < rows.size(); ++j) src[j] = add_mod(src[j], mul_mod(coef[r], e.t[r][j], parent.p), parent.p);
    return Vec(src.begin(), src.begin() + coset_basis.size());
  }
};

inline QuotientAlgebra quotient_algebra(const FpAlgebra& a, const std::vector<Vec>& ideal) {
  QuotientAlgebra q;
  q.ideal = detail::fp_span_basis(ideal, a.dim, a.p);
  // coset basis: complete the ideal to a basis of A
  std::vector<Vec> rows = q.ideal;
  Echelon re = rows.empty() ? Echelon{} : howell(rows, a.dim, a.p, 1);
  for (int i = 0; i < a.dim; ++i) {
    Vec e = a.zero();
    e[i] = 1;
    bool inside = rows.empty() ? false : re.in_rowspace(e);
    if (!inside) {
      rows.push_back(e);
      Echelon re2 = howell(rows, a.dim, a.p, 1);
      if (re2.rank() > re.rank()) {
        q.coset_basis.push_back(e);
        re = re2;
      } else {
        rows.pop_back();
      }
    }
  }
  int d = static_cast<int>(q.coset_basis.size());
  std::vector<std::vector<Vec>> mul(d, std::vector<Vec>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mul[i][j] = q.project(a, a.mulv(q.coset_basis[i], q.coset_basis[j]));
  Vec unit = q.project(a, a.unit);
  q.alg = algebra_from_table(a.p, mul, unit);
  return q;
}

// ---------------------------------------------------------------------------
// splitting a semisimple algebra into simple blocks with explicit M_n(K)
// coordinates (regular-module chop)
// ---------------------------------------------------------------------------

namespace detail {

// orthogonal idempotent refinement of e along a central element y of eAe
inline std::vector<Vec> crt_split(const FpAlgebra& a, const Vec& e, const Vec& y, const Ctx& ctx) {
  FpPoly mu = algebra_min_poly(a, e, y);
  auto fac = factor_poly(mu, ctx);
  for (auto& [g, m] : fac)
    require(m == 1, errc::verification_failure, "crt_split: non-squarefree minimal polynomial in semisimple part");
  if (fac.size() <= 1) return {e};
  std::vector<Vec> out;
  Vec sum = a.zero();
  for (auto& [g, m] : fac) {
    FpPoly rest = poly_divrem(mu, g).first;
    auto [gg, u, v] = poly_xgcd(rest, g);
    require(gg.deg() == 0, errc::verification_failure, "crt_split: factors not coprime");
    // idempotent: (rest * u)(y), constant acting as e
    FpPoly pe = poly_mod(poly_mul(rest, u), mu);
    Vec ei = algebra_eval_poly(a, e, y, pe);
    require(a.mulv(ei, ei) == ei, errc::verification_failure, "crt_split: not idempotent");
    out.push_back(ei);
    sum = a.add(sum, ei);
  }
  require(sum == e, errc::verification_failure, "crt_split: idempotents do not sum to e");
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out.size(); ++j)
      if (i != j)
        require(a.is_zero(a.mulv(out[i], out[j])), errc::verification_failure, "crt_split: not orthogonal");
  return out;
}

// enumerate elements of a subspace (coords over `basis`) in lexicographic
// coefficient order, excluding zero
template <typename F>
inline void scan_subspace(const FpAlgebra& a, const std::vector<Vec>& basis, F&& body, i64 guard = i64(1) << 20) {
  i64 total = 1;
  for (size_t i = 0; i < basis.size(); ++i) {
    total *= a.p;
    require(total <= guard, errc::bound_exceeded, "scan_subspace: too large");
  }
  for (i64 code = 1; code < total; ++code) {
    Vec x = a.zero();
    i64 c = code;
    for (size_t i = 0; i < basis.size(); ++i) {
      i64 ci = c % a.p;
      c /= a.p;
      if (ci) x = a.add(x, a.smul(ci, basis[i]));
    }
    if (body(x)) return;
  }
}

}  // namespace detail

// one simple block of the semisimple part, with explicit M_n(K) coordinates
struct SimpleFactor {
  Vec e;                 // central primitive idempotent (bar coords)
  SubAlgebra block;      // e*Sbar as an algebra (embedded in bar coords)
  Field k;               // canonical copy of the center
  Vec k_gen;             // block coords of the canonical generator image
  int n = 1;             // block ≅ M_n(k)
  std::vector<Vec> wbasis;  // K-basis of the irreducible right module W = f*block
  Echelon wsolve;           // echelon of {gen^t w_j} for K-coordinate solves
  std::vector<FMat> phi_fwd;  // phi of each block basis element

  // K-action on a W-element (block coords)
  Vec kmul(const FpAlgebra& alg, const FElt& kappa, const Vec& w) const {
    Vec out = alg.zero();
    Vec cur = w;
    for (int t = 0; t < k.e; ++t) {
      if (kappa[t] != 0) out = alg.add(out, alg.smul(kappa[t], cur));
      cur = alg.mulv(k_gen, cur);
    }
    return out;
  }

  FMat phi(const Vec& block_coords) const {
    FMat m(k, n, n);
    for (int i = 0; i < static_cast<int>(block.alg.dim); ++i) {
      if (block_coords[i] == 0) continue;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
          m.at(r, c) = f_add(k, m.at(r, c), f_smul(k, block_coords[i], phi_fwd[i].at(r, c)));
    }
    return m;
  }

  // inverse: FMat -> block coords (solve over the phi images)
  Vec phi_inv(const FMat& t) const {
    // flatten target over F_p
    int fl = n * n * k.e;
    Vec target(fl, 0);
    int idx = 0;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        for (int b = 0; b < k.e; ++b) target[idx++] = t.at(r, c)[b];
    auto sol = solve_left(phi_ech, target);
    require(sol.has_value(), errc::verification_failure, "SimpleFactor::phi_inv: not in image");
    return *sol;
  }

  Echelon phi_ech;  // echelon of flattened phi_fwd for inversion
};

// decomposition data for R: mod-p algebra, radical, complement, blocks
struct StarStructure {
  StarRing ring;
  FpStarAlgebra bar;
  std::vector<Vec> rad;    // J(Rbar) basis
  std::vector<Vec> sbar;   // Wedderburn complement basis
  Echelon sj_ech;          // [sbar | rad] echelon for the tau projection
  std::vector<SimpleFactor> factors;

  // tau: bar coords -> semisimple part (coefficients over sbar, returned in
  // bar coords), the projection along J
  Vec tau(const Vec& x) const {
    Vec coef;
    Vec res = sj_ech.sift(x, &coef);
    require(detail::row_zero(res), errc::verification_failure, "tau: element escapes the algebra");
    Vec src(sj_ech.nsrc, 0);
    for (size_t r = 0; r < coef.size(); ++r)
      if (coef[r])
        for (int j = 0; j < sj_ech.nsrc; ++j) src[j] = add_mod(src[j], mul_mod(coef[r], sj_ech.t[r][j], bar.alg.p), bar.alg.p);
    Vec out = bar.alg.zero();
    for (size_t i = 0; i < sbar.size(); ++i)
      if (src[i] != 0) out = bar.alg.add(out, bar.alg.smul(src[i], sbar[i]));
    return out;
  }

  // pi_i: bar coords -> M_n(K_i)
  FMat pi(int i, const Vec& x) const {
    const SimpleFactor& f = factors[i];
    Vec s = tau(x);
    Vec blk = bar.alg.mulv(s, f.e);
    auto co = f.block.from_parent(bar.alg, blk);
    require(co.has_value(), errc::verification_failure, "pi: projection escapes the block");
    return f.phi(*co);
  }

  // block-supported bar preimage of t under pi_i
  Vec pi_preimage_bar(int i, const FMat& t) const {
    const SimpleFactor& f = factors[i];
    return f.block.to_parent(bar.alg, f.phi_inv(t));
  }

  // integer pair lift of a bar element
  std::pair<Mat, Mat> lift_pair(const Vec& barco) const {
    auto acc = ring.zero();
    for (int i = 0; i < bar.alg.dim; ++i)
      if (barco[i] != 0) acc = ring.add(acc, ring.smul(barco[i], bar.lift[i]));
    return acc;
  }

  // bar coordinates of an R element
  Vec bar_of(const std::pair<Mat, Mat>& x) const {
    Mat m = pair_rep_mod_p(ring.v, x.first, x.second, ring.v.p);
    auto co = bar.alg.from_matrix(m);
    require(co.has_value(), errc::verification_failure, "bar_of: element not in R/pR");
    return *co;
  }
};

inline StarStructure star_structure(const StarRing& r, const Ctx& ctx) {
  StarStructure st;
  st.ring = r;
  st.bar = reduce_mod_p(r);
  const FpAlgebra& A = st.bar.alg;
  st.rad = jacobson_radical(A);
  // verify the radical of the quotient is zero and that J is a *-ideal
  {
    QuotientAlgebra qa = quotient_algebra(A, st.rad);
    require(jacobson_radical(qa.alg).empty(), errc::verification_failure, "radical: quotient not semisimple");
    for (const Vec& x : st.rad)
      require(detail::fp_in_span(st.rad, st.bar.star_of(x), A.dim, A.p), errc::verification_failure,
              "radical: not a *-ideal");
  }
  st.sbar = wedderburn_complement(A, st.rad);
  {
    std::vector<Vec> rows = st.sbar;
    rows.insert(rows.end(), st.rad.begin(), st.rad.end());
    st.sj_ech = howell(rows, A.dim, A.p, 1);
  }
  // S as a subalgebra; split by central primitive idempotents
  SubAlgebra ss = subalgebra(A, st.sbar);
  {
    auto u = ss.from_parent(A, [&] {
      Vec acc = A.zero();
      // project the unit into S along J: tau(1)
      Vec coef;
      Vec res = st.sj_ech.sift(A.unit, &coef);
      require(detail::row_zero(res), errc::verification_failure, "star_structure: unit escapes");
      Vec src(st.sj_ech.nsrc, 0);
      for (size_t r2 = 0; r2 < coef.size(); ++r2)
        if (coef[r2])
          for (int j = 0; j < st.sj_ech.nsrc; ++j)
            src[j] = add_mod(src[j], mul_mod(coef[r2], st.sj_ech.t[r2][j], A.p), A.p);
      for (size_t i = 0; i < st.sbar.size(); ++i)
        if (src[i] != 0) acc = A.add(acc, A.smul(src[i], st.sbar[i]));
      return acc;
    }());
    require(u.has_value(), errc::verification_failure, "star_structure: unit not in complement");
    ss.alg.unit = *u;
    // the complement contains 1 exactly (checked in wedderburn_complement)
    require(ss.to_parent(A, ss.alg.unit) == A.unit, errc::verification_failure, "star_structure: unit mismatch");
  }
  std::vector<Vec> zs = center_of(ss.alg);
  std::vector<Vec> idems{ss.alg.unit};
  for (const Vec& z : zs) {
    std::vector<Vec> next;
    for (const Vec& e : idems) {
      Vec y = ss.alg.mulv(e, ss.alg.mulv(z, e));
      auto split = detail::crt_split(ss.alg, e, y, ctx);
      next.insert(next.end(), split.begin(), split.end());
    }
    idems = std::move(next);
  }
  // build each simple factor
  for (const Vec& e_ss : idems) {
    SimpleFactor f;
    f.e = ss.to_parent(A, e_ss);
    // block basis: e * sbar (two-sided: e central in S)
    std::vector<Vec> bb;
    for (const Vec& s : st.sbar) bb.push_back(A.mulv(f.e, A.mulv(s, f.e)));
    bb = detail::fp_span_basis(bb, A.dim, A.p);
    f.block = subalgebra(A, bb);
    auto ub = f.block.from_parent(A, f.e);
    require(ub.has_value(), errc::verification_failure, "factor: identity not in block");
    f.block.alg.unit = *ub;
    const FpAlgebra& B = f.block.alg;
    // center = a field K
    std::vector<Vec> zb = center_of(B);
    int kd = static_cast<int>(zb.size());
    f.k = build_field(A.p, kd, ctx);
    if (kd == 1) {
      f.k_gen = B.zero();
    } else {
      // find a root of the canonical defining polynomial in the center
      bool found = false;
      detail::scan_subspace(B, zb, [&](const Vec& cand) {
        if (!B.is_zero(algebra_eval_poly(B, B.unit, cand, f.k.f))) return false;
        f.k_gen = cand;
        found = true;
        return true;
      });
      require(found, errc::verification_failure, "factor: no root of the field polynomial in the center");
    }
    // n from dim = n^2 * kd
    int nsq = B.dim / kd;
    f.n = 1;
    while (f.n * f.n < nsq) ++f.n;
    require(f.n * f.n == nsq && nsq * kd == B.dim, errc::verification_failure, "factor: dimension not n^2 [K:F_p]");
    // primitive idempotent by corner splitting
    Vec fid = B.unit;
    for (;;) {
      std::vector<Vec> corner;
      for (int i = 0; i < B.dim; ++i) {
        Vec ei = B.zero();
        ei[i] = 1;
        corner.push_back(B.mulv(fid, B.mulv(ei, fid)));
      }
      corner = detail::fp_span_basis(corner, B.dim, B.p);
      if (static_cast<int>(corner.size()) == kd) break;  // corner = K f: primitive
      // find a splitter in the corner
      bool split_done = false;
      auto try_split = [&](const Vec& y) {
        FpPoly mu = algebra_min_poly(B, fid, y);
        auto fac = factor_poly(mu, ctx);
        if (fac.size() < 2) return false;
        auto parts = detail::crt_split(B, fid, y, ctx);
        if (parts.size() < 2) return false;
        fid = parts[0];
        split_done = true;
        return true;
      };
      for (const Vec& y : corner)
        if (try_split(B.mulv(fid, B.mulv(y, fid)))) break;
      if (!split_done) {
        if (!ctx.deterministic) {
          for (int tries = 0; tries < 512 && !split_done; ++tries) {
            Vec y = B.zero();
            for (const Vec& cb : corner) y = B.add(y, B.smul(static_cast<i64>(ctx.rng.below(static_cast<u64>(B.p))), cb));
            try_split(y);
          }
        }
        if (!split_done)
          detail::scan_subspace(B, corner, [&](const Vec& y) { return try_split(y); });
      }
      require(split_done, errc::verification_failure, "factor: no splitter found in non-field corner");
    }
    // irreducible right module W = fid * B
    std::vector<Vec> wfull;
    for (int i = 0; i < B.dim; ++i) {
      Vec ei = B.zero();
      ei[i] = 1;
      wfull.push_back(B.mulv(fid, ei));
    }
    wfull = detail::fp_span_basis(wfull, B.dim, B.p);
    require(static_cast<int>(wfull.size()) == f.n * kd, errc::verification_failure, "factor: wrong module dimension");
    // greedy K-basis of W
    std::vector<Vec> kspan;
    for (const Vec& w : wfull) {
      if (detail::fp_in_span(kspan, w, B.dim, B.p)) continue;
      f.wbasis.push_back(w);
      Vec cur = w;
      for (int t = 0; t < f.k.e; ++t) {
        kspan.push_back(cur);
        cur = B.mulv(f.k_gen, cur);
      }
      kspan = detail::fp_span_basis(kspan, B.dim, B.p);
    }
    require(static_cast<int>(f.wbasis.size()) == f.n, errc::verification_failure, "factor: K-basis size mismatch");
    // solver for K-coordinates: rows gen^t * w_j
    std::vector<Vec> rows;
    for (int j = 0; j < f.n; ++j) {
      Vec cur = f.wbasis[j];
      for (int t = 0; t < f.k.e; ++t) {
        rows.push_back(cur);
        cur = B.mulv(f.k_gen, cur);
      }
    }
    f.wsolve = howell(rows, B.dim, B.p, 1);
    require(f.wsolve.rank() == f.n * kd, errc::verification_failure, "factor: module solver rank");
    // phi on basis elements: action of b on W by right multiplication
    auto kcoords = [&](const Vec& w) {
      auto sol = solve_left(f.wsolve, w);
      require(sol.has_value(), errc::verification_failure, "factor: module element escapes W");
      // sol has n*e coefficients ordered (j, t)
      std::vector<FElt> out(f.n, f_zero(f.k));
      for (int j = 0; j < f.n; ++j)
        for (int t = 0; t < f.k.e; ++t) out[j][t] = (*sol)[static_cast<size_t>(j) * f.k.e + t];
      return out;
    };
    for (int i = 0; i < B.dim; ++i) {
      Vec ei = B.zero();
      ei[i] = 1;
      FMat m(f.k, f.n, f.n);
      for (int r = 0; r < f.n; ++r) {
        auto co = kcoords(B.mulv(f.wbasis[r], ei));
        for (int c = 0; c < f.n; ++c) m.at(r, c) = co[c];
      }
      f.phi_fwd.push_back(m);
    }
    // echelon for phi inversion
    std::vector<Vec> flats;
    for (const FMat& m : f.phi_fwd) {
      Vec fl(static_cast<size_t>(f.n) * f.n * f.k.e, 0);
      int idx = 0;
      for (int r = 0; r < f.n; ++r)
        for (int c = 0; c < f.n; ++c)
          for (int b2 = 0; b2 < f.k.e; ++b2) fl[idx++] = m.at(r, c)[b2];
      flats.push_back(fl);
    }
    f.phi_ech = howell(flats, f.n * f.n * f.k.e, B.p, 1);
    require(f.phi_ech.rank() == B.dim, errc::verification_failure, "factor: phi not injective");
    // verify multiplicativity of phi on basis pairs and phi(e) = I
    for (int i = 0; i < B.dim && i < 12; ++i)
      for (int j = 0; j < B.dim && j < 12; ++j) {
        Vec ei = B.zero(), ej = B.zero();
        ei[i] = 1;
        ej[j] = 1;
        auto ci = f.block.from_parent(A, f.block.to_parent(A, ei));
        (void)ci;
        FMat lhs = f.phi(B.mulv(ei, ej));
        FMat rhs = fm_mul(f.phi(ei), f.phi(ej));
        require(lhs == rhs, errc::verification_failure, "factor: phi not multiplicative");
      }
    require(f.phi(B.unit) == FMat::identity(f.k, f.n), errc::verification_failure, "factor: phi(1) != I");
    st.factors.push_back(std::move(f));
  }
  return st;
}

// ---------------------------------------------------------------------------
// Skolem-Noether: X phi = D^{-1} X^sigma D for an effective automorphism
// ---------------------------------------------------------------------------

struct SkolemNoether {
  FMat d;
  int sigma_power = 0;
};

template <typename Phi>
inline SkolemNoether skolem_noether(const Field& k, int n, Phi&& phi) {
  // g: row x -> matrix with first row x; tau(x) = phi(g(x))
  auto gmat = [&](const std::vector<FElt>& x) {
    FMat m(k, n, n);
    for (int c = 0; c < n; ++c) m.at(0, c) = x[c];
    return m;
  };
  std::vector<FMat> tau;
  for (int j = 0; j < n; ++j) {
    std::vector<FElt> xj(n, f_zero(k));
    xj[j] = f_one(k);
    tau.push_back(phi(gmat(xj)));
  }
  SkolemNoether out;
  bool found = false;
  for (int i = 0; i < n && !found; ++i) {
    // rows x_i * tau(x_j)
    FMat d(k, n, n);
    bool allnz = true;
    for (int j = 0; j < n; ++j) {
      bool nz = false;
      for (int c = 0; c < n; ++c) {
        d.at(j, c) = tau[j].at(i, c);  // x_i * M = row i of M
        if (!f_is_zero(d.at(j, c))) nz = true;
      }
      if (!nz) allnz = false;
    }
    if (!allnz) continue;
    if (!fm_inverse(d).has_value()) continue;
    out.d = d;
    found = true;
  }
  require(found, errc::not_automorphism, "skolem_noether: no invertible D found");
  // sigma from the action on scalars
  {
    FElt gen = f_zero(k);
    if (k.e == 1)
      gen = f_one(k);
    else
      gen[1] = 1;
    FMat gi = fm_scale(FMat::identity(k, n), gen);
    FElt img = phi(gi).at(0, 0);
    int power = -1;
    for (int t = 0; t < std::max(k.e, 1); ++t)
      if (f_frob(k, gen, t) == img) {
        power = t;
        break;
      }
    require(power >= 0, errc::not_automorphism, "skolem_noether: scalar action is not a field automorphism");
    out.sigma_power = power;
  }
  // verify the relation on all matrix units
  FMat dinv = *fm_inverse(out.d);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      FMat x = FMat::unit(k, n, r, c);
      FMat lhs = phi(x);
      FMat rhs = fm_mul(fm_mul(dinv, fm_frob(x, out.sigma_power)), out.d);
      require(lhs == rhs, errc::not_automorphism,
              "skolem_noether: relation fails on matrix unit (" + std::to_string(r) + "," + std::to_string(c) + ")");
    }
  return out;
}

// ---------------------------------------------------------------------------
// realize a classical involution as the adjoint involution of a form
// ---------------------------------------------------------------------------

template <typename Inv>
inline ClassicalForm realize_form(const Field& k, int n, Inv&& circ, const Ctx& ctx) {
  (void)ctx;
  // verify involution on a few elements: anti-automorphism of order <= 2
  {
    FMat x = FMat::unit(k, n, 0, n - 1);
    FMat y = FMat::unit(k, n, n - 1, 0);
    require(circ(fm_mul(x, y)) == fm_mul(circ(y), circ(x)), errc::not_involution, "realize_form: not an anti-homomorphism");
    require(circ(circ(x)) == x && circ(circ(y)) == y, errc::not_involution, "realize_form: order exceeds 2");
    require(circ(FMat::identity(k, n)) == FMat::identity(k, n), errc::not_involution, "realize_form: not unital");
  }
  auto phi = [&](const FMat& x) { return fm_transpose(circ(x)); };
  SkolemNoether sn = skolem_noether(k, n, phi);
  FMat d = sn.d;
  int sig = sn.sigma_power % std::max(k.e, 1);
  require((2 * sig) % std::max(k.e, 1) == 0, errc::not_involution, "realize_form: sigma^2 != 1");
  ClassicalForm form;
  form.k = k;
  form.gram = d;
  form.sigma_power = sig;
  if (sig == 0) {
    // D^t = ±D
    bool plus = fm_transpose(d) == d;
    FMat neg = d;
    for (auto& x : neg.a) x = f_neg(k, x);
    bool minus = fm_transpose(d) == neg;
    require(plus || minus, errc::verification_failure, "realize_form: D^t != ±D");
    if (k.p == 2) {
      bool zero_diag = true;
      for (int i = 0; i < n; ++i)
        if (!f_is_zero(d.at(i, i))) zero_diag = false;
      form.kind = zero_diag ? FormKind::alternating : FormKind::symmetric;
    } else {
      form.kind = minus && !plus ? FormKind::alternating : FormKind::symmetric;
    }
  } else {
    // Hermitian after the rescaling step when D^t D^{-sigma} = -I
    FMat ds = fm_frob(d, sig);
    auto dsinv = fm_inverse(ds);
    require(dsinv.has_value(), errc::verification_failure, "realize_form: D^sigma singular");
    FMat test = fm_mul(fm_transpose(d), *dsinv);
    FMat negid = FMat::identity(k, n);
    for (auto& x : negid.a) x = f_neg(k, x);
    if (test == negid) {
      // reset D := (gamma - gamma^sigma) D for gamma with gamma^sigma != gamma
      FElt gamma = f_zero(k);
      gamma[1 % k.e] = 1;
      if (f_frob(k, gamma, sig) == gamma) {
        bool found = false;
        for (const FElt& cand : f_enumerate(k))
          if (f_frob(k, cand, sig) != cand) {
            gamma = cand;
            found = true;
            break;
          }
        require(found, errc::verification_failure, "realize_form: no sigma-moved element");
      }
      FElt beta = f_sub(k, gamma, f_frob(k, gamma, sig));
      d = fm_scale(d, beta);
      form.gram = d;
    }
    require(fm_transpose(form.gram) == fm_frob(form.gram, sig), errc::verification_failure,
            "realize_form: D^t != D^sigma after rescaling");
    form.kind = FormKind::hermitian;
  }
  validate_form(form);
  // verify the adjoint property X D = D (X^circ)^{sigma t} on matrix units
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      FMat x = FMat::unit(k, n, r, c);
      FMat lhs = fm_mul(x, form.gram);
      FMat rhs = fm_mul(form.gram, fm_transpose(fm_frob(circ(x), sig)));
      require(lhs == rhs, errc::verification_failure, "realize_form: adjoint identity fails");
    }
  return form;
}

// ---------------------------------------------------------------------------
// *-pairing of the simple quotients (Coro *-simple-factors)
// ---------------------------------------------------------------------------

struct StarQuotient {
  enum class Kind { classical, exchange };
  Kind kind = Kind::classical;
  int factor = 0;    // index into StarStructure::factors
  int partner = -1;  // exchange: the factor whose kernel is M*
  ClassicalForm form;  // classical targets: the realized form (involution = adjoint)
};

// induced involution on the classical target M_n(K) of factor i
inline FMat induced_involution(const StarStructure& st, int i, const FMat& t) {
  Vec barco = st.pi_preimage_bar(i, t);
  return st.pi(i, st.bar.star_of(barco));
}

// kernel of pi_i as a canonical echelon basis of bar coordinates
inline std::vector<Vec> pi_kernel(const StarStructure& st, int i) {
  const FpAlgebra& A = st.bar.alg;
  const SimpleFactor& f = st.factors[i];
  int fl = f.n * f.n * f.k.e;
  std::vector<Vec> rows;
  for (int b = 0; b < A.dim; ++b) {
    Vec eb = A.zero();
    eb[b] = 1;
    FMat img = st.pi(i, eb);
    Vec flat(fl, 0);
    int idx = 0;
    for (int r = 0; r < f.n; ++r)
      for (int c = 0; c < f.n; ++c)
        for (int e2 = 0; e2 < f.k.e; ++e2) flat[idx++] = img.at(r, c)[e2];
    rows.push_back(flat);
  }
  Echelon e = howell(rows, fl, A.p, 1);
  return detail::fp_span_basis(e.kernel, A.dim, A.p);
}

inline std::vector<StarQuotient> star_pair(const StarStructure& st, const Ctx& ctx) {
  require(st.ring.swap_involutive, errc::degenerate_input, "star_pair: swap is not an involution");
  int nf = static_cast<int>(st.factors.size());
  std::vector<std::vector<Vec>> kernels, star_kernels;
  for (int i = 0; i < nf; ++i) {
    kernels.push_back(pi_kernel(st, i));
    std::vector<Vec> sk;
    for (const Vec& x : kernels.back()) sk.push_back(st.bar.star_of(x));
    star_kernels.push_back(detail::fp_span_basis(sk, st.bar.alg.dim, st.bar.alg.p));
  }
  std::vector<StarQuotient> out;
  std::vector<bool> used(nf, false);
  for (int i = 0; i < nf; ++i) {
    if (used[i]) continue;
    used[i] = true;
    int match = -1;
    for (int j = 0; j < nf; ++j)
      if (star_kernels[i] == kernels[j]) {
        match = j;
        break;
      }
    require(match >= 0, errc::verification_failure, "star_pair: * does not permute the maximal ideals");
    StarQuotient q;
    q.factor = i;
    if (match == i) {
      q.kind = StarQuotient::Kind::classical;
      const SimpleFactor& f = st.factors[i];
      auto circ = [&st, i](const FMat& t) { return induced_involution(st, i, t); };
      q.form = realize_form(f.k, f.n, circ, ctx);
    } else {
      require(!used[match], errc::verification_failure, "star_pair: exchange partner already consumed");
      used[match] = true;
      q.kind = StarQuotient::Kind::exchange;
      q.partner = match;
      require(st.factors[i].n == st.factors[match].n && st.factors[i].k == st.factors[match].k,
              errc::verification_failure, "star_pair: exchange partners not isomorphic");
    }
    out.push_back(q);
  }
  return out;
}

// gamma evaluation: classical -> one matrix; exchange -> the pair
inline std::pair<FMat, FMat> gamma_apply(const StarStructure& st, const StarQuotient& q, const Vec& barco) {
  if (q.kind == StarQuotient::Kind::classical) {
    FMat m = st.pi(q.factor, barco);
    return {m, m};
  }
  FMat first = st.pi(q.factor, barco);
  FMat second = fm_transpose(st.pi(q.factor, st.bar.star_of(barco)));
  return {first, second};
}

// ---------------------------------------------------------------------------
// self-adjoint pullback (Lemma pullback) and idempotent lifting
// ---------------------------------------------------------------------------

// R-coordinate module and the swap as a coordinate matrix
inline AbelianModule ring_coord_module(const StarRing& r) { return r.lattice.as_module(); }

inline Mat ring_star_matrix(const StarRing& r) {
  int n = r.rank();
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    Vec c = r.coords(r.star(r.basis[i]));
    for (int j = 0; j < n; ++j) m.at(i, j) = c[j];
  }
  return m;
}

// basis (in R-coords) of the self-adjoint part H(R,*)
inline std::vector<Vec> hermitian_basis(const StarRing& r) {
  AbelianModule rm = ring_coord_module(r);
  Mat sm = ring_star_matrix(r);
  Mat delta(rm.rank(), rm.rank());
  for (int i = 0; i < rm.rank(); ++i)
    for (int j = 0; j < rm.rank(); ++j) delta.at(i, j) = mod_reduce(sm.at(i, j) - (i == j ? 1 : 0), rm.modulus(j));
  SubModule ker = kernel_of(rm, rm, delta);
  return ker.basis;
}

// flatten a gamma target value over F_p (classical: one matrix; exchange: both)
inline Vec gamma_flatten(const StarQuotient& q, const StarStructure& st, const std::pair<FMat, FMat>& t) {
  const SimpleFactor& f = st.factors[q.factor];
  int one = f.n * f.n * f.k.e;
  int total = q.kind == StarQuotient::Kind::classical ? one : 2 * one;
  Vec out(total, 0);
  int idx = 0;
  for (int rep = 0; rep < (q.kind == StarQuotient::Kind::classical ? 1 : 2); ++rep) {
    const FMat& m = rep == 0 ? t.first : t.second;
    for (int r = 0; r < f.n; ++r)
      for (int c = 0; c < f.n; ++c)
        for (int e2 = 0; e2 < f.k.e; ++e2) out[idx++] = m.at(r, c)[e2];
  }
  return out;
}

// Lemma pullback: s with s* = s and gamma(s) = t, solved over a basis of the
// self-adjoint part restricted to `subspace` (R-coordinate rows); pass the
// full coordinate space for the plain lemma.
inline std::pair<Mat, Mat> pullback_selfadjoint(const StarStructure& st, const StarQuotient& q,
                                                const std::pair<FMat, FMat>& t,
                                                const std::vector<Vec>& subspace) {
  const StarRing& r = st.ring;
  AbelianModule rm = ring_coord_module(r);
  Mat sm = ring_star_matrix(r);
  // hermitian vectors inside the subspace: u = c * S with u(1 - star) = 0
  int ns = static_cast<int>(subspace.size());
  AbelianModule dom;
  dom.p = rm.p;
  for (int i = 0; i < ns; ++i) {
    // order of the subspace row inside the coordinate module
    i64 o = rm.order_of(subspace[i]);
    int e = 0;
    while (o > 1) {
      o /= rm.p;
      ++e;
    }
    dom.exps.push_back(std::max(e, 1));
  }
  Mat a(ns, rm.rank());
  for (int i = 0; i < ns; ++i) {
    Vec img = rm.zero();
    for (int j = 0; j < rm.rank(); ++j) {
      if (subspace[i][j] == 0) continue;
      for (int k2 = 0; k2 < rm.rank(); ++k2)
        img[k2] = add_mod(img[k2], mul_mod(mod_reduce(subspace[i][j], rm.modulus(k2)), sm.at(j, k2), rm.modulus(k2)),
                          rm.modulus(k2));
    }
    Vec diff = rm.sub(img, [&] {
      Vec w = rm.zero();
      for (int k2 = 0; k2 < rm.rank(); ++k2) w[k2] = mod_reduce(subspace[i][k2], rm.modulus(k2));
      return w;
    }());
    for (int j = 0; j < rm.rank(); ++j) a.at(i, j) = diff[j];
  }
  SubModule hker = kernel_of(dom, rm, a);
  std::vector<Vec> hbasis;  // in R-coords
  for (const Vec& c : hker.basis) {
    Vec v = rm.zero();
    for (int i = 0; i < ns; ++i)
      if (c[i] != 0) v = rm.add(v, rm.smul(c[i], [&] {
                             Vec w = rm.zero();
                             for (int k2 = 0; k2 < rm.rank(); ++k2) w[k2] = mod_reduce(subspace[i][k2], rm.modulus(k2));
                             return w;
                           }()));
    hbasis.push_back(v);
  }
  // solve t over the gamma images of the hermitian basis, mod p
  std::vector<Vec> rows;
  for (const Vec& h : hbasis) {
    auto pairh = r.from_coords(h);
    rows.push_back(gamma_flatten(q, st, gamma_apply(st, q, st.bar_of(pairh))));
  }
  Vec target = gamma_flatten(q, st, t);
  require(!rows.empty(), errc::verification_failure, "pullback_selfadjoint: empty hermitian part");
  Echelon e = howell(rows, static_cast<int>(target.size()), rm.p, 1);
  auto sol = solve_left(e, target);
  require(sol.has_value(), errc::verification_failure,
          "pullback_selfadjoint: target not in the image of the hermitian part");
  Vec sc = rm.zero();
  for (size_t i = 0; i < hbasis.size(); ++i)
    if ((*sol)[i] != 0) sc = rm.add(sc, rm.smul((*sol)[i], hbasis[i]));
  auto s = r.from_coords(sc);
  require(r.star(s) == s, errc::verification_failure, "pullback_selfadjoint: result not self-adjoint");
  return s;
}

// Eq. (lift formula): given e with (e^2 - e)^n = 0, an exact idempotent
// congruent to e modulo the radical; polynomial in e, so * is preserved.
inline std::pair<Mat, Mat> lift_idempotent(const StarRing& r, const std::pair<Mat, Mat>& e, int n) {
  require(n >= 1, errc::invalid_argument, "lift_idempotent: n must be positive");
  auto d = r.add(r.mul(e, e), r.smul(-1, e));
  // check the nilpotency bound
  auto dp = r.one();
  for (int i = 0; i < n; ++i) dp = r.mul(dp, d);
  require(dp == r.zero(), errc::invalid_argument, "lift_idempotent: (e^2-e)^n != 0");
  // binomial coefficients C(2n-1, j) via Pascal, exact in __int128 for n <= 32
  require(n <= 32, errc::bound_exceeded, "lift_idempotent: nilpotency bound too large");
  std::vector<__int128> binom(static_cast<size_t>(2 * n), 0);
  binom[0] = 1;
  for (int row = 1; row <= 2 * n - 1; ++row)
    for (int j = row; j >= 1; --j) binom[j] += binom[j - 1];
  auto one_minus_e = r.add(r.one(), r.smul(-1, e));
  // e^n * sum_j C(2n-1, j) e^{n-1-j} (1-e)^j
  auto acc = r.zero();
  auto epow = r.one();
  std::vector<std::pair<Mat, Mat>> epows(2 * n), qpows(2 * n);
  {
    auto cur = r.one();
    for (int i = 0; i < 2 * n; ++i) {
      epows[i] = cur;
      cur = r.mul(cur, e);
    }
    cur = r.one();
    for (int i = 0; i < 2 * n; ++i) {
      qpows[i] = cur;
      cur = r.mul(cur, one_minus_e);
    }
  }
  for (int j = 0; j <= n - 1; ++j) {
    i64 coef = static_cast<i64>(binom[j] % static_cast<__int128>(r.v.work_mod()));
    auto term = r.smul(coef, r.mul(epows[n - 1 - j], qpows[j]));
    acc = r.add(acc, term);
  }
  auto ehat = r.mul(epows[n], acc);
  require(r.mul(ehat, ehat) == ehat, errc::verification_failure, "lift_idempotent: result not idempotent");
  (void)epow;
  return ehat;
}

}  // namespace centdec
