#pragma once

// Theta-symmetric bilinear maps b: V x V -> W over Z/p^e given by structure
// constant tensors, their adjoint *-rings, Sym(b), and the dictionary between
// self-adjoint idempotents and perpendicular decompositions.

#include <algorithm>
#include <optional>

#include "centdec/zlinalg.hpp"

namespace centdec {

struct BilinearMap {
  AbelianModule v;  // rank s
  AbelianModule w;  // rank t
  // tensor[x][y][z], reduced mod p^{d_z}
  std::vector<std::vector<Vec>> tensor;

  int sdim() const { return v.rank(); }
  int tdim() const { return w.rank(); }
};

// Validate shape and well-definedness on the stated modules:
// p^{e_x} B_{xy}^{(z)} = 0 = p^{e_y} B_{xy}^{(z)} in Z/p^{d_z}.
inline BilinearMap make_bilinear(const AbelianModule& v, const AbelianModule& w,
                                 std::vector<std::vector<Vec>> tensor) {
  BilinearMap b;
  b.v = v;
  b.w = w;
  require(static_cast<int>(tensor.size()) == v.rank(), errc::bad_input, "tensor: wrong x-dimension");
  for (auto& row : tensor) {
    require(static_cast<int>(row.size()) == v.rank(), errc::bad_input, "tensor: wrong y-dimension");
    for (auto& cell : row) {
      require(static_cast<int>(cell.size()) == w.rank(), errc::bad_input, "tensor: wrong z-dimension");
      w.reduce(cell);
    }
  }
  for (int x = 0; x < v.rank(); ++x)
    for (int y = 0; y < v.rank(); ++y)
      for (int z = 0; z < w.rank(); ++z) {
        i64 dz = w.modulus(z);
        i64 c = tensor[x][y][z];
        require(mul_mod(mod_reduce(ipow(v.p, v.exps[x]), dz), c, dz) == 0 &&
                    mul_mod(mod_reduce(ipow(v.p, v.exps[y]), dz), c, dz) == 0,
                errc::bad_input, "tensor does not define a bilinear map on the stated modules");
      }
  b.tensor = std::move(tensor);
  return b;
}

inline Vec evaluate(const BilinearMap& b, const Vec& u, const Vec& v) {
  require(static_cast<int>(u.size()) == b.sdim() && static_cast<int>(v.size()) == b.sdim(),
          errc::invalid_argument, "evaluate: dimension mismatch");
  Vec out = b.w.zero();
  for (int z = 0; z < b.tdim(); ++z) {
    i64 q = b.w.modulus(z), acc = 0;
    for (int x = 0; x < b.sdim(); ++x) {
      i64 ux = mod_reduce(u[x], q);
      if (ux == 0) continue;
      for (int y = 0; y < b.sdim(); ++y)
        acc = add_mod(acc, mul_mod(mul_mod(ux, mod_reduce(v[y], q), q), b.tensor[x][y][z], q), q);
    }
    out[z] = acc;
  }
  return out;
}

// largest submodule orthogonal to all of V on both sides
inline SubModule radical_of_map(const BilinearMap& b) {
  int s = b.sdim(), t = b.tdim();
  // unknown r in V; equations: sum_x r_x B_{xy}^{(z)} = 0 and sum_y r_y B_{xy}^{(z)} = 0
  int neq = 2 * s * t;
  std::vector<int> eq_exps;
  for (int rep = 0; rep < 2; ++rep)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) eq_exps.push_back(b.w.exps[z]);
  Mat a(s, neq);
  for (int x = 0; x < s; ++x) {
    int col = 0;
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) a.at(x, col++) = b.tensor[x][y][z];
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) a.at(x, col++) = b.tensor[y][x][z];
  }
  AbelianModule cod = AbelianModule(); // built raw below
  cod.p = b.v.p;
  cod.exps = eq_exps;
  return kernel_of(b.v, cod, a);
}

// span of the image of b inside W
inline SubModule image_span(const BilinearMap& b) {
  std::vector<Vec> gens;
  for (int x = 0; x < b.sdim(); ++x)
    for (int y = 0; y < b.sdim(); ++y) gens.push_back(b.w.reduced(b.tensor[x][y]));
  return submodule(b.w, gens);
}

struct ThetaSymmetry {
  ModMatrix theta;              // automorphism of W (or identity-extended)
  bool canonical = true;        // W equals the span of the image
  bool involutive = true;       // theta^2 = 1 verified on all of W
};

// Solve b(u,v) = b(v,u) theta for theta; error when no theta exists.
inline ThetaSymmetry theta_symmetry(const BilinearMap& b) {
  int s = b.sdim(), t = b.tdim();
  // unknown theta (t x t), hom-parameterized; equations indexed (x,y,z)
  Mat con = hom_constraints(b.w, b.w);
  std::vector<int> par_exps;
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) par_exps.push_back(std::min(b.w.exps[i], b.w.exps[j]));
  AbelianModule dom;
  dom.p = b.w.p;
  dom.exps = par_exps;
  std::vector<int> eq_exps;
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) eq_exps.push_back(b.w.exps[z]);
  AbelianModule cod;
  cod.p = b.w.p;
  cod.exps = eq_exps;
  Mat a(t * t, s * s * t);
  Vec rhs(s * s * t, 0);
  int col = 0;
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) {
        i64 dz = b.w.modulus(z);
        for (int wi = 0; wi < t; ++wi) {
          // parameter theta'_{wi,z}: contributes B_{yx}^{(wi)} * p^{con} to this equation
          int par = wi * t + z;
          a.at(par, col) = mul_mod(b.tensor[y][x][wi] % dz, ipow(b.w.p, static_cast<int>(con.at(wi, z))) % dz, dz);
        }
        rhs[col] = b.tensor[x][y][z];
        ++col;
      }
  auto sol = solve_linear(dom, cod, a, rhs);
  require(sol.has_value(), errc::not_theta_symmetric, "theta_symmetry: map is not theta-symmetric");
  auto param_to_mat = [&](const Vec& par) {
    Mat th(t, t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j)
        th.at(i, j) = mod_reduce(mul_mod(par[i * t + j], ipow(b.w.p, static_cast<int>(con.at(i, j))), b.w.modulus(j)), b.w.modulus(j));
    return th;
  };
  Mat th = param_to_mat(sol->particular);
  ThetaSymmetry out{ModMatrix(b.w, b.w, th), true, true};

  SubModule span = image_span(b);
  if (!span.is_full()) {
    out.canonical = false;
    // extend by the identity along a complement when the span is a summand
    bool extended = false;
    try {
      std::vector<Vec> basis = extend_to_basis(span.basis, b.w);
      // projection P onto span along the complement
      int n = b.w.rank();
      Mat tmat(n, n);
      for (int i = 0; i < n; ++i) tmat.set_row(i, basis[i]);
      AbelianModule bm;
      bm.p = b.w.p;
      std::vector<int> bex;
      for (const Vec& v : basis) {
        i64 o = b.w.order_of(v);
        int e = 0;
        while (o > 1) {
          o /= b.w.p;
          ++e;
        }
        bex.push_back(e);
      }
      bm.exps = bex;
      Mat proj(n, n), comp(n, n);
      for (int i = 0; i < n; ++i) {
        Vec ei = b.w.zero();
        ei[i] = 1;
        auto co = coords_in_basis(b.w, basis, bm, ei);
        require(co.has_value(), errc::verification_failure, "theta_symmetry: basis expression failed");
        Vec sp = b.w.zero(), cp = b.w.zero();
        for (size_t k = 0; k < basis.size(); ++k) {
          Vec c = b.w.smul((*co)[k], basis[k]);
          if (static_cast<int>(k) < span.rank())
            sp = b.w.add(sp, c);
          else
            cp = b.w.add(cp, c);
        }
        proj.set_row(i, sp);
        comp.set_row(i, cp);
      }
      // theta_c = P*theta + (1-P)
      Mat pt = mat_mul_mod(proj, th, b.w.work_mod());
      Mat thc(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) thc.at(i, j) = mod_reduce(pt.at(i, j) + comp.at(i, j), b.w.modulus(j));
      out.theta = ModMatrix(b.w, b.w, thc);
      extended = true;
    } catch (const error&) {
      extended = false;
    }
    (void)extended;
  }
  // verify theta^2 = 1 on W; on the image span it holds automatically
  Mat sq = mat_mul_mod(out.theta.f, out.theta.f, b.w.work_mod());
  bool invol = true;
  for (int i = 0; i < b.w.rank() && invol; ++i)
    for (int j = 0; j < b.w.rank() && invol; ++j)
      if (mod_reduce(sq.at(i, j) - (i == j ? 1 : 0), b.w.modulus(j)) != 0) invol = false;
  out.involutive = invol;
  return out;
}

// does (F, G) satisfy F B = B G^t coordinatewise?
inline bool check_adjoint_pair(const BilinearMap& b, const Mat& f, const Mat& g) {
  int s = b.sdim(), t = b.tdim();
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) {
        i64 q = b.w.modulus(z);
        i64 lhs = 0, rhs = 0;
        for (int k = 0; k < s; ++k) {
          lhs = add_mod(lhs, mul_mod(mod_reduce(f.at(x, k), q), b.tensor[k][y][z], q), q);
          rhs = add_mod(rhs, mul_mod(mod_reduce(g.at(y, k), q), b.tensor[x][k][z], q), q);
        }
        if (lhs != rhs) return false;
      }
  return true;
}

// ---------------------------------------------------------------------------
// StarRing: additive basis of adjoint pairs with the swap involution
// ---------------------------------------------------------------------------

struct StarRing {
  AbelianModule v;
  std::vector<std::pair<Mat, Mat>> basis;   // canonical additive basis
  std::vector<i64> basis_order;             // additive order of each basis pair
  SubModule lattice;                        // canonical flat-parameter lattice
  AbelianModule flat;                       // flat parameter module (internal)
  Mat con;                                  // hom constraint exponents for End V
  bool swap_involutive = true;              // false for degenerate maps

  int rank() const { return static_cast<int>(basis.size()); }

  Vec flatten(const Mat& f, const Mat& g) const {
    int s = v.rank();
    Vec out(static_cast<size_t>(2 * s * s), 0);
    int idx = 0;
    for (int rep = 0; rep < 2; ++rep) {
      const Mat& m = rep == 0 ? f : g;
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          i64 k = ipow(v.p, static_cast<int>(con.at(i, j)));
          i64 entry = mod_reduce(m.at(i, j), v.modulus(j));
          require(entry % k == 0, errc::invalid_argument, "flatten: entry violates Hom constraints");
          out[idx] = mod_reduce(entry / k, flat.modulus(idx));
          ++idx;
        }
    }
    return out;
  }

  std::pair<Mat, Mat> unflatten(const Vec& flatv) const {
    int s = v.rank();
    Mat f(s, s), g(s, s);
    int idx = 0;
    for (int rep = 0; rep < 2; ++rep) {
      Mat& m = rep == 0 ? f : g;
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          i64 k = ipow(v.p, static_cast<int>(con.at(i, j)));
          m.at(i, j) = mod_reduce(mul_mod(flatv[idx], k, v.modulus(j)), v.modulus(j));
          ++idx;
        }
    }
    return {f, g};
  }

  bool contains(const Mat& f, const Mat& g) const { return member(lattice, flatten(f, g)); }

  // ring operations on pairs
  std::pair<Mat, Mat> mul(const std::pair<Mat, Mat>& a, const std::pair<Mat, Mat>& b) const {
    i64 q = v.work_mod();
    Mat f = mat_mul_mod(a.first, b.first, q);
    Mat g = mat_mul_mod(b.second, a.second, q);
    for (int i = 0; i < v.rank(); ++i)
      for (int j = 0; j < v.rank(); ++j) {
        f.at(i, j) = mod_reduce(f.at(i, j), v.modulus(j));
        g.at(i, j) = mod_reduce(g.at(i, j), v.modulus(j));
      }
    return {f, g};
  }

  std::pair<Mat, Mat> add(const std::pair<Mat, Mat>& a, const std::pair<Mat, Mat>& b) const {
    Mat f = a.first, g = a.second;
    for (int i = 0; i < v.rank(); ++i)
      for (int j = 0; j < v.rank(); ++j) {
        f.at(i, j) = add_mod(f.at(i, j), b.first.at(i, j), v.modulus(j));
        g.at(i, j) = add_mod(g.at(i, j), b.second.at(i, j), v.modulus(j));
      }
    return {f, g};
  }

  std::pair<Mat, Mat> smul(i64 c, const std::pair<Mat, Mat>& a) const {
    Mat f = a.first, g = a.second;
    for (int i = 0; i < v.rank(); ++i)
      for (int j = 0; j < v.rank(); ++j) {
        f.at(i, j) = mul_mod(mod_reduce(c, v.modulus(j)), f.at(i, j), v.modulus(j));
        g.at(i, j) = mul_mod(mod_reduce(c, v.modulus(j)), g.at(i, j), v.modulus(j));
      }
    return {f, g};
  }

  std::pair<Mat, Mat> star(const std::pair<Mat, Mat>& a) const { return {a.second, a.first}; }

  std::pair<Mat, Mat> one() const { return {Mat::identity(v.rank()), Mat::identity(v.rank())}; }

  std::pair<Mat, Mat> zero() const { return {Mat(v.rank(), v.rank()), Mat(v.rank(), v.rank())}; }

  std::pair<Mat, Mat> from_coords(const Vec& c) const {
    auto acc = zero();
    for (int i = 0; i < rank(); ++i)
      if (c[i] != 0) acc = add(acc, smul(c[i], basis[i]));
    return acc;
  }

  // coordinates of a pair over the canonical basis (must be a member)
  Vec coords(const std::pair<Mat, Mat>& a) const {
    Vec flatv = flatten(a.first, a.second);
    AbelianModule sm = lattice.as_module();
    auto co = coords_in_basis(flat, lattice.basis, sm, flatv);
    require(co.has_value(), errc::verification_failure, "StarRing::coords: element not in ring");
    return *co;
  }
};

namespace detail {

inline AbelianModule flat_pair_module(const AbelianModule& v) {
  AbelianModule m;
  m.p = v.p;
  for (int rep = 0; rep < 2; ++rep)
    for (int i = 0; i < v.rank(); ++i)
      for (int j = 0; j < v.rank(); ++j) m.exps.push_back(std::min(v.exps[i], v.exps[j]));
  return m;
}

}  // namespace detail

// Solve Eq. F B = B G^t for the full adjoint ring of b.
inline StarRing adjoint_algebra(const BilinearMap& b) {
  int s = b.sdim(), t = b.tdim();
  StarRing r;
  r.v = b.v;
  r.con = hom_constraints(b.v, b.v);
  r.flat = detail::flat_pair_module(b.v);

  // equations indexed (x, y, z) mod p^{d_z}; unknowns the flat parameters
  AbelianModule cod;
  cod.p = b.v.p;
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) cod.exps.push_back(b.w.exps[z]);
  int npar = 2 * s * s;
  Mat a(npar, s * s * t);
  int col = 0;
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) {
        i64 dz = b.w.modulus(z);
        for (int j = 0; j < s; ++j) {
          // F_{x j} contributes B_{j y}^{(z)}; parameter (0, x, j)
          int pf = x * s + j;
          i64 scale = ipow(b.v.p, static_cast<int>(r.con.at(x, j))) % dz;
          a.at(pf, col) = mul_mod(scale, b.tensor[j][y][z], dz);
          // G_{y j} contributes -B_{x j}^{(z)}; parameter (1, y, j)
          int pg = s * s + y * s + j;
          i64 scg = ipow(b.v.p, static_cast<int>(r.con.at(y, j))) % dz;
          a.at(pg, col) = sub_mod(0, mul_mod(scg, b.tensor[x][j][z], dz), dz);
        }
        ++col;
      }
  SubModule ker = kernel_of(r.flat, cod, a);
  r.lattice = ker;
  for (size_t i = 0; i < ker.basis.size(); ++i) {
    auto [f, g] = r.unflatten(ker.basis[i]);
    r.basis.emplace_back(f, g);
    r.basis_order.push_back(ker.basis_order[i]);
  }

  // identity present and closure under products; swap closure holds exactly
  // for theta-symmetric maps, otherwise the ring is flagged and the
  // *-structure operations downstream reject it
  require(r.contains(Mat::identity(s), Mat::identity(s)), errc::verification_failure,
          "adjoint_algebra: identity missing");
  r.swap_involutive = true;
  for (const auto& p1 : r.basis) {
    if (!r.contains(p1.second, p1.first)) r.swap_involutive = false;
    for (const auto& p2 : r.basis) {
      auto prod = r.mul(p1, p2);
      require(r.contains(prod.first, prod.second), errc::verification_failure,
              "adjoint_algebra: product closure fails");
    }
  }
  if (r.swap_involutive) {
    try {
      ThetaSymmetry th = theta_symmetry(b);
      r.swap_involutive = th.involutive;
    } catch (const error&) {
      r.swap_involutive = false;
    }
  }
  return r;
}

// basis of Sym(b) = {(f, f) in Adj(b)}
inline std::vector<Mat> sym_elements(const BilinearMap& b) {
  int s = b.sdim(), t = b.tdim();
  Mat con = hom_constraints(b.v, b.v);
  AbelianModule dom;
  dom.p = b.v.p;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) dom.exps.push_back(std::min(b.v.exps[i], b.v.exps[j]));
  AbelianModule cod;
  cod.p = b.v.p;
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) cod.exps.push_back(b.w.exps[z]);
  Mat a(s * s, s * s * t);
  int col = 0;
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y)
      for (int z = 0; z < t; ++z) {
        i64 dz = b.w.modulus(z);
        for (int j = 0; j < s; ++j) {
          i64 sf = ipow(b.v.p, static_cast<int>(con.at(x, j))) % dz;
          i64 sg = ipow(b.v.p, static_cast<int>(con.at(y, j))) % dz;
          int pf = x * s + j;
          a.at(pf, col) = add_mod(a.at(pf, col), mul_mod(sf, b.tensor[j][y][z], dz), dz);
          int pg = y * s + j;
          a.at(pg, col) = sub_mod(a.at(pg, col), mul_mod(sg, b.tensor[x][j][z], dz), dz);
        }
        ++col;
      }
  SubModule ker = kernel_of(dom, cod, a);
  std::vector<Mat> out;
  for (const Vec& kv : ker.basis) {
    Mat f(s, s);
    int idx = 0;
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        f.at(i, j) = mod_reduce(mul_mod(kv[idx], ipow(b.v.p, static_cast<int>(con.at(i, j))), b.v.modulus(j)), b.v.modulus(j));
        ++idx;
      }
    out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// idempotents <-> perpendicular decompositions
// ---------------------------------------------------------------------------

using PerpDecomposition = std::vector<SubModule>;

// is {parts} a direct decomposition of V?
inline bool is_direct_decomposition(const AbelianModule& v, const PerpDecomposition& parts) {
  i64 prod = 1;
  std::vector<Vec> all;
  for (const SubModule& s : parts) {
    if (s.ambient != v) return false;
    prod *= s.order;
    for (const Vec& b : s.basis) all.push_back(b);
  }
  if (prod != v.order()) return false;
  return submodule(v, all).is_full();
}

inline bool is_perp_decomposition(const BilinearMap& b, const PerpDecomposition& parts) {
  if (!is_direct_decomposition(b.v, parts)) return false;
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = 0; j < parts.size(); ++j) {
      if (i == j) continue;
      for (const Vec& x : parts[i].basis)
        for (const Vec& y : parts[j].basis)
          if (!b.w.is_zero(evaluate(b, x, y))) return false;
    }
  return true;
}

// projection idempotents of a direct decomposition; second: Sym membership flags
inline std::pair<std::vector<Mat>, std::vector<bool>> projections_of(const BilinearMap& b,
                                                                     const PerpDecomposition& parts) {
  require(is_direct_decomposition(b.v, parts), errc::not_direct_decomposition,
          "projections_of: not a direct decomposition of V");
  const AbelianModule& v = b.v;
  std::vector<Vec> rows;
  std::vector<int> owner;
  for (size_t k = 0; k < parts.size(); ++k)
    for (const Vec& r : parts[k].basis) {
      rows.push_back(r);
      owner.push_back(static_cast<int>(k));
    }
  AbelianModule bm;
  bm.p = v.p;
  for (const Vec& r : rows) {
    i64 o = v.order_of(r);
    int e = 0;
    while (o > 1) {
      o /= v.p;
      ++e;
    }
    bm.exps.push_back(e);
  }
  std::vector<Mat> projs(parts.size(), Mat(v.rank(), v.rank()));
  for (int i = 0; i < v.rank(); ++i) {
    Vec ei = v.zero();
    ei[i] = 1;
    auto co = coords_in_basis(v, rows, bm, ei);
    require(co.has_value(), errc::verification_failure, "projections_of: expression over parts failed");
    for (size_t k = 0; k < rows.size(); ++k) {
      if ((*co)[k] == 0) continue;
      Vec contrib = v.smul((*co)[k], rows[k]);
      Mat& pm = projs[owner[k]];
      for (int j = 0; j < v.rank(); ++j) pm.at(i, j) = add_mod(pm.at(i, j), contrib[j], v.modulus(j));
    }
  }
  std::vector<bool> in_sym;
  for (const Mat& e : projs) in_sym.push_back(check_adjoint_pair(b, e, e));
  return {projs, in_sym};
}

// image submodule V*e of an endomorphism
inline SubModule image_submodule(const AbelianModule& v, const Mat& e) {
  std::vector<Vec> gens;
  for (int i = 0; i < v.rank(); ++i) gens.push_back(v.reduced(e.row(i)));
  return submodule(v, gens);
}

// V*e for each frame idempotent; validates the frame axioms against b
inline PerpDecomposition idempotents_to_perp(const BilinearMap& b, const std::vector<Mat>& frame) {
  const AbelianModule& v = b.v;
  i64 q = v.work_mod();
  Mat sum(v.rank(), v.rank());
  for (const Mat& e : frame) {
    require(check_adjoint_pair(b, e, e), errc::frame_axiom, "idempotents_to_perp: element not in Sym(b)");
    Mat sq = mat_mul_mod(e, e, q);
    for (int i = 0; i < v.rank(); ++i)
      for (int j = 0; j < v.rank(); ++j) {
        require(mod_reduce(sq.at(i, j) - e.at(i, j), v.modulus(j)) == 0, errc::frame_axiom,
                "idempotents_to_perp: not idempotent");
        sum.at(i, j) = add_mod(sum.at(i, j), e.at(i, j), v.modulus(j));
      }
  }
  for (size_t a = 0; a < frame.size(); ++a)
    for (size_t c = 0; c < frame.size(); ++c) {
      if (a == c) continue;
      Mat pr = mat_mul_mod(frame[a], frame[c], q);
      for (int i = 0; i < v.rank(); ++i)
        for (int j = 0; j < v.rank(); ++j)
          require(mod_reduce(pr.at(i, j), v.modulus(j)) == 0, errc::frame_axiom,
                  "idempotents_to_perp: not orthogonal");
    }
  for (int i = 0; i < v.rank(); ++i)
    for (int j = 0; j < v.rank(); ++j)
      require(mod_reduce(sum.at(i, j) - (i == j ? 1 : 0), v.modulus(j)) == 0, errc::frame_axiom,
              "idempotents_to_perp: does not sum to 1");
  PerpDecomposition parts;
  for (const Mat& e : frame) parts.push_back(image_submodule(v, e));
  require(is_perp_decomposition(b, parts), errc::verification_failure,
          "idempotents_to_perp: images are not a perpendicular decomposition");
  return parts;
}

// b'(u,v) := b(uT, vT) for invertible T
inline BilinearMap change_basis(const BilinearMap& b, const Mat& tmat) {
  const AbelianModule& v = b.v;
  // T invertible <=> rows form a basis
  std::vector<Vec> rows;
  for (int i = 0; i < v.rank(); ++i) rows.push_back(v.reduced(tmat.row(i)));
  i64 prod = 1;
  for (const Vec& r : rows) prod *= v.order_of(r);
  require(prod == v.order() && submodule(v, rows).is_full(), errc::invalid_argument,
          "change_basis: T not invertible");
  std::vector<std::vector<Vec>> tensor(v.rank(), std::vector<Vec>(v.rank()));
  for (int x = 0; x < v.rank(); ++x)
    for (int y = 0; y < v.rank(); ++y) tensor[x][y] = evaluate(b, rows[x], rows[y]);
  return make_bilinear(v, b.w, std::move(tensor));
}

}  // namespace centdec
