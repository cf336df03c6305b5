#pragma once

// Classical forms over finite fields: symmetric, alternating and Hermitian
// Gram matrices, orthogonal bases (including the characteristic-2 symmetric
// non-alternating case) and hyperbolic bases.

#include "centdec/gfield.hpp"

namespace centdec {

enum class FormKind { symmetric, alternating, hermitian };

struct ClassicalForm {
  FormKind kind = FormKind::symmetric;
  Field k;
  int sigma_power = 0;  // Hermitian: x -> x^{p^sigma_power}; identity otherwise
  FMat gram;            // invertible Gram matrix D; d(u,v) = u D (v^sigma)^t

  int dim() const { return gram.rows; }

  FElt apply_sigma(const FElt& a) const { return f_frob(k, a, sigma_power); }

  FElt eval(const std::vector<FElt>& u, const std::vector<FElt>& v) const {
    FElt acc = f_zero(k);
    for (int i = 0; i < dim(); ++i) {
      if (f_is_zero(u[i])) continue;
      for (int j = 0; j < dim(); ++j)
        acc = f_add(k, acc, f_mul(k, f_mul(k, u[i], gram.at(i, j)), apply_sigma(v[j])));
    }
    return acc;
  }
};

// validate the kind invariants on the Gram matrix
inline void validate_form(const ClassicalForm& d) {
  const Field& k = d.k;
  require(fm_inverse(d.gram).has_value(), errc::degenerate_input, "form: Gram matrix singular");
  for (int i = 0; i < d.dim(); ++i)
    for (int j = 0; j < d.dim(); ++j) {
      const FElt& a = d.gram.at(i, j);
      const FElt& b = d.gram.at(j, i);
      switch (d.kind) {
        case FormKind::symmetric:
          require(a == b, errc::invalid_argument, "form: not symmetric");
          require(d.sigma_power % std::max(k.e, 1) == 0 || d.sigma_power == 0, errc::invalid_argument,
                  "form: symmetric with nontrivial sigma");
          break;
        case FormKind::alternating:
          require(f_add(k, a, b) == f_zero(k), errc::invalid_argument, "form: not skew");
          if (i == j) require(f_is_zero(a), errc::invalid_argument, "form: alternating diagonal nonzero");
          break;
        case FormKind::hermitian:
          require(b == d.apply_sigma(a), errc::invalid_argument, "form: not hermitian");
          require(d.sigma_power != 0 && (2 * d.sigma_power) % k.e == 0, errc::invalid_argument,
                  "form: hermitian sigma must have order 2");
          break;
      }
    }
}

namespace detail {

// Gram matrix of `basis` rows under d
inline FMat gram_of(const ClassicalForm& d, const std::vector<std::vector<FElt>>& basis) {
  FMat g(d.k, static_cast<int>(basis.size()), static_cast<int>(basis.size()));
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) g.at(static_cast<int>(i), static_cast<int>(j)) = d.eval(basis[i], basis[j]);
  return g;
}

// exhaustive orthogonal basis search for tiny anisotropic-resistant blocks
inline bool orthogonalize_exhaustive(const ClassicalForm& d, const std::vector<std::vector<FElt>>& space,
                                     std::vector<std::vector<FElt>>& out) {
  // space: K-basis rows of the block (dimension <= 3 in practice)
  int m = static_cast<int>(space.size());
  if (m == 0) return true;
  i64 q = d.k.order();
  i64 total = 1;
  for (int i = 0; i < m; ++i) {
    total *= q;
    require(total <= (i64(1) << 22), errc::bound_exceeded, "orthogonalize_exhaustive: block too large");
  }
  std::vector<FElt> all = f_enumerate(d.k);
  for (i64 code = 0; code < total; ++code) {
    // candidate vector
    std::vector<FElt> cand(space[0].size(), f_zero(d.k));
    i64 x = code;
    bool nonzero = false;
    for (int i = 0; i < m; ++i) {
      i64 ci = x % q;
      x /= q;
      if (ci) nonzero = true;
      for (size_t j = 0; j < cand.size(); ++j)
        cand[j] = f_add(d.k, cand[j], f_mul(d.k, all[ci], space[i][j]));
    }
    if (!nonzero) continue;
    FElt nrm = d.eval(cand, cand);
    if (f_is_zero(nrm)) continue;
    // project the rest of the space off cand and recurse
    std::vector<std::vector<FElt>> rest;
    FElt inv = f_inv(d.k, nrm);
    for (int i = 0; i < m; ++i) {
      std::vector<FElt> w = space[i];
      FElt c = f_mul(d.k, d.eval(space[i], cand), inv);
      for (size_t j = 0; j < w.size(); ++j) w[j] = f_sub(d.k, w[j], f_mul(d.k, c, cand[j]));
      rest.push_back(w);
    }
    // reduce rest to an independent K-basis of the complement
    std::vector<std::vector<FElt>> indep;
    {
      // row reduce over K
      std::vector<std::vector<FElt>> rows = rest;
      size_t cols = cand.size();
      size_t r = 0;
      for (size_t c = 0; c < cols && r < rows.size(); ++c) {
        size_t piv = SIZE_MAX;
        for (size_t i = r; i < rows.size(); ++i)
          if (!f_is_zero(rows[i][c])) {
            piv = i;
            break;
          }
        if (piv == SIZE_MAX) continue;
        std::swap(rows[piv], rows[r]);
        FElt il = f_inv(d.k, rows[r][c]);
        for (size_t j = 0; j < cols; ++j) rows[r][j] = f_mul(d.k, rows[r][j], il);
        for (size_t i = 0; i < rows.size(); ++i) {
          if (i == r || f_is_zero(rows[i][c])) continue;
          FElt f = rows[i][c];
          for (size_t j = 0; j < cols; ++j) rows[i][j] = f_sub(d.k, rows[i][j], f_mul(d.k, f, rows[r][j]));
        }
        ++r;
      }
      for (size_t i = 0; i < r; ++i) indep.push_back(rows[i]);
    }
    if (static_cast<int>(indep.size()) != m - 1) continue;
    std::vector<std::vector<FElt>> sub;
    if (orthogonalize_exhaustive(d, indep, sub)) {
      out.clear();
      out.push_back(cand);
      for (auto& w : sub) out.push_back(w);
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Orthogonal basis of a nondegenerate symmetric (non-alternating in char 2)
// or Hermitian form: Gram becomes diagonal.
inline std::vector<std::vector<FElt>> orthogonal_basis(const ClassicalForm& d) {
  require(d.kind != FormKind::alternating, errc::invalid_argument, "orthogonal_basis: alternating input");
  validate_form(d);
  const Field& k = d.k;
  int n = d.dim();
  if (d.kind == FormKind::symmetric && k.p == 2) {
    bool alt = true;
    for (int i = 0; i < n; ++i)
      if (!f_is_zero(d.gram.at(i, i))) alt = false;
    require(!alt, errc::invalid_argument, "orthogonal_basis: alternating in characteristic 2");
  }
  std::vector<std::vector<FElt>> space;
  for (int i = 0; i < n; ++i) {
    std::vector<FElt> e(n, f_zero(k));
    e[i] = f_one(k);
    space.push_back(e);
  }
  std::vector<std::vector<FElt>> out;
  while (!space.empty()) {
    // find an anisotropic vector: try basis vectors, then pair sums, then
    // (small fields) the exhaustive search within the remaining block
    std::vector<FElt> x;
    bool found = false;
    for (const auto& v : space)
      if (!f_is_zero(d.eval(v, v))) {
        x = v;
        found = true;
        break;
      }
    if (!found)
      for (size_t i = 0; i < space.size() && !found; ++i)
        for (size_t j = i + 1; j < space.size() && !found; ++j) {
          std::vector<FElt> w(space[i].size());
          for (size_t c = 0; c < w.size(); ++c) w[c] = f_add(k, space[i][c], space[j][c]);
          if (!f_is_zero(d.eval(w, w))) {
            x = w;
            found = true;
          }
        }
    if (!found) {
      // the remainder is alternating; finish with the exhaustive
      // re-diagonalization of [last diagonal vector + remainder]
      require(!out.empty(), errc::degenerate_input, "orthogonal_basis: totally isotropic form");
      std::vector<std::vector<FElt>> block;
      block.push_back(out.back());
      out.pop_back();
      for (auto& v : space) block.push_back(v);
      std::vector<std::vector<FElt>> diag;
      require(detail::orthogonalize_exhaustive(d, block, diag), errc::verification_failure,
              "orthogonal_basis: no orthogonal basis found in block");
      for (auto& v : diag) out.push_back(v);
      space.clear();
      break;
    }
    out.push_back(x);
    FElt inv = f_inv(k, d.eval(x, x));
    std::vector<std::vector<FElt>> next;
    for (auto& v : space) {
      std::vector<FElt> w = v;
      FElt c = f_mul(k, d.eval(v, x), inv);
      for (size_t j = 0; j < w.size(); ++j) w[j] = f_sub(k, w[j], f_mul(k, c, x[j]));
      bool zero = true;
      for (auto& cc : w)
        if (!f_is_zero(cc)) zero = false;
      if (!zero) next.push_back(w);
    }
    // keep an independent basis of the complement
    std::vector<std::vector<FElt>> indep;
    for (auto& w : next) {
      std::vector<std::vector<FElt>> test = indep;
      test.push_back(w);
      // independence via rank over K (small): row reduce
      FMat m(k, static_cast<int>(test.size()), n);
      for (size_t r = 0; r < test.size(); ++r)
        for (int c = 0; c < n; ++c) m.at(static_cast<int>(r), c) = test[r][c];
      // rank
      int rank = 0;
      {
        FMat a = m;
        int rr = 0;
        for (int c = 0; c < n && rr < a.rows; ++c) {
          int piv = -1;
          for (int r2 = rr; r2 < a.rows; ++r2)
            if (!f_is_zero(a.at(r2, c))) {
              piv = r2;
              break;
            }
          if (piv < 0) continue;
          for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(rr, j));
          FElt il = f_inv(k, a.at(rr, c));
          for (int j = 0; j < n; ++j) a.at(rr, j) = f_mul(k, a.at(rr, j), il);
          for (int r2 = 0; r2 < a.rows; ++r2) {
            if (r2 == rr || f_is_zero(a.at(r2, c))) continue;
            FElt f = a.at(r2, c);
            for (int j = 0; j < n; ++j) a.at(r2, j) = f_sub(k, a.at(r2, j), f_mul(k, f, a.at(rr, j)));
          }
          ++rr;
        }
        rank = rr;
      }
      if (rank == static_cast<int>(test.size())) indep.push_back(w);
    }
    space = std::move(indep);
  }
  require(static_cast<int>(out.size()) == n, errc::verification_failure, "orthogonal_basis: dimension loss");
  // verify: recomputed Gram is diagonal with nonzero entries
  FMat g = detail::gram_of(d, out);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j)
        require(!f_is_zero(g.at(i, i)), errc::verification_failure, "orthogonal_basis: isotropic diagonal");
      else
        require(f_is_zero(g.at(i, j)), errc::verification_failure, "orthogonal_basis: Gram not diagonal");
    }
  return out;
}

// Hyperbolic basis of a nondegenerate alternating form: pairs (x_i, y_i) with
// d(x_i, y_i) = 1, ordered x_1, y_1, x_2, y_2, ...
inline std::vector<std::vector<FElt>> hyperbolic_basis(const ClassicalForm& d) {
  require(d.kind == FormKind::alternating, errc::invalid_argument, "hyperbolic_basis: not alternating");
  validate_form(d);
  const Field& k = d.k;
  int n = d.dim();
  require(n % 2 == 0, errc::degenerate_input, "hyperbolic_basis: odd dimension");
  std::vector<std::vector<FElt>> space;
  for (int i = 0; i < n; ++i) {
    std::vector<FElt> e(n, f_zero(k));
    e[i] = f_one(k);
    space.push_back(e);
  }
  std::vector<std::vector<FElt>> out;
  while (!space.empty()) {
    std::vector<FElt> x = space[0];
    // find y with d(x,y) != 0
    int yi = -1;
    for (size_t j = 1; j < space.size(); ++j)
      if (!f_is_zero(d.eval(x, space[j]))) {
        yi = static_cast<int>(j);
        break;
      }
    require(yi > 0, errc::degenerate_input, "hyperbolic_basis: degenerate block");
    std::vector<FElt> y = space[yi];
    FElt c = f_inv(k, d.eval(x, y));
    for (auto& v : y) v = f_mul(k, v, c);  // d(x, y) = 1
    out.push_back(x);
    out.push_back(y);
    std::vector<std::vector<FElt>> next;
    for (size_t j = 1; j < space.size(); ++j) {
      if (static_cast<int>(j) == yi) continue;
      std::vector<FElt> z = space[j];
      FElt zy = d.eval(z, y), zx = d.eval(z, x);
      // z' = z - d(z,y) x + d(z,x) y
      for (size_t t = 0; t < z.size(); ++t)
        z[t] = f_add(k, f_sub(k, z[t], f_mul(k, zy, x[t])), f_mul(k, zx, y[t]));
      next.push_back(z);
    }
    space = std::move(next);
  }
  // verify the block Gram
  FMat g = detail::gram_of(d, out);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FElt expect = f_zero(k);
      if (i / 2 == j / 2 && i != j) expect = (i < j) ? f_one(k) : f_neg(k, f_one(k));
      require(g.at(i, j) == expect, errc::verification_failure, "hyperbolic_basis: Gram not hyperbolic");
    }
  return out;
}

}  // namespace centdec
