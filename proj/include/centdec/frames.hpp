#pragma once

// Frames: maximal sets of pairwise-orthogonal self-adjoint-primitive
// idempotents. Per-target frames for classical and exchange *-simple rings,
// and the assembly of a maximum self-adjoint frame of an adjoint *-ring by
// pullback and idempotent lifting.

#include "centdec/starring.hpp"

namespace centdec {

struct Frame {
  std::vector<std::pair<Mat, Mat>> elems;  // self-adjoint idempotent pairs (f, f)
  std::vector<std::string> certs;          // primitivity certificates

  int size() const { return static_cast<int>(elems.size()); }
};

// maximal frame of Adj(d) for a classical form: one projection per orthogonal
// basis vector (symmetric/hermitian) or per hyperbolic plane (alternating)
inline std::vector<FMat> frame_of_classical(const ClassicalForm& d) {
  const Field& k = d.k;
  int n = d.dim();
  std::vector<FMat> out;
  if (d.kind == FormKind::alternating) {
    auto basis = hyperbolic_basis(d);
    for (int i = 0; i + 1 < static_cast<int>(basis.size()); i += 2) {
      const auto& x = basis[i];
      const auto& y = basis[i + 1];
      // u P = d(u,y) x - d(u,x) y: projection onto the hyperbolic plane
      FMat pm(k, n, n);
      for (int r = 0; r < n; ++r) {
        FElt dy = f_zero(k), dx = f_zero(k);
        for (int c = 0; c < n; ++c) {
          dy = f_add(k, dy, f_mul(k, d.gram.at(r, c), y[c]));
          dx = f_add(k, dx, f_mul(k, d.gram.at(r, c), x[c]));
        }
        for (int c = 0; c < n; ++c)
          pm.at(r, c) = f_sub(k, f_mul(k, dy, x[c]), f_mul(k, dx, y[c]));
      }
      out.push_back(pm);
    }
  } else {
    auto basis = orthogonal_basis(d);
    for (const auto& x : basis) {
      FElt nrm = d.eval(x, x);
      FElt inv = f_inv(k, nrm);
      FMat pm(k, n, n);
      for (int r = 0; r < n; ++r) {
        FElt w = f_zero(k);
        for (int c = 0; c < n; ++c) w = f_add(k, w, f_mul(k, d.gram.at(r, c), d.apply_sigma(x[c])));
        for (int c = 0; c < n; ++c) pm.at(r, c) = f_mul(k, f_mul(k, w, inv), x[c]);
      }
      out.push_back(pm);
    }
  }
  // frame axioms inside Adj(d)
  FMat sum(k, n, n);
  for (const FMat& e : out) {
    require(fm_mul(e, e) == e, errc::frame_axiom, "frame_of_classical: not idempotent");
    // self-adjoint: e D = D (e^sigma)^t
    require(fm_mul(e, d.gram) == fm_mul(d.gram, fm_transpose(fm_frob(e, d.sigma_power))), errc::frame_axiom,
            "frame_of_classical: not self-adjoint");
    sum = fm_add(sum, e);
  }
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = 0; j < out.size(); ++j)
      if (i != j)
        require(fm_mul(out[i], out[j]).is_zero(), errc::frame_axiom, "frame_of_classical: not orthogonal");
  require(sum == FMat::identity(k, n), errc::frame_axiom, "frame_of_classical: does not sum to 1");
  return out;
}

// maximal frame of the exchange ring (M_n(K) ⊕ M_n(K), (X,Y) -> (Y^t, X^t)):
// the diagonal pairs (E_ii, E_ii)
inline std::vector<std::pair<FMat, FMat>> frame_of_exchange(const Field& k, int n) {
  std::vector<std::pair<FMat, FMat>> out;
  for (int i = 0; i < n; ++i) {
    FMat e = FMat::unit(k, n, i, i);
    out.emplace_back(e, e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// find_frame: maximum self-adjoint frame of (R, *)
// ---------------------------------------------------------------------------

namespace detail {

// J(R)-lattice basis in R-coordinates: p R + lifts of J(Rbar)
inline std::vector<Vec> radical_lattice(const StarStructure& st) {
  const StarRing& r = st.ring;
  AbelianModule rm = ring_coord_module(r);
  std::vector<Vec> gens;
  for (int i = 0; i < rm.rank(); ++i) {
    Vec e = rm.zero();
    e[i] = mod_reduce(r.v.p, rm.modulus(i));
    gens.push_back(e);
  }
  for (const Vec& j : st.rad) gens.push_back(r.coords(st.lift_pair(j)));
  return submodule(rm, gens).basis;
}

// U-subspace rows (R-coords) for the block(s) of a star quotient, plus J(R)
inline std::vector<Vec> block_subspace(const StarStructure& st, const StarQuotient& q) {
  const StarRing& r = st.ring;
  std::vector<Vec> rows = radical_lattice(st);
  auto add_block = [&](int fi) {
    for (const Vec& b : st.factors[fi].block.embed) rows.push_back(r.coords(st.lift_pair(b)));
  };
  add_block(q.factor);
  if (q.kind == StarQuotient::Kind::exchange) add_block(q.partner);
  return rows;
}

}  // namespace detail

// the full frame pipeline: per-quotient target frames, block-supported
// self-adjoint pullbacks, then sequential lifting with exact orthogonality
inline Frame find_frame(const StarRing& r, const Ctx& ctx) {
  require(r.swap_involutive, errc::degenerate_input, "find_frame: swap is not an involution (degenerate map)");
  require(r.v.rank() >= 1, errc::invalid_argument, "find_frame: trivial module");
  StarStructure st = star_structure(r, ctx);
  std::vector<StarQuotient> gams = star_pair(st, ctx);

  struct PreLift {
    std::pair<Mat, Mat> s;
    std::string cert;
    int gamma_index;
    std::pair<FMat, FMat> target;
  };
  std::vector<PreLift> pre;
  for (size_t gi = 0; gi < gams.size(); ++gi) {
    const StarQuotient& q = gams[gi];
    const SimpleFactor& f = st.factors[q.factor];
    std::vector<Vec> sub = detail::block_subspace(st, q);
    if (q.kind == StarQuotient::Kind::classical) {
      auto targets = frame_of_classical(q.form);
      for (size_t ti = 0; ti < targets.size(); ++ti) {
        std::pair<FMat, FMat> t{targets[ti], targets[ti]};
        PreLift pl;
        pl.s = pullback_selfadjoint(st, q, t, sub);
        pl.gamma_index = static_cast<int>(gi);
        pl.target = t;
        std::string kindname = q.form.kind == FormKind::alternating  ? "alternating"
                               : q.form.kind == FormKind::hermitian ? "hermitian"
                                                                    : "symmetric";
        pl.cert = "quotient " + std::to_string(gi) + " (" + kindname + ", n=" + std::to_string(f.n) + ", |K|=" +
                  std::to_string(f.k.order()) + "): primitive target idempotent " + std::to_string(ti);
        pre.push_back(std::move(pl));
      }
    } else {
      auto targets = frame_of_exchange(f.k, f.n);
      for (size_t ti = 0; ti < targets.size(); ++ti) {
        PreLift pl;
        pl.s = pullback_selfadjoint(st, q, targets[ti], sub);
        pl.gamma_index = static_cast<int>(gi);
        pl.target = targets[ti];
        pl.cert = "quotient " + std::to_string(gi) + " (exchange, n=" + std::to_string(f.n) + ", |K|=" +
                  std::to_string(f.k.order()) + "): diagonal pair " + std::to_string(ti);
        pre.push_back(std::move(pl));
      }
    }
  }
  require(!pre.empty(), errc::verification_failure, "find_frame: no quotients");

  // sequential lifting; the last idempotent is 1 minus the sum of the others
  Frame frame;
  auto partial = r.zero();
  for (size_t k2 = 0; k2 + 1 < pre.size(); ++k2) {
    auto one_minus = r.add(r.one(), r.smul(-1, partial));
    auto e = r.mul(one_minus, r.mul(pre[k2].s, one_minus));
    // nilpotency index of e^2 - e
    auto d = r.add(r.mul(e, e), r.smul(-1, e));
    int nil = 1;
    auto dp = d;
    while (!(dp == r.zero())) {
      dp = r.mul(dp, d);
      ++nil;
      require(nil <= 32, errc::verification_failure, "find_frame: defect not nilpotent");
    }
    auto ehat = lift_idempotent(r, e, nil);
    require(r.star(ehat) == ehat, errc::frame_axiom, "find_frame: lifted idempotent not self-adjoint");
    for (const auto& prev : frame.elems) {
      require(r.mul(prev, ehat) == r.zero() && r.mul(ehat, prev) == r.zero(), errc::frame_axiom,
              "find_frame: lifted idempotents not orthogonal");
    }
    frame.elems.push_back(ehat);
    frame.certs.push_back(pre[k2].cert);
    partial = r.add(partial, ehat);
  }
  auto last = r.add(r.one(), r.smul(-1, partial));
  require(r.mul(last, last) == last && r.star(last) == last, errc::frame_axiom,
          "find_frame: final idempotent invalid");
  frame.elems.push_back(last);
  frame.certs.push_back(pre.back().cert);

  // verification: frame axioms and the gamma images match the target frames
  auto sum = r.zero();
  for (const auto& e : frame.elems) sum = r.add(sum, e);
  require(sum == r.one(), errc::frame_axiom, "find_frame: frame does not sum to 1");
  for (size_t i = 0; i < frame.elems.size(); ++i) {
    for (size_t j = 0; j < frame.elems.size(); ++j)
      if (i != j)
        require(r.mul(frame.elems[i], frame.elems[j]) == r.zero(), errc::frame_axiom,
                "find_frame: frame not orthogonal");
    // image under every gamma: the target frame element for its own quotient,
    // zero elsewhere
    Vec barco = st.bar_of(frame.elems[i]);
    for (size_t gi = 0; gi < gams.size(); ++gi) {
      auto img = gamma_apply(st, gams[gi], barco);
      if (static_cast<int>(gi) == pre[i].gamma_index) {
        require(img.first == pre[i].target.first && img.second == pre[i].target.second, errc::verification_failure,
                "find_frame: wrong image in its own quotient");
      } else {
        require(img.first.is_zero() && img.second.is_zero(), errc::verification_failure,
                "find_frame: nonzero image in a foreign quotient");
      }
    }
  }
  return frame;
}

}  // namespace centdec
