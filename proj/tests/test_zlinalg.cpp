#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "centdec/zlinalg.hpp"

using namespace centdec;

namespace {

// brute-force row span of integer rows inside a module (oracle)
std::set<Vec> span_oracle(const AbelianModule& mod, const std::vector<Vec>& gens) {
  std::set<Vec> seen;
  std::vector<Vec> frontier{mod.zero()};
  seen.insert(mod.zero());
  while (!frontier.empty()) {
    std::vector<Vec> next;
    for (const Vec& v : frontier)
      for (const Vec& g : gens) {
        Vec w = mod.add(v, mod.reduced(g));
        if (seen.insert(w).second) next.push_back(w);
      }
    frontier = std::move(next);
  }
  return seen;
}

std::set<Vec> to_set(const std::vector<Vec>& v) { return std::set<Vec>(v.begin(), v.end()); }

}  // namespace

TEST_CASE("howell echelon over Z/4: row space preserved and canonical") {
  AbelianModule m(2, {2, 2});
  std::vector<Vec> rows{{2, 1}, {1, 2}};
  Echelon e = howell(rows, 2, 2, 2);
  // row space equality by enumeration over Z/4
  auto lhs = span_oracle(m, rows);
  std::vector<Vec> hrows;
  for (int i = 0; i < e.rank(); ++i) hrows.push_back(e.h[i]);
  auto rhs = span_oracle(m, hrows);
  REQUIRE(lhs == rhs);
  // transform rows reproduce the echelon rows
  for (int i = 0; i < e.rank(); ++i) {
    Vec acc = m.zero();
    for (int j = 0; j < e.nsrc; ++j) acc = m.add(acc, m.smul(e.t[i][j], rows[j]));
    REQUIRE(acc == m.reduced(e.h[i]));
  }
  // canonicality: different generators of the same span give the same form
  std::vector<Vec> rows2{{1, 2}, {3, 3}, {2, 1}};
  REQUIRE(span_oracle(m, rows2) == lhs);
  Echelon e2 = howell(rows2, 2, 2, 2);
  std::vector<Vec> h2;
  for (int i = 0; i < e2.rank(); ++i) h2.push_back(e2.h[i]);
  REQUIRE(hrows == h2);
}

TEST_CASE("howell: identity and duplicate-row cases") {
  Echelon e = howell({{1, 0}, {0, 1}}, 2, 3, 2);
  REQUIRE(e.rank() == 2);
  REQUIRE(e.h[0] == Vec{1, 0});
  REQUIRE(e.h[1] == Vec{0, 1});

  Echelon d = howell({{2}, {2}}, 2, 2, 2);
  REQUIRE(d.rank() == 1);
  REQUIRE(d.h[0] == Vec{2});
}

TEST_CASE("kernel over Z/p^m matches enumeration") {
  // x*A = 0 over Z/8, A = [[2,4],[4,0]]
  i64 p = 2;
  int m = 3;
  std::vector<Vec> a{{2, 4}, {4, 0}};
  Echelon e = howell(a, 2, p, m);
  AbelianModule coef(p, {m, m});
  std::set<Vec> truth;
  for (const Vec& x : coef.enumerate()) {
    Vec img(2, 0);
    for (int j = 0; j < 2; ++j)
      img[j] = mod_reduce(x[0] * a[0][j] + x[1] * a[1][j], 8);
    if (img == Vec{0, 0}) truth.insert(x);
  }
  std::vector<Vec> kg;
  for (const Vec& k : e.kernel) kg.push_back(k);
  REQUIRE(span_oracle(coef, kg) == truth);
}

TEST_CASE("solve_linear: 2x = 2 mod 4 and obstructions") {
  AbelianModule dom(2, {2}), cod(2, {2});
  Mat a(1, 1);
  a.at(0, 0) = 2;
  auto sol = solve_linear(dom, cod, a, Vec{2});
  REQUIRE(sol.has_value());
  REQUIRE(mod_reduce(sol->particular[0] * 2, 4) == 2);
  // kernel = <2>
  REQUIRE(sol->kernel.order == 2);
  REQUIRE(member(sol->kernel, Vec{2}));
  // no solution
  REQUIRE(!solve_linear(dom, cod, a, Vec{1}).has_value());
  // identity system
  AbelianModule d2(2, {2, 2});
  Mat id = Mat::identity(2);
  auto s2 = solve_linear(d2, d2, id, Vec{3, 1});
  REQUIRE(s2.has_value());
  REQUIRE(s2->particular == Vec{3, 1});
  REQUIRE(s2->kernel.order == 1);
}

TEST_CASE("subgroup_basis: canonical, right orders") {
  // ambient Z4 (+) Z2 stored ascending as exponents {1,2}: coord0 mod 2, coord1 mod 4
  AbelianModule m(2, {1, 2});
  // printed example {(1,0),(1,1)} in Z4×Z2 -> ascending coords {(0,1),(1,1)}
  SubModule s = subgroup_basis({{0, 1}, {1, 1}}, m);
  REQUIRE(s.order == 8);
  REQUIRE(s.is_full());
  // single element of order 2: printed (2,1) -> ascending (1,2)
  SubModule t = subgroup_basis({{1, 2}}, m);
  REQUIRE(t.order == 2);
  REQUIRE(t.basis.size() == 1);
  REQUIRE(m.order_of(t.basis[0]) == 2);
  // empty
  REQUIRE(subgroup_basis({}, m).order == 1);
  // canonicality under regeneration
  auto elems = t.enumerate();
  SubModule t2 = subgroup_basis(elems, m);
  REQUIRE(t == t2);
}

TEST_CASE("subgroup order equals brute-force count on modules of order <= 2^8") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    i64 p = (trial % 2 == 0) ? 2 : 3;
    std::vector<int> exps;
    i64 order = 1;
    while (true) {
      int e = 1 + static_cast<int>(rng.below(2));
      if (order * ipow(p, e) > 256) break;
      exps.push_back(e);
      order *= ipow(p, e);
      if (static_cast<int>(rng.below(3)) == 0) break;
    }
    if (exps.empty()) continue;
    std::sort(exps.begin(), exps.end());
    AbelianModule m(p, exps);
    int ng = 1 + static_cast<int>(rng.below(3));
    std::vector<Vec> gens;
    for (int i = 0; i < ng; ++i) {
      Vec v(m.rank());
      for (int j = 0; j < m.rank(); ++j) v[j] = static_cast<i64>(rng.below(m.modulus(j)));
      gens.push_back(v);
    }
    SubModule s = submodule(m, gens);
    auto truth = span_oracle(m, gens);
    REQUIRE(s.order == static_cast<i64>(truth.size()));
    REQUIRE(to_set(s.enumerate()) == truth);
    // basis independence: order product
    i64 prod = 1;
    for (i64 o : s.basis_order) prod *= o;
    REQUIRE(prod == s.order);
    // membership agrees
    for (const Vec& v : m.enumerate())
      REQUIRE(member(s, v) == (truth.count(v) > 0));
  }
}

TEST_CASE("intersect: example and laws") {
  AbelianModule m(2, {1, 2});  // Z2 (+) Z4 (printed: Z4 x Z2)
  // printed <(1,0)> ∩ <(1,1)> = <(2,0)> -> ascending coords: <(0,1)> ∩ <(1,1)> = <(0,2)>
  SubModule a = submodule(m, {{0, 1}});
  SubModule b = submodule(m, {{1, 1}});
  SubModule c = intersect(a, b);
  REQUIRE(c == submodule(m, {{0, 2}}));
  REQUIRE(intersect(a, a) == a);
  REQUIRE(intersect(a, submodule_zero(m)).order == 1);
  // randomized law check against enumeration
  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    AbelianModule mm(2, {1, 1, 2});
    auto rnd_sub = [&]() {
      std::vector<Vec> g;
      for (int i = 0; i < 2; ++i) {
        Vec v(mm.rank());
        for (int j = 0; j < mm.rank(); ++j) v[j] = static_cast<i64>(rng.below(mm.modulus(j)));
        g.push_back(v);
      }
      return submodule(mm, g);
    };
    SubModule x = rnd_sub(), y = rnd_sub();
    auto ex = to_set(x.enumerate());
    auto ey = to_set(y.enumerate());
    std::set<Vec> truth;
    for (const Vec& v : ex)
      if (ey.count(v)) truth.insert(v);
    REQUIRE(to_set(intersect(x, y).enumerate()) == truth);
  }
}

TEST_CASE("hom_constraints") {
  // Z_p -> Z_{p^2}: p | F11
  AbelianModule a(3, {1}), b(3, {2});
  Mat c = hom_constraints(a, b);
  REQUIRE(c.at(0, 0) == 1);
  // homocyclic: no constraints
  AbelianModule h(3, {2, 2});
  Mat ch = hom_constraints(h, h);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) REQUIRE(ch.at(i, j) == 0);
  // Z4(+)Z2 to itself (ascending storage {1,2}): constraint 2 | F_{12}
  AbelianModule m(2, {1, 2});
  Mat cm = hom_constraints(m, m);
  REQUIRE(cm.at(0, 1) == 1);  // from the Z2 part into the Z4 part
  REQUIRE(cm.at(0, 0) == 0);
  REQUIRE(cm.at(1, 0) == 0);
  REQUIRE(cm.at(1, 1) == 0);
  // every matrix satisfying the pattern defines a map respecting orders
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Mat f(m.rank(), m.rank());
    for (int i = 0; i < m.rank(); ++i)
      for (int j = 0; j < m.rank(); ++j)
        f.at(i, j) = ipow(2, static_cast<int>(cm.at(i, j))) * static_cast<i64>(rng.below(4));
    ModMatrix mm(m, m, f);
    for (int i = 0; i < m.rank(); ++i) {
      Vec g = m.zero();
      g[i] = 1;
      Vec img = mm.apply(g);
      Vec killed = m.smul(m.modulus(i), img);
      REQUIRE(m.is_zero(killed));
    }
  }
}

TEST_CASE("quotient structure") {
  AbelianModule m(2, {1, 2});
  SubModule n = submodule(m, {{1, 2}});
  QuotientModule q = quotient(m, n);
  REQUIRE(q.qmod.order() == 4);
  // projection is a homomorphism with kernel n
  for (const Vec& v : m.enumerate())
    for (const Vec& w : m.enumerate()) {
      Vec pv = q.project(v), pw = q.project(w);
      REQUIRE(q.project(m.add(v, w)) == q.qmod.add(pv, pw));
    }
  for (const Vec& v : m.enumerate()) REQUIRE(q.qmod.is_zero(q.project(v)) == member(n, v));
  // lifts project back to the coordinates
  for (const Vec& c : q.qmod.enumerate()) REQUIRE(q.project(q.lift(c)) == c);
}

TEST_CASE("extend_to_basis") {
  AbelianModule m(2, {1, 2});
  // {(1,1)} printed in Z4×Z2 -> ascending (1,1)
  auto b = extend_to_basis({{1, 1}}, m);
  REQUIRE(b.size() == 2);
  i64 prod = 1;
  for (const Vec& v : b) prod *= m.order_of(v);
  REQUIRE(prod == 8);
  REQUIRE(submodule(m, b).is_full());
  // empty input -> standard basis of Z_p^2
  AbelianModule e(5, {1, 1});
  auto sb = extend_to_basis({}, e);
  REQUIRE(sb.size() == 2);
  // full basis input unchanged (superset property)
  auto fb = extend_to_basis(b, m);
  REQUIRE(fb == b);
  // dependent input errors
  REQUIRE_THROWS_AS(extend_to_basis({{1, 1}, {1, 1}}, m), error);
  // non-extendable pure case: <(1,2)> in Z2 (+) Z8
  AbelianModule m28(2, {1, 3});
  REQUIRE_THROWS_AS(extend_to_basis({{1, 2}}, m28), error);
}

TEST_CASE("adapted_basis: identities and error case") {
  AbelianModule m(2, {1, 2});
  // n = 0: all c_i = e_i
  auto ab0 = adapted_basis(m, submodule_zero(m));
  REQUIRE(ab0.exps == std::vector<int>{1, 2});
  // n = ambient: all c_i = 0
  auto abf = adapted_basis(m, submodule_full(m));
  REQUIRE(abf.exps == std::vector<int>{0, 0});
  // printed example: ambient Z4×Z2, n = <(2,1)> -> ascending n = <(1,2)>
  SubModule n = submodule(m, {{1, 2}});
  auto ab = adapted_basis(m, n);  // postconditions checked inside
  REQUIRE(ab.basis.size() == 2);
  // the documented impossible pair: Z2 (+) Z8 with <(1,2)>
  AbelianModule m28(2, {1, 3});
  SubModule bad = submodule(m28, {{1, 2}});
  REQUIRE_THROWS_AS(adapted_basis(m28, bad), error);
  // randomized: whenever adapted_basis succeeds its identities hold (checked
  // internally); run a sweep for crashes/consistency
  Rng rng(5);
  int successes = 0;
  for (int trial = 0; trial < 60; ++trial) {
    AbelianModule mm(2, {1, 2, 2});
    Vec v(mm.rank());
    for (int j = 0; j < mm.rank(); ++j) v[j] = static_cast<i64>(rng.below(mm.modulus(j)));
    SubModule nn = submodule(mm, {v});
    try {
      adapted_basis(mm, nn);
      ++successes;
    } catch (const error& e) {
      REQUIRE(e.code() == errc::no_adapted_basis);
    }
  }
  REQUIRE(successes > 0);
}

namespace {

// brute force: all direct decompositions ambient = X ⊕ Y with n ≤ X; returns
// the minimum |X| (oracle for minimal_direct_factor)
i64 min_factor_oracle(const AbelianModule& m, const SubModule& n) {
  auto elems = m.enumerate();
  // enumerate subgroup pairs generated by up to rank generators each: use all
  // subgroups via closure of subsets is too big; instead enumerate subgroups
  // as spans of subsets of size <= 2 (sufficient for the small test modules,
  // which have rank <= 2 summands... rank 3 modules need 3 generators).
  std::vector<SubModule> subs;
  std::set<Mat*> dummy;
  std::set<std::vector<i64>> seen;
  int r = m.rank();
  std::vector<size_t> idx(r + 1, 0);
  // generate random-ish subset spans exhaustively for small modules
  std::vector<std::vector<Vec>> gensets;
  size_t ne = elems.size();
  if (r <= 2) {
    for (size_t i = 0; i < ne; ++i)
      for (size_t j = i; j < ne; ++j) gensets.push_back({elems[i], elems[j]});
  } else {
    for (size_t i = 0; i < ne; ++i)
      for (size_t j = i; j < ne; ++j)
        for (size_t k = j; k < ne; ++k) gensets.push_back({elems[i], elems[j], elems[k]});
  }
  for (auto& g : gensets) {
    SubModule s = submodule(m, g);
    if (seen.insert(s.hnf.a).second) subs.push_back(s);
  }
  i64 best = m.order();
  for (const SubModule& x : subs) {
    if (!sub_leq(n, x)) continue;
    for (const SubModule& y : subs) {
      if (x.order * y.order != m.order()) continue;
      if (intersect(x, y).order != 1) continue;
      best = std::min(best, x.order);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("minimal_direct_factor: examples and brute-force minimality") {
  AbelianModule m(2, {1, 2});
  // n = 0 -> X = 0
  auto df0 = minimal_direct_factor(m, submodule_zero(m));
  REQUIRE(df0.x.order == 1);
  REQUIRE(df0.y.order == 8);
  // n = ambient -> X = ambient
  auto dff = minimal_direct_factor(m, submodule_full(m));
  REQUIRE(dff.x.is_full());
  REQUIRE(dff.y.order == 1);
  // printed (Z4×Z2, <(2,1)>): <(2,1)> is itself a direct factor (complement
  // <(1,0)>), so the brute-force minimum is X = n of order 2
  SubModule n = submodule(m, {{1, 2}});
  auto df = minimal_direct_factor(m, n);
  REQUIRE(df.x.order == min_factor_oracle(m, n));
  REQUIRE(df.x.order == 2);
  REQUIRE(df.y.order == 4);

  // the no-adapted-basis pair still has a minimal factor (the whole module)
  AbelianModule m28(2, {1, 3});
  SubModule bad = submodule(m28, {{1, 2}});
  auto dfb = minimal_direct_factor(m28, bad);
  REQUIRE(dfb.x.order == min_factor_oracle(m28, bad));
  REQUIRE(dfb.x.order == 16);  // no proper factor contains it

  // randomized minimality vs oracle on order <= 2^5 modules
  Rng rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    AbelianModule mm(2, {1, 2, 2});
    Vec v(mm.rank()), w(mm.rank());
    for (int j = 0; j < mm.rank(); ++j) {
      v[j] = static_cast<i64>(rng.below(mm.modulus(j)));
      w[j] = static_cast<i64>(rng.below(mm.modulus(j)));
    }
    SubModule nn = submodule(mm, {v, w});
    auto d = minimal_direct_factor(mm, nn);
    REQUIRE(d.x.order == min_factor_oracle(mm, nn));
  }
}

TEST_CASE("echelon canonicality under random regeneration") {
  Rng rng(99);
  AbelianModule m(3, {1, 2});
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vec> g;
    for (int i = 0; i < 2; ++i) {
      Vec v(m.rank());
      for (int j = 0; j < m.rank(); ++j) v[j] = static_cast<i64>(rng.below(m.modulus(j)));
      g.push_back(v);
    }
    SubModule s = submodule(m, g);
    // regenerate from random elements of s
    auto elems = s.enumerate();
    std::vector<Vec> g2;
    for (int i = 0; i < 4; ++i) g2.push_back(elems[rng.below(elems.size())]);
    SubModule s2 = submodule(m, g2);
    if (to_set(s2.enumerate()) == to_set(elems)) REQUIRE(s == s2);
  }
}
