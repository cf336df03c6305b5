#include <catch2/catch_amalgamated.hpp>

#include "centdec/gfield.hpp"

using namespace centdec;

TEST_CASE("factor_poly: stated examples") {
  Ctx det = Ctx::det();
  // x^3 - 1 over F2 = (x+1)(x^2+x+1)
  FpPoly f(2, {1, 0, 0, 1});
  auto fac = factor_poly(f, det);
  REQUIRE(fac.size() == 2);
  REQUIRE(fac[0].first == FpPoly(2, {1, 1}));
  REQUIRE(fac[0].second == 1);
  REQUIRE(fac[1].first == FpPoly(2, {1, 1, 1}));
  REQUIRE(fac[1].second == 1);
  // irreducible quadratic over F2 stays put
  auto fac2 = factor_poly(FpPoly(2, {1, 1, 1}), det);
  REQUIRE(fac2.size() == 1);
  REQUIRE(fac2[0].second == 1);
  // x^2 over F3 = x * x
  auto fac3 = factor_poly(FpPoly(3, {0, 0, 1}), det);
  REQUIRE(fac3.size() == 1);
  REQUIRE(fac3[0].first == FpPoly(3, {0, 1}));
  REQUIRE(fac3[0].second == 2);
}

TEST_CASE("factor_poly: multiply-back on random polynomials, both modes") {
  // the multiply-back identity is certified inside factor_poly; this sweep
  // exercises it across (p, deg) ranges in both modes with a fixed seed
  std::vector<std::pair<i64, int>> ranges{{2, 6}, {3, 4}, {5, 3}};
  for (auto [p, dmax] : ranges) {
    Rng gen(42 + static_cast<u64>(p));
    Ctx det = Ctx::det();
    Ctx rnd = Ctx::rnd(99);
    for (int trial = 0; trial < 500; ++trial) {
      int d = 1 + static_cast<int>(gen.below(static_cast<u64>(dmax)));
      std::vector<i64> c(static_cast<size_t>(d) + 1);
      for (auto& x : c) x = static_cast<i64>(gen.below(static_cast<u64>(p)));
      c[d] = 1 + static_cast<i64>(gen.below(static_cast<u64>(p - 1)));
      FpPoly f(p, c);
      auto fd = factor_poly(f, det);
      auto fr = factor_poly(f, rnd);
      REQUIRE(fd == fr);  // canonical sorted output agrees across modes
      for (auto& [g, m] : fd) REQUIRE(is_irreducible(g, det));
    }
  }
}

TEST_CASE("factor_poly determinism: bit-stable across runs") {
  FpPoly f(3, {2, 1, 0, 2, 1, 1});
  Ctx d1 = Ctx::det(), d2 = Ctx::det();
  REQUIRE(factor_poly(f, d1) == factor_poly(f, d2));
  Ctx r1 = Ctx::rnd(7), r2 = Ctx::rnd(7);
  REQUIRE(factor_poly(f, r1) == factor_poly(f, r2));
}

TEST_CASE("build_field: canonical defining polynomials") {
  Ctx det = Ctx::det();
  Field f2 = build_field(2, 1, det);
  REQUIRE(f2.f == FpPoly(2, {0, 1}));
  Field f4 = build_field(2, 2, det);
  REQUIRE(f4.f == FpPoly(2, {1, 1, 1}));  // the only irreducible quadratic
  Field f9 = build_field(3, 2, det);
  REQUIRE(is_irreducible(f9.f, det));
  REQUIRE(f9.f.deg() == 2);
}

TEST_CASE("field axioms: inverses and Frobenius") {
  Ctx det = Ctx::det();
  for (auto [p, e] : std::vector<std::pair<i64, int>>{{2, 3}, {3, 2}, {5, 2}}) {
    Field k = build_field(p, e, det);
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
      FElt a = f_zero(k);
      for (auto& x : a) x = static_cast<i64>(rng.below(static_cast<u64>(p)));
      if (f_is_zero(a)) continue;
      REQUIRE(f_mul(k, a, f_inv(k, a)) == f_one(k));
      FElt b = f_zero(k);
      for (auto& x : b) x = static_cast<i64>(rng.below(static_cast<u64>(p)));
      // Frobenius additive and multiplicative
      REQUIRE(f_frob(k, f_add(k, a, b)) == f_add(k, f_frob(k, a), f_frob(k, b)));
      REQUIRE(f_frob(k, f_mul(k, a, b)) == f_mul(k, f_frob(k, a), f_frob(k, b)));
    }
  }
}

TEST_CASE("minimal_polynomial of field elements") {
  Ctx det = Ctx::det();
  Field f4 = build_field(2, 2, det);
  // the generator x of F4 has minimal polynomial x^2+x+1
  FElt gen = f_zero(f4);
  gen[1] = 1;
  REQUIRE(minimal_polynomial(f4, gen) == FpPoly(2, {1, 1, 1}));
  REQUIRE(minimal_polynomial(f4, f_one(f4)) == FpPoly(2, {1, 1}));  // x - 1
}

TEST_CASE("fixed_subfield") {
  Ctx det = Ctx::det();
  Field f9 = build_field(3, 2, det);
  // identity automorphism fixes everything
  SubfieldEmbedding all = fixed_subfield(FieldAut{f9, 0}, det);
  REQUIRE(all.sub.order() == 9);
  // Frobenius on F9 fixes F3
  SubfieldEmbedding f3 = fixed_subfield(FieldAut{f9, 1}, det);
  REQUIRE(f3.sub.order() == 3);
  // x -> x^4 on F64 fixes F4
  Field f64 = build_field(2, 6, det);
  SubfieldEmbedding f4 = fixed_subfield(FieldAut{f64, 2}, det);
  REQUIRE(f4.sub.order() == 4);
  // count fixed points: embedding image must consist of fixed elements
  FieldAut sig{f64, 2};
  int fixed = 0;
  for (const FElt& a : f_enumerate(f64))
    if (sig.apply(a) == a) ++fixed;
  REQUIRE(fixed == 4);
  // embedding is multiplicative
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    FElt a = f_zero(f4.sub), b = f_zero(f4.sub);
    for (auto& x : a) x = static_cast<i64>(rng.below(2));
    for (auto& x : b) x = static_cast<i64>(rng.below(2));
    REQUIRE(f4.embed(f_mul(f4.sub, a, b)) == f_mul(f64, f4.embed(a), f4.embed(b)));
    REQUIRE(sig.apply(f4.embed(a)) == f4.embed(a));
  }
}

TEST_CASE("FMat: inverse and arithmetic") {
  Ctx det = Ctx::det();
  Field f5 = build_field(5, 1, det);
  FMat m(f5, 2, 2);
  m.at(0, 0) = f_from_scalar(f5, 2);
  m.at(0, 1) = f_from_scalar(f5, 1);
  m.at(1, 0) = f_from_scalar(f5, 1);
  m.at(1, 1) = f_from_scalar(f5, 2);
  auto inv = fm_inverse(m);
  REQUIRE(inv.has_value());
  REQUIRE(fm_mul(m, *inv) == FMat::identity(f5, 2));
  // singular
  FMat s(f5, 2, 2);
  s.at(0, 0) = f_from_scalar(f5, 1);
  s.at(1, 0) = f_from_scalar(f5, 2);
  REQUIRE(!fm_inverse(s).has_value());
}
