#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace centdec {

using i64 = std::int64_t;
using u64 = std::uint64_t;

enum class errc {
  invalid_argument,
  no_solution,
  dependent_input,
  not_extendable,
  no_adapted_basis,
  ambient_mismatch,
  not_theta_symmetric,
  not_direct_decomposition,
  frame_axiom,
  inconsistent_presentation,
  unsupported_presentation,
  not_involution,
  not_automorphism,
  degenerate_input,
  verification_failure,
  bound_exceeded,
  bad_input,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

// ---- arithmetic mod q, q a prime power up to ~2^62 ----------------------

inline i64 mod_reduce(i64 a, i64 q) {
  a %= q;
  if (a < 0) a += q;
  return a;
}

inline i64 mul_mod(i64 a, i64 b, i64 q) {
  return static_cast<i64>(static_cast<__int128>(a) * b % q);
}

inline i64 add_mod(i64 a, i64 b, i64 q) { return mod_reduce(a + b, q); }
inline i64 sub_mod(i64 a, i64 b, i64 q) { return mod_reduce(a - b, q); }

inline i64 pow_mod(i64 a, u64 e, i64 q) {
  i64 r = 1 % q;
  a = mod_reduce(a, q);
  while (e) {
    if (e & 1) r = mul_mod(r, a, q);
    a = mul_mod(a, a, q);
    e >>= 1;
  }
  return r;
}

inline i64 ipow(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) {
    require(r <= (i64(1) << 62) / (b > 0 ? b : 1), errc::bound_exceeded, "integer power overflow");
    r *= b;
  }
  return r;
}

// p-adic valuation of a mod q = p^m; returns m for a ≡ 0 (mod q).
inline int val_p(i64 a, i64 p, int m, i64 q) {
  a = mod_reduce(a, q);
  if (a == 0) return m;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

// inverse of a unit mod p^m (a coprime to p)
inline i64 inv_unit_mod(i64 a, i64 q) {
  // extended Euclid; q odd prime power or 2^m, a a unit
  i64 g = mod_reduce(a, q), x = 0, y = 1, b = q;
  // invariants: y*a ≡ g (mod q), x*a ≡ b' ...
  i64 r0 = q, r1 = g, s0 = 0, s1 = 1;
  while (r1 != 0) {
    i64 t = r0 / r1;
    i64 r2 = r0 - t * r1;
    i64 s2 = s0 - t * s1;
    r0 = r1; r1 = r2; s0 = s1; s1 = s2;
  }
  require(r0 == 1, errc::invalid_argument, "inv_unit_mod: not a unit");
  return mod_reduce(s0, q);
  (void)x; (void)y; (void)b;
}

inline bool is_prime_u(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// ---- deterministic seedable RNG (splitmix64; stable across platforms) ----

class Rng {
public:
  explicit Rng(u64 seed = 0) : state_(seed) {}

  u64 next() {
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  u64 below(u64 n) {
    if (n <= 1) return 0;
    u64 lim = ~u64(0) - ~u64(0) % n;
    u64 x;
    do {
      x = next();
    } while (x >= lim);
    return x % n;
  }

private:
  u64 state_;
};

// Mode context for the Las Vegas / deterministic switch. Deterministic mode
// replaces every randomized search by a lexicographic scan.
struct Ctx {
  bool deterministic = false;
  mutable Rng rng{12345};

  static Ctx det() { return Ctx{true, Rng(0)}; }
  static Ctx rnd(u64 seed) { return Ctx{false, Rng(seed)}; }
};

}  // namespace centdec
