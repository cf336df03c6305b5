#pragma once

// Finite class-2 p-groups via consistent polycyclic presentations: collection
// and normal forms, subgroup pivot sequences, center/derived/Frattini, the
// commutation bilinear maps Bi(P) and Bi(P,P'), central products and
// quotients by central subgroups.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "centdec/bilinear.hpp"

namespace centdec {

struct GroupElement {
  Vec row;  // exponent row, coordinate i in [0, p^{f_i})
  bool operator==(const GroupElement& o) const { return row == o.row; }
  bool operator<(const GroupElement& o) const { return row < o.row; }
};

class ClassTwoGroup {
public:
  i64 p = 2;
  std::vector<std::string> names;
  std::vector<int> rel_exp;               // f_i
  std::vector<Vec> power_tail;            // g_i^{p^{f_i}}; zero row when trivial
  std::vector<std::vector<Vec>> comm_tail;  // [j][i] = [g_j, g_i] for j > i
  std::vector<bool> central_gen;          // trivial tails both ways

  int ngens() const { return static_cast<int>(names.size()); }
  i64 rel_order(int i) const { return ipow(p, rel_exp[i]); }

  i64 order() const {
    i64 o = 1;
    for (int i = 0; i < ngens(); ++i) o *= rel_order(i);
    return o;
  }

  GroupElement identity() const { return GroupElement{Vec(ngens(), 0)}; }

  bool is_identity(const GroupElement& x) const {
    for (i64 v : x.row)
      if (v != 0) return false;
    return true;
  }

  // [g_j, g_i] as a row for any pair (inverse tail for j < i)
  Vec comm_row(int j, int i) const {
    int n = ngens();
    if (j == i) return Vec(n, 0);
    if (j > i) return comm_tail[j][i];
    // [g_j, g_i] = [g_i, g_j]^{-1}: negate the central row
    Vec r = comm_tail[i][j];
    return central_negate(r);
  }

  // normal form multiplication by collection; corrections are central rows
  GroupElement mult(const GroupElement& a, const GroupElement& b) const {
    int n = ngens();
    Vec w = a.row;
    std::vector<i64> ctr(n, 0);  // pending central corrections, integer exponents
    for (int k = 0; k < n; ++k) {
      i64 e = b.row[k];
      if (e == 0) continue;
      for (int l = k + 1; l < n; ++l) {
        if (w[l] == 0) continue;
        const Vec& c = comm_tail[l][k];
        bool nz = false;
        for (i64 v : c)
          if (v) nz = true;
        if (!nz) continue;
        i64 mult = w[l] * e;  // bounded by p^{2 f_max}
        for (int d = 0; d < n; ++d) ctr[d] += mult * c[d];
      }
      w[k] += e;
      i64 ro = rel_order(k);
      if (w[k] >= ro) {
        i64 times = w[k] / ro;
        w[k] %= ro;
        for (int d = 0; d < n; ++d) ctr[d] += times * power_tail[k][d];
      }
    }
    absorb_central(w, ctr);
    return GroupElement{std::move(w)};
  }

  GroupElement pow(GroupElement x, i64 e) const {
    if (e < 0) {
      i64 o = element_order(x);
      e = mod_reduce(e, o);
    }
    GroupElement r = identity();
    while (e) {
      if (e & 1) r = mult(r, x);
      x = mult(x, x);
      e >>= 1;
    }
    return r;
  }

  GroupElement inverse(const GroupElement& x) const { return pow(x, element_order(x) - 1); }

  GroupElement conj_comm(const GroupElement& x, const GroupElement& y) const {
    // [x, y] = x^{-1} y^{-1} x y
    return mult(mult(inverse(x), inverse(y)), mult(x, y));
  }

  i64 element_order(const GroupElement& x) const {
    GroupElement y = x;
    i64 o = 1;
    while (!is_identity(y)) {
      GroupElement z = y;
      for (i64 i = 1; i < p; ++i) z = mult(z, y);
      y = z;
      o *= p;
      require(o <= order() * p, errc::verification_failure, "element_order: runaway");
    }
    return o;
  }

  GroupElement gen(int i) const {
    GroupElement x = identity();
    x.row[i] = 1;
    return x;
  }

  // element from an arbitrary integer exponent row (with carries)
  GroupElement from_row(const Vec& raw) const {
    GroupElement x = identity();
    for (int i = 0; i < ngens(); ++i) {
      if (raw[i] == 0) continue;
      i64 e = raw[i];
      if (e < 0) {
        GroupElement gi = gen(i);
        x = mult(x, inverse(pow(gi, -e)));
      } else {
        x = mult(x, pow(gen(i), e));
      }
    }
    return x;
  }

  // a word over generator names, e.g. collect({{2,1},{0,-1}}) = g2 * g0^{-1}
  GroupElement collect(const std::vector<std::pair<int, i64>>& word) const {
    GroupElement x = identity();
    for (auto& [g, e] : word) {
      require(g >= 0 && g < ngens(), errc::invalid_argument, "collect: bad generator index");
      if (e >= 0)
        x = mult(x, pow(gen(g), e));
      else
        x = mult(x, inverse(pow(gen(g), -e)));
    }
    return x;
  }

  bool commutes(const GroupElement& x, const GroupElement& y) const { return is_identity(conj_comm(x, y)); }

  // exponent bound: exp(P) divides p^{2 fmax} for class-2 presentations
  int exponent_bound() const {
    int f = 1;
    for (int e : rel_exp) f = std::max(f, e);
    return 2 * f + 1;
  }

private:
  // negate a central row (with carries through the central block)
  Vec central_negate(const Vec& r) const {
    int n = ngens();
    std::vector<i64> ctr(n, 0);
    for (int d = 0; d < n; ++d) ctr[d] = -r[d];
    Vec w(n, 0);
    absorb_central(w, ctr);
    return w;
  }

  // multiply pending central corrections (supported on central generators)
  // into w, handling carries via the central power tails.
  void absorb_central(Vec& w, std::vector<i64>& ctr) const {
    int n = ngens();
    for (int d = 0; d < n; ++d) {
      if (ctr[d] == 0 && w[d] < rel_order(d) && w[d] >= 0) continue;
      i64 total = w[d] + ctr[d];
      i64 ro = rel_order(d);
      i64 times = total >= 0 ? total / ro : -((-total + ro - 1) / ro);
      w[d] = total - times * ro;
      ctr[d] = 0;
      if (times != 0)
        for (int e = d + 1; e < n; ++e) ctr[e] += times * power_tail[d][e];
    }
  }
};

// Build and validate a presentation. Commutator tails are stored for j > i as
// [g_j, g_i]. Validation: tails supported on later, central generators;
// consistency by generator-triple associativity and power checks.
inline ClassTwoGroup make_class_two_group(i64 p, std::vector<std::string> names, std::vector<int> rel_exp,
                                          std::vector<Vec> power_tails,
                                          std::map<std::pair<int, int>, Vec> comm_tails) {
  ClassTwoGroup g;
  g.p = p;
  require(is_prime_u(p), errc::bad_input, "group: p not prime");
  int n = static_cast<int>(names.size());
  require(static_cast<int>(rel_exp.size()) == n, errc::bad_input, "group: relative order count mismatch");
  for (int e : rel_exp) require(e >= 1 && e <= 40, errc::bad_input, "group: bad relative order");
  {
    std::set<std::string> seen(names.begin(), names.end());
    require(static_cast<int>(seen.size()) == n, errc::bad_input, "group: duplicate generator names");
  }
  g.names = std::move(names);
  g.rel_exp = std::move(rel_exp);
  require(ipow(p, g.exponent_bound()) > 0, errc::bound_exceeded, "group: exponent bound overflow");

  g.power_tail.assign(n, Vec(n, 0));
  require(static_cast<int>(power_tails.size()) == n, errc::bad_input, "group: power tail count mismatch");
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(power_tails[i].size()) == n, errc::bad_input, "group: power tail shape");
    for (int j = 0; j < n; ++j) {
      i64 v = mod_reduce(power_tails[i][j], g.rel_order(j));
      require(j > i || v == 0, errc::unsupported_presentation,
              "group: power tail of " + g.names[i] + " not supported on later generators");
      g.power_tail[i][j] = v;
    }
  }
  g.comm_tail.assign(n, std::vector<Vec>(n, Vec(n, 0)));
  for (auto& [ji, row] : comm_tails) {
    auto [j, i] = ji;
    require(j > i && j < n && i >= 0, errc::bad_input, "group: commutator tail index");
    require(static_cast<int>(row.size()) == n, errc::bad_input, "group: commutator tail shape");
    for (int k = 0; k < n; ++k) g.comm_tail[j][i][k] = mod_reduce(row[k], g.rel_order(k));
  }

  // central generators: trivial commutator tails both ways
  g.central_gen.assign(n, true);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i)
      for (int k = 0; k < n; ++k)
        if (g.comm_tail[j][i][k] != 0) {
          g.central_gen[j] = false;
          g.central_gen[i] = false;
        }
  // tail support condition: all tails live on central generators
  auto check_support = [&](const Vec& row, const std::string& what) {
    for (int k = 0; k < n; ++k)
      require(row[k] == 0 || g.central_gen[k], errc::unsupported_presentation,
              "group: " + what + " not supported on central generators");
  };
  for (int i = 0; i < n; ++i) check_support(g.power_tail[i], "power tail of " + g.names[i]);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) check_support(g.comm_tail[j][i], "[" + g.names[j] + "," + g.names[i] + "]");
  // central power tails point later within the central block (checked above via j > i)

  // consistency: associativity on all generator triples and power overlaps
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        GroupElement lhs = g.mult(g.gen(i), g.mult(g.gen(j), g.gen(k)));
        GroupElement rhs = g.mult(g.mult(g.gen(i), g.gen(j)), g.gen(k));
        require(lhs == rhs, errc::inconsistent_presentation,
                "group: associativity fails on (" + g.names[i] + "," + g.names[j] + "," + g.names[k] + ")");
      }
  for (int i = 0; i < n; ++i) {
    // g_i^{p^{f_i}} must collect to the declared tail
    GroupElement x = g.pow(g.gen(i), g.rel_order(i));
    require(x.row == g.power_tail[i], errc::inconsistent_presentation,
            "group: power relation fails for " + g.names[i]);
    // tails must commute with everything (class 2: derived subgroup central)
    GroupElement t{g.power_tail[i]};
    for (int j = 0; j < n; ++j)
      require(g.commutes(t, g.gen(j)), errc::inconsistent_presentation,
              "group: power tail of " + g.names[i] + " not central");
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      GroupElement t{g.comm_tail[j][i]};
      for (int k = 0; k < n; ++k)
        require(g.commutes(t, g.gen(k)), errc::inconsistent_presentation, "group: commutator tail not central");
      // declared tail matches the collected commutator
      require(g.conj_comm(g.gen(j), g.gen(i)) == t, errc::inconsistent_presentation,
              "group: commutator tail mismatch for [" + g.names[j] + "," + g.names[i] + "]");
    }
  return g;
}

// ---------------------------------------------------------------------------
// Subgroups as induced pivot sequences
// ---------------------------------------------------------------------------

struct GroupSubgroup {
  const ClassTwoGroup* g = nullptr;
  std::vector<GroupElement> gens;                 // as provided
  std::vector<std::optional<GroupElement>> pivot;  // by depth
  std::vector<int> lead_val;                      // valuation of the leading exponent
  i64 order = 1;

  std::vector<int> pivot_depths() const {
    std::vector<int> d;
    for (int i = 0; i < static_cast<int>(pivot.size()); ++i)
      if (pivot[i]) d.push_back(i);
    return d;
  }

  std::vector<GroupElement> pivot_list() const {
    std::vector<GroupElement> v;
    for (const auto& pv : pivot)
      if (pv) v.push_back(*pv);
    return v;
  }
};

namespace detail {

inline int depth_of(const Vec& row) {
  for (size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0) return static_cast<int>(i);
  return -1;
}

}  // namespace detail

// sift x by the pivots; returns the residual and (optionally) the polycyclic
// coordinates used at each pivot depth
inline GroupElement sift(const GroupSubgroup& s, GroupElement x, std::map<int, i64>* coords = nullptr) {
  const ClassTwoGroup& g = *s.g;
  if (coords) coords->clear();
  int fuel = 64 * g.ngens() * g.exponent_bound();
  for (;;) {
    int d = detail::depth_of(x.row);
    if (d < 0) return x;
    if (!s.pivot[d]) return x;
    i64 lead = ipow(g.p, s.lead_val[d]);
    if (x.row[d] % lead != 0) return x;
    i64 quo = x.row[d] / lead;
    if (coords) (*coords)[d] += quo;
    x = g.mult(g.inverse(g.pow(*s.pivot[d], quo)), x);
    require(x.row[d] == 0, errc::verification_failure, "sift: leading coordinate not cleared");
    require(--fuel > 0, errc::unsupported_presentation, "sift: reduction does not terminate");
  }
}

inline GroupSubgroup subgroup_closure(const ClassTwoGroup& g, const std::vector<GroupElement>& gens) {
  GroupSubgroup s;
  s.g = &g;
  s.gens = gens;
  s.pivot.assign(g.ngens(), std::nullopt);
  s.lead_val.assign(g.ngens(), 0);
  std::vector<GroupElement> queue = gens;
  auto enqueue_obligations = [&](const GroupElement& h, int d) {
    // wraparound power and commutators with existing pivots
    queue.push_back(g.pow(h, ipow(g.p, g.rel_exp[d] - s.lead_val[d])));
    for (const auto& pv : s.pivot)
      if (pv) {
        queue.push_back(g.conj_comm(h, *pv));
      }
  };
  while (!queue.empty()) {
    GroupElement x = queue.back();
    queue.pop_back();
    x = sift(s, x);
    int d = detail::depth_of(x.row);
    if (d < 0) continue;
    int a = val_p(x.row[d], g.p, g.rel_exp[d], g.rel_order(d));
    // normalize the leading coefficient to an exact p-power
    i64 unit = x.row[d] / ipow(g.p, a);
    if (unit != 1) {
      i64 iu = inv_unit_mod(unit, g.rel_order(d));
      x = g.pow(x, iu);
      require(x.row[d] == ipow(g.p, a) % g.rel_order(d), errc::verification_failure, "closure: normalization failed");
    }
    if (!s.pivot[d]) {
      s.pivot[d] = x;
      s.lead_val[d] = a;
      enqueue_obligations(x, d);
    } else if (a < s.lead_val[d]) {
      GroupElement old = *s.pivot[d];
      s.pivot[d] = x;
      s.lead_val[d] = a;
      queue.push_back(old);
      enqueue_obligations(x, d);
    } else {
      // a >= lead_val[d] but sift failed to clear: cannot happen
      fail(errc::verification_failure, "closure: sift left a reducible element");
    }
  }
  s.order = 1;
  for (int d = 0; d < g.ngens(); ++d)
    if (s.pivot[d]) s.order *= ipow(g.p, g.rel_exp[d] - s.lead_val[d]);
  return s;
}

inline bool contains(const GroupSubgroup& s, const GroupElement& x) {
  GroupElement r = sift(s, x);
  return s.g->is_identity(r);
}

inline bool subgroup_leq(const GroupSubgroup& a, const GroupSubgroup& b) {
  for (const auto& pv : a.pivot)
    if (pv && !contains(b, *pv)) return false;
  return true;
}

inline bool subgroup_eq(const GroupSubgroup& a, const GroupSubgroup& b) {
  return a.order == b.order && subgroup_leq(a, b);
}

inline GroupSubgroup subgroup_join(const GroupSubgroup& a, const GroupSubgroup& b) {
  std::vector<GroupElement> gens = a.pivot_list();
  for (const auto& x : b.pivot_list()) gens.push_back(x);
  return subgroup_closure(*a.g, gens);
}

// all elements (guarded)
inline std::vector<GroupElement> subgroup_elements(const GroupSubgroup& s, i64 guard = i64(1) << 16) {
  require(s.order <= guard, errc::bound_exceeded, "subgroup too large to enumerate");
  const ClassTwoGroup& g = *s.g;
  std::vector<GroupElement> out{g.identity()};
  for (int d = 0; d < g.ngens(); ++d) {
    if (!s.pivot[d]) continue;
    i64 m = ipow(g.p, g.rel_exp[d] - s.lead_val[d]);
    std::vector<GroupElement> next;
    for (const auto& base : out) {
      GroupElement cur = base;
      for (i64 t = 0; t < m; ++t) {
        next.push_back(cur);
        if (t + 1 < m) cur = g.mult(cur, *s.pivot[d]);
      }
    }
    out = std::move(next);
  }
  return out;
}

inline bool subgroup_is_abelian(const GroupSubgroup& s) {
  auto pl = s.pivot_list();
  for (size_t i = 0; i < pl.size(); ++i)
    for (size_t j = i + 1; j < pl.size(); ++j)
      if (!s.g->commutes(pl[i], pl[j])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Standard subgroups
// ---------------------------------------------------------------------------

inline GroupSubgroup derived_subgroup(const ClassTwoGroup& g) {
  std::vector<GroupElement> gens;
  for (int j = 0; j < g.ngens(); ++j)
    for (int i = 0; i < j; ++i) gens.push_back(GroupElement{g.comm_tail[j][i]});
  return subgroup_closure(g, gens);
}

inline GroupSubgroup frattini_subgroup(const ClassTwoGroup& g) {
  std::vector<GroupElement> gens;
  for (int j = 0; j < g.ngens(); ++j)
    for (int i = 0; i < j; ++i) gens.push_back(GroupElement{g.comm_tail[j][i]});
  for (int i = 0; i < g.ngens(); ++i) gens.push_back(g.pow(g.gen(i), g.p));
  return subgroup_closure(g, gens);
}

inline GroupSubgroup trivial_subgroup(const ClassTwoGroup& g) { return subgroup_closure(g, {}); }

inline GroupSubgroup full_subgroup(const ClassTwoGroup& g) {
  std::vector<GroupElement> gens;
  for (int i = 0; i < g.ngens(); ++i) gens.push_back(g.gen(i));
  return subgroup_closure(g, gens);
}

// ---------------------------------------------------------------------------
// Module views of abelian sections
// ---------------------------------------------------------------------------

// A central (or abelian) subgroup as a Z/p^e-module with an effective log.
struct CentralModule {
  const ClassTwoGroup* g = nullptr;
  GroupSubgroup sub;
  AbelianModule mod;                 // abstract module, ascending invariants
  std::vector<GroupElement> basis;   // basis elements
  // internals: pivot order and quotient machinery over the pivot coordinates
  std::vector<int> depths;
  std::vector<i64> pivot_mod;        // p^{m_k}
  QuotientModule qm;                 // Z^r / relations

  Vec log(const GroupElement& x) const {
    std::map<int, i64> co;
    GroupElement r = sift(sub, x, &co);
    require(g->is_identity(r), errc::invalid_argument, "CentralModule::log: element not in the subgroup");
    Vec raw(depths.size(), 0);
    for (size_t k = 0; k < depths.size(); ++k) {
      auto it = co.find(depths[k]);
      raw[k] = it == co.end() ? 0 : it->second;
    }
    return qm.project(raw);
  }

  GroupElement exp(const Vec& coords) const {
    GroupElement x = g->identity();
    for (size_t k = 0; k < basis.size(); ++k)
      if (coords[k] != 0) x = g->mult(x, g->pow(basis[k], coords[k]));
    return x;
  }
};

inline CentralModule central_module(const ClassTwoGroup& g, const GroupSubgroup& s) {
  require(subgroup_is_abelian(s), errc::invalid_argument, "central_module: subgroup not abelian");
  CentralModule cm;
  cm.g = &g;
  cm.sub = s;
  cm.depths = s.pivot_depths();
  int r = static_cast<int>(cm.depths.size());
  int mexp = 1;
  for (int k = 0; k < r; ++k) {
    int d = cm.depths[k];
    cm.pivot_mod.push_back(ipow(g.p, g.rel_exp[d] - s.lead_val[d]));
    i64 o = g.element_order(*s.pivot[d]);
    int e = 0;
    while (o > 1) {
      o /= g.p;
      ++e;
    }
    mexp = std::max(mexp, e);
  }
  // raw coordinate module Z^r mod p^mexp... relations give the true structure
  AbelianModule raw;
  raw.p = g.p;
  raw.exps.assign(r, mexp);
  std::vector<Vec> rel;
  for (int k = 0; k < r; ++k) {
    // pivot_k^{p^{m_k}} expressed over the deeper pivots
    GroupElement w = g.pow(*s.pivot[cm.depths[k]], cm.pivot_mod[k]);
    std::map<int, i64> co;
    GroupElement res = sift(s, w, &co);
    require(g.is_identity(res), errc::verification_failure, "central_module: wrap not in subgroup");
    Vec row(r, 0);
    row[k] = mod_reduce(row[k] + cm.pivot_mod[k], ipow(g.p, mexp));
    for (int l = 0; l < r; ++l) {
      auto it = co.find(cm.depths[l]);
      if (it != co.end()) row[l] = sub_mod(row[l], it->second, ipow(g.p, mexp));
    }
    rel.push_back(row);
  }
  SubModule reln = submodule(raw, rel);
  cm.qm = quotient(raw, reln);
  cm.mod = cm.qm.qmod;
  for (int k = 0; k < cm.mod.rank(); ++k) {
    Vec lift = cm.qm.lifts[k];
    GroupElement b = g.identity();
    for (int l = 0; l < r; ++l)
      if (lift[l] != 0) b = g.mult(b, g.pow(*s.pivot[cm.depths[l]], lift[l]));
    cm.basis.push_back(b);
    require(g.element_order(b) == cm.mod.modulus(k), errc::verification_failure,
            "central_module: basis order mismatch");
  }
  return cm;
}

// The quotient P/N for a normal N containing P', as a module with log/rep.
struct QuotientView {
  const ClassTwoGroup* g = nullptr;
  GroupSubgroup n;
  AbelianModule vmod;
  std::vector<GroupElement> reps;  // coset representatives of the basis
  QuotientModule qm;               // over the raw exponent coordinates

  Vec log(const GroupElement& x) const {
    Vec raw(x.row.begin(), x.row.end());
    return qm.project(raw);
  }

  GroupElement rep(const Vec& coords) const {
    GroupElement x = g->identity();
    for (size_t k = 0; k < reps.size(); ++k)
      if (coords[k] != 0) x = g->mult(x, g->pow(reps[k], coords[k]));
    return x;
  }
};

inline QuotientView quotient_view(const ClassTwoGroup& g, const GroupSubgroup& n) {
  // require P' <= n so the quotient is abelian and log is linear
  GroupSubgroup der = derived_subgroup(g);
  require(subgroup_leq(der, n), errc::invalid_argument, "quotient_view: N must contain the derived subgroup");
  QuotientView qv;
  qv.g = &g;
  qv.n = n;
  int nn = g.ngens();
  int M = g.exponent_bound();
  AbelianModule raw;
  raw.p = g.p;
  raw.exps.assign(nn, M);
  i64 q = ipow(g.p, M);
  std::vector<Vec> rel;
  for (int i = 0; i < nn; ++i) {
    Vec row(nn, 0);
    row[i] = g.rel_order(i) % q;
    for (int j = 0; j < nn; ++j) row[j] = sub_mod(row[j], g.power_tail[i][j], q);
    rel.push_back(row);
  }
  for (const auto& pv : n.pivot_list()) {
    Vec row(nn);
    for (int j = 0; j < nn; ++j) row[j] = mod_reduce(pv.row[j], q);
    rel.push_back(row);
  }
  SubModule reln = submodule(raw, rel);
  qv.qm = quotient(raw, reln);
  qv.vmod = qv.qm.qmod;
  for (int k = 0; k < qv.vmod.rank(); ++k) {
    qv.reps.push_back(g.from_row(qv.qm.lifts[k]));
    // representative projects to the unit coordinate
    Vec expect(qv.vmod.rank(), 0);
    expect[k] = 1;
    require(qv.log(qv.reps.back()) == expect, errc::verification_failure, "quotient_view: bad representative");
  }
  return qv;
}

// ---------------------------------------------------------------------------
// center
// ---------------------------------------------------------------------------

inline GroupSubgroup center_subgroup(const ClassTwoGroup& g) {
  int n = g.ngens();
  GroupSubgroup der = derived_subgroup(g);
  if (der.order == 1) return full_subgroup(g);  // abelian
  CentralModule dm = central_module(g, der);
  // x = prod g_j^{x_j} central iff sum_j x_j * log([g_j, g_i]) = 0 for all i
  AbelianModule dom;
  dom.p = g.p;
  dom.exps = std::vector<int>(g.rel_exp.begin(), g.rel_exp.end());
  AbelianModule cod;
  cod.p = g.p;
  int t = dm.mod.rank();
  for (int i = 0; i < n; ++i)
    for (int z = 0; z < t; ++z) cod.exps.push_back(dm.mod.exps[z]);
  Mat a(n, n * t);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Vec lg = dm.log(GroupElement{g.comm_row(j, i)});
      for (int z = 0; z < t; ++z) a.at(j, i * t + z) = lg[z];
    }
  SubModule ker = kernel_of(dom, cod, a);
  std::vector<GroupElement> gens;
  for (const Vec& r : ker.basis) gens.push_back(g.from_row(r));
  return subgroup_closure(g, gens);
}

// ---------------------------------------------------------------------------
// Bi(P) and Bi(P, P')
// ---------------------------------------------------------------------------

struct BiData {
  BilinearMap b;
  QuotientView v;    // P/Z(P) (or P/P')
  CentralModule w;   // P'
  GroupSubgroup center;
  GroupSubgroup derived;
};

namespace detail {

inline BiData bi_map_impl(const ClassTwoGroup& g, bool full) {
  BiData bd;
  bd.center = center_subgroup(g);
  bd.derived = derived_subgroup(g);
  GroupSubgroup modulus = full ? bd.derived : bd.center;
  bd.v = quotient_view(g, modulus);
  if (bd.derived.order == 1) {
    // abelian: V may be nonzero (full mode) but the tensor is zero
    AbelianModule w0(g.p, {});
    GroupSubgroup triv = trivial_subgroup(g);
    bd.w = central_module(g, triv);
  } else {
    bd.w = central_module(g, bd.derived);
  }
  int s = bd.v.vmod.rank(), t = bd.w.mod.rank();
  std::vector<std::vector<Vec>> tensor(s, std::vector<Vec>(s, Vec(t, 0)));
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y) {
      GroupElement c = g.conj_comm(bd.v.reps[x], bd.v.reps[y]);
      tensor[x][y] = bd.w.log(c);
    }
  bd.b = make_bilinear(bd.v.vmod, bd.w.mod, tensor);
  // Bi(P) is alternating
  if (!full)
    for (int x = 0; x < s; ++x)
      require(bd.w.mod.is_zero(bd.b.tensor[x][x]), errc::verification_failure, "bi_map: not alternating");
  return bd;
}

}  // namespace detail

inline BiData bi_map(const ClassTwoGroup& g) { return detail::bi_map_impl(g, false); }
inline BiData bi_map_full(const ClassTwoGroup& g) { return detail::bi_map_impl(g, true); }

// pullback of a submodule U <= V = P/Z(P) (or P/P') to a subgroup of P
inline GroupSubgroup pullback_subgroup(const ClassTwoGroup& g, const BiData& bd, const SubModule& u) {
  require(u.ambient == bd.v.vmod, errc::ambient_mismatch, "pullback_subgroup: wrong ambient");
  std::vector<GroupElement> gens = bd.v.n.pivot_list();
  for (const Vec& r : u.basis) gens.push_back(bd.v.rep(r));
  return subgroup_closure(g, gens);
}

// ---------------------------------------------------------------------------
// central decompositions
// ---------------------------------------------------------------------------

struct DecompVerdict {
  bool valid = true;
  std::string witness;  // first violated axiom
};

inline DecompVerdict is_central_decomposition(const ClassTwoGroup& g, const std::vector<GroupSubgroup>& parts) {
  DecompVerdict v;
  if (parts.empty()) {
    v.valid = false;
    v.witness = "empty decomposition";
    return v;
  }
  for (const auto& h : parts)
    if (h.order == 1) {
      v.valid = false;
      v.witness = "trivial member";
      return v;
    }
  // pairwise commutation on generators
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = i + 1; j < parts.size(); ++j)
      for (const auto& x : parts[i].pivot_list())
        for (const auto& y : parts[j].pivot_list())
          if (!g.commutes(x, y)) {
            v.valid = false;
            v.witness = "members " + std::to_string(i) + " and " + std::to_string(j) + " do not commute";
            return v;
          }
  // generation
  GroupSubgroup join = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) join = subgroup_join(join, parts[i]);
  if (join.order != g.order()) {
    v.valid = false;
    v.witness = "members do not generate the group";
    return v;
  }
  // irredundancy
  for (size_t i = 0; i < parts.size(); ++i) {
    std::vector<GroupElement> gens;
    for (size_t j = 0; j < parts.size(); ++j) {
      if (j == i) continue;
      for (const auto& x : parts[j].pivot_list()) gens.push_back(x);
    }
    GroupSubgroup rest = subgroup_closure(g, gens);
    if (rest.order == g.order()) {
      v.valid = false;
      v.witness = "member " + std::to_string(i) + " is redundant";
      return v;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// direct products, central products, quotients by central subgroups
// ---------------------------------------------------------------------------

inline ClassTwoGroup direct_product(const std::vector<const ClassTwoGroup*>& factors,
                                    const std::vector<std::string>& suffixes) {
  require(!factors.empty(), errc::invalid_argument, "direct_product: no factors");
  i64 p = factors[0]->p;
  std::vector<std::string> names;
  std::vector<int> rel;
  std::vector<int> offset;
  int total = 0;
  for (size_t f = 0; f < factors.size(); ++f) {
    require(factors[f]->p == p, errc::invalid_argument, "direct_product: mixed primes");
    offset.push_back(total);
    total += factors[f]->ngens();
  }
  std::vector<Vec> ptails;
  std::map<std::pair<int, int>, Vec> ctails;
  for (size_t f = 0; f < factors.size(); ++f) {
    const ClassTwoGroup& gf = *factors[f];
    for (int i = 0; i < gf.ngens(); ++i) {
      names.push_back(gf.names[i] + suffixes[f]);
      rel.push_back(gf.rel_exp[i]);
      Vec row(total, 0);
      for (int j = 0; j < gf.ngens(); ++j) row[offset[f] + j] = gf.power_tail[i][j];
      ptails.push_back(row);
    }
    for (int j = 0; j < gf.ngens(); ++j)
      for (int i = 0; i < j; ++i) {
        Vec row(total, 0);
        bool nz = false;
        for (int k = 0; k < gf.ngens(); ++k) {
          row[offset[f] + k] = gf.comm_tail[j][i][k];
          if (row[offset[f] + k]) nz = true;
        }
        if (nz) ctails[{offset[f] + j, offset[f] + i}] = row;
      }
  }
  return make_class_two_group(p, names, rel, ptails, ctails);
}

// A quotient P -> P/K by a central subgroup, with the parent, the kernel and
// the effective epimorphism kept together (shared_ptr for address stability).
struct CentralQuotient {
  std::shared_ptr<ClassTwoGroup> parent;
  GroupSubgroup kernel;               // subgroup of *parent
  ClassTwoGroup q;
  std::vector<int> kept;              // new index -> parent index

  // coset normal form in the parent: coordinates at kernel pivot depths reduced
  GroupElement reduce_parent(GroupElement x) const {
    const ClassTwoGroup& g = *parent;
    int fuel = 64 * g.ngens() * g.exponent_bound();
    for (bool dirty = true; dirty;) {
      dirty = false;
      for (int d = 0; d < g.ngens(); ++d) {
        if (!kernel.pivot[d]) continue;
        i64 lead = ipow(g.p, kernel.lead_val[d]);
        i64 quo = x.row[d] / lead;
        if (quo) {
          x = g.mult(g.inverse(g.pow(*kernel.pivot[d], quo)), x);
          dirty = true;
          require(--fuel > 0, errc::unsupported_presentation, "quotient: reduction does not terminate");
        }
      }
    }
    return x;
  }

  GroupElement image(const GroupElement& x) const {
    GroupElement y = reduce_parent(x);
    Vec row(kept.size(), 0);
    for (size_t t = 0; t < kept.size(); ++t) row[t] = y.row[kept[t]];
    return GroupElement{row};
  }

  // section: a representative of a quotient element in the parent
  GroupElement section(const GroupElement& x) const {
    Vec row(parent->ngens(), 0);
    for (size_t t = 0; t < kept.size(); ++t) row[kept[t]] = x.row[t];
    return parent->from_row(row);
  }
};

// Quotient by a central subgroup K (validated central).
inline CentralQuotient quotient_by_central(std::shared_ptr<ClassTwoGroup> gp, const GroupSubgroup& k) {
  const ClassTwoGroup& g = *gp;
  for (const auto& pv : k.pivot_list())
    for (int i = 0; i < g.ngens(); ++i)
      require(g.commutes(pv, g.gen(i)), errc::degenerate_input, "quotient_by_central: identification not central");
  int n = g.ngens();
  std::vector<int> cexp(n);
  for (int d = 0; d < n; ++d) cexp[d] = k.pivot[d] ? k.lead_val[d] : g.rel_exp[d];
  CentralQuotient out;
  out.parent = std::move(gp);
  out.kernel = k;
  out.kernel.g = out.parent.get();
  for (int d = 0; d < n; ++d)
    if (cexp[d] >= 1) out.kept.push_back(d);
  int m = static_cast<int>(out.kept.size());
  auto restrict_row = [&](const GroupElement& x) {
    Vec row(m, 0);
    for (int t = 0; t < m; ++t) row[t] = x.row[out.kept[t]];
    for (int d = 0; d < n; ++d)
      require(cexp[d] >= 1 || x.row[d] == 0, errc::verification_failure,
              "quotient: residue at eliminated generator");
    return row;
  };
  std::vector<std::string> names;
  std::vector<int> rel;
  std::vector<Vec> ptails;
  std::map<std::pair<int, int>, Vec> ctails;
  for (int t = 0; t < m; ++t) {
    int d = out.kept[t];
    names.push_back(g.names[d]);
    rel.push_back(cexp[d]);
    GroupElement w = out.reduce_parent(g.pow(g.gen(d), ipow(g.p, cexp[d])));
    ptails.push_back(restrict_row(w));
  }
  for (int tj = 0; tj < m; ++tj)
    for (int ti = 0; ti < tj; ++ti) {
      int dj = out.kept[tj], di = out.kept[ti];
      GroupElement c = out.reduce_parent(GroupElement{g.comm_row(dj, di)});
      Vec row = restrict_row(c);
      bool nz = false;
      for (i64 v : row)
        if (v) nz = true;
      if (nz) ctails[{tj, ti}] = row;
    }
  out.q = make_class_two_group(g.p, names, rel, ptails, ctails);
  require(out.q.order() * k.order == g.order(), errc::verification_failure, "quotient: order mismatch");
  return out;
}

// central product over explicit identification words (each a word in the
// direct product's generators; every word must be central)
inline CentralQuotient central_product(const std::vector<const ClassTwoGroup*>& factors,
                                       const std::vector<std::string>& suffixes,
                                       const std::vector<std::vector<std::pair<int, i64>>>& ident_words) {
  auto dp = std::make_shared<ClassTwoGroup>(direct_product(factors, suffixes));
  std::vector<GroupElement> kgens;
  for (const auto& w : ident_words) kgens.push_back(dp->collect(w));
  GroupSubgroup k = subgroup_closure(*dp, kgens);
  return quotient_by_central(dp, k);
}

// G^{∘(a_1..a_n)}: direct power with the centers identified by the exponents
inline CentralQuotient power_central_product(const ClassTwoGroup& g, const std::vector<i64>& a) {
  int n = static_cast<int>(a.size());
  require(n >= 1, errc::invalid_argument, "power_central_product: empty exponent vector");
  std::vector<const ClassTwoGroup*> factors(n, &g);
  std::vector<std::string> suffixes;
  for (int i = 0; i < n; ++i) suffixes.push_back(n == 1 ? "" : std::to_string(i + 1));
  auto dp = std::make_shared<ClassTwoGroup>(direct_product(factors, suffixes));
  // kernel: tuples (z_1..z_n) in Z(G)^n with prod z_i^{a_i} = 1
  GroupSubgroup z = center_subgroup(g);
  CentralModule zm = central_module(g, z);
  int r = zm.mod.rank();
  AbelianModule dom;
  dom.p = g.p;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) dom.exps.push_back(zm.mod.exps[j]);
  Mat amat(n * r, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) {
      Vec e(zm.mod.rank(), 0);
      e[j] = 1;
      Vec img = zm.mod.smul(a[i], e);
      for (int z2 = 0; z2 < r; ++z2) amat.at(i * r + j, z2) = img[z2];
    }
  SubModule ker = kernel_of(dom, zm.mod, amat);
  std::vector<GroupElement> kgens;
  for (const Vec& kv : ker.basis) {
    GroupElement x = dp->identity();
    for (int i = 0; i < n; ++i) {
      Vec co(zm.mod.rank());
      for (int j = 0; j < r; ++j) co[j] = kv[i * r + j];
      GroupElement zi = zm.exp(co);
      Vec row(dp->ngens(), 0);
      for (int j = 0; j < g.ngens(); ++j) row[i * g.ngens() + j] = zi.row[j];
      x = dp->mult(x, GroupElement{row});
    }
    kgens.push_back(x);
  }
  GroupSubgroup k = subgroup_closure(*dp, kgens);
  return quotient_by_central(dp, k);
}

// Present a subgroup H <= P as a group in its own right, with maps.
struct SubgroupGroup {
  ClassTwoGroup q;
  std::vector<GroupElement> gens_in_parent;  // pivot for each new generator

  GroupElement to_parent(const ClassTwoGroup& parent, const GroupElement& x) const {
    GroupElement y = parent.identity();
    for (int i = 0; i < q.ngens(); ++i)
      if (x.row[i] != 0) y = parent.mult(y, parent.pow(gens_in_parent[i], x.row[i]));
    return y;
  }
};

inline SubgroupGroup subgroup_as_group(const ClassTwoGroup& g, const GroupSubgroup& h) {
  SubgroupGroup sg;
  auto depths = h.pivot_depths();
  int m = static_cast<int>(depths.size());
  std::vector<std::string> names;
  std::vector<int> rel;
  for (int t = 0; t < m; ++t) {
    int d = depths[t];
    names.push_back(g.names[d] + (h.lead_val[d] ? "'" : ""));
    rel.push_back(g.rel_exp[d] - h.lead_val[d]);
    sg.gens_in_parent.push_back(*h.pivot[d]);
  }
  auto coords_of = [&](const GroupElement& x) {
    std::map<int, i64> co;
    GroupElement r = sift(h, x, &co);
    require(g.is_identity(r), errc::verification_failure, "subgroup_as_group: element escapes subgroup");
    Vec row(m, 0);
    for (int t = 0; t < m; ++t) {
      auto it = co.find(depths[t]);
      row[t] = it == co.end() ? 0 : it->second;
    }
    return row;
  };
  std::vector<Vec> ptails;
  std::map<std::pair<int, int>, Vec> ctails;
  for (int t = 0; t < m; ++t) {
    GroupElement w = g.pow(sg.gens_in_parent[t], ipow(g.p, rel[t]));
    ptails.push_back(coords_of(w));
  }
  for (int tj = 0; tj < m; ++tj)
    for (int ti = 0; ti < tj; ++ti) {
      GroupElement c = g.conj_comm(sg.gens_in_parent[tj], sg.gens_in_parent[ti]);
      Vec row = coords_of(c);
      bool nz = false;
      for (i64 v : row)
        if (v) nz = true;
      if (nz) ctails[{tj, ti}] = row;
    }
  sg.q = make_class_two_group(g.p, names, rel, ptails, ctails);
  return sg;
}

}  // namespace centdec
