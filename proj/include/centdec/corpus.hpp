#pragma once

// Built-in presentations: the four centrally indecomposable families Or_p,
// E_p, U_p, p^{1+2}, the R_p family, Tang's 2^12 group, and abelian groups.
// Generator order: transversal generators first, derived generators last.

#include "centdec/pgroup.hpp"

namespace centdec {
namespace corpus {

inline i64 least_nonsquare(i64 p) {
  require(p % 2 == 1, errc::invalid_argument, "least_nonsquare: p must be odd");
  std::set<i64> squares;
  for (i64 a = 1; a < p; ++a) squares.insert(a * a % p);
  for (i64 c = 2; c < p; ++c)
    if (!squares.count(c)) return c;
  fail(errc::verification_failure, "least_nonsquare: none found");
}

// free class-2 group of rank 3 and exponent p relations: order p^6
inline ClassTwoGroup or_p(i64 p) {
  int n = 6;
  std::vector<std::string> names{"a", "b", "c", "x", "y", "z"};
  std::vector<int> rel(n, 1);
  std::vector<Vec> pt(n, Vec(n, 0));
  std::map<std::pair<int, int>, Vec> ct;
  auto inv1 = [&](int idx) {
    Vec r(n, 0);
    r[idx] = p - 1;  // inverse of a generator of order p
    return r;
  };
  ct[{1, 0}] = inv1(3);  // [b,a] = x^{-1}, x = [a,b]
  ct[{2, 0}] = inv1(4);  // [c,a] = y^{-1}
  ct[{2, 1}] = inv1(5);  // [c,b] = z^{-1}
  return make_class_two_group(p, names, rel, pt, ct);
}

// exchange-type special group of order p^8
inline ClassTwoGroup e_p(i64 p) {
  int n = 8;
  std::vector<std::string> names{"a", "b", "c", "d", "x", "y", "z", "w"};
  std::vector<int> rel(n, 1);
  std::vector<Vec> pt(n, Vec(n, 0));
  std::map<std::pair<int, int>, Vec> ct;
  auto inv1 = [&](int idx) {
    Vec r(n, 0);
    r[idx] = p - 1;
    return r;
  };
  ct[{2, 0}] = inv1(4);  // x = [a,c]
  ct[{3, 0}] = inv1(5);  // y = [a,d]
  ct[{2, 1}] = inv1(6);  // z = [b,c]
  ct[{3, 1}] = inv1(7);  // w = [b,d]
  return make_class_two_group(p, names, rel, pt, ct);
}

// unitary-type special group (odd p, omega the least nonsquare); order p^10
inline ClassTwoGroup u_p(i64 p) {
  i64 om = least_nonsquare(p);
  int n = 10;
  std::vector<std::string> names{"a", "b", "c", "d", "e", "f", "x", "y", "z", "u"};
  std::vector<int> rel(n, 1);
  std::vector<Vec> pt(n, Vec(n, 0));
  std::map<std::pair<int, int>, Vec> ct;
  auto row1 = [&](int idx, i64 c) {
    Vec r(n, 0);
    r[idx] = mod_reduce(c, p);
    return r;
  };
  // pairs (i<j): [a,b]=x, [a,c]=y, [b,c]=z, [a,d]=u, [d,e]=x^{-om},
  // [d,f]=y^{-om}, [e,f]=z^{-om}; stored as [g_j,g_i] inverses
  ct[{1, 0}] = row1(6, -1);
  ct[{2, 0}] = row1(7, -1);
  ct[{2, 1}] = row1(8, -1);
  ct[{3, 0}] = row1(9, -1);
  ct[{4, 3}] = row1(6, om);
  ct[{5, 3}] = row1(7, om);
  ct[{5, 4}] = row1(8, om);
  return make_class_two_group(p, names, rel, pt, ct);
}

// extraspecial group p^{1+2} of exponent p (D8 for p = 2)
inline ClassTwoGroup heisenberg(i64 p) {
  int n = 3;
  std::vector<std::string> names{"a", "b", "c"};
  std::vector<int> rel(n, 1);
  std::vector<Vec> pt(n, Vec(n, 0));
  std::map<std::pair<int, int>, Vec> ct;
  Vec r(n, 0);
  r[2] = p - 1;  // [b,a] = c^{-1}, c = [a,b]
  ct[{1, 0}] = r;
  return make_class_two_group(p, names, rel, pt, ct);
}

inline ClassTwoGroup d8() { return heisenberg(2); }

// quaternion group of order 8
inline ClassTwoGroup q8() {
  int n = 3;
  std::vector<std::string> names{"i", "j", "z"};
  std::vector<int> rel(n, 1);
  std::vector<Vec> pt(n, Vec(n, 0));
  pt[0][2] = 1;  // i^2 = z
  pt[1][2] = 1;  // j^2 = z
  std::map<std::pair<int, int>, Vec> ct;
  Vec r(n, 0);
  r[2] = 1;  // [j,i] = z
  ct[{1, 0}] = r;
  return make_class_two_group(2, names, rel, pt, ct);
}

// the R_p family of order p^9 (Appendix B)
inline ClassTwoGroup r_p(i64 p) {
  int n = 9;
  std::vector<std::string> names{"a", "b", "c", "d", "e", "f", "x", "y", "z"};
  std::vector<int> rel(n, 1);
  std::vector<Vec> pt(n, Vec(n, 0));
  std::map<std::pair<int, int>, Vec> ct;
  auto row1 = [&](int idx, i64 c) {
    Vec r(n, 0);
    r[idx] = mod_reduce(c, p);
    return r;
  };
  // paper pairs (i<j): [a,b]=x^2, [a,c]=y^2, [a,d]=1, [a,e]=x, [a,f]=y,
  // [b,c]=z^2, [b,d]=x^{-1}, [b,e]=1, [b,f]=z, [c,d]=y^{-1}, [c,e]=z^{-1},
  // [c,f]=1, [d,e]=x^2, [d,f]=y^2, [e,f]=z^2
  ct[{1, 0}] = row1(6, -2);
  ct[{2, 0}] = row1(7, -2);
  ct[{4, 0}] = row1(6, -1);
  ct[{5, 0}] = row1(7, -1);
  ct[{2, 1}] = row1(8, -2);
  ct[{3, 1}] = row1(6, 1);
  ct[{5, 1}] = row1(8, -1);
  ct[{3, 2}] = row1(7, 1);
  ct[{4, 2}] = row1(8, 1);
  ct[{4, 3}] = row1(6, -2);
  ct[{5, 3}] = row1(7, -2);
  ct[{5, 4}] = row1(8, -2);
  return make_class_two_group(p, names, rel, pt, ct);
}

// Tang's group: (R_2 x Or_2) with derived subgroups identified; order 2^12
inline CentralQuotient tang() {
  ClassTwoGroup r2 = r_p(2);
  ClassTwoGroup o2 = or_p(2);
  std::vector<const ClassTwoGroup*> factors{&r2, &o2};
  // in the product, R_2's x,y,z sit at 6,7,8 and Or_2's x,y,z at 12,13,14
  std::vector<std::vector<std::pair<int, i64>>> ident{
      {{6, 1}, {12, -1}},
      {{7, 1}, {13, -1}},
      {{8, 1}, {14, -1}},
  };
  return central_product(factors, {"1", "2"}, ident);
}

inline ClassTwoGroup abelian(i64 p, const std::vector<int>& exps) {
  int n = static_cast<int>(exps.size());
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("g" + std::to_string(i + 1));
  return make_class_two_group(p, names, exps, std::vector<Vec>(n, Vec(n, 0)), {});
}

}  // namespace corpus
}  // namespace centdec
