#pragma once

// JSON schemas and report serialization.
//
// Group files:
//   {"kind": "group", "p": 2, "generators": ["a","b","c"],
//    "relative_orders": [2,2,2],
//    "powers": {"a": {"c": 1}},          // omitted entries are trivial
//    "commutators": {"b,a": {"c": 1}}}   // [g_j,g_i] for j after i
//
// Bilinear files:
//   {"kind": "bilinear", "p": 3, "v_invariants": [1,1], "w_invariants": [1],
//    "tensor": [[[0],[1]],[[2],[0]]]}    // tensor[x][y][z]
//
// Lie files:
//   {"kind": "lie", "p": 3, "coeff": {"kind": "zpe", "e": 1},
//    "dim": 3, "bracket": [[[0,...],...],...]}
//   F_q coefficients: {"kind": "fq", "e": 2}; bracket entries are rows of
//   length e over F_p.

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "centdec/pipeline.hpp"

namespace centdec {

using json = nlohmann::json;

namespace ioutil {

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
  fail(errc::bad_input, path + ": " + what);
}

inline void expect(bool ok, const std::string& path, const std::string& what) {
  if (!ok) bad(path, what);
}

inline i64 get_int(const json& j, const std::string& path) {
  expect(j.is_number_integer(), path, "expected an integer");
  return j.get<i64>();
}

}  // namespace ioutil

// ---------------------------------------------------------------------------
// groups
// ---------------------------------------------------------------------------

inline ClassTwoGroup group_from_json(const json& j) {
  using ioutil::expect;
  expect(j.is_object(), "$", "expected an object");
  expect(j.contains("p"), "$.p", "missing");
  i64 p = ioutil::get_int(j.at("p"), "$.p");
  expect(j.contains("generators") && j.at("generators").is_array(), "$.generators", "missing or not an array");
  std::vector<std::string> names;
  for (const auto& n : j.at("generators")) {
    expect(n.is_string(), "$.generators[]", "expected a string");
    names.push_back(n.get<std::string>());
  }
  int ngen = static_cast<int>(names.size());
  std::map<std::string, int> index;
  for (int i = 0; i < ngen; ++i) index[names[i]] = i;
  expect(j.contains("relative_orders") && j.at("relative_orders").is_array(), "$.relative_orders",
         "missing or not an array");
  expect(static_cast<int>(j.at("relative_orders").size()) == ngen, "$.relative_orders",
         "length differs from the generator count");
  std::vector<int> rel;
  for (const auto& o : j.at("relative_orders")) {
    i64 v = ioutil::get_int(o, "$.relative_orders[]");
    int e = 0;
    i64 x = v;
    while (x > 1 && x % p == 0) {
      x /= p;
      ++e;
    }
    expect(x == 1 && e >= 1, "$.relative_orders[]", "relative orders must be positive powers of p");
    rel.push_back(e);
  }
  auto parse_word = [&](const json& w, const std::string& path) {
    Vec row(ngen, 0);
    ioutil::expect(w.is_object(), path, "expected an object {generator: exponent}");
    for (auto it = w.begin(); it != w.end(); ++it) {
      auto f = index.find(it.key());
      ioutil::expect(f != index.end(), path + "." + it.key(), "unknown generator");
      row[f->second] = ioutil::get_int(it.value(), path + "." + it.key());
    }
    return row;
  };
  std::vector<Vec> powers(ngen, Vec(ngen, 0));
  if (j.contains("powers")) {
    ioutil::expect(j.at("powers").is_object(), "$.powers", "expected an object");
    for (auto it = j.at("powers").begin(); it != j.at("powers").end(); ++it) {
      auto f = index.find(it.key());
      ioutil::expect(f != index.end(), "$.powers." + it.key(), "unknown generator");
      powers[f->second] = parse_word(it.value(), "$.powers." + it.key());
    }
  }
  std::map<std::pair<int, int>, Vec> comms;
  if (j.contains("commutators")) {
    ioutil::expect(j.at("commutators").is_object(), "$.commutators", "expected an object");
    for (auto it = j.at("commutators").begin(); it != j.at("commutators").end(); ++it) {
      std::string key = it.key();
      auto comma = key.find(',');
      ioutil::expect(comma != std::string::npos, "$.commutators." + key, "key must be \"gj,gi\"");
      std::string a = key.substr(0, comma), b = key.substr(comma + 1);
      auto fa = index.find(a), fb = index.find(b);
      ioutil::expect(fa != index.end() && fb != index.end(), "$.commutators." + key, "unknown generator");
      ioutil::expect(fa->second > fb->second, "$.commutators." + key,
                     "commutators are stored as [g_j,g_i] with g_j after g_i");
      comms[{fa->second, fb->second}] = parse_word(it.value(), "$.commutators." + key);
    }
  }
  return make_class_two_group(p, names, rel, powers, comms);
}

inline json group_to_json(const ClassTwoGroup& g) {
  json j;
  j["kind"] = "group";
  j["p"] = g.p;
  j["generators"] = g.names;
  std::vector<i64> rel;
  for (int i = 0; i < g.ngens(); ++i) rel.push_back(g.rel_order(i));
  j["relative_orders"] = rel;
  json powers = json::object();
  for (int i = 0; i < g.ngens(); ++i) {
    json w = json::object();
    for (int k = 0; k < g.ngens(); ++k)
      if (g.power_tail[i][k] != 0) w[g.names[k]] = g.power_tail[i][k];
    if (!w.empty()) powers[g.names[i]] = w;
  }
  if (!powers.empty()) j["powers"] = powers;
  json comms = json::object();
  for (int a = 0; a < g.ngens(); ++a)
    for (int b = 0; b < a; ++b) {
      json w = json::object();
      for (int k = 0; k < g.ngens(); ++k)
        if (g.comm_tail[a][b][k] != 0) w[g.names[k]] = g.comm_tail[a][b][k];
      if (!w.empty()) comms[g.names[a] + "," + g.names[b]] = w;
    }
  if (!comms.empty()) j["commutators"] = comms;
  return j;
}

// ---------------------------------------------------------------------------
// bilinear maps
// ---------------------------------------------------------------------------

inline BilinearMap bilinear_from_json(const json& j) {
  using ioutil::expect;
  expect(j.contains("p"), "$.p", "missing");
  i64 p = ioutil::get_int(j.at("p"), "$.p");
  auto invs = [&](const char* field) {
    expect(j.contains(field) && j.at(field).is_array(), std::string("$.") + field, "missing or not an array");
    std::vector<int> es;
    for (const auto& e : j.at(field)) es.push_back(static_cast<int>(ioutil::get_int(e, std::string("$.") + field)));
    return es;
  };
  AbelianModule v(p, invs("v_invariants"));
  AbelianModule w(p, invs("w_invariants"));
  expect(j.contains("tensor") && j.at("tensor").is_array(), "$.tensor", "missing or not an array");
  const json& t = j.at("tensor");
  expect(static_cast<int>(t.size()) == v.rank(), "$.tensor", "wrong x-dimension");
  std::vector<std::vector<Vec>> tensor(v.rank(), std::vector<Vec>(v.rank(), Vec(w.rank(), 0)));
  for (int x = 0; x < v.rank(); ++x) {
    expect(t[x].is_array() && static_cast<int>(t[x].size()) == v.rank(), "$.tensor[]", "wrong y-dimension");
    for (int y = 0; y < v.rank(); ++y) {
      expect(t[x][y].is_array() && static_cast<int>(t[x][y].size()) == w.rank(), "$.tensor[][]",
             "wrong z-dimension");
      for (int z = 0; z < w.rank(); ++z) tensor[x][y][z] = ioutil::get_int(t[x][y][z], "$.tensor[][][]");
    }
  }
  return make_bilinear(v, w, tensor);
}

inline json bilinear_to_json(const BilinearMap& b) {
  json j;
  j["kind"] = "bilinear";
  j["p"] = b.v.p;
  j["v_invariants"] = b.v.exps;
  j["w_invariants"] = b.w.exps;
  j["tensor"] = b.tensor;
  return j;
}

// ---------------------------------------------------------------------------
// Lie rings
// ---------------------------------------------------------------------------

inline LieRing lie_from_json(const json& j) {
  using ioutil::expect;
  LieRing l;
  expect(j.contains("p"), "$.p", "missing");
  l.p = ioutil::get_int(j.at("p"), "$.p");
  require(is_prime_u(l.p), errc::bad_input, "$.p: not prime");
  int e = 1;
  bool fq = false;
  if (j.contains("coeff")) {
    const json& c = j.at("coeff");
    expect(c.is_object() && c.contains("kind"), "$.coeff", "expected {kind, e}");
    std::string kind = c.at("kind").get<std::string>();
    e = c.contains("e") ? static_cast<int>(ioutil::get_int(c.at("e"), "$.coeff.e")) : 1;
    expect(kind == "zpe" || kind == "fq", "$.coeff.kind", "must be \"zpe\" or \"fq\"");
    fq = kind == "fq";
  }
  expect(j.contains("dim"), "$.dim", "missing");
  l.dim = static_cast<int>(ioutil::get_int(j.at("dim"), "$.dim"));
  expect(l.dim >= 0 && l.dim <= 24, "$.dim", "dimension out of range");
  expect(j.contains("bracket") && j.at("bracket").is_array(), "$.bracket", "missing or not an array");
  const json& br = j.at("bracket");
  expect(static_cast<int>(br.size()) == l.dim, "$.bracket", "wrong i-dimension");
  if (fq) {
    Ctx det = Ctx::det();
    l.fq = build_field(l.p, e, det);
    l.e = 1;
    l.fq_bracket.assign(l.dim, std::vector<std::vector<FElt>>(l.dim, std::vector<FElt>(l.dim, f_zero(*l.fq))));
    for (int i = 0; i < l.dim; ++i)
      for (int jx = 0; jx < l.dim; ++jx)
        for (int k = 0; k < l.dim; ++k) {
          const json& cell = br[i][jx][k];
          FElt v = f_zero(*l.fq);
          if (cell.is_number_integer())
            v = f_from_scalar(*l.fq, cell.get<i64>());
          else {
            expect(cell.is_array() && static_cast<int>(cell.size()) == e, "$.bracket[][][]",
                   "field entries are rows of length e");
            for (int t = 0; t < e; ++t) v[t] = mod_reduce(cell[t].get<i64>(), l.p);
          }
          l.fq_bracket[i][jx][k] = v;
        }
  } else {
    l.e = e;
    l.z_bracket.assign(l.dim, std::vector<Vec>(l.dim, Vec(l.dim, 0)));
    for (int i = 0; i < l.dim; ++i)
      for (int jx = 0; jx < l.dim; ++jx)
        for (int k = 0; k < l.dim; ++k)
          l.z_bracket[i][jx][k] = ioutil::get_int(br[i][jx][k], "$.bracket[][][]");
  }
  validate_lie(l);
  return l;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

inline std::string element_word(const ClassTwoGroup& g, const GroupElement& x) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < g.ngens(); ++i) {
    if (x.row[i] == 0) continue;
    if (!first) os << "*";
    os << g.names[i];
    if (x.row[i] != 1) os << "^" << x.row[i];
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

inline json member_to_json(const ClassTwoGroup& g, const MemberReport& m) {
  json j;
  std::vector<std::string> gens;
  for (const auto& x : m.sub.pivot_list()) gens.push_back(element_word(g, x));
  j["generators"] = gens;
  j["order"] = m.order;
  j["abelian"] = m.abelian;
  if (!m.type.empty()) j["type"] = m.type;
  return j;
}

inline json report_to_json(const ClassTwoGroup& g, const DecompositionReport& rep) {
  json j;
  j["kind"] = "decomposition_report";
  j["group"] = group_to_json(g);
  j["size"] = rep.members.size();
  json ms = json::array();
  for (const auto& m : rep.members) ms.push_back(member_to_json(g, m));
  j["members"] = ms;
  json frame = json::array();
  for (size_t i = 0; i < rep.frame.elems.size(); ++i) {
    json fe;
    const Mat& f = rep.frame.elems[i].first;
    std::vector<std::vector<i64>> rows;
    for (int r = 0; r < f.rows; ++r) rows.push_back(f.row(r));
    fe["matrix"] = rows;
    fe["certificate"] = rep.frame.certs[i];
    frame.push_back(fe);
  }
  j["frame"] = frame;
  j["star_ring"] = {{"rank", rep.star_rank}, {"radical_dim", rep.radical_dim}, {"quotients", rep.quotients}};
  j["verified"] = rep.verified;
  j["seed"] = rep.seed;
  j["mode"] = rep.mode;
  j["transcript"] = rep.transcript;
  return j;
}

inline std::string report_to_text(const ClassTwoGroup& g, const DecompositionReport& rep) {
  std::ostringstream os;
  os << "group of order " << g.order() << " (p = " << g.p << ", " << g.ngens() << " generators)\n";
  os << "maximum central decomposition: size " << rep.members.size() << "\n";
  for (size_t i = 0; i < rep.members.size(); ++i) {
    const auto& m = rep.members[i];
    os << "  member " << i + 1 << ": order " << m.order << (m.abelian ? " (abelian)" : " (nonabelian)");
    if (!m.type.empty()) os << " type " << m.type;
    os << "\n    generators:";
    for (const auto& x : m.sub.pivot_list()) os << " " << element_word(g, x);
    os << "\n";
  }
  os << "adjoint ring: rank " << rep.star_rank << ", radical dimension " << rep.radical_dim << "\n";
  for (const auto& q : rep.quotients) os << "  " << q << "\n";
  os << "mode: " << rep.mode << (rep.mode == "randomized" ? " (seed " + std::to_string(rep.seed) + ")" : "")
     << "\n";
  os << "verified: " << (rep.verified ? "yes" : "no") << "\n";
  return os.str();
}

// re-verify a decomposition report against its group (the verify path)
inline bool verify_report(const json& j) {
  ClassTwoGroup g = group_from_json(j.at("group"));
  std::vector<GroupSubgroup> members;
  for (const auto& mj : j.at("members")) {
    std::vector<GroupElement> gens;
    for (const auto& w : mj.at("generators")) {
      // parse "a^2*b" style words
      std::string s = w.get<std::string>();
      std::vector<std::pair<int, i64>> word;
      size_t pos = 0;
      while (pos < s.size()) {
        size_t star = s.find('*', pos);
        std::string tok = s.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
        pos = star == std::string::npos ? s.size() : star + 1;
        if (tok == "1" || tok.empty()) continue;
        size_t caret = tok.find('^');
        std::string name = caret == std::string::npos ? tok : tok.substr(0, caret);
        i64 e = caret == std::string::npos ? 1 : std::stoll(tok.substr(caret + 1));
        int gi = -1;
        for (int i = 0; i < g.ngens(); ++i)
          if (g.names[i] == name) gi = i;
        require(gi >= 0, errc::bad_input, "report member word: unknown generator " + name);
        word.emplace_back(gi, e);
      }
      gens.push_back(g.collect(word));
    }
    members.push_back(subgroup_closure(g, gens));
  }
  DecompVerdict v = is_central_decomposition(g, members);
  if (!v.valid) return false;
  for (size_t i = 0; i < members.size(); ++i)
    if (members[i].order != j.at("members")[i].at("order").get<i64>()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// input dispatch
// ---------------------------------------------------------------------------

struct ParsedInput {
  enum class Kind { group, bilinear, lie } kind;
  std::optional<ClassTwoGroup> group;
  std::optional<BilinearMap> bilinear;
  std::optional<LieRing> lie;
};

inline ParsedInput parse_input_json(const json& j) {
  ParsedInput in{ParsedInput::Kind::group, std::nullopt, std::nullopt, std::nullopt};
  std::string kind;
  if (j.contains("kind") && j.at("kind").is_string()) kind = j.at("kind").get<std::string>();
  if (kind.empty()) {
    if (j.contains("generators"))
      kind = "group";
    else if (j.contains("tensor"))
      kind = "bilinear";
    else if (j.contains("bracket"))
      kind = "lie";
  }
  if (kind == "group") {
    in.kind = ParsedInput::Kind::group;
    in.group = group_from_json(j);
  } else if (kind == "bilinear") {
    in.kind = ParsedInput::Kind::bilinear;
    in.bilinear = bilinear_from_json(j);
  } else if (kind == "lie") {
    in.kind = ParsedInput::Kind::lie;
    in.lie = lie_from_json(j);
  } else {
    ioutil::bad("$.kind", "cannot determine input kind (group/bilinear/lie)");
  }
  return in;
}

}  // namespace centdec
