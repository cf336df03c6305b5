// centdec: central decompositions of finite p-groups of class 2 (and class-2
// Lie rings) through the adjoint *-ring of the commutation bilinear map.
//
// Subcommands: decompose, adjoint, classify, charsub, oracle, product, corpus.
// Exit codes: 0 success, 2 invalid input, 3 internal verification failure.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "centdec/io.hpp"

using namespace centdec;

namespace {

struct Options {
  std::string input;
  std::string output;
  u64 seed = 12345;
  bool deterministic = false;
  bool text = false;
  bool verify = false;
  i64 max_order = 256;
  std::string avec;
  std::string corpus_name;
  i64 corpus_p = 2;
  std::string invariants;
};

Ctx make_ctx(const Options& o) { return o.deterministic ? Ctx::det() : Ctx::rnd(o.seed); }

// inputs are file paths or corpus:name(p) pseudo-paths
json load_input(const std::string& path) {
  if (path.rfind("corpus:", 0) == 0) {
    std::string spec = path.substr(7);
    std::string name = spec;
    i64 p = 2;
    auto open = spec.find('(');
    if (open != std::string::npos) {
      require(spec.back() == ')', errc::bad_input, "corpus spec must be corpus:name(p)");
      name = spec.substr(0, open);
      p = std::stoll(spec.substr(open + 1, spec.size() - open - 2));
    }
    if (name == "or_p") return group_to_json(corpus::or_p(p));
    if (name == "e_p") return group_to_json(corpus::e_p(p));
    if (name == "u_p") return group_to_json(corpus::u_p(p));
    if (name == "p1+2" || name == "heisenberg") return group_to_json(corpus::heisenberg(p));
    if (name == "r_p") return group_to_json(corpus::r_p(p));
    if (name == "d8") return group_to_json(corpus::d8());
    if (name == "q8") return group_to_json(corpus::q8());
    if (name == "tang") return group_to_json(corpus::tang().q);
    if (name == "d8od8") return group_to_json(power_central_product(corpus::d8(), {1, 1}).q);
    fail(errc::bad_input, "unknown corpus entry: " + name);
  }
  std::ifstream in(path);
  require(in.good(), errc::bad_input, "cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(errc::bad_input, std::string("JSON parse error: ") + e.what());
  }
  return j;
}

void emit(const Options& o, const json& j, const std::string& text) {
  std::string payload = o.text ? text : j.dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(o.output);
    require(out.good(), errc::bad_input, "cannot open output file: " + o.output);
    out << payload;
  }
}

void classify_members(const ClassTwoGroup& g, DecompositionReport& rep, const Ctx& ctx) {
  // label nonabelian members by their type when they are indecomposable
  for (auto& m : rep.members) {
    if (m.abelian) continue;
    try {
      SubgroupGroup sg = subgroup_as_group(g, m.sub);
      m.type = type_name(classify_type(sg.q, ctx));
    } catch (const error&) {
      m.type.clear();
    }
  }
}

int cmd_decompose(const Options& o) {
  json j = load_input(o.input);
  ParsedInput in = parse_input_json(j);
  Ctx ctx = make_ctx(o);
  if (in.kind == ParsedInput::Kind::lie) {
    LieReport rep = lie_decomposition_max(*in.lie, ctx);
    json out;
    out["kind"] = "lie_decomposition_report";
    out["size"] = rep.members.size();
    json ms = json::array();
    for (const auto& m : rep.members) {
      json mj;
      mj["basis"] = m.basis;
      mj["abelian"] = m.abelian;
      ms.push_back(mj);
    }
    out["members"] = ms;
    out["verified"] = rep.verified;
    out["mode"] = o.deterministic ? "deterministic" : "randomized";
    out["seed"] = o.seed;
    std::ostringstream text;
    text << "lie ring: maximum central decomposition of size " << rep.members.size() << "\n";
    emit(o, out, text.str());
    return 0;
  }
  if (in.kind == ParsedInput::Kind::bilinear) {
    // decompose the bilinear map itself: frame + perpendicular decomposition
    StarRing r = adjoint_algebra(*in.bilinear);
    Frame f = find_frame(r, ctx);
    std::vector<Mat> mats;
    for (auto& [fm, gm] : f.elems) mats.push_back(fm);
    PerpDecomposition parts = idempotents_to_perp(*in.bilinear, mats);
    json out;
    out["kind"] = "perp_decomposition_report";
    out["size"] = parts.size();
    json ps = json::array();
    for (const auto& u : parts) {
      json uj;
      uj["order"] = u.order;
      uj["basis"] = u.basis;
      ps.push_back(uj);
    }
    out["parts"] = ps;
    out["star_ring"] = {{"rank", r.rank()}};
    out["mode"] = o.deterministic ? "deterministic" : "randomized";
    out["seed"] = o.seed;
    std::ostringstream text;
    text << "bilinear map: maximum perpendicular decomposition of size " << parts.size() << "\n";
    emit(o, out, text.str());
    return 0;
  }
  const ClassTwoGroup& g = *in.group;
  DecompositionReport rep = central_decomposition_max(g, ctx);
  rep.seed = o.seed;
  classify_members(g, rep, ctx);
  json out = report_to_json(g, rep);
  if (o.verify) {
    require(verify_report(out), errc::verification_failure, "report failed re-verification");
    out["reverified"] = true;
  }
  emit(o, out, report_to_text(g, rep));
  return 0;
}

int cmd_adjoint(const Options& o) {
  json j = load_input(o.input);
  ParsedInput in = parse_input_json(j);
  Ctx ctx = make_ctx(o);
  require(in.kind != ParsedInput::Kind::lie, errc::bad_input, "adjoint expects a group or bilinear input");
  BilinearMap b = in.kind == ParsedInput::Kind::bilinear ? *in.bilinear : bi_map(*in.group).b;
  StarRing r = adjoint_algebra(b);
  json out;
  out["kind"] = "adjoint_report";
  out["rank"] = r.rank();
  out["swap_involutive"] = r.swap_involutive;
  json basis = json::array();
  for (auto& [f, gm] : r.basis) {
    json bj;
    std::vector<std::vector<i64>> fr, gr;
    for (int i = 0; i < f.rows; ++i) fr.push_back(f.row(i));
    for (int i = 0; i < gm.rows; ++i) gr.push_back(gm.row(i));
    bj["f"] = fr;
    bj["g"] = gr;
    basis.push_back(bj);
  }
  out["basis"] = basis;
  std::ostringstream text;
  text << "adjoint ring: additive rank " << r.rank() << "\n";
  if (r.swap_involutive && b.v.rank() > 0) {
    StarStructure st = star_structure(r, ctx);
    out["radical_dim"] = st.rad.size();
    auto gams = star_pair(st, ctx);
    json qs = json::array();
    for (const auto& q : gams) {
      const SimpleFactor& f = st.factors[q.factor];
      json qj;
      qj["n"] = f.n;
      qj["field_order"] = f.k.order();
      if (q.kind == StarQuotient::Kind::exchange) {
        qj["type"] = "exchange";
      } else {
        qj["type"] = q.form.kind == FormKind::symmetric     ? "symmetric"
                     : q.form.kind == FormKind::alternating ? "alternating"
                                                            : "hermitian";
      }
      qs.push_back(qj);
    }
    out["quotients"] = qs;
    text << "radical dimension " << st.rad.size() << ", " << gams.size() << " *-simple quotient(s)\n";
  } else if (!r.swap_involutive) {
    out["note"] = "swap is not an involution (degenerate map); *-structure skipped";
  }
  emit(o, out, text.str());
  return 0;
}

int cmd_classify(const Options& o) {
  json j = load_input(o.input);
  ParsedInput in = parse_input_json(j);
  require(in.kind == ParsedInput::Kind::group, errc::bad_input, "classify expects a group input");
  Ctx ctx = make_ctx(o);
  auto verdict = is_centrally_indecomposable(*in.group, ctx);
  json out;
  out["kind"] = "classification_report";
  out["indecomposable"] = verdict.indecomposable;
  out["witness"] = verdict.witness;
  std::ostringstream text;
  if (verdict.indecomposable) {
    GroupSubgroup z = center_subgroup(*in.group);
    if (z.order == in.group->order()) {
      out["type"] = "abelian-cyclic";
      text << "centrally indecomposable (cyclic abelian)\n";
    } else {
      GroupType t = classify_type(*in.group, ctx);
      out["type"] = type_name(t);
      text << "centrally indecomposable of " << type_name(t) << " type\n";
    }
  } else {
    text << "centrally decomposable: " << verdict.witness << "\n";
  }
  emit(o, out, text.str());
  return 0;
}

int cmd_charsub(const Options& o) {
  json j = load_input(o.input);
  ParsedInput in = parse_input_json(j);
  require(in.kind == ParsedInput::Kind::group, errc::bad_input, "charsub expects a group input");
  Ctx ctx = make_ctx(o);
  auto chars = characteristic_subgroups(*in.group, ctx);
  auto fulls = fully_invariant_subgroups(*in.group, ctx);
  json out;
  out["kind"] = "subgroup_report";
  auto dump = [&](const std::vector<IdealSubgroup>& subs) {
    json arr = json::array();
    for (const auto& s : subs) {
      json sj;
      std::vector<std::string> gens;
      for (const auto& x : s.sub.pivot_list()) gens.push_back(element_word(*in.group, x));
      sj["order"] = s.sub.order;
      sj["generators"] = gens;
      sj["provenance"] = s.provenance;
      arr.push_back(sj);
    }
    return arr;
  };
  out["characteristic"] = dump(chars);
  out["fully_invariant"] = dump(fulls);
  std::ostringstream text;
  text << "characteristic subgroups from *-ideals: " << chars.size() << "\n";
  for (const auto& s : chars) text << "  order " << s.sub.order << "  [" << s.provenance << "]\n";
  text << "fully invariant subgroups from ideals over Bi(P,P'): " << fulls.size() << "\n";
  for (const auto& s : fulls) text << "  order " << s.sub.order << "  [" << s.provenance << "]\n";
  emit(o, out, text.str());
  return 0;
}

int cmd_oracle(const Options& o) {
  json j = load_input(o.input);
  ParsedInput in = parse_input_json(j);
  require(in.kind == ParsedInput::Kind::group, errc::bad_input, "oracle expects a group input");
  require(o.max_order <= 4096, errc::bad_input, "oracle bound exceeds the hard cap 4096");
  int size = brute_force_oracle(*in.group, o.max_order);
  json out;
  out["kind"] = "oracle_report";
  out["max_size"] = size;
  emit(o, out, "exhaustive maximum central decomposition size: " + std::to_string(size) + "\n");
  return 0;
}

int cmd_product(const Options& o) {
  json j = load_input(o.input);
  ParsedInput in = parse_input_json(j);
  require(in.kind == ParsedInput::Kind::group, errc::bad_input, "product expects a group input");
  require(!o.avec.empty(), errc::bad_input, "product requires -a e1,e2,...");
  std::vector<i64> a;
  std::stringstream ss(o.avec);
  std::string tok;
  while (std::getline(ss, tok, ',')) a.push_back(std::stoll(tok));
  CentralQuotient q = power_central_product(*in.group, a);
  Ctx ctx = make_ctx(o);
  json out = group_to_json(q.q);
  // fingerprint: adjoint rank and frame size of the product
  BiData bd = bi_map(q.q);
  json fp;
  fp["order"] = q.q.order();
  if (bd.b.v.rank() > 0) {
    StarRing r = adjoint_algebra(bd.b);
    Frame f = find_frame(r, ctx);
    fp["adjoint_rank"] = r.rank();
    fp["frame_size"] = f.size();
  }
  out["fingerprint"] = fp;
  std::ostringstream text;
  text << "central power product of order " << q.q.order();
  if (fp.contains("adjoint_rank"))
    text << " (adjoint rank " << fp["adjoint_rank"] << ", frame size " << fp["frame_size"] << ")";
  text << "\n";
  emit(o, out, text.str());
  return 0;
}

int cmd_corpus(const Options& o) {
  json out;
  i64 p = o.corpus_p;
  const std::string& name = o.corpus_name;
  if (name == "or_p")
    out = group_to_json(corpus::or_p(p));
  else if (name == "e_p")
    out = group_to_json(corpus::e_p(p));
  else if (name == "u_p")
    out = group_to_json(corpus::u_p(p));
  else if (name == "p1+2" || name == "heisenberg")
    out = group_to_json(corpus::heisenberg(p));
  else if (name == "r_p")
    out = group_to_json(corpus::r_p(p));
  else if (name == "d8")
    out = group_to_json(corpus::d8());
  else if (name == "q8")
    out = group_to_json(corpus::q8());
  else if (name == "tang")
    out = group_to_json(corpus::tang().q);
  else if (name == "d8od8")
    out = group_to_json(power_central_product(corpus::d8(), {1, 1}).q);
  else if (name == "abelian") {
    std::vector<int> exps;
    std::stringstream ss(o.invariants);
    std::string tok;
    while (std::getline(ss, tok, ',')) exps.push_back(std::stoi(tok));
    require(!exps.empty(), errc::bad_input, "abelian corpus requires --invariants e1,e2,...");
    std::sort(exps.begin(), exps.end());
    out = group_to_json(corpus::abelian(p, exps));
  } else {
    fail(errc::bad_input, "unknown corpus entry: " + name);
  }
  ClassTwoGroup g = group_from_json(out);  // round-trip validation
  std::ostringstream text;
  text << "corpus group " << name << " (p = " << p << "), order " << g.order() << "\n";
  emit(o, out, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"central decompositions of class-2 p-groups via adjoint *-rings"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("input", o.input, "input file or corpus:name(p)")->required();
    sub->add_option("--seed", o.seed, "seed for the Las Vegas routines");
    sub->add_flag("--deterministic", o.deterministic, "use the deterministic small-p algorithms");
    sub->add_flag("--text", o.text, "human-readable output");
    sub->add_flag("--json", "JSON output (default)");
    sub->add_option("-o,--output", o.output, "write the report to a file");
  };

  auto* dec = app.add_subcommand("decompose", "maximum central decomposition");
  add_common(dec, true);
  dec->add_flag("--verify", o.verify, "re-verify the emitted report before printing");

  auto* adj = app.add_subcommand("adjoint", "adjoint *-ring of the commutation bilinear map");
  add_common(adj, true);

  auto* cls = app.add_subcommand("classify", "indecomposability test and type classification");
  add_common(cls, true);

  auto* chs = app.add_subcommand("charsub", "characteristic and fully invariant subgroups from *-ideals");
  add_common(chs, true);

  auto* orc = app.add_subcommand("oracle", "exhaustive maximum decomposition size (small groups)");
  add_common(orc, true);
  orc->add_option("--max-order", o.max_order, "order bound for the exhaustive search");

  auto* prd = app.add_subcommand("product", "central power product G^{o(a1..an)}");
  add_common(prd, true);
  prd->add_option("-a", o.avec, "identification exponents, e.g. -a 1,3")->required();

  auto* cor = app.add_subcommand("corpus", "emit a built-in presentation");
  cor->add_option("name", o.corpus_name, "or_p|e_p|u_p|p1+2|r_p|d8|q8|tang|d8od8|abelian")->required();
  cor->add_option("-p", o.corpus_p, "prime");
  cor->add_option("--invariants", o.invariants, "invariant exponents for abelian, e.g. 1,2");
  cor->add_flag("--text", o.text, "human-readable output");
  cor->add_option("-o,--output", o.output, "write to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dec->parsed()) return cmd_decompose(o);
    if (adj->parsed()) return cmd_adjoint(o);
    if (cls->parsed()) return cmd_classify(o);
    if (chs->parsed()) return cmd_charsub(o);
    if (orc->parsed()) return cmd_oracle(o);
    if (prd->parsed()) return cmd_product(o);
    if (cor->parsed()) return cmd_corpus(o);
  } catch (const error& e) {
    bool input_fault = e.code() == errc::bad_input || e.code() == errc::invalid_argument ||
                       e.code() == errc::inconsistent_presentation || e.code() == errc::unsupported_presentation ||
                       e.code() == errc::bound_exceeded || e.code() == errc::degenerate_input;
    std::cerr << "error: " << e.what() << "\n";
    return input_fault ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
