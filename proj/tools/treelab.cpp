// treelab: command-line laboratory for betweenness structures on trees,
// group actions on them, and conjugacy-class path connectivity.

#include "treelab/actions.hpp"
#include "treelab/automorphism.hpp"
#include "treelab/ends.hpp"
#include "treelab/f2.hpp"
#include "treelab/flows.hpp"
#include "treelab/gf.hpp"
#include "treelab/group_table.hpp"
#include "treelab/lazy_tree.hpp"
#include "treelab/metrize.hpp"
#include "treelab/pretree.hpp"
#include "treelab/report.hpp"
#include "treelab/rng.hpp"
#include "treelab/transvection.hpp"
#include "treelab/tree_model.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace treelab;

std::ifstream open_or_die(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot read file: " + path);
  return in;
}

std::vector<PointId> parse_id_list(const std::string& csv) {
  std::vector<PointId> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw StructuralError("bad id list entry: " + tok);
    }
  }
  return out;
}

std::string witness_str(const std::vector<PointId>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s;
}

std::string points_str(const PointSet& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out.empty() ? "-" : out;
}

// ---- model/automorphism resolution ---------------------------------------

// The map holds a pointer into the tree, so the tree gets a stable address.
struct ResolvedAction {
  std::unique_ptr<MetricTree> tree;
  std::unique_ptr<PartialTreeMap> map;
  std::vector<std::string> labels;  // vertex id -> display label, may be empty
};

ResolvedAction resolve_action(const std::string& tree_file, const std::string& auto_file,
                              int window) {
  auto parsed = [&] {
    auto in = open_or_die(auto_file);
    return parse_automorphism_file(in);
  }();
  ResolvedAction ra;
  if (parsed.kind == ParsedAutomorphism::Kind::Perm) {
    if (tree_file.empty()) throw StructuralError("perm automorphism needs --tree");
    auto in = open_or_die(tree_file);
    ra.tree = std::make_unique<MetricTree>(parse_tree(in));
    ra.map = std::make_unique<PartialTreeMap>(perm_map(*ra.tree, parsed.mapping));
    return ra;
  }
  if (parsed.rule == "translate") {
    if (parsed.params.size() != 1) throw StructuralError("translate needs one parameter");
    int t = std::stoi(parsed.params[0]);
    ra.tree = std::make_unique<MetricTree>(path_tree(-window, window));
    ra.map = std::make_unique<PartialTreeMap>(path_translation(*ra.tree, t));
    return ra;
  }
  f2::Map wm = [&] {
    if (parsed.rule == "f2-leftmul") {
      if (parsed.params.size() != 1) throw StructuralError("f2-leftmul needs a word");
      return f2::leftmul(f2::read_word(parsed.params[0]));
    }
    if (parsed.rule == "f2-phi") return f2::phi_map();
    if (parsed.rule == "f2-theta") return f2::theta_map();
    throw StructuralError("unknown rule: " + parsed.rule);
  }();
  f2::Window w = f2::ball(window);
  ra.tree = std::make_unique<MetricTree>(std::move(w.tree));
  ra.map = std::make_unique<PartialTreeMap>(window_map(*ra.tree, w.labels, w.ids, wm));
  for (const auto& word : w.labels) ra.labels.push_back(f2::show(word));
  return ra;
}

std::string vertex_label(const ResolvedAction& ra, PointId v) {
  if (ra.labels.empty()) return std::to_string(v);
  return ra.labels[static_cast<std::size_t>(ra.tree->vindex(v))];
}

// ---- subcommand bodies ------------------------------------------------------

int emit(const Report& rep) {
  std::cout << rep.render();
  return rep.exit_code();
}

int cmd_check_axioms(const std::string& file) {
  auto in = open_or_die(file);
  FinitePretree t = parse_pretree(in);
  auto ax = check_pretree_axioms(t);
  Report rep;
  rep.add_check("check=axioms points=" + std::to_string(t.size()), ax.pass());
  for (const auto& v : ax.violations)
    rep.add_fail(std::string("axiom=") + axiom_name(v.axiom) +
                 " witness=" + witness_str(v.witness) + " result=fail");
  return emit(rep);
}

int cmd_median(const std::string& file, PointId x, PointId y, PointId z) {
  auto in = open_or_die(file);
  FinitePretree t = parse_pretree(in);
  auto m = median(t, x, y, z);
  Report rep;
  if (m)
    rep.add("check=median point=" + std::to_string(*m) + " result=pass");
  else
    rep.add_fail("check=median point=absent result=fail");
  return emit(rep);
}

int cmd_bridge(const std::string& file, const std::string& a_csv, const std::string& b_csv) {
  auto in = open_or_die(file);
  FinitePretree t = parse_pretree(in);
  Bridge b = bridge(t, normalized(parse_id_list(a_csv)), normalized(parse_id_list(b_csv)));
  Report rep;
  rep.add("check=bridge t=" + std::to_string(b.t) + " q=" + std::to_string(b.q) +
          " interior=" + points_str(b.interior) + " result=pass");
  return emit(rep);
}

int cmd_closure(const std::string& file, const std::string& pts_csv) {
  auto in = open_or_die(file);
  FinitePretree t = parse_pretree(in);
  PointSet s = median_closure(t, normalized(parse_id_list(pts_csv)));
  Report rep;
  rep.add("check=closure size=" + std::to_string(s.size()) + " points=" + points_str(s) +
          " result=pass");
  return emit(rep);
}

int cmd_classify(const std::string& tree_file, const std::string& auto_file, int window) {
  ResolvedAction ra = resolve_action(tree_file, auto_file, window);
  Classification c = classify(*ra.map);
  Report rep;
  if (c.kind == Classification::Kind::Elliptic) {
    std::string fixed;
    for (std::size_t i = 0; i < c.fixed_points.size() && i < 16; ++i) {
      if (i) fixed += ",";
      const auto& p = c.fixed_points[i];
      fixed += p.is_vertex() ? vertex_label(ra, p.v()) : p.str();
    }
    rep.add("check=classify kind=elliptic fixed_count=" +
            std::to_string(c.fixed_points.size()) + " fixed=" + fixed + " result=pass");
  } else {
    rep.add("check=classify kind=loxodromic translation=" +
            rational_str(c.translation_length) +
            " axis_size=" + std::to_string(c.axis.size()) + " result=pass");
    std::string axis;
    for (std::size_t i = 0; i < c.axis.size() && i < 24; ++i) {
      if (i) axis += ",";
      axis += vertex_label(ra, c.axis[i]);
    }
    rep.add("check=classify-axis points=" + axis + " result=pass");
  }
  return emit(rep);
}

int cmd_non_nesting(const std::string& tree_file, const std::string& auto_file, int window) {
  ResolvedAction ra = resolve_action(tree_file, auto_file, window);
  std::vector<std::pair<TreePoint, TreePoint>> segs;
  const auto& vs = ra.tree->vertices();
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      segs.emplace_back(TreePoint::vertex(vs[i]), TreePoint::vertex(vs[j]));
  auto nn = check_non_nesting(*ra.map, segs);
  Report rep;
  rep.add_check("check=non-nesting segments=" + std::to_string(segs.size()) +
                    " inconclusive=" + std::to_string(nn.inconclusive.size()),
                nn.pass());
  for (std::size_t i = 0; i < nn.nested.size() && i < 8; ++i)
    rep.add_fail("nested segment=" + nn.nested[i].a.str() + ".." + nn.nested[i].b.str() +
                 " result=fail");
  return emit(rep);
}

int cmd_flow(const std::string& file, bool demo) {
  Report rep;
  if (demo) {
    LineArc order{{1, 2, 3}, true, std::nullopt};
    auto pf = flow_from_line_arc(order, {rat(0), rat(5), rat(10)});
    rep.add_check("flow=order-arc axioms", check_flow_axioms(*pf.flow).pass());
    rep.add_check("flow=order-arc classes_le_2", e_classes(*pf.flow).size() <= 2);

    LineArc gap{{rat(1, 2), rat(3, 4), rat(7, 8)}, true, rat(1)};
    std::vector<Rational> ints;
    for (int i = -4; i <= 4; ++i) ints.push_back(rat(i));
    auto cut = flow_cut_line(ints, gap);
    rep.add_check("flow=gap-arc lies_on cut=gap at=" + rational_str(cut.cut.at),
                  cut.lies_on && cut.cut.pos == Cut::Pos::Gap);

    SpiderArc branch{3, {rat(1), rat(2), rat(3)}, true, std::nullopt};
    std::vector<SpiderPoint> members{{0, rat(0)}};
    for (int i = 1; i <= 4; ++i) {
      members.push_back({1, rat(i)});
      members.push_back({2, rat(i)});
    }
    auto bc = flow_cut_spider_line(1, 2, members, branch);
    rep.add_check("flow=branch-arc lies_on cut=point at=" + rational_str(bc.cut.at),
                  bc.lies_on && bc.cut.pos == Cut::Pos::AtPoint);
    return emit(rep);
  }
  auto in = open_or_die(file);
  auto parsed = parse_pretree_file(in);
  FinitePretree base(parsed.points, parsed.triples);
  FlowRelation fr(base, parsed.flow_pairs);
  auto chk = check_flow_axioms(fr);
  rep.add_check("check=flow-axioms pairs=" + std::to_string(parsed.flow_pairs.size()),
                chk.pass());
  for (const auto& v : chk.violations)
    rep.add_fail(std::string("flow fail axiom=") + axiom_name(v.axiom) + " witness=" +
                 std::to_string(v.witness[0]) + "," + std::to_string(v.witness[1]) + "," +
                 std::to_string(v.witness[2]) + " result=fail");
  return emit(rep);
}

std::vector<AffineMap> parse_line_gens(const std::string& file) {
  auto in = open_or_die(file);
  std::vector<AffineMap> gens;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok != "translate") throw StructuralError("ends generators must be translations");
    std::string q;
    if (!(ls >> q)) throw StructuralError("translate needs a parameter");
    gens.push_back(AffineMap::translation(parse_rational(q)));
  }
  if (gens.empty()) throw StructuralError("no generators in " + file);
  return gens;
}

int cmd_ends(const std::string& gens_file, const std::string& a0_str, int axis_of,
             int word_bound, int window) {
  std::vector<AffineMap> gens = parse_line_gens(gens_file);
  if (axis_of < 0 || axis_of >= static_cast<int>(gens.size()))
    throw StructuralError("--axis-of index out of range");
  EndContext ctx{gens[static_cast<std::size_t>(axis_of)], parse_rational(a0_str),
                 rat(-window), rat(window)};
  ctx.validate();

  std::vector<AffineMap> all = gens;
  for (const auto& g : gens) all.push_back(g.inverse());
  auto words = affine_words(all, word_bound);

  Report rep;
  std::vector<Rational> image;
  bool cocycle_ok = true, order_ok = true;
  for (const auto& h : words) {
    try {
      image.push_back(nu(ctx, h));
    } catch (const WindowExhausted&) {
    }
  }
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());

  // nu(h h') = h *_g nu(h') on a bounded pair sample
  const std::size_t pair_cap = std::min<std::size_t>(words.size(), 24);
  for (std::size_t i = 0; i < pair_cap; ++i)
    for (std::size_t j = 0; j < pair_cap; ++j) {
      try {
        Rational lhs = nu(ctx, words[i].after(words[j]));
        Rational rhs = star_action(ctx, words[i], nu(ctx, words[j]));
        if (lhs != rhs) cocycle_ok = false;
      } catch (const WindowExhausted&) {
      }
    }

  // order preservation of nu on comparable pairs
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      try {
        auto cmp = coset_compare(ctx, words[i], words[j]);
        Rational ni = nu(ctx, words[i]), nj = nu(ctx, words[j]);
        if (cmp.verdict == CosetOrder::Less && !(ni < nj)) order_ok = false;
        if (cmp.verdict == CosetOrder::Equivalent && ni != nj) order_ok = false;
      } catch (const WindowExhausted&) {
      }
    }
  auto doc = dense_or_cyclic(image, rat(1, 1 << 20));
  rep.add_check("check=nu-image size=" + std::to_string(image.size()), !image.empty());
  rep.add_check("check=nu-order-preserving", order_ok);
  rep.add_check("check=nu-cocycle", cocycle_ok);
  std::string verdict = doc.kind == DenseOrCyclic::Kind::Cyclic
                            ? "cyclic step=" + rational_str(doc.value)
                            : (doc.kind == DenseOrCyclic::Kind::Dense ? "dense" : "inconclusive");
  rep.add("check=spacing verdict=" + verdict + " result=pass");
  return emit(rep);
}

struct GroupSpec {
  int n;
  std::uint32_t p;
};

GroupSpec parse_group_spec(const std::string& s) {
  if (s.rfind("sl:", 0) != 0) throw StructuralError("only sl:<n>:<p> groups are supported");
  auto rest = s.substr(3);
  auto colon = rest.find(':');
  if (colon == std::string::npos) throw StructuralError("group spec needs sl:<n>:<p>");
  return GroupSpec{std::stoi(rest.substr(0, colon)),
                   static_cast<std::uint32_t>(std::stoul(rest.substr(colon + 1)))};
}

int cmd_xpath(const std::string& group, const std::string& cls, const std::string& from_csv,
              const std::string& to_csv, bool all_pairs, std::size_t cap) {
  GroupSpec gs = parse_group_spec(group);
  if (cls != "transvections") throw StructuralError("only --class transvections is supported");
  FiniteGroupTable t = build_group_table_sl(gs.n, gs.p, cap);
  int class_id = -1;
  for (int i = 0; i < t.size(); ++i)
    if (!t.matrix(i).is_identity() && is_transvection(t.matrix(i))) {
      class_id = t.class_of(i);
      break;
    }
  if (class_id < 0) throw StructuralError("no transvections in this group");
  const auto& members = t.classes()[class_id];

  Report rep;
  rep.add("group=" + group + " order=" + std::to_string(t.size()) +
          " class_size=" + std::to_string(members.size()) + " result=pass");
  if (all_pairs) {
    std::size_t longest = 0;
    bool all_connected = true;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        auto res = bfs_xpath(t, class_id, members[i], members[j]);
        if (!res.connected)
          all_connected = false;
        else
          longest = std::max(longest, res.path.size());
      }
    rep.add_check("check=all-pairs connected max_path=" + std::to_string(longest),
                  all_connected);
    return emit(rep);
  }
  if (from_csv.empty() || to_csv.empty())
    throw StructuralError("xpath needs --from and --to (or --all-pairs)");
  GfMatrix mf = parse_matrix(from_csv, gs.n, gs.p);
  GfMatrix mt = parse_matrix(to_csv, gs.n, gs.p);
  auto fi = t.find_key(mf.key()), ti = t.find_key(mt.key());
  if (!fi || !ti) throw StructuralError("matrix not in the group");
  auto res = bfs_xpath(t, class_id, *fi, *ti);
  if (!res.connected) {
    rep.add_fail("check=xpath connected=no result=fail");
    return emit(rep);
  }
  std::string elems;
  for (std::size_t i = 0; i < res.path.size(); ++i) {
    if (i) elems += " ";
    elems += t.describe(res.path[i]);
  }
  std::string signs;
  for (std::size_t i = 0; i < res.signs.size(); ++i) {
    if (i) signs += " ";
    signs += std::to_string(res.signs[i].first) + "," + std::to_string(res.signs[i].second);
  }
  rep.add("check=xpath length=" + std::to_string(res.path.size()) + " elements=" + elems +
          " result=pass");
  rep.add("check=xpath-signs steps=" + signs + " result=pass");
  return emit(rep);
}

GfVector random_vector(SplitMix64& rng, int n, std::uint32_t p, bool nonzero) {
  GfVector v(static_cast<std::size_t>(n));
  do {
    for (auto& x : v) x = static_cast<std::uint32_t>(rng.below(p));
  } while (nonzero && is_zero_vector(v));
  return v;
}

// A uniformly-chosen pair (u, v) with v.u = 0, both nonzero.
Transvection random_transvection(SplitMix64& rng, int n, std::uint32_t p) {
  PrimeField f(p);
  while (true) {
    GfVector u = random_vector(rng, n, p, true);
    GfVector v = random_vector(rng, n, p, true);
    if (dot(f, v, u) != 0) continue;
    std::uint32_t xi = 1 + static_cast<std::uint32_t>(rng.below(p - 1));
    return make_transvection(u, v, xi, p);
  }
}

int cmd_sl_demo(std::uint64_t seed, int draws) {
  SplitMix64 rng(seed);
  Report rep;
  const std::vector<std::uint32_t> ps{2, 3, 5};
  const std::vector<int> ns{3, 4};

  int ok = 0;
  for (int d = 0; d < draws; ++d) {
    std::uint32_t p = ps[rng.below(ps.size())];
    int n = ns[rng.below(ns.size())];
    PrimeField f(p);
    while (true) {
      Transvection t1 = random_transvection(rng, n, p);
      GfVector w = random_vector(rng, n, p, true);
      GfVector y = random_vector(rng, n, p, true);
      if (dot(f, y, w) != 0 || dot(f, y, t1.u) != 0) continue;
      std::uint32_t zeta = 1 + static_cast<std::uint32_t>(rng.below(p - 1));
      Transvection t2 = make_transvection(w, y, zeta, p);
      if (chevalley_commutator(t1, t2).matches) ++ok;
      break;
    }
  }
  rep.add_check("check=commutator-formula draws=" + std::to_string(draws) +
                    " ok=" + std::to_string(ok),
                ok == draws);

  FiniteGroupTable t = build_group_table_sl(3, 2);
  int class_id = -1, count = 0;
  for (int i = 0; i < t.size(); ++i)
    if (!t.matrix(i).is_identity() && is_transvection(t.matrix(i))) {
      ++count;
      class_id = t.class_of(i);
    }
  rep.add_check("check=transvection-count count=" + std::to_string(count), count == 21);
  const auto& members = t.classes()[class_id];
  std::size_t longest = 0;
  bool connected = true;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      auto res = bfs_xpath(t, class_id, members[i], members[j]);
      if (!res.connected) connected = false;
      longest = std::max(longest, res.path.size());
    }
  rep.add_check("check=class-connected max_path=" + std::to_string(longest),
                connected && longest <= 5);

  int verified = 0, degenerate = 0;
  const int pairs = 50;
  for (int d = 0; d < pairs; ++d) {
    std::uint32_t p = ps[rng.below(ps.size())];
    int n = ns[rng.below(ns.size())];
    Transvection a = random_transvection(rng, n, p);
    Transvection b = random_transvection(rng, n, p);
    auto path = transvection_xpath(a, b);
    if (verify_path_claims(path)) ++verified;
    if (!path.collapsed.empty()) ++degenerate;
  }
  rep.add_check("check=five-step-paths pairs=" + std::to_string(pairs) +
                    " verified=" + std::to_string(verified) +
                    " degenerate=" + std::to_string(degenerate),
                verified == pairs);
  return emit(rep);
}

f2::Point parse_f2_point(const std::string& s) {
  auto c1 = s.find(',');
  if (c1 == std::string::npos) return f2::vertex_point(f2::read_word(s));
  auto c2 = s.find(',', c1 + 1);
  if (c2 == std::string::npos) throw StructuralError("edge point needs <base>,<letter>,<num>/<den>");
  f2::Word base = f2::read_word(s.substr(0, c1));
  std::string letter = s.substr(c1 + 1, c2 - c1 - 1);
  if (letter.size() != 1 || !f2::valid_letter(letter[0]))
    throw StructuralError("bad edge letter: " + letter);
  return f2::edge_point(base, letter[0], parse_rational(s.substr(c2 + 1)));
}

int cmd_f2_demo(const std::string& check, int radius, int word_bound, const std::string& v_str) {
  Report rep;
  const bool all = check == "all";
  if (all || check == "phi2") {
    bool ok = true;
    for (const auto& w : f2::all_words(std::min(word_bound, 8)))
      if (f2::phi(f2::phi(w)) != f2::concat("ba", w)) ok = false;
    rep.add_check("check=phi2 bound=" + std::to_string(std::min(word_bound, 8)), ok);
  }
  if (all || check == "identities") {
    auto idc = f2::verify_generator_identities(std::min(word_bound, 8));
    rep.add_check("check=identities a2", idc.a2_ok);
    rep.add_check("check=identities b2", idc.b2_ok);
    rep.add_check("check=identities parity", idc.parity_ok);
  }
  if (all || check == "claim1") {
    f2::Point v = v_str.empty() ? f2::vertex_point("") : parse_f2_point(v_str);
    auto oc = f2::orbit_and_closure(v, word_bound, radius);
    rep.add_check("check=claim1 radius=" + std::to_string(radius) + " bound=" +
                      std::to_string(word_bound) + " orbit=" + std::to_string(oc.orbit.size()) +
                      " closure=" + std::to_string(oc.closure.size()),
                  oc.closure_has_all_ball_vertices);
  }
  if (all || check == "claim2") {
    f2::Point v = v_str.empty() ? f2::edge_point("", 'a', rat(1, 2)) : parse_f2_point(v_str);
    if (v.is_vertex()) throw StructuralError("claim2 needs an edge point");
    auto oc = f2::orbit_and_closure(v, word_bound, radius);
    rep.add_check("check=claim2 kinds=" + std::to_string(oc.orbit_kinds), oc.orbit_kinds == 2);
    rep.add_check("check=claim2 one-orbit-point-per-edge", oc.one_orbit_point_per_edge);
  }
  if (all || check == "remark35") {
    auto sp = f2::axis_orbit_spacing(std::min(word_bound, 6), 2 * radius + 4);
    std::string pos;
    for (std::size_t i = 0; i < sp.positions.size() && i < 16; ++i) {
      if (i) pos += ",";
      pos += std::to_string(sp.positions[i]);
    }
    rep.add_check("check=remark35 certified=" + std::to_string(sp.certified_count) +
                      " positions=" + pos,
                  !sp.inconclusive && sp.all_even);
  }
  if (rep.count() == 0) throw StructuralError("unknown f2 check: " + check);
  return emit(rep);
}

std::vector<PretreeMap> parse_pretree_gens(const std::string& file, const FinitePretree& t) {
  auto in = open_or_die(file);
  std::vector<PretreeMap> gens;
  std::string line;
  std::vector<std::pair<PointId, PointId>> mapping;
  std::string label;
  auto flush = [&] {
    if (label.empty()) return;
    std::vector<std::optional<PointId>> img(static_cast<std::size_t>(t.size()));
    for (auto [from, to] : mapping) img[static_cast<std::size_t>(t.index_checked(from))] = to;
    gens.emplace_back(t, std::move(img), label);
    mapping.clear();
    label.clear();
  };
  int count = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "perm") {
      flush();
      label = "g" + std::to_string(count++);
      std::string rest;
      if (ls >> rest) label = rest;
      continue;
    }
    if (tok != "m" || label.empty())
      throw StructuralError("generator files hold perm blocks of m-lines");
    PointId from, to;
    if (!(ls >> from >> to)) throw StructuralError("bad m-line: " + line);
    mapping.emplace_back(from, to);
  }
  flush();
  if (gens.empty()) throw StructuralError("no generators in " + file);
  return gens;
}

int cmd_isometrize(const std::string& pretree_file, const std::string& gens_file) {
  auto in = open_or_die(pretree_file);
  FinitePretree t = parse_pretree(in);
  DiscreteMedianClosure dmc{t, parse_pretree_gens(gens_file, t)};
  EquivariantMetric em = discrete_to_simplicial(dmc);
  std::cout << format_tree(em.tree);
  bool all_ok = true;
  for (std::size_t i = 0; i < em.generator_labels.size(); ++i) {
    std::cout << "isometry gen=" << em.generator_labels[i] << " "
              << (em.isometry_ok[i] ? "ok" : "fail") << "\n";
    all_ok = all_ok && em.isometry_ok[i];
  }
  std::cout << "verdict=" << (all_ok ? "pass" : "fail") << " count="
            << em.generator_labels.size() << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification laboratory for group actions on median pretrees and real trees"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t cap = 1'000'000;
  app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--cap", cap, "group order cap");

  std::string file, tree_file, auto_file, a_csv, b_csv, pts_csv;
  PointId mx = 0, my = 0, mz = 0;
  int window = 8, word_bound = 8, radius = 4, axis_of = 0, draws = 1000;
  std::string gens_file, a0_str = "0", group = "sl:3:2", cls = "transvections";
  std::string from_csv, to_csv, f2_check = "all", v_str, pretree_file;
  bool all_pairs = false, flow_demo = false;

  auto* c_ax = app.add_subcommand("check-axioms", "check the betweenness axioms of a pretree file");
  c_ax->add_option("file", file, "pretree file")->required();

  auto* c_median = app.add_subcommand("median", "median of three points of a pretree");
  c_median->add_option("file", file)->required();
  c_median->add_option("x", mx)->required();
  c_median->add_option("y", my)->required();
  c_median->add_option("z", mz)->required();

  auto* c_bridge = app.add_subcommand("bridge", "bridge between two full sets");
  c_bridge->add_option("file", file)->required();
  c_bridge->add_option("--a", a_csv, "comma list of point ids")->required();
  c_bridge->add_option("--b", b_csv, "comma list of point ids")->required();

  auto* c_closure = app.add_subcommand("closure", "median closure of a point set");
  c_closure->add_option("file", file)->required();
  c_closure->add_option("--points", pts_csv, "comma list of point ids")->required();

  auto* c_classify = app.add_subcommand("classify", "elliptic/loxodromic classification");
  c_classify->add_option("--tree", tree_file, "tree file (for perm automorphisms)");
  c_classify->add_option("--auto", auto_file, "automorphism file")->required();
  c_classify->add_option("--window", window, "window radius for rule automorphisms");

  auto* c_nn = app.add_subcommand("non-nesting", "search for properly nested segment images");
  c_nn->add_option("--tree", tree_file, "tree file (for perm automorphisms)");
  c_nn->add_option("--auto", auto_file, "automorphism file")->required();
  c_nn->add_option("--window", window, "window radius for rule automorphisms");

  auto* c_flow = app.add_subcommand("flow", "flow axioms of a relation, or built-in arc demos");
  c_flow->add_option("file", file, "pretree file with r-lines");
  c_flow->add_flag("--demo", flow_demo, "run the built-in arc suite");

  auto* c_ends = app.add_subcommand("ends", "end-stabilizer orbit structure on the line");
  c_ends->add_option("--gens", gens_file, "file of 'translate <q>' lines")->required();
  c_ends->add_option("--a0", a0_str, "base point");
  c_ends->add_option("--axis-of", axis_of, "index of the loxodromic generator");
  c_ends->add_option("--word-bound", word_bound, "generator word length bound");
  c_ends->add_option("--window", window, "window radius");

  auto* c_xpath = app.add_subcommand("xpath", "paths inside a conjugacy class");
  c_xpath->add_option("--group", group, "group spec sl:<n>:<p>");
  c_xpath->add_option("--class", cls, "class name (transvections)");
  c_xpath->add_option("--from", from_csv, "row-major comma matrix");
  c_xpath->add_option("--to", to_csv, "row-major comma matrix");
  c_xpath->add_flag("--all-pairs", all_pairs, "exhaustive BFS over all class pairs");

  auto* c_sl = app.add_subcommand("sl-demo", "commutator formula and class connectivity demos");
  c_sl->add_option("--draws", draws, "number of random formula draws");

  auto* c_f2 = app.add_subcommand("f2-demo", "free-group lab checks");
  c_f2->add_option("--check", f2_check, "phi2|identities|claim1|claim2|remark35|all");
  c_f2->add_option("--radius", radius, "ball radius");
  c_f2->add_option("--word-bound", word_bound, "generator word bound");
  c_f2->add_option("--v", v_str, "base point: word, or <base>,<letter>,<num>/<den>");

  auto* c_iso = app.add_subcommand("isometrize", "simplicial realization of a median pretree");
  c_iso->add_option("--pretree", pretree_file, "pretree file")->required();
  c_iso->add_option("--gens", gens_file, "file of perm blocks")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (c_ax->parsed()) return cmd_check_axioms(file);
    if (c_median->parsed()) return cmd_median(file, mx, my, mz);
    if (c_bridge->parsed()) return cmd_bridge(file, a_csv, b_csv);
    if (c_closure->parsed()) return cmd_closure(file, pts_csv);
    if (c_classify->parsed()) return cmd_classify(tree_file, auto_file, window);
    if (c_nn->parsed()) return cmd_non_nesting(tree_file, auto_file, window);
    if (c_flow->parsed()) {
      if (!flow_demo && file.empty()) throw StructuralError("flow needs a file or --demo");
      return cmd_flow(file, flow_demo);
    }
    if (c_ends->parsed()) return cmd_ends(gens_file, a0_str, axis_of, word_bound, window);
    if (c_xpath->parsed()) return cmd_xpath(group, cls, from_csv, to_csv, all_pairs, cap);
    if (c_sl->parsed()) return cmd_sl_demo(seed, draws);
    if (c_f2->parsed()) return cmd_f2_demo(f2_check, radius, word_bound, v_str);
    if (c_iso->parsed()) return cmd_isometrize(pretree_file, gens_file);
  } catch (const StructuralError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const WindowExhausted& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
