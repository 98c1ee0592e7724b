#pragma once

#include "treelab/errors.hpp"
#include "treelab/lazy_tree.hpp"
#include "treelab/rational.hpp"
#include "treelab/tree_model.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

// The Cayley tree of the free group on a, b with unit edges, the letter-swap
// involution, the axis-shift map phi, and the subgroup generated by a^2, b^2
// and phi. Words are reduced strings over a b A B (A = a^-1, B = b^-1);
// the empty string is the identity, shown as "1".

namespace treelab::f2 {

using Word = std::string;

inline bool valid_letter(char c) { return c == 'a' || c == 'b' || c == 'A' || c == 'B'; }

inline char inverse_letter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
  }
  throw StructuralError(std::string("bad letter '") + c + "'");
}

inline bool is_reduced_word(const Word& w) {
  for (char c : w)
    if (!valid_letter(c)) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i + 1] == inverse_letter(w[i])) return false;
  return true;
}

inline std::string show(const Word& w) { return w.empty() ? "1" : w; }

inline Word read_word(std::string_view s) {
  if (s == "1") return "";
  Word w(s);
  if (!is_reduced_word(w)) throw StructuralError("not a reduced word: " + w);
  return w;
}

// Free reduction happens at the seam only; both inputs must be reduced.
inline Word concat(Word lhs, const Word& rhs) {
  std::size_t i = 0;
  while (!lhs.empty() && i < rhs.size() && rhs[i] == inverse_letter(lhs.back())) {
    lhs.pop_back();
    ++i;
  }
  lhs.append(rhs, i, Word::npos);
  return lhs;
}

inline Word inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse_letter(*it));
  return out;
}

// Letterwise a <-> b, A <-> B. An involution.
inline Word theta(const Word& w) {
  Word out = w;
  for (char& c : out) {
    switch (c) {
      case 'a': c = 'b'; break;
      case 'b': c = 'a'; break;
      case 'A': c = 'B'; break;
      case 'B': c = 'A'; break;
    }
  }
  return out;
}

// ---- the axis of ba -------------------------------------------------------
// Its vertices are the alternating words b, ba, bab, ... and A, AB, ABA, ...
// plus the identity; position j is the word of |j| alternating letters,
// starting with 'b' for j > 0 and with 'A' for j < 0.

inline Word axis_word(long j) {
  Word out;
  if (j >= 0)
    for (long i = 0; i < j; ++i) out.push_back(i % 2 == 0 ? 'b' : 'a');
  else
    for (long i = 0; i < -j; ++i) out.push_back(i % 2 == 0 ? 'A' : 'B');
  return out;
}

// Length of the longest prefix of w that lies on the axis of ba.
inline std::size_t axis_prefix_len(const Word& w) {
  std::size_t i = 0;
  if (!w.empty() && w[0] == 'b')
    while (i < w.size() && w[i] == (i % 2 == 0 ? 'b' : 'a')) ++i;
  else if (!w.empty() && w[0] == 'A')
    while (i < w.size() && w[i] == (i % 2 == 0 ? 'A' : 'B')) ++i;
  return i;
}

inline bool on_axis(const Word& w) { return axis_prefix_len(w) == w.size(); }

inline long axis_pos(const Word& w) {
  if (!on_axis(w)) throw PreconditionError("word not on the axis of ba: " + show(w));
  if (w.empty()) return 0;
  return w[0] == 'b' ? static_cast<long>(w.size()) : -static_cast<long>(w.size());
}

// ---- phi ------------------------------------------------------------------
// Case split on the longest axis prefix p of w = p w1:
//   p = (ba)^k      -> (ba)^k b            theta(w1)
//   p = (ba)^k b    -> (ba)^{k+1}          theta(w1)
//   p = (AB)^k A    -> (AB)^k              theta(w1)
//   p = (AB)^k, k>0 -> (AB)^{k-1} A        theta(w1)
// The k = 0 case of the A-form (prefix a^-1) is the unique total extension.
// In all cases the image prefix sits one step further along the axis and the
// seam needs no reduction.

inline Word phi(const Word& w) {
  const std::size_t pl = axis_prefix_len(w);
  const Word tail = theta(w.substr(pl));
  if (pl == 0 || w[0] == 'b') {
    const long k = static_cast<long>(pl / 2);
    const bool eps = (pl % 2) == 1;
    return (eps ? axis_word(2 * (k + 1)) : axis_word(2 * k + 1)) + tail;
  }
  const long k = static_cast<long>(pl / 2);
  const bool eps = (pl % 2) == 1;
  return (eps ? axis_word(-2 * k) : axis_word(-(2 * k - 1))) + tail;
}

inline Word phi_inv(const Word& w) {
  const std::size_t pl = axis_prefix_len(w);
  long pos = 0;
  if (pl > 0) pos = (w[0] == 'b') ? static_cast<long>(pl) : -static_cast<long>(pl);
  return axis_word(pos - 1) + theta(w.substr(pl));
}

// ---- word geometry --------------------------------------------------------

inline std::size_t common_prefix_len(const Word& x, const Word& y) {
  std::size_t i = 0;
  while (i < x.size() && i < y.size() && x[i] == y[i]) ++i;
  return i;
}

inline int dist(const Word& x, const Word& y) {
  const std::size_t c = common_prefix_len(x, y);
  return static_cast<int>(x.size() + y.size() - 2 * c);
}

// In a rooted tree the median of three vertices is the deepest of the three
// pairwise meet points.
inline Word median(const Word& x, const Word& y, const Word& z) {
  const std::size_t lxy = common_prefix_len(x, y);
  const std::size_t lyz = common_prefix_len(y, z);
  const std::size_t lzx = common_prefix_len(z, x);
  if (lxy >= lyz && lxy >= lzx) return x.substr(0, lxy);
  if (lyz >= lzx) return y.substr(0, lyz);
  return z.substr(0, lzx);
}

// Vertex chain from x to y, inclusive.
inline std::vector<Word> path(const Word& x, const Word& y) {
  const std::size_t c = common_prefix_len(x, y);
  std::vector<Word> out;
  for (std::size_t i = x.size(); i > c; --i) out.push_back(x.substr(0, i));
  for (std::size_t i = c; i <= y.size(); ++i) out.push_back(y.substr(0, i));
  return out;
}

inline std::vector<Word> all_words(int max_len) {
  std::vector<Word> out{""};
  std::size_t start = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i)
      for (char l : {'a', 'b', 'A', 'B'})
        if (out[i].empty() || l != inverse_letter(out[i].back())) out.push_back(out[i] + l);
    start = end;
  }
  return out;
}

// ---- axes of left multiplications ------------------------------------------

struct LeftMulAxis {
  Word conj;  // u with g = u core u^-1, all seams reduced
  Word core;  // cyclically reduced, nonempty
  long period() const { return static_cast<long>(core.size()); }

  // Vertex at integer parameter k; k = 0 is u, increasing along core.
  Word point(long k) const {
    const long L = period();
    Word out = conj;
    if (k >= 0) {
      for (long i = 0; i < k / L; ++i) out = concat(out, core);
      out = concat(out, core.substr(0, static_cast<std::size_t>(k % L)));
    } else {
      const Word inv = inverse(core);
      long m = -k;
      for (long i = 0; i < m / L; ++i) out = concat(out, inv);
      out = concat(out, inv.substr(0, static_cast<std::size_t>(m % L)));
    }
    return out;
  }
};

inline LeftMulAxis leftmul_axis(const Word& g) {
  if (g.empty()) throw PreconditionError("identity has no axis");
  Word core = g, conj;
  while (core.size() >= 2 && core.back() == inverse_letter(core.front())) {
    conj.push_back(core.front());
    core = core.substr(1, core.size() - 2);
  }
  return LeftMulAxis{conj, core};
}

// Displacement of vertex x under left multiplication by g.
inline int displacement(const Word& g, const Word& x) {
  return static_cast<int>(concat(concat(inverse(x), g), x).size());
}

inline bool on_leftmul_axis(const Word& g, const Word& x) {
  return displacement(g, x) == static_cast<int>(leftmul_axis(g).core.size());
}

// ---- finite windows ---------------------------------------------------------

struct Window {
  MetricTree tree;
  std::vector<Word> labels;           // PointId -> word
  std::unordered_map<Word, int> ids;  // word -> PointId
  int radius;                         // -1 for spanning-subtree windows
};

inline LazyTree cayley_lazy() {
  LazyTree lt;
  lt.root = "";
  lt.neighbors = [](const std::string& w) {
    std::vector<std::string> out;
    for (char l : {'a', 'b', 'A', 'B'})
      out.push_back(concat(w, Word(1, l)));
    return out;
  };
  return lt;
}

inline Window ball(int radius) {
  auto mb = materialize_ball(cayley_lazy(), "", radius);
  return Window{std::move(mb.tree), std::move(mb.labels), std::move(mb.ids), radius};
}

// Spanning subtree of the given vertices: the union of the paths from the
// first point to every other. Vertex ids follow (length, lex) order.
inline Window span(const std::vector<Word>& pts) {
  if (pts.empty()) throw PreconditionError("span needs at least one word");
  std::unordered_set<Word> vset;
  for (const auto& w : pts)
    for (const auto& v : path(pts.front(), w)) vset.insert(v);
  std::vector<Word> labels(vset.begin(), vset.end());
  std::sort(labels.begin(), labels.end(), [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  std::unordered_map<Word, int> ids;
  for (std::size_t i = 0; i < labels.size(); ++i) ids[labels[i]] = static_cast<int>(i);
  // Adjacent words differ by one appended letter, so every edge of the span
  // joins a word to its parent prefix.
  std::vector<PointId> vs;
  std::vector<MetricTree::Edge> es;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    vs.push_back(static_cast<int>(i));
    if (!labels[i].empty()) {
      Word parent = labels[i].substr(0, labels[i].size() - 1);
      auto it = ids.find(parent);
      if (it != ids.end())
        es.push_back({it->second, static_cast<int>(i), Rational(1)});
    }
  }
  return Window{MetricTree(std::move(vs), std::move(es)), std::move(labels), std::move(ids), -1};
}

// ---- points with rational offsets -------------------------------------------

// A vertex or an interior point of the edge (base, base·dir), offset from
// base. Canonical: appending dir to base never cancels.
struct Point {
  Word base;
  char dir = 0;
  Rational off{0};

  bool is_vertex() const { return dir == 0; }
  Word child() const { return base + dir; }

  std::string key() const {
    if (is_vertex()) return "v:" + base;
    return "e:" + base + ":" + dir + ":" + fraction_str(off);
  }

  friend bool operator==(const Point& p, const Point& q) {
    return p.base == q.base && p.dir == q.dir && p.off == q.off;
  }
  friend bool operator!=(const Point& p, const Point& q) { return !(p == q); }
  friend bool operator<(const Point& p, const Point& q) {
    if (p.base.size() != q.base.size()) return p.base.size() < q.base.size();
    if (p.base != q.base) return p.base < q.base;
    if (p.dir != q.dir) return p.dir < q.dir;
    return p.off < q.off;
  }
};

inline Point vertex_point(Word w) { return Point{std::move(w), 0, Rational(0)}; }

inline Point edge_point(Word base, char dir, const Rational& off) {
  if (off < 0 || off > 1) throw PreconditionError("edge offset out of [0,1]");
  if (!base.empty() && dir == inverse_letter(base.back())) {
    // re-express from the shorter endpoint
    char up = base.back();
    base.pop_back();
    return edge_point(std::move(base), up, Rational(1) - off);
  }
  if (off == 0) return vertex_point(std::move(base));
  if (off == 1) return vertex_point(base + dir);
  return Point{std::move(base), dir, off};
}

inline Rational pdist(const Point& p, const Point& q) {
  if (p == q) return 0;
  if (!p.is_vertex() && !q.is_vertex() && p.base == q.base && p.dir == q.dir) {
    Rational d = p.off - q.off;
    return d < 0 ? -d : d;
  }
  auto anchors = [](const Point& x) {
    std::vector<std::pair<Word, Rational>> out;
    if (x.is_vertex())
      out.emplace_back(x.base, Rational(0));
    else {
      out.emplace_back(x.base, x.off);
      out.emplace_back(x.child(), Rational(1) - x.off);
    }
    return out;
  };
  std::optional<Rational> best;
  for (const auto& [va, da] : anchors(p))
    for (const auto& [vb, db] : anchors(q)) {
      Rational cand = da + dist(va, vb) + db;
      if (!best || cand < *best) best = cand;
    }
  return *best;
}

// The point at rational distance d from `from` along the geodesic to `to`.
inline Point p_toward(const Point& from, const Point& to, const Rational& d) {
  if (d < 0) throw PreconditionError("p_toward: negative distance");
  const Rational total = pdist(from, to);
  if (d > total) throw PreconditionError("p_toward: distance beyond target");
  if (d == 0) return from;
  if (d == total) return to;
  if (!from.is_vertex() && !to.is_vertex() && from.base == to.base && from.dir == to.dir) {
    Rational off = to.off > from.off ? Rational(from.off + d) : Rational(from.off - d);
    return edge_point(from.base, from.dir, off);
  }
  // exit anchor of `from` on the geodesic
  Word va;
  Rational ta;
  if (from.is_vertex()) {
    va = from.base;
    ta = 0;
  } else {
    Word lo = from.base, hi = from.child();
    // the geodesic leaves via exactly one endpoint of from's edge
    if (from.off + pdist(vertex_point(lo), to) == total) {
      va = lo;
      ta = from.off;
    } else {
      va = hi;
      ta = Rational(1) - from.off;
    }
    if (d < ta) {
      bool toward_child = (va == hi);
      Rational off = toward_child ? Rational(from.off + d) : Rational(from.off - d);
      return edge_point(from.base, from.dir, off);
    }
  }
  Rational rem = d - ta;
  // entry anchor of `to`
  Word vb;
  Rational tb;
  if (to.is_vertex()) {
    vb = to.base;
    tb = 0;
  } else if (ta + dist(va, to.base) + to.off == total) {
    vb = to.base;
    tb = to.off;
  } else {
    vb = to.child();
    tb = Rational(1) - to.off;
  }
  auto chain = path(va, vb);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (rem == 0) return vertex_point(chain[i]);
    if (rem < 1) {
      const Word &x = chain[i], &y = chain[i + 1];
      if (y.size() > x.size()) return edge_point(x, y.back(), rem);
      return edge_point(y, x.back(), Rational(1) - rem);
    }
    rem -= 1;
  }
  if (rem == 0) return vertex_point(vb);
  // walk into to's edge from vb
  if (vb == to.base) return edge_point(to.base, to.dir, rem);
  return edge_point(to.base, to.dir, Rational(1) - rem);
}

inline Point p_median(const Point& x, const Point& y, const Point& z) {
  Rational dm = (pdist(x, y) + pdist(x, z) - pdist(y, z)) / 2;
  return p_toward(x, y, dm);
}

// Distance from the identity vertex.
inline Rational p_norm(const Point& p) {
  if (p.is_vertex()) return Rational(static_cast<long>(p.base.size()));
  return Rational(static_cast<long>(p.base.size())) + p.off;
}

// ---- maps -------------------------------------------------------------------

struct Map {
  enum class Kind { LeftMul, Theta, Phi, PhiInv };
  Kind kind = Kind::Theta;
  Word w;  // LeftMul only
  std::string name;

  Word operator()(const Word& x) const {
    switch (kind) {
      case Kind::LeftMul: return concat(w, x);
      case Kind::Theta: return theta(x);
      case Kind::Phi: return phi(x);
      case Kind::PhiInv: return phi_inv(x);
    }
    return x;
  }

  Map inverted() const {
    switch (kind) {
      case Kind::LeftMul: return Map{Kind::LeftMul, inverse(w), name + "^-1"};
      case Kind::Theta: return *this;
      case Kind::Phi: return Map{Kind::PhiInv, "", "phi^-1"};
      case Kind::PhiInv: return Map{Kind::Phi, "", "phi"};
    }
    return *this;
  }
};

inline Map leftmul(const Word& w) { return Map{Map::Kind::LeftMul, w, "leftmul:" + show(w)}; }
inline Map theta_map() { return Map{Map::Kind::Theta, "", "theta"}; }
inline Map phi_map() { return Map{Map::Kind::Phi, "", "phi"}; }
inline Map phi_inv_map() { return Map{Map::Kind::PhiInv, "", "phi^-1"}; }

// Generating set of the lab subgroup, inverses included:
// a^2, a^-2, b^2, b^-2, phi, phi^-1.
inline const std::vector<Map>& lab_generators() {
  static const std::vector<Map> gens = {leftmul("aa"), leftmul("AA"), leftmul("bb"),
                                        leftmul("BB"), phi_map(),    phi_inv_map()};
  return gens;
}

inline Point apply(const Map& m, const Point& p) {
  if (p.is_vertex()) return vertex_point(m(p.base));
  Word m0 = m(p.base);
  Word m1 = m(p.child());
  if (dist(m0, m1) != 1)
    throw StructuralError("map does not send the edge to an edge: " + m.name);
  if (m1.size() > m0.size()) return edge_point(m0, m1.back(), p.off);
  return edge_point(m1, m0.back(), Rational(1) - p.off);
}

// Applies the group word gens[seq[0]] * gens[seq[1]] * ... (rightmost factor
// acts first).
inline Word apply_seq(const std::vector<Map>& gens, const std::vector<int>& seq, Word x) {
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) x = gens[*it](x);
  return x;
}

inline Point apply_seq(const std::vector<Map>& gens, const std::vector<int>& seq, Point p) {
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) p = apply(gens[*it], p);
  return p;
}

// ---- lab reports -------------------------------------------------------------

// Checks that a^2 and b^2 factor through phi and left multiplication by a,
// and that phi flips word-length parity, on every reduced word up to `bound`.
// The identities, with the rightmost factor acting first and the conjugating
// a an isometry of the tree outside the subgroup:
//   a^2 = a phi a^-1 phi      b^2 = phi a phi a^-1
struct IdentityCheck {
  bool a2_ok = true, b2_ok = true, parity_ok = true;
  Word counterexample;
  int bound = 0;
};

inline IdentityCheck verify_generator_identities(int bound) {
  IdentityCheck rep;
  rep.bound = bound;
  const Map La = leftmul("a"), LA = leftmul("A");
  for (const Word& w : all_words(bound)) {
    Word lhs_a = concat("aa", w);
    Word rhs_a = La(phi(LA(phi(w))));
    if (lhs_a != rhs_a) {
      rep.a2_ok = false;
      rep.counterexample = w;
    }
    Word lhs_b = concat("bb", w);
    Word rhs_b = phi(La(phi(LA(w))));
    if (lhs_b != rhs_b) {
      rep.b2_ok = false;
      rep.counterexample = w;
    }
    if ((w.size() + phi(w).size()) % 2 == 0) {
      rep.parity_ok = false;
      rep.counterexample = w;
    }
  }
  return rep;
}

struct OrbitClosure {
  std::vector<Point> orbit;    // clipped to the ball, sorted
  std::vector<Point> closure;  // median closure of the clipped orbit
  std::vector<Word> missing_vertices;
  bool closure_has_all_ball_vertices = false;
  int orbit_kinds = 0;  // vertex / edge-point kinds present among closure points
  bool one_orbit_point_per_edge = true;
  int word_bound = 0, radius = 0;
  std::size_t orbit_total = 0;  // distinct points visited before clipping
};

// Orbit of v under generator words of length <= word_bound, clipped to the
// radius ball, plus its median closure inside the ball.
inline OrbitClosure orbit_and_closure(const Point& v, int word_bound, int radius) {
  OrbitClosure rep;
  rep.word_bound = word_bound;
  rep.radius = radius;
  const auto& gens = lab_generators();

  std::unordered_set<std::string> seen{v.key()};
  std::vector<Point> frontier{v}, all{v};
  for (int depth = 0; depth < word_bound; ++depth) {
    std::vector<Point> next;
    for (const Point& p : frontier)
      for (const Map& g : gens) {
        Point q = apply(g, p);
        if (seen.insert(q.key()).second) {
          next.push_back(q);
          all.push_back(q);
        }
      }
    frontier = std::move(next);
  }
  rep.orbit_total = all.size();

  const Rational rad(radius);
  for (const Point& p : all)
    if (p_norm(p) <= rad) rep.orbit.push_back(p);
  std::sort(rep.orbit.begin(), rep.orbit.end());

  // Median closure: the clipped orbit plus every branch point of its
  // spanning subtree; branch points all arise as medians with a fixed apex.
  std::unordered_set<std::string> closure_keys;
  for (const Point& p : rep.orbit) closure_keys.insert(p.key());
  rep.closure = rep.orbit;
  if (rep.orbit.size() >= 2) {
    const Point& apex = rep.orbit.front();
    for (std::size_t i = 0; i < rep.orbit.size(); ++i)
      for (std::size_t j = i + 1; j < rep.orbit.size(); ++j) {
        Point m = p_median(apex, rep.orbit[i], rep.orbit[j]);
        if (closure_keys.insert(m.key()).second) rep.closure.push_back(m);
      }
  }
  std::sort(rep.closure.begin(), rep.closure.end());

  bool has_vertex = false, has_edge = false;
  for (const Point& p : rep.closure) (p.is_vertex() ? has_vertex : has_edge) = true;
  rep.orbit_kinds = static_cast<int>(has_vertex) + static_cast<int>(has_edge);

  std::unordered_map<std::string, int> per_edge;
  for (const Point& p : rep.orbit)
    if (!p.is_vertex() && ++per_edge[p.base + p.dir] > 1) rep.one_orbit_point_per_edge = false;

  rep.closure_has_all_ball_vertices = true;
  for (const Word& w : all_words(radius))
    if (!closure_keys.count(vertex_point(w).key())) {
      rep.closure_has_all_ball_vertices = false;
      rep.missing_vertices.push_back(w);
    }
  return rep;
}

// ---- spacing of end-stabilizer images on the axis of a^2 ---------------------
//
// Enumerates generator words up to the bound, keeps those certified (on the
// window) to map the deep a-ray into itself preserving direction, and
// collects where they send the identity vertex along that axis.

struct AxisSpacingReport {
  std::vector<long> positions;  // exponents k with some certified g(1) = a^k
  bool all_even = true;
  std::optional<long> min_positive;  // least |k| over nonzero k
  int certified_count = 0;
  bool inconclusive = false;  // nothing certified at this bound
  int word_bound = 0, window = 0;
};

inline std::optional<long> a_power_of(const Word& w) {
  if (w.empty()) return 0L;
  char c0 = w[0];
  if (c0 != 'a' && c0 != 'A') return std::nullopt;
  for (char c : w)
    if (c != c0) return std::nullopt;
  long n = static_cast<long>(w.size());
  return c0 == 'a' ? n : -n;
}

inline AxisSpacingReport axis_orbit_spacing(int word_bound, int window_m) {
  AxisSpacingReport rep;
  rep.word_bound = word_bound;
  rep.window = window_m;
  const auto& gens = lab_generators();
  const Word deep(static_cast<std::size_t>(window_m), 'a');
  const Word deeper(static_cast<std::size_t>(window_m + 1), 'a');

  std::unordered_set<long> positions;
  // depth-first enumeration of generator words, evaluated incrementally on
  // the probe triple (deep, deeper, identity)
  struct Frame {
    Word d, d1, id;
  };
  std::vector<int> seq;
  std::vector<Frame> stack{{deep, deeper, ""}};
  auto visit = [&](const Frame& f) {
    auto jd = a_power_of(f.d);
    auto jd1 = a_power_of(f.d1);
    if (jd && jd1 && *jd1 == *jd + 1) {
      ++rep.certified_count;
      if (auto k = a_power_of(f.id)) positions.insert(*k);
    }
  };
  visit(stack.back());
  // iterative DFS over sequences of generators
  std::vector<std::size_t> child_index{0};
  while (!stack.empty()) {
    if (static_cast<int>(seq.size()) == word_bound ||
        child_index.back() >= gens.size()) {
      stack.pop_back();
      child_index.pop_back();
      if (!seq.empty()) seq.pop_back();
      continue;
    }
    const std::size_t g = child_index.back()++;
    const Frame& top = stack.back();
    Frame next{gens[g](top.d), gens[g](top.d1), gens[g](top.id)};
    visit(next);
    stack.push_back(std::move(next));
    child_index.push_back(0);
    seq.push_back(static_cast<int>(g));
  }

  rep.positions.assign(positions.begin(), positions.end());
  std::sort(rep.positions.begin(), rep.positions.end());
  rep.inconclusive = rep.positions.empty();
  for (long k : rep.positions) {
    if (((k % 2) + 2) % 2 != 0) rep.all_even = false;
    if (k != 0) {
      long a = k < 0 ? -k : k;
      if (!rep.min_positive || a < *rep.min_positive) rep.min_positive = a;
    }
  }
  return rep;
}

}  // namespace treelab::f2
