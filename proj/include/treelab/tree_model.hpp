#pragma once

#include "treelab/errors.hpp"
#include "treelab/pretree.hpp"
#include "treelab/rational.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace treelab {

// Finite simplicial tree with positive rational edge lengths.
class MetricTree {
 public:
  struct Edge {
    PointId a, b;
    Rational length;
  };

  MetricTree(std::vector<PointId> vertices, std::vector<Edge> edges)
      : verts_(std::move(vertices)), edges_(std::move(edges)) {
    if (verts_.empty()) throw StructuralError("tree needs at least one vertex");
    {
      auto sorted = verts_;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw StructuralError("duplicate vertex id");
    }
    for (std::size_t i = 0; i < verts_.size(); ++i) idx_[verts_[i]] = static_cast<int>(i);
    adj_.resize(verts_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto& ed = edges_[e];
      if (ed.length <= 0) throw StructuralError("edge length must be positive");
      int ia = vindex(ed.a), ib = vindex(ed.b);
      if (ia == ib) throw StructuralError("self-loop edge");
      adj_[ia].emplace_back(ed.b, static_cast<int>(e));
      adj_[ib].emplace_back(ed.a, static_cast<int>(e));
    }
    if (edges_.size() + 1 != verts_.size())
      throw StructuralError("not a tree: |E| != |V| - 1");
    // connectivity
    std::vector<bool> seen(verts_.size(), false);
    std::deque<int> work{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (auto [nb, e] : adj_[v]) {
        int in = vindex(nb);
        if (!seen[in]) {
          seen[in] = true;
          ++reached;
          work.push_back(in);
        }
      }
    }
    if (reached != verts_.size()) throw StructuralError("tree is not connected");
  }

  const std::vector<PointId>& vertices() const { return verts_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_vertex(PointId v) const { return idx_.count(v) != 0; }

  int vindex(PointId v) const {
    auto it = idx_.find(v);
    if (it == idx_.end()) throw StructuralError("unknown vertex id " + std::to_string(v));
    return it->second;
  }

  const std::vector<std::pair<PointId, int>>& adjacency(PointId v) const {
    return adj_[vindex(v)];
  }

  // Index into edges(), or -1.
  int edge_index(PointId a, PointId b) const {
    for (auto [nb, e] : adjacency(a))
      if (nb == b) return e;
    return -1;
  }

 private:
  std::vector<PointId> verts_;
  std::vector<Edge> edges_;
  std::unordered_map<PointId, int> idx_;
  std::vector<std::vector<std::pair<PointId, int>>> adj_;
};

// A vertex or a strictly interior point of an edge. Canonical form: the edge
// is keyed by its smaller endpoint id and the offset is measured from it, so
// equality is structural. A vertex is never encoded as offset 0 or length.
class TreePoint {
 public:
  static TreePoint vertex(PointId v) {
    TreePoint p;
    p.u_ = v;
    return p;
  }

  static TreePoint on_edge(const MetricTree& t, PointId a, PointId b,
                           const Rational& offset_from_a) {
    int e = t.edge_index(a, b);
    if (e < 0)
      throw StructuralError("no edge " + std::to_string(a) + "-" + std::to_string(b));
    const Rational& len = t.edges()[e].length;
    if (offset_from_a < 0 || offset_from_a > len)
      throw StructuralError("edge offset out of range");
    if (offset_from_a == 0) return vertex(a);
    if (offset_from_a == len) return vertex(b);
    TreePoint p;
    if (a < b) {
      p.u_ = a;
      p.v_ = b;
      p.off_ = offset_from_a;
    } else {
      p.u_ = b;
      p.v_ = a;
      p.off_ = len - offset_from_a;
    }
    return p;
  }

  bool is_vertex() const { return v_ < 0; }
  PointId v() const { return u_; }        // vertex id; only when is_vertex()
  PointId ea() const { return u_; }       // smaller edge endpoint
  PointId eb() const { return v_; }       // larger edge endpoint
  const Rational& offset() const { return off_; }  // from ea()

  friend bool operator==(const TreePoint& a, const TreePoint& b) {
    return a.u_ == b.u_ && a.v_ == b.v_ && a.off_ == b.off_;
  }
  friend bool operator!=(const TreePoint& a, const TreePoint& b) { return !(a == b); }
  friend bool operator<(const TreePoint& a, const TreePoint& b) {
    if (a.u_ != b.u_) return a.u_ < b.u_;
    if (a.v_ != b.v_) return a.v_ < b.v_;
    return a.off_ < b.off_;
  }

  std::string str() const {
    if (is_vertex()) return "@" + std::to_string(u_);
    return "@" + std::to_string(u_) + "-" + std::to_string(v_) + ":" + fraction_str(off_);
  }

 private:
  PointId u_ = -1;
  PointId v_ = -1;
  Rational off_{0};
};

// Distances from src to every vertex, by edge lengths.
inline std::vector<Rational> vertex_distances(const MetricTree& t, PointId src) {
  std::vector<Rational> dist(t.vertices().size(), Rational(-1));
  std::deque<PointId> work{src};
  dist[t.vindex(src)] = 0;
  while (!work.empty()) {
    PointId v = work.front();
    work.pop_front();
    for (auto [nb, e] : t.adjacency(v)) {
      int ib = t.vindex(nb);
      if (dist[ib] < 0) {
        dist[ib] = dist[t.vindex(v)] + t.edges()[e].length;
        work.push_back(nb);
      }
    }
  }
  return dist;
}

namespace detail {
// Anchor vertices of a point with their boundary distances.
inline std::vector<std::pair<PointId, Rational>> anchors(const MetricTree& t,
                                                         const TreePoint& p) {
  if (p.is_vertex()) return {{p.v(), Rational(0)}};
  int e = t.edge_index(p.ea(), p.eb());
  const Rational& len = t.edges()[e].length;
  return {{p.ea(), p.offset()}, {p.eb(), len - p.offset()}};
}

inline bool same_edge(const TreePoint& p, const TreePoint& q) {
  return !p.is_vertex() && !q.is_vertex() && p.ea() == q.ea() && p.eb() == q.eb();
}
}  // namespace detail

inline Rational distance(const MetricTree& t, const TreePoint& p, const TreePoint& q) {
  if (p == q) return 0;
  if (detail::same_edge(p, q)) {
    Rational d = p.offset() - q.offset();
    return d < 0 ? -d : d;
  }
  auto pa = detail::anchors(t, p);
  auto qa = detail::anchors(t, q);
  std::optional<Rational> best;
  for (const auto& [va, da] : pa) {
    auto dv = vertex_distances(t, va);
    for (const auto& [vb, db] : qa) {
      Rational cand = da + dv[t.vindex(vb)] + db;
      if (!best || cand < *best) best = cand;
    }
  }
  return *best;
}

// Vertex chain from a to b, inclusive.
inline std::vector<PointId> vertex_path(const MetricTree& t, PointId a, PointId b) {
  std::vector<int> parent(t.vertices().size(), -2);
  std::deque<PointId> work{a};
  parent[t.vindex(a)] = -1;
  while (!work.empty()) {
    PointId v = work.front();
    work.pop_front();
    if (v == b) break;
    for (auto [nb, e] : t.adjacency(v)) {
      int ib = t.vindex(nb);
      if (parent[ib] == -2) {
        parent[ib] = t.vindex(v);
        work.push_back(nb);
      }
    }
  }
  std::vector<PointId> rev;
  int cur = t.vindex(b);
  while (cur != -1) {
    rev.push_back(t.vertices()[cur]);
    cur = parent[cur];
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

struct Geodesic {
  std::vector<TreePoint> waypoints;  // p, intermediate vertices, q
  Rational length;
};

inline Geodesic geodesic(const MetricTree& t, const TreePoint& p, const TreePoint& q) {
  Geodesic g;
  if (p == q) {
    g.waypoints = {p};
    g.length = 0;
    return g;
  }
  if (detail::same_edge(p, q)) {
    g.waypoints = {p, q};
    Rational d = p.offset() - q.offset();
    g.length = d < 0 ? -d : d;
    return g;
  }
  // pick the anchor pair realizing the distance
  auto pa = detail::anchors(t, p);
  auto qa = detail::anchors(t, q);
  std::optional<Rational> best;
  PointId ba = 0, bb = 0;
  Rational da0, db0;
  for (const auto& [va, da] : pa) {
    auto dv = vertex_distances(t, va);
    for (const auto& [vb, db] : qa) {
      Rational cand = da + dv[t.vindex(vb)] + db;
      if (!best || cand < *best) {
        best = cand;
        ba = va;
        bb = vb;
        da0 = da;
        db0 = db;
      }
    }
  }
  g.length = *best;
  g.waypoints.push_back(p);
  for (PointId v : vertex_path(t, ba, bb)) {
    TreePoint tv = TreePoint::vertex(v);
    if (g.waypoints.back() != tv) g.waypoints.push_back(tv);
  }
  if (g.waypoints.back() != q) g.waypoints.push_back(q);
  return g;
}

inline bool on_segment(const MetricTree& t, const TreePoint& x, const TreePoint& p,
                       const TreePoint& q) {
  return distance(t, p, x) + distance(t, x, q) == distance(t, p, q);
}

inline bool strictly_between_points(const MetricTree& t, const TreePoint& x,
                                    const TreePoint& p, const TreePoint& q) {
  return x != p && x != q && on_segment(t, x, p, q);
}

// The point at the given distance from `from` along the geodesic to `to`.
inline TreePoint point_toward(const MetricTree& t, const TreePoint& from,
                              const TreePoint& to, const Rational& dist) {
  if (dist < 0) throw PreconditionError("point_toward: negative distance");
  Geodesic g = geodesic(t, from, to);
  if (dist > g.length) throw PreconditionError("point_toward: distance beyond target");
  if (dist == 0) return from;
  if (dist == g.length) return to;
  Rational walked = 0;
  for (std::size_t i = 0; i + 1 < g.waypoints.size(); ++i) {
    const TreePoint& a = g.waypoints[i];
    const TreePoint& b = g.waypoints[i + 1];
    Rational leg = distance(t, a, b);
    if (walked + leg < dist) {
      walked += leg;
      continue;
    }
    Rational rem = dist - walked;
    // land inside leg a..b (possibly at b)
    if (rem == leg) return b;
    // identify the edge this leg runs along
    PointId ea, eb;
    Rational a_off;  // offset of a from ea along that edge
    if (a.is_vertex() && b.is_vertex()) {
      ea = a.v();
      eb = b.v();
      a_off = 0;
    } else if (a.is_vertex()) {
      // b interior: leg runs from vertex a into b's edge
      ea = a.v();
      eb = (b.ea() == a.v()) ? b.eb() : b.ea();
      a_off = 0;
    } else {
      // a interior; b is a vertex or a same-edge interior point
      bool increasing = b.is_vertex() ? (b.v() == a.eb()) : (b.offset() > a.offset());
      Rational off = a.offset();
      return TreePoint::on_edge(t, a.ea(), a.eb(), increasing ? Rational(off + rem) : Rational(off - rem));
    }
    return TreePoint::on_edge(t, ea, eb, a_off + rem);
  }
  return to;  // unreachable
}

// Median by the distance formula: on [x,y] at (d(x,y)+d(x,z)-d(y,z))/2 from x.
inline TreePoint median_point(const MetricTree& t, const TreePoint& x, const TreePoint& y,
                              const TreePoint& z) {
  Rational dm = (distance(t, x, y) + distance(t, x, z) - distance(t, y, z)) / 2;
  return point_toward(t, x, y, dm);
}

// Fast exact distance queries on one tree: root depths plus binary-lifting
// ancestor tables, so a query costs O(log V) instead of a search.
class VertexDistances {
 public:
  explicit VertexDistances(const MetricTree& t) : tree_(&t) {
    const std::size_t n = t.vertices().size();
    level_.assign(n, 0);
    depth_.assign(n, Rational(0));
    int levels = 1;
    while ((std::size_t(1) << levels) < n) ++levels;
    up_.assign(n, std::vector<int>(static_cast<std::size_t>(levels), 0));
    std::deque<int> work{0};
    std::vector<bool> seen(n, false);
    seen[0] = true;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (auto [nb, e] : t.adjacency(t.vertices()[static_cast<std::size_t>(v)])) {
        int inb = t.vindex(nb);
        if (seen[static_cast<std::size_t>(inb)]) continue;
        seen[static_cast<std::size_t>(inb)] = true;
        level_[static_cast<std::size_t>(inb)] = level_[static_cast<std::size_t>(v)] + 1;
        depth_[static_cast<std::size_t>(inb)] =
            depth_[static_cast<std::size_t>(v)] + t.edges()[static_cast<std::size_t>(e)].length;
        up_[static_cast<std::size_t>(inb)][0] = v;
        work.push_back(inb);
      }
    }
    for (std::size_t k = 1; k < up_[0].size(); ++k)
      for (std::size_t v = 0; v < n; ++v)
        up_[v][k] = up_[static_cast<std::size_t>(up_[v][k - 1])][k - 1];
  }

  Rational d(PointId a, PointId b) const {
    int ia = tree_->vindex(a), ib = tree_->vindex(b);
    int l = lca(ia, ib);
    return depth_[static_cast<std::size_t>(ia)] + depth_[static_cast<std::size_t>(ib)] -
           2 * depth_[static_cast<std::size_t>(l)];
  }

  Rational point_dist(const TreePoint& p, const TreePoint& q) const {
    if (p == q) return 0;
    if (detail::same_edge(p, q)) {
      Rational diff = p.offset() - q.offset();
      return diff < 0 ? -diff : diff;
    }
    auto pa = detail::anchors(*tree_, p);
    auto qa = detail::anchors(*tree_, q);
    std::optional<Rational> best;
    for (const auto& [va, da] : pa)
      for (const auto& [vb, db] : qa) {
        Rational cand = da + d(va, vb) + db;
        if (!best || cand < *best) best = cand;
      }
    return *best;
  }

  bool on_segment(const TreePoint& x, const TreePoint& p, const TreePoint& q) const {
    return point_dist(p, x) + point_dist(x, q) == point_dist(p, q);
  }

 private:
  int lca(int a, int b) const {
    if (level_[static_cast<std::size_t>(a)] < level_[static_cast<std::size_t>(b)])
      std::swap(a, b);
    int diff = level_[static_cast<std::size_t>(a)] - level_[static_cast<std::size_t>(b)];
    for (std::size_t k = 0; k < up_[0].size(); ++k)
      if (diff & (1 << k)) a = up_[static_cast<std::size_t>(a)][k];
    if (a == b) return a;
    for (std::size_t k = up_[0].size(); k-- > 0;)
      if (up_[static_cast<std::size_t>(a)][k] != up_[static_cast<std::size_t>(b)][k]) {
        a = up_[static_cast<std::size_t>(a)][k];
        b = up_[static_cast<std::size_t>(b)][k];
      }
    return a == b ? a : up_[static_cast<std::size_t>(a)][0];
  }

  const MetricTree* tree_;
  std::vector<int> level_;
  std::vector<Rational> depth_;
  std::vector<std::vector<int>> up_;
};

inline std::vector<std::vector<Rational>> distance_matrix(
    const MetricTree& t, const std::vector<TreePoint>& pts) {
  // one BFS per distinct anchor vertex
  std::unordered_map<PointId, std::vector<Rational>> by_anchor;
  for (const auto& p : pts)
    for (const auto& [v, d] : detail::anchors(t, p))
      if (!by_anchor.count(v)) by_anchor[v] = vertex_distances(t, v);
  std::vector<std::vector<Rational>> m(pts.size(), std::vector<Rational>(pts.size(), 0));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      Rational d;
      if (detail::same_edge(pts[i], pts[j])) {
        d = pts[i].offset() - pts[j].offset();
        if (d < 0) d = -d;
      } else {
        std::optional<Rational> best;
        for (const auto& [va, da] : detail::anchors(t, pts[i]))
          for (const auto& [vb, db] : detail::anchors(t, pts[j])) {
            Rational cand = da + by_anchor[va][t.vindex(vb)] + db;
            if (!best || cand < *best) best = cand;
          }
        d = *best;
      }
      m[i][j] = m[j][i] = d;
    }
  return m;
}

// Betweenness sampled at finitely many points of the tree: (x; y, z) holds
// exactly when x is strictly interior to the geodesic y..z.
struct SampledPretree {
  FinitePretree pretree;
  std::vector<TreePoint> sample;  // PointId i corresponds to sample[i]
};

inline SampledPretree as_pretree(const MetricTree& t, std::vector<TreePoint> sample) {
  std::sort(sample.begin(), sample.end());
  sample.erase(std::unique(sample.begin(), sample.end()), sample.end());
  auto dm = distance_matrix(t, sample);
  const int k = static_cast<int>(sample.size());
  PointSet pts;
  for (int i = 0; i < k; ++i) pts.push_back(i);
  std::vector<BetweenTriple> triples;
  for (int y = 0; y < k; ++y)
    for (int x = 0; x < k; ++x)
      for (int z = 0; z < k; ++z) {
        if (y == x || y == z || x == z) continue;
        if (dm[x][y] + dm[y][z] == dm[x][z]) triples.push_back({y, x, z});
      }
  return SampledPretree{FinitePretree(pts, triples), std::move(sample)};
}

// Unit-length path with vertex ids lo..hi; handy window for line models.
inline MetricTree path_tree(int lo, int hi) {
  if (lo > hi) throw PreconditionError("path_tree: empty range");
  std::vector<PointId> vs;
  std::vector<MetricTree::Edge> es;
  for (int v = lo; v <= hi; ++v) {
    vs.push_back(v);
    if (v > lo) es.push_back({v - 1, v, Rational(1)});
  }
  return MetricTree(std::move(vs), std::move(es));
}

// ---- text format ----------------------------------------------------------
//
//   tree
//   v <id>
//   e <id1> <id2> <num>/<den>
//
// TreePoint literal: @<id> or @<id1>-<id2>:<num>/<den> (offset from id1).

inline MetricTree parse_tree(std::istream& in) {
  std::vector<PointId> vs;
  std::vector<MetricTree::Edge> es;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (!header) {
      if (tok != "tree") throw StructuralError("expected 'tree' header");
      header = true;
      continue;
    }
    if (tok == "v") {
      PointId v;
      if (!(ls >> v)) throw StructuralError("bad v-line: " + line);
      vs.push_back(v);
    } else if (tok == "e") {
      PointId a, b;
      std::string len;
      if (!(ls >> a >> b >> len)) throw StructuralError("bad e-line: " + line);
      Rational length;
      try {
        length = parse_rational(len);
      } catch (const std::invalid_argument& e) {
        throw StructuralError(std::string("bad edge length: ") + e.what());
      }
      es.push_back({a, b, length});
    } else {
      throw StructuralError("unknown tree line: " + line);
    }
  }
  if (!header) throw StructuralError("missing tree header");
  return MetricTree(std::move(vs), std::move(es));
}

inline std::string format_tree(const MetricTree& t) {
  std::ostringstream os;
  os << "tree\n";
  auto vs = t.vertices();
  std::sort(vs.begin(), vs.end());
  for (PointId v : vs) os << "v " << v << "\n";
  std::vector<std::tuple<PointId, PointId, Rational>> es;
  for (const auto& e : t.edges())
    es.emplace_back(std::min(e.a, e.b), std::max(e.a, e.b), e.length);
  std::sort(es.begin(), es.end());
  for (const auto& [a, b, len] : es)
    os << "e " << a << " " << b << " " << fraction_str(len) << "\n";
  return os.str();
}

inline TreePoint parse_tree_point(std::string_view s, const MetricTree& t) {
  if (s.empty() || s[0] != '@') throw StructuralError("tree point must start with '@'");
  s.remove_prefix(1);
  auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    PointId v;
    try {
      v = std::stoi(std::string(s));
    } catch (...) {
      throw StructuralError("bad tree point vertex id");
    }
    t.vindex(v);
    return TreePoint::vertex(v);
  }
  auto colon = s.find(':', dash);
  if (colon == std::string_view::npos)
    throw StructuralError("edge point needs ':<num>/<den>'");
  PointId a, b;
  Rational off;
  try {
    a = std::stoi(std::string(s.substr(0, dash)));
    b = std::stoi(std::string(s.substr(dash + 1, colon - dash - 1)));
    off = parse_rational(s.substr(colon + 1));
  } catch (const StructuralError&) {
    throw;
  } catch (...) {
    throw StructuralError("bad edge point literal");
  }
  return TreePoint::on_edge(t, a, b, off);
}

}  // namespace treelab
