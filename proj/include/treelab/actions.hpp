#pragma once

#include "treelab/automorphism.hpp"
#include "treelab/errors.hpp"
#include "treelab/pretree.hpp"
#include "treelab/rational.hpp"
#include "treelab/tree_model.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace treelab {

// Elliptic: nonempty fixed set (fixed vertices plus midpoints of inverted
// edges). Loxodromic: invariant line, order preserved, constant displacement.
struct Classification {
  enum class Kind { Elliptic, Loxodromic };
  Kind kind = Kind::Elliptic;
  std::vector<TreePoint> fixed_points;  // elliptic
  std::vector<PointId> axis;            // loxodromic, ordered along the line
  Rational translation_length{0};
};

namespace detail {
inline std::vector<TreePoint> fixed_point_set(const PartialTreeMap& g) {
  const MetricTree& t = g.tree();
  std::vector<TreePoint> out;
  for (PointId v : t.vertices())
    if (g.apply(v) == std::optional<PointId>(v)) out.push_back(TreePoint::vertex(v));
  for (const auto& e : t.edges()) {
    auto ia = g.apply(e.a), ib = g.apply(e.b);
    if (ia && ib && *ia == e.b && *ib == e.a)
      out.push_back(TreePoint::on_edge(t, e.a, e.b, e.length / 2));
  }
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace detail

// Min-displacement classification on the (window of the) tree. Elliptic when
// displacement 0 is attained at a vertex or an inverted-edge midpoint; else
// loxodromic with the min-displacement vertex set as axis, checked to be a
// g-invariant line on which the order is preserved.
inline Classification classify(const PartialTreeMap& g) {
  if (!g.domain_connected())
    throw StructuralError("classify: domain of the map is not connected");
  const MetricTree& t = g.tree();

  Classification c;
  c.fixed_points = detail::fixed_point_set(g);
  if (!c.fixed_points.empty()) {
    c.kind = Classification::Kind::Elliptic;
    return c;
  }

  const VertexDistances dist(t);
  std::optional<Rational> min_disp;
  std::vector<std::pair<PointId, Rational>> disp;
  for (PointId v : t.vertices()) {
    auto iv = g.apply(v);
    if (!iv) continue;
    Rational d = dist.d(v, *iv);
    disp.emplace_back(v, d);
    if (!min_disp || d < *min_disp) min_disp = d;
  }
  if (!min_disp)
    throw StructuralError("classify: map defined nowhere");
  if (g.total_bijection())
    throw StructuralError(
        "classify: total automorphism of a finite tree with empty fixed set");

  c.kind = Classification::Kind::Loxodromic;
  c.translation_length = *min_disp;
  for (const auto& [v, d] : disp)
    if (d == *min_disp) c.axis.push_back(v);
  if (c.axis.size() < 2)
    throw StructuralError("classify: window too small for a loxodromic axis");

  // order the candidate axis along the line: endpoint = farthest from axis[0]
  PointId end = c.axis.front();
  Rational dmax(-1);
  for (PointId v : c.axis) {
    Rational d = dist.d(c.axis.front(), v);
    if (d > dmax) {
      dmax = d;
      end = v;
    }
  }
  const PointId e0 = end;
  std::sort(c.axis.begin(), c.axis.end(),
            [&](PointId x, PointId y) { return dist.d(e0, x) < dist.d(e0, y); });
  // the set must be a line: consecutive distances add up along it
  for (std::size_t i = 0; i + 1 < c.axis.size(); ++i) {
    if (dist.d(e0, c.axis[i]) + dist.d(c.axis[i], c.axis[i + 1]) !=
        dist.d(e0, c.axis[i + 1]))
      throw StructuralError("classify: min-displacement set is not a line");
  }
  // Signed coordinate along the line; images may land beyond either end of
  // the windowed axis segment.
  const PointId e1 = c.axis.back();
  const Rational span = dist.d(e0, e1);
  auto coord = [&](PointId v) -> Rational {
    Rational d0 = dist.d(e0, v);
    if (dist.d(e1, v) == d0 + span) return -d0;
    return d0;
  };
  // g translates along the axis: one constant signed shift, |shift| = length
  std::optional<Rational> shift;
  for (PointId v : c.axis) {
    auto iv = g.apply(v);
    if (!iv) continue;
    Rational delta = coord(*iv) - coord(v);
    if (!shift)
      shift = delta;
    else if (*shift != delta)
      throw StructuralError("classify: axis order not preserved");
  }
  if (!shift || (*shift != c.translation_length && -*shift != c.translation_length))
    throw StructuralError("classify: axis shift does not match the translation length");
  return c;
}

// Vertices equal to the median of themselves and their two images; on the
// window this must coincide with the min-displacement axis.
inline std::vector<PointId> axis_by_median_criterion(const PartialTreeMap& g) {
  const MetricTree& t = g.tree();
  const VertexDistances dist(t);
  const PartialTreeMap ginv = g.inverse();
  std::vector<PointId> out;
  for (PointId v : t.vertices()) {
    auto fwd = g.apply(v);
    auto bwd = ginv.apply(v);
    if (!fwd || !bwd) continue;
    // x = m(x, g^-1(x), g(x)) exactly when x lies between its two images
    if (dist.d(*bwd, v) + dist.d(v, *fwd) == dist.d(*bwd, *fwd)) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// The intersection of [p, g(p)] with the axis, returned by its endpoints
// (q, g(q)); verified against the axis pointwise.
struct SegmentOnAxis {
  TreePoint q, gq;
};

inline SegmentOnAxis segment_meets_axis(const PartialTreeMap& g, const TreePoint& p) {
  Classification c = classify(g);
  if (c.kind != Classification::Kind::Loxodromic)
    throw PreconditionError("segment_meets_axis: map is not loxodromic on the window");
  const MetricTree& t = g.tree();
  auto gp = g.apply(p);
  if (!gp) throw WindowExhausted("segment_meets_axis: image of p leaves the window");
  const TreePoint A = TreePoint::vertex(c.axis.front());
  const TreePoint B = TreePoint::vertex(c.axis.back());
  TreePoint q = median_point(t, p, A, B);
  auto gq = g.apply(q);
  if (!gq) throw WindowExhausted("segment_meets_axis: image of the projection leaves the window");
  // contract checks: q, g(q) on [p, g(p)], on the axis, and the intersection
  // is exactly [q, g(q)] at vertex resolution
  if (!on_segment(t, q, p, *gp) || !on_segment(t, *gq, p, *gp) ||
      !on_segment(t, q, A, B) || !on_segment(t, *gq, A, B))
    throw WindowExhausted("segment_meets_axis: window too small for the intersection");
  for (PointId v : c.axis) {
    TreePoint x = TreePoint::vertex(v);
    bool in_seg = on_segment(t, x, p, *gp);
    bool in_sub = on_segment(t, x, q, *gq);
    if (in_seg != in_sub)
      throw StructuralError("segment_meets_axis: intersection mismatch at vertex " +
                            std::to_string(v));
  }
  return SegmentOnAxis{q, *gq};
}

// Looks for a segment mapped properly into itself among the given segments.
struct NonNestingReport {
  struct Segment {
    TreePoint a, b;
  };
  std::vector<Segment> nested;        // witnesses g(I) strictly inside I
  std::vector<Segment> inconclusive;  // image leaves the window
  bool pass() const { return nested.empty(); }
};

inline NonNestingReport check_non_nesting(const PartialTreeMap& g,
                                          const std::vector<std::pair<TreePoint, TreePoint>>& segments) {
  const VertexDistances dist(g.tree());
  NonNestingReport rep;
  for (const auto& [a, b] : segments) {
    auto ia = g.apply(a), ib = g.apply(b);
    if (!ia || !ib) {
      rep.inconclusive.push_back({a, b});
      continue;
    }
    bool inside = dist.on_segment(*ia, a, b) && dist.on_segment(*ib, a, b);
    bool proper = !(*ia == a && *ib == b) && !(*ia == b && *ib == a);
    if (inside && proper) rep.nested.push_back({a, b});
  }
  return rep;
}

// Exact rational interval version for maps of the line.
struct AffineMap {
  Rational scale{1}, shift{0};  // x -> scale*x + shift, scale != 0

  Rational operator()(const Rational& x) const { return scale * x + shift; }

  AffineMap inverse() const { return AffineMap{1 / scale, -shift / scale}; }

  // this ∘ inner
  AffineMap after(const AffineMap& inner) const {
    return AffineMap{scale * inner.scale, scale * inner.shift + shift};
  }

  static AffineMap translation(const Rational& t) { return AffineMap{1, t}; }
};

struct LineNonNestingReport {
  std::vector<std::pair<Rational, Rational>> nested;
  bool pass() const { return nested.empty(); }
};

inline LineNonNestingReport check_non_nesting_line(
    const AffineMap& g, const std::vector<std::pair<Rational, Rational>>& segments) {
  LineNonNestingReport rep;
  for (auto [a, b] : segments) {
    if (b < a) std::swap(a, b);
    Rational ia = g(a), ib = g(b);
    if (ib < ia) std::swap(ia, ib);
    bool inside = a <= ia && ib <= b;
    bool proper = !(ia == a && ib == b);
    if (inside && proper) rep.nested.emplace_back(a, b);
  }
  return rep;
}

// Facts about the product of two elliptic maps: with disjoint fixed sets the
// product is loxodromic, its axis carries the bridge between the fixed sets
// and meets each fixed set in exactly one point; when the product stays
// elliptic the three fixed sets share a point.
struct EllipticProductReport {
  bool disjoint_fixed_sets = false;
  bool product_loxodromic = false;
  bool bridge_on_axis = false;
  int g_axis_points = 0, h_axis_points = 0;  // |T^g ∩ L_gh|, |T^h ∩ L_gh|
  TreePoint bridge_t, bridge_q;
  bool triple_intersection_nonempty = false;  // all-elliptic branch
  Rational translation_length{0};
};

inline EllipticProductReport elliptic_product(const PartialTreeMap& g,
                                              const PartialTreeMap& h) {
  const MetricTree& t = g.tree();
  Classification cg = classify(g), ch = classify(h);
  if (cg.kind != Classification::Kind::Elliptic || ch.kind != Classification::Kind::Elliptic)
    throw PreconditionError("elliptic_product: inputs must be elliptic");

  EllipticProductReport rep;
  std::vector<TreePoint> common;
  for (const auto& p : cg.fixed_points)
    for (const auto& q : ch.fixed_points)
      if (p == q) common.push_back(p);
  rep.disjoint_fixed_sets = common.empty();
  PartialTreeMap gh = g.after(h);

  if (!rep.disjoint_fixed_sets) {
    Classification cgh = classify(gh);
    if (cgh.kind == Classification::Kind::Elliptic)
      for (const auto& p : common)
        for (const auto& r : cgh.fixed_points)
          if (p == r) rep.triple_intersection_nonempty = true;
    return rep;
  }

  Classification cgh = classify(gh);
  rep.product_loxodromic = cgh.kind == Classification::Kind::Loxodromic;
  if (!rep.product_loxodromic) return rep;
  rep.translation_length = cgh.translation_length;

  // bridge between the fixed sets: the unique nearest pair
  std::optional<Rational> best;
  for (const auto& p : cg.fixed_points)
    for (const auto& q : ch.fixed_points) {
      Rational d = distance(t, p, q);
      if (!best || d < *best) {
        best = d;
        rep.bridge_t = p;
        rep.bridge_q = q;
      }
    }

  const TreePoint A = TreePoint::vertex(cgh.axis.front());
  const TreePoint B = TreePoint::vertex(cgh.axis.back());
  rep.bridge_on_axis = true;
  for (const auto& w : geodesic(t, rep.bridge_t, rep.bridge_q).waypoints)
    if (!on_segment(t, w, A, B)) rep.bridge_on_axis = false;
  for (const auto& p : cg.fixed_points) rep.g_axis_points += on_segment(t, p, A, B);
  for (const auto& p : ch.fixed_points) rep.h_axis_points += on_segment(t, p, A, B);
  return rep;
}

// For a non-loxodromic total map of a finite median pretree: a fixed point,
// or a segment [c, g(c)] inverted by g.
struct FixOrInversion {
  enum class Kind { FixedPoint, InvertedSegment, Loxodromic } kind;
  PointId p = -1, gp = -1;
};

inline FixOrInversion fixed_point_or_inversion(const FinitePretree& t, const PretreeMap& g) {
  if (!g.total_bijection())
    throw PreconditionError("fixed_point_or_inversion: map must be a total bijection");
  for (PointId p : t.points())
    if (g.apply(p) == std::optional<PointId>(p))
      return FixOrInversion{FixOrInversion::Kind::FixedPoint, p, p};
  std::optional<std::tuple<std::size_t, PointId, PointId>> best;
  for (PointId c : t.points()) {
    PointId gc = *g.apply(c);
    if (gc <= c) continue;
    if (g.apply(gc) == std::optional<PointId>(c)) {
      std::size_t span = interval(t, c, gc).size();
      if (!best || span < std::get<0>(*best)) best = {span, c, gc};
    }
  }
  if (best)
    return FixOrInversion{FixOrInversion::Kind::InvertedSegment, std::get<1>(*best),
                          std::get<2>(*best)};
  return FixOrInversion{FixOrInversion::Kind::Loxodromic, -1, -1};
}

}  // namespace treelab
