#pragma once

#include "treelab/errors.hpp"
#include "treelab/pretree.hpp"
#include "treelab/rational.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

namespace treelab {

// Binary relation on a finite pretree, candidate for the flow axioms
//   F1  never r(x,y) and r(y,x)
//   F2  (z;x,y) implies r(x,z) or r(y,z)
//   F3  r(x,y) and z != y implies (y;x,z) or r(z,y)
struct FlowRelation {
  FinitePretree base;
  std::vector<bool> rel;  // n^2, by point index

  FlowRelation(FinitePretree b, const std::vector<std::pair<PointId, PointId>>& pairs)
      : base(std::move(b)), rel(static_cast<std::size_t>(base.size()) * base.size(), false) {
    for (auto [x, y] : pairs)
      rel[static_cast<std::size_t>(base.index_checked(x)) * base.size() +
          base.index_checked(y)] = true;
  }

  bool r(PointId x, PointId y) const {
    return rel[static_cast<std::size_t>(base.index_checked(x)) * base.size() +
               base.index_checked(y)];
  }
};

enum class FlowAxiom { F1, F2, F3 };

inline const char* axiom_name(FlowAxiom a) {
  switch (a) {
    case FlowAxiom::F1: return "F1";
    case FlowAxiom::F2: return "F2";
    case FlowAxiom::F3: return "F3";
  }
  return "?";
}

struct FlowViolation {
  FlowAxiom axiom;
  std::array<PointId, 3> witness;  // F1 uses the first two entries
};

struct FlowReport {
  std::vector<FlowViolation> violations;
  bool pass() const { return violations.empty(); }
};

inline FlowReport check_flow_axioms(const FlowRelation& f) {
  FlowReport rep;
  const auto& P = f.base.points();
  for (PointId x : P)
    for (PointId y : P)
      if (x < y && f.r(x, y) && f.r(y, x))
        rep.violations.push_back({FlowAxiom::F1, {x, y, y}});
  for (PointId z : P)
    for (PointId x : P)
      for (PointId y : P)
        if (f.base.between(z, x, y) && !f.r(x, z) && !f.r(y, z))
          rep.violations.push_back({FlowAxiom::F2, {z, x, y}});
  for (PointId x : P)
    for (PointId y : P) {
      if (!f.r(x, y)) continue;
      for (PointId z : P)
        if (z != y && !f.base.between(y, x, z) && !f.r(z, y))
          rep.violations.push_back({FlowAxiom::F3, {x, y, z}});
    }
  return rep;
}

// ---- directed arcs on the rational line --------------------------------------
//
// An arc sample is a strictly monotone rational sequence plus a promise tag
// describing its continuation: cofinal toward +/-infinity, or approaching a
// finite limit that the arc never attains. Without the promise the induced
// relation is not finitely decidable and every query is inconclusive.

struct LineArc {
  std::vector<Rational> samples;  // in arc order
  bool promised = false;
  std::optional<Rational> limit;  // finite limit; absent means +/-inf by direction

  bool increasing() const {
    if (samples.size() >= 2) return samples[0] < samples[1];
    if (limit && !samples.empty()) return samples[0] < *limit;
    return true;
  }

  void validate() const {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (samples[i] == samples[i + 1]) throw StructuralError("arc samples not strict");
      if ((samples[i] < samples[i + 1]) != increasing())
        throw StructuralError("arc samples not monotone");
    }
    if (limit)
      for (const auto& s : samples) {
        if (increasing() ? !(s < *limit) : !(s > *limit))
          throw StructuralError("arc samples on the wrong side of the limit");
      }
  }
};

// Induced relation between two reals: toward +inf it is the strict order;
// toward a finite limit c (not attained) it points at c from both sides but
// never reaches c from the approach side.
inline bool line_arc_relates(const LineArc& arc, const Rational& x, const Rational& y) {
  if (!arc.promised) throw WindowExhausted("arc carries no continuation promise");
  if (!arc.limit) return arc.increasing() ? x < y : y < x;
  const Rational& c = *arc.limit;
  if (arc.increasing())  // approaches c from below
    return (x < y && y < c) || (c <= y && y < x);
  return (y < x && c < y) || (y <= c && x < y);
}

struct ProbeFlow {
  FinitePretree pretree;         // order betweenness on the probes
  std::vector<Rational> points;  // PointId i corresponds to points[i], ascending
  std::optional<FlowRelation> flow;
  bool inconclusive = false;
};

inline FinitePretree order_pretree(std::size_t n, auto between) {
  PointSet pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(static_cast<int>(i));
  std::vector<BetweenTriple> triples;
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t z = 0; z < n; ++z)
        if (x != y && y != z && x != z && between(y, x, z))
          triples.push_back({static_cast<int>(y), static_cast<int>(x), static_cast<int>(z)});
  return FinitePretree(pts, triples);
}

inline ProbeFlow flow_from_line_arc(const LineArc& arc, std::vector<Rational> probes) {
  arc.validate();
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  FinitePretree pre = order_pretree(probes.size(), [&](std::size_t y, std::size_t x, std::size_t z) {
    return (probes[x] < probes[y] && probes[y] < probes[z]) ||
           (probes[z] < probes[y] && probes[y] < probes[x]);
  });
  ProbeFlow out{std::move(pre), probes, std::nullopt, false};
  if (!arc.promised) {
    out.inconclusive = true;
    return out;
  }
  std::vector<std::pair<PointId, PointId>> pairs;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = 0; j < probes.size(); ++j)
      if (i != j && line_arc_relates(arc, probes[i], probes[j]))
        pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  out.flow = FlowRelation(out.pretree, pairs);
  return out;
}

// ---- directed arcs on a spider ------------------------------------------------
//
// The spider is a star of unit-speed rays glued at a center; a point is
// (ray, t) with t > 0, or the center (0, 0). Arcs run up one ray, either
// cofinally or into a finite limit.

struct SpiderPoint {
  int ray;     // 0 = center
  Rational t;  // 0 for the center

  friend bool operator==(const SpiderPoint& a, const SpiderPoint& b) {
    return a.ray == b.ray && a.t == b.t;
  }
  friend bool operator<(const SpiderPoint& a, const SpiderPoint& b) {
    if (a.ray != b.ray) return a.ray < b.ray;
    return a.t < b.t;
  }
};

struct SpiderArc {
  int ray = 1;
  std::vector<Rational> ts;  // strictly increasing, positive
  bool promised = false;
  std::optional<Rational> limit_t;  // absent: cofinal toward the ray end
};

inline Rational spider_dist(const SpiderPoint& a, const SpiderPoint& b) {
  if (a.ray == b.ray) {
    Rational d = a.t - b.t;
    return d < 0 ? -d : d;
  }
  return a.t + b.t;  // through the center; center itself has t = 0
}

inline bool spider_between(const SpiderPoint& y, const SpiderPoint& x, const SpiderPoint& z) {
  if (y == x || y == z || x == z) return false;
  return spider_dist(x, y) + spider_dist(y, z) == spider_dist(x, z);
}

// Whether y lies strictly on the path from x toward the arc target.
inline bool spider_arc_relates(const SpiderArc& arc, const SpiderPoint& x,
                               const SpiderPoint& y) {
  if (!arc.promised) throw WindowExhausted("arc carries no continuation promise");
  if (x == y) return false;
  const int j = arc.ray;
  if (!arc.limit_t) {
    // flows toward the end of ray j
    if (x.ray == j) return y.ray == j && x.t < y.t;
    return (y.ray == 0) || (y.ray == x.ray && y.t < x.t) || y.ray == j;
  }
  const Rational& c = *arc.limit_t;  // approached from below along ray j
  if (x.ray == j) {
    if (x.t < c) return y.ray == j && x.t < y.t && y.t < c;
    if (x.t > c) return y.ray == j && c <= y.t && y.t < x.t;
    return false;  // x is exactly the target point
  }
  return (y.ray == 0) || (y.ray == x.ray && y.t < x.t) ||
         (y.ray == j && y.t < c);
}

struct SpiderProbeFlow {
  FinitePretree pretree;
  std::vector<SpiderPoint> points;
  std::optional<FlowRelation> flow;
  bool inconclusive = false;
};

inline SpiderProbeFlow flow_from_spider_arc(const SpiderArc& arc,
                                            std::vector<SpiderPoint> probes) {
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  FinitePretree pre = order_pretree(probes.size(), [&](std::size_t y, std::size_t x, std::size_t z) {
    return spider_between(probes[y], probes[x], probes[z]);
  });
  SpiderProbeFlow out{std::move(pre), probes, std::nullopt, false};
  if (!arc.promised) {
    out.inconclusive = true;
    return out;
  }
  std::vector<std::pair<PointId, PointId>> pairs;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = 0; j < probes.size(); ++j)
      if (i != j && spider_arc_relates(arc, probes[i], probes[j]))
        pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
  out.flow = FlowRelation(out.pretree, pairs);
  return out;
}

// ---- cuts ---------------------------------------------------------------------

// Where a flow lands on a line: at a member point that is the greatest
// element of the line under the flow, in a gap splitting the members at the
// threshold, or off to one of the two ends.
struct Cut {
  enum class Pos { AtPoint, Gap, PlusInfinity, MinusInfinity } pos;
  Rational at{0};  // member point (AtPoint) or gap threshold
};

struct CutResult {
  Cut cut;
  bool lies_on = false;
  std::string note;
};

// Line members must be sorted ascending. The designated subset is given
// explicitly: cuts are decided at sample resolution.
inline CutResult flow_cut_line(const std::vector<Rational>& members, const LineArc& arc) {
  arc.validate();
  if (!arc.promised) throw WindowExhausted("flow_cut needs a continuation promise");
  CutResult res;
  if (!arc.limit) {
    res.cut.pos = arc.increasing() ? Cut::Pos::PlusInfinity : Cut::Pos::MinusInfinity;
    res.lies_on = false;  // a single cofinal class is a trivial cut
    res.note = "cofinal";
    return res;
  }
  const Rational& c = *arc.limit;
  // greatest member under the relation: every other member points at it
  std::optional<Rational> greatest;
  for (const auto& m : members) {
    bool g = true;
    for (const auto& x : members)
      if (!(x == m) && !line_arc_relates(arc, x, m)) {
        g = false;
        break;
      }
    if (g) {
      greatest = m;
      break;
    }
  }
  if (greatest && members.size() >= 2) {
    res.cut.pos = Cut::Pos::AtPoint;
    res.cut.at = *greatest;
    res.lies_on = true;
    res.note = "greatest member";
    return res;
  }
  // classes relative to the limit
  bool lower = false, upper = false;
  for (const auto& m : members)
    (arc.increasing() ? (m < c ? lower : upper) : (m > c ? lower : upper)) = true;
  res.cut.pos = Cut::Pos::Gap;
  res.cut.at = c;
  if (lower && upper) {
    // the two classes have no common upper bound: the approach side is open
    res.lies_on = true;
    res.note = "two classes";
  } else {
    res.lies_on = false;
    res.note = "one class";
  }
  return res;
}

// Cut of a line inside the spider (the union of two distinct rays through
// the center) under an arc running up a third ray or one of its own rays.
// Coordinates on the line: +t on pos_ray, -t on neg_ray, 0 at the center.
inline CutResult flow_cut_spider_line(int neg_ray, int pos_ray,
                                      const std::vector<SpiderPoint>& members,
                                      const SpiderArc& arc) {
  if (!arc.promised) throw WindowExhausted("flow_cut needs a continuation promise");
  auto coord = [&](const SpiderPoint& p) -> Rational {
    if (p.ray == 0) return 0;
    if (p.ray == pos_ray) return p.t;
    if (p.ray == neg_ray) return -p.t;
    throw PreconditionError("member off the designated line");
  };
  std::vector<Rational> coords;
  for (const auto& m : members) coords.push_back(coord(m));
  std::sort(coords.begin(), coords.end());

  if (arc.ray == pos_ray || arc.ray == neg_ray) {
    LineArc la;
    la.promised = true;
    const bool pos_side = arc.ray == pos_ray;
    for (const auto& t : arc.ts) la.samples.push_back(pos_side ? t : Rational(-t));
    if (arc.limit_t) la.limit = pos_side ? *arc.limit_t : Rational(-*arc.limit_t);
    return flow_cut_line(coords, la);
  }

  // The arc heads up a branch off the line; everything on the line flows
  // toward the center.
  CutResult res;
  bool center_member = false;
  bool lower = false, upper = false;
  for (const auto& q : coords) {
    if (q == 0) center_member = true;
    if (q < 0) lower = true;
    if (q > 0) upper = true;
  }
  if (center_member) {
    res.cut.pos = Cut::Pos::AtPoint;
    res.cut.at = 0;
    res.lies_on = true;
    res.note = "branch point";
  } else {
    res.cut.pos = Cut::Pos::Gap;
    res.cut.at = 0;
    // both classes share the center as an upper bound in the ambient tree
    res.lies_on = false;
    res.note = lower && upper ? "classes share an upper bound" : "one class";
  }
  return res;
}

// E-classes: x ~ y when r(x,y) or r(y,x) or x = y. At most two classes for
// flows from endless arcs; each class is order convex.
inline std::vector<std::vector<int>> e_classes(const FlowRelation& f) {
  const int n = f.base.size();
  std::vector<int> cls(n, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = next;
    bool grown = true;
    while (grown) {
      grown = false;
      for (int x = 0; x < n; ++x) {
        if (cls[x] != next) continue;
        for (int y = 0; y < n; ++y)
          if (cls[y] < 0 && (f.r(f.base.points()[x], f.base.points()[y]) ||
                             f.r(f.base.points()[y], f.base.points()[x]))) {
            cls[y] = next;
            grown = true;
          }
      }
    }
    ++next;
  }
  std::vector<std::vector<int>> out(next);
  for (int i = 0; i < n; ++i) out[cls[i]].push_back(i);
  return out;
}

}  // namespace treelab
