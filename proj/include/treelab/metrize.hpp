#pragma once

#include "treelab/errors.hpp"
#include "treelab/pretree.hpp"
#include "treelab/rational.hpp"
#include "treelab/tree_model.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace treelab {

// A finite median pretree together with partial automorphisms acting on it.
struct DiscreteMedianClosure {
  FinitePretree pretree;
  std::vector<PretreeMap> generators;
};

struct IsometryFailure {
  std::string generator;
  PointId x, y;
  Rational dxy, dgxgy;
};

// The simplicial realization: vertices are the pretree points, edges are the
// covering pairs, unit lengths. Generators become graph maps whose distance
// preservation is checked exhaustively on their domains.
struct EquivariantMetric {
  MetricTree tree;  // vertex ids = pretree point ids
  std::vector<std::string> generator_labels;
  std::vector<bool> isometry_ok;
  std::vector<IsometryFailure> failures;
  bool all_isometries() const {
    for (bool b : isometry_ok)
      if (!b) return false;
    return true;
  }
};

inline EquivariantMetric discrete_to_simplicial(const DiscreteMedianClosure& d) {
  const FinitePretree& t = d.pretree;
  // median everywhere, else report the witness triple
  const auto& P = t.points();
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i; j < P.size(); ++j)
      for (std::size_t k = j; k < P.size(); ++k)
        if (!median(t, P[i], P[j], P[k]))
          throw NotMedianError(P[i], P[j], P[k]);

  // covering pairs: [x,y] = {x,y}
  std::vector<MetricTree::Edge> edges;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j)
      if (interval(t, P[i], P[j]) == PointSet{std::min(P[i], P[j]), std::max(P[i], P[j])})
        edges.push_back({P[i], P[j], Rational(1)});

  std::optional<MetricTree> tree;
  try {
    tree.emplace(P, edges);
  } catch (const StructuralError& e) {
    throw StructuralError(std::string("covering relation is not a tree: ") + e.what());
  }

  // the realization reproduces the betweenness relation on vertices
  const VertexDistances dist(*tree);
  for (PointId y : P)
    for (PointId x : P)
      for (PointId z : P) {
        if (y == x || y == z || x == z) continue;
        bool geo = dist.d(x, y) + dist.d(y, z) == dist.d(x, z);
        if (geo != t.between(y, x, z))
          throw StructuralError("realization changes betweenness at (" + std::to_string(y) +
                                ";" + std::to_string(x) + "," + std::to_string(z) + ")");
      }

  std::vector<std::string> labels;
  std::vector<bool> ok_flags;
  std::vector<IsometryFailure> failures;
  for (const auto& g : d.generators) {
    labels.push_back(g.label());
    bool ok = true;
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = i + 1; j < P.size(); ++j) {
        auto gi = g.apply(P[i]), gj = g.apply(P[j]);
        if (!gi || !gj) continue;
        Rational dxy = dist.d(P[i], P[j]);
        Rational dg = dist.d(*gi, *gj);
        if (dxy != dg) {
          ok = false;
          failures.push_back({g.label(), P[i], P[j], dxy, dg});
        }
      }
    ok_flags.push_back(ok);
  }
  return EquivariantMetric{std::move(*tree), std::move(labels), std::move(ok_flags),
                           std::move(failures)};
}

// ---- agreement of translated axis metrics --------------------------------------

// One translated axis window: a label and normalized coordinates for the
// points it covers, keyed by a canonical point name.
struct AxisWindow {
  std::string label;
  std::vector<std::pair<std::string, Rational>> coords;
};

struct AgreementFailure {
  std::string s1, s2;        // the two windows
  std::string x1, x2;        // the mismatched pair (inner pair of the pattern)
  std::string y1, y2;        // enclosing pair, y1 <= x1 < x2 <= y2
  Rational d_inner, d_outer; // d_{s}(x1,x2) > d_{s'}(y1,y2)
};

struct AgreementReport {
  int pairs_checked = 0;
  int pairs_skipped = 0;  // overlap smaller than two points
  std::vector<AgreementFailure> failures;
  bool pass() const { return failures.empty(); }
};

// Pairwise check that the coordinate metrics of overlapping windows agree on
// their common points. A failure is reported through the nested four-point
// pattern with strictly different measures.
inline AgreementReport axis_metric_agreement(const std::vector<AxisWindow>& axes) {
  AgreementReport rep;
  for (std::size_t a = 0; a < axes.size(); ++a)
    for (std::size_t b = a + 1; b < axes.size(); ++b) {
      std::map<std::string, Rational> ca(axes[a].coords.begin(), axes[a].coords.end());
      std::vector<std::pair<std::string, Rational>> overlap;  // key, coord in a
      for (const auto& [k, vb] : axes[b].coords)
        if (ca.count(k)) overlap.emplace_back(k, ca[k]);
      if (overlap.size() < 2) {
        ++rep.pairs_skipped;
        continue;
      }
      ++rep.pairs_checked;
      std::map<std::string, Rational> cb(axes[b].coords.begin(), axes[b].coords.end());
      for (std::size_t i = 0; i < overlap.size(); ++i)
        for (std::size_t j = i + 1; j < overlap.size(); ++j) {
          const auto& [ki, ai] = overlap[i];
          const auto& [kj, aj] = overlap[j];
          Rational da = ai - aj;
          if (da < 0) da = -da;
          Rational db = cb[ki] - cb[kj];
          if (db < 0) db = -db;
          if (da == db) continue;
          AgreementFailure fail;
          const bool a_bigger = da > db;
          fail.s1 = a_bigger ? axes[a].label : axes[b].label;
          fail.s2 = a_bigger ? axes[b].label : axes[a].label;
          // order the pair along the window with the larger measure
          const Rational& ci = a_bigger ? ai : cb[ki];
          const Rational& cj2 = a_bigger ? aj : cb[kj];
          fail.x1 = ci <= cj2 ? ki : kj;
          fail.x2 = ci <= cj2 ? kj : ki;
          fail.y1 = fail.x1;
          fail.y2 = fail.x2;
          fail.d_inner = a_bigger ? da : db;
          fail.d_outer = a_bigger ? db : da;
          rep.failures.push_back(std::move(fail));
        }
    }
  return rep;
}

}  // namespace treelab
