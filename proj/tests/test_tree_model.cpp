#include "treelab/tree_model.hpp"

#include "treelab/f2.hpp"
#include "treelab/lazy_tree.hpp"
#include "treelab/line_model.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

using namespace treelab;

namespace {

// Brute-force path length on a metric tree: depth-first enumeration of the
// unique simple path, summing raw edge lengths. Independent of geodesic().
Rational oracle_path_length(const MetricTree& t, PointId a, PointId b,
                            std::vector<PointId> seen = {}) {
  if (a == b) return 0;
  seen.push_back(a);
  for (auto [nb, e] : t.adjacency(a)) {
    if (std::find(seen.begin(), seen.end(), nb) != seen.end()) continue;
    Rational via = oracle_path_length(t, nb, b, seen);
    if (via >= 0) return via + t.edges()[e].length;
  }
  return Rational(-1);
}

}  // namespace

TEST_CASE("metric tree construction validates shape") {
  REQUIRE_THROWS_AS(MetricTree({0, 1}, {{0, 1, Rational(0)}}), StructuralError);
  REQUIRE_THROWS_AS(MetricTree({0, 1, 2}, {{0, 1, Rational(1)}}), StructuralError);
  REQUIRE_THROWS_AS(MetricTree({0, 1}, {{0, 1, Rational(1)}, {1, 0, Rational(1)}}),
                    StructuralError);
  REQUIRE_THROWS_AS(MetricTree({0, 0}, {}), StructuralError);
}

TEST_CASE("geodesics on the unit path") {
  auto t = path_tree(0, 2);
  auto g = geodesic(t, TreePoint::vertex(0), TreePoint::vertex(2));
  REQUIRE(g.length == 2);
  REQUIRE(g.waypoints.size() == 3);
  REQUIRE(geodesic(t, TreePoint::vertex(1), TreePoint::vertex(1)).length == 0);
}

TEST_CASE("geodesic lengths match brute-force path enumeration") {
  SplitMix64 rng(101);
  for (int i = 0; i < 20; ++i) {
    auto t = testutil::random_metric_tree(rng, rng.range(2, 9));
    for (PointId a : t.vertices())
      for (PointId b : t.vertices())
        REQUIRE(distance(t, TreePoint::vertex(a), TreePoint::vertex(b)) ==
                oracle_path_length(t, a, b));
  }
}

TEST_CASE("edge points canonicalize") {
  auto t = path_tree(0, 2);
  auto p = TreePoint::on_edge(t, 1, 0, rat(1, 3));  // measured from 1
  REQUIRE(p.ea() == 0);
  REQUIRE(p.eb() == 1);
  REQUIRE(p.offset() == rat(2, 3));
  REQUIRE(TreePoint::on_edge(t, 0, 1, Rational(0)) == TreePoint::vertex(0));
  REQUIRE(TreePoint::on_edge(t, 0, 1, Rational(1)) == TreePoint::vertex(1));
  REQUIRE_THROWS_AS(TreePoint::on_edge(t, 0, 2, rat(1, 2)), StructuralError);
  REQUIRE_THROWS_AS(TreePoint::on_edge(t, 0, 1, Rational(2)), StructuralError);

  // distances with offsets on both ends
  auto q = TreePoint::on_edge(t, 1, 2, rat(1, 4));
  REQUIRE(distance(t, p, q) == rat(1, 3) + rat(1, 4));
  REQUIRE(distance(t, p, p) == 0);
}

TEST_CASE("point_toward walks exactly") {
  auto t = path_tree(0, 3);
  auto p = point_toward(t, TreePoint::vertex(0), TreePoint::vertex(3), rat(5, 2));
  REQUIRE(p == TreePoint::on_edge(t, 2, 3, rat(1, 2)));
  REQUIRE(point_toward(t, TreePoint::vertex(0), TreePoint::vertex(3), Rational(2)) ==
          TreePoint::vertex(2));
  // same-edge walking in both directions
  auto a = TreePoint::on_edge(t, 1, 2, rat(1, 5));
  auto b = TreePoint::on_edge(t, 1, 2, rat(4, 5));
  REQUIRE(point_toward(t, a, b, rat(3, 5)) == b);
  REQUIRE(point_toward(t, b, a, rat(1, 5)) == TreePoint::on_edge(t, 1, 2, rat(3, 5)));
}

TEST_CASE("sampled betweenness: path and star") {
  auto t = path_tree(0, 2);
  auto sp = as_pretree(t, {TreePoint::vertex(0), TreePoint::vertex(1), TreePoint::vertex(2)});
  REQUIRE(check_pretree_axioms(sp.pretree).pass());
  REQUIRE(is_linear(sp.pretree, sp.pretree.points()));

  // 3-star: center 0, leaves 1..3
  MetricTree star({0, 1, 2, 3},
                  {{0, 1, Rational(1)}, {0, 2, Rational(1)}, {0, 3, Rational(1)}});
  auto ss = as_pretree(star, {TreePoint::vertex(0), TreePoint::vertex(1), TreePoint::vertex(2),
                              TreePoint::vertex(3)});
  REQUIRE(check_pretree_axioms(ss.pretree).pass());
  // the only median of the leaf triple is the center
  int center_idx = -1;
  for (std::size_t i = 0; i < ss.sample.size(); ++i)
    if (ss.sample[i] == TreePoint::vertex(0)) center_idx = static_cast<int>(i);
  PointSet leaves;
  for (std::size_t i = 0; i < ss.sample.size(); ++i)
    if (static_cast<int>(i) != center_idx) leaves.push_back(static_cast<int>(i));
  REQUIRE(median(ss.pretree, leaves[0], leaves[1], leaves[2]) == center_idx);
}

TEST_CASE("sampled betweenness on random points of random trees") {
  SplitMix64 rng(103);
  for (int rep = 0; rep < 6; ++rep) {
    auto t = testutil::random_metric_tree(rng, 8);
    std::vector<TreePoint> sample;
    for (PointId v : t.vertices()) sample.push_back(TreePoint::vertex(v));
    while (sample.size() < 30u) {
      const auto& e = t.edges()[rng.below(t.edges().size())];
      Rational off = e.length * rat(rng.range(1, 7), 8);
      if (off > 0 && off < e.length)
        sample.push_back(TreePoint::on_edge(t, e.a, e.b, off));
    }
    auto sp = as_pretree(t, sample);
    REQUIRE(check_pretree_axioms(sp.pretree).pass());

    // the full vertex set is closed under geodesic medians, so its sampled
    // betweenness is a median pretree
    std::vector<TreePoint> verts;
    for (PointId v : t.vertices()) verts.push_back(TreePoint::vertex(v));
    REQUIRE(is_median_pretree(as_pretree(t, verts).pretree));

    // medians agree with geodesic intersections (distance-formula median)
    for (int i = 0; i < 40; ++i) {
      int x = static_cast<int>(rng.below(sp.sample.size()));
      int y = static_cast<int>(rng.below(sp.sample.size()));
      int z = static_cast<int>(rng.below(sp.sample.size()));
      TreePoint m = median_point(t, sp.sample[x], sp.sample[y], sp.sample[z]);
      auto pm = median(sp.pretree, x, y, z);
      // the geometric median is in the sample exactly when the pretree one exists
      auto it = std::find(sp.sample.begin(), sp.sample.end(), m);
      if (pm)
        REQUIRE(sp.sample[static_cast<std::size_t>(*pm)] == m);
      else
        REQUIRE(it == sp.sample.end());
    }
  }
}

TEST_CASE("four point condition") {
  SplitMix64 rng(107);
  for (int rep = 0; rep < 10; ++rep) {
    auto t = testutil::random_metric_tree(rng, 8);
    std::vector<TreePoint> pts;
    for (PointId v : t.vertices()) pts.push_back(TreePoint::vertex(v));
    auto dm = distance_matrix(t, pts);
    const int k = static_cast<int>(pts.size());
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q)
        for (int r = q + 1; r < k; ++r)
          for (int s = r + 1; s < k; ++s) {
            std::vector<Rational> sums{dm[p][q] + dm[r][s], dm[p][r] + dm[q][s],
                                       dm[p][s] + dm[q][r]};
            std::sort(sums.begin(), sums.end());
            REQUIRE(sums[1] == sums[2]);
          }
  }
}

TEST_CASE("ball materialization of the free-group tree") {
  auto lt = f2::cayley_lazy();
  auto b0 = materialize_ball(lt, "", 0);
  REQUIRE(b0.labels.size() == 1);

  auto b1 = materialize_ball(lt, "", 1);
  REQUIRE(b1.labels.size() == 5);
  std::set<std::string> expect1{"", "a", "b", "A", "B"};
  REQUIRE(std::set<std::string>(b1.labels.begin(), b1.labels.end()) == expect1);

  // radius 2: all reduced words of length <= 2, counted independently
  auto b2 = materialize_ball(lt, "", 2);
  std::set<std::string> expect2;
  for (char c : {'a', 'b', 'A', 'B'}) {
    expect2.insert(std::string(1, c));
    for (char d : {'a', 'b', 'A', 'B'})
      if (d != f2::inverse_letter(c)) expect2.insert(std::string{c, d});
  }
  expect2.insert("");
  REQUIRE(expect2.size() == 17);
  REQUIRE(std::set<std::string>(b2.labels.begin(), b2.labels.end()) == expect2);

  // determinism
  auto again = materialize_ball(lt, "", 2);
  REQUIRE(again.labels == b2.labels);

  LazyTree bounded = lt;
  bounded.radius_bound = 3;
  REQUIRE_THROWS_AS(materialize_ball(bounded, "", 4), PreconditionError);
}

TEST_CASE("line order compare") {
  LineModel line;
  REQUIRE(line_order_compare(line, rat(1, 2), rat(2, 3)) == Cmp::Less);
  REQUIRE(line_order_compare(line, rat(1, 2), rat(1, 2)) == Cmp::Equal);
  REQUIRE(line_order_compare(line, rat(2, 3), rat(1, 2)) == Cmp::Greater);

  // consistency with order betweenness on a window of rationals
  SplitMix64 rng(109);
  std::vector<Rational> xs;
  for (int i = 0; i < 20; ++i) xs.push_back(rat(rng.range(-20, 20), rng.range(1, 4)));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (std::size_t a = 0; a < xs.size(); ++a)
    for (std::size_t b = 0; b < xs.size(); ++b)
      for (std::size_t c = 0; c < xs.size(); ++c) {
        if (a == b || b == c || a == c) continue;
        bool between = (xs[a] < xs[b] && xs[b] < xs[c]) || (xs[c] < xs[b] && xs[b] < xs[a]);
        bool by_order = line_order_compare(line, xs[a], xs[b]) ==
                        line_order_compare(line, xs[b], xs[c]) &&
                        line_order_compare(line, xs[a], xs[b]) != Cmp::Equal;
        REQUIRE(between == by_order);
      }
}

TEST_CASE("tree text format round trip and literals") {
  MetricTree t({0, 1, 2}, {{0, 1, rat(1, 2)}, {1, 2, rat(3, 4)}});
  std::string text = format_tree(t);
  std::istringstream in(text);
  MetricTree back = parse_tree(in);
  REQUIRE(format_tree(back) == text);

  REQUIRE(parse_tree_point("@1", t) == TreePoint::vertex(1));
  REQUIRE(parse_tree_point("@0-1:1/4", t) == TreePoint::on_edge(t, 0, 1, rat(1, 4)));
  REQUIRE(parse_tree_point("@0-1:1/4", t).str() == "@0-1:1/4");
  REQUIRE_THROWS_AS(parse_tree_point("0", t), StructuralError);
  REQUIRE_THROWS_AS(parse_tree_point("@0-2:1/4", t), StructuralError);

  std::istringstream bad("tree\nv 0\nv 1\ne 0 1 junk\n");
  REQUIRE_THROWS_AS(parse_tree(bad), StructuralError);
}

TEST_CASE("spider materialization") {
  auto sp = materialize_ball(spider_lazy(3), "c", 2);
  REQUIRE(sp.labels.size() == 7u);  // center + 3 arms x 2
  REQUIRE(sp.tree.edges().size() == 6u);
}
