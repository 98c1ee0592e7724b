#include "treelab/metrize.hpp"

#include "treelab/actions.hpp"
#include "treelab/automorphism.hpp"
#include "treelab/f2.hpp"
#include "treelab/report.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace treelab;

namespace {

FinitePretree star3_pretree() {
  std::vector<BetweenTriple> ts;
  for (int x = 1; x <= 3; ++x)
    for (int z = 1; z <= 3; ++z)
      if (x != z) ts.push_back({0, x, z});
  return FinitePretree({0, 1, 2, 3}, ts);
}

PretreeMap perm_of(const FinitePretree& t, const std::vector<PointId>& image,
                   const std::string& label) {
  std::vector<std::optional<PointId>> img(image.begin(), image.end());
  return PretreeMap(t, std::move(img), label);
}

}  // namespace

TEST_CASE("star realization with a rotation") {
  auto star = star3_pretree();
  auto rot = perm_of(star, {0, 2, 3, 1}, "rot");
  auto em = discrete_to_simplicial({star, {rot}});
  REQUIRE(em.tree.edges().size() == 3);
  for (const auto& e : em.tree.edges()) REQUIRE((e.a == 0 || e.b == 0));
  REQUIRE(em.all_isometries());
}

TEST_CASE("graph distance equals covering path count") {
  SplitMix64 rng(701);
  for (int i = 0; i < 15; ++i) {
    auto t = testutil::random_tree(rng, rng.range(2, 9));
    auto pre = testutil::pretree_of(t);
    auto em = discrete_to_simplicial({pre, {}});
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b) {
        auto d = distance(em.tree, TreePoint::vertex(a), TreePoint::vertex(b));
        auto oracle = testutil::graph_path(t, a, b).size() - 1;
        REQUIRE(d == Rational(static_cast<long>(oracle)));
      }
  }
}

TEST_CASE("betweenness is preserved and reflected by the realization") {
  SplitMix64 rng(709);
  for (int i = 0; i < 10; ++i) {
    auto t = testutil::random_tree(rng, rng.range(2, 8));
    auto pre = testutil::pretree_of(t);
    auto em = discrete_to_simplicial({pre, {}});
    for (PointId y : pre.points())
      for (PointId x : pre.points())
        for (PointId z : pre.points()) {
          if (y == x || y == z || x == z) continue;
          REQUIRE(pre.between(y, x, z) ==
                  strictly_between_points(em.tree, TreePoint::vertex(y), TreePoint::vertex(x),
                                          TreePoint::vertex(z)));
        }
  }
}

TEST_CASE("free-group window realization with partial generators") {
  // vertex pretree of the radius-3 ball with the lab generators acting
  auto w = f2::ball(3);
  std::vector<TreePoint> sample;
  for (PointId v : w.tree.vertices()) sample.push_back(TreePoint::vertex(v));
  auto sp = as_pretree(w.tree, sample);

  std::vector<PretreeMap> gens;
  for (const auto& m : f2::lab_generators()) {
    std::vector<std::optional<PointId>> img(w.labels.size());
    for (std::size_t i = 0; i < w.labels.size(); ++i) {
      // sample order is canonical, so translate through the window ids
      const TreePoint& p = sp.sample[i];
      f2::Word word = w.labels[static_cast<std::size_t>(w.tree.vindex(p.v()))];
      auto it = w.ids.find(m(word));
      if (it == w.ids.end()) continue;
      TreePoint target = TreePoint::vertex(it->second);
      for (std::size_t j = 0; j < sp.sample.size(); ++j)
        if (sp.sample[j] == target) img[i] = static_cast<int>(j);
    }
    gens.emplace_back(sp.pretree, std::move(img), m.name, false);
  }

  auto em = discrete_to_simplicial({sp.pretree, gens});
  REQUIRE(em.all_isometries());
  REQUIRE(em.tree.edges().size() == w.tree.edges().size());

  // the unit metric of the realization matches the word metric
  for (int i = 0; i < 40; ++i) {
    std::size_t a = static_cast<std::size_t>(i * 7 % sp.sample.size());
    std::size_t b = static_cast<std::size_t>(i * 13 % sp.sample.size());
    f2::Word wa = w.labels[static_cast<std::size_t>(w.tree.vindex(sp.sample[a].v()))];
    f2::Word wb = w.labels[static_cast<std::size_t>(w.tree.vindex(sp.sample[b].v()))];
    REQUIRE(distance(em.tree, TreePoint::vertex(static_cast<int>(a)),
                     TreePoint::vertex(static_cast<int>(b))) ==
            Rational(f2::dist(wa, wb)));
  }
}

TEST_CASE("a flip acts isometrically and surfaces its inversion") {
  // path 0-1-2-3 flipped end to end: an isometry with an inverted middle edge
  FinitePretree path({0, 1, 2, 3}, {{1, 0, 2}, {1, 2, 0}, {1, 0, 3}, {1, 3, 0},
                                    {2, 0, 3}, {2, 3, 0}, {2, 1, 3}, {2, 3, 1}});
  auto flip = perm_of(path, {3, 2, 1, 0}, "flip");
  auto em = discrete_to_simplicial({path, {flip}});
  REQUIRE(em.all_isometries());
  auto fx = fixed_point_or_inversion(path, flip);
  REQUIRE(fx.kind == FixOrInversion::Kind::InvertedSegment);
  REQUIRE(fx.p == 1);
  REQUIRE(fx.gp == 2);
}

TEST_CASE("inputs that are not median or not tree-like are rejected") {
  // three isolated points: no medians anywhere
  FinitePretree anti({0, 1, 2}, {});
  REQUIRE_THROWS_AS(discrete_to_simplicial({anti, {}}), NotMedianError);

  // a relation whose covering graph is a 4-cycle but where all the needed
  // medians exist pointwise
  std::vector<BetweenTriple> ts;
  auto sym = [&](PointId y, PointId x, PointId z) {
    ts.push_back({y, x, z});
    ts.push_back({y, z, x});
  };
  sym(1, 0, 2);
  sym(2, 1, 3);
  sym(3, 2, 0);
  sym(0, 3, 1);
  FinitePretree cyclic({0, 1, 2, 3}, ts);
  REQUIRE_THROWS_AS(discrete_to_simplicial({cyclic, {}}), StructuralError);
}

TEST_CASE("translated axis windows agree where they overlap") {
  // same line, two parametrizations shifted by commuting translations
  AxisWindow w1{"s", {}}, w2{"s-shift", {}};
  for (int k = -5; k <= 5; ++k) {
    w1.coords.emplace_back("p" + std::to_string(k), rat(k));
    w2.coords.emplace_back("p" + std::to_string(k), rat(k + 7));
  }
  // a third window with no overlap at all
  AxisWindow w3{"far", {{"q1", rat(0)}, {"q2", rat(1)}}};
  auto rep = axis_metric_agreement({w1, w2, w3});
  REQUIRE(rep.pass());
  REQUIRE(rep.pairs_checked == 1);
  REQUIRE(rep.pairs_skipped == 2);

  // a deliberate mismatch is caught and reported through the nested pattern
  AxisWindow bad{"stretched", {}};
  for (int k = -5; k <= 5; ++k) bad.coords.emplace_back("p" + std::to_string(k), rat(2 * k));
  auto rep2 = axis_metric_agreement({w1, bad});
  REQUIRE_FALSE(rep2.pass());
  const auto& f = rep2.failures.front();
  REQUIRE(f.d_inner > f.d_outer);
  REQUIRE(f.s1 == "stretched");

  // free-group flavor: the same axis seen from two powers of the shift map
  auto ax = f2::leftmul_axis("ba");
  AxisWindow fa{"id", {}}, fb{"shifted", {}};
  for (long k = -6; k <= 6; ++k) {
    fa.coords.emplace_back(ax.point(k), rat(k));
    fb.coords.emplace_back(ax.point(k), rat(k - 2));  // seen after one ba-translation
  }
  auto rep3 = axis_metric_agreement({fa, fb});
  REQUIRE(rep3.pass());

  // a window against an identical copy of itself agrees trivially
  auto rep4 = axis_metric_agreement({fa, fa});
  REQUIRE(rep4.pass());
  REQUIRE(rep4.pairs_checked == 1);
}

TEST_CASE("report rendering is sorted with a trailing verdict") {
  Report r;
  REQUIRE(r.render() == "verdict=pass count=0\n");
  r.add("check=z result=pass");
  r.add_fail("check=a result=fail");
  REQUIRE(r.render() == "check=a result=fail\ncheck=z result=pass\nverdict=fail count=2\n");
  REQUIRE(r.exit_code() == 1);
  // rendering twice is byte-identical
  REQUIRE(r.render() == r.render());
}
