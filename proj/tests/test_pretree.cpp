#include "treelab/pretree.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

using namespace treelab;
using testutil::SimpleTree;

namespace {

FinitePretree path3() {
  // a=0, b=1, c=2
  return FinitePretree({0, 1, 2}, {{1, 0, 2}, {1, 2, 0}});
}

FinitePretree star3() {
  // center m=0, leaves 1,2,3
  std::vector<BetweenTriple> ts;
  for (int x = 1; x <= 3; ++x)
    for (int z = 1; z <= 3; ++z)
      if (x != z) ts.push_back({0, x, z});
  return FinitePretree({0, 1, 2, 3}, ts);
}

}  // namespace

TEST_CASE("axioms on the three-point path") {
  REQUIRE(check_pretree_axioms(path3()).pass());

  FinitePretree bad({0, 1, 2}, {{1, 0, 2}, {1, 2, 0}, {1, 0, 0}});
  auto rep = check_pretree_axioms(bad);
  REQUIRE_FALSE(rep.pass());
  bool found_a1 = false;
  for (const auto& v : rep.violations)
    if (v.axiom == PretreeAxiom::A1 && v.witness == std::vector<PointId>{1, 0, 0})
      found_a1 = true;
  REQUIRE(found_a1);
}

TEST_CASE("axioms hold for betweenness derived from random trees") {
  SplitMix64 rng(7);
  for (int i = 0; i < 40; ++i) {
    auto t = testutil::random_tree(rng, rng.range(1, 7));
    REQUIRE(check_pretree_axioms(testutil::pretree_of(t)).pass());
  }
}

TEST_CASE("triples must reference known points") {
  REQUIRE_THROWS_AS(FinitePretree({0, 1}, {{0, 1, 5}}), StructuralError);
}

TEST_CASE("intervals") {
  auto p = path3();
  REQUIRE(interval(p, 0, 2) == PointSet{0, 1, 2});
  REQUIRE(interval(p, 0, 0) == PointSet{0});
  REQUIRE(interval(p, 0, 2, IntervalKind::Open) == PointSet{1});
  REQUIRE(interval(p, 0, 2, IntervalKind::RightOpen) == PointSet{0, 1});
  REQUIRE(interval(p, 0, 2, IntervalKind::LeftOpen) == PointSet{1, 2});

  auto s = star3();
  REQUIRE(interval(s, 1, 2) == PointSet{0, 1, 2});
  REQUIRE_THROWS_AS(interval(s, 0, 9), StructuralError);
}

TEST_CASE("median against the path-intersection oracle") {
  auto p = path3();
  REQUIRE(median(p, 0, 1, 2) == 1);
  REQUIRE(median(p, 0, 0, 2) == 0);

  SplitMix64 rng(11);
  for (int i = 0; i < 30; ++i) {
    auto t = testutil::random_tree(rng, 9);
    auto pre = testutil::pretree_of(t);
    for (int x = 0; x < t.n; ++x)
      for (int y = 0; y < t.n; ++y)
        for (int z = 0; z < t.n; ++z) {
          auto got = median(pre, x, y, z);
          auto want = testutil::oracle_median(t, x, y, z);
          REQUIRE(got == want);
          REQUIRE(all_medians(pre, x, y, z).size() == 1);  // uniqueness
        }
  }
}

TEST_CASE("full, linear, arc") {
  auto s = star3();
  REQUIRE(is_arc(s, interval(s, 1, 2)));
  REQUIRE_FALSE(is_full(s, {1, 2}));  // center missing
  REQUIRE(is_full(s, {0, 1, 2}));
  REQUIRE(is_linear(s, {0, 1, 2}));
  REQUIRE_FALSE(is_linear(s, {0, 1, 2, 3}));  // two legs through the center

  // union of two paths sharing one endpoint is full but not linear
  SplitMix64 rng(3);
  auto t = testutil::random_tree(rng, 8);
  auto pre = testutil::pretree_of(t);
  for (int x = 0; x < t.n; ++x)
    for (int y = 0; y < t.n; ++y)
      for (int z = 0; z < t.n; ++z) {
        if (x == y || y == z || x == z) continue;
        auto m = *median(pre, x, y, z);
        if (m != y) continue;  // want paths x..y and y..z meeting only at y
        PointSet u = set_union(interval(pre, x, y), interval(pre, y, z));
        if (set_intersection(interval(pre, x, y), interval(pre, y, z)) != PointSet{y})
          continue;
        if (u.size() < 3 || is_subset(u, interval(pre, x, z))) continue;
        REQUIRE_FALSE(is_linear(pre, u));
      }
}

TEST_CASE("terminal decomposition") {
  auto p = path3();
  auto d = terminal_decomposition(p);
  REQUIRE(d.terminal == PointSet{0, 2});
  REQUIRE(d.interior == PointSet{1});

  FinitePretree single({5}, {});
  auto ds = terminal_decomposition(single);
  REQUIRE(ds.terminal == PointSet{5});
  REQUIRE(ds.interior.empty());

  SplitMix64 rng(13);
  for (int i = 0; i < 25; ++i) {
    auto t = testutil::random_tree(rng, rng.range(2, 9));
    auto got = terminal_decomposition(testutil::pretree_of(t));
    auto leaves = testutil::oracle_leaves(t);
    REQUIRE(got.terminal == PointSet(leaves.begin(), leaves.end()));
  }
}

TEST_CASE("bridge on a path and with a shared point") {
  auto p = path3();
  auto b = bridge(p, {0}, {2});
  REQUIRE(b.t == 0);
  REQUIRE(b.q == 2);
  REQUIRE(b.interior == PointSet{1});

  auto shared = bridge(p, {0, 1}, {1, 2});
  REQUIRE(shared.t == 1);
  REQUIRE(shared.q == 1);
  REQUIRE(shared.interior.empty());

  REQUIRE_THROWS_AS(bridge(p, {0, 1, 2}, {1, 2}), PreconditionError);
  REQUIRE_THROWS_AS(bridge(p, {}, {1}), PreconditionError);
  REQUIRE_THROWS_AS(bridge(star3(), {1, 2}, {3}), PreconditionError);  // {1,2} not full
}

TEST_CASE("bridge against the nearest-pair oracle") {
  SplitMix64 rng(17);
  int done = 0;
  while (done < 40) {
    auto t = testutil::random_tree(rng, rng.range(4, 9));
    auto pre = testutil::pretree_of(t);
    // two disjoint full sets: intervals around two random vertices
    PointSet a = interval(pre, rng.range(0, t.n - 1), rng.range(0, t.n - 1));
    PointSet b = interval(pre, rng.range(0, t.n - 1), rng.range(0, t.n - 1));
    if (!set_intersection(a, b).empty()) continue;
    ++done;
    auto br = bridge(pre, a, b);
    REQUIRE(set_contains(a, br.t));
    REQUIRE(set_contains(b, br.q));

    // nearest pair by graph distance
    int best = 1 << 20;
    for (int x : a)
      for (int y : b)
        best = std::min(best, static_cast<int>(testutil::graph_path(t, x, y).size()));
    REQUIRE(static_cast<int>(testutil::graph_path(t, br.t, br.q).size()) == best);

    // the construction via a median: for a segment-shaped side [w,v], the
    // extremity is m(b0, w, v) for any b0 on the other side
    {
      PointId w0 = a.front(), v0 = a.back();
      if (interval(pre, w0, v0) == a)
        for (PointId b0 : b) REQUIRE(median(pre, b0, w0, v0) == br.t);
    }
    auto cands = bridge_candidates(pre, a, b);
    REQUIRE(cands.size() == 1);  // uniqueness

    // symmetry
    auto rb = bridge(pre, b, a);
    REQUIRE(rb.t == br.q);
    REQUIRE(rb.q == br.t);
    REQUIRE(rb.interior == br.interior);

    // [t,q] is contained in every full superset meeting both (small cases)
    if (t.n <= 6) {
      PointSet seg = interval(pre, br.t, br.q);
      for (int mask = 0; mask < (1 << t.n); ++mask) {
        PointSet s;
        for (int v = 0; v < t.n; ++v)
          if (mask & (1 << v)) s.push_back(v);
        if (s.empty() || !is_full(pre, s)) continue;
        if (set_intersection(s, a).empty() || set_intersection(s, b).empty()) continue;
        REQUIRE(is_subset(seg, s));
      }
    }
  }
}

TEST_CASE("median closure") {
  auto s = star3();
  REQUIRE(median_closure(s, {1, 2, 3}) == PointSet{0, 1, 2, 3});
  REQUIRE(median_closure(s, {1, 3}) == PointSet{1, 3});

  SplitMix64 rng(23);
  for (int i = 0; i < 25; ++i) {
    auto t = testutil::random_tree(rng, 9);
    auto pre = testutil::pretree_of(t);
    PointSet seed;
    while (seed.size() < 4) seed = normalized(set_union(seed, {rng.range(0, 8)}));
    PointSet got = median_closure(pre, seed);
    REQUIRE(got == testutil::closure_permuted(pre, seed, rng));
    REQUIRE(testutil::median_stable(pre, got));
    REQUIRE(median_closure(pre, got) == got);  // idempotent
    // monotone in the seed
    PointSet bigger = normalized(set_union(seed, {rng.range(0, 8)}));
    REQUIRE(is_subset(got, median_closure(pre, bigger)));
  }

  // minimality by exhaustion on small ground sets
  SplitMix64 rng2(29);
  for (int i = 0; i < 10; ++i) {
    auto t = testutil::random_tree(rng2, 6);
    auto pre = testutil::pretree_of(t);
    PointSet seed{rng2.range(0, 5), rng2.range(0, 5), rng2.range(0, 5)};
    seed = normalized(seed);
    PointSet got = median_closure(pre, seed);
    for (int mask = 0; mask < (1 << 6); ++mask) {
      PointSet s;
      for (int v = 0; v < 6; ++v)
        if (mask & (1 << v)) s.push_back(v);
      if (!is_subset(seed, s) || !testutil::median_stable(pre, s)) continue;
      REQUIRE(is_subset(got, s));
    }
  }

  // a needed median can be absent: three points with no betweenness at all
  FinitePretree anti({0, 1, 2}, {});
  REQUIRE(check_pretree_axioms(anti).pass());
  try {
    median_closure(anti, {0, 1, 2});
    FAIL("expected NotMedianError");
  } catch (const NotMedianError& e) {
    REQUIRE(PointSet{e.x, e.y, e.z} == PointSet{0, 1, 2});
  }
}

TEST_CASE("closed intervals with a common non-terminal extremity intersect in an interval") {
  SplitMix64 rng(31);
  for (int i = 0; i < 20; ++i) {
    auto t = testutil::random_tree(rng, rng.range(3, 9));
    auto pre = testutil::pretree_of(t);
    auto dec = terminal_decomposition(pre);
    for (PointId tt : dec.interior)
      for (PointId a : pre.points())
        for (PointId b : pre.points()) {
          PointSet meet = set_intersection(interval(pre, tt, a), interval(pre, tt, b));
          auto m = median(pre, tt, a, b);
          REQUIRE(m.has_value());
          REQUIRE(meet == interval(pre, tt, *m));
          // triple intersections stay intervals with extremity t as well
          for (PointId c : pre.points()) {
            PointSet meet3 = set_intersection(meet, interval(pre, tt, c));
            auto m2 = median(pre, tt, *m, c);
            REQUIRE(m2.has_value());
            REQUIRE(meet3 == interval(pre, tt, *m2));
          }
        }
  }
}

TEST_CASE("segments concatenate when they meet in a single point") {
  SplitMix64 rng(37);
  for (int i = 0; i < 30; ++i) {
    auto t = testutil::random_tree(rng, rng.range(2, 9));
    auto pre = testutil::pretree_of(t);
    for (PointId a : pre.points())
      for (PointId q : pre.points())
        for (PointId r : pre.points()) {
          if (set_intersection(interval(pre, a, q), interval(pre, q, r)) != PointSet{q})
            continue;
          REQUIRE(interval(pre, a, r) ==
                  set_union(interval(pre, a, q), interval(pre, q, r)));
        }
  }
}

TEST_CASE("single-triple mutations break an axiom or change an interval") {
  SplitMix64 rng(41);
  for (int i = 0; i < 60; ++i) {
    auto t = testutil::random_tree(rng, rng.range(3, 9));
    auto triples = testutil::oracle_triples(t);
    PointSet pts;
    for (int v = 0; v < t.n; ++v) pts.push_back(v);
    FinitePretree base(pts, triples);

    auto mutated = triples;
    if (!triples.empty() && rng.coin()) {
      mutated.erase(mutated.begin() + static_cast<long>(rng.below(mutated.size())));
    } else {
      BetweenTriple extra{rng.range(0, t.n - 1), rng.range(0, t.n - 1), rng.range(0, t.n - 1)};
      bool present = false;
      for (const auto& tr : triples) present = present || tr == extra;
      if (present) continue;
      mutated.push_back(extra);
    }
    FinitePretree changed(pts, mutated);

    bool axiom_broken = !check_pretree_axioms(changed).pass();
    bool interval_changed = false;
    for (int x = 0; x < t.n && !interval_changed; ++x)
      for (int y = 0; y < t.n && !interval_changed; ++y)
        if (interval(base, x, y) != interval(changed, x, y)) interval_changed = true;
    REQUIRE((axiom_broken || interval_changed));
  }
}

TEST_CASE("pretree text format round trip") {
  std::string text = "pretree 3\nb 1 0 2\nb 1 2 0\n";
  std::istringstream in(text);
  FinitePretree t = parse_pretree(in);
  REQUIRE(t.size() == 3);
  REQUIRE(t.between(1, 0, 2));
  REQUIRE(format_pretree(t) == text);

  std::istringstream bad("pretree 2\nb 0 1 7\n");
  REQUIRE_THROWS_AS(parse_pretree(bad), StructuralError);
  std::istringstream nohdr("b 0 1 2\n");
  REQUIRE_THROWS_AS(parse_pretree(nohdr), StructuralError);
}

TEST_CASE("pretree maps validate betweenness preservation") {
  auto p = path3();
  // the flip of the path is an automorphism
  PretreeMap flip(p, {std::optional<PointId>(2), std::optional<PointId>(1),
                      std::optional<PointId>(0)},
                  "flip");
  REQUIRE(flip.total_bijection());
  REQUIRE(flip.apply(0) == 2);
  auto back = flip.inverse();
  REQUIRE(back.apply(2) == 0);

  // swapping an endpoint with the middle breaks betweenness
  REQUIRE_THROWS_AS(PretreeMap(p, {std::optional<PointId>(1), std::optional<PointId>(0),
                                   std::optional<PointId>(2)},
                               "bad"),
                    StructuralError);
}
