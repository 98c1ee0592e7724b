#include "treelab/ends.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace treelab;

namespace {

EndContext line_ctx(long g_shift = 2, long window = 64) {
  return EndContext{AffineMap::translation(rat(g_shift)), rat(0), rat(-window), rat(window)};
}

std::vector<AffineMap> with_inverses(std::vector<AffineMap> gens) {
  const std::size_t n = gens.size();
  for (std::size_t i = 0; i < n; ++i) gens.push_back(gens[i].inverse());
  return gens;
}

}  // namespace

TEST_CASE("conjugated action on the axis") {
  auto ctx = line_ctx();
  // commuting translations: the action is plain application
  REQUIRE(star_action(ctx, AffineMap::translation(rat(3)), rat(0)) == 3);
  // the identity fixes everything, like any pointwise end fixer
  REQUIRE(star_action(ctx, AffineMap{}, rat(5)) == 5);
  // the base depth does not matter
  SplitMix64 rng(401);
  for (int i = 0; i < 50; ++i) {
    AffineMap h = AffineMap::translation(rat(rng.range(-6, 6)));
    Rational c = rat(rng.range(-10, 10));
    REQUIRE(star_action(ctx, h, c) == star_action(ctx, h, c, 3));
  }
  // decreasing maps do not stabilize this end
  REQUIRE_THROWS_AS(star_action(ctx, AffineMap{rat(-1), rat(0)}, rat(0)), PreconditionError);
  // tiny windows are reported
  EndContext tiny{AffineMap::translation(rat(2)), rat(0), rat(-3), rat(3)};
  REQUIRE_THROWS_AS(star_action(tiny, AffineMap::translation(rat(5)), rat(2)),
                    WindowExhausted);
}

TEST_CASE("nu maps the end stabilizer onto the axis orbit") {
  auto ctx = line_ctx();
  // g itself lands one translation length above the base point
  REQUIRE(nu(ctx, ctx.g) == 2);

  // words in +2, +3 of length <= 4 reach every integer in a window
  auto words = affine_words(
      with_inverses({AffineMap::translation(rat(2)), AffineMap::translation(rat(3))}), 4);
  std::set<Rational> image;
  for (const auto& h : words) image.insert(nu(ctx, h));
  for (int k = -8; k <= 8; ++k) REQUIRE(image.count(rat(k)) == 1);

  // the action identity nu(h h') = h *_g nu(h')
  SplitMix64 rng(409);
  for (int i = 0; i < 100; ++i) {
    const AffineMap& h = words[rng.below(words.size())];
    const AffineMap& h2 = words[rng.below(words.size())];
    try {
      REQUIRE(nu(ctx, h.after(h2)) == star_action(ctx, h, nu(ctx, h2)));
    } catch (const WindowExhausted&) {
    }
  }
}

TEST_CASE("coset order") {
  auto ctx = line_ctx();
  auto plus2 = AffineMap::translation(rat(2));
  auto plus3 = AffineMap::translation(rat(3));
  REQUIRE(coset_compare(ctx, plus2, plus3).verdict == CosetOrder::Less);
  REQUIRE(coset_compare(ctx, plus3, plus2).verdict == CosetOrder::Greater);
  REQUIRE(coset_compare(ctx, plus3, plus3).verdict == CosetOrder::Equivalent);

  // ordered-group shadow on all generator words up to length 3; failures
  // are counted so the hot loop stays free of per-assertion overhead
  auto words = affine_words(with_inverses({plus2, plus3}), 3);
  long violations = 0;
  for (const auto& a : words)
    for (const auto& b : words) {
      auto ab = coset_compare(ctx, a, b).verdict;
      auto ba = coset_compare(ctx, b, a).verdict;
      // totality and antisymmetry up to equivalence
      if (ab == CosetOrder::Less && ba != CosetOrder::Greater) ++violations;
      if (ab == CosetOrder::Equivalent && ba != CosetOrder::Equivalent) ++violations;
      // translation invariance and transitivity
      for (const auto& c : words) {
        if (coset_compare(ctx, c.after(a), c.after(b)).verdict != ab) ++violations;
        auto bc = coset_compare(ctx, b, c).verdict;
        if (ab == CosetOrder::Less && bc == CosetOrder::Less &&
            coset_compare(ctx, a, c).verdict != CosetOrder::Less)
          ++violations;
      }
    }
  REQUIRE(violations == 0);

  // nu is order preserving
  for (const auto& a : words)
    for (const auto& b : words) {
      auto v = coset_compare(ctx, a, b).verdict;
      if (v == CosetOrder::Less) REQUIRE(nu(ctx, a) < nu(ctx, b));
      if (v == CosetOrder::Equivalent) REQUIRE(nu(ctx, a) == nu(ctx, b));
    }
}

TEST_CASE("every sampled element is dominated by a power of g") {
  auto ctx = line_ctx();
  auto words = affine_words(
      with_inverses({AffineMap::translation(rat(2)), AffineMap::translation(rat(3))}), 3);
  for (const auto& h : words) {
    bool dominated = false;
    AffineMap gn{};
    for (int n = 1; n <= 16 && !dominated; ++n) {
      gn = ctx.g.after(gn);
      dominated = coset_compare(ctx, h, gn).verdict == CosetOrder::Less;
    }
    REQUIRE(dominated);
  }
}

TEST_CASE("spacing of axis orbit samples") {
  // words in +2, +3: the step collapses to 1
  auto ctx = line_ctx();
  auto words = affine_words(
      with_inverses({AffineMap::translation(rat(2)), AffineMap::translation(rat(3))}), 4);
  std::vector<Rational> image;
  for (const auto& h : words) image.push_back(nu(ctx, h));
  auto dc = dense_or_cyclic(image, rat(1, 1024));
  REQUIRE(dc.kind == DenseOrCyclic::Kind::Cyclic);
  REQUIRE(dc.value == 1);

  // negative powers of two shrink below any fixed resolution
  std::vector<Rational> halving;
  for (int k = 0; k <= 8; ++k) halving.push_back(rat(1, 1 << k));
  auto dd = dense_or_cyclic(halving, rat(1, 256));
  REQUIRE(dd.kind == DenseOrCyclic::Kind::Dense);
  REQUIRE(dd.value == rat(1, 256));

  // a single generator keeps its own step
  std::vector<Rational> fives{rat(-5), rat(0), rat(5), rat(10)};
  auto df = dense_or_cyclic(fives, rat(1, 1024));
  REQUIRE(df.kind == DenseOrCyclic::Kind::Cyclic);
  REQUIRE(df.value == 5);

  REQUIRE(dense_or_cyclic({rat(0), rat(1)}, rat(1, 4)).kind ==
          DenseOrCyclic::Kind::Inconclusive);

  // when a minimal gap exists, group samples make every gap a multiple of it
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  for (std::size_t i = 0; i + 1 < image.size(); ++i) {
    Rational gap = image[i + 1] - image[i];
    REQUIRE(denominator(Rational(gap / dc.value)) == 1);
  }
}

TEST_CASE("pushing points into the end half-line") {
  auto ctx = line_ctx();
  std::vector<AffineMap> gens = with_inverses({AffineMap::translation(rat(2))});
  // already inside: the identity suffices
  auto rep = e_contractible_line(ctx, {rat(-3), rat(0)}, gens, 2);
  REQUIRE(rep.pass());
  // the axis window is swept by powers of g
  auto rep2 = e_contractible_line(ctx, {rat(6), rat(8)}, gens, 5);
  REQUIRE(rep2.pass());
  // bounded search reports what it could not reach
  auto rep3 = e_contractible_line(ctx, {rat(30)}, gens, 2);
  REQUIRE_FALSE(rep3.pass());
  REQUIRE(rep3.unreached == std::vector<Rational>{rat(30)});
}

TEST_CASE("free-group contraction toward the a-ray end") {
  // points on the a-ray are already there; the identity certifies
  auto rep = e_contractible_f2({"", "a", "aa"}, 2, 10);
  REQUIRE(rep.pass());
  REQUIRE(rep.certified_words >= 1);

  // ball vertices: bounded search, reachability reported per point
  std::vector<f2::Word> ball_pts = f2::all_words(2);
  auto rep2 = e_contractible_f2(ball_pts, 4, 12);
  // the a-side of the ball contracts; some b-side points may be unreached
  for (const f2::Word& w : {f2::Word(""), f2::Word("a"), f2::Word("aa")}) {
    bool unreached = false;
    for (const auto& u : rep2.unreached) unreached = unreached || u == w;
    REQUIRE_FALSE(unreached);
  }
}
