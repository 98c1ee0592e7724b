#pragma once

#include "treelab/actions.hpp"
#include "treelab/errors.hpp"
#include "treelab/f2.hpp"
#include "treelab/rational.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace treelab {

// Setting for end-stabilizer computations on the rational line: the end is
// the -infinity one, g is a fixed increasing map with positive displacement
// whose axis is the whole line, a0 a base point, and [lo, hi] the window on
// which evaluations are certified.
struct EndContext {
  AffineMap g;  // loxodromic toward +infinity
  Rational a0{0};
  Rational window_lo{-64}, window_hi{64};

  void validate() const {
    if (!(g.scale > 0)) throw PreconditionError("end context: g must be increasing");
    if (!(g(a0) > a0)) throw PreconditionError("end context: g must translate upward");
  }

  bool in_window(const Rational& x) const { return window_lo <= x && x <= window_hi; }
};

// Members of the end stabilizer act as increasing maps; anything else is
// rejected up front.
inline void require_end_member(const AffineMap& h) {
  if (!(h.scale > 0))
    throw PreconditionError("map does not stabilize the -infinity end");
}

// h *_g c: conjugate h down the end until its support is below a0, h(a0)
// and h^-1(a0), then act and come back. Independent of the chosen depth.
inline Rational star_action(const EndContext& ctx, const AffineMap& h, const Rational& c,
                            int extra_depth = 0) {
  ctx.validate();
  require_end_member(h);
  Rational bound = std::min({ctx.a0, h(ctx.a0), h.inverse()(ctx.a0)});
  AffineMap ginv = ctx.g.inverse();
  Rational x = c;
  int n0 = 0;
  if (!ctx.in_window(x)) throw WindowExhausted("star_action: point outside the window");
  while (!(x < bound)) {
    x = ginv(x);
    ++n0;
    if (!ctx.in_window(x))
      throw WindowExhausted("star_action: window exhausted before the base depth");
  }
  for (int i = 0; i < extra_depth; ++i) {
    x = ginv(x);
    if (!ctx.in_window(x)) throw WindowExhausted("star_action: extra depth leaves the window");
  }
  Rational y = h(x);
  if (!ctx.in_window(y)) throw WindowExhausted("star_action: image leaves the window");
  for (int i = 0; i < n0 + extra_depth; ++i) y = ctx.g(y);
  return y;
}

inline Rational nu(const EndContext& ctx, const AffineMap& h, int extra_depth = 0) {
  return star_action(ctx, h, ctx.a0, extra_depth);
}

// Coset order: h1 precedes h2 when h1 eventually lands strictly below h2
// toward the end; equal when they agree on the sampled half-line.
enum class CosetOrder { Less, Equivalent, Greater };

struct CosetOrderDatum {
  CosetOrder verdict;
  Rational witness;  // a point where the verdict is visible
};

inline CosetOrderDatum coset_compare(const EndContext& ctx, const AffineMap& h1,
                                     const AffineMap& h2) {
  ctx.validate();
  require_end_member(h1);
  require_end_member(h2);
  // Translations have a constant pointwise gap, so their verdict is
  // analytic; the sampled scan below covers everything else.
  if (h1.scale == 1 && h2.scale == 1) {
    if (h1.shift == h2.shift) return CosetOrderDatum{CosetOrder::Equivalent, ctx.a0};
    return CosetOrderDatum{h1.shift < h2.shift ? CosetOrder::Less : CosetOrder::Greater,
                           ctx.a0};
  }
  // Scan down the half-line until the maps disagree, then spot-check the
  // sign a few steps further; sustained agreement means one coset.
  constexpr int kAgreeSamples = 16;
  constexpr int kSpotChecks = 8;
  std::optional<CosetOrderDatum> found;
  int after = 0, agreed = 0;
  for (Rational t = ctx.a0; ctx.window_lo <= t; t -= 1) {
    Rational y1 = h1(t), y2 = h2(t);
    if (y1 == y2) {
      if (found) throw StructuralError("coset_compare: sign flips along the half-line");
      if (++agreed > kAgreeSamples) break;
      continue;
    }
    CosetOrder v = y1 < y2 ? CosetOrder::Less : CosetOrder::Greater;
    if (!found)
      found = CosetOrderDatum{v, t};
    else if (found->verdict != v)
      throw StructuralError("coset_compare: sign flips along the half-line");
    if (++after > kSpotChecks) break;
  }
  if (!found) return CosetOrderDatum{CosetOrder::Equivalent, ctx.a0};
  return *found;
}

// Verdict on the spacing of an orbit sample on the axis: a discrete sample
// certifies a minimal step; gaps at or below the resolution certify density
// relative to that bound. Fewer than 3 points decide nothing.
struct DenseOrCyclic {
  enum class Kind { Dense, Cyclic, Inconclusive } kind;
  Rational value{0};  // step (Cyclic) or the resolution used (Dense)
};

inline DenseOrCyclic dense_or_cyclic(std::vector<Rational> pts, const Rational& resolution) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {DenseOrCyclic::Kind::Inconclusive, 0};
  std::optional<Rational> min_gap;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Rational gap = pts[i + 1] - pts[i];
    if (!min_gap || gap < *min_gap) min_gap = gap;
  }
  if (*min_gap <= resolution) return {DenseOrCyclic::Kind::Dense, resolution};
  return {DenseOrCyclic::Kind::Cyclic, *min_gap};
}

// Enumerate all products of up to `bound` generators (inverses included by
// listing them among the generators).
inline std::vector<AffineMap> affine_words(const std::vector<AffineMap>& gens, int bound) {
  std::vector<AffineMap> out{AffineMap{}};
  std::size_t start = 0;
  for (int len = 1; len <= bound; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i)
      for (const auto& g : gens) out.push_back(g.after(out[i]));
    start = end;
  }
  return out;
}

struct LineContractReport {
  std::vector<Rational> unreached;
  bool pass() const { return unreached.empty(); }
};

// Every point of C must be pushed into (-inf, a0] by some word in the
// sampled end stabilizer; failure only means "not found at this bound".
inline LineContractReport e_contractible_line(const EndContext& ctx,
                                              const std::vector<Rational>& C,
                                              const std::vector<AffineMap>& gens, int bound) {
  ctx.validate();
  for (const auto& g : gens) require_end_member(g);
  auto words = affine_words(gens, bound);
  LineContractReport rep;
  for (const auto& c : C) {
    bool ok = false;
    for (const auto& w : words)
      if (!(w(c) > ctx.a0)) {
        ok = true;
        break;
      }
    if (!ok) rep.unreached.push_back(c);
  }
  return rep;
}

// F2 variant: the end is the a-ray from the identity; h is certified on the
// window when it maps deep a-powers one step up the ray.
struct F2ContractReport {
  std::vector<f2::Word> unreached;
  int certified_words = 0;
  bool pass() const { return unreached.empty(); }
};

inline F2ContractReport e_contractible_f2(const std::vector<f2::Word>& C, int word_bound,
                                          int window_m) {
  const auto& gens = f2::lab_generators();
  const f2::Word deep(static_cast<std::size_t>(window_m), 'a');
  const f2::Word deeper(static_cast<std::size_t>(window_m + 1), 'a');

  std::vector<std::vector<int>> seqs{{}};
  std::size_t start = 0;
  for (int len = 1; len <= word_bound; ++len) {
    std::size_t end = seqs.size();
    for (std::size_t i = start; i < end; ++i)
      for (std::size_t g = 0; g < gens.size(); ++g) {
        auto s = seqs[i];
        s.push_back(static_cast<int>(g));
        seqs.push_back(std::move(s));
      }
    start = end;
  }

  F2ContractReport rep;
  std::vector<std::size_t> certified;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    auto jd = f2::a_power_of(f2::apply_seq(gens, seqs[i], deep));
    auto jd1 = f2::a_power_of(f2::apply_seq(gens, seqs[i], deeper));
    if (jd && jd1 && *jd1 == *jd + 1) certified.push_back(i);
  }
  rep.certified_words = static_cast<int>(certified.size());
  for (const auto& c : C) {
    bool ok = false;
    for (std::size_t i : certified) {
      auto k = f2::a_power_of(f2::apply_seq(gens, seqs[i], c));
      if (k && *k >= 0) {
        ok = true;
        break;
      }
    }
    if (!ok) rep.unreached.push_back(c);
  }
  return rep;
}

}  // namespace treelab
