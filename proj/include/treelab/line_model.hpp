#pragma once

#include "treelab/rational.hpp"

#include <functional>

namespace treelab {

// Ordered point universe on the rationals with a designated base point and a
// membership predicate for a distinguished subset (an orbit, a lattice, ...).
// Betweenness is order betweenness; density is declared, not inferred.
struct LineModel {
  Rational a0{0};
  bool discrete = false;
  std::function<bool(const Rational&)> member = [](const Rational&) { return true; };
};

enum class Cmp { Less, Equal, Greater };

inline Cmp line_order_compare(const LineModel&, const Rational& x, const Rational& y) {
  if (x < y) return Cmp::Less;
  if (y < x) return Cmp::Greater;
  return Cmp::Equal;
}

}  // namespace treelab
