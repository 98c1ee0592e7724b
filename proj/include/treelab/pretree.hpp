#pragma once

#include "treelab/errors.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace treelab {

using PointId = int;
// Sorted, duplicate-free.
using PointSet = std::vector<PointId>;

inline PointSet normalized(PointSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool set_contains(const PointSet& s, PointId p) {
  return std::binary_search(s.begin(), s.end(), p);
}

inline PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline PointSet set_difference(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const PointSet& a, const PointSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// (y; x, z): y lies strictly between x and z.
struct BetweenTriple {
  PointId y, x, z;
  friend bool operator==(const BetweenTriple&, const BetweenTriple&) = default;
  friend auto operator<=>(const BetweenTriple&, const BetweenTriple&) = default;
};

// A finite point set with an explicit ternary betweenness relation.
// The relation is stored extensionally and is not required to satisfy any
// axioms; check_pretree_axioms decides that. Immutable after construction.
class FinitePretree {
 public:
  FinitePretree(PointSet points, const std::vector<BetweenTriple>& triples)
      : pts_(normalized(std::move(points))) {
    if (pts_.empty()) throw StructuralError("pretree needs at least one point");
    for (std::size_t i = 0; i < pts_.size(); ++i) idx_[pts_[i]] = static_cast<int>(i);
    const std::size_t n = pts_.size();
    rel_.assign(n * n * n, false);
    for (const auto& t : triples) {
      int iy = index_checked(t.y), ix = index_checked(t.x), iz = index_checked(t.z);
      rel_[(static_cast<std::size_t>(iy) * n + ix) * n + iz] = true;
    }
  }

  const PointSet& points() const { return pts_; }
  int size() const { return static_cast<int>(pts_.size()); }
  bool contains(PointId p) const { return idx_.count(p) != 0; }

  bool between(PointId y, PointId x, PointId z) const {
    const std::size_t n = pts_.size();
    return rel_[(static_cast<std::size_t>(index_checked(y)) * n + index_checked(x)) * n +
                index_checked(z)];
  }

  std::vector<BetweenTriple> triples() const {
    std::vector<BetweenTriple> out;
    const std::size_t n = pts_.size();
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t ix = 0; ix < n; ++ix)
        for (std::size_t iz = 0; iz < n; ++iz)
          if (rel_[(iy * n + ix) * n + iz])
            out.push_back({pts_[iy], pts_[ix], pts_[iz]});
    return out;
  }

  int index_checked(PointId p) const {
    auto it = idx_.find(p);
    if (it == idx_.end())
      throw StructuralError("unknown point id " + std::to_string(p));
    return it->second;
  }

 private:
  PointSet pts_;
  std::unordered_map<PointId, int> idx_;
  std::vector<bool> rel_;
};

enum class PretreeAxiom { A1, A2, A3, A4 };

inline const char* axiom_name(PretreeAxiom a) {
  switch (a) {
    case PretreeAxiom::A1: return "A1";
    case PretreeAxiom::A2: return "A2";
    case PretreeAxiom::A3: return "A3";
    case PretreeAxiom::A4: return "A4";
  }
  return "?";
}

struct AxiomViolation {
  PretreeAxiom axiom;
  std::vector<PointId> witness;
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  bool pass() const { return violations.empty(); }
};

// Exhaustive check of the four betweenness axioms. O(n^4).
inline AxiomReport check_pretree_axioms(const FinitePretree& t) {
  AxiomReport rep;
  const auto& P = t.points();
  // A1: never (y; x, x).
  for (PointId y : P)
    for (PointId x : P)
      if (t.between(y, x, x)) rep.violations.push_back({PretreeAxiom::A1, {y, x, x}});
  // A2: never both (y; x, z) and (z; x, y).
  for (PointId y : P)
    for (PointId x : P)
      for (PointId z : P)
        if (t.between(y, x, z) && t.between(z, x, y) && y < z)
          rep.violations.push_back({PretreeAxiom::A2, {y, x, z}});
  // A3: (y; x, z) iff (y; z, x).
  for (PointId y : P)
    for (PointId x : P)
      for (PointId z : P)
        if (t.between(y, x, z) && !t.between(y, z, x))
          rep.violations.push_back({PretreeAxiom::A3, {y, x, z}});
  // A4: (z; x, y) and z != w implies (z; x, w) or (z; y, w).
  for (PointId z : P)
    for (PointId x : P)
      for (PointId y : P) {
        if (!t.between(z, x, y)) continue;
        for (PointId w : P) {
          if (w == z) continue;
          if (!t.between(z, x, w) && !t.between(z, y, w))
            rep.violations.push_back({PretreeAxiom::A4, {z, x, y, w}});
        }
      }
  return rep;
}

enum class IntervalKind { Closed, Open, LeftOpen, RightOpen };

// [x,y], (x,y), (x,y] or [x,y). [x,x] = {x}.
inline PointSet interval(const FinitePretree& t, PointId x, PointId y,
                         IntervalKind kind = IntervalKind::Closed) {
  t.index_checked(x);
  t.index_checked(y);
  PointSet out;
  for (PointId z : t.points())
    if (t.between(z, x, y)) out.push_back(z);
  const bool with_x = kind == IntervalKind::Closed || kind == IntervalKind::RightOpen;
  const bool with_y = kind == IntervalKind::Closed || kind == IntervalKind::LeftOpen;
  if (with_x) out.push_back(x);
  if (with_y) out.push_back(y);
  return normalized(std::move(out));
}

// Every point lying in all three pairwise closed intervals.
inline PointSet all_medians(const FinitePretree& t, PointId x, PointId y, PointId z) {
  PointSet xy = interval(t, x, y);
  PointSet yz = interval(t, y, z);
  PointSet zx = interval(t, z, x);
  return set_intersection(set_intersection(xy, yz), zx);
}

// The median of the triple, or absent when the structure is not median there.
// When several candidates exist (non-pretree input) the least id is returned;
// uniqueness on valid pretrees is asserted by tests.
inline std::optional<PointId> median(const FinitePretree& t, PointId x, PointId y,
                                     PointId z) {
  PointSet m = all_medians(t, x, y, z);
  if (m.empty()) return std::nullopt;
  return m.front();
}

inline bool is_full(const FinitePretree& t, const PointSet& s) {
  for (PointId x : s)
    for (PointId y : s)
      for (PointId z : interval(t, x, y))
        if (!set_contains(s, z)) return false;
  return true;
}

inline bool is_linear(const FinitePretree& t, const PointSet& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      for (std::size_t k = j + 1; k < s.size(); ++k) {
        PointId x = s[i], y = s[j], z = s[k];
        if (!t.between(y, x, z) && !t.between(z, x, y) && !t.between(x, y, z))
          return false;
      }
  return true;
}

// Arc: nonempty, full and linear.
inline bool is_arc(const FinitePretree& t, const PointSet& s) {
  return !s.empty() && is_full(t, s) && is_linear(t, s);
}

struct TerminalDecomposition {
  PointSet interior;  // T0: points strictly between two others
  PointSet terminal;  // P
};

inline TerminalDecomposition terminal_decomposition(const FinitePretree& t) {
  TerminalDecomposition d;
  for (PointId p : t.points()) {
    bool interior = false;
    for (PointId x : t.points()) {
      for (PointId y : t.points())
        if (t.between(p, x, y)) {
          interior = true;
          break;
        }
      if (interior) break;
    }
    (interior ? d.interior : d.terminal).push_back(p);
  }
  return d;
}

// Minimal connecting segment between two full sets: extremities t in A and
// q in B with [t,q] meeting A only in t and B only in q.
struct Bridge {
  PointId t, q;
  PointSet interior;  // the open interval (t, q)
};

inline std::vector<std::pair<PointId, PointId>> bridge_candidates(
    const FinitePretree& tr, const PointSet& a, const PointSet& b) {
  std::vector<std::pair<PointId, PointId>> out;
  for (PointId t : a)
    for (PointId q : b) {
      PointSet seg = interval(tr, t, q);
      if (set_intersection(seg, a) == PointSet{t} &&
          set_intersection(seg, b) == PointSet{q})
        out.emplace_back(t, q);
    }
  return out;
}

inline Bridge bridge(const FinitePretree& tr, const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw PreconditionError("bridge: empty input set");
  if (!is_full(tr, a) || !is_full(tr, b))
    throw PreconditionError("bridge: inputs must be full sets");
  PointSet common = set_intersection(a, b);
  if (common.size() > 1)
    throw PreconditionError("bridge: inputs share more than one point");
  if (common.size() == 1) return Bridge{common[0], common[0], {}};
  auto cands = bridge_candidates(tr, a, b);
  if (cands.size() != 1)
    throw StructuralError("bridge endpoints not unique; got " +
                          std::to_string(cands.size()) + " candidates");
  auto [t, q] = cands.front();
  return Bridge{t, q, interval(tr, t, q, IntervalKind::Open)};
}

inline bool is_median_pretree(const FinitePretree& t) {
  const auto& P = t.points();
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i; j < P.size(); ++j)
      for (std::size_t k = j; k < P.size(); ++k)
        if (!median(t, P[i], P[j], P[k])) return false;
  return true;
}

// Least superset of `seed` closed under medians. Throws NotMedianError with
// the witness triple when a needed median is absent.
inline PointSet median_closure(const FinitePretree& t, const PointSet& seed) {
  PointSet s = normalized(seed);
  for (PointId p : s) t.index_checked(p);
  PointSet frontier = s;
  while (!frontier.empty()) {
    PointSet fresh;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        for (std::size_t k = j + 1; k < s.size(); ++k) {
          PointId x = s[i], y = s[j], z = s[k];
          if (!set_contains(frontier, x) && !set_contains(frontier, y) &&
              !set_contains(frontier, z))
            continue;
          auto m = median(t, x, y, z);
          if (!m) throw NotMedianError(x, y, z);
          if (!set_contains(s, *m) && !set_contains(fresh, *m)) {
            fresh.push_back(*m);
            fresh = normalized(std::move(fresh));
          }
        }
    s = set_union(s, fresh);
    frontier = std::move(fresh);
  }
  return s;
}

// A partial injective map of a pretree preserving betweenness where defined.
class PretreeMap {
 public:
  PretreeMap(const FinitePretree& base, std::vector<std::optional<PointId>> image_by_index,
             std::string label, bool check = true)
      : base_(&base), img_(std::move(image_by_index)), label_(std::move(label)) {
    if (img_.size() != static_cast<std::size_t>(base.size()))
      throw StructuralError("pretree map: image table size mismatch");
    std::vector<PointId> seen;
    for (const auto& v : img_)
      if (v) {
        base.index_checked(*v);
        seen.push_back(*v);
      }
    if (normalized(seen).size() != seen.size())
      throw StructuralError("pretree map: not injective");
    if (check) validate_betweenness();
  }

  static PretreeMap identity(const FinitePretree& base) {
    std::vector<std::optional<PointId>> img;
    for (PointId p : base.points()) img.emplace_back(p);
    return PretreeMap(base, std::move(img), "id", false);
  }

  const FinitePretree& base() const { return *base_; }
  const std::string& label() const { return label_; }

  std::optional<PointId> apply(PointId p) const { return img_[base_->index_checked(p)]; }

  bool total_bijection() const {
    for (const auto& v : img_)
      if (!v) return false;
    return true;
  }

  int defined_count() const {
    int n = 0;
    for (const auto& v : img_) n += v.has_value();
    return n;
  }

  PretreeMap inverse() const {
    std::vector<std::optional<PointId>> inv(img_.size());
    const auto& P = base_->points();
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i]) inv[base_->index_checked(*img_[i])] = P[i];
    return PretreeMap(*base_, std::move(inv), label_ + "^-1", false);
  }

  // this ∘ inner
  PretreeMap after(const PretreeMap& inner) const {
    if (base_ != inner.base_) throw StructuralError("pretree map: base mismatch");
    std::vector<std::optional<PointId>> comp(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) {
      auto mid = inner.img_[i];
      if (!mid) continue;
      comp[i] = img_[base_->index_checked(*mid)];
    }
    return PretreeMap(*base_, std::move(comp), label_ + "*" + inner.label_, false);
  }

 private:
  void validate_betweenness() const {
    const auto& P = base_->points();
    for (PointId y : P)
      for (PointId x : P)
        for (PointId z : P) {
          auto iy = apply(y), ix = apply(x), iz = apply(z);
          if (!iy || !ix || !iz) continue;
          if (base_->between(y, x, z) != base_->between(*iy, *ix, *iz))
            throw StructuralError("pretree map does not preserve betweenness at (" +
                                  std::to_string(y) + ";" + std::to_string(x) + "," +
                                  std::to_string(z) + ")");
        }
  }

  const FinitePretree* base_;
  std::vector<std::optional<PointId>> img_;
  std::string label_;
};

// ---- text format ----------------------------------------------------------
//
//   pretree <n>
//   b <y> <x> <z>      one line per between-triple; points are 0..n-1
//   r <x> <y>          optional flow pairs, consumed by the flow checker

struct ParsedPretreeFile {
  PointSet points;
  std::vector<BetweenTriple> triples;
  std::vector<std::pair<PointId, PointId>> flow_pairs;
};

inline ParsedPretreeFile parse_pretree_file(std::istream& in) {
  ParsedPretreeFile out;
  std::string line;
  bool header = false;
  int n = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (!header) {
      if (tok != "pretree") throw StructuralError("expected 'pretree <n>' header");
      if (!(ls >> n) || n <= 0) throw StructuralError("bad pretree point count");
      header = true;
      for (int i = 0; i < n; ++i) out.points.push_back(i);
      continue;
    }
    if (tok == "b") {
      BetweenTriple t{};
      if (!(ls >> t.y >> t.x >> t.z)) throw StructuralError("bad b-line: " + line);
      out.triples.push_back(t);
    } else if (tok == "r") {
      PointId x, y;
      if (!(ls >> x >> y)) throw StructuralError("bad r-line: " + line);
      out.flow_pairs.emplace_back(x, y);
    } else {
      throw StructuralError("unknown pretree line: " + line);
    }
  }
  if (!header) throw StructuralError("missing pretree header");
  return out;
}

inline FinitePretree parse_pretree(std::istream& in) {
  auto f = parse_pretree_file(in);
  return FinitePretree(f.points, f.triples);
}

inline std::string format_pretree(const FinitePretree& t) {
  std::ostringstream os;
  os << "pretree " << t.size() << "\n";
  auto ts = t.triples();
  std::sort(ts.begin(), ts.end());
  for (const auto& tr : ts) os << "b " << tr.y << " " << tr.x << " " << tr.z << "\n";
  return os.str();
}

}  // namespace treelab
