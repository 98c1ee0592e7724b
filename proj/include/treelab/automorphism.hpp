#pragma once

#include "treelab/errors.hpp"
#include "treelab/f2.hpp"
#include "treelab/tree_model.hpp"

#include <deque>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace treelab {

// A partial injective vertex map of a MetricTree sending edges to edges of
// equal length. On a connected domain this forces distance and betweenness
// preservation, which is what classification relies on.
class PartialTreeMap {
 public:
  PartialTreeMap(const MetricTree& tree, std::vector<std::optional<PointId>> image_by_vindex,
                 std::string label)
      : tree_(&tree), img_(std::move(image_by_vindex)), label_(std::move(label)) {
    if (img_.size() != tree.vertices().size())
      throw StructuralError("tree map: image table size mismatch");
    std::vector<PointId> seen;
    for (const auto& v : img_)
      if (v) {
        tree.vindex(*v);
        seen.push_back(*v);
      }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
      throw StructuralError("tree map: not injective");
    for (const auto& e : tree.edges()) {
      auto ia = apply(e.a), ib = apply(e.b);
      if (!ia || !ib) continue;
      int ie = tree.edge_index(*ia, *ib);
      if (ie < 0)
        throw StructuralError("tree map: edge (" + std::to_string(e.a) + "," +
                              std::to_string(e.b) + ") has no image edge");
      if (tree.edges()[ie].length != e.length)
        throw StructuralError("tree map: edge image has different length");
    }
  }

  static PartialTreeMap identity(const MetricTree& tree) {
    std::vector<std::optional<PointId>> img;
    for (PointId v : tree.vertices()) img.emplace_back(v);
    return PartialTreeMap(tree, std::move(img), "id");
  }

  const MetricTree& tree() const { return *tree_; }
  const std::string& label() const { return label_; }

  std::optional<PointId> apply(PointId v) const { return img_[tree_->vindex(v)]; }

  std::optional<TreePoint> apply(const TreePoint& p) const {
    if (p.is_vertex()) {
      auto iv = apply(p.v());
      if (!iv) return std::nullopt;
      return TreePoint::vertex(*iv);
    }
    auto ia = apply(p.ea()), ib = apply(p.eb());
    if (!ia || !ib) return std::nullopt;
    return TreePoint::on_edge(*tree_, *ia, *ib, p.offset());
  }

  PartialTreeMap inverse() const {
    std::vector<std::optional<PointId>> inv(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i]) inv[tree_->vindex(*img_[i])] = tree_->vertices()[i];
    return PartialTreeMap(*tree_, std::move(inv), label_ + "^-1");
  }

  // this ∘ inner
  PartialTreeMap after(const PartialTreeMap& inner) const {
    if (tree_ != inner.tree_) throw StructuralError("tree map: tree mismatch");
    std::vector<std::optional<PointId>> comp(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (inner.img_[i]) comp[i] = img_[tree_->vindex(*inner.img_[i])];
    return PartialTreeMap(*tree_, std::move(comp), label_ + "*" + inner.label_);
  }

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

  bool domain_connected() const {
    std::vector<int> domain;
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i]) domain.push_back(static_cast<int>(i));
    if (domain.empty()) return true;
    std::vector<bool> in_domain(img_.size(), false), seen(img_.size(), false);
    for (int i : domain) in_domain[i] = true;
    std::deque<int> work{domain.front()};
    seen[domain.front()] = true;
    std::size_t reached = 1;
    while (!work.empty()) {
      int v = work.front();
      work.pop_front();
      for (auto [nb, e] : tree_->adjacency(tree_->vertices()[v])) {
        int ib = tree_->vindex(nb);
        if (in_domain[ib] && !seen[ib]) {
          seen[ib] = true;
          ++reached;
          work.push_back(ib);
        }
      }
    }
    return reached == domain.size();
  }

 private:
  const MetricTree* tree_;
  std::vector<std::optional<PointId>> img_;
  std::string label_;
};

// Restriction of a word map to an F2 window; vertices whose image leaves the
// window stay undefined. The tree must outlive the returned map.
inline PartialTreeMap window_map(const MetricTree& tree, const std::vector<f2::Word>& labels,
                                 const std::unordered_map<f2::Word, int>& ids,
                                 const f2::Map& m) {
  std::vector<std::optional<PointId>> img(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = ids.find(m(labels[i]));
    if (it != ids.end()) img[i] = it->second;
  }
  return PartialTreeMap(tree, std::move(img), m.name);
}

inline PartialTreeMap window_map(const f2::Window& w, const f2::Map& m) {
  return window_map(w.tree, w.labels, w.ids, m);
}

// Translation by t on an integer path window with vertex ids = coordinates.
inline PartialTreeMap path_translation(const MetricTree& path, int t) {
  std::vector<std::optional<PointId>> img(path.vertices().size());
  for (std::size_t i = 0; i < path.vertices().size(); ++i) {
    PointId v = path.vertices()[i];
    if (path.has_vertex(v + t)) img[i] = v + t;
  }
  return PartialTreeMap(path, std::move(img), "translate:" + std::to_string(t));
}

// ---- text format ------------------------------------------------------------
//
//   perm            explicit mapping, one "m <id> <id>" line per vertex
//   rule <name> <params>
//
// Built-in rules: translate <t>, f2-leftmul <word>, f2-phi, f2-theta.

struct ParsedAutomorphism {
  enum class Kind { Perm, Rule } kind;
  std::vector<std::pair<PointId, PointId>> mapping;  // Perm
  std::string rule;                                  // Rule
  std::vector<std::string> params;
};

inline ParsedAutomorphism parse_automorphism_file(std::istream& in) {
  ParsedAutomorphism out{};
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (!header) {
      if (tok == "perm") {
        out.kind = ParsedAutomorphism::Kind::Perm;
      } else if (tok == "rule") {
        out.kind = ParsedAutomorphism::Kind::Rule;
        if (!(ls >> out.rule)) throw StructuralError("rule line needs a name");
        std::string p;
        while (ls >> p) out.params.push_back(p);
      } else {
        throw StructuralError("expected 'perm' or 'rule' header");
      }
      header = true;
      continue;
    }
    if (out.kind != ParsedAutomorphism::Kind::Perm)
      throw StructuralError("unexpected line after rule: " + line);
    if (tok != "m") throw StructuralError("unknown automorphism line: " + line);
    PointId from, to;
    if (!(ls >> from >> to)) throw StructuralError("bad m-line: " + line);
    out.mapping.emplace_back(from, to);
  }
  if (!header) throw StructuralError("missing automorphism header");
  return out;
}

inline PartialTreeMap perm_map(const MetricTree& tree,
                               const std::vector<std::pair<PointId, PointId>>& mapping,
                               const std::string& label = "perm") {
  std::vector<std::optional<PointId>> img(tree.vertices().size());
  for (auto [from, to] : mapping) {
    tree.vindex(to);
    img[tree.vindex(from)] = to;
  }
  return PartialTreeMap(tree, std::move(img), label);
}

}  // namespace treelab
