#pragma once

#include "treelab/errors.hpp"
#include "treelab/gf.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace treelab {

// Explicit element table of a small finite group with canonical keys,
// multiplication, inverses and the conjugacy-class partition (orbits under
// conjugation by the generating set). Elements are indexed in closure
// discovery order, so identical inputs give identical tables.
class FiniteGroupTable {
 public:
  enum class Rep { Matrix, Perm };

  int size() const { return static_cast<int>(keys_.size()); }
  int identity() const { return 0; }

  int mul(int i, int j) const {
    if (rep_ == Rep::Matrix) return index_of_key((mats_[i] * mats_[j]).key());
    const auto &a = perms_[i], &b = perms_[j];
    std::vector<int> c(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) c[k] = a[b[k]];
    return index_of_key(perm_key(c));
  }

  int inv(int i) const { return inv_[i]; }
  int class_of(int i) const { return cls_[i]; }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  const std::string& key(int i) const { return keys_[i]; }

  int index_of_key(const std::string& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) throw StructuralError("element not in the group table");
    return it->second;
  }

  std::optional<int> find_key(const std::string& k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const GfMatrix& matrix(int i) const {
    if (rep_ != Rep::Matrix) throw PreconditionError("not a matrix group table");
    return mats_[i];
  }

  std::string describe(int i) const {
    if (rep_ == Rep::Matrix) return mats_[i].str();
    std::string s;
    for (std::size_t k = 0; k < perms_[i].size(); ++k) {
      if (k) s += ",";
      s += std::to_string(perms_[i][k]);
    }
    return s;
  }

  // the class of the inverses of a class
  int inverse_class(int class_id) const { return cls_[inv_[classes_[class_id].front()]]; }

  static std::string perm_key(const std::vector<int>& p) {
    std::string k;
    k.reserve(p.size());
    for (int x : p) k.push_back(static_cast<char>(x));
    return k;
  }

  static FiniteGroupTable from_matrices(std::vector<GfMatrix> gens, std::size_t cap) {
    if (gens.empty()) throw PreconditionError("group table needs generators");
    FiniteGroupTable t;
    t.rep_ = Rep::Matrix;
    std::sort(gens.begin(), gens.end(),
              [](const GfMatrix& a, const GfMatrix& b) { return a.key() < b.key(); });
    GfMatrix id = GfMatrix::identity(gens.front().n(), gens.front().p());
    t.mats_.push_back(id);
    t.keys_.push_back(id.key());
    t.index_[id.key()] = 0;
    std::deque<int> work{0};
    while (!work.empty()) {
      int i = work.front();
      work.pop_front();
      for (const auto& g : gens) {
        GfMatrix m = t.mats_[i] * g;
        std::string k = m.key();
        if (t.index_.count(k)) continue;
        if (t.keys_.size() >= cap) throw PreconditionError("group order exceeds the cap");
        int id2 = static_cast<int>(t.keys_.size());
        t.index_[k] = id2;
        t.keys_.push_back(k);
        t.mats_.push_back(std::move(m));
        work.push_back(id2);
      }
    }
    std::vector<int> gen_idx;
    for (const auto& g : gens) gen_idx.push_back(t.index_of_key(g.key()));
    t.finish(gen_idx);
    return t;
  }

  static FiniteGroupTable from_permutations(std::vector<std::vector<int>> gens,
                                            std::size_t cap) {
    if (gens.empty()) throw PreconditionError("group table needs generators");
    FiniteGroupTable t;
    t.rep_ = Rep::Perm;
    std::sort(gens.begin(), gens.end());
    std::vector<int> id(gens.front().size());
    for (std::size_t k = 0; k < id.size(); ++k) id[k] = static_cast<int>(k);
    t.perms_.push_back(id);
    t.keys_.push_back(perm_key(id));
    t.index_[t.keys_[0]] = 0;
    std::deque<int> work{0};
    while (!work.empty()) {
      int i = work.front();
      work.pop_front();
      for (const auto& g : gens) {
        std::vector<int> c(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) c[k] = t.perms_[i][g[k]];
        std::string key = perm_key(c);
        if (t.index_.count(key)) continue;
        if (t.keys_.size() >= cap) throw PreconditionError("group order exceeds the cap");
        int id2 = static_cast<int>(t.keys_.size());
        t.index_[key] = id2;
        t.keys_.push_back(key);
        t.perms_.push_back(std::move(c));
        work.push_back(id2);
      }
    }
    std::vector<int> gen_idx;
    for (const auto& g : gens) gen_idx.push_back(t.index_of_key(perm_key(g)));
    t.finish(gen_idx);
    return t;
  }

 private:
  void finish(const std::vector<int>& gen_idx) {
    const int n = size();
    inv_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      if (rep_ == Rep::Matrix)
        inv_[i] = index_of_key(mats_[i].inverse().key());
      else {
        std::vector<int> inv(perms_[i].size());
        for (std::size_t k = 0; k < perms_[i].size(); ++k) inv[perms_[i][k]] = static_cast<int>(k);
        inv_[i] = index_of_key(perm_key(inv));
      }
    }
    // conjugacy classes: orbits of conjugation by the generators
    cls_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      if (cls_[i] >= 0) continue;
      int cid = static_cast<int>(classes_.size());
      classes_.emplace_back();
      std::deque<int> work{i};
      cls_[i] = cid;
      while (!work.empty()) {
        int x = work.front();
        work.pop_front();
        classes_[cid].push_back(x);
        for (int g : gen_idx) {
          int y = mul(mul(g, x), inv_[g]);
          if (cls_[y] < 0) {
            cls_[y] = cid;
            work.push_back(y);
          }
        }
      }
      std::sort(classes_[cid].begin(), classes_[cid].end());
    }
  }

  Rep rep_ = Rep::Matrix;
  std::vector<GfMatrix> mats_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> inv_, cls_;
  std::vector<std::vector<int>> classes_;
};

// SL(n, p) from its elementary transvections.
inline FiniteGroupTable build_group_table_sl(int n, std::uint32_t p,
                                             std::size_t cap = 1'000'000) {
  if (n < 2) throw PreconditionError("sl table needs n >= 2");
  PrimeField f(p);
  std::vector<GfMatrix> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::uint32_t a = 1; a < p; ++a) {
        GfMatrix m = GfMatrix::identity(n, p);
        m.at(i, j) = a;
        gens.push_back(m);
      }
    }
  return FiniteGroupTable::from_matrices(std::move(gens), cap);
}

// Symmetric group on m letters.
inline FiniteGroupTable build_group_table_permutations(int m, std::size_t cap = 1'000'000) {
  if (m < 2) throw PreconditionError("permutation table needs m >= 2");
  std::vector<int> swap01(m), cycle(m);
  for (int k = 0; k < m; ++k) {
    swap01[k] = k;
    cycle[k] = (k + 1) % m;
  }
  std::swap(swap01[0], swap01[1]);
  return FiniteGroupTable::from_permutations({swap01, cycle}, cap);
}

inline FiniteGroupTable build_group_table_from_elements(std::vector<GfMatrix> gens,
                                                        std::size_t cap = 1'000'000) {
  return FiniteGroupTable::from_matrices(std::move(gens), cap);
}

// ---- paths inside a conjugacy class -------------------------------------------

// Adjacency of the class graph: a ~ b when some signed product a^e b^t is
// conjugate into the class or its inverse class.
inline std::optional<std::pair<int, int>> xpath_adjacent(const FiniteGroupTable& t,
                                                         int class_id, int a, int b) {
  const int target1 = class_id;
  const int target2 = t.inverse_class(class_id);
  for (int eps : {1, -1})
    for (int tau : {1, -1}) {
      int x = eps == 1 ? a : t.inv(a);
      int y = tau == 1 ? b : t.inv(b);
      int c = t.class_of(t.mul(x, y));
      if (c == target1 || c == target2) return std::make_pair(eps, tau);
    }
  return std::nullopt;
}

struct TableXPath {
  bool connected = false;
  std::vector<int> path;                      // element indices, from .. to
  std::vector<std::pair<int, int>> signs;     // per consecutive pair
};

// Shortest path (by element count) inside the class, deterministic
// tie-breaking by element index.
inline TableXPath bfs_xpath(const FiniteGroupTable& t, int class_id, int from, int to) {
  if (t.class_of(from) != class_id || t.class_of(to) != class_id)
    throw PreconditionError("bfs_xpath: endpoints must lie in the class");
  TableXPath res;
  if (from == to) {
    res.connected = true;
    res.path = {from};
    return res;
  }
  const auto& members = t.classes()[class_id];
  std::unordered_map<int, int> parent{{from, from}};
  std::deque<int> work{from};
  while (!work.empty() && !parent.count(to)) {
    int x = work.front();
    work.pop_front();
    for (int y : members) {
      if (parent.count(y)) continue;
      if (xpath_adjacent(t, class_id, x, y)) {
        parent[y] = x;
        work.push_back(y);
      }
    }
  }
  if (!parent.count(to)) return res;
  std::vector<int> rev{to};
  while (rev.back() != from) rev.push_back(parent[rev.back()]);
  std::reverse(rev.begin(), rev.end());
  res.connected = true;
  res.path = std::move(rev);
  for (std::size_t i = 0; i + 1 < res.path.size(); ++i)
    res.signs.push_back(*xpath_adjacent(t, class_id, res.path[i], res.path[i + 1]));
  return res;
}

struct TableXPathCheck {
  bool ok = false;
  std::vector<std::pair<int, int>> signs;
  int failed_at = -1;
};

inline TableXPathCheck is_x_path_table(const FiniteGroupTable& t, int class_id,
                                       const std::vector<int>& seq) {
  TableXPathCheck res;
  if (seq.empty()) return res;
  for (int x : seq)
    if (t.class_of(x) != class_id) return res;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    auto adj = xpath_adjacent(t, class_id, seq[i], seq[i + 1]);
    if (!adj) {
      res.failed_at = static_cast<int>(i);
      return res;
    }
    res.signs.push_back(*adj);
  }
  res.ok = true;
  return res;
}

}  // namespace treelab
