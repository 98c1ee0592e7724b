#pragma once

#include "treelab/errors.hpp"
#include "treelab/tree_model.hpp"

#include <deque>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

namespace treelab {

// Lazily generated infinite tree: a root label, a deterministic neighbor
// rule, and an expansion bound. The only gateway from infinite models to
// finite checks is materialize_ball.
struct LazyTree {
  std::string root;
  std::function<std::vector<std::string>(const std::string&)> neighbors;
  int radius_bound = std::numeric_limits<int>::max();
};

struct MaterializedBall {
  MetricTree tree;  // unit edge lengths
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> ids;
  int radius = 0;
  std::vector<int> depths;  // edge distance from the center
};

// All points at tree distance <= radius from the center. Vertex ids are
// assigned in breadth-first order with lexicographically sorted neighbor
// lists, so the result is deterministic.
inline MaterializedBall materialize_ball(const LazyTree& lt, const std::string& center,
                                         int radius) {
  if (radius < 0) throw PreconditionError("materialize_ball: negative radius");
  if (radius > lt.radius_bound)
    throw PreconditionError("materialize_ball: radius exceeds declared bound");
  std::vector<std::string> labels{center};
  std::unordered_map<std::string, int> ids{{center, 0}};
  std::vector<int> depths{0};
  std::vector<MetricTree::Edge> edges;
  std::deque<int> work{0};
  while (!work.empty()) {
    int v = work.front();
    work.pop_front();
    if (depths[v] == radius) continue;
    auto nbs = lt.neighbors(labels[v]);
    std::sort(nbs.begin(), nbs.end());
    for (const auto& nb : nbs) {
      auto it = ids.find(nb);
      int id;
      if (it == ids.end()) {
        id = static_cast<int>(labels.size());
        labels.push_back(nb);
        ids.emplace(nb, id);
        depths.push_back(depths[v] + 1);
        work.push_back(id);
      } else {
        id = it->second;
      }
      if (id > v) edges.push_back({v, id, Rational(1)});
    }
  }
  std::vector<PointId> vs;
  for (std::size_t i = 0; i < labels.size(); ++i) vs.push_back(static_cast<int>(i));
  MaterializedBall ball{MetricTree(std::move(vs), std::move(edges)), std::move(labels),
                        std::move(ids), radius, std::move(depths)};
  return ball;
}

// Star with `arms` infinite unit-length rays. Labels: "c", "<arm>:<k>".
inline LazyTree spider_lazy(int arms) {
  if (arms < 3) throw PreconditionError("spider needs at least 3 arms");
  LazyTree lt;
  lt.root = "c";
  lt.neighbors = [arms](const std::string& label) {
    std::vector<std::string> out;
    if (label == "c") {
      for (int i = 1; i <= arms; ++i) out.push_back(std::to_string(i) + ":1");
      return out;
    }
    auto colon = label.find(':');
    int arm = std::stoi(label.substr(0, colon));
    int k = std::stoi(label.substr(colon + 1));
    out.push_back(k == 1 ? std::string("c") : std::to_string(arm) + ":" + std::to_string(k - 1));
    out.push_back(std::to_string(arm) + ":" + std::to_string(k + 1));
    return out;
  };
  return lt;
}

}  // namespace treelab
