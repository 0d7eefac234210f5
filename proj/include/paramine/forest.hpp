#pragma once

// Random forest of CART-style trees over the 12 pair features.
//
// Each tree trains on its own seeded bootstrap sample; nodes pick the best
// Gini split over a random feature subset; leaves store the positive
// fraction. Growth stops at max_depth, a pure node, or fewer than two
// samples. Everything is seeded and ordered, so identical inputs produce
// byte-identical model files.
//
// A model scores a vector as the mean of the reached leaf values, summed in
// sorted order so the result is invariant to tree order in the file.
//
// Model file: versioned text, header (version, n_trees, max_depth,
// feature_subsample, seed, n_features) then per-tree node lists; doubles are
// serialized as hex floats so reloading reproduces identical scores.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "paramine/error.hpp"
#include "paramine/features.hpp"
#include "paramine/parallel.hpp"
#include "paramine/rng.hpp"

namespace paramine {

struct TreeNode {
  std::int32_t feature = -1;  // -1 = leaf
  double threshold = 0.0;     // go left when value <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  double leaf = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  double predict(const FeatureVector& fv) const {
    std::size_t at = 0;
    while (!nodes[at].is_leaf()) {
      const TreeNode& node = nodes[at];
      at = fv[static_cast<std::size_t>(node.feature)] <= node.threshold
               ? static_cast<std::size_t>(node.left)
               : static_cast<std::size_t>(node.right);
    }
    return nodes[at].leaf;
  }
};

struct ForestHyperparams {
  int n_trees = 100;
  int max_depth = 12;
  int feature_subsample = 4;

  void validate() const {
    if (n_trees < 1 || max_depth < 1 || feature_subsample < 1)
      throw ValidationError("forest hyperparameters must be positive");
  }
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestHyperparams hp;
  std::uint64_t training_seed = 0;
};

inline double score_pair(const ForestModel& model, const FeatureVector& fv) {
  std::vector<double> leaves;
  leaves.reserve(model.trees.size());
  for (const DecisionTree& tree : model.trees) leaves.push_back(tree.predict(fv));
  std::sort(leaves.begin(), leaves.end());
  double sum = 0.0;
  for (double v : leaves) sum += v;
  return sum / static_cast<double>(leaves.size());
}

namespace detail {

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = 0.0;  // weighted Gini of the two children
};

inline double gini(std::size_t pos, std::size_t n) {
  if (n == 0) return 0.0;
  double p = static_cast<double>(pos) / static_cast<double>(n);
  return 2.0 * p * (1.0 - p);
}

// Best split over the sampled features: minimal weighted child Gini, ties by
// lower feature index then lower threshold.
inline SplitChoice best_split(const std::vector<FeatureVector>& xs, const std::vector<int>& ys,
                              const std::vector<std::size_t>& idx,
                              const std::vector<std::size_t>& features) {
  SplitChoice best;
  std::vector<std::pair<double, int>> vals(idx.size());
  std::vector<std::size_t> order(features);
  std::sort(order.begin(), order.end());
  for (std::size_t f : order) {
    for (std::size_t k = 0; k < idx.size(); ++k)
      vals[k] = {xs[idx[k]][f], ys[idx[k]]};
    std::sort(vals.begin(), vals.end());
    std::size_t total_pos = 0;
    for (auto& [v, y] : vals) total_pos += static_cast<std::size_t>(y);
    std::size_t left_pos = 0;
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      left_pos += static_cast<std::size_t>(vals[k].second);
      if (vals[k].first == vals[k + 1].first) continue;  // split only between distinct values
      std::size_t left_n = k + 1, right_n = vals.size() - left_n;
      double w = (static_cast<double>(left_n) * gini(left_pos, left_n) +
                  static_cast<double>(right_n) * gini(total_pos - left_pos, right_n)) /
                 static_cast<double>(vals.size());
      double threshold = vals[k].first + (vals[k + 1].first - vals[k].first) / 2.0;
      if (!best.found || w < best.impurity ||
          (w == best.impurity && (f < best.feature || (f == best.feature && threshold < best.threshold)))) {
        best.found = true;
        best.feature = f;
        best.threshold = threshold;
        best.impurity = w;
      }
    }
  }
  return best;
}

inline std::int32_t grow_node(DecisionTree& tree, const std::vector<FeatureVector>& xs,
                              const std::vector<int>& ys, std::vector<std::size_t> idx, int depth,
                              const ForestHyperparams& hp, Rng& rng) {
  std::size_t pos = 0;
  for (std::size_t i : idx) pos += static_cast<std::size_t>(ys[i]);
  auto make_leaf = [&]() {
    TreeNode node;
    node.feature = -1;
    node.leaf = idx.empty() ? 0.0 : static_cast<double>(pos) / static_cast<double>(idx.size());
    tree.nodes.push_back(node);
    return static_cast<std::int32_t>(tree.nodes.size() - 1);
  };
  if (idx.size() < 2 || pos == 0 || pos == idx.size() || depth >= hp.max_depth) return make_leaf();

  // partial Fisher-Yates over the 12 feature indices
  std::array<std::size_t, kFeatureCount> pool;
  for (std::size_t i = 0; i < kFeatureCount; ++i) pool[i] = i;
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(hp.feature_subsample), kFeatureCount);
  std::vector<std::size_t> features(take);
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(kFeatureCount - i));
    std::swap(pool[i], pool[j]);
    features[i] = pool[i];
  }

  SplitChoice split = best_split(xs, ys, idx, features);
  if (!split.found) return make_leaf();

  std::vector<std::size_t> left_idx, right_idx;
  for (std::size_t i : idx)
    (xs[i][split.feature] <= split.threshold ? left_idx : right_idx).push_back(i);
  idx.clear();
  idx.shrink_to_fit();

  TreeNode node;
  node.feature = static_cast<std::int32_t>(split.feature);
  node.threshold = split.threshold;
  tree.nodes.push_back(node);
  std::int32_t self = static_cast<std::int32_t>(tree.nodes.size() - 1);
  std::int32_t left = grow_node(tree, xs, ys, std::move(left_idx), depth + 1, hp, rng);
  std::int32_t right = grow_node(tree, xs, ys, std::move(right_idx), depth + 1, hp, rng);
  tree.nodes[static_cast<std::size_t>(self)].left = left;
  tree.nodes[static_cast<std::size_t>(self)].right = right;
  return self;
}

}  // namespace detail

inline ForestModel train_forest(std::span<const FeatureVector> pos, std::span<const FeatureVector> neg,
                                const ForestHyperparams& hp, std::uint64_t seed, int workers = 1) {
  hp.validate();
  if (pos.empty() || neg.empty()) throw Error("train_forest: both classes must be non-empty");

  std::vector<FeatureVector> xs(pos.begin(), pos.end());
  xs.insert(xs.end(), neg.begin(), neg.end());
  std::vector<int> ys(pos.size(), 1);
  ys.resize(xs.size(), 0);

  ForestModel model;
  model.hp = hp;
  model.training_seed = seed;
  model.trees.resize(static_cast<std::size_t>(hp.n_trees));
  parallel_for(model.trees.size(), workers, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::size_t> idx(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) idx[i] = rng.below(xs.size());
    detail::grow_node(model.trees[t], xs, ys, std::move(idx), 0, hp, rng);
  });
  return model;
}

namespace detail {

inline std::string hex_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

inline double parse_hex_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw Error(where + ": bad float '" + s + "'");
  return v;
}

}  // namespace detail

inline constexpr const char* kForestMagic = "paramine-forest";
inline constexpr int kForestFormatVersion = 1;

inline void write_forest(const ForestModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << kForestMagic << ' ' << kForestFormatVersion << '\n';
  out << "n_trees " << model.hp.n_trees << '\n';
  out << "max_depth " << model.hp.max_depth << '\n';
  out << "feature_subsample " << model.hp.feature_subsample << '\n';
  out << "seed " << model.training_seed << '\n';
  out << "n_features " << kFeatureCount << '\n';
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const DecisionTree& tree = model.trees[t];
    out << "tree " << t << ' ' << tree.nodes.size() << '\n';
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf())
        out << "l " << detail::hex_double(node.leaf) << '\n';
      else
        out << "s " << node.feature << ' ' << detail::hex_double(node.threshold) << ' '
            << node.left << ' ' << node.right << '\n';
    }
  }
  if (!out) throw Error("write failed: " + path.string());
}

inline ForestModel read_forest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model: " + path.string());
  std::string where = path.string();
  auto next_line = [&](std::string& line) {
    if (!std::getline(in, line)) throw Error(where + ": truncated model file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  std::string line;
  next_line(line);
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kForestMagic) throw Error(where + ": not a forest model file");
    if (version != kForestFormatVersion)
      throw Error(where + ": unsupported model version " + std::to_string(version));
  }
  ForestModel model;
  auto read_header_int = [&](const char* key) {
    next_line(line);
    std::istringstream ss(line);
    std::string k;
    long long v = 0;
    ss >> k >> v;
    if (k != key) throw Error(where + ": expected header '" + key + "', got '" + k + "'");
    return v;
  };
  model.hp.n_trees = static_cast<int>(read_header_int("n_trees"));
  model.hp.max_depth = static_cast<int>(read_header_int("max_depth"));
  model.hp.feature_subsample = static_cast<int>(read_header_int("feature_subsample"));
  try {
    model.hp.validate();
  } catch (const Error& e) {
    throw Error(where + ": " + e.what());
  }
  model.training_seed = static_cast<std::uint64_t>(read_header_int("seed"));
  long long n_features = read_header_int("n_features");
  if (n_features != static_cast<long long>(kFeatureCount))
    throw Error(where + ": model expects " + std::to_string(n_features) + " features, this build has " +
                std::to_string(kFeatureCount));

  for (int t = 0; t < model.hp.n_trees; ++t) {
    next_line(line);
    std::istringstream ss(line);
    std::string key;
    long long index = 0, n_nodes = 0;
    ss >> key >> index >> n_nodes;
    if (key != "tree" || index != t) throw Error(where + ": expected 'tree " + std::to_string(t) + "'");
    DecisionTree tree;
    for (long long k = 0; k < n_nodes; ++k) {
      next_line(line);
      std::istringstream ns(line);
      std::string tag;
      ns >> tag;
      TreeNode node;
      if (tag == "l") {
        std::string v;
        ns >> v;
        node.feature = -1;
        node.leaf = detail::parse_hex_double(v, where);
        if (node.leaf < 0.0 || node.leaf > 1.0) throw Error(where + ": leaf value out of [0,1]");
      } else if (tag == "s") {
        std::string v;
        ns >> node.feature >> v >> node.left >> node.right;
        node.threshold = detail::parse_hex_double(v, where);
        if (node.feature < 0 || node.feature >= static_cast<std::int32_t>(kFeatureCount))
          throw Error(where + ": split feature index out of range");
        if (node.left < 0 || node.left >= n_nodes || node.right < 0 || node.right >= n_nodes)
          throw Error(where + ": split child index out of range");
      } else {
        throw Error(where + ": unknown node tag '" + tag + "'");
      }
      tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) throw Error(where + ": tree " + std::to_string(t) + " has no nodes");
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace paramine
