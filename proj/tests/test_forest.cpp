#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>

#include "paramine/forest.hpp"
#include "paramine/rng.hpp"
#include "testutil.hpp"

using namespace paramine;
namespace fs = std::filesystem;

namespace {

FeatureVector vec(double f0, Rng& rng) {
  FeatureVector fv;
  fv[0] = f0;
  for (std::size_t i = 1; i < kFeatureCount; ++i) fv[i] = rng.unit();
  return fv;
}

// pos: feature0 >= 0.8, neg: feature0 <= 0.2, everything else noise
std::pair<std::vector<FeatureVector>, std::vector<FeatureVector>> separable_set(std::size_t n,
                                                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> pos, neg;
  for (std::size_t i = 0; i < n; ++i) {
    pos.push_back(vec(0.8 + 0.2 * rng.unit(), rng));
    neg.push_back(vec(0.2 * rng.unit(), rng));
  }
  return {pos, neg};
}

}  // namespace

TEST_CASE("linearly separable toy set trains to perfect accuracy", "[forest]") {
  auto [pos, neg] = separable_set(60, 5);
  ForestModel model = train_forest(pos, neg, {8, 3, 4}, 42);
  for (const FeatureVector& fv : pos) CHECK(score_pair(model, fv) > 0.5);
  for (const FeatureVector& fv : neg) CHECK(score_pair(model, fv) < 0.5);
}

TEST_CASE("a single positive and negative are separated", "[forest]") {
  Rng rng(8);
  std::vector<FeatureVector> pos{vec(0.9, rng)}, neg{vec(0.1, rng)};
  ForestModel model = train_forest(pos, neg, {16, 4, 12}, 1);
  CHECK(score_pair(model, pos[0]) > 0.5);
  CHECK(score_pair(model, neg[0]) < 0.5);
}

TEST_CASE("same seed gives a byte-identical model file", "[forest]") {
  auto [pos, neg] = separable_set(40, 6);
  ForestModel a = train_forest(pos, neg, {16, 6, 4}, 77);
  ForestModel b = train_forest(pos, neg, {16, 6, 4}, 77);
  fs::path fa = fs::temp_directory_path() / "paramine-forest-a.model";
  fs::path fb = fs::temp_directory_path() / "paramine-forest-b.model";
  write_forest(a, fa);
  write_forest(b, fb);
  CHECK(testutil::slurp(fa) == testutil::slurp(fb));
  ForestModel c = train_forest(pos, neg, {16, 6, 4}, 78);
  fs::path fc = fs::temp_directory_path() / "paramine-forest-c.model";
  write_forest(c, fc);
  CHECK(testutil::slurp(fa) != testutil::slurp(fc));
}

TEST_CASE("worker count does not change the trained model", "[forest]") {
  auto [pos, neg] = separable_set(40, 9);
  ForestModel serial = train_forest(pos, neg, {12, 5, 4}, 3, 1);
  ForestModel parallel = train_forest(pos, neg, {12, 5, 4}, 3, 4);
  fs::path fa = fs::temp_directory_path() / "paramine-forest-w1.model";
  fs::path fb = fs::temp_directory_path() / "paramine-forest-w4.model";
  write_forest(serial, fa);
  write_forest(parallel, fb);
  CHECK(testutil::slurp(fa) == testutil::slurp(fb));
}

TEST_CASE("score is the mean of leaf values", "[forest]") {
  ForestModel model;
  model.hp.n_trees = 2;
  for (double leaf : {1.0, 0.0}) {
    DecisionTree tree;
    TreeNode node;
    node.feature = -1;
    node.leaf = leaf;
    tree.nodes.push_back(node);
    model.trees.push_back(tree);
  }
  FeatureVector any{};
  CHECK(score_pair(model, any) == 0.5);
}

TEST_CASE("tree order does not change scores", "[forest]") {
  auto [pos, neg] = separable_set(30, 10);
  ForestModel model = train_forest(pos, neg, {9, 4, 4}, 5);
  ForestModel permuted = model;
  std::reverse(permuted.trees.begin(), permuted.trees.end());
  std::rotate(permuted.trees.begin(), permuted.trees.begin() + 3, permuted.trees.end());
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    FeatureVector fv = vec(rng.unit(), rng);
    CHECK(score_pair(model, fv) == score_pair(permuted, fv));  // bit-exact
  }
}

TEST_CASE("model files round-trip with identical scores", "[forest]") {
  auto [pos, neg] = separable_set(50, 12);
  ForestModel model = train_forest(pos, neg, {10, 6, 4}, 21);
  fs::path file = fs::temp_directory_path() / "paramine-forest-rt.model";
  write_forest(model, file);
  ForestModel back = read_forest(file);
  CHECK(back.hp.n_trees == model.hp.n_trees);
  CHECK(back.training_seed == model.training_seed);
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    FeatureVector fv = vec(rng.unit(), rng);
    CHECK(score_pair(back, fv) == score_pair(model, fv));
  }
  // rewritten file is byte-identical
  fs::path file2 = fs::temp_directory_path() / "paramine-forest-rt2.model";
  write_forest(back, file2);
  CHECK(testutil::slurp(file) == testutil::slurp(file2));
}

TEST_CASE("held-out AUC on a noisy separable set is high", "[forest]") {
  Rng rng(14);
  std::vector<FeatureVector> pos, neg;
  for (int i = 0; i < 300; ++i) {
    // overlapping classes: positives center 0.7, negatives center 0.3
    pos.push_back(vec(std::min(1.0, 0.7 + 0.3 * (rng.unit() - 0.5)), rng));
    neg.push_back(vec(std::max(0.0, 0.3 + 0.3 * (rng.unit() - 0.5)), rng));
  }
  std::vector<FeatureVector> pos_train(pos.begin(), pos.begin() + 240);
  std::vector<FeatureVector> neg_train(neg.begin(), neg.begin() + 240);
  ForestModel model = train_forest(pos_train, neg_train, {40, 8, 4}, 123);
  std::vector<double> pos_scores, neg_scores;
  for (std::size_t i = 240; i < pos.size(); ++i) pos_scores.push_back(score_pair(model, pos[i]));
  for (std::size_t i = 240; i < neg.size(); ++i) neg_scores.push_back(score_pair(model, neg[i]));
  CHECK(testutil::roc_auc(pos_scores, neg_scores) > 0.95);
}

TEST_CASE("training argument errors", "[forest]") {
  Rng rng(15);
  std::vector<FeatureVector> pos{vec(0.9, rng)};
  CHECK_THROWS_AS(train_forest(pos, {}, {4, 2, 4}, 1), Error);
  CHECK_THROWS_AS(train_forest(pos, pos, {0, 2, 4}, 1), ValidationError);
}

TEST_CASE("model loader rejects malformed files", "[forest]") {
  fs::path file = fs::temp_directory_path() / "paramine-forest-bad.model";
  {
    std::ofstream out(file);
    out << "not-a-model 1\n";
  }
  CHECK_THROWS_AS(read_forest(file), Error);
  {
    std::ofstream out(file);
    out << kForestMagic << " 99\n";
  }
  CHECK_THROWS_AS(read_forest(file), Error);
  CHECK_THROWS_AS(read_forest(fs::temp_directory_path() / "paramine-absent.model"), Error);
}
