#pragma once

#include <cstdint>
#include <vector>

#include "synthgame/error.hpp"

namespace synthgame {

enum class FeatureRule { sqrt_rule, all, fraction };

struct ForestParams {
    int n_trees = 100;
    int max_depth = 0;               // 0 = unlimited
    int min_leaf = 1;
    FeatureRule feature_rule = FeatureRule::sqrt_rule;
    double feature_fraction = 1.0;   // used when feature_rule == fraction
    bool bootstrap = true;
};

/// Binary membership classifier: bagged axis-aligned trees grown on Gini
/// impurity, leaves holding the positive-class fraction. Prediction is the
/// mean of the leaf fractions (soft voting), which gives the continuous
/// score ROC AUC needs.
class Forest {
public:
    struct Node {
        int feature = -1;       // -1 for leaves
        double threshold = 0.0; // x[feature] < threshold goes left
        int32_t left = -1;
        int32_t right = -1;
        double leaf_fraction = 0.0;
    };
    struct Tree {
        std::vector<Node> nodes; // node 0 is the root
    };

    Forest(std::vector<Tree> trees, ForestParams params, size_t feature_count)
        : trees_(std::move(trees)), params_(params), feature_count_(feature_count) {}

    double predict_proba(const std::vector<double>& features) const;

    const std::vector<Tree>& trees() const { return trees_; }
    size_t feature_count() const { return feature_count_; }
    const ForestParams& params() const { return params_; }

private:
    std::vector<Tree> trees_;
    ForestParams params_;
    size_t feature_count_;
};

/// Labels are 0 (OUT) / 1 (IN). Each tree grows on a bootstrap resample of
/// size n with per-node uniform feature subsampling; splits minimize
/// weighted Gini over midpoints of consecutive distinct sorted values, ties
/// broken by lowest feature index then lowest threshold. Per-tree rng seeds
/// are mix_seed(seed, tree_index), so tree order never affects results.
Forest train_forest(const std::vector<std::vector<double>>& features,
                    const std::vector<int>& labels, const ForestParams& params, uint64_t seed);

} // namespace synthgame
