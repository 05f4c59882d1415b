#include "synthgame/forest.hpp"

#include <algorithm>
#include <cmath>

#include "synthgame/rng.hpp"

namespace synthgame {

namespace {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

// 2pq form: algebraically 1 - p^2 - q^2 for binary labels, and bit-exactly
// symmetric under label flip since both factors come from integer counts.
double gini_of(size_t positives, size_t total) {
    if (total == 0) return 0.0;
    double p = double(positives) / double(total);
    double q = double(total - positives) / double(total);
    return 2.0 * p * q;
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                const ForestParams& params, size_t feature_count, Rng& rng)
        : x_(x), y_(y), params_(params), feature_count_(feature_count), rng_(rng) {
        size_t d = feature_count_;
        switch (params_.feature_rule) {
            case FeatureRule::all:
                per_node_features_ = d;
                break;
            case FeatureRule::sqrt_rule:
                per_node_features_ = std::max<size_t>(1, size_t(std::floor(std::sqrt(double(d)))));
                break;
            case FeatureRule::fraction:
                per_node_features_ =
                    std::max<size_t>(1, size_t(std::floor(params_.feature_fraction * double(d))));
                break;
        }
        per_node_features_ = std::min(per_node_features_, d);
    }

    Forest::Tree build(std::vector<size_t> samples) {
        Forest::Tree tree;
        grow(tree, std::move(samples), 0);
        return tree;
    }

private:
    int32_t grow(Forest::Tree& tree, std::vector<size_t> samples, int depth) {
        size_t positives = 0;
        for (size_t i : samples) positives += size_t(y_[i]);

        int32_t index = int32_t(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[size_t(index)].leaf_fraction = double(positives) / double(samples.size());

        bool pure = positives == 0 || positives == samples.size();
        bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
        bool too_small = samples.size() < 2 * size_t(params_.min_leaf);
        if (pure || depth_capped || too_small) return index;

        SplitChoice split = best_split(samples, positives);
        if (!split.found) return index;

        std::vector<size_t> left, right;
        left.reserve(samples.size());
        right.reserve(samples.size());
        for (size_t i : samples) {
            (x_[i][size_t(split.feature)] < split.threshold ? left : right).push_back(i);
        }
        samples.clear();
        samples.shrink_to_fit();

        int32_t left_child = grow(tree, std::move(left), depth + 1);
        int32_t right_child = grow(tree, std::move(right), depth + 1);
        Forest::Node& node = tree.nodes[size_t(index)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_child;
        node.right = right_child;
        return index;
    }

    SplitChoice best_split(const std::vector<size_t>& samples, size_t positives) {
        double node_gini = gini_of(positives, samples.size());
        auto chosen = choose_features();

        SplitChoice best;
        std::vector<std::pair<double, int>> column(samples.size());
        for (size_t f : chosen) {
            for (size_t i = 0; i < samples.size(); ++i)
                column[i] = {x_[samples[i]][f], y_[samples[i]]};
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            size_t left_n = 0, left_pos = 0;
            for (size_t i = 0; i + 1 < column.size(); ++i) {
                ++left_n;
                left_pos += size_t(column[i].second);
                if (column[i].first == column[i + 1].first) continue;
                double threshold = 0.5 * (column[i].first + column[i + 1].first);
                // midpoint can collapse onto an endpoint for adjacent doubles
                if (!(column[i].first < threshold)) continue;
                size_t right_n = column.size() - left_n;
                if (left_n < size_t(params_.min_leaf) || right_n < size_t(params_.min_leaf)) continue;
                size_t right_pos = positives - left_pos;
                double weighted =
                    (double(left_n) * gini_of(left_pos, left_n) +
                     double(right_n) * gini_of(right_pos, right_n)) /
                    double(column.size());
                if (weighted >= node_gini) continue; // not impurity-reducing
                bool better = !best.found || weighted < best.weighted_gini ||
                              (weighted == best.weighted_gini &&
                               (int(f) < best.feature ||
                                (int(f) == best.feature && threshold < best.threshold)));
                if (better) {
                    best.found = true;
                    best.feature = int(f);
                    best.threshold = threshold;
                    best.weighted_gini = weighted;
                }
            }
        }
        return best;
    }

    std::vector<size_t> choose_features() {
        if (per_node_features_ == feature_count_) {
            std::vector<size_t> all(feature_count_);
            for (size_t i = 0; i < feature_count_; ++i) all[i] = i;
            return all;
        }
        auto chosen = rng_.sample_indices(feature_count_, per_node_features_);
        std::sort(chosen.begin(), chosen.end()); // tie-break by lowest index needs order
        return chosen;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    const ForestParams& params_;
    size_t feature_count_;
    size_t per_node_features_;
    Rng& rng_;
};

} // namespace

Forest train_forest(const std::vector<std::vector<double>>& features,
                    const std::vector<int>& labels, const ForestParams& params, uint64_t seed) {
    if (features.empty()) throw Error(Errc::empty_set, "no training samples");
    if (features.size() != labels.size())
        throw Error(Errc::length_mismatch, "feature and label counts differ");
    if (features.size() < 2) throw Error(Errc::empty_set, "need at least 2 training samples");
    if (params.n_trees < 1 || params.min_leaf < 1)
        throw Error(Errc::invalid_argument, "n_trees and min_leaf must be at least 1");

    const size_t feature_count = features[0].size();
    for (const auto& row : features)
        if (row.size() != feature_count)
            throw Error(Errc::length_mismatch, "feature vectors have unequal lengths");

    bool has_pos = false, has_neg = false;
    for (int label : labels) {
        if (label != 0 && label != 1) throw Error(Errc::invalid_argument, "labels must be 0 or 1");
        (label ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw Error(Errc::single_class, "need both IN and OUT labels");

    const size_t n = features.size();
    std::vector<Forest::Tree> trees(size_t(params.n_trees));
    for (size_t t = 0; t < trees.size(); ++t) {
        Rng tree_rng(mix_seed(seed, uint64_t(t)));
        std::vector<size_t> samples(n);
        if (params.bootstrap) {
            for (size_t i = 0; i < n; ++i) samples[i] = size_t(tree_rng.uniform_below(n));
        } else {
            for (size_t i = 0; i < n; ++i) samples[i] = i;
        }
        TreeBuilder builder(features, labels, params, feature_count, tree_rng);
        trees[t] = builder.build(std::move(samples));
    }
    return Forest(std::move(trees), params, feature_count);
}

double Forest::predict_proba(const std::vector<double>& features) const {
    if (features.size() != feature_count_)
        throw Error(Errc::dimension_mismatch, "expected " + std::to_string(feature_count_) +
                                                  " features, got " + std::to_string(features.size()));
    double sum = 0.0;
    for (const Tree& tree : trees_) {
        const Node* node = &tree.nodes[0];
        while (node->feature >= 0) {
            node = &tree.nodes[size_t(features[size_t(node->feature)] < node->threshold
                                          ? node->left
                                          : node->right)];
        }
        sum += node->leaf_fraction;
    }
    return sum / double(trees_.size());
}

} // namespace synthgame
