#include "driftbench/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace driftbench {

namespace {

struct Builder {
    const std::vector<Instance>& data;
    int n_classes;
    int n_features;
    int feature_candidates;
    const RandomForestConfig& cfg;
    Rng rng;
    ForestModel::Tree* tree = nullptr;

    // scratch
    std::vector<std::pair<double, int>> sorted;  // (value, class)

    int grow(std::vector<int>& idx, int depth);
};

double gini(const std::vector<double>& counts, double n) {
    double g = 1.0;
    for (double c : counts) {
        const double p = c / n;
        g -= p * p;
    }
    return g;
}

int Builder::grow(std::vector<int>& idx, int depth) {
    std::vector<double> counts(n_classes, 0.0);
    for (int i : idx) counts[*data[i].y] += 1.0;
    const double n = static_cast<double>(idx.size());

    int majority = 0;
    int represented = 0;
    for (int c = 0; c < n_classes; ++c) {
        if (counts[c] > counts[majority]) majority = c;
        represented += counts[c] > 0.0;
    }

    const bool depth_capped = cfg.max_depth > 0 && depth >= cfg.max_depth;
    if (represented < 2 || static_cast<int>(idx.size()) < 2 * cfg.min_leaf || depth_capped) {
        tree->push_back({-1, 0.0, -1, -1, majority});
        return static_cast<int>(tree->size()) - 1;
    }

    // Feature candidates: a random permutation, scanned until
    // feature_candidates non-constant features have been evaluated (or all
    // features are exhausted).
    std::vector<int> perm(n_features);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n_features - 1; i > 0; --i) {
        std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = std::numeric_limits<double>::infinity();
    int evaluated = 0;

    std::vector<double> left_counts(n_classes);
    for (int f : perm) {
        if (evaluated >= feature_candidates) break;
        sorted.clear();
        for (int i : idx) sorted.emplace_back(data[i].x[f], *data[i].y);
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (!(sorted.back().first > sorted.front().first)) continue;  // constant here
        ++evaluated;

        std::fill(left_counts.begin(), left_counts.end(), 0.0);
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            left_counts[sorted[i].second] += 1.0;
            if (!(sorted[i + 1].first > sorted[i].first)) continue;
            const double nl = static_cast<double>(i + 1);
            const double nr = n - nl;
            if (nl < cfg.min_leaf || nr < cfg.min_leaf) continue;
            std::vector<double> right_counts(n_classes);
            for (int c = 0; c < n_classes; ++c) right_counts[c] = counts[c] - left_counts[c];
            const double score = nl * gini(left_counts, nl) + nr * gini(right_counts, nr);
            if (score < best_score) {
                best_score = score;
                best_feature = f;
                best_threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2.0;
            }
        }
    }

    if (best_feature < 0) {
        tree->push_back({-1, 0.0, -1, -1, majority});
        return static_cast<int>(tree->size()) - 1;
    }

    std::vector<int> left_idx, right_idx;
    for (int i : idx) {
        (data[i].x[best_feature] <= best_threshold ? left_idx : right_idx).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    tree->push_back({best_feature, best_threshold, -1, -1, majority});
    const int me = static_cast<int>(tree->size()) - 1;
    const int l = grow(left_idx, depth + 1);
    const int r = grow(right_idx, depth + 1);
    (*tree)[me].left = l;
    (*tree)[me].right = r;
    return me;
}

}  // namespace

ForestModel rf_fit(const std::vector<Instance>& buffer, int n_classes,
                   const RandomForestConfig& cfg, Rng& rng) {
    if (buffer.empty()) throw InputError("rf_fit: empty training buffer");
    if (cfg.n_trees < 1) throw ConfigError("rf_fit: n_trees must be >= 1");
    for (const Instance& inst : buffer) {
        if (!inst.y) throw InputError("rf_fit: unlabeled instance in training buffer");
        if (*inst.y < 0 || *inst.y >= n_classes) throw InputError("rf_fit: class id out of range");
    }
    const int d = static_cast<int>(buffer.front().x.size());
    const int k = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)))));
    const int n = static_cast<int>(buffer.size());

    ForestModel model;
    model.n_classes_ = n_classes;
    model.n_features_ = d;
    model.trees_.resize(cfg.n_trees);

    // Per-tree seeds drawn up front so tree construction order cannot leak
    // into the results.
    std::vector<std::uint64_t> seeds(cfg.n_trees);
    for (auto& s : seeds) s = rng.child_seed();

    for (int t = 0; t < cfg.n_trees; ++t) {
        Builder b{buffer, n_classes, d, k, cfg, Rng(seeds[t])};
        b.tree = &model.trees_[t];
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = b.rng.uniform_int(0, n - 1);
        b.grow(idx, 0);
    }
    return model;
}

Eigen::VectorXd ForestModel::scores(const Eigen::VectorXd& x) const {
    if (x.size() != n_features_) {
        throw InputError("forest: expected " + std::to_string(n_features_) + " features, got " +
                         std::to_string(x.size()));
    }
    Eigen::VectorXd votes = Eigen::VectorXd::Zero(n_classes_);
    for (const Tree& tree : trees_) {
        int at = 0;
        while (tree[at].feature >= 0) {
            at = x[tree[at].feature] <= tree[at].threshold ? tree[at].left : tree[at].right;
        }
        votes[tree[at].label] += 1.0;
    }
    return votes;
}

int ForestModel::predict(const Eigen::VectorXd& x) const {
    return argmax_class(scores(x));
}

}  // namespace driftbench
