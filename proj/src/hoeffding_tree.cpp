#include "driftbench/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace driftbench {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

double entropy(const Eigen::VectorXd& counts, double total) {
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (int c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0.0) {
            const double p = counts[c] / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

}  // namespace

struct HoeffdingTree::Node {
    // Internal-node fields; split_feature < 0 marks a leaf.
    int split_feature = -1;
    double threshold = 0.0;
    std::unique_ptr<Node> left, right;

    // Leaf fields.
    Eigen::VectorXd class_counts;
    std::vector<int> features;                       // global feature ids this leaf may split on
    std::vector<std::vector<RunningMoments>> stats;  // [class][index into features]
    std::vector<double> fmin, fmax;                  // observed bounds per index
    double weight_seen = 0.0;
    double weight_at_last_attempt = 0.0;
    int depth = 0;

    bool is_leaf() const { return split_feature < 0; }
};

HoeffdingTree::HoeffdingTree(int n_features, int n_classes, HoeffdingTreeConfig cfg,
                             std::uint64_t seed)
    : Learner(n_features, n_classes), cfg_(cfg), rng_(seed) {
    if (cfg_.grace_period < 1) throw ConfigError("hoeffding tree: grace_period must be >= 1");
    if (cfg_.split_candidates < 1) throw ConfigError("hoeffding tree: split_candidates must be >= 1");
    if (cfg_.feature_subset_size > n_features) cfg_.feature_subset_size = n_features;
    root_ = make_leaf(0);
}

HoeffdingTree::~HoeffdingTree() = default;
HoeffdingTree::HoeffdingTree(HoeffdingTree&&) noexcept = default;
HoeffdingTree& HoeffdingTree::operator=(HoeffdingTree&&) noexcept = default;

std::unique_ptr<HoeffdingTree::Node> HoeffdingTree::make_leaf(int depth) {
    auto node = std::make_unique<Node>();
    node->depth = depth;
    node->class_counts = Eigen::VectorXd::Zero(n_classes());
    if (cfg_.feature_subset_size > 0 && cfg_.feature_subset_size < n_features()) {
        // Partial Fisher-Yates draw of a feature subset without replacement.
        std::vector<int> all(n_features());
        std::iota(all.begin(), all.end(), 0);
        for (int i = 0; i < cfg_.feature_subset_size; ++i) {
            const int j = rng_.uniform_int(i, n_features() - 1);
            std::swap(all[i], all[j]);
        }
        all.resize(cfg_.feature_subset_size);
        node->features = std::move(all);
    } else {
        node->features.resize(n_features());
        std::iota(node->features.begin(), node->features.end(), 0);
    }
    const auto width = node->features.size();
    node->stats.assign(n_classes(), std::vector<RunningMoments>(width));
    node->fmin.assign(width, std::numeric_limits<double>::infinity());
    node->fmax.assign(width, -std::numeric_limits<double>::infinity());
    return node;
}

const HoeffdingTree::Node* HoeffdingTree::route(const Eigen::VectorXd& x) const {
    const Node* node = root_.get();
    while (!node->is_leaf()) {
        node = x[node->split_feature] <= node->threshold ? node->left.get() : node->right.get();
    }
    return node;
}

void HoeffdingTree::learn(const Eigen::VectorXd& x, int y) { learn_weighted(x, y, 1.0); }

void HoeffdingTree::learn_weighted(const Eigen::VectorXd& x, int y, double w) {
    check_input(x);
    check_label(y);
    if (w <= 0.0) return;

    Node* node = root_.get();
    while (!node->is_leaf()) {
        node = x[node->split_feature] <= node->threshold ? node->left.get() : node->right.get();
    }

    node->class_counts[y] += w;
    node->weight_seen += w;
    for (std::size_t i = 0; i < node->features.size(); ++i) {
        const double v = x[node->features[i]];
        node->stats[y][i].add(v, w);
        node->fmin[i] = std::min(node->fmin[i], v);
        node->fmax[i] = std::max(node->fmax[i], v);
    }

    if (node->weight_seen - node->weight_at_last_attempt >= cfg_.grace_period) {
        node->weight_at_last_attempt = node->weight_seen;
        attempt_split(*node);
    }
}

void HoeffdingTree::attempt_split(Node& leaf) {
    if (cfg_.max_depth > 0 && leaf.depth >= cfg_.max_depth) return;
    const double total = leaf.class_counts.sum();
    int represented = 0;
    for (int c = 0; c < n_classes(); ++c) represented += leaf.class_counts[c] > 0.0;
    if (represented < 2) return;

    const double parent_entropy = entropy(leaf.class_counts, total);

    struct Candidate {
        double gain = -1.0;
        int feature = -1;
        double threshold = 0.0;
        Eigen::VectorXd left, right;
    };
    Candidate best, second;

    Eigen::VectorXd left(n_classes()), right(n_classes());
    for (std::size_t i = 0; i < leaf.features.size(); ++i) {
        if (!(leaf.fmax[i] > leaf.fmin[i])) continue;
        Candidate feature_best;
        for (int cand = 1; cand <= cfg_.split_candidates; ++cand) {
            const double theta =
                leaf.fmin[i] + cand * (leaf.fmax[i] - leaf.fmin[i]) / (cfg_.split_candidates + 1);
            for (int c = 0; c < n_classes(); ++c) {
                const RunningMoments& m = leaf.stats[c][i];
                if (m.weight <= 0.0) {
                    left[c] = right[c] = 0.0;
                    continue;
                }
                const double sd = std::sqrt(m.variance(1e-12));
                const double frac = normal_cdf((theta - m.mean) / sd);
                left[c] = m.weight * frac;
                right[c] = m.weight - left[c];
            }
            const double wl = left.sum(), wr = right.sum();
            if (wl <= 1e-12 || wr <= 1e-12) continue;
            const double gain = parent_entropy - (wl * entropy(left, wl) + wr * entropy(right, wr)) /
                                                     (wl + wr);
            if (gain > feature_best.gain) {
                feature_best = Candidate{gain, leaf.features[i], theta, left, right};
            }
        }
        if (feature_best.feature < 0) continue;
        if (feature_best.gain > best.gain) {
            second = best;
            best = feature_best;
        } else if (feature_best.gain > second.gain) {
            second = feature_best;
        }
    }

    if (best.feature < 0 || best.gain <= 0.0) return;
    const double range = std::log2(std::max(2, n_classes()));
    const double eps = hoeffding_bound(range, cfg_.split_confidence,
                                       std::max<std::int64_t>(1, std::llround(leaf.weight_seen)));
    const double second_gain = second.feature >= 0 ? second.gain : 0.0;
    if (best.gain - second_gain > eps || eps < cfg_.tie_threshold) {
        leaf.split_feature = best.feature;
        leaf.threshold = best.threshold;
        leaf.left = make_leaf(leaf.depth + 1);
        leaf.right = make_leaf(leaf.depth + 1);
        // Children inherit the projected class masses of the chosen split so
        // prediction quality does not dip while their own statistics fill in.
        leaf.left->class_counts = best.left;
        leaf.right->class_counts = best.right;
        leaf.class_counts.resize(0);
        leaf.stats.clear();
        leaf.stats.shrink_to_fit();
        leaf.features.clear();
        leaf.fmin.clear();
        leaf.fmax.clear();
    }
}

Eigen::VectorXd HoeffdingTree::scores(const Eigen::VectorXd& x) const {
    check_input(x);
    const Node* leaf = route(x);
    if (cfg_.leaf_scoring == LeafScoring::MajorityCounts) return leaf->class_counts;

    const double total = leaf->class_counts.sum();
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n_classes());
    if (total <= 0.0) return s;
    constexpr double kLog2Pi = 1.8378770664093453;
    for (int c = 0; c < n_classes(); ++c) {
        if (leaf->class_counts[c] <= 0.0) {
            s[c] = -std::numeric_limits<double>::infinity();
            continue;
        }
        double ll = std::log(leaf->class_counts[c] / total);
        for (std::size_t i = 0; i < leaf->features.size(); ++i) {
            const RunningMoments& m = leaf->stats[c][i];
            if (m.weight <= 0.0) continue;
            const double v = m.variance(GaussianNaiveBayes::kVarianceFloor);
            const double d = x[leaf->features[i]] - m.mean;
            ll += -0.5 * (kLog2Pi + std::log(v)) - d * d / (2.0 * v);
        }
        s[c] = ll;
    }
    return s;
}

void HoeffdingTree::reset() {
    rng_ = Rng(rng_.child_seed());
    root_ = make_leaf(0);
}

int HoeffdingTree::n_nodes() const {
    int nodes = 0;
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        ++nodes;
        if (!n->is_leaf()) {
            stack.push_back(n->left.get());
            stack.push_back(n->right.get());
        }
    }
    return nodes;
}

int HoeffdingTree::n_leaves() const {
    int leaves = 0;
    std::vector<const Node*> stack{root_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (n->is_leaf()) {
            ++leaves;
        } else {
            stack.push_back(n->left.get());
            stack.push_back(n->right.get());
        }
    }
    return leaves;
}

int HoeffdingTree::depth() const {
    int deepest = 0;
    std::vector<std::pair<const Node*, int>> stack{{root_.get(), 0}};
    while (!stack.empty()) {
        auto [n, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (!n->is_leaf()) {
            stack.emplace_back(n->left.get(), d + 1);
            stack.emplace_back(n->right.get(), d + 1);
        }
    }
    return deepest;
}

}  // namespace driftbench
