#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "driftbench/core.hpp"

namespace driftbench {

/// Incremental classifier contract: predict-then-learn over single
/// instances, resettable to a fresh state. predict() never mutates learning
/// statistics, and before any label has been seen every learner predicts
/// class 0 (all-zero score vector).
class Learner {
public:
    virtual ~Learner() = default;

    virtual void learn(const Eigen::VectorXd& x, int y) = 0;

    /// Per-class scores; prediction is their argmax with ties broken toward
    /// the smaller class id. Scores are comparable within one call only.
    virtual Eigen::VectorXd scores(const Eigen::VectorXd& x) const = 0;

    virtual void reset() = 0;

    int predict(const Eigen::VectorXd& x) const;

    int n_classes() const { return n_classes_; }
    int n_features() const { return n_features_; }

protected:
    Learner(int n_features, int n_classes);
    void check_input(const Eigen::VectorXd& x) const;
    void check_label(int y) const;

private:
    int n_features_;
    int n_classes_;
};

/// Argmax with ties toward the smaller index; 0 for an all-equal vector.
int argmax_class(const Eigen::VectorXd& scores);

/// Predicts the most recent label seen.
class LastClass : public Learner {
public:
    LastClass(int n_features, int n_classes);
    void learn(const Eigen::VectorXd& x, int y) override;
    Eigen::VectorXd scores(const Eigen::VectorXd& x) const override;
    void reset() override;

private:
    int last_ = -1;
};

/// Predicts the most frequent label seen; ties go to the smaller class id.
class MajorityClass : public Learner {
public:
    MajorityClass(int n_features, int n_classes);
    void learn(const Eigen::VectorXd& x, int y) override;
    Eigen::VectorXd scores(const Eigen::VectorXd& x) const override;
    void reset() override;

private:
    Eigen::VectorXd counts_;
};

/// Numerically stable single-pass moment tracker (Welford, weighted).
struct RunningMoments {
    double weight = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x, double w = 1.0);
    /// Population variance, floored at `floor`.
    double variance(double floor = 0.0) const;
};

/// Gaussian naive Bayes over numeric features. Per-class/per-feature
/// variance is floored at 1e-9 to keep likelihoods finite.
class GaussianNaiveBayes : public Learner {
public:
    static constexpr double kVarianceFloor = 1e-9;

    GaussianNaiveBayes(int n_features, int n_classes);
    void learn(const Eigen::VectorXd& x, int y) override;
    Eigen::VectorXd scores(const Eigen::VectorXd& x) const override;
    void reset() override;

    double class_count(int c) const { return class_counts_[c]; }
    double feature_mean(int c, int f) const { return moments_[c][f].mean; }
    double feature_variance(int c, int f) const {
        return moments_[c][f].variance(kVarianceFloor);
    }

private:
    Eigen::VectorXd class_counts_;
    std::vector<std::vector<RunningMoments>> moments_;  // [class][feature]
    double total_ = 0.0;
};

/// Hoeffding bound epsilon = sqrt(R^2 ln(1/delta) / (2n)).
double hoeffding_bound(double range, double delta, std::int64_t n);

enum class LeafScoring {
    MajorityCounts,  // scores = leaf class counts
    GaussianNB,      // Gaussian NB over the leaf's split statistics
};

struct HoeffdingTreeConfig {
    int grace_period = 200;
    double split_confidence = 1e-7;  // delta of the Hoeffding test
    double tie_threshold = 0.05;
    int split_candidates = 10;       // evaluated thresholds per feature
    int max_depth = 0;               // 0 = unbounded
    LeafScoring leaf_scoring = LeafScoring::MajorityCounts;
    /// >0: each leaf considers only this many randomly drawn features for
    /// splitting (used by the adaptive forest); 0 considers all features.
    int feature_subset_size = 0;
};

/// Incremental decision tree with Hoeffding-bound split decisions.
/// Numeric splits are evaluated against per-leaf, per-class Gaussian
/// approximations of each candidate feature; split attempts happen every
/// grace_period instances routed to a leaf.
class HoeffdingTree : public Learner {
public:
    HoeffdingTree(int n_features, int n_classes, HoeffdingTreeConfig cfg = {},
                  std::uint64_t seed = 0);
    ~HoeffdingTree() override;
    HoeffdingTree(HoeffdingTree&&) noexcept;
    HoeffdingTree& operator=(HoeffdingTree&&) noexcept;

    void learn(const Eigen::VectorXd& x, int y) override;
    void learn_weighted(const Eigen::VectorXd& x, int y, double w);
    Eigen::VectorXd scores(const Eigen::VectorXd& x) const override;
    void reset() override;

    int n_nodes() const;
    int n_leaves() const;
    int depth() const;
    const HoeffdingTreeConfig& config() const { return cfg_; }

private:
    struct Node;
    std::unique_ptr<Node> make_leaf(int depth);
    void attempt_split(Node& leaf);
    const Node* route(const Eigen::VectorXd& x) const;

    HoeffdingTreeConfig cfg_;
    Rng rng_;
    std::unique_ptr<Node> root_;
};

struct RandomForestConfig {
    int n_trees = 100;
    int min_leaf = 1;
    int max_depth = 0;  // 0 = grown to purity
};

/// Batch CART forest: bootstrap resamples, sqrt(d) feature candidates per
/// split, Gini impurity, majority vote. Fitted once by rf_fit; never
/// updated incrementally.
class ForestModel {
public:
    struct TreeNode {
        int feature = -1;  // -1: leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 0;
    };
    using Tree = std::vector<TreeNode>;

    ForestModel() = default;

    int predict(const Eigen::VectorXd& x) const;
    Eigen::VectorXd scores(const Eigen::VectorXd& x) const;  // vote counts

    int n_trees() const { return static_cast<int>(trees_.size()); }
    int n_classes() const { return n_classes_; }
    bool empty() const { return trees_.empty(); }

private:
    std::vector<Tree> trees_;
    int n_classes_ = 0;
    int n_features_ = 0;

    friend ForestModel rf_fit(const std::vector<Instance>& buffer, int n_classes,
                              const RandomForestConfig& cfg, Rng& rng);
};

/// Fits a forest on a labeled buffer. Throws InputError on an empty buffer;
/// a single-class buffer yields a constant predictor.
ForestModel rf_fit(const std::vector<Instance>& buffer, int n_classes,
                   const RandomForestConfig& cfg, Rng& rng);

}  // namespace driftbench
