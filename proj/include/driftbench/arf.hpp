#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "driftbench/detectors.hpp"
#include "driftbench/learners.hpp"

namespace driftbench {

struct ArfConfig {
    int n_trees = 10;
    double poisson_lambda = 6.0;   // online bagging weight
    double warning_delta = 0.01;   // per-tree warning ADWIN
    double drift_delta = 0.001;    // per-tree drift ADWIN
    HoeffdingTreeConfig tree;      // feature_subset_size is derived as ceil(sqrt(d))+1
};

/// Online forest of Hoeffding trees with per-tree drift handling: each tree
/// trains on Poisson(lambda)-weighted copies and monitors its own 0/1 error
/// with two ADWINs. A warning starts a background tree; a drift promotes it
/// (or replaces the tree outright). Votes are weighted by each tree's
/// running accuracy since its last replacement.
class AdaptiveRandomForest : public Learner {
public:
    AdaptiveRandomForest(int n_features, int n_classes, ArfConfig cfg = {},
                         std::uint64_t seed = 0);

    void learn(const Eigen::VectorXd& x, int y) override;
    Eigen::VectorXd scores(const Eigen::VectorXd& x) const override;
    void reset() override;

    int background_tree_count() const;
    std::int64_t drift_count() const { return drifts_; }
    std::int64_t warning_count() const { return warnings_; }

private:
    struct Slot {
        std::unique_ptr<HoeffdingTree> tree;
        std::unique_ptr<HoeffdingTree> background;
        AdwinDetector warning;
        AdwinDetector drift;
        double correct = 0.0;
        double seen = 0.0;
    };

    std::unique_ptr<HoeffdingTree> fresh_tree();
    Slot fresh_slot();

    ArfConfig cfg_;
    Rng rng_;
    std::vector<Slot> slots_;
    std::int64_t drifts_ = 0;
    std::int64_t warnings_ = 0;
};

}  // namespace driftbench
