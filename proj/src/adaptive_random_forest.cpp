#include "driftbench/arf.hpp"

#include <cmath>

namespace driftbench {

AdaptiveRandomForest::AdaptiveRandomForest(int n_features, int n_classes, ArfConfig cfg,
                                           std::uint64_t seed)
    : Learner(n_features, n_classes), cfg_(cfg), rng_(seed) {
    if (cfg_.n_trees < 1) throw ConfigError("ARF: n_trees must be >= 1");
    cfg_.tree.feature_subset_size =
        static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_features)))) + 1;
    slots_.reserve(cfg_.n_trees);
    for (int i = 0; i < cfg_.n_trees; ++i) slots_.push_back(fresh_slot());
}

std::unique_ptr<HoeffdingTree> AdaptiveRandomForest::fresh_tree() {
    return std::make_unique<HoeffdingTree>(n_features(), n_classes(), cfg_.tree,
                                           rng_.child_seed());
}

AdaptiveRandomForest::Slot AdaptiveRandomForest::fresh_slot() {
    return Slot{fresh_tree(), nullptr, AdwinDetector(cfg_.warning_delta),
                AdwinDetector(cfg_.drift_delta), 0.0, 0.0};
}

void AdaptiveRandomForest::learn(const Eigen::VectorXd& x, int y) {
    check_input(x);
    check_label(y);
    for (Slot& slot : slots_) {
        const int pred = slot.tree->predict(x);
        const bool err = pred != y;
        slot.seen += 1.0;
        if (!err) slot.correct += 1.0;

        const int w = rng_.poisson(cfg_.poisson_lambda);
        if (w > 0) {
            slot.tree->learn_weighted(x, y, w);
            if (slot.background) slot.background->learn_weighted(x, y, w);
        }

        const SignalLevel warn = slot.warning.update(err ? 1.0 : 0.0);
        const SignalLevel drift = slot.drift.update(err ? 1.0 : 0.0);
        if (drift == SignalLevel::Drift) {
            slot.tree = slot.background ? std::move(slot.background) : fresh_tree();
            slot.background.reset();
            slot.warning = AdwinDetector(cfg_.warning_delta);
            slot.drift = AdwinDetector(cfg_.drift_delta);
            slot.correct = slot.seen = 0.0;
            ++drifts_;
        } else if (warn == SignalLevel::Drift && !slot.background) {
            slot.background = fresh_tree();
            ++warnings_;
        }
    }
}

Eigen::VectorXd AdaptiveRandomForest::scores(const Eigen::VectorXd& x) const {
    check_input(x);
    Eigen::VectorXd votes = Eigen::VectorXd::Zero(n_classes());
    for (const Slot& slot : slots_) {
        const double weight = slot.seen > 0.0 ? slot.correct / slot.seen : 1.0;
        votes[slot.tree->predict(x)] += weight;
    }
    return votes;
}

void AdaptiveRandomForest::reset() {
    slots_.clear();
    for (int i = 0; i < cfg_.n_trees; ++i) slots_.push_back(fresh_slot());
    drifts_ = warnings_ = 0;
}

int AdaptiveRandomForest::background_tree_count() const {
    int n = 0;
    for (const Slot& slot : slots_) n += slot.background != nullptr;
    return n;
}

}  // namespace driftbench
