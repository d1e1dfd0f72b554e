#include "driftbench/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace driftbench {

double rank_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty()) {
        throw InputError("rank_auc: scores and labels must be non-empty and equal length");
    }
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t q = i; q <= j; ++q) {
            if (labels[order[q]] == 1) {
                pos_rank_sum += avg_rank;
                ++n_pos;
            }
        }
        i = j + 1;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw InputError("rank_auc: need both classes present");
    return (pos_rank_sum - static_cast<double>(n_pos) * (n_pos + 1) / 2.0) /
           (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

namespace {

double sigmoid(double z) {
    if (z > 35.0) return 1.0;
    if (z < -35.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace

D3Detector::D3Detector(int n_features, D3Config cfg)
    : n_features_(n_features),
      cfg_(cfg),
      recent_cap_(static_cast<int>(std::ceil(cfg.recent_fraction * cfg.reference_size))),
      rng_(cfg.seed),
      last_auc_(std::numeric_limits<double>::quiet_NaN()) {
    if (n_features_ < 1) throw ConfigError("D3: n_features must be >= 1");
    if (cfg_.reference_size < 2) throw ConfigError("D3: reference window must hold >= 2 instances");
    if (!(cfg_.recent_fraction > 0.0)) throw ConfigError("D3: recent_fraction must be > 0");
    if (recent_cap_ < 1) recent_cap_ = 1;
    cfg_.tree.leaf_scoring = LeafScoring::GaussianNB;
}

SignalLevel D3Detector::update(const Eigen::VectorXd& x) {
    if (x.size() != n_features_) throw InputError("D3: feature dimension mismatch");
    buf_.push_back(x);
    if (static_cast<int>(buf_.size()) < cfg_.reference_size + recent_cap_) {
        return SignalLevel::Stable;
    }
    return evaluate();
}

SignalLevel D3Detector::evaluate() {
    const int n_ref = cfg_.reference_size;
    const int n_new = recent_cap_;
    const int total = n_ref + n_new;

    // Standardize the pooled window: the one-epoch SGD discriminator is
    // scale-sensitive and incoming features are on arbitrary scales.
    Eigen::MatrixXd xs(total, n_features_);
    for (int i = 0; i < total; ++i) xs.row(i) = buf_[i].transpose();
    const Eigen::RowVectorXd mean = xs.colwise().mean();
    for (int f = 0; f < n_features_; ++f) {
        double sd = std::sqrt((xs.col(f).array() - mean[f]).square().sum() / total);
        if (sd < 1e-12) sd = 1.0;
        xs.col(f) = (xs.col(f).array() - mean[f]) / sd;
    }

    std::vector<int> labels(total);
    for (int i = 0; i < total; ++i) labels[i] = i < n_ref ? 0 : 1;

    std::vector<int> order(total);
    std::iota(order.begin(), order.end(), 0);
    for (int i = total - 1; i > 0; --i) {
        std::swap(order[i], order[rng_.uniform_int(0, i)]);
    }

    // One epoch over a seeded shuffle, scoring each point just before its
    // own update (test-then-train). Scoring the fitted model on its own
    // training points instead leaks every label into its score, which pins
    // the AUC above tau even when both windows are identically distributed.
    std::vector<double> score(total);
    if (cfg_.discriminator == D3DiscriminatorKind::LogisticLinear) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n_features_);
        double b = 0.0;
        for (int i : order) {
            const double z = xs.row(i).dot(w) + b;
            score[i] = z;
            const double g = sigmoid(z) - labels[i];
            w -= cfg_.learning_rate * g * xs.row(i).transpose();
            b -= cfg_.learning_rate * g;
        }
    } else {
        HoeffdingTree tree(n_features_, 2, cfg_.tree, rng_.child_seed());
        for (int i : order) {
            const Eigen::VectorXd s = tree.scores(xs.row(i).transpose());
            score[i] = std::isinf(s[1]) || std::isinf(s[0]) ? (std::isinf(s[0]) ? 1e9 : -1e9)
                                                            : s[1] - s[0];
            tree.learn(xs.row(i).transpose(), labels[i]);
        }
    }

    last_auc_ = rank_auc(score, labels);
    if (last_auc_ >= cfg_.auc_threshold) {
        // Drift: the recent window survives as the seed of the new reference.
        buf_.erase(buf_.begin(), buf_.end() - n_new);
        return SignalLevel::Drift;
    }
    buf_.erase(buf_.begin(), buf_.begin() + n_new);
    return SignalLevel::Stable;
}

}  // namespace driftbench
