#include "driftbench/learners.hpp"

#include <cmath>
#include <limits>

namespace driftbench {

Learner::Learner(int n_features, int n_classes)
    : n_features_(n_features), n_classes_(n_classes) {
    if (n_features < 1) throw ConfigError("learner: n_features must be >= 1");
    if (n_classes < 1) throw ConfigError("learner: n_classes must be >= 1");
}

void Learner::check_input(const Eigen::VectorXd& x) const {
    if (x.size() != n_features_) {
        throw InputError("learner: expected " + std::to_string(n_features_) +
                         " features, got " + std::to_string(x.size()));
    }
}

void Learner::check_label(int y) const {
    if (y < 0 || y >= n_classes_) {
        throw InputError("learner: class id " + std::to_string(y) + " out of range");
    }
}

int Learner::predict(const Eigen::VectorXd& x) const {
    return argmax_class(scores(x));
}

int argmax_class(const Eigen::VectorXd& scores) {
    int best = 0;
    for (int c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return best;
}

LastClass::LastClass(int n_features, int n_classes) : Learner(n_features, n_classes) {}

void LastClass::learn(const Eigen::VectorXd& x, int y) {
    check_input(x);
    check_label(y);
    last_ = y;
}

Eigen::VectorXd LastClass::scores(const Eigen::VectorXd& x) const {
    check_input(x);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n_classes());
    if (last_ >= 0) s[last_] = 1.0;
    return s;
}

void LastClass::reset() { last_ = -1; }

MajorityClass::MajorityClass(int n_features, int n_classes)
    : Learner(n_features, n_classes), counts_(Eigen::VectorXd::Zero(n_classes)) {}

void MajorityClass::learn(const Eigen::VectorXd& x, int y) {
    check_input(x);
    check_label(y);
    counts_[y] += 1.0;
}

Eigen::VectorXd MajorityClass::scores(const Eigen::VectorXd& x) const {
    check_input(x);
    return counts_;
}

void MajorityClass::reset() { counts_.setZero(); }

void RunningMoments::add(double x, double w) {
    weight += w;
    const double delta = x - mean;
    mean += (w / weight) * delta;
    m2 += w * delta * (x - mean);
}

double RunningMoments::variance(double floor) const {
    if (weight <= 0.0) return floor;
    return std::max(m2 / weight, floor);
}

GaussianNaiveBayes::GaussianNaiveBayes(int n_features, int n_classes)
    : Learner(n_features, n_classes),
      class_counts_(Eigen::VectorXd::Zero(n_classes)),
      moments_(n_classes, std::vector<RunningMoments>(n_features)) {}

void GaussianNaiveBayes::learn(const Eigen::VectorXd& x, int y) {
    check_input(x);
    check_label(y);
    class_counts_[y] += 1.0;
    total_ += 1.0;
    for (int f = 0; f < n_features(); ++f) moments_[y][f].add(x[f]);
}

Eigen::VectorXd GaussianNaiveBayes::scores(const Eigen::VectorXd& x) const {
    check_input(x);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n_classes());
    if (total_ <= 0.0) return s;
    constexpr double kLog2Pi = 1.8378770664093453;
    for (int c = 0; c < n_classes(); ++c) {
        if (class_counts_[c] <= 0.0) {
            s[c] = -std::numeric_limits<double>::infinity();
            continue;
        }
        double ll = std::log(class_counts_[c] / total_);
        for (int f = 0; f < n_features(); ++f) {
            const RunningMoments& m = moments_[c][f];
            const double v = m.variance(kVarianceFloor);
            const double d = x[f] - m.mean;
            ll += -0.5 * (kLog2Pi + std::log(v)) - d * d / (2.0 * v);
        }
        s[c] = ll;
    }
    return s;
}

void GaussianNaiveBayes::reset() {
    class_counts_.setZero();
    total_ = 0.0;
    for (auto& per_class : moments_) {
        for (auto& m : per_class) m = RunningMoments{};
    }
}

double hoeffding_bound(double range, double delta, std::int64_t n) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw ConfigError("hoeffding_bound: delta must lie in (0,1)");
    }
    if (n < 1) throw InputError("hoeffding_bound: n must be >= 1");
    return std::sqrt(range * range * std::log(1.0 / delta) /
                     (2.0 * static_cast<double>(n)));
}

}  // namespace driftbench
