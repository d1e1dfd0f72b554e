#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include <Eigen/Dense>

#include "driftbench/core.hpp"
#include "driftbench/learners.hpp"

namespace driftbench {

/// Three-valued detector outcome. A Drift emission always leaves the
/// detector treating subsequent data as its new reference.
enum class SignalLevel { Stable, Warning, Drift };

const char* signal_name(SignalLevel s);

/// Supervised error-rate monitor. Tracks the running error rate p and its
/// binomial deviation s = sqrt(p(1-p)/n); warns at p+s > p_min + 2 s_min,
/// signals drift at p+s > p_min + 3 s_min and restarts its own statistics.
/// Silent (and not recording minima) until min_instances have been seen.
class DdmDetector {
public:
    struct Config {
        int min_instances = 30;
        double warning_sigmas = 2.0;
        double drift_sigmas = 3.0;
    };

    DdmDetector();
    explicit DdmDetector(Config cfg);

    SignalLevel update(bool correct);

    std::int64_t instances() const { return n_; }
    double error_rate() const { return n_ > 0 ? static_cast<double>(errors_) / n_ : 0.0; }

private:
    Config cfg_;
    std::int64_t n_ = 0;
    std::int64_t errors_ = 0;
    double p_min_ = 0.0;
    double s_min_ = 0.0;
    bool minima_set_ = false;
};

/// Adaptive windowing over a real-valued input in a declared range. The
/// window is held as an exponential histogram (at most max_buckets_per_level
/// buckets summarizing 2^level items each), so memory is logarithmic in the
/// window length while bucket aggregates reconstruct count and sum exactly.
/// Every update checks all bucket-boundary splits W0|W1 and drops the oldest
/// bucket(s) while any split's mean gap exceeds the delta-confidence cut.
class AdwinDetector {
public:
    struct Config {
        double delta = 0.002;
        int max_buckets_per_level = 5;
        double value_min = 0.0;
        double value_max = 1.0;
        int min_window = 10;
        int min_sub_window = 5;
    };

    AdwinDetector();
    explicit AdwinDetector(Config cfg);
    explicit AdwinDetector(double delta);

    SignalLevel update(double value);

    double mean() const { return count_ > 0 ? sum_ / static_cast<double>(count_) : 0.0; }
    double sum() const { return sum_; }
    double variance() const { return count_ > 0 ? var_sum_ / static_cast<double>(count_) : 0.0; }
    std::int64_t window_length() const { return count_; }

private:
    struct Bucket {
        double sum = 0.0;
        double var = 0.0;  // within-bucket sum of squared deviations
    };

    void insert(double value);
    void compress();
    bool shrink_once();  // true when a violating split forced a drop
    void drop_oldest();
    bool cut_violated(double n0, double u0, double n1, double u1) const;

    Config cfg_;
    // rows_[r] holds buckets of 2^r items, oldest at the front; every bucket
    // in row r is newer than every bucket in row r+1.
    std::vector<std::deque<Bucket>> rows_;
    std::int64_t count_ = 0;
    double sum_ = 0.0;
    double var_sum_ = 0.0;
};

enum class D3DiscriminatorKind { LogisticLinear, HoeffdingTree };

/// Unsupervised two-window discriminator detector. Buffers feature vectors;
/// once the reference window (w) and recent window (ceil(rho*w)) are both
/// full, trains a discriminator to separate them and reads the training AUC:
/// AUC >= tau is drift (the recent window seeds the new reference),
/// otherwise the windows slide forward by the recent size.
struct D3Config {
    int reference_size = 100;      // w
    double recent_fraction = 0.1;  // rho
    double auc_threshold = 0.70;   // tau
    D3DiscriminatorKind discriminator = D3DiscriminatorKind::LogisticLinear;
    double learning_rate = 0.1;    // linear discriminator, one epoch of SGD
    HoeffdingTreeConfig tree;      // tree discriminator (leaf scoring forced to GaussianNB)
    std::uint64_t seed = 0;
};

class D3Detector {
public:
    D3Detector(int n_features, D3Config cfg = {});

    SignalLevel update(const Eigen::VectorXd& x);

    int recent_capacity() const { return recent_cap_; }
    std::int64_t buffered() const { return static_cast<std::int64_t>(buf_.size()); }
    /// AUC of the most recent evaluation; NaN before the first one.
    double last_auc() const { return last_auc_; }

private:
    SignalLevel evaluate();

    int n_features_;
    D3Config cfg_;
    int recent_cap_;
    std::deque<Eigen::VectorXd> buf_;
    Rng rng_;
    double last_auc_;
};

/// Area under the ROC curve by the rank statistic (average ranks on tied
/// scores). labels are 0/1; both classes must be present.
double rank_auc(const std::vector<double>& scores, const std::vector<int>& labels);

/// Unsupervised image-based window monitor. Renders the last `window`
/// instances as a min-max normalized matrix (running per-feature bounds) and
/// every full window compares it to a reference matrix by mean squared
/// deviation. MSD outside the adaptive [lower, upper] control limits is
/// drift and replaces the reference; `consecutive_extremes` in-bound values
/// in the outer half of the band widen the limits by one estimated sigma.
/// Limits are estimated from seeded row permutations of the reference.
struct IbddConfig {
    int window = 200;
    int consecutive_extremes = 10;
    int n_permutations = 20;
    /// Half-width of the control band in permutation-sigma units. Permuted
    /// rows of one window understate window-to-window MSD spread by roughly
    /// half, so this is calibrated wider than a plain 3-sigma band.
    double limit_sigmas = 6.0;
    std::uint64_t seed = 0;
};

class IbddDetector {
public:
    IbddDetector(int n_features, IbddConfig cfg = {});

    SignalLevel update(const Eigen::VectorXd& x);

    double last_msd() const { return last_msd_; }
    double lower_limit() const { return lower_; }
    double upper_limit() const { return upper_; }

private:
    void refresh_limits();
    Eigen::MatrixXd render(const std::vector<Eigen::VectorXd>& rows) const;

    int n_features_;
    IbddConfig cfg_;
    std::vector<Eigen::VectorXd> reference_;
    std::vector<Eigen::VectorXd> pending_;
    Eigen::VectorXd fmin_, fmax_;
    bool bounds_init_ = false;
    double lower_ = 0.0, upper_ = 0.0, sigma_hat_ = 0.0;
    double last_msd_;
    int consecutive_ = 0;
    Rng rng_;
};

}  // namespace driftbench
