#include "driftbench/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace driftbench {

IbddDetector::IbddDetector(int n_features, IbddConfig cfg)
    : n_features_(n_features),
      cfg_(cfg),
      last_msd_(std::numeric_limits<double>::quiet_NaN()),
      rng_(cfg.seed) {
    if (n_features_ < 1) throw ConfigError("IBDD: n_features must be >= 1");
    if (cfg_.window < 2) throw ConfigError("IBDD: window must be >= 2");
    if (cfg_.n_permutations < 2) throw ConfigError("IBDD: need >= 2 permutations");
    fmin_ = Eigen::VectorXd::Constant(n_features_, std::numeric_limits<double>::infinity());
    fmax_ = Eigen::VectorXd::Constant(n_features_, -std::numeric_limits<double>::infinity());
}

Eigen::MatrixXd IbddDetector::render(const std::vector<Eigen::VectorXd>& rows) const {
    Eigen::MatrixXd img(static_cast<int>(rows.size()), n_features_);
    for (int r = 0; r < img.rows(); ++r) {
        for (int f = 0; f < n_features_; ++f) {
            const double span = fmax_[f] - fmin_[f];
            img(r, f) = span > 0.0 ? (rows[r][f] - fmin_[f]) / span : 0.5;
        }
    }
    return img;
}

void IbddDetector::refresh_limits() {
    const Eigen::MatrixXd ref = render(reference_);
    std::vector<double> msds(cfg_.n_permutations);
    std::vector<int> perm(reference_.size());
    for (int p = 0; p < cfg_.n_permutations; ++p) {
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i) {
            std::swap(perm[i], perm[rng_.uniform_int(0, i)]);
        }
        double acc = 0.0;
        for (int r = 0; r < ref.rows(); ++r) {
            acc += (ref.row(r) - ref.row(perm[r])).squaredNorm();
        }
        msds[p] = acc / (static_cast<double>(ref.rows()) * n_features_);
    }
    const double mu =
        std::accumulate(msds.begin(), msds.end(), 0.0) / static_cast<double>(msds.size());
    double var = 0.0;
    for (double m : msds) var += (m - mu) * (m - mu);
    var /= static_cast<double>(msds.size());
    sigma_hat_ = std::max(std::sqrt(var), 1e-12);
    upper_ = mu + cfg_.limit_sigmas * sigma_hat_;
    lower_ = mu - cfg_.limit_sigmas * sigma_hat_;
    consecutive_ = 0;
}

SignalLevel IbddDetector::update(const Eigen::VectorXd& x) {
    if (x.size() != n_features_) throw InputError("IBDD: feature dimension mismatch");
    fmin_ = fmin_.cwiseMin(x);
    fmax_ = fmax_.cwiseMax(x);
    pending_.push_back(x);
    if (static_cast<int>(pending_.size()) < cfg_.window) return SignalLevel::Stable;

    if (reference_.empty()) {
        reference_ = std::move(pending_);
        pending_.clear();
        refresh_limits();
        return SignalLevel::Stable;
    }

    const Eigen::MatrixXd ref = render(reference_);
    const Eigen::MatrixXd cur = render(pending_);
    last_msd_ = (ref - cur).squaredNorm() / (static_cast<double>(ref.rows()) * n_features_);

    if (last_msd_ > upper_ || last_msd_ < lower_) {
        reference_ = std::move(pending_);
        pending_.clear();
        refresh_limits();
        return SignalLevel::Drift;
    }

    const double center = (upper_ + lower_) / 2.0;
    const double half_band = (upper_ - lower_) / 2.0;
    if (std::fabs(last_msd_ - center) > 0.5 * half_band) {
        if (++consecutive_ >= cfg_.consecutive_extremes) {
            upper_ += sigma_hat_;
            lower_ -= sigma_hat_;
            consecutive_ = 0;
        }
    } else {
        consecutive_ = 0;
    }
    pending_.clear();
    return SignalLevel::Stable;
}

}  // namespace driftbench
