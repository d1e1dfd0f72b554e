#include "driftbench/detectors.hpp"

#include <cmath>

namespace driftbench {

const char* signal_name(SignalLevel s) {
    switch (s) {
        case SignalLevel::Stable: return "stable";
        case SignalLevel::Warning: return "warning";
        case SignalLevel::Drift: return "drift";
    }
    return "?";
}

DdmDetector::DdmDetector() : DdmDetector(Config{}) {}

DdmDetector::DdmDetector(Config cfg) : cfg_(cfg) {
    if (cfg_.min_instances < 1) throw ConfigError("DDM: min_instances must be >= 1");
}

SignalLevel DdmDetector::update(bool correct) {
    ++n_;
    if (!correct) ++errors_;
    if (n_ < cfg_.min_instances) return SignalLevel::Stable;

    const double p = static_cast<double>(errors_) / static_cast<double>(n_);
    const double s = std::sqrt(p * (1.0 - p) / static_cast<double>(n_));
    if (!minima_set_ || p + s <= p_min_ + s_min_) {
        p_min_ = p;
        s_min_ = s;
        minima_set_ = true;
    }
    if (p + s > p_min_ + cfg_.drift_sigmas * s_min_) {
        n_ = 0;
        errors_ = 0;
        minima_set_ = false;
        p_min_ = s_min_ = 0.0;
        return SignalLevel::Drift;
    }
    if (p + s > p_min_ + cfg_.warning_sigmas * s_min_) return SignalLevel::Warning;
    return SignalLevel::Stable;
}

AdwinDetector::AdwinDetector() : AdwinDetector(Config{}) {}

AdwinDetector::AdwinDetector(Config cfg) : cfg_(cfg) {
    if (!(cfg_.delta > 0.0 && cfg_.delta < 1.0)) throw ConfigError("ADWIN: delta must lie in (0,1)");
    if (cfg_.max_buckets_per_level < 1) throw ConfigError("ADWIN: bucket capacity must be >= 1");
    if (!(cfg_.value_min < cfg_.value_max)) throw ConfigError("ADWIN: empty value range");
}

AdwinDetector::AdwinDetector(double delta) : AdwinDetector(Config{.delta = delta}) {}

void AdwinDetector::insert(double value) {
    if (rows_.empty()) rows_.emplace_back();
    rows_[0].push_back(Bucket{value, 0.0});
    ++count_;
    if (count_ > 1) {
        const double prev_mean = sum_ / static_cast<double>(count_ - 1);
        var_sum_ += static_cast<double>(count_ - 1) * (value - prev_mean) * (value - prev_mean) /
                    static_cast<double>(count_);
    }
    sum_ += value;
}

void AdwinDetector::compress() {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (static_cast<int>(rows_[r].size()) <= cfg_.max_buckets_per_level) break;
        if (r + 1 >= rows_.size()) rows_.emplace_back();
        const double n = static_cast<double>(std::int64_t{1} << r);
        Bucket a = rows_[r].front();
        rows_[r].pop_front();
        Bucket b = rows_[r].front();
        rows_[r].pop_front();
        const double u1 = a.sum / n;
        const double u2 = b.sum / n;
        Bucket merged;
        merged.sum = a.sum + b.sum;
        merged.var = a.var + b.var + (n / 2.0) * (u1 - u2) * (u1 - u2);
        rows_[r + 1].push_back(merged);
    }
}

void AdwinDetector::drop_oldest() {
    int r = static_cast<int>(rows_.size()) - 1;
    while (r >= 0 && rows_[r].empty()) --r;
    if (r < 0) return;
    const double n1 = static_cast<double>(std::int64_t{1} << r);
    Bucket b = rows_[r].front();
    rows_[r].pop_front();
    count_ -= static_cast<std::int64_t>(n1);
    sum_ -= b.sum;
    if (count_ > 0) {
        const double u1 = b.sum / n1;
        const double u_rest = sum_ / static_cast<double>(count_);
        var_sum_ -= b.var + n1 * static_cast<double>(count_) * (u1 - u_rest) * (u1 - u_rest) /
                               (n1 + static_cast<double>(count_));
        if (var_sum_ < 0.0) var_sum_ = 0.0;
    } else {
        var_sum_ = 0.0;
        sum_ = 0.0;
    }
    while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

bool AdwinDetector::cut_violated(double n0, double u0, double n1, double u1) const {
    const double n = static_cast<double>(count_);
    const double dd = std::log(2.0 * std::log(n) / cfg_.delta);
    const double v = var_sum_ / n;
    const double m = 1.0 / (n0 - cfg_.min_sub_window + 1.0) +
                     1.0 / (n1 - cfg_.min_sub_window + 1.0);
    const double eps = std::sqrt(2.0 * m * v * dd) + (2.0 / 3.0) * dd * m;
    return std::fabs(u0 - u1) > eps;
}

bool AdwinDetector::shrink_once() {
    // Scan splits from oldest to newest; restart after any drop.
    double n0 = 0.0, s0 = 0.0;
    for (int r = static_cast<int>(rows_.size()) - 1; r >= 0; --r) {
        const double bn = static_cast<double>(std::int64_t{1} << r);
        for (const Bucket& b : rows_[r]) {
            n0 += bn;
            s0 += b.sum;
            const double n1 = static_cast<double>(count_) - n0;
            if (n1 < cfg_.min_sub_window) return false;
            if (n0 < cfg_.min_sub_window) continue;
            const double s1 = sum_ - s0;
            if (cut_violated(n0, s0 / n0, n1, s1 / n1)) {
                drop_oldest();
                return true;
            }
        }
    }
    return false;
}

SignalLevel AdwinDetector::update(double value) {
    if (value < cfg_.value_min || value > cfg_.value_max) {
        throw InputError("ADWIN: value outside declared range");
    }
    insert(value);
    compress();
    bool drift = false;
    if (count_ >= cfg_.min_window) {
        while (shrink_once()) drift = true;
    }
    return drift ? SignalLevel::Drift : SignalLevel::Stable;
}

}  // namespace driftbench
