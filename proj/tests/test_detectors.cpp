#include <doctest.h>

#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "driftbench/detectors.hpp"

using namespace driftbench;

namespace {

Eigen::VectorXd gauss_vec(Rng& rng, int d, double mu) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.normal(mu, 1.0);
    return x;
}

}  // namespace

TEST_CASE("DDM: silent during warm-up even under pure error") {
    DdmDetector ddm;
    for (int i = 0; i < 29; ++i) CHECK(ddm.update(false) == SignalLevel::Stable);
}

TEST_CASE("DDM: all-correct stream stays stable indefinitely") {
    DdmDetector ddm;
    for (int i = 0; i < 50000; ++i) CHECK(ddm.update(true) == SignalLevel::Stable);
}

TEST_CASE("DDM: error-rate jump 10% -> 60% raises drift inside the jump") {
    DdmDetector ddm;
    Rng rng(314);
    bool drift_before = false, drift_after = false;
    for (int t = 0; t < 1300; ++t) {
        const double p_err = t < 1000 ? 0.10 : 0.60;
        const SignalLevel s = ddm.update(rng.next_unit() >= p_err);
        if (s == SignalLevel::Drift) (t < 1000 ? drift_before : drift_after) = true;
    }
    CHECK_FALSE(drift_before);
    CHECK(drift_after);
}

TEST_CASE("DDM: warning precedes drift on a gradual degradation") {
    DdmDetector ddm;
    Rng rng(99);
    bool saw_warning_before_drift = false, saw_warning = false;
    for (int t = 0; t < 4000; ++t) {
        const double p_err = t < 1000 ? 0.10 : std::min(0.8, 0.10 + (t - 1000) * 0.0005);
        const SignalLevel s = ddm.update(rng.next_unit() >= p_err);
        if (s == SignalLevel::Warning) saw_warning = true;
        if (s == SignalLevel::Drift) {
            saw_warning_before_drift = saw_warning;
            break;
        }
    }
    CHECK(saw_warning_before_drift);
}

TEST_CASE("DDM: self-reset after drift, no immediate re-alarm on the new regime") {
    DdmDetector ddm;
    Rng rng(2718);
    int drift_t = -1;
    for (int t = 0; t < 1300 && drift_t < 0; ++t) {
        const double p_err = t < 1000 ? 0.10 : 0.60;
        if (ddm.update(rng.next_unit() >= p_err) == SignalLevel::Drift) drift_t = t;
    }
    REQUIRE(drift_t > 0);
    CHECK(ddm.instances() == 0);  // statistics restarted
    // steady 60% error is now the reference regime
    for (int t = 0; t < 2000; ++t) {
        CHECK(ddm.update(rng.next_unit() >= 0.60) == SignalLevel::Stable);
    }
}

TEST_CASE("ADWIN: constant input is stable forever") {
    AdwinDetector ad(AdwinDetector::Config{});
    for (int i = 0; i < 20000; ++i) CHECK(ad.update(0.7) == SignalLevel::Stable);
    CHECK(ad.mean() == doctest::Approx(0.7));
    CHECK(ad.window_length() == 20000);
}

TEST_CASE("ADWIN: rejects values outside the declared range") {
    AdwinDetector ad(AdwinDetector::Config{});
    CHECK_THROWS_AS(ad.update(1.5), InputError);
    CHECK_THROWS_AS(ad.update(-0.1), InputError);
    AdwinDetector::Config wide;
    wide.value_min = -10.0;
    wide.value_max = 10.0;
    AdwinDetector ad2(wide);
    CHECK_NOTHROW(ad2.update(5.0));
}

TEST_CASE("ADWIN: config validation") {
    CHECK_THROWS_AS(AdwinDetector(0.0), ConfigError);
    CHECK_THROWS_AS(AdwinDetector(1.0), ConfigError);
    AdwinDetector::Config c;
    c.max_buckets_per_level = 0;
    CHECK_THROWS_AS(AdwinDetector(c), ConfigError);
}

TEST_CASE("ADWIN: detects a Bernoulli 0.2 -> 0.8 shift quickly") {
    int within = 0;
    for (int run = 0; run < 100; ++run) {
        AdwinDetector ad(AdwinDetector::Config{});
        Rng rng(derive_seed(1000, "adwin-shift", std::to_string(run)));
        int first_after = -1;
        for (int t = 0; t < 2000; ++t) {
            const double p = t < 1000 ? 0.2 : 0.8;
            if (ad.update(rng.next_unit() < p ? 1.0 : 0.0) == SignalLevel::Drift &&
                t >= 1000 && first_after < 0) {
                first_after = t;
            }
        }
        if (first_after >= 0 && first_after - 1000 <= 300) ++within;
    }
    CHECK(within >= 95);
}

TEST_CASE("ADWIN: drift drops the oldest pre-change buckets") {
    AdwinDetector ad(AdwinDetector::Config{});
    Rng rng(5150);
    bool drifted = false;
    std::int64_t t_seen = 0;
    for (int t = 0; t < 3000; ++t) {
        const double p = t < 1000 ? 0.2 : 0.8;
        ++t_seen;
        if (ad.update(rng.next_unit() < p ? 1.0 : 0.0) == SignalLevel::Drift) {
            drifted = true;
            CHECK(ad.window_length() < t_seen);
            break;
        }
    }
    CHECK(drifted);
}

TEST_CASE("ADWIN: bucket aggregates equal a naive shadow window over 10k values") {
    AdwinDetector ad(AdwinDetector::Config{});
    Rng rng(424242);
    std::deque<double> shadow;
    double shadow_sum = 0.0;
    for (int t = 0; t < 10000; ++t) {
        // a shifting Bernoulli keeps the window dropping now and then
        const double p = (t / 2500) % 2 == 0 ? 0.3 : 0.7;
        const double v = rng.next_unit() < p ? 1.0 : 0.0;
        ad.update(v);
        shadow.push_back(v);
        shadow_sum += v;
        while (static_cast<std::int64_t>(shadow.size()) > ad.window_length()) {
            shadow_sum -= shadow.front();
            shadow.pop_front();
        }
        REQUIRE(static_cast<std::int64_t>(shadow.size()) == ad.window_length());
        REQUIRE(ad.sum() == shadow_sum);  // exact: 0/1 sums are integers
    }
}

TEST_CASE("ADWIN: mean detection delay is non-decreasing as delta shrinks") {
    double prev_mean = -1.0;
    for (double delta : {0.1, 0.01, 0.002}) {
        double delay_sum = 0.0;
        int n = 0;
        for (int run = 0; run < 10; ++run) {
            AdwinDetector::Config cfg;
            cfg.delta = delta;
            AdwinDetector ad(cfg);
            Rng rng(derive_seed(3000, "adwin-mono", std::to_string(run)));
            int first_after = -1;
            for (int t = 0; t < 2000 && first_after < 0; ++t) {
                const double p = t < 1000 ? 0.2 : 0.8;
                if (ad.update(rng.next_unit() < p ? 1.0 : 0.0) == SignalLevel::Drift &&
                    t >= 1000) {
                    first_after = t;
                }
            }
            REQUIRE(first_after > 0);
            delay_sum += first_after - 1000;
            ++n;
        }
        const double mean_delay = delay_sum / n;
        CHECK(mean_delay >= prev_mean);
        prev_mean = mean_delay;
    }
}

TEST_CASE("rank_auc hand-checked values") {
    CHECK(rank_auc({0.1, 0.2, 0.3, 0.4}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(rank_auc({0.4, 0.3, 0.2, 0.1}, {1, 1, 0, 0}) == doctest::Approx(0.0));
    CHECK(rank_auc({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1}) == doctest::Approx(0.5));
    CHECK(rank_auc({0.9, 0.1, 0.8, 0.2}, {1, 0, 0, 1}) == doctest::Approx(0.75));
    CHECK_THROWS_AS(rank_auc({0.1, 0.2}, {1, 1}), InputError);
    CHECK_THROWS_AS(rank_auc({}, {}), InputError);
}

TEST_CASE("D3: no training happens before both windows fill") {
    D3Config cfg;
    cfg.seed = 9;
    D3Detector det(4, cfg);
    Rng rng(10);
    for (int t = 0; t < 109; ++t) {
        CHECK(det.update(gauss_vec(rng, 4, 0.0)) == SignalLevel::Stable);
    }
    CHECK(std::isnan(det.last_auc()));
    CHECK(det.buffered() == 109);
}

TEST_CASE("D3: separated windows raise drift with AUC near 1") {
    for (auto kind : {D3DiscriminatorKind::LogisticLinear, D3DiscriminatorKind::HoeffdingTree}) {
        D3Config cfg;
        cfg.discriminator = kind;
        cfg.seed = 2020;
        D3Detector det(4, cfg);
        Rng rng(2021);
        for (int t = 0; t < 100; ++t) {
            REQUIRE(det.update(gauss_vec(rng, 4, 0.0)) == SignalLevel::Stable);
        }
        bool drifted = false;
        for (int t = 0; t < 50 && !drifted; ++t) {
            drifted = det.update(gauss_vec(rng, 4, 5.0)) == SignalLevel::Drift;
        }
        CHECK(drifted);
        CHECK(det.last_auc() >= 0.9);
        // the recent window seeded the new reference
        CHECK(det.buffered() == det.recent_capacity());
    }
}

TEST_CASE("D3: identically distributed windows stay stable (single evaluations)") {
    for (auto kind : {D3DiscriminatorKind::LogisticLinear, D3DiscriminatorKind::HoeffdingTree}) {
        int stable = 0;
        for (int run = 0; run < 100; ++run) {
            D3Config cfg;
            cfg.discriminator = kind;
            cfg.seed = derive_seed(501, "d3-trial", std::to_string(run));
            D3Detector det(4, cfg);
            Rng rng(derive_seed(502, "d3-trial-data", std::to_string(run)));
            SignalLevel last = SignalLevel::Stable;
            for (int t = 0; t < 110; ++t) last = det.update(gauss_vec(rng, 4, 0.0));
            if (last == SignalLevel::Stable) ++stable;
        }
        CHECK(stable >= 95);
    }
}

TEST_CASE("D3: stable evaluations slide the windows by the recent size") {
    D3Config cfg;
    cfg.seed = 777;
    D3Detector det(2, cfg);
    Rng rng(778);
    for (int t = 0; t < 110; ++t) det.update(gauss_vec(rng, 2, 0.0));
    // after one stable evaluation the oldest 10 were dropped
    CHECK(det.buffered() == 100);
}

TEST_CASE("D3: deterministic given seed and inputs") {
    D3Config cfg;
    cfg.seed = 31337;
    D3Detector a(3, cfg), b(3, cfg);
    Rng rng(31338);
    for (int t = 0; t < 500; ++t) {
        const Eigen::VectorXd x = gauss_vec(rng, 3, t < 250 ? 0.0 : 2.0);
        CHECK(a.update(x) == b.update(x));
    }
    CHECK(a.last_auc() == b.last_auc());
}

TEST_CASE("D3: dimension mismatch is an input error") {
    D3Detector det(3, D3Config{});
    CHECK_THROWS_AS(det.update(Eigen::VectorXd::Zero(2)), InputError);
}

TEST_CASE("IBDD: constant input renders identical matrices, stable forever") {
    IbddConfig cfg;
    cfg.seed = 1;
    IbddDetector det(4, cfg);
    const Eigen::VectorXd c = Eigen::VectorXd::Constant(4, 3.25);
    for (int t = 0; t < 2000; ++t) CHECK(det.update(c) == SignalLevel::Stable);
    CHECK(det.last_msd() == 0.0);
}

TEST_CASE("IBDD: 5-sigma mean shift fires within two window lengths") {
    for (int run = 0; run < 5; ++run) {
        IbddConfig cfg;
        cfg.seed = derive_seed(40, "ibdd-shift", std::to_string(run));
        IbddDetector det(4, cfg);
        Rng rng(derive_seed(41, "ibdd-shift-data", std::to_string(run)));
        const int shift_at = 1000;
        int detected_at = -1;
        for (int t = 0; t < shift_at + 2 * cfg.window + 1 && detected_at < 0; ++t) {
            const double mu = t < shift_at ? 0.0 : 5.0;
            if (det.update(gauss_vec(rng, 4, mu)) == SignalLevel::Drift && t >= shift_at) {
                detected_at = t;
            }
        }
        REQUIRE(detected_at >= 0);
        CHECK(detected_at - shift_at <= 2 * cfg.window);
    }
}

TEST_CASE("IBDD: reference replacement after drift, no immediate re-alarm") {
    IbddConfig cfg;
    cfg.seed = 4242;
    IbddDetector det(3, cfg);
    Rng rng(4243);
    int drift_t = -1;
    for (int t = 0; t < 2000 && drift_t < 0; ++t) {
        const double mu = t < 1000 ? 0.0 : 5.0;
        if (det.update(gauss_vec(rng, 3, mu)) == SignalLevel::Drift) drift_t = t;
    }
    REQUIRE(drift_t > 0);
    // the shifted regime is now the reference: the next checks stay in-bound
    for (int t = 0; t < 3 * cfg.window; ++t) {
        CHECK(det.update(gauss_vec(rng, 3, 5.0)) == SignalLevel::Stable);
    }
}

TEST_CASE("IBDD: deterministic and dimension-checked") {
    IbddConfig cfg;
    cfg.seed = 99;
    IbddDetector a(2, cfg), b(2, cfg);
    Rng rng(100);
    for (int t = 0; t < 1500; ++t) {
        const Eigen::VectorXd x = gauss_vec(rng, 2, t < 700 ? 0.0 : 4.0);
        CHECK(a.update(x) == b.update(x));
    }
    CHECK_THROWS_AS(a.update(Eigen::VectorXd::Zero(5)), InputError);
}
