#include <doctest.h>

#include <cmath>

#include "driftbench/datasets.hpp"
#include "driftbench/learners.hpp"

using namespace driftbench;

namespace {
const std::string kFixtures = std::string(DRIFTBENCH_SOURCE_DIR) + "/data/fixtures";
}

TEST_CASE("the 11 benchmark descriptors carry the fixed roster values") {
    struct Row {
        const char* id;
        int classes, features;
        std::int64_t samples;
        int reset_n, retrain_n;
    };
    const Row expected[] = {
        {"EL", 2, 8, 45312, 60, 50},    {"FC", 8, 54, 581012, 60, 5000},
        {"IA", 6, 33, 52848, 60, 500},  {"II", 6, 33, 57018, 60, 500},
        {"KS", 4, 10, 1600, 60, 50},    {"LX", 2, 30, 1901, 32, 50},
        {"MR", 2, 3600, 4260, 60, 50},  {"NW", 2, 8, 18159, 120, 50},
        {"OZ", 2, 72, 2534, 84, 50},    {"RT", 10, 27, 82250, 60, 50},
        {"YG", 2, 426, 3300, 60, 50},
    };
    CHECK(benchmark_datasets().size() == 11);
    for (const Row& row : expected) {
        const DatasetDescriptor* d = find_dataset(row.id);
        REQUIRE_MESSAGE(d != nullptr, row.id);
        CHECK(d->n_classes == row.classes);
        CHECK(d->n_features == row.features);
        CHECK(d->n_samples == row.samples);
        CHECK(d->reset_n == row.reset_n);
        CHECK(d->retrain_n == row.retrain_n);
    }
    CHECK(find_dataset("XX") == nullptr);
}

TEST_CASE("load_stream: header, labels interned in first-appearance order") {
    const LoadResult r = load_stream(kFixtures + "/tiny_ok.csv");
    CHECK(r.stream.size() == 10);
    REQUIRE(r.schema.n_features() == 3);
    CHECK(r.schema.feature_names[0] == "temp");
    CHECK(r.schema.feature_names[2] == "flow");
    REQUIRE(r.schema.n_classes() == 3);
    CHECK(r.schema.class_labels[0] == "up");
    CHECK(r.schema.class_labels[1] == "down");
    CHECK(r.schema.class_labels[2] == "stable");
    CHECK(*r.stream[0].y == 0);
    CHECK(*r.stream[2].y == 1);
    CHECK(*r.stream[9].y == 2);
    // timesteps are ordinal and strictly increasing
    for (std::size_t i = 1; i < r.stream.size(); ++i) {
        CHECK(r.stream[i].t == r.stream[i - 1].t + 1);
    }
}

TEST_CASE("load_stream: declared label order overrides first appearance") {
    LoadOptions opts;
    opts.declared_labels = {"down", "up", "stable"};
    const LoadResult r = load_stream(kFixtures + "/tiny_ok.csv", opts);
    CHECK(*r.stream[0].y == 1);
    CHECK(*r.stream[2].y == 0);
}

TEST_CASE("load_stream: a short row is a parse error naming the row") {
    try {
        load_stream(kFixtures + "/tiny_badrow.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 7") != std::string::npos);
    }
}

TEST_CASE("load_stream: semicolon autodetection and missing-value rejection") {
    const LoadResult ok = load_stream(kFixtures + "/tiny_semicolon.csv");
    CHECK(ok.stream.size() == 12);
    CHECK(ok.schema.n_features() == 2);
    CHECK(ok.schema.n_classes() == 3);
    CHECK_THROWS_AS(load_stream(kFixtures + "/tiny_semicolon_missing.csv"), ParseError);
}

TEST_CASE("load_stream: loading twice yields identical sequences") {
    const LoadResult a = load_stream(kFixtures + "/tiny_ok.csv");
    const LoadResult b = load_stream(kFixtures + "/tiny_ok.csv");
    REQUIRE(a.stream.size() == b.stream.size());
    for (std::size_t i = 0; i < a.stream.size(); ++i) {
        CHECK(a.stream[i].t == b.stream[i].t);
        CHECK(a.stream[i].x == b.stream[i].x);
        CHECK(*a.stream[i].y == *b.stream[i].y);
    }
}

TEST_CASE("load_dataset: integrity mismatch names expected and actual counts") {
    DatasetDescriptor desc;
    desc.id = "T1";
    desc.n_samples = 45312;  // fixture has 10
    desc.n_features = 3;
    desc.n_classes = 3;
    try {
        load_dataset(kFixtures + "/tiny_ok.csv", desc);
        FAIL("expected IntegrityError");
    } catch (const IntegrityError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("45312") != std::string::npos);
        CHECK(msg.find("10") != std::string::npos);
    }
}

TEST_CASE("load_stream: missing file is an IoError") {
    CHECK_THROWS_AS(load_stream(kFixtures + "/nope.csv"), IoError);
}

TEST_CASE("gaussian_drift_stream: stepwise mu schedule") {
    SyntheticDriftConfig cfg;
    cfg.n_steps = 101;
    cfg.seed = 11;
    for (int t = 0; t <= 9; ++t) CHECK(drift_mu_at(cfg, t) == 0.0);
    CHECK(drift_mu_at(cfg, 50) == 5.0);
    CHECK(drift_mu_at(cfg, 100) == 10.0);
    cfg.mu_schedule = MuSchedule::Ramp;
    CHECK(drift_mu_at(cfg, 50) == doctest::Approx(5.0));
    CHECK(drift_mu_at(cfg, 55) == doctest::Approx(5.5));

    // Empirically: samples in a concept block center on its mu.
    cfg.mu_schedule = MuSchedule::Step;
    cfg.n_steps = 10000;
    const Stream s = gaussian_drift_stream(cfg);
    REQUIRE(s.size() == 10000);
    double acc = 0.0;
    for (int t = 500; t < 510; ++t) acc += s[t].x[0] - 50.0;
    CHECK(std::fabs(acc / 10.0) < 2.0);
}

TEST_CASE("gaussian_drift_stream: stationary mean over 10k within 0.05 of 0") {
    SyntheticDriftConfig cfg;
    cfg.n_steps = 10000;
    cfg.drift_kind = DriftKind::Stationary;
    cfg.seed = 123;
    const Stream s = gaussian_drift_stream(cfg);
    double sum = 0.0;
    for (const Instance& inst : s) sum += inst.x[0];
    CHECK(std::fabs(sum / 10000.0) < 0.05);
}

TEST_CASE("gaussian_drift_stream: equal seeds give identical sequences") {
    SyntheticDriftConfig cfg;
    cfg.n_steps = 500;
    cfg.seed = 77;
    const Stream a = gaussian_drift_stream(cfg);
    const Stream b = gaussian_drift_stream(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].x[0] == b[i].x[0]);
    cfg.seed = 78;
    const Stream c = gaussian_drift_stream(cfg);
    CHECK(a[0].x[0] != c[0].x[0]);
}

TEST_CASE("gaussian_drift_stream rejects the class-swap kind and bad configs") {
    SyntheticDriftConfig cfg;
    cfg.n_steps = 10;
    cfg.drift_kind = DriftKind::AbruptClassSwap;
    CHECK_THROWS_AS(gaussian_drift_stream(cfg), InputError);
    cfg.drift_kind = DriftKind::IncrementalGaussian;
    cfg.n_steps = 0;
    CHECK_THROWS_AS(gaussian_drift_stream(cfg), ConfigError);
    cfg.n_steps = 10;
    cfg.sigma = 0.0;
    CHECK_THROWS_AS(gaussian_drift_stream(cfg), ConfigError);
}

TEST_CASE("abrupt_class_stream: class-conditional means swap at switch_t") {
    const Stream s = abrupt_class_stream(5000, 4000, 99);
    REQUIRE(s.size() == 5000);

    // A naive Bayes frozen before the switch collapses after it: the swap is
    // a pure P(Y|X) change on well-separated classes.
    GaussianNaiveBayes nb(2, 2);
    for (int t = 0; t < 4000; ++t) nb.learn(s[t].x, *s[t].y);
    int correct = 0;
    for (int t = 4000; t < 5000; ++t) correct += nb.predict(s[t].x) == *s[t].y;
    CHECK(correct / 1000.0 < 0.5);
}

TEST_CASE("abrupt_class_stream: boundary switch and determinism") {
    const Stream one_post = abrupt_class_stream(100, 99, 5);
    CHECK(one_post.size() == 100);
    const Stream a = abrupt_class_stream(200, 100, 5);
    const Stream b = abrupt_class_stream(200, 100, 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(*a[i].y == *b[i].y);
    }
    CHECK_THROWS_AS(abrupt_class_stream(100, 0, 5), InputError);
    CHECK_THROWS_AS(abrupt_class_stream(100, 100, 5), InputError);
}

TEST_CASE("manifest parsing") {
    const auto entries = load_manifest(std::string(DRIFTBENCH_SOURCE_DIR) + "/data/manifest.txt");
    REQUIRE(entries.size() == 11);
    CHECK(entries[0].id == "EL");
    CHECK(entries[0].label_column == -1);
    CHECK(entries[0].filename == "EL.csv");
    CHECK(entries[0].sha256 == "-");
}

TEST_CASE("sha256_file matches a known digest") {
    CHECK(sha256_file(kFixtures + "/tiny_ok.csv") ==
          "7199ba9edf185a9f057399652bc19906e3e187e4a8b4236319c946ec74849eb5");
    CHECK_THROWS_AS(sha256_file(kFixtures + "/nope.csv"), IoError);
}
