#include "driftbench/window_dilemma.hpp"

#include <algorithm>
#include <cmath>

namespace driftbench {

Histogram make_histogram(const std::vector<double>& samples, double lo, double bin_width,
                         int bins) {
    if (bins < 1 || !(bin_width > 0.0)) {
        throw InputError("make_histogram: need bins >= 1 and bin_width > 0");
    }
    if (samples.empty()) throw InputError("make_histogram: no samples");
    Histogram h;
    h.lo = lo;
    h.bin_width = bin_width;
    h.mass = Eigen::VectorXd::Zero(bins);
    for (double v : samples) {
        int b = static_cast<int>(std::floor((v - lo) / bin_width));
        b = std::clamp(b, 0, bins - 1);
        h.mass[b] += 1.0;
    }
    h.mass /= static_cast<double>(samples.size());
    return h;
}

double total_variation(const Histogram& a, const Histogram& b) {
    if (a.bins() != b.bins() || a.lo != b.lo || a.bin_width != b.bin_width) {
        throw InputError("total_variation: histograms must share bin edges");
    }
    return 0.5 * (a.mass - b.mass).cwiseAbs().sum();
}

std::pair<SampleWindow, SampleWindow> partition(const SampleWindow& window, std::int64_t k) {
    const WindowSpec& spec = window.spec;
    if (!(spec.i < k && k < spec.j)) {
        throw InputError("partition: require i < k < j, got k=" + std::to_string(k));
    }
    SampleWindow left, right;
    left.spec = WindowSpec{spec.i, k, std::nullopt};
    right.spec = WindowSpec{k, spec.j, std::nullopt};
    for (const Instance& inst : window.items) {
        (inst.t <= k ? left : right).items.push_back(inst);
    }
    return {std::move(left), std::move(right)};
}

namespace {

struct Moments {
    double mean = 0.0, sd = 0.0;
};

Moments sample_moments(const std::vector<double>& v) {
    Moments m;
    if (v.empty()) return m;
    double s = 0.0;
    for (double x : v) s += x;
    m.mean = s / static_cast<double>(v.size());
    double q = 0.0;
    for (double x : v) q += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(q / static_cast<double>(v.size()));
    return m;
}

std::vector<double> values_of(const SampleWindow& w) {
    std::vector<double> out;
    out.reserve(w.items.size());
    for (const Instance& inst : w.items) out.push_back(inst.x[0]);
    return out;
}

struct SweepContext {
    Stream stream;
    double lo = 0.0;
    int bins = 0;
    double mu_i = 0.0, mu_j = 0.0;
    Histogram true_i, true_j;
};

SweepContext build_context(const DilemmaConfig& cfg) {
    if (!(cfg.i < cfg.j)) throw InputError("dilemma_sweep: require i < j");
    if (cfg.samples_per_step < 1) throw ConfigError("dilemma_sweep: samples_per_step >= 1");

    SyntheticDriftConfig scfg;
    scfg.n_steps = static_cast<int>(cfg.j - cfg.i + 1);
    scfg.sigma = cfg.sigma;
    scfg.step_period = cfg.step_period;
    scfg.mu_schedule = cfg.mu_schedule;

    SweepContext ctx;
    ctx.mu_i = drift_mu_at(scfg, cfg.i);
    ctx.mu_j = drift_mu_at(scfg, cfg.j);

    Rng rng(cfg.seed);
    for (std::int64_t t = cfg.i; t <= cfg.j; ++t) {
        const double mu = drift_mu_at(scfg, t);
        for (int s = 0; s < cfg.samples_per_step; ++s) {
            Instance inst;
            inst.t = t;
            inst.x.resize(1);
            inst.x[0] = rng.normal(mu, cfg.sigma);
            ctx.stream.push_back(std::move(inst));
        }
    }

    const double mu_lo = std::min(ctx.mu_i, ctx.mu_j);
    const double mu_hi = std::max(ctx.mu_i, ctx.mu_j);
    ctx.lo = mu_lo - 5.0 * cfg.sigma;
    const double hi = mu_hi + 5.0 * cfg.sigma;
    ctx.bins = std::max(1, static_cast<int>(std::ceil((hi - ctx.lo) / cfg.bin_width)));

    Rng true_rng(rng.child_seed());
    std::vector<double> di(cfg.true_sample_count), dj(cfg.true_sample_count);
    for (auto& v : di) v = true_rng.normal(ctx.mu_i, cfg.sigma);
    for (auto& v : dj) v = true_rng.normal(ctx.mu_j, cfg.sigma);
    ctx.true_i = make_histogram(di, ctx.lo, cfg.bin_width, ctx.bins);
    ctx.true_j = make_histogram(dj, ctx.lo, cfg.bin_width, ctx.bins);
    return ctx;
}

}  // namespace

DilemmaOutput dilemma_sweep(const DilemmaConfig& cfg) {
    SweepContext ctx = build_context(cfg);
    const double true_tv = total_variation(ctx.true_i, ctx.true_j);

    std::vector<std::int64_t> ks = cfg.k_values;
    if (ks.empty()) {
        for (std::int64_t k = cfg.i + 1; k < cfg.j; ++k) ks.push_back(k);
    }

    DilemmaOutput out;
    out.mu_i = ctx.mu_i;
    out.mu_j = ctx.mu_j;
    const SampleWindow full = slice_window(ctx.stream, WindowSpec{cfg.i, cfg.j, std::nullopt});

    for (std::int64_t k : ks) {
        auto [left, right] = partition(full, k);
        if (static_cast<int>(left.size()) < cfg.min_samples_per_side ||
            static_cast<int>(right.size()) < cfg.min_samples_per_side) {
            out.skipped_k.push_back(k);
            continue;
        }
        const std::vector<double> lv = values_of(left);
        const std::vector<double> rv = values_of(right);
        const Moments lm = sample_moments(lv);
        const Moments rm = sample_moments(rv);

        DilemmaRecord rec;
        rec.k = k;
        rec.left_count = static_cast<std::int64_t>(lv.size());
        rec.right_count = static_cast<std::int64_t>(rv.size());
        rec.left_mean = lm.mean;
        rec.left_std = lm.sd;
        rec.right_mean = rm.mean;
        rec.right_std = rm.sd;
        rec.empirical_dissimilarity =
            total_variation(make_histogram(lv, ctx.lo, cfg.bin_width, ctx.bins),
                            make_histogram(rv, ctx.lo, cfg.bin_width, ctx.bins));
        rec.true_dissimilarity = true_tv;
        out.records.push_back(rec);
    }
    return out;
}

std::vector<DilemmaPanel> dilemma_panels(const DilemmaConfig& cfg) {
    SweepContext ctx = build_context(cfg);
    const SampleWindow full = slice_window(ctx.stream, WindowSpec{cfg.i, cfg.j, std::nullopt});
    std::vector<DilemmaPanel> panels;
    panels.push_back({"true-distributions", ctx.true_i, ctx.true_j});
    const std::int64_t mid = (cfg.i + cfg.j) / 2;
    for (auto [name, k] : std::initializer_list<std::pair<const char*, std::int64_t>>{
             {"k-near-start", cfg.i + 1}, {"k-midpoint", mid}, {"k-near-end", cfg.j - 1}}) {
        auto [left, right] = partition(full, k);
        panels.push_back({name,
                          make_histogram(values_of(left), ctx.lo, cfg.bin_width, ctx.bins),
                          make_histogram(values_of(right), ctx.lo, cfg.bin_width, ctx.bins)});
    }
    return panels;
}

std::vector<GroundTruthDriftStats> ground_truth_stats(std::vector<ConceptSpan> schedule,
                                                      std::int64_t blip_floor) {
    std::sort(schedule.begin(), schedule.end(),
              [](const ConceptSpan& a, const ConceptSpan& b) { return a.start < b.start; });
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i].end <= schedule[i].start) {
            throw ScheduleError("ground_truth_stats: empty concept span");
        }
        if (i + 1 < schedule.size() && schedule[i + 1].start < schedule[i].end) {
            throw ScheduleError("ground_truth_stats: overlapping concept spans");
        }
    }
    std::vector<GroundTruthDriftStats> out;
    out.reserve(schedule.size());
    for (const ConceptSpan& span : schedule) {
        GroundTruthDriftStats s;
        s.concept_id = span.concept_id;
        s.persistence = span.end - span.start;
        s.sample_size = span.samples;
        s.sample_rate = static_cast<double>(span.samples) / static_cast<double>(s.persistence);
        s.blip = span.samples < blip_floor;
        out.push_back(s);
    }
    return out;
}

std::vector<ConceptSpan> concept_schedule(const SyntheticDriftConfig& cfg, int samples_per_step) {
    cfg.validate();
    if (samples_per_step < 1) throw ConfigError("concept_schedule: samples_per_step >= 1");
    if (cfg.mu_schedule != MuSchedule::Step) {
        throw ScheduleError("concept_schedule: only the stepwise schedule has stable concepts");
    }
    std::vector<ConceptSpan> out;
    if (cfg.drift_kind == DriftKind::Stationary) {
        out.push_back({0, 0, cfg.n_steps,
                       static_cast<std::int64_t>(cfg.n_steps) * samples_per_step});
        return out;
    }
    for (std::int64_t start = 0; start < cfg.n_steps; start += cfg.step_period) {
        const std::int64_t end = std::min<std::int64_t>(start + cfg.step_period, cfg.n_steps);
        ConceptSpan span;
        span.concept_id = static_cast<int>(start / cfg.step_period);
        span.start = start;
        span.end = end;
        span.samples = (end - start) * samples_per_step;
        out.push_back(span);
    }
    return out;
}

}  // namespace driftbench
