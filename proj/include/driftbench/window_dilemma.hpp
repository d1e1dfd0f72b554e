#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "driftbench/core.hpp"
#include "driftbench/datasets.hpp"

namespace driftbench {

/// Uniform-bin histogram with normalized masses.
struct Histogram {
    double lo = 0.0;
    double bin_width = 0.0;
    Eigen::VectorXd mass;

    double edge(int i) const { return lo + i * bin_width; }
    int bins() const { return static_cast<int>(mass.size()); }
};

/// Histogram over [lo, lo + bins*bin_width); samples outside the range are
/// clamped into the boundary bins so the masses always sum to 1.
Histogram make_histogram(const std::vector<double>& samples, double lo, double bin_width,
                         int bins);

/// Total variation distance between two histograms on identical binnings.
double total_variation(const Histogram& a, const Histogram& b);

/// Splits a window at timestep k: left holds t in [i, k], right t in (k, j].
std::pair<SampleWindow, SampleWindow> partition(const SampleWindow& window, std::int64_t k);

struct DilemmaRecord {
    std::int64_t k = 0;
    std::int64_t left_count = 0, right_count = 0;
    double left_mean = 0.0, left_std = 0.0;
    double right_mean = 0.0, right_std = 0.0;
    double empirical_dissimilarity = 0.0;  // S(W(i,k), W(k,j))
    double true_dissimilarity = 0.0;       // S(D_i, D_j), same binning
};

struct DilemmaConfig {
    std::int64_t i = 0;
    std::int64_t j = 100;
    int samples_per_step = 10;
    double sigma = 1.0;
    int step_period = 10;
    MuSchedule mu_schedule = MuSchedule::Step;
    std::vector<std::int64_t> k_values;  // empty: every k in (i, j)
    std::uint64_t seed = 0;
    double bin_width = 0.25;
    int true_sample_count = 10000;
    int min_samples_per_side = 2;
};

struct DilemmaOutput {
    std::vector<DilemmaRecord> records;
    std::vector<std::int64_t> skipped_k;  // sub-window too small to histogram
    double mu_i = 0.0, mu_j = 0.0;        // the endpoint concepts compared
};

/// The windowing experiment: draw samples_per_step values per timestep from
/// the drifting Gaussian, and for every partition point k compare the
/// empirical sub-window histograms against each other and against the true
/// endpoint distributions.
DilemmaOutput dilemma_sweep(const DilemmaConfig& cfg);

/// The four illustration panels: the true endpoint distributions and the
/// sub-window pairs at k near i, the midpoint, and near j.
struct DilemmaPanel {
    std::string name;
    Histogram left, right;
};
std::vector<DilemmaPanel> dilemma_panels(const DilemmaConfig& cfg);

struct ConceptSpan {
    int concept_id = 0;
    std::int64_t start = 0;  // inclusive
    std::int64_t end = 0;    // exclusive
    std::int64_t samples = 0;
};

struct GroundTruthDriftStats {
    int concept_id = 0;
    std::int64_t persistence = 0;
    std::int64_t sample_size = 0;
    double sample_rate = 0.0;
    bool blip = false;  // sample_size below the configured floor
};

/// Per-concept detectability statistics from a known concept schedule.
/// Throws ScheduleError on overlapping spans.
std::vector<GroundTruthDriftStats> ground_truth_stats(std::vector<ConceptSpan> schedule,
                                                      std::int64_t blip_floor = 5);

/// The concept schedule realized by a stepwise synthetic drift config with
/// samples_per_step draws per timestep.
std::vector<ConceptSpan> concept_schedule(const SyntheticDriftConfig& cfg,
                                          int samples_per_step = 1);

}  // namespace driftbench
