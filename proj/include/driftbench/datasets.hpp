#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "driftbench/core.hpp"

namespace driftbench {

/// One row of the benchmark roster. The numeric fields are fixed constants
/// for the 11 known ids (see benchmark_datasets()); reset_n drives the
/// periodic-reset techniques and retrain_n the batch forest schedules.
struct DatasetDescriptor {
    std::string id;
    int n_classes = 0;
    int n_features = 0;
    std::int64_t n_samples = 0;
    int reset_n = 60;
    int retrain_n = 50;
    std::string source_path;
};

/// The 11 benchmark stream descriptors (EL, FC, IA, II, KS, LX, MR, NW, OZ,
/// RT, YG) with their reset/retrain schedules.
const std::vector<DatasetDescriptor>& benchmark_datasets();

/// nullptr when the id is unknown.
const DatasetDescriptor* find_dataset(std::string_view id);

struct LoadOptions {
    /// 0-based column index of the label; -1 means the last column.
    int label_column = -1;
    /// Field delimiter; '\0' autodetects between ',' and ';' (then tab).
    char delimiter = '\0';
    /// Pins the label-id order. Empty: labels are interned in
    /// first-appearance order.
    std::vector<std::string> declared_labels;
};

struct LoadResult {
    Stream stream;
    StreamSchema schema;
};

/// Parses a delimited-text stream file, one instance per row. A first row
/// whose feature fields are non-numeric is treated as a header and supplies
/// feature names. Missing values are rejected, not imputed.
LoadResult load_stream(const std::string& path, const LoadOptions& opts = {});

/// load_stream plus an integrity check of instance/feature/class counts
/// against the descriptor.
LoadResult load_dataset(const std::string& path, const DatasetDescriptor& desc,
                        const LoadOptions& opts = {});

enum class DriftKind { IncrementalGaussian, AbruptClassSwap, Stationary };
enum class MuSchedule { Step, Ramp };

/// Config for the seeded synthetic generators. The incremental-Gaussian
/// stream draws X_t ~ N(mu_t, sigma^2) with mu_t stepping by step_period/10
/// every step_period timesteps (mu_t = t/10 with the defaults); the ramp
/// schedule interpolates linearly between the same update points.
struct SyntheticDriftConfig {
    int n_steps = 0;
    double sigma = 1.0;
    int step_period = 10;
    DriftKind drift_kind = DriftKind::IncrementalGaussian;
    MuSchedule mu_schedule = MuSchedule::Step;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Mean of the generating Gaussian at timestep t under the config schedule.
double drift_mu_at(const SyntheticDriftConfig& cfg, std::int64_t t);

/// Unlabeled single-feature Gaussian stream (incremental drift or
/// stationary). Pure function of its config, seed included.
Stream gaussian_drift_stream(const SyntheticDriftConfig& cfg);

/// Labeled 2-feature, 2-class stream whose class-conditional means swap at
/// switch_t: class 0 at (0,0) and class 1 at (3,3) before, swapped after.
/// Labels alternate, so classes stay balanced. A P(Y|X) change fixture.
Stream abrupt_class_stream(int n_steps, int switch_t, std::uint64_t seed);

/// Schema for abrupt_class_stream outputs.
StreamSchema abrupt_class_schema();

/// Schema for gaussian_drift_stream outputs (one feature, no labels).
StreamSchema gaussian_drift_schema();

/// One line of the fetch manifest: where a dataset comes from and how to
/// check it. label_column -1 means last column.
struct ManifestEntry {
    std::string id;
    std::string url;
    std::string sha256;
    int label_column = -1;
    std::string filename;
};

/// Plain-text manifest: one `id url sha256 label_column [filename]` line per
/// dataset; '#' starts a comment.
std::vector<ManifestEntry> load_manifest(const std::string& path);

/// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::string& path);

}  // namespace driftbench
