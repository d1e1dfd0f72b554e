#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "driftbench/adaptation.hpp"
#include "driftbench/core.hpp"

namespace driftbench {

/// Per-timestep correctness record plus the cumulative confusion matrix
/// (rows = actual class, columns = predicted class).
struct MetricTrace {
    std::vector<std::uint8_t> correct;
    std::vector<std::int32_t> actual;
    std::vector<std::int32_t> predicted;
    Eigen::MatrixXd confusion;

    explicit MetricTrace(int n_classes = 0)
        : confusion(Eigen::MatrixXd::Zero(n_classes, n_classes)) {}

    void record(int actual_class, int predicted_class);
    std::int64_t scored() const { return static_cast<std::int64_t>(correct.size()); }
};

/// Test-then-train over the whole stream: every scored step predicts before
/// its label is revealed. Warm-start training prefixes are consumed but not
/// recorded. An empty stream yields an empty trace.
MetricTrace prequential_run(AdaptiveModel& model, const Stream& stream);

/// Total correct / total scored. Throws MetricError on an empty trace.
double mean_accuracy(const MetricTrace& trace);

/// Time-average of the running-accuracy curve; a secondary reading of "mean
/// accuracy" reported alongside the cumulative one.
double running_accuracy_time_average(const MetricTrace& trace);

/// kappa = (p_o - p_e) / (1 - p_e) from a cumulative confusion matrix;
/// 0 for the degenerate p_e = 1 case. Throws MetricError on an empty matrix.
double cohen_kappa(const Eigen::MatrixXd& confusion);

/// Mean kappa over consecutive windows of `window` scored steps (the final
/// partial window is ignored unless it is the only one).
double windowed_kappa(const MetricTrace& trace, int window);

struct ResultsCell {
    double mean_accuracy = 0.0;
    double kappa = 0.0;
    double running_accuracy_avg = 0.0;
    std::optional<double> kappa_windowed;
    double runtime_seconds = 0.0;
    std::int64_t n_scored = 0;
    std::int64_t warnings = 0;
    std::int64_t drifts = 0;
    std::int64_t resets = 0;
    std::int64_t retrains = 0;
};

/// (technique, dataset) -> cell store with insertion-ordered axes.
class ResultsMatrix {
public:
    void set(const std::string& technique, const std::string& dataset, ResultsCell cell);
    const ResultsCell& at(const std::string& technique, const std::string& dataset) const;
    bool has(const std::string& technique, const std::string& dataset) const;

    const std::vector<std::string>& techniques() const { return techniques_; }
    const std::vector<std::string>& datasets() const { return datasets_; }

private:
    std::vector<std::string> techniques_;
    std::vector<std::string> datasets_;
    std::map<std::pair<std::string, std::string>, ResultsCell> cells_;
};

/// Per-dataset descending-accuracy ranks (ties share the average of their
/// positions), reduced to the per-technique median across datasets. Throws
/// IntegrityError naming the first missing cell.
std::map<std::string, double> median_rank(const ResultsMatrix& results,
                                          const std::vector<std::string>& techniques,
                                          const std::vector<std::string>& datasets);

struct ReportOptions {
    bool comma_decimal = false;  // render 54,3 instead of 54.3
    /// Which accuracy reading is the headline; echoed into every report.
    std::string accuracy_definition = "cumulative (total correct / total scored)";
};

/// Writes cells.csv (machine-readable, raw unscaled values, '.' decimals),
/// tables.txt (accuracy and kappa x100 tables with a MedRank column), and
/// timings.csv. Wall-clock lives only in timings.csv so that cells.csv is
/// byte-identical across reruns of the same seed.
void emit_report(const ResultsMatrix& results, const std::string& dir,
                 const ReportOptions& opts = {});

/// Render helper shared by tables.txt: value*100 with one decimal, comma or
/// point per options.
std::string render_scaled(double value, bool comma_decimal);

}  // namespace driftbench
