#include "driftbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace driftbench {

void MetricTrace::record(int actual_class, int predicted_class) {
    if (actual_class < 0 || actual_class >= confusion.rows() || predicted_class < 0 ||
        predicted_class >= confusion.cols()) {
        throw InputError("metric trace: class id out of range");
    }
    correct.push_back(actual_class == predicted_class ? 1 : 0);
    actual.push_back(actual_class);
    predicted.push_back(predicted_class);
    confusion(actual_class, predicted_class) += 1.0;
}

MetricTrace prequential_run(AdaptiveModel& model, const Stream& stream) {
    MetricTrace trace(model.n_classes());
    for (const Instance& inst : stream) {
        const StepResult r = model.step(inst);
        if (r.scored) trace.record(*inst.y, r.predicted);
    }
    return trace;
}

double mean_accuracy(const MetricTrace& trace) {
    if (trace.scored() == 0) throw MetricError("mean_accuracy: empty trace");
    const double n = static_cast<double>(trace.scored());
    return std::accumulate(trace.correct.begin(), trace.correct.end(), 0.0) / n;
}

double running_accuracy_time_average(const MetricTrace& trace) {
    if (trace.scored() == 0) throw MetricError("running accuracy: empty trace");
    double correct_so_far = 0.0;
    double sum_running = 0.0;
    for (std::size_t i = 0; i < trace.correct.size(); ++i) {
        correct_so_far += trace.correct[i];
        sum_running += correct_so_far / static_cast<double>(i + 1);
    }
    return sum_running / static_cast<double>(trace.correct.size());
}

double cohen_kappa(const Eigen::MatrixXd& confusion) {
    const double total = confusion.sum();
    if (!(total > 0.0)) throw MetricError("cohen_kappa: empty confusion matrix");
    const double p_o = confusion.trace() / total;
    const Eigen::VectorXd row = confusion.rowwise().sum();
    const Eigen::VectorXd col = confusion.colwise().sum();
    const double p_e = row.dot(col) / (total * total);
    if (p_e >= 1.0) return 0.0;
    return (p_o - p_e) / (1.0 - p_e);
}

double windowed_kappa(const MetricTrace& trace, int window) {
    if (window < 1) throw ConfigError("windowed_kappa: window must be >= 1");
    const std::int64_t n = trace.scored();
    if (n == 0) throw MetricError("windowed_kappa: empty trace");
    const int classes = static_cast<int>(trace.confusion.rows());
    if (n < window) return cohen_kappa(trace.confusion);

    double sum = 0.0;
    std::int64_t windows = 0;
    for (std::int64_t start = 0; start + window <= n; start += window) {
        Eigen::MatrixXd conf = Eigen::MatrixXd::Zero(classes, classes);
        for (std::int64_t i = start; i < start + window; ++i) {
            conf(trace.actual[i], trace.predicted[i]) += 1.0;
        }
        sum += cohen_kappa(conf);
        ++windows;
    }
    return sum / static_cast<double>(windows);
}

void ResultsMatrix::set(const std::string& technique, const std::string& dataset,
                        ResultsCell cell) {
    if (std::find(techniques_.begin(), techniques_.end(), technique) == techniques_.end()) {
        techniques_.push_back(technique);
    }
    if (std::find(datasets_.begin(), datasets_.end(), dataset) == datasets_.end()) {
        datasets_.push_back(dataset);
    }
    cells_[{technique, dataset}] = cell;
}

const ResultsCell& ResultsMatrix::at(const std::string& technique,
                                     const std::string& dataset) const {
    auto it = cells_.find({technique, dataset});
    if (it == cells_.end()) {
        throw IntegrityError("results matrix: missing cell (" + technique + ", " + dataset + ")");
    }
    return it->second;
}

bool ResultsMatrix::has(const std::string& technique, const std::string& dataset) const {
    return cells_.count({technique, dataset}) > 0;
}

std::map<std::string, double> median_rank(const ResultsMatrix& results,
                                          const std::vector<std::string>& techniques,
                                          const std::vector<std::string>& datasets) {
    std::map<std::string, std::vector<double>> ranks;
    for (const std::string& ds : datasets) {
        std::vector<std::pair<double, std::string>> col;
        col.reserve(techniques.size());
        for (const std::string& tech : techniques) {
            col.emplace_back(results.at(tech, ds).mean_accuracy, tech);
        }
        std::stable_sort(col.begin(), col.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::size_t pos = 0;
        while (pos < col.size()) {
            std::size_t j = pos;
            while (j + 1 < col.size() && col[j + 1].first == col[pos].first) ++j;
            const double avg = (static_cast<double>(pos + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t q = pos; q <= j; ++q) ranks[col[q].second].push_back(avg);
            pos = j + 1;
        }
    }
    std::map<std::string, double> medians;
    for (const std::string& tech : techniques) {
        std::vector<double>& r = ranks[tech];
        std::sort(r.begin(), r.end());
        const std::size_t n = r.size();
        medians[tech] = n % 2 == 1 ? r[n / 2] : (r[n / 2 - 1] + r[n / 2]) / 2.0;
    }
    return medians;
}

std::string render_scaled(double value, bool comma_decimal) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", value * 100.0);
    std::string s(buf);
    if (comma_decimal) {
        auto dot = s.find('.');
        if (dot != std::string::npos) s[dot] = ',';
    }
    return s;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void emit_report(const ResultsMatrix& results, const std::string& dir,
                 const ReportOptions& opts) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("emit_report: cannot create " + dir + ": " + ec.message());

    const auto& techs = results.techniques();
    const auto& dss = results.datasets();

    {
        std::ofstream csv(dir + "/cells.csv");
        if (!csv) throw IoError("emit_report: cannot write " + dir + "/cells.csv");
        csv << "technique,dataset,mean_accuracy,kappa,running_accuracy_avg,kappa_windowed,"
               "n_scored,warnings,drifts,resets,retrains\n";
        for (const auto& t : techs) {
            for (const auto& d : dss) {
                if (!results.has(t, d)) continue;
                const ResultsCell& c = results.at(t, d);
                csv << t << ',' << d << ',' << fmt_double(c.mean_accuracy) << ','
                    << fmt_double(c.kappa) << ',' << fmt_double(c.running_accuracy_avg) << ','
                    << (c.kappa_windowed ? fmt_double(*c.kappa_windowed) : std::string())
                    << ',' << c.n_scored << ',' << c.warnings << ',' << c.drifts << ','
                    << c.resets << ',' << c.retrains << '\n';
            }
        }
    }

    {
        std::ofstream tm(dir + "/timings.csv");
        if (!tm) throw IoError("emit_report: cannot write " + dir + "/timings.csv");
        tm << "technique,dataset,runtime_seconds\n";
        for (const auto& t : techs) {
            for (const auto& d : dss) {
                if (!results.has(t, d)) continue;
                tm << t << ',' << d << ',' << fmt_double(results.at(t, d).runtime_seconds)
                   << '\n';
            }
        }
    }

    // Rendered tables: only over techniques that cover every dataset, since
    // ranks are undefined for partial rows.
    std::vector<std::string> complete;
    for (const auto& t : techs) {
        bool all = true;
        for (const auto& d : dss) all = all && results.has(t, d);
        if (all) complete.push_back(t);
    }

    std::ofstream tab(dir + "/tables.txt");
    if (!tab) throw IoError("emit_report: cannot write " + dir + "/tables.txt");
    tab << "accuracy definition: " << opts.accuracy_definition << "\n";
    tab << "values are x100; kappa table follows the same scaling\n\n";

    auto write_table = [&](const std::string& title, auto metric, bool with_rank) {
        tab << title << "\n";
        tab << "technique";
        for (const auto& d : dss) tab << '\t' << d;
        if (with_rank) tab << "\tMedRank";
        tab << '\n';
        std::map<std::string, double> med;
        if (with_rank && !complete.empty()) med = median_rank(results, complete, dss);
        for (const auto& t : complete) {
            tab << t;
            for (const auto& d : dss) {
                tab << '\t' << render_scaled(metric(results.at(t, d)), opts.comma_decimal);
            }
            if (with_rank) tab << '\t' << static_cast<long long>(std::floor(med[t] + 0.5));
            tab << '\n';
        }
        tab << '\n';
    };

    write_table("mean accuracy", [](const ResultsCell& c) { return c.mean_accuracy; }, true);
    write_table("mean Cohen's kappa", [](const ResultsCell& c) { return c.kappa; }, false);
}

}  // namespace driftbench
