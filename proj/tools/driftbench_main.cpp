#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftbench/bench.hpp"
#include "driftbench/datasets.hpp"
#include "driftbench/evaluation.hpp"
#include "driftbench/window_dilemma.hpp"

namespace db = driftbench;

namespace {

std::string default_data_dir() {
    if (const char* env = std::getenv("DRIFTBENCH_DATA_DIR")) return env;
    return "data";
}

std::string run_id_for(const std::string& resolved) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : resolved) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(db::mix64(h)));
    return buf;
}

struct BenchCli {
    std::vector<std::string> techniques;
    std::vector<std::string> datasets;
    std::uint64_t seed = 42;
    int workers = 1;
    std::string start_mode = "cold";
    std::string out = "results";
    std::string data_dir = default_data_dir();
    bool full = false;
    int kappa_window = 0;
    bool comma_decimal = false;
};

std::map<std::string, db::ManifestEntry> manifest_by_id(const std::string& data_dir) {
    std::map<std::string, db::ManifestEntry> out;
    const std::string path = data_dir + "/manifest.txt";
    if (!std::filesystem::exists(path)) return out;
    for (auto& e : db::load_manifest(path)) out[e.id] = e;
    return out;
}

int cmd_bench(const BenchCli& cli, const std::string& config_echo) {
    std::vector<std::string> dataset_ids = cli.datasets;
    if (dataset_ids.empty()) {
        for (const auto& d : db::benchmark_datasets()) {
            if (d.id == "FC" && !cli.full) continue;
            dataset_ids.push_back(d.id);
        }
    }

    db::BenchRunConfig run;
    run.master_seed = cli.seed;
    run.techniques = cli.techniques;
    run.workers = cli.workers;
    run.kappa_window = cli.kappa_window;
    run.start_mode = cli.start_mode == "warm" ? db::StartMode::Warm : db::StartMode::Cold;
    for (const auto& t : (run.techniques.empty() ? db::all_technique_ids() : run.techniques)) {
        db::technique_config(t, db::DatasetDescriptor{});  // unknown ids fail before any work
    }

    const auto manifest = manifest_by_id(cli.data_dir);
    std::vector<db::NamedStream> streams;
    std::vector<db::CellFailure> load_failures;
    for (const std::string& id : dataset_ids) {
        const db::DatasetDescriptor* desc = db::find_dataset(id);
        if (!desc) throw db::ConfigError("unknown dataset id: " + id);
        db::LoadOptions opts;
        std::string filename = id + ".csv";
        if (auto it = manifest.find(id); it != manifest.end()) {
            filename = it->second.filename;
            opts.label_column = it->second.label_column;
        }
        const std::string path = cli.data_dir + "/" + filename;
        if (!std::filesystem::exists(path)) {
            std::string hint = "dataset file missing: " + path;
            if (auto it = manifest.find(id); it != manifest.end()) {
                hint += " (fetch from " + it->second.url + ", sha256 " + it->second.sha256 + ")";
            } else {
                hint += " (no manifest entry in " + cli.data_dir + "/manifest.txt)";
            }
            load_failures.push_back({"*", id, hint});
            continue;
        }
        try {
            db::LoadResult loaded = db::load_dataset(path, *desc, opts);
            streams.push_back({*desc, std::move(loaded.stream), std::move(loaded.schema)});
        } catch (const db::Error& e) {
            load_failures.push_back({"*", id, e.what()});
        }
    }

    db::BenchOutput out = db::run_bench(run, streams);
    for (auto& f : load_failures) out.failures.push_back(std::move(f));

    const std::string run_dir = cli.out + "/" + run_id_for(config_echo);
    std::filesystem::create_directories(run_dir);
    db::ReportOptions ropts;
    ropts.comma_decimal = cli.comma_decimal;
    db::emit_report(out.results, run_dir, ropts);
    db::write_events_csv(out.events, run_dir + "/events.csv");
    {
        std::ofstream echo(run_dir + "/config-echo");
        echo << config_echo;
    }

    std::cout << "run directory: " << run_dir << "\n";
    std::cout << "cells completed: "
              << out.results.techniques().size() * out.results.datasets().size() << "\n";
    std::cout << "resolved config:\n" << config_echo;
    if (!out.failures.empty()) {
        std::cerr << "failed cells (" << out.failures.size() << "):\n";
        for (const auto& f : out.failures) {
            std::cerr << "  " << f.technique << " x " << f.dataset << ": " << f.message << "\n";
        }
        return 1;
    }
    return 0;
}

struct DilemmaCli {
    int samples_per_step = 10;
    std::vector<std::int64_t> k;
    std::uint64_t seed = 0;
    std::string mu_schedule = "step";
    std::string out = ".";
    bool emit_histograms = false;
};

int cmd_dilemma(const DilemmaCli& cli) {
    db::DilemmaConfig cfg;
    cfg.samples_per_step = cli.samples_per_step;
    cfg.seed = cli.seed;
    cfg.mu_schedule = cli.mu_schedule == "ramp" ? db::MuSchedule::Ramp : db::MuSchedule::Step;
    for (std::int64_t k : cli.k) {
        if (!(cfg.i < k && k < cfg.j)) {
            throw db::ConfigError("k grid value " + std::to_string(k) + " outside (" +
                                  std::to_string(cfg.i) + ", " + std::to_string(cfg.j) + ")");
        }
    }
    cfg.k_values = cli.k;

    db::DilemmaOutput out = db::dilemma_sweep(cfg);
    std::filesystem::create_directories(cli.out);
    const std::string path = cli.out + "/dilemma.csv";
    std::ofstream csv(path);
    if (!csv) throw db::IoError("cannot write " + path);
    csv << "k,left_count,right_count,left_mean,left_std,right_mean,right_std,"
           "empirical_dissimilarity,true_dissimilarity,samples_per_step,mu_schedule\n";
    for (const auto& r : out.records) {
        char line[512];
        std::snprintf(line, sizeof(line), "%lld,%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%s\n",
                      static_cast<long long>(r.k), static_cast<long long>(r.left_count),
                      static_cast<long long>(r.right_count), r.left_mean, r.left_std,
                      r.right_mean, r.right_std, r.empirical_dissimilarity,
                      r.true_dissimilarity, cfg.samples_per_step, cli.mu_schedule.c_str());
        csv << line;
    }
    for (std::int64_t k : out.skipped_k) {
        std::cerr << "warning: k=" << k << " skipped (sub-window below "
                  << cfg.min_samples_per_side << " samples)\n";
    }
    std::cout << "wrote " << path << " (" << out.records.size() << " records)\n";

    if (cli.emit_histograms) {
        const std::string hpath = cli.out + "/dilemma_histograms.csv";
        std::ofstream hcsv(hpath);
        if (!hcsv) throw db::IoError("cannot write " + hpath);
        hcsv << "panel,side,bin_lo,bin_hi,mass\n";
        for (const auto& panel : db::dilemma_panels(cfg)) {
            for (const auto& [side, hist] :
                 {std::pair{"left", &panel.left}, std::pair{"right", &panel.right}}) {
                for (int b = 0; b < hist->bins(); ++b) {
                    char line[256];
                    std::snprintf(line, sizeof(line), "%s,%s,%.17g,%.17g,%.17g\n",
                                  panel.name.c_str(), side, hist->edge(b), hist->edge(b + 1),
                                  hist->mass[b]);
                    hcsv << line;
                }
            }
        }
        std::cout << "wrote " << hpath << "\n";
    }
    return 0;
}

int cmd_validate(const std::string& manifest_path, const std::string& data_dir) {
    const auto entries = db::load_manifest(manifest_path);
    if (entries.empty()) {
        std::cerr << "error: manifest " << manifest_path << " lists no datasets\n";
        return 2;
    }
    bool any_fail = false;
    std::printf("%-4s %-6s %s\n", "id", "status", "detail");
    for (const auto& e : entries) {
        std::string detail;
        bool ok = true;
        const db::DatasetDescriptor* desc = db::find_dataset(e.id);
        const std::string path = data_dir + "/" + e.filename;
        if (!desc) {
            ok = false;
            detail = "unknown dataset id";
        } else if (!std::filesystem::exists(path)) {
            ok = false;
            detail = "missing file " + path + " (fetch from " + e.url + ")";
        } else {
            if (e.sha256 != "-") {
                const std::string actual = db::sha256_file(path);
                if (actual != e.sha256) {
                    ok = false;
                    detail = "sha256 mismatch: expected " + e.sha256 + ", got " + actual;
                }
            } else {
                detail = "hash unpinned; ";
            }
            if (ok) {
                try {
                    db::LoadOptions opts;
                    opts.label_column = e.label_column;
                    db::load_dataset(path, *desc, opts);
                    detail += "counts ok (" + std::to_string(desc->n_samples) + " x " +
                              std::to_string(desc->n_features) + ", " +
                              std::to_string(desc->n_classes) + " classes)";
                } catch (const db::Error& err) {
                    ok = false;
                    detail = err.what();
                }
            }
        }
        any_fail = any_fail || !ok;
        std::printf("%-4s %-6s %s\n", e.id.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
    }
    return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stream drift benchmark toolkit"};
    app.set_config("--config", "", "sectioned key=value config file; flags override");
    app.require_subcommand(1);

    BenchCli bench_cli;
    CLI::App* bench = app.add_subcommand("bench", "run the technique x dataset benchmark matrix");
    bench->configurable();
    bench->add_option("--techniques", bench_cli.techniques, "comma-separated technique ids")
        ->delimiter(',');
    bench->add_option("--datasets", bench_cli.datasets, "comma-separated dataset ids")
        ->delimiter(',');
    bench->add_option("--seed", bench_cli.seed, "master seed");
    bench->add_option("--workers", bench_cli.workers, "worker threads")->check(CLI::Range(1, 512));
    bench->add_option("--start-mode", bench_cli.start_mode, "batch start mode")
        ->check(CLI::IsMember({"warm", "cold"}));
    bench->add_option("--out", bench_cli.out, "output directory root");
    bench->add_option("--data-dir", bench_cli.data_dir,
                      "dataset root (env DRIFTBENCH_DATA_DIR)");
    bench->add_flag("--full", bench_cli.full, "include the FC stream in the default dataset list");
    bench->add_option("--kappa-window", bench_cli.kappa_window,
                      "also report mean kappa over windows of this size");
    bench->add_flag("--comma-decimal", bench_cli.comma_decimal,
                    "render table values with comma decimals");

    DilemmaCli dilemma_cli;
    CLI::App* dilemma = app.add_subcommand("dilemma", "window partitioning experiment");
    dilemma->configurable();
    dilemma->add_option("--samples-per-step", dilemma_cli.samples_per_step,
                        "samples drawn per timestep")
        ->check(CLI::PositiveNumber);
    dilemma->add_option("--k", dilemma_cli.k, "partition points (default: every k)")
        ->delimiter(',');
    dilemma->add_option("--seed", dilemma_cli.seed, "stream seed");
    dilemma->add_option("--mu-schedule", dilemma_cli.mu_schedule, "mean schedule")
        ->check(CLI::IsMember({"step", "ramp"}));
    dilemma->add_option("--out", dilemma_cli.out, "output directory");
    dilemma->add_flag("--emit-histograms", dilemma_cli.emit_histograms,
                      "also dump the four illustration panels");

    std::string manifest_path;
    std::string validate_data_dir = default_data_dir();
    CLI::App* validate = app.add_subcommand("validate-datasets",
                                            "check dataset files against the manifest");
    validate->add_option("manifest", manifest_path, "manifest file")->required();
    validate->add_option("--data-dir", validate_data_dir, "dataset root");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bench->parsed()) return cmd_bench(bench_cli, app.config_to_str(true, false));
        if (dilemma->parsed()) return cmd_dilemma(dilemma_cli);
        if (validate->parsed()) return cmd_validate(manifest_path, validate_data_dir);
    } catch (const db::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
