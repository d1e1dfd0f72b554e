#include "driftbench/bench.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

namespace driftbench {

const std::vector<std::string>& all_technique_ids() {
    static const std::vector<std::string> ids = {
        "LC",      "MC",       "NB",      "DDM-NB",   "ADWIN-NB", "R-NB",    "D3-LR-NB",
        "D3-HT-NB", "IBDD-NB", "HT",      "DDM-HT",   "ADWIN-HT", "R-HT",    "D3-LR-HT",
        "D3-HT-HT", "IBDD-HT", "ARF",     "S-RF",     "R-RF",     "I-RF",
    };
    return ids;
}

bool is_batch_technique(const std::string& id) {
    return id == "S-RF" || id == "R-RF" || id == "I-RF";
}

AdaptiveConfig technique_config(const std::string& id, const DatasetDescriptor& desc,
                                std::optional<StartMode> start_mode) {
    AdaptiveConfig cfg;

    auto detect = [&](BaseLearnerKind base, DetectorKind det) {
        cfg.base = base;
        cfg.strategy = StrategyKind::DetectReset;
        cfg.detector = det;
    };
    auto periodic = [&](BaseLearnerKind base) {
        cfg.base = base;
        cfg.strategy = StrategyKind::PeriodicReset;
        cfg.reset_every = desc.reset_n;
    };
    auto batch = [&](BatchRegime regime) {
        cfg.strategy = StrategyKind::Batch;
        cfg.regime = regime;
        cfg.retrain_every = desc.retrain_n;
        cfg.start_mode = start_mode.value_or(StartMode::Cold);
    };

    if (id == "LC") cfg.base = BaseLearnerKind::LastClass;
    else if (id == "MC") cfg.base = BaseLearnerKind::MajorityClass;
    else if (id == "NB") cfg.base = BaseLearnerKind::NaiveBayes;
    else if (id == "HT") cfg.base = BaseLearnerKind::HoeffdingTree;
    else if (id == "ARF") cfg.base = BaseLearnerKind::Arf;
    else if (id == "DDM-NB") detect(BaseLearnerKind::NaiveBayes, DetectorKind::Ddm);
    else if (id == "ADWIN-NB") detect(BaseLearnerKind::NaiveBayes, DetectorKind::Adwin);
    else if (id == "D3-LR-NB") detect(BaseLearnerKind::NaiveBayes, DetectorKind::D3Lr);
    else if (id == "D3-HT-NB") detect(BaseLearnerKind::NaiveBayes, DetectorKind::D3Ht);
    else if (id == "IBDD-NB") detect(BaseLearnerKind::NaiveBayes, DetectorKind::Ibdd);
    else if (id == "DDM-HT") detect(BaseLearnerKind::HoeffdingTree, DetectorKind::Ddm);
    else if (id == "ADWIN-HT") detect(BaseLearnerKind::HoeffdingTree, DetectorKind::Adwin);
    else if (id == "D3-LR-HT") detect(BaseLearnerKind::HoeffdingTree, DetectorKind::D3Lr);
    else if (id == "D3-HT-HT") detect(BaseLearnerKind::HoeffdingTree, DetectorKind::D3Ht);
    else if (id == "IBDD-HT") detect(BaseLearnerKind::HoeffdingTree, DetectorKind::Ibdd);
    else if (id == "R-NB") periodic(BaseLearnerKind::NaiveBayes);
    else if (id == "R-HT") periodic(BaseLearnerKind::HoeffdingTree);
    else if (id == "S-RF") batch(BatchRegime::Static);
    else if (id == "R-RF") batch(BatchRegime::Reset);
    else if (id == "I-RF") batch(BatchRegime::Incremental);
    else throw ConfigError("unknown technique id: " + id);

    return cfg;
}

namespace {

struct CellWork {
    const std::string* technique;
    const NamedStream* dataset;
};

struct CellDone {
    ResultsCell cell;
    std::vector<StepEvent> events;
    std::string error;  // non-empty on failure
};

CellDone run_cell(const BenchRunConfig& cfg, const std::string& technique,
                  const NamedStream& ds) {
    CellDone done;
    try {
        const std::uint64_t seed = derive_seed(cfg.master_seed, technique, ds.descriptor.id);
        AdaptiveModel model(ds.schema, technique_config(technique, ds.descriptor, cfg.start_mode),
                            seed);
        const auto t0 = std::chrono::steady_clock::now();
        const MetricTrace trace = prequential_run(model, ds.stream);
        const auto t1 = std::chrono::steady_clock::now();

        done.cell.mean_accuracy = mean_accuracy(trace);
        done.cell.kappa = cohen_kappa(trace.confusion);
        done.cell.running_accuracy_avg = running_accuracy_time_average(trace);
        if (cfg.kappa_window > 0) {
            done.cell.kappa_windowed = windowed_kappa(trace, cfg.kappa_window);
        }
        done.cell.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
        done.cell.n_scored = trace.scored();
        for (const StepEvent& e : model.events()) {
            if (e.kind == "warning") ++done.cell.warnings;
            else if (e.kind == "drift") ++done.cell.drifts;
            else if (e.kind == "reset") ++done.cell.resets;
            else if (e.kind == "retrain") ++done.cell.retrains;
        }
        done.events = model.events();
    } catch (const std::exception& e) {
        done.error = e.what();
    }
    return done;
}

}  // namespace

BenchOutput run_bench(const BenchRunConfig& cfg, const std::vector<NamedStream>& datasets) {
    const std::vector<std::string>& techniques =
        cfg.techniques.empty() ? all_technique_ids() : cfg.techniques;
    for (const std::string& t : techniques) {
        technique_config(t, DatasetDescriptor{});  // validates the id up front
    }

    std::vector<CellWork> work;
    for (const std::string& t : techniques) {
        for (const NamedStream& ds : datasets) work.push_back({&t, &ds});
    }

    std::vector<CellDone> done(work.size());
    const int workers = std::max(1, cfg.workers);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= work.size()) break;
            done[i] = run_cell(cfg, *work[i].technique, *work[i].dataset);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BenchOutput out;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const std::string& tech = *work[i].technique;
        const std::string& ds = work[i].dataset->descriptor.id;
        if (!done[i].error.empty()) {
            out.failures.push_back({tech, ds, done[i].error});
            continue;
        }
        out.results.set(tech, ds, done[i].cell);
        for (const StepEvent& e : done[i].events) out.events.push_back({tech, ds, e});
    }
    return out;
}

void write_events_csv(const std::vector<FlatEvent>& events, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "technique,dataset,t,source,kind\n";
    for (const FlatEvent& e : events) {
        f << e.technique << ',' << e.dataset << ',' << e.event.t << ',' << e.event.source << ','
          << e.event.kind << '\n';
    }
}

}  // namespace driftbench
