#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/adaptation.hpp"
#include "driftbench/datasets.hpp"
#include "driftbench/evaluation.hpp"

namespace driftbench {

/// The benchmark technique roster. Ids resolve through technique_config;
/// anything else is rejected at parse time.
const std::vector<std::string>& all_technique_ids();

bool is_batch_technique(const std::string& id);

/// Adaptive configuration for a technique id on a given dataset (the
/// dataset's reset/retrain schedule feeds the periodic and batch regimes).
/// Throws ConfigError for unknown ids.
AdaptiveConfig technique_config(const std::string& id, const DatasetDescriptor& desc,
                                std::optional<StartMode> start_mode = std::nullopt);

/// One loaded benchmark stream.
struct NamedStream {
    DatasetDescriptor descriptor;
    Stream stream;
    StreamSchema schema;
};

struct BenchRunConfig {
    std::uint64_t master_seed = 42;
    std::vector<std::string> techniques;   // empty: all
    int workers = 1;
    std::optional<StartMode> start_mode;   // batch techniques; default cold
    int kappa_window = 0;                  // 0: no windowed kappa column
};

struct CellFailure {
    std::string technique;
    std::string dataset;
    std::string message;
};

struct FlatEvent {
    std::string technique;
    std::string dataset;
    StepEvent event;
};

struct BenchOutput {
    ResultsMatrix results;
    std::vector<FlatEvent> events;
    std::vector<CellFailure> failures;
};

/// Runs every (technique x dataset) cell. Each cell derives its own seed
/// from (master_seed, technique, dataset), so results are bit-identical
/// across worker counts and repeated runs.
BenchOutput run_bench(const BenchRunConfig& cfg, const std::vector<NamedStream>& datasets);

/// events.csv: technique,dataset,t,source,kind.
void write_events_csv(const std::vector<FlatEvent>& events, const std::string& path);

}  // namespace driftbench
