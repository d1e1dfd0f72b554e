#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "driftbench/arf.hpp"
#include "driftbench/core.hpp"
#include "driftbench/detectors.hpp"
#include "driftbench/learners.hpp"

namespace driftbench {

enum class BaseLearnerKind { LastClass, MajorityClass, NaiveBayes, HoeffdingTree, Arf };
enum class StrategyKind { None, DetectReset, PeriodicReset, Batch };
enum class DetectorKind { Ddm, Adwin, D3Lr, D3Ht, Ibdd };
enum class BatchRegime { Static, Reset, Incremental };
enum class StartMode { Warm, Cold };

const char* detector_name(DetectorKind kind);

/// One benchmark configuration: a base learner plus the adaptation strategy
/// wrapped around it (or a batch forest regime, which replaces the base
/// learner entirely).
struct AdaptiveConfig {
    BaseLearnerKind base = BaseLearnerKind::NaiveBayes;
    StrategyKind strategy = StrategyKind::None;

    DetectorKind detector = DetectorKind::Ddm;  // DetectReset
    int reset_every = 60;                       // PeriodicReset

    BatchRegime regime = BatchRegime::Static;   // Batch
    int retrain_every = 50;                     // Batch Reset/Incremental
    int static_window = 100;                    // Batch Static first fit
    std::optional<StartMode> start_mode;        // Batch only; defaults to Cold

    HoeffdingTreeConfig tree;
    ArfConfig arf;
    RandomForestConfig forest;
    DdmDetector::Config ddm;
    AdwinDetector::Config adwin;
    D3Config d3;
    IbddConfig ibdd;

    void validate() const;
};

struct StepEvent {
    std::int64_t t = 0;
    std::string source;  // detector or strategy name
    std::string kind;    // "warning" | "drift" | "reset" | "retrain"
};

struct StepResult {
    int predicted = 0;
    bool scored = true;  // false during a warm-start training prefix
    std::optional<SignalLevel> signal;
    bool reset = false;
    bool retrained = false;
};

/// Drives one learner through the prequential protocol: predict, reveal the
/// label, then apply the configured adaptation hook. Batch regimes buffer
/// instances and refit forests on schedule instead of learning per instance.
class AdaptiveModel {
public:
    AdaptiveModel(const StreamSchema& schema, AdaptiveConfig cfg, std::uint64_t seed);

    StepResult step(const Instance& inst);

    const AdaptiveConfig& config() const { return cfg_; }
    const std::vector<StepEvent>& events() const { return events_; }
    std::int64_t instances_seen() const { return count_; }
    int n_classes() const { return schema_.n_classes(); }

    /// The wrapped incremental learner; nullptr under batch regimes (batch
    /// models never receive learn calls, which tests assert through this).
    const Learner* incremental_learner() const { return learner_.get(); }

private:
    StepResult step_incremental(const Instance& inst);
    StepResult step_batch(const Instance& inst);
    void fit_forest(std::int64_t t);
    SignalLevel feed_detector(const Instance& inst, bool correct);

    AdaptiveConfig cfg_;
    StreamSchema schema_;
    Rng rng_;
    std::int64_t count_ = 0;
    std::vector<StepEvent> events_;

    // Incremental strategies.
    std::unique_ptr<Learner> learner_;
    std::optional<DdmDetector> ddm_;
    std::optional<AdwinDetector> adwin_;
    std::optional<D3Detector> d3_;
    std::optional<IbddDetector> ibdd_;

    // Batch regimes.
    std::deque<Instance> buffer_;
    ForestModel forest_;
    bool fitted_ = false;
    std::unique_ptr<MajorityClass> cold_start_;
};

/// Fresh learner of the given kind. Seed feeds the stochastic learners.
std::unique_ptr<Learner> make_learner(BaseLearnerKind kind, const StreamSchema& schema,
                                      const AdaptiveConfig& cfg, std::uint64_t seed);

}  // namespace driftbench
