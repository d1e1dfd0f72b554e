#include "driftbench/adaptation.hpp"

#include <algorithm>

namespace driftbench {

const char* detector_name(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::Ddm: return "DDM";
        case DetectorKind::Adwin: return "ADWIN";
        case DetectorKind::D3Lr: return "D3-LR";
        case DetectorKind::D3Ht: return "D3-HT";
        case DetectorKind::Ibdd: return "IBDD";
    }
    return "?";
}

void AdaptiveConfig::validate() const {
    if (strategy == StrategyKind::PeriodicReset && reset_every < 1) {
        throw ConfigError("adaptation: periodic reset interval must be >= 1");
    }
    if (strategy == StrategyKind::Batch) {
        if (regime != BatchRegime::Static && retrain_every < 1) {
            throw ConfigError("adaptation: batch retrain interval must be >= 1");
        }
        if (regime == BatchRegime::Static && static_window < 1) {
            throw ConfigError("adaptation: static training window must be >= 1");
        }
    } else if (start_mode.has_value()) {
        throw ConfigError("adaptation: start mode applies to batch regimes only");
    }
}

std::unique_ptr<Learner> make_learner(BaseLearnerKind kind, const StreamSchema& schema,
                                      const AdaptiveConfig& cfg, std::uint64_t seed) {
    const int d = schema.n_features();
    const int c = schema.n_classes();
    switch (kind) {
        case BaseLearnerKind::LastClass: return std::make_unique<LastClass>(d, c);
        case BaseLearnerKind::MajorityClass: return std::make_unique<MajorityClass>(d, c);
        case BaseLearnerKind::NaiveBayes: return std::make_unique<GaussianNaiveBayes>(d, c);
        case BaseLearnerKind::HoeffdingTree:
            return std::make_unique<HoeffdingTree>(d, c, cfg.tree, seed);
        case BaseLearnerKind::Arf:
            return std::make_unique<AdaptiveRandomForest>(d, c, cfg.arf, seed);
    }
    throw ConfigError("adaptation: unknown learner kind");
}

AdaptiveModel::AdaptiveModel(const StreamSchema& schema, AdaptiveConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), schema_(schema), rng_(seed) {
    cfg_.validate();
    if (cfg_.strategy == StrategyKind::Batch) {
        cold_start_ = std::make_unique<MajorityClass>(schema_.n_features(), schema_.n_classes());
        rng_ = Rng(rng_.child_seed());  // forest fits draw from the model stream
        return;
    }
    learner_ = make_learner(cfg_.base, schema_, cfg_, rng_.child_seed());
    if (cfg_.strategy == StrategyKind::DetectReset) {
        const std::uint64_t det_seed = rng_.child_seed();
        switch (cfg_.detector) {
            case DetectorKind::Ddm: ddm_.emplace(cfg_.ddm); break;
            case DetectorKind::Adwin: adwin_.emplace(cfg_.adwin); break;
            case DetectorKind::D3Lr: {
                D3Config d3cfg = cfg_.d3;
                d3cfg.discriminator = D3DiscriminatorKind::LogisticLinear;
                d3cfg.seed = det_seed;
                d3_.emplace(schema_.n_features(), d3cfg);
                break;
            }
            case DetectorKind::D3Ht: {
                D3Config d3cfg = cfg_.d3;
                d3cfg.discriminator = D3DiscriminatorKind::HoeffdingTree;
                d3cfg.seed = det_seed;
                d3_.emplace(schema_.n_features(), d3cfg);
                break;
            }
            case DetectorKind::Ibdd: {
                IbddConfig icfg = cfg_.ibdd;
                icfg.seed = det_seed;
                ibdd_.emplace(schema_.n_features(), icfg);
                break;
            }
        }
    }
}

SignalLevel AdaptiveModel::feed_detector(const Instance& inst, bool correct) {
    if (ddm_) return ddm_->update(correct);
    if (adwin_) return adwin_->update(correct ? 0.0 : 1.0);
    if (d3_) return d3_->update(inst.x);
    if (ibdd_) return ibdd_->update(inst.x);
    throw Error("adaptation: detect-reset model without a detector");
}

StepResult AdaptiveModel::step(const Instance& inst) {
    if (!inst.y) throw ProtocolError("adaptation: prequential step needs a labeled instance");
    if (cfg_.strategy == StrategyKind::Batch) return step_batch(inst);
    return step_incremental(inst);
}

StepResult AdaptiveModel::step_incremental(const Instance& inst) {
    StepResult result;
    result.predicted = learner_->predict(inst.x);
    ++count_;
    learner_->learn(inst.x, *inst.y);

    switch (cfg_.strategy) {
        case StrategyKind::None:
            break;
        case StrategyKind::DetectReset: {
            const SignalLevel sig = feed_detector(inst, result.predicted == *inst.y);
            result.signal = sig;
            if (sig != SignalLevel::Stable) {
                events_.push_back({inst.t, detector_name(cfg_.detector), signal_name(sig)});
            }
            if (sig == SignalLevel::Drift) {
                learner_->reset();
                result.reset = true;
                events_.push_back({inst.t, detector_name(cfg_.detector), "reset"});
            }
            break;
        }
        case StrategyKind::PeriodicReset:
            if (count_ % cfg_.reset_every == 0) {
                learner_->reset();
                result.reset = true;
                events_.push_back({inst.t, "periodic", "reset"});
            }
            break;
        case StrategyKind::Batch:
            break;
    }
    return result;
}

void AdaptiveModel::fit_forest(std::int64_t t) {
    std::vector<Instance> training(buffer_.begin(), buffer_.end());
    forest_ = rf_fit(training, schema_.n_classes(), cfg_.forest, rng_);
    fitted_ = true;
    events_.push_back({t, "batch", "retrain"});
}

StepResult AdaptiveModel::step_batch(const Instance& inst) {
    const StartMode mode = cfg_.start_mode.value_or(StartMode::Cold);
    StepResult result;
    if (fitted_) {
        result.predicted = forest_.predict(inst.x);
        result.scored = true;
    } else {
        result.predicted = cold_start_->predict(inst.x);
        result.scored = mode == StartMode::Cold;
    }

    ++count_;
    if (!fitted_) cold_start_->learn(inst.x, *inst.y);

    switch (cfg_.regime) {
        case BatchRegime::Static:
            if (!fitted_) {
                buffer_.push_back(inst);
                if (count_ == cfg_.static_window) {
                    fit_forest(inst.t);
                    result.retrained = true;
                    buffer_.clear();
                }
            }
            break;
        case BatchRegime::Reset:
            buffer_.push_back(inst);
            while (static_cast<int>(buffer_.size()) > cfg_.retrain_every) buffer_.pop_front();
            if (count_ % cfg_.retrain_every == 0) {
                fit_forest(inst.t);
                result.retrained = true;
            }
            break;
        case BatchRegime::Incremental:
            buffer_.push_back(inst);
            if (count_ % cfg_.retrain_every == 0) {
                fit_forest(inst.t);
                result.retrained = true;
            }
            break;
    }
    return result;
}

}  // namespace driftbench
