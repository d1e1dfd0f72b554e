#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace driftbench {

// Error taxonomy. Every throwing operation in the library uses one of these,
// so callers (and the CLI) can map failures to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InputError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IntegrityError : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };
struct MetricError : Error { using Error::Error; };
struct ScheduleError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

/// Feature/label layout shared by every instance of one stream.
/// Class labels are interned to ids 0..n_classes-1 at load time.
struct StreamSchema {
    std::vector<std::string> feature_names;
    std::vector<std::string> class_labels;

    int n_features() const { return static_cast<int>(feature_names.size()); }
    int n_classes() const { return static_cast<int>(class_labels.size()); }
};

/// One timestamped feature vector with an optional class id.
struct Instance {
    std::int64_t t = 0;
    Eigen::VectorXd x;
    std::optional<int> y;
};

using Stream = std::vector<Instance>;

/// Contiguous timestep range [i, j] with an optional partition point k,
/// i < k < j when present.
struct WindowSpec {
    std::int64_t i = 0;
    std::int64_t j = 0;
    std::optional<std::int64_t> k;

    void validate() const;
};

/// The instances of a stream falling inside a WindowSpec, ordered by t.
struct SampleWindow {
    WindowSpec spec;
    std::vector<Instance> items;

    std::size_t size() const { return items.size(); }
};

/// Deterministic random source. The engine is std::mt19937_64, whose output
/// sequence is pinned down by the C++ standard, and all distribution
/// transforms are implemented here (Box-Muller normals, Knuth Poisson,
/// modulo-reduced uniform ints) because the standard library's distributions
/// are not portable across implementations. Identical seeds therefore give
/// identical sequences on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi);

    double normal(double mean, double stddev);

    /// Knuth's multiplication method; fine for the small lambdas used here.
    int poisson(double lambda);

    /// Derives an independent child seed from this stream. Used by learners
    /// whose reset() must stay deterministic across repeated resets.
    std::uint64_t child_seed();

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

/// Deterministic seed for one (model, dataset) benchmark cell.
///
/// Mix: FNV-1a over each id string, each folded into the running state
/// through the splitmix64 finalizer. Pure function of its inputs; the golden
/// value test pins the output so it cannot drift across releases.
std::uint64_t derive_seed(std::uint64_t master_seed,
                          std::string_view model_id,
                          std::string_view dataset_id);

/// splitmix64 finalizer; also the mixer behind derive_seed and child seeds.
std::uint64_t mix64(std::uint64_t z);

/// All instances with spec.i <= t <= spec.j, order preserved. An empty
/// result is a valid (empty) window. The stream must be ordered by t.
SampleWindow slice_window(const Stream& stream, const WindowSpec& spec);

}  // namespace driftbench
