#include "driftbench/core.hpp"

#include <algorithm>
#include <cmath>

namespace driftbench {

void WindowSpec::validate() const {
    if (i >= j) {
        throw InputError("WindowSpec: require i < j, got i=" + std::to_string(i) +
                         " j=" + std::to_string(j));
    }
    if (k && (*k <= i || *k >= j)) {
        throw InputError("WindowSpec: require i < k < j, got k=" + std::to_string(*k));
    }
}

int Rng::uniform_int(int lo, int hi) {
    if (lo > hi) throw InputError("Rng::uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
}

double Rng::normal(double mean, double stddev) {
    // Box-Muller, cosine branch only. Consumes exactly two draws per call.
    const double u1 = 1.0 - next_unit();  // (0, 1], keeps log() finite
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * M_PI * u2);
}

int Rng::poisson(double lambda) {
    if (lambda < 0.0) throw InputError("Rng::poisson: negative lambda");
    const double limit = std::exp(-lambda);
    double p = 1.0;
    int k = 0;
    do {
        ++k;
        p *= next_unit();
    } while (p > limit);
    return k - 1;
}

std::uint64_t Rng::child_seed() {
    return mix64(next_u64());
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed,
                          std::string_view model_id,
                          std::string_view dataset_id) {
    if (model_id.empty() || dataset_id.empty()) {
        throw InputError("derive_seed: model_id and dataset_id must be non-empty");
    }
    std::uint64_t h = mix64(master_seed);
    h = mix64(h ^ fnv1a(model_id));
    h = mix64(h ^ fnv1a(dataset_id));
    return h;
}

SampleWindow slice_window(const Stream& stream, const WindowSpec& spec) {
    spec.validate();
    SampleWindow out;
    out.spec = spec;
    auto lo = std::lower_bound(stream.begin(), stream.end(), spec.i,
                               [](const Instance& a, std::int64_t t) { return a.t < t; });
    auto hi = std::upper_bound(lo, stream.end(), spec.j,
                               [](std::int64_t t, const Instance& a) { return t < a.t; });
    out.items.assign(lo, hi);
    return out;
}

}  // namespace driftbench
