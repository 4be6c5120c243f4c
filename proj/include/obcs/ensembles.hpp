#pragma once

#include <cstdint>

#include "obcs/core.hpp"

// Seeded, reproducible generation of Gaussian and Rademacher matrices.
// Uniform source is SplitMix64; Gaussians come from Box-Muller on
// consecutive uniform pairs, Rademacher signs from the top output bit.
// Every randomized operation in the repository takes an RngSpec; there is
// no hidden global randomness.

namespace obcs {

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    bool operator==(const RngSpec&) const = default;
};

// SplitMix64 finalizer (also used to mix seed/stream into an initial state).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class SplitMix64 {
  public:
    explicit SplitMix64(const RngSpec& spec)
        : state_(splitmix64_mix(spec.seed ^ splitmix64_mix(spec.stream))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]; never returns 0 so log() is safe in Box-Muller.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; consumes one uniform pair per two
    // values, caching the second.
    double next_gaussian();

    // +1 or -1 from the top bit of the next output.
    int next_rademacher() { return (next_u64() >> 63) ? 1 : -1; }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Deterministic child stream; distinct indices give distinct sequences, so
// parallel loops over trials can be schedule-independent.
RngSpec derive_substream(const RngSpec& rng, std::uint64_t index);

MeasurementMatrix gen_gaussian_matrix(const RngSpec& rng, std::size_t m, std::size_t n);
MeasurementMatrix gen_rademacher_matrix(const RngSpec& rng, std::size_t m, std::size_t n);
MeasurementMatrix gen_matrix(const RngSpec& rng, std::size_t m, std::size_t n, Ensemble ensemble);

// m vectors of dimension n drawn from the given ensemble (the set V of the
// balancing problem).
std::vector<std::vector<double>> gen_vectors(const RngSpec& rng, std::size_t m, std::size_t n,
                                             Ensemble ensemble);

}  // namespace obcs
