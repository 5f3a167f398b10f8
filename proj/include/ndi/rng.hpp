#pragma once

#include <cstdint>

namespace ndi {

// Deterministic, value-typed random stream (xoshiro256++ seeded through
// splitmix64). Streams are never shared: parallel work items get their
// own child stream, child k of seed s being derived as hash(s, k). Two
// streams with the same (seed, k) produce identical sequences on every
// platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    // Stream-splitting contract: child k is seeded by hash(parent_seed, k).
    static RngStream child(std::uint64_t parent_seed, std::uint64_t k);
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t k);

    std::uint64_t next_u64();

    // Uniform on the open interval (0, 1).
    double next_uniform();

    // Standard normal via the polar method.
    double next_normal();

    // Inverse Gaussian with the given mean and shape, by the
    // Michael-Schucany-Haas transformation (one normal + one uniform).
    double next_inverse_gaussian(double mean, double shape);

private:
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

}  // namespace ndi
