#include "ndi/rng.hpp"

#include "ndi/errors.hpp"

#include <cmath>

namespace ndi {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t RngStream::mix(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t sm = k;
    const std::uint64_t hk = splitmix64(sm);
    sm = seed ^ hk;
    return splitmix64(sm);
}

RngStream RngStream::child(std::uint64_t parent_seed, std::uint64_t k) {
    return RngStream(mix(parent_seed, k));
}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_uniform() {
    // 53-bit mantissa, offset by half an ulp so 0 is excluded.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * next_uniform() - 1.0;
        v = 2.0 * next_uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_normal_ = v * f;
    has_cached_normal_ = true;
    return u * f;
}

double RngStream::next_inverse_gaussian(double mean, double shape) {
    if (!(mean > 0.0) || !(shape > 0.0)) {
        throw InvalidParams("inverse_gaussian: mean and shape must be positive");
    }
    const double n = next_normal();
    const double v = n * n;
    const double w =
        mean + mean * mean * v / (2.0 * shape) -
        (mean / (2.0 * shape)) * std::sqrt(4.0 * mean * shape * v + mean * mean * v * v);
    const double u = next_uniform();
    if (u <= mean / (mean + w)) return w;
    return mean * mean / w;
}

}  // namespace ndi
