#pragma once

#include <cstdint>

namespace ccrp {

// xoshiro256** with splitmix64 seeding. Hand-rolled so that streams are
// bit-identical across platforms and standard-library versions; std::
// distributions carry no such guarantee and would break the "same seed,
// same report" contract.
class Xoshiro256 {
public:
    Xoshiro256() : Xoshiro256(0x9e3779b97f4a7c15ULL) {}

    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    // Independent substream r of a master seed; used for per-replica streams.
    static Xoshiro256 substream(std::uint64_t master_seed, std::uint64_t r) {
        return Xoshiro256(master_seed ^ (0x9e3779b97f4a7c15ULL * (r + 1)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1): 53 mantissa bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_[4];
};

} // namespace ccrp
