#pragma once

#include <cstdint>

namespace fbc {

// splitmix64: tiny deterministic generator with a platform-independent
// output sequence. std::uniform_*_distribution is implementation-defined,
// so every randomized path in the library draws through this instead.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // [0, 1) with 53 random bits
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // [0, n); multiply-shift bound (bias < 2^-64, irrelevant here)
    uint64_t bounded(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

private:
    uint64_t state_;
};

} // namespace fbc
