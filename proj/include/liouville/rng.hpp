#pragma once
// Counter-based deterministic RNG: draw i of stream s under seed k is a pure
// function of (k, s, i), so randomized trials replay identically regardless of
// evaluation order or thread count.

#include <cmath>

#include "liouville/common.hpp"

namespace liouville {

inline u64 splitmix64(u64 x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    explicit CounterRng(u64 seed) : seed_(seed) {}

    u64 word(u64 stream, u64 counter) const {
        u64 h = splitmix64(seed_ ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
        return splitmix64(h ^ (0xd1b54a32d192ed03ull * (counter + 1)));
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform(u64 stream, u64 counter) const {
        return static_cast<double>(word(stream, counter) >> 11) * 0x1.0p-53;
    }

    // Uniform on {-1,+1}.
    int sign(u64 stream, u64 counter) const {
        return (word(stream, counter) & 1) ? 1 : -1;
    }

    // Unit-modulus complex value as (re, im).
    void unit_phase(u64 stream, u64 counter, double& re, double& im) const {
        double theta = 2.0 * 3.14159265358979323846 * uniform(stream, counter);
        re = std::cos(theta);
        im = std::sin(theta);
    }

    u64 uniform_u64(u64 stream, u64 counter, u64 lo, u64 hi) const {
        // inclusive range; bias negligible for our range sizes vs 2^64
        return lo + word(stream, counter) % (hi - lo + 1);
    }

    u64 seed() const { return seed_; }

private:
    u64 seed_;
};

} // namespace liouville
