#pragma once

#include <cmath>
#include <string>

#include "iotsynth/common.hpp"

namespace iotsynth {

// splitmix64; passes BigCrush and is trivially seedable, which is all the
// simulation needs. Distributions are hand-rolled on top of the raw 64-bit
// stream so sequences do not depend on the standard library implementation.
class SplitMix64 {
public:
    explicit SplitMix64(u64 seed) : state_(seed) {}

    u64 next_u64() {
        u64 z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 usable bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be > 0.
    u64 next_below(u64 n) {
        IOTSYNTH_CHECK(n > 0, "next_below(0)");
        // Rejection sampling to avoid modulo bias.
        u64 threshold = (0 - n) % n;
        for (;;) {
            u64 r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    u64 next_range(u64 lo, u64 hi) {  // inclusive bounds
        IOTSYNTH_CHECK(lo <= hi, "next_range bounds");
        return lo + next_below(hi - lo + 1);
    }

    u32 next_u32() { return static_cast<u32>(next_u64() >> 32); }

    double exponential(double mean) { return -mean * std::log1p(-next_double()); }

    u64 exponential_us(double mean_s) {
        double v = exponential(mean_s) * 1e6;
        if (v < 1.0) v = 1.0;
        return static_cast<u64>(v);
    }

private:
    u64 state_;
};

// Named substream of a root seed. Same (seed, label) always yields the same
// sequence; distinct labels decorrelate via the label hash.
class RngStream : public SplitMix64 {
public:
    RngStream(u64 root_seed, const std::string& label)
        : SplitMix64(mix(root_seed, label)), label_(label) {}

    const std::string& label() const { return label_; }

    static u64 mix(u64 root_seed, const std::string& label) {
        u64 h = fnv1a64(label);
        // One splitmix scramble keeps nearby seeds apart.
        SplitMix64 m(root_seed ^ h);
        return m.next_u64();
    }

private:
    std::string label_;
};

}  // namespace iotsynth
