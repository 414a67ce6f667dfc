#pragma once

#include <cstdint>

namespace aqopt {

// splitmix64, used to expand a single seed into generator state and to derive
// independent per-worker streams.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256** 1.0 (Blackman & Vigna). Chosen over std::mt19937_64 because
// its output stream is pinned by this source, not by a library
// implementation, so (n, seed) -> instance is reproducible everywhere.
class Xoshiro256StarStar {
  public:
    explicit Xoshiro256StarStar(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : state_) word = sm.next();
    }

    uint64_t next() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // [0, 1), 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t state_[4];
};

// Stable seed for worker/restart index `k` of a run seeded with `seed`.
inline uint64_t derive_seed(uint64_t seed, uint64_t k) {
    SplitMix64 sm(seed ^ (0xa5a5a5a5a5a5a5a5ULL + k * 0x9e3779b97f4a7c15ULL));
    sm.next();
    return sm.next();
}

}  // namespace aqopt
