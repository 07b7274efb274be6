#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace uenc {

// Counter-based deterministic random stream. Every random choice in the
// library flows through one of these; experiments are bit-reproducible given
// the master seed. Substreams derived with fork() are independent of the
// parent's position, so concurrent trials can each own a fork.
class RngStream {
  public:
    explicit RngStream(uint64_t seed) : key_(scramble(seed ^ 0x9e3779b97f4a7c15ull)) {}

    // Independent substream; fork(i) depends only on (key, i), not on how
    // much the parent has consumed.
    RngStream fork(uint64_t label) const {
        RngStream s(0);
        s.key_ = scramble(scramble(key_ + 0x165667b19e3779f9ull) ^ scramble(label + 0xd1b54a32d192ed03ull));
        s.ctr_ = 0;
        return s;
    }

    uint64_t next_u64() { return scramble(key_ + (++ctr_) * 0x9e3779b97f4a7c15ull); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller (second value discarded to keep the
    // stream stateless beyond the counter).
    double normal() {
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Uniform integer in [0, n), rejection-sampled so every value is unbiased.
    uint64_t below(uint64_t n) {
        if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    int bit() { return static_cast<int>(next_u64() & 1u); }

  private:
    static uint64_t scramble(uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    uint64_t key_;
    uint64_t ctr_ = 0;
};

}  // namespace uenc
