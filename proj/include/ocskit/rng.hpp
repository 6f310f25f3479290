#pragma once

#include <cstdint>

namespace ocskit {

// Counter-based pseudo-random stream: the i-th draw is a fixed avalanche mix
// of (key, i), so streams derived from distinct keys are independent and a
// stream can be replayed from its key alone.
class RandomStream {
  public:
    RandomStream() = default;
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix64(key_ ^ mix64(counter_));
    }

    bool next_bit() {
        if (bits_left_ == 0) {
            bit_cache_ = next_u64();
            bits_left_ = 64;
        }
        const bool b = bit_cache_ & 1u;
        bit_cache_ >>= 1;
        --bits_left_;
        return b;
    }

    // Unbiased integer in [0, n) by rejection.
    std::uint32_t next_below(std::uint32_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return static_cast<std::uint32_t>(v % n);
    }

    // Uniform double in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    std::uint64_t bit_cache_ = 0;
    int bits_left_ = 0;
};

// Derives the id-th substream of a master seed. Used to split one seed into
// mutually independent streams (e.g. pair choice vs. the two selectors).
inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RandomStream(RandomStream::mix64(master_seed ^ RandomStream::mix64(0xA0761D6478BD642FULL + stream_id)));
}

// Deterministic per-trial seed for Monte Carlo loops.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return RandomStream::mix64(master_seed ^ RandomStream::mix64(0xE7037ED1A0B428DBULL + trial_index));
}

} // namespace ocskit
