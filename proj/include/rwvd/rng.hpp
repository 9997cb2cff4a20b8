#pragma once

#include <array>
#include <cstdint>

namespace rwvd {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// Every output word is addressed by (key, counter), so a replica's stream can be
// read at any position without generating the prefix.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

// SplitMix64 finalizer; used to derive sub-seeds (per grid cell, per level).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return mix64(master ^ mix64(tag + 0x632BE59BD9B4E019ull));
}

// The random stream of one replica: word `pos` is output word pos % 4 of the
// Philox block (pos / 4, replica) under key `seed`. Walks consume word
// (k - 1) * D + j for coordinate j of step k, so positions are fixed
// independently of which coordinates actually move.
class StepStream {
public:
    StepStream(std::uint64_t seed, std::uint64_t replica)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          replica_(replica) {}

    std::uint32_t word(std::uint64_t pos) {
        const std::uint64_t block = pos >> 2;
        if (block != cached_block_ || !valid_) {
            cached_ = philox4x32({static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32),
                                  static_cast<std::uint32_t>(replica_),
                                  static_cast<std::uint32_t>(replica_ >> 32)},
                                 key_);
            cached_block_ = block;
            valid_ = true;
        }
        return cached_[pos & 3];
    }

    std::uint64_t replica() const { return replica_; }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t replica_;
    std::array<std::uint32_t, 4> cached_{};
    std::uint64_t cached_block_ = 0;
    bool valid_ = false;
};

}  // namespace rwvd
