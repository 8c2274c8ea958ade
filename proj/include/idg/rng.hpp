#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace idg {

// SplitMix64 step; used both as a stream mixer and to expand seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-trial seed from (master, cell, trial). Reordering the
// evaluation of trials never changes any derived stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s = h ^ (a + 0x9e3779b97f4a7c15ULL);
    h = splitmix64(s);
    s = h ^ (b + 0xd1b54a32d192ed03ULL);
    return splitmix64(s);
}

// xoshiro256** seeded through splitmix64 state expansion. Fixed bit-level
// behaviour on every platform, and nearby seeds yield decorrelated streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // true with probability p, via a fixed-point threshold on one raw draw
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        const double scaled = p * 18446744073709551616.0;  // p * 2^64
        const auto threshold = static_cast<std::uint64_t>(scaled);
        return next_u64() < threshold;
    }

    // uniform in [0, bound), rejection-sampled to avoid modulo bias
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return draw % bound;
    }

    // Partial Fisher-Yates: after the call, items[0..k) is a uniform random
    // k-subset of the input in uniform random order.
    void shuffle_prefix(std::vector<int>& items, std::size_t k) {
        const std::size_t n = items.size();
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform_below(n - i));
            std::swap(items[i], items[j]);
        }
    }

private:
    std::uint64_t state_[4];
};

}  // namespace idg
