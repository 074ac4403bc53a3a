#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace degroot {

// splitmix64 finalizer (Steele/Lea/Flood). Also used standalone to derive
// per-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic 64-bit generator (splitmix64 recurrence). The exact update is
//   state += 0x9E3779B97F4A7C15; output = mix64(state)
// so sequences can be replayed from any language. Doubles take the top 53
// bits of an output word; bounded draws use the multiply-high reduction.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in {0, ..., bound - 1}; bound > 0.
    std::uint64_t next_below(std::uint64_t bound) {
        using u128 = unsigned __int128;
        return static_cast<std::uint64_t>((static_cast<u128>(next_u64()) * bound) >> 64);
    }

    // Fisher-Yates shuffle, swapping from the back.
    template <class T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(next_below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Stable seed derivation: every random stream of a batch run is addressed by
// (base seed, stream tag, indices). Documented in the README.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t s0, std::uint64_t s1 = 0,
                                 std::uint64_t s2 = 0) {
    std::uint64_t h = mix64(base + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (s0 + 0x9E3779B97F4A7C15ULL));
    h = mix64(h ^ (s1 + 0x9E3779B97F4A7C15ULL));
    h = mix64(h ^ (s2 + 0x9E3779B97F4A7C15ULL));
    return h;
}

}  // namespace degroot
