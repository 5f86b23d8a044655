#pragma once

#include <cstdint>

namespace pir {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Deterministic counter-based stream; streams keyed by different tuples are
/// independent, so concurrent consumers never share state.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}
    CounterRng(std::uint64_t seed, std::uint64_t a) noexcept
        : key_(hash_combine(mix64(seed), a)) {}
    CounterRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept
        : key_(hash_combine(hash_combine(mix64(seed), a), b)) {}

    std::uint64_t next_u64() noexcept { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform in [0, 1).
    double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, n) via rejection.
    std::uint64_t uniform_below(std::uint64_t n) noexcept {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Position-based seed derivation for replicate/grid tasks (never time-based).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept {
    return hash_combine(hash_combine(mix64(base), a), b);
}

} // namespace pir
