#pragma once

#include <cstdint>
#include <string_view>

namespace popanchor {

namespace detail {

// SplitMix64 finalizer. Good avalanche, trivially portable.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace detail

// Counter-based random stream keyed by (seed, stage label, optional sub-keys).
// The n-th draw of a given key is a pure function of (key, n), so per-person
// streams are independent of processing order and worker count. Streams are
// cheap value types; split freely.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::string_view label)
        : key_(detail::mix64(seed ^ detail::fnv1a64(label))) {}

    // Derived stream for a sub-entity (person id, household id, ...).
    RandomStream split(std::string_view subkey) const {
        return RandomStream(detail::mix64(key_ ^ detail::fnv1a64(subkey)));
    }
    RandomStream split(std::uint64_t subkey) const {
        return RandomStream(detail::mix64(key_ ^ detail::mix64(subkey)));
    }

    std::uint64_t next_u64() {
        return detail::mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL);
    }

    // Uniform double in [0, 1), 53 mantissa bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_unit() * static_cast<double>(n)) % n;
    }

    std::uint64_t key() const noexcept { return key_; }

private:
    explicit RandomStream(std::uint64_t key) : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace popanchor
