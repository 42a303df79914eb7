#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fashion {

// Deterministic sampling built on std::mt19937_64 (bit-exact per the C++
// standard). The standard library *distributions* are implementation-defined,
// so every draw below is spelled out explicitly; instances generated from the
// same seed are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased-enough index draw via 128-bit multiply-shift.
    std::size_t uniform_index(std::size_t n) {
        if (n <= 1) return 0;
        unsigned __int128 wide = static_cast<unsigned __int128>(next_u64());
        return static_cast<std::size_t>((wide * n) >> 64);
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform real in [lo, hi).
    double uniform_real(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(uniform_index(static_cast<std::size_t>(hi - lo + 1)));
    }

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[uniform_index(items.size())];
    }

    // Fisher-Yates, back to front.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace fashion
