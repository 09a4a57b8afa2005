#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace chf {

/// Seeded RNG with explicitly-specified draw algorithms. The standard
/// distributions are implementation-defined, so uniform draws and
/// shuffles are written out here to keep results identical across
/// compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform double in [0, 1) using the top 53 bits of one draw.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform index in [0, n) by rejection (no modulo bias).
    std::size_t index(std::size_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = eng_();
        while (v >= limit) v = eng_();
        return static_cast<std::size_t>(v % n);
    }

    /// Fisher-Yates shuffle.
    template <class T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            std::swap(xs[i - 1], xs[index(i)]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace chf
