#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "biaseval/util.hpp"

namespace biaseval {

/// Seeded RNG with hand-rolled draws. std::*_distribution is
/// implementation-defined, so every draw here is spelled out to keep runs
/// reproducible across compilers.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : seed_(seed), engine_(seed) {}

    uint64_t seed() const { return seed_; }

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, n). Modulo bias is ~n/2^64, irrelevant at corpus scale.
    size_t below(size_t n) {
        return n == 0 ? 0 : static_cast<size_t>(next_u64() % n);
    }

    /// Uniform integer in [lo, hi], inclusive.
    int int_in(int lo, int hi) {
        if (hi <= lo) {
            return lo;
        }
        return lo + static_cast<int>(below(static_cast<size_t>(hi - lo) + 1));
    }

    /// Uniform in [0, 1).
    double real01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double real_in(double lo, double hi) { return lo + (hi - lo) * real01(); }

    bool chance(double p) { return real01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    /// Independent child stream; the label keeps per-article streams stable
    /// regardless of processing order.
    SeededRng derive(std::string_view label) const {
        uint64_t child = util::fnv1a64(label, seed_ ^ 0x9e3779b97f4a7c15ULL);
        return SeededRng(child);
    }

private:
    uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace biaseval
