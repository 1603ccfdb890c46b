#pragma once

#include <cmath>
#include <cstdint>

namespace kac {

// Identifies a deterministic sample stream.  Every draw is a pure function of
// (seed, trial, counter), so trials can be dispatched to any worker in any
// order without changing a single bit of the output.
struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::uint64_t counter = 0;
};

namespace detail {

// Philox-4x32-10 block cipher (Salmon et al., counter-based RNG).
struct PhiloxBlock {
    std::uint32_t v[4];
};

inline PhiloxBlock philox4x32(std::uint64_t key, std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr_lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr_lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr_hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr_hi >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(M0) * c0;
        std::uint64_t p1 = static_cast<std::uint64_t>(M1) * c2;
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        std::uint32_t n0 = hi1 ^ c1 ^ k0;
        std::uint32_t n1 = lo1;
        std::uint32_t n2 = hi0 ^ c3 ^ k1;
        std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += W0; k1 += W1;
    }
    return {{c0, c1, c2, c3}};
}

} // namespace detail

// Stateless stream view: draw i of trial t under a master seed.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

    // Two independent 64-bit words per (counter, aux) cell.
    void block(std::uint64_t counter, std::uint64_t aux, std::uint64_t& w0, std::uint64_t& w1) const {
        // counter selects the draw, aux feeds rejection retries
        detail::PhiloxBlock b = detail::philox4x32(seed_ ^ 0x85EBCA6B2545F491ull,
                                                   trial_ ^ (aux << 1),
                                                   counter);
        w0 = (static_cast<std::uint64_t>(b.v[0]) << 32) | b.v[1];
        w1 = (static_cast<std::uint64_t>(b.v[2]) << 32) | b.v[3];
    }

    std::uint64_t word(std::uint64_t counter) const {
        std::uint64_t w0, w1;
        block(counter, 0, w0, w1);
        return w0;
    }

    // Uniform integer in [0, m) without modulo bias (rejection sampling over
    // successive words of the same counter cell).
    std::uint64_t uniform_below(std::uint64_t counter, std::uint64_t m) const {
        const std::uint64_t limit = (~0ull) - ((~0ull) % m + 1) % m; // last full multiple - 1
        std::uint64_t aux = 0;
        for (;;) {
            std::uint64_t w0, w1;
            block(counter, aux, w0, w1);
            if (w0 <= limit) return w0 % m;
            if (w1 <= limit) return w1 % m;
            ++aux;
        }
    }

    // Uniform in the open interval (0,1), symmetric around 1/2.
    double unit_open(std::uint64_t counter, int lane = 0) const {
        std::uint64_t w0, w1;
        block(counter, 0, w0, w1);
        std::uint64_t w = lane == 0 ? w0 : w1;
        return (static_cast<double>(w >> 11) + 0.5) * 0x1p-53;
    }

    // Standard normal via Box-Muller; one deviate per counter cell.
    double gaussian(std::uint64_t counter) const {
        std::uint64_t w0, w1;
        block(counter, 0, w0, w1);
        double u = (static_cast<double>(w0 >> 11) + 0.5) * 0x1p-53;
        double v = (static_cast<double>(w1 >> 11) + 0.5) * 0x1p-53;
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
    }

private:
    std::uint64_t seed_;
    std::uint64_t trial_;
};

} // namespace kac
