#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "proxmc/vec.hpp"

namespace proxmc {

/* Counter-based RNG: Philox-4x32 with 10 rounds.
 *
 * The generator state is (seed, stream, position); output is a pure function
 * of it, so chains get bit-reproducible, non-overlapping streams regardless
 * of how work is scheduled. One chain owns one stream and consumes draws in a
 * fixed order; nothing here is shared, so there is no synchronization.
 */
class CounterRng {
   public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : stream_(stream) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            buf_ = block(block_++);
            idx_ = 0;
        }
        return buf_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on the open interval (0,1); safe to pass to log().
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the Marsaglia polar method (pair cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double v1, v2, s;
        do {
            v1 = 2.0 * uniform01() - 1.0;
            v2 = 2.0 * uniform01() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v2 * f;
        have_spare_ = true;
        return v1 * f;
    }

    // Fills v[0..d) in coordinate order.
    void fill_normal(Vec& v) {
        for (double& x : v) x = normal();
    }

   private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    std::array<std::uint32_t, 4> block(std::uint64_t n) const {
        std::array<std::uint32_t, 4> x = {
            static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
            static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, x[0], hi0, lo0);
            mulhilo(0xCD9E8D57u, x[2], hi1, lo1);
            x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
            k0 += 0x9E3779B9u;  // Weyl key schedule between rounds
            k1 += 0xBB67AE85u;
        }
        return x;
    }

    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::uint32_t key_[2];
    std::array<std::uint32_t, 4> buf_{};
    int idx_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace proxmc
