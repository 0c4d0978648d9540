#pragma once

#include <cstdint>
#include <cmath>

namespace specflow {

// Philox4x32-10 counter-based generator. Each (seed, stream) pair is an independent
// reproducible stream, so Monte Carlo trials can be generated in any order.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream) {
        key_[0] = static_cast<std::uint32_t>(seed);
        key_[1] = static_cast<std::uint32_t>(seed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
        idx_ = 4;
        have_normal_ = false;
    }

    std::uint32_t next_u32() {
        if (idx_ == 4) {
            block();
            idx_ = 0;
        }
        return out_[idx_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // uniform in (0, 1]
    double uniform01() { return (double((next_u64() >> 11)) + 1.0) * 0x1p-53; }

    // standard normal via Box-Muller; deterministic for a fixed stream
    double normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_normal_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint32_t mulhi(std::uint32_t a, std::uint32_t b) {
        return static_cast<std::uint32_t>((std::uint64_t(a) * b) >> 32);
    }

    void block() {
        std::uint32_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            const std::uint32_t lo0 = 0xD2511F53u * c0;
            const std::uint32_t hi0 = mulhi(0xD2511F53u, c0);
            const std::uint32_t lo1 = 0xCD9E8D57u * c2;
            const std::uint32_t hi1 = mulhi(0xCD9E8D57u, c2);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = c0;
        out_[1] = c1;
        out_[2] = c2;
        out_[3] = c3;
        if (++ctr_[0] == 0)
            if (++ctr_[1] == 0) ++ctr_[2];
    }

    std::uint32_t key_[2];
    std::uint32_t ctr_[4];
    std::uint32_t out_[4];
    int idx_;
    bool have_normal_;
    double cached_ = 0;
};

}  // namespace specflow
