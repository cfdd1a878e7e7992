#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mfgepi {

// Philox4x32-10 counter-based generator (Salmon et al. 2011). Stateless
// keyed permutation of a 128-bit counter, which makes independent replica
// streams trivial: stream id goes into the upper counter words, so any
// (seed, stream) pair yields a reproducible sequence regardless of thread
// scheduling.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          counter_{0, 0, static_cast<std::uint32_t>(stream),
                   static_cast<std::uint32_t>(stream >> 32)} {}

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            block_ = encrypt(counter_, key_);
            if (++counter_[0] == 0) ++counter_[1];
            pos_ = 0;
        }
        return block_[pos_++];
    }

    // Uniform draw on the open interval (0, 1) with 53 usable bits.
    double uniform() {
        std::uint64_t hi = next_u32() >> 5;   // 27 bits
        std::uint64_t lo = next_u32() >> 6;   // 26 bits
        return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo) + 0.5) /
               9007199254740992.0;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    static const char* name() { return "philox4x32-10"; }

private:
    static std::array<std::uint32_t, 4> encrypt(std::array<std::uint32_t, 4> ctr,
                                                std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            std::array<std::uint32_t, 4> next{
                static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                static_cast<std::uint32_t>(p1),
                static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                static_cast<std::uint32_t>(p0)};
            ctr = next;
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> counter_;
    std::array<std::uint32_t, 4> block_{};
    int pos_ = 4;
};

}  // namespace mfgepi
