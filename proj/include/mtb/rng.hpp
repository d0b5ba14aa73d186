#pragma once
// Counter-based random streams (Philox4x32-10, Salmon et al. SC'11).
//
// A stream is keyed by (seed, stream id); the id occupies the upper half of
// the 128-bit counter, so streams with distinct ids can never overlap.  This
// makes per-trial substreams reproducible regardless of how trials are
// partitioned across threads or machines.

#include <array>
#include <cstdint>

namespace mtb {

namespace philox {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

// One 128-bit block of Philox4x32-10.
inline std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                          std::array<std::uint32_t, 2> key) {
    for (int r = 0; r < 9; ++r) {
        round_once(ctr, key);
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    round_once(ctr, key);
    return ctr;
}

}  // namespace philox

class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    std::uint32_t next_u32() {
        if (pos_ == 4) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        return (hi << 32) | lo;
    }

    // Uniform on (0, 1] with 53-bit resolution; never returns 0, so it can
    // feed a quantile function directly.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Fair +-1 sign; consumes one buffered 64-bit word per 64 signs.
    int next_sign() {
        if (sign_count_ == 0) {
            sign_bits_ = next_u64();
            sign_count_ = 64;
        }
        const int s = (sign_bits_ & 1u) ? 1 : -1;
        sign_bits_ >>= 1;
        --sign_count_;
        return s;
    }

    std::uint64_t stream_id() const { return stream_; }

private:
    void refill() {
        buf_ = philox::block({static_cast<std::uint32_t>(counter_),
                              static_cast<std::uint32_t>(counter_ >> 32),
                              static_cast<std::uint32_t>(stream_),
                              static_cast<std::uint32_t>(stream_ >> 32)},
                             key_);
        ++counter_;
        pos_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    std::uint64_t sign_bits_ = 0;
    int sign_count_ = 0;
};

}  // namespace mtb
