#pragma once

#include <cstdint>

namespace qforge {

/// SplitMix64 output mixer (Stafford "Mix13"). A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based uniform stream.
///
/// Word k of stream (seed, id) is
///
///     key  = mix64(seed ^ mix64(id + 0x9e3779b97f4a7c15))
///     word = mix64(key + (k + 1) * 0x9e3779b97f4a7c15)
///
/// i.e. SplitMix64 started at `key`. The k-th value depends only on
/// (seed, id, k), so streams never interact and any position can be reached
/// directly. This layout is part of the output contract: changing it changes
/// every simulated number.
class RngStream {
public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id), key_(mix64(seed ^ mix64(stream_id + kGamma))) {}

    std::uint64_t next_u64() noexcept { return at(counter_++); }

    /// Uniform on the open interval (0, 1): (top 52 bits + 0.5) * 2^-52. With
    /// 52 bits the half offset is exact, so neither endpoint is reachable.
    double next_uniform() noexcept {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    /// Word at an absolute position, without moving the counter.
    std::uint64_t at(std::uint64_t counter) const noexcept {
        return mix64(key_ + (counter + 1) * kGamma);
    }

    void seek(std::uint64_t counter) noexcept { counter_ = counter; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qforge
