#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bellsim {

using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

/// Philox4x64 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key); bit-compatible with Random123 and numpy.random.Philox.
PhiloxCounter philox4x64_10(PhiloxCounter counter, PhiloxKey key) noexcept;

/// SplitMix64 finaliser over (master, index). Used to derive per-run and
/// per-grid-point seeds from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/**
 * Counter-based random stream addressed by (seed, stream index, substream).
 *
 * Two streams with the same address produce the same sequence, bit for bit,
 * on every platform. Streams with different addresses are independent.
 * Owned by one worker at a time; copying forks the sequence at its current
 * position.
 *
 * Satisfies UniformRandomBitGenerator so it can feed <random> adaptors, but
 * the members below are preferred: std distributions are not bit-portable.
 */
class RandomStream {
public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, std::uint64_t stream_index,
                 std::uint64_t substream = 0) noexcept;

    [[nodiscard]] std::uint64_t seed() const noexcept { return key_[0]; }
    [[nodiscard]] std::uint64_t stream_index() const noexcept { return counter_[2]; }
    [[nodiscard]] std::uint64_t substream_id() const noexcept { return counter_[1]; }

    /// Fresh stream at the same (seed, index) with a different substream id.
    [[nodiscard]] RandomStream substream(std::uint64_t id) const noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) noexcept { return uniform() < p; }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()() noexcept { return next_u64(); }

private:
    PhiloxKey key_;
    PhiloxCounter counter_;  // [block, substream, stream index, 0]
    PhiloxCounter buffer_{};
    unsigned position_ = 4;
};

}  // namespace bellsim
