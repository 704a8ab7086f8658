#ifndef WIENERMC_WALK_STREAM_HPP
#define WIENERMC_WALK_STREAM_HPP

#include <cstdint>

namespace wmc {

/// SplitMix64 finalizer (Steele, Lea & Flood).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Uniform [0, 1) source for one random walk. The stream is keyed by
 * (seed, component, walk) only, so walks can be scheduled in any order or on
 * any number of threads and still reproduce the same scores.
 */
class WalkStream {
public:
    constexpr WalkStream(std::uint64_t seed, std::uint64_t component, std::uint64_t walk) noexcept
        : state_(splitmix64_mix(splitmix64_mix(splitmix64_mix(seed) ^ (component * kGamma + 1))
                                ^ (walk * 0xd1b54a32d192ed03ULL)))
    {
    }

    constexpr std::uint64_t next_u64() noexcept
    {
        state_ += kGamma;
        return splitmix64_mix(state_);
    }

    /// 53-bit uniform in [0, 1).
    constexpr double operator()() noexcept
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    std::uint64_t state_;
};

} // namespace wmc

#endif // WIENERMC_WALK_STREAM_HPP
