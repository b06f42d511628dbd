#ifndef PFEPI_RNG_HPP
#define PFEPI_RNG_HPP

#include <cstdint>
#include <initializer_list>

namespace pfepi {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer: a bijective avalanche over 64 bits.
inline std::uint64_t avalanche64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based random stream (SplitMix64).
///
/// A stream's key is derived by hashing the master seed together with a
/// derivation path (particle id, day, draw purpose, ...).  Identical
/// (seed, path) pairs therefore replay the identical sample sequence no
/// matter which thread steps which particle, and streams with distinct
/// paths are independent for all practical purposes.  Output depends on
/// integer arithmetic only, so sequences are identical across platforms.
class RngStream {
public:
    RngStream() = default;
    explicit RngStream(std::uint64_t key) : state_(key) {}

    static RngStream derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
    {
        std::uint64_t k = avalanche64(master_seed + kGolden);
        for (std::uint64_t e : path)
            k = avalanche64((k ^ avalanche64(e + kGolden)) + kGolden);
        return RngStream(k);
    }

    std::uint64_t next_u64()
    {
        state_ += kGolden;
        return avalanche64(state_);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1); safe as an argument to quantile functions.
    double next_unit_open()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_ = 0;
};

} // namespace pfepi

#endif
