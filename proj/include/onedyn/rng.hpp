#pragma once

#include <cstdint>

namespace onedyn {

/// SplitMix64: the fully specified 64-bit generator used by every stochastic
/// operation in this library.  Fixed seed => identical stream on every
/// platform, which is what makes CSV artifacts byte-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Derive an independent stream (per-sample seeding).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 s(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        return s.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace onedyn
