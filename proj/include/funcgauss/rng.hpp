#pragma once

#include <cstdint>
#include <random>

namespace funcgauss {

struct RngSeed {
    std::uint64_t value = 0;
};

// splitmix64-style mixing so per-run streams are decorrelated from the base
// seed and from each other.
RngSeed derive_seed(RngSeed base, std::uint64_t a, std::uint64_t b = 0);

// mt19937_64 with a polar-method Gaussian on top.  The engine's output is
// pinned by the standard and the transform below uses nothing
// implementation-defined, so identical seeds give identical streams on any
// platform.
class Rng {
public:
    explicit Rng(RngSeed seed) : eng_(seed.value) {}

    // Uniform on [0,1).
    double uniform() {
        return (eng_() >> 11) * 0x1.0p-53;
    }

    double normal();

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace funcgauss
