// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace bdris {

/// Seedable generator with bit-identical output on every platform.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so uniform and Gaussian
/// variates are derived here directly from the raw 64-bit words.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    double uniform();

    /// Standard normal via Box-Muller (both variates of a pair are used).
    double normal();

    /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Mixes a base seed with a stream tag so that auxiliary random draws
/// (random phases, random initializations) never share a sequence with the
/// channel draws of the same trial.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace bdris
