// SPDX-License-Identifier: Apache-2.0
//
// beamspace: joint beam selection and phase-only beamforming for lens-array
// mmWave MU-MIMO uplinks
// Copyright (C) 2026 The beamspace authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "beamspace/types.hpp"

namespace beamspace
{

// Purpose tags keep draws for different consumers of one trial independent, so
// adding a scheme never perturbs the channels another scheme sees.
enum class StreamPurpose : std::uint64_t
{
    channel = 0,
    pdd_init = 1,
    ia_phases = 2,
    oracle = 3
};

/// Reproducible random stream keyed by (seed, trial, purpose).
///
/// The engine state is derived through std::seed_seq, whose output is fixed by
/// the standard, and the real/complex draws below avoid the implementation-
/// defined standard distributions. A stream therefore yields the same numbers
/// on every platform and for every worker-thread count.
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t trial, StreamPurpose purpose)
    {
        const auto p = static_cast<std::uint64_t>(purpose);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                          static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(p >> 32)};
        engine_.seed(seq);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // CN(0, 1): real and imaginary parts each N(0, 1/2).
    cdouble complex_gaussian()
    {
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
    }

    // Unit-modulus value with phase uniform on [0, 2pi).
    cdouble unit_phase()
    {
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::polar(1.0, two_pi * uniform());
    }

    std::mt19937_64 &engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

} // namespace beamspace
