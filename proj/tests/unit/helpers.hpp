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

#include <cstdint>

#include "beamspace/instance.hpp"
#include "beamspace/pdd.hpp"

namespace beamspace::testing
{

// Small random instance drawn the same way the experiment harness draws one.
inline Instance small_instance(int n, int l, int k, std::uint64_t seed, std::uint64_t trial = 0, int nk = 4,
                               int paths = 4, double p_dbm = 10.0)
{
    auto cfg = SystemConfig::uniform(n, l, k, nk, paths, p_dbm);
    cfg.seed = seed;
    return draw_instance(cfg, trial);
}

inline CMatrix random_cmatrix(int rows, int cols, RngStream &rng, double scale = 1.0)
{
    CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = scale * rng.complex_gaussian();
    return m;
}

inline CVector random_phases(int n, RngStream &rng)
{
    CVector v(n);
    for (int i = 0; i < n; ++i)
        v(i) = rng.unit_phase();
    return v;
}

} // namespace beamspace::testing
