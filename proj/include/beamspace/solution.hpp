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

#include <vector>

#include "beamspace/rate.hpp"

namespace beamspace
{

// One row of the PDD convergence trace.
struct TraceRow
{
    int outer_iter = 0;
    double rate_bits = 0.0;
    double violation = 0.0;
    double rho = 0.0;
    int inner_iters = 0;
};

// What every scheme returns: a feasible selection, unit-modulus phases and the
// sum rate of exactly that pair.
struct Solution
{
    BeamSelection selection;
    PhaseProfile phases;
    double rate_bits = 0.0;
    bool converged = true;
    int outer_iters = 0;
    std::vector<TraceRow> trace;
};

} // namespace beamspace
