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
#include <vector>

#include "beamspace/channel.hpp"
#include "beamspace/pdd.hpp"
#include "beamspace/scenario.hpp"

namespace beamspace
{

// One Monte Carlo realization: geometry, spatial channels and the derived
// solver input. Every scheme of a trial consumes the same Instance.
struct Instance
{
    SystemConfig config;
    LinearPowers powers;
    std::vector<UserGeometry> geometry;
    std::vector<UserChannel> channels;
    PddProblem problem;
};

// Draws geometry and channels from the (config.seed, trial) channel stream.
Instance draw_instance(const SystemConfig &config, std::uint64_t trial);

// Solver input from already-drawn channels.
PddProblem make_problem(const SystemConfig &config, const LinearPowers &powers,
                        const std::vector<UserChannel> &channels);

} // namespace beamspace
