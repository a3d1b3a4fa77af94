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

#include "beamspace/instance.hpp"

namespace beamspace
{

PddProblem make_problem(const SystemConfig &config, const LinearPowers &powers,
                        const std::vector<UserChannel> &channels)
{
    PddProblem p;
    p.beamspace = beamspace_channels(channels, dft_lens(config.bs_antennas));
    p.powers = powers.max_power;
    p.noise = powers.noise;
    p.rf_chains = config.rf_chains;
    p.validate();
    return p;
}

Instance draw_instance(const SystemConfig &config, std::uint64_t trial)
{
    config.validate();
    Instance inst;
    inst.config = config;
    inst.powers = to_linear(config);
    RngStream rng(config.seed, trial, StreamPurpose::channel);
    inst.geometry = sample_geometry(config, rng);
    inst.channels = sample_channels(config, inst.geometry, rng);
    inst.problem = make_problem(config, inst.powers, inst.channels);
    return inst;
}

} // namespace beamspace
