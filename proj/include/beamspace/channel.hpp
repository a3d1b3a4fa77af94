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

#include <json.hpp>

#include "beamspace/rng.hpp"
#include "beamspace/scenario.hpp"
#include "beamspace/types.hpp"

namespace beamspace
{

/// Half-wavelength ULA response a_T(psi).
///
/// Entry x, for x in the centred index set {-(T-1)/2, ..., (T-1)/2} (half-integer
/// offsets when T is even), equals exp(-j pi x sin psi). Throws Error(domain)
/// for T < 1.
CVector steering(int length, double angle);

/// Centred unitary DFT modelling the lens.
///
/// Row m (m in the centred index set of size N) is a_N(psi_m)^H / sqrt(N) with
/// sin psi_m = 2m/N, so a plane wave arriving at one of those sine angles
/// focuses all of its energy onto a single beam.
CMatrix dft_lens(int n);

/// One user's spatial channel and the path parameters that generated it.
struct UserChannel
{
    CMatrix matrix;          // H_k, N x N_k
    CVector path_gains;      // beta_{k,l}
    RVector aoa;             // radians, at the BS
    RVector aod;             // radians, at the UT
    double large_scale_gain = 0.0;
};

// H = sqrt(mu/M) sum_l beta_l a_N(aoa_l) a_{N_k}(aod_l)^H.
UserChannel assemble_channel(int bs_antennas, int ut_antennas, double large_scale_gain, const CVector &path_gains,
                             const RVector &aoa, const RVector &aod);

// beta ~ CN(0,1) i.i.d.; angles uniform on [0, 2pi).
UserChannel sample_channel(int bs_antennas, int ut_antennas, int num_paths, const UserGeometry &geometry,
                           RngStream &rng);

// All users of one trial, drawn in user order from the same stream.
std::vector<UserChannel> sample_channels(const SystemConfig &cfg, const std::vector<UserGeometry> &geometry,
                                         RngStream &rng);

// Dump record: path parameters only, enough to rebuild every H_k bit-exactly
// through assemble_channel().
nlohmann::json channels_to_json(std::uint64_t trial_index, const std::vector<UserChannel> &channels,
                                const std::vector<UserGeometry> &geometry);

std::vector<UserChannel> channels_from_json(const nlohmann::json &record, int bs_antennas,
                                            const std::vector<int> &ut_antennas);

} // namespace beamspace
