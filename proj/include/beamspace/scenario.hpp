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
#include <string>
#include <vector>

#include "beamspace/rng.hpp"

namespace beamspace
{

/// Scenario scalars for one uplink cell.
///
/// Per-user lists (ut_antennas, num_paths, max_power_dbm) hold one entry per
/// user. Powers stay in dBm here; to_linear() is the single place they are
/// converted, and every solver consumes the linear (mW) values.
struct SystemConfig
{
    int bs_antennas = 64;                    // N
    int rf_chains = 8;                       // L
    int num_users = 8;                       // K
    std::vector<int> ut_antennas = std::vector<int>(8, 4); // N_k
    std::vector<int> num_paths = std::vector<int>(8, 4);   // M_k
    double noise_power_dbm = -100.0;
    std::vector<double> max_power_dbm = std::vector<double>(8, 10.0);
    double carrier_ghz = 28.0;
    double cell_radius_m = 100.0;
    std::uint64_t seed = 1;

    // Uniform per-user settings for K users.
    static SystemConfig uniform(int bs_antennas, int rf_chains, int num_users, int ut_antennas, int num_paths,
                                double max_power_dbm);

    int total_ut_antennas() const;

    // Every violated invariant, one message each. Empty when valid.
    std::vector<std::string> violations() const;

    // Throws Error(invalid_argument) listing all violations.
    void validate() const;
};

struct LinearPowers
{
    double noise = 0.0;             // sigma^2 in mW
    std::vector<double> max_power;  // p_{k,max} in mW
};

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

LinearPowers to_linear(const SystemConfig &cfg);

struct UserGeometry
{
    double distance_km = 0.0;
    double large_scale_gain = 0.0; // linear, from path_loss()
};

// Minimum UT-to-BS distance applied to sampled positions.
inline constexpr double min_distance_m = 1.0;

/// Free-space large-scale gain 10^(-PL/10) with
/// PL[dB] = 92.5 + 20 log10(f0[GHz]) + 20 log10(d[km]).
double path_loss(double carrier_ghz, double distance_km);

// K positions uniform over the hexagon of circumradius cfg.cell_radius_m
// centred on the BS (vertices on the x axis), by rejection from the
// circumscribed disc. Distances are floored at min_distance_m.
std::vector<UserGeometry> sample_geometry(const SystemConfig &cfg, RngStream &rng);

// True when (x, y) lies inside the hexagon of the given circumradius.
bool inside_hexagon(double x, double y, double circumradius);

} // namespace beamspace
