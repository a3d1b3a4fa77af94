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

#include "beamspace/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace beamspace
{

SystemConfig SystemConfig::uniform(int bs_antennas, int rf_chains, int num_users, int ut_antennas, int num_paths,
                                   double max_power_dbm)
{
    SystemConfig cfg;
    cfg.bs_antennas = bs_antennas;
    cfg.rf_chains = rf_chains;
    cfg.num_users = num_users;
    const auto k = static_cast<std::size_t>(std::max(num_users, 0));
    cfg.ut_antennas.assign(k, ut_antennas);
    cfg.num_paths.assign(k, num_paths);
    cfg.max_power_dbm.assign(k, max_power_dbm);
    return cfg;
}

int SystemConfig::total_ut_antennas() const
{
    int total = 0;
    for (int n : ut_antennas)
        total += n;
    return total;
}

std::vector<std::string> SystemConfig::violations() const
{
    std::vector<std::string> out;
    auto fail = [&](const std::string &msg) { out.push_back(msg); };

    if (bs_antennas < 1)
        fail("bs_antennas must be >= 1");
    if (rf_chains < 1)
        fail("rf_chains must be >= 1");
    if (num_users < 1)
        fail("num_users must be >= 1");
    if (num_users > rf_chains)
        fail("num_users (K) must not exceed rf_chains (L)");
    if (rf_chains > bs_antennas)
        fail("rf_chains (L) must not exceed bs_antennas (N)");

    const auto k = static_cast<std::size_t>(std::max(num_users, 0));
    if (ut_antennas.size() != k)
        fail("ut_antennas must have num_users entries");
    if (num_paths.size() != k)
        fail("num_paths must have num_users entries");
    if (max_power_dbm.size() != k)
        fail("max_power_dbm must have num_users entries");
    for (std::size_t i = 0; i < ut_antennas.size(); ++i)
        if (ut_antennas[i] < 1)
            fail("ut_antennas[" + std::to_string(i) + "] must be >= 1");
    for (std::size_t i = 0; i < num_paths.size(); ++i)
        if (num_paths[i] < 1)
            fail("num_paths[" + std::to_string(i) + "] must be >= 1");
    for (std::size_t i = 0; i < max_power_dbm.size(); ++i)
        if (!std::isfinite(max_power_dbm[i]))
            fail("max_power_dbm[" + std::to_string(i) + "] must be finite");
    if (!std::isfinite(noise_power_dbm))
        fail("noise_power_dbm must be finite");
    if (!(carrier_ghz > 0.0) || !std::isfinite(carrier_ghz))
        fail("carrier_ghz must be > 0");
    if (!(cell_radius_m > 0.0) || !std::isfinite(cell_radius_m))
        fail("cell_radius_m must be > 0");
    return out;
}

void SystemConfig::validate() const
{
    const auto v = violations();
    if (v.empty())
        return;
    std::ostringstream msg;
    msg << "invalid system config:";
    for (const auto &s : v)
        msg << "\n  - " << s;
    throw Error(ErrorCode::invalid_argument, msg.str());
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

LinearPowers to_linear(const SystemConfig &cfg)
{
    LinearPowers p;
    p.noise = dbm_to_mw(cfg.noise_power_dbm);
    p.max_power.reserve(cfg.max_power_dbm.size());
    for (double dbm : cfg.max_power_dbm)
        p.max_power.push_back(dbm_to_mw(dbm));
    return p;
}

double path_loss(double carrier_ghz, double distance_km)
{
    if (!(carrier_ghz > 0.0) || !(distance_km > 0.0))
        throw Error(ErrorCode::domain, "path_loss: carrier frequency and distance must be positive");
    const double pl_db = 92.5 + 20.0 * std::log10(carrier_ghz) + 20.0 * std::log10(distance_km);
    return std::pow(10.0, -pl_db / 10.0);
}

bool inside_hexagon(double x, double y, double circumradius)
{
    // Vertices at 0, 60, ..., 300 degrees; edge normals at 30, 90, 150 degrees.
    const double apothem = circumradius * std::sqrt(3.0) / 2.0;
    const double c = std::sqrt(3.0) / 2.0;
    return std::abs(y) <= apothem && std::abs(c * x + 0.5 * y) <= apothem && std::abs(-c * x + 0.5 * y) <= apothem;
}

std::vector<UserGeometry> sample_geometry(const SystemConfig &cfg, RngStream &rng)
{
    const double r = cfg.cell_radius_m;
    std::vector<UserGeometry> out;
    out.reserve(static_cast<std::size_t>(cfg.num_users));
    for (int k = 0; k < cfg.num_users; ++k)
    {
        double x = 0.0, y = 0.0;
        do
        {
            x = rng.uniform(-r, r);
            y = rng.uniform(-r, r);
        } while (x * x + y * y > r * r || !inside_hexagon(x, y, r));

        const double d_m = std::max(std::hypot(x, y), min_distance_m);
        UserGeometry g;
        g.distance_km = d_m / 1000.0;
        g.large_scale_gain = path_loss(cfg.carrier_ghz, g.distance_km);
        out.push_back(g);
    }
    return out;
}

} // namespace beamspace
