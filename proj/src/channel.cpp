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

#include "beamspace/channel.hpp"

#include <cmath>
#include <numbers>

namespace beamspace
{

namespace
{

double centred_index(int i, int length) { return static_cast<double>(i) - 0.5 * static_cast<double>(length - 1); }

} // namespace

CVector steering(int length, double angle)
{
    if (length < 1)
        throw Error(ErrorCode::domain, "steering: array length must be >= 1");
    const double s = std::sin(angle);
    CVector a(length);
    for (int i = 0; i < length; ++i)
        a(i) = std::polar(1.0, -std::numbers::pi * centred_index(i, length) * s);
    return a;
}

CMatrix dft_lens(int n)
{
    if (n < 1)
        throw Error(ErrorCode::domain, "dft_lens: size must be >= 1");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix u(n, n);
    for (int row = 0; row < n; ++row)
    {
        const double sine = 2.0 * centred_index(row, n) / static_cast<double>(n);
        for (int col = 0; col < n; ++col)
            u(row, col) = std::polar(scale, std::numbers::pi * centred_index(col, n) * sine);
    }
    return u;
}

UserChannel assemble_channel(int bs_antennas, int ut_antennas, double large_scale_gain, const CVector &path_gains,
                             const RVector &aoa, const RVector &aod)
{
    const auto paths = path_gains.size();
    if (aoa.size() != paths || aod.size() != paths || paths < 1)
        throw Error(ErrorCode::invalid_argument, "assemble_channel: path parameter lengths differ or are empty");

    UserChannel ch;
    ch.path_gains = path_gains;
    ch.aoa = aoa;
    ch.aod = aod;
    ch.large_scale_gain = large_scale_gain;
    ch.matrix = CMatrix::Zero(bs_antennas, ut_antennas);
    for (Eigen::Index l = 0; l < paths; ++l)
        ch.matrix.noalias() += path_gains(l) * steering(bs_antennas, aoa(l)) * steering(ut_antennas, aod(l)).adjoint();
    ch.matrix *= std::sqrt(large_scale_gain / static_cast<double>(paths));
    return ch;
}

UserChannel sample_channel(int bs_antennas, int ut_antennas, int num_paths, const UserGeometry &geometry,
                           RngStream &rng)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    CVector gains(num_paths);
    RVector aoa(num_paths), aod(num_paths);
    for (int l = 0; l < num_paths; ++l)
    {
        gains(l) = rng.complex_gaussian();
        aoa(l) = rng.uniform(0.0, two_pi);
        aod(l) = rng.uniform(0.0, two_pi);
    }
    return assemble_channel(bs_antennas, ut_antennas, geometry.large_scale_gain, gains, aoa, aod);
}

std::vector<UserChannel> sample_channels(const SystemConfig &cfg, const std::vector<UserGeometry> &geometry,
                                         RngStream &rng)
{
    if (geometry.size() != static_cast<std::size_t>(cfg.num_users))
        throw Error(ErrorCode::invalid_argument, "sample_channels: one geometry entry per user required");
    std::vector<UserChannel> out;
    out.reserve(geometry.size());
    for (int k = 0; k < cfg.num_users; ++k)
        out.push_back(sample_channel(cfg.bs_antennas, cfg.ut_antennas[k], cfg.num_paths[k], geometry[k], rng));
    return out;
}

nlohmann::json channels_to_json(std::uint64_t trial_index, const std::vector<UserChannel> &channels,
                                const std::vector<UserGeometry> &geometry)
{
    nlohmann::json users = nlohmann::json::array();
    for (std::size_t k = 0; k < channels.size(); ++k)
    {
        const auto &ch = channels[k];
        nlohmann::json u;
        u["distance_km"] = k < geometry.size() ? geometry[k].distance_km : 0.0;
        u["large_scale_gain"] = ch.large_scale_gain;
        nlohmann::json gre = nlohmann::json::array(), gim = nlohmann::json::array();
        nlohmann::json aoa = nlohmann::json::array(), aod = nlohmann::json::array();
        for (Eigen::Index l = 0; l < ch.path_gains.size(); ++l)
        {
            gre.push_back(ch.path_gains(l).real());
            gim.push_back(ch.path_gains(l).imag());
            aoa.push_back(ch.aoa(l));
            aod.push_back(ch.aod(l));
        }
        u["gain_re"] = gre;
        u["gain_im"] = gim;
        u["aoa"] = aoa;
        u["aod"] = aod;
        users.push_back(u);
    }
    return {{"trial", trial_index}, {"users", users}};
}

std::vector<UserChannel> channels_from_json(const nlohmann::json &record, int bs_antennas,
                                            const std::vector<int> &ut_antennas)
{
    try
    {
        const auto &users = record.at("users");
        if (users.size() != ut_antennas.size())
            throw Error(ErrorCode::invalid_argument, "channels_from_json: user count does not match ut_antennas");
        std::vector<UserChannel> out;
        for (std::size_t k = 0; k < users.size(); ++k)
        {
            const auto &u = users[k];
            const auto gre = u.at("gain_re").get<std::vector<double>>();
            const auto gim = u.at("gain_im").get<std::vector<double>>();
            const auto aoa = u.at("aoa").get<std::vector<double>>();
            const auto aod = u.at("aod").get<std::vector<double>>();
            const auto m = static_cast<Eigen::Index>(gre.size());
            if (gim.size() != gre.size())
                throw Error(ErrorCode::invalid_argument, "channels_from_json: gain_re/gain_im length mismatch");
            CVector gains(m);
            for (Eigen::Index l = 0; l < m; ++l)
                gains(l) = {gre[l], gim[l]};
            out.push_back(assemble_channel(bs_antennas, ut_antennas[k], u.at("large_scale_gain").get<double>(),
                                           gains, Eigen::Map<const RVector>(aoa.data(), aoa.size()),
                                           Eigen::Map<const RVector>(aod.data(), aod.size())));
        }
        return out;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(ErrorCode::invalid_argument, std::string("channels_from_json: ") + e.what());
    }
}

} // namespace beamspace
