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

#include "beamspace/rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beamspace
{

PhaseProfile::PhaseProfile(std::vector<int> sizes) : sizes_(std::move(sizes))
{
    int total = 0;
    for (int n : sizes_)
    {
        if (n < 1)
            throw Error(ErrorCode::invalid_argument, "PhaseProfile: every user needs at least one antenna");
        offsets_.push_back(total);
        total += n;
    }
    phases_ = CVector::Ones(total);
}

PhaseProfile::PhaseProfile(std::vector<int> sizes, CVector phases) : PhaseProfile(std::move(sizes))
{
    set_vector(phases);
}

PhaseProfile PhaseProfile::random(std::vector<int> sizes, RngStream &rng)
{
    PhaseProfile p(std::move(sizes));
    for (Eigen::Index i = 0; i < p.phases_.size(); ++i)
        p.phases_(i) = rng.unit_phase();
    return p;
}

void PhaseProfile::set_segment(int user, const CVector &phases)
{
    if (phases.size() != sizes_[user])
        throw Error(ErrorCode::invalid_argument, "PhaseProfile::set_segment: length mismatch");
    phases_.segment(offsets_[user], sizes_[user]) = phases;
}

void PhaseProfile::set_vector(const CVector &phases)
{
    if (phases.size() != phases_.size())
        throw Error(ErrorCode::invalid_argument, "PhaseProfile: phase vector length does not match user sizes");
    phases_ = phases;
}

CVector PhaseProfile::beamformer(int user) const
{
    return segment(user) / std::sqrt(static_cast<double>(sizes_[user]));
}

double PhaseProfile::max_modulus_error() const
{
    double err = 0.0;
    for (Eigen::Index i = 0; i < phases_.size(); ++i)
        err = std::max(err, std::abs(std::abs(phases_(i)) - 1.0));
    return err;
}

BeamSelection BeamSelection::from_indices(int num_beams, std::vector<int> indices, RVector soft)
{
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw Error(ErrorCode::invalid_argument, "BeamSelection: duplicate beam index");
    for (int i : indices)
        if (i < 0 || i >= num_beams)
            throw Error(ErrorCode::invalid_argument, "BeamSelection: beam index out of range");
    BeamSelection sel;
    sel.num_beams = num_beams;
    sel.indices = std::move(indices);
    sel.soft = std::move(soft);
    return sel;
}

std::vector<bool> BeamSelection::mask() const
{
    std::vector<bool> m(static_cast<std::size_t>(num_beams), false);
    for (int i : indices)
        m[static_cast<std::size_t>(i)] = true;
    return m;
}

RVector BeamSelection::mask_vector() const
{
    RVector m = RVector::Zero(num_beams);
    for (int i : indices)
        m(i) = 1.0;
    return m;
}

RMatrix BeamSelection::matrix() const
{
    RMatrix s = RMatrix::Zero(static_cast<Eigen::Index>(indices.size()), num_beams);
    for (std::size_t l = 0; l < indices.size(); ++l)
        s(static_cast<Eigen::Index>(l), indices[l]) = 1.0;
    return s;
}

bool BeamSelection::feasible(int rf_chains) const
{
    if (static_cast<int>(indices.size()) != rf_chains)
        return false;
    for (std::size_t i = 0; i < indices.size(); ++i)
    {
        if (indices[i] < 0 || indices[i] >= num_beams)
            return false;
        if (i > 0 && indices[i] <= indices[i - 1])
            return false;
    }
    const RMatrix s = matrix();
    return (s * s.transpose() - RMatrix::Identity(rf_chains, rf_chains)).cwiseAbs().maxCoeff() == 0.0;
}

std::vector<CMatrix> beamspace_channels(const std::vector<UserChannel> &channels, const CMatrix &lens)
{
    std::vector<CMatrix> out;
    out.reserve(channels.size());
    for (const auto &ch : channels)
    {
        if (ch.matrix.rows() != lens.cols())
            throw Error(ErrorCode::invalid_argument, "beamspace_channels: lens and channel dimensions differ");
        out.push_back(lens * ch.matrix);
    }
    return out;
}

EffectiveChannel effective_channels(const std::vector<CMatrix> &beamspace, const PhaseProfile &phases,
                                    const std::vector<double> &powers)
{
    const auto k = static_cast<int>(beamspace.size());
    if (phases.num_users() != k || static_cast<int>(powers.size()) != k || k == 0)
        throw Error(ErrorCode::invalid_argument, "effective_channels: user counts of channels, phases and powers differ");
    const auto n = beamspace.front().rows();

    EffectiveChannel eff;
    eff.unscaled.resize(n, k);
    eff.scaled.resize(n, k);
    eff.powers.resize(k);
    for (int u = 0; u < k; ++u)
    {
        if (beamspace[u].rows() != n || beamspace[u].cols() != phases.size(u))
            throw Error(ErrorCode::invalid_argument, "effective_channels: channel " + std::to_string(u) +
                                                         " does not match its phase segment");
        eff.unscaled.col(u) = beamspace[u] * phases.beamformer(u);
        eff.scaled.col(u) = std::sqrt(powers[u]) * eff.unscaled.col(u);
        eff.powers(u) = powers[u];
    }
    return eff;
}

EffectiveChannel effective_channels(const std::vector<UserChannel> &channels, const CMatrix &lens,
                                    const PhaseProfile &phases, const std::vector<double> &powers)
{
    return effective_channels(beamspace_channels(channels, lens), phases, powers);
}

double log_det_identity_plus(const CMatrix &x)
{
    if (x.rows() != x.cols())
        throw Error(ErrorCode::invalid_argument, "log_det_identity_plus: matrix is not square");
    if (x.size() == 0)
        return 0.0;
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if ((x - x.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw Error(ErrorCode::numerical, "log_det_identity_plus: argument is not Hermitian");

    CMatrix m = 0.5 * (x + x.adjoint());
    m.diagonal().array() += 1.0;
    Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::numerical, "log_det_identity_plus: I + X is not positive definite");
    double acc = 0.0;
    const CMatrix &l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i)
        acc += std::log(l(i, i).real());
    return 2.0 * acc;
}

double sum_rate_selected(const RMatrix &selector, const CMatrix &barh, double noise)
{
    if (selector.cols() != barh.rows())
        throw Error(ErrorCode::invalid_argument, "sum_rate_selected: selector width differs from beam count");
    const auto l = selector.rows();
    if ((selector * selector.transpose() - RMatrix::Identity(l, l)).cwiseAbs().maxCoeff() > 1e-12)
        throw Error(ErrorCode::invalid_argument, "sum_rate_selected: selector does not satisfy S S^H = I");
    const CMatrix selected = selector.cast<cdouble>() * barh;
    return log_det_identity_plus(selected * selected.adjoint() / noise) / std::numbers::ln2;
}

double sum_rate_selected(const std::vector<int> &indices, const CMatrix &barh, double noise)
{
    CMatrix selected(static_cast<Eigen::Index>(indices.size()), barh.cols());
    for (std::size_t l = 0; l < indices.size(); ++l)
    {
        if (indices[l] < 0 || indices[l] >= barh.rows())
            throw Error(ErrorCode::invalid_argument, "sum_rate_selected: beam index out of range");
        selected.row(static_cast<Eigen::Index>(l)) = barh.row(indices[l]);
    }
    return log_det_identity_plus(selected * selected.adjoint() / noise) / std::numbers::ln2;
}

double sum_rate_masked(const RVector &s, const CMatrix &barh, double noise)
{
    if (s.size() != barh.rows())
        throw Error(ErrorCode::invalid_argument, "sum_rate_masked: selection length differs from beam count");
    const CMatrix masked = s.cast<cdouble>().asDiagonal() * barh;
    return log_det_identity_plus(masked * masked.adjoint() / noise) / std::numbers::ln2;
}

namespace
{

CMatrix select_rows(const std::vector<int> &indices, const CMatrix &m)
{
    CMatrix out(static_cast<Eigen::Index>(indices.size()), m.cols());
    for (std::size_t l = 0; l < indices.size(); ++l)
        out.row(static_cast<Eigen::Index>(l)) = m.row(indices[l]);
    return out;
}

} // namespace

double sum_rate_with_powers(const std::vector<int> &indices, const CMatrix &unscaled, const RVector &powers,
                            double noise)
{
    const CMatrix sh = select_rows(indices, unscaled);
    const CMatrix gram = sh * powers.cast<cdouble>().asDiagonal() * sh.adjoint() / noise;
    return log_det_identity_plus(gram) / std::numbers::ln2;
}

RVector rate_power_gradient(const std::vector<int> &indices, const CMatrix &unscaled, const RVector &powers,
                            double noise)
{
    const CMatrix sh = select_rows(indices, unscaled);
    CMatrix m = sh * powers.cast<cdouble>().asDiagonal() * sh.adjoint() / noise;
    m.diagonal().array() += 1.0;
    const CMatrix inner = sh.adjoint() * m.llt().solve(sh);
    return inner.diagonal().real() / (noise * std::numbers::ln2);
}

CMatrix mmse_receiver(const RVector &s, const CMatrix &barh, double noise)
{
    const CMatrix masked = s.cast<cdouble>().asDiagonal() * barh;
    CMatrix k = masked.adjoint() * masked;
    k.diagonal().array() += noise;
    return masked * k.llt().solve(CMatrix::Identity(barh.cols(), barh.cols()));
}

CMatrix mse_matrix(const CMatrix &receiver, const RVector &s, const CMatrix &barh, double noise)
{
    const auto k = barh.cols();
    if (receiver.rows() != barh.rows() || receiver.cols() != k || s.size() != barh.rows())
        throw Error(ErrorCode::invalid_argument, "mse_matrix: dimension mismatch");
    CMatrix t = receiver.adjoint() * s.cast<cdouble>().asDiagonal() * barh;
    t.diagonal().array() -= 1.0;
    CMatrix e = t * t.adjoint() + noise * receiver.adjoint() * receiver;
    return 0.5 * (e + e.adjoint());
}

double wmmse_objective(const CMatrix &weight, const CMatrix &mse)
{
    Eigen::LLT<CMatrix> llt(0.5 * (weight + weight.adjoint()));
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::numerical, "wmmse_objective: weight matrix is not positive definite");
    double log_det = 0.0;
    const CMatrix &l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i)
        log_det += 2.0 * std::log(l(i, i).real());
    return (weight * mse).trace().real() - log_det;
}

} // namespace beamspace
