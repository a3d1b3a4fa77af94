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

#include "beamspace/channel.hpp"
#include "beamspace/rng.hpp"
#include "beamspace/types.hpp"

namespace beamspace
{

/// Concatenated unit-modulus phase vector of all users, phi = [phi_1; ...; phi_K].
class PhaseProfile
{
public:
    PhaseProfile() = default;

    // All-ones phases for the given per-user array sizes.
    explicit PhaseProfile(std::vector<int> sizes);

    // Throws Error(invalid_argument) when phases.size() != sum(sizes).
    PhaseProfile(std::vector<int> sizes, CVector phases);

    // I.i.d. phases uniform on [0, 2pi).
    static PhaseProfile random(std::vector<int> sizes, RngStream &rng);

    int num_users() const { return static_cast<int>(sizes_.size()); }
    int total_size() const { return static_cast<int>(phases_.size()); }
    int size(int user) const { return sizes_[user]; }
    int offset(int user) const { return offsets_[user]; }
    const std::vector<int> &sizes() const { return sizes_; }

    const CVector &vector() const { return phases_; }
    CVector segment(int user) const { return phases_.segment(offsets_[user], sizes_[user]); }
    void set_segment(int user, const CVector &phases);
    void set_vector(const CVector &phases);

    // w_k = phi_k / sqrt(N_k).
    CVector beamformer(int user) const;

    // max_n | |phi_n| - 1 |.
    double max_modulus_error() const;

private:
    std::vector<int> sizes_;
    std::vector<int> offsets_;
    CVector phases_;
};

/// Beam selection: optional continuous s and the binary choice.
struct BeamSelection
{
    int num_beams = 0;          // N
    std::vector<int> indices;   // selected beams, ascending
    RVector soft;               // continuous s from the PDD solver; empty otherwise

    // Throws Error(invalid_argument) on duplicates or out-of-range indices.
    static BeamSelection from_indices(int num_beams, std::vector<int> indices, RVector soft = {});

    std::vector<bool> mask() const;
    RVector mask_vector() const;

    // L x N selector: row l has a single 1 at indices[l].
    RMatrix matrix() const;

    // Exactly `rf_chains` distinct beams and S S^H = I_L.
    bool feasible(int rf_chains) const;
};

struct EffectiveChannel
{
    CMatrix scaled;   // barH, column k = sqrt(p_k) U H_k w_k
    CMatrix unscaled; // column k = U H_k w_k
    RVector powers;   // diagonal of Lambda
};

// U H_k for every user; the solvers work from these exclusively.
std::vector<CMatrix> beamspace_channels(const std::vector<UserChannel> &channels, const CMatrix &lens);

EffectiveChannel effective_channels(const std::vector<CMatrix> &beamspace, const PhaseProfile &phases,
                                    const std::vector<double> &powers);

EffectiveChannel effective_channels(const std::vector<UserChannel> &channels, const CMatrix &lens,
                                    const PhaseProfile &phases, const std::vector<double> &powers);

/// Natural log of det(I + X) for Hermitian PSD X, via Cholesky.
///
/// X is symmetrized first; an anti-Hermitian residue above 1e-8 relative to
/// max|X|, or a failed factorization, raises Error(numerical).
double log_det_identity_plus(const CMatrix &x);

// log2 det(I_L + sigma^-2 S barH barH^H S^H). Requires S S^H = I_L.
double sum_rate_selected(const RMatrix &selector, const CMatrix &barh, double noise);
double sum_rate_selected(const std::vector<int> &indices, const CMatrix &barh, double noise);

// log2 det(I_N + sigma^-2 Delta barH barH^H Delta^H), Delta = diag(s). s may be fractional.
double sum_rate_masked(const RVector &s, const CMatrix &barh, double noise);

// d(rate)/d(p_k) in bits per mW for a fixed selection; the unscaled stack H is
// combined with `powers` as H Lambda H^H. Non-negative for every k.
RVector rate_power_gradient(const std::vector<int> &indices, const CMatrix &unscaled, const RVector &powers,
                            double noise);
double sum_rate_with_powers(const std::vector<int> &indices, const CMatrix &unscaled, const RVector &powers,
                            double noise);

// (sigma^2 I + Delta barH barH^H Delta)^-1 Delta barH, evaluated in its K x K form.
CMatrix mmse_receiver(const RVector &s, const CMatrix &barh, double noise);

// E = (U^H Delta barH - I)(.)^H + sigma^2 U^H U, Hermitian part.
CMatrix mse_matrix(const CMatrix &receiver, const RVector &s, const CMatrix &barh, double noise);

// tr(W E) - ln det W. Throws Error(numerical) when W is not positive definite.
double wmmse_objective(const CMatrix &weight, const CMatrix &mse);

} // namespace beamspace
