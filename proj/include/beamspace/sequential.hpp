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

#include "beamspace/pdd.hpp"
#include "beamspace/rate.hpp"
#include "beamspace/solution.hpp"

namespace beamspace
{

struct SelectionCandidate
{
    std::vector<int> indices; // ascending
    double rate_bits = 0.0;
    // Greedy only: rate after the 1st, 2nd, ... pick (in pick order).
    std::vector<double> prefix_rates;
};

// Enumeration cap for exhaustive_beam_select.
inline constexpr double max_exhaustive_subsets = 1e6;

/// exp(j arg(v)) for the principal eigenvector v of H^H H.
///
/// v is rotated so its first nonzero entry is real positive; entries with zero
/// magnitude get phase 0. A zero channel returns all ones.
CVector eigen_phase(const CMatrix &channel);

// phi^H H^H H phi / N_k (equal to ||U H w||^2 for unitary U).
double channel_gain(const CMatrix &channel, const CVector &phases);

// Grows the selection one beam at a time, always adding the beam with the
// largest rate gain (lowest index on ties).
SelectionCandidate greedy_beam_select(const CMatrix &barh, double noise, int rf_chains);

// Binomial coefficient as a double (no overflow for large arguments).
double subset_count(int n, int k);

// Best of all C(N, L) subsets; ties keep the lexicographically smallest index
// tuple. Throws Error(limit) above max_exhaustive_subsets.
SelectionCandidate exhaustive_beam_select(const CMatrix &barh, double noise, int rf_chains);

// Eigen-phase per user, then greedy selection on the resulting barH.
Solution run_so(const PddProblem &problem);

// Eigen-phase per user, then exhaustive selection.
Solution run_eigen_exhaustive(const PddProblem &problem);

// "IA-like" baseline: random phases, then the L rows of barH with the largest
// energy (lowest index on ties).
Solution baseline_ia_like(const PddProblem &problem, RngStream &rng);

// L rows of barH with the largest squared norm.
std::vector<int> max_magnitude_selection(const CMatrix &barh, int rf_chains);

// Greedy against exhaustive selection on eigen-phase effective channels.
struct OracleReport
{
    int trials = 0;
    double mean_greedy = 0.0;
    double mean_exhaustive = 0.0;
    double max_gap_bits = 0.0;       // max of exhaustive - greedy
    double min_ratio = 1.0;          // min of greedy / exhaustive
    double fraction_within_95 = 0.0; // share of trials with greedy >= 0.95 exhaustive
    bool exhaustive_dominates = true;
};

// K users with N_k = 4, M_k = 4 and 10 dBm on an N-antenna lens with L RF
// chains; trial t draws from the (seed, t) oracle stream.
OracleReport compare_greedy_exhaustive(int bs_antennas, int rf_chains, int num_users, std::uint64_t seed,
                                       int trials);

} // namespace beamspace
