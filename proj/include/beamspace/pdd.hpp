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
#include "beamspace/rng.hpp"
#include "beamspace/solution.hpp"

namespace beamspace
{

// Immutable inputs of one joint design problem.
struct PddProblem
{
    std::vector<CMatrix> beamspace; // U H_k, N x N_k
    std::vector<double> powers;     // p_{k,max}, mW
    double noise = 1.0;             // sigma^2, mW
    int rf_chains = 1;              // L

    int num_beams() const { return static_cast<int>(beamspace.front().rows()); }
    int num_users() const { return static_cast<int>(beamspace.size()); }
    std::vector<int> ut_sizes() const;

    // barH for the given phases.
    CMatrix effective(const PhaseProfile &phases) const;

    void validate() const;
};

// Starting point of the outer loop.
enum class PddInit
{
    sequential, // eigen phases and the greedy selection (binary s)
    uniform,    // random phases, s = s_bar = (L/N) 1
};

struct PddOptions
{
    PddInit init = PddInit::sequential;
    int max_outer = 50;
    int max_inner = 50;
    double inner_tol = 1e-5;          // relative AL decrease that ends the inner loop
    double rho0 = 0.1;                // initial penalty
    double chi = 0.7;                 // penalty / threshold scaling, in (0, 1)
    double threshold0 = 1.0;          // initial violation threshold
    double violation_target = 1e-3;   // outer stop: h <= target ...
    double rate_tol = 1e-4;           // ... and relative rate change <= rate_tol
    int mm_max_iter = 200;
    double mm_tol = 1e-8;
    bool record_steps = false;        // keep the AL value after every block update

    void validate() const;
};

/// Complete PDD iterate: primal blocks, duals and penalty bookkeeping.
struct PddState
{
    PhaseProfile phases;
    RVector s;              // continuous selection
    RVector s_bar;          // auxiliary copy, kept in [0, 1]
    CMatrix receiver;       // U_h, N x K
    CMatrix weight;         // W_h, K x K
    double dual_xi = 0.0;   // sum constraint
    RVector dual_mu;        // s_bar = s
    RVector dual_lambda;    // s (1 - s_bar) = 0
    double rho = 1.0;
    double violation_threshold = 1.0;
    double scale_chi = 0.7;
    int outer_iter = 0;
    int inner_iter = 0;
};

// Starting point chosen by options.init: zero duals, then receiver and weight
// from their closed forms. The rng is only drawn from for PddInit::uniform.
PddState initial_state(const PddProblem &problem, const PddOptions &options, RngStream &rng);

// Given phases with s = s_bar = (L/N) 1.
PddState initial_state(const PddProblem &problem, const PddOptions &options, const PhaseProfile &phases);

// Given phases and selection; s_bar starts as the selection clipped to [0, 1].
PddState initial_state(const PddProblem &problem, const PddOptions &options, const PhaseProfile &phases,
                       const RVector &selection);

// f2(s, s_bar) / (2 rho).
double penalty_term(const PddState &state, int rf_chains);

// tr(W E) - ln det W + f2 / (2 rho).
double al_objective(const PddProblem &problem, const PddState &state);

// Block updates. Each one minimizes the AL objective over its block.
void update_weight(const PddProblem &problem, PddState &state);            // W = E^-1
void update_receiver(const PddProblem &problem, PddState &state);          // MMSE receiver
void update_relaxed_selection(PddState &state);                            // s_bar, clamped closed form
void update_selection(const PddProblem &problem, PddState &state);         // s = (G + G^T)^-1 g

/// Quadratic model s^T G s - g^T s + const of the AL objective in s.
struct SelectionQuadratic
{
    RMatrix G;
    RVector g;
};
SelectionQuadratic selection_quadratic(const PddProblem &problem, const PddState &state);

/// Unit-modulus quadratic phi^H B phi - 2 Re{phi^H b} with block-diagonal B.
struct MmSubproblem
{
    CMatrix B;                  // N_U x N_U, blocks A_k on the diagonal
    CVector b;
    std::vector<int> sizes;     // block sizes N_k
    double majorizer_level = 0; // largest eigenvalue of B

    double objective(const CVector &phi) const;
};

MmSubproblem build_mm_subproblem(const PddProblem &problem, const PddState &state);

struct MmResult
{
    CVector phases;
    std::vector<double> objective; // value at the start and after each iteration
    int iterations = 0;
};

/// Majorization-minimization over unit-modulus vectors.
///
/// Iterates phi <- exp(j arg((lambda_max I - B) phi + b)) until the relative
/// objective decrease drops below `tol` or `max_iter` iterations pass. An
/// entry whose argument is exactly zero keeps its previous phase.
MmResult minimize_unit_modulus(const MmSubproblem &sub, const CVector &init, int max_iter = 200, double tol = 1e-8);

void update_phases(const PddProblem &problem, PddState &state, const PddOptions &options);

struct InnerReport
{
    int cycles = 0;
    std::vector<double> cycle_objective; // AL value before the first cycle, then after each
    std::vector<double> step_objective;  // AL value after each block update (when recorded)
};

// Cycles weight -> receiver -> s_bar -> s -> phases.
InnerReport inner_bcd(const PddProblem &problem, PddState &state, const PddOptions &options);

// max{ |sum s - L|, |s_bar_n - s_n|, |s_n (1 - s_bar_n)| }.
double constraint_violation(const RVector &s, const RVector &s_bar, int rf_chains);

// Dual ascent when h is below the threshold, penalty shrink otherwise.
void outer_update(PddState &state, double violation, int rf_chains);

// Top-L entries of s; ties by larger row energy of barH, then lower index.
std::vector<int> binarize_selection(const RVector &s, const CMatrix &barh, int rf_chains);

Solution run_pdd(const PddProblem &problem, const PddOptions &options, RngStream &rng);
Solution run_pdd(const PddProblem &problem, const PddOptions &options, PddState state);

} // namespace beamspace
