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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamspace/pdd.hpp"
#include "beamspace/scenario.hpp"
#include "beamspace/solution.hpp"

namespace beamspace
{

enum class SweepAxis
{
    none,
    power_dbm,
    ut_antennas,
    rf_chains
};

enum class Scheme
{
    pdd,
    so,
    ia_like,
    exhaustive
};

// Version string of the library build.
std::string library_version();

std::string to_string(SweepAxis axis);
std::string to_string(Scheme scheme);
std::string to_string(PddInit init);
SweepAxis parse_sweep_axis(const std::string &name); // throws Error(invalid_argument)
Scheme parse_scheme(const std::string &name);

/// One Monte Carlo study: a base scenario, an optional one-parameter sweep
/// and the schemes to compare on identical channel draws.
struct ExperimentSpec
{
    SystemConfig base;
    SweepAxis sweep_axis = SweepAxis::none;
    std::vector<double> sweep_values;
    std::vector<Scheme> schemes{Scheme::pdd, Scheme::so, Scheme::ia_like};
    int trials = 100;
    std::string output_dir = "results";
    PddOptions pdd;
    bool dump_channels = false;

    // Sweep points; a single 0 when the axis is none.
    std::vector<double> points() const;

    // The base scenario with the sweep parameter applied.
    SystemConfig config_at(double sweep_value) const;

    std::vector<std::string> violations() const;
    void validate() const;

    // Unknown keys and ill-typed values are collected and reported together.
    static ExperimentSpec from_json(const nlohmann::json &doc);
    static ExperimentSpec load(const std::filesystem::path &path);
    nlohmann::json to_json() const;
};

struct TrialResult
{
    Scheme scheme = Scheme::so;
    double sweep_value = 0.0;
    int trial_index = 0;
    double rate_bits = 0.0;
    double wall_ms = 0.0;
    bool converged = true;
    int outer_iters = 0;
    bool feasible = true; // exactly L beams, S S^H = I, unit-modulus phases
    std::vector<TraceRow> trace;
};

struct TrialError
{
    Scheme scheme = Scheme::so;
    double sweep_value = 0.0;
    int trial_index = 0;
    std::string message;
};

struct SummaryRow
{
    Scheme scheme = Scheme::so;
    double sweep_value = 0.0;
    double mean_rate = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    int n = 0;
};

struct GateResult
{
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ExperimentResults
{
    ExperimentSpec spec;
    std::vector<TrialResult> trials; // sweep point, then trial, then scheme order of the spec
    std::vector<TrialError> errors;
    std::vector<nlohmann::json> channel_dumps;

    std::vector<SummaryRow> summary() const;

    // Feasibility of every output and the scheme ordering PDD >= SO >= IA-like
    // of the means at every sweep point (for the schemes present).
    std::vector<GateResult> gates() const;
};

// Mean and normal-approximation 95% interval. Values are sorted before
// summation so the result does not depend on their order.
SummaryRow summarize(std::vector<double> values);

// Worker count: BEAMSPACE_THREADS when set (>= 1), else the hardware count,
// never more than `max_tasks`.
int worker_count(int max_tasks);

// Runs every (sweep point, trial) task on a worker pool; `threads` <= 0 picks
// worker_count().
ExperimentResults run_experiment(const ExperimentSpec &spec, int threads = 0);

/// Writes trials.csv, summary.csv, timing.csv, errors.csv, traces/ and
/// manifest.json (plus channels.jsonl when requested) under `dir`.
///
/// Everything except timing.csv is a pure function of the spec.
void emit_results(const ExperimentResults &results, const std::filesystem::path &dir);

// "%.9g" formatting used for every float in the outputs.
std::string format_real(double value);

} // namespace beamspace
