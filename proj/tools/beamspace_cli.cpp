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

// Command-line front end. Talks to the library only through the C API.
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "beamspace/beamspace.h"

namespace
{

int report_failure(const char *what, bs_status status)
{
    std::fprintf(stderr, "beamspace: %s failed (%s): %s\n", what, bs_status_name(status), bs_last_error());
    return 2;
}

struct SimulateArgs
{
    std::string config;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool assert_gates = false;
};

int simulate(const SimulateArgs &args)
{
    bs_experiment *exp = nullptr;
    if (auto st = bs_experiment_load(args.config.c_str(), &exp); st != BS_OK)
        return report_failure("loading the config", st);

    bs_status st = BS_OK;
    if (args.trials)
        st = bs_experiment_set_trials(exp, *args.trials);
    if (st == BS_OK && args.seed)
        st = bs_experiment_set_seed(exp, *args.seed);
    if (st == BS_OK && args.out)
        st = bs_experiment_set_output_dir(exp, args.out->c_str());
    if (st != BS_OK)
    {
        bs_experiment_free(exp);
        return report_failure("applying overrides", st);
    }

    bs_results *res = nullptr;
    st = bs_experiment_run(exp, 0, &res);
    const std::string out_dir = bs_experiment_output_dir(exp);
    bs_experiment_free(exp);
    if (st != BS_OK)
        return report_failure("running the experiment", st);

    if (st = bs_results_write(res, out_dir.c_str()); st != BS_OK)
    {
        bs_results_free(res);
        return report_failure("writing results", st);
    }

    std::printf("%-11s %12s %12s %12s %12s %6s\n", "scheme", "sweep_value", "mean_rate", "ci95_low", "ci95_high",
                "n");
    for (size_t i = 0; i < bs_results_summary_count(res); ++i)
    {
        bs_summary_record r;
        if (bs_results_summary(res, i, &r) == BS_OK)
            std::printf("%-11s %12.6g %12.6f %12.6f %12.6f %6d\n", r.scheme, r.sweep_value, r.mean_rate, r.ci95_low,
                        r.ci95_high, r.n);
    }

    int exit_code = 0;
    const size_t errors = bs_results_error_count(res);
    for (size_t i = 0; i < errors; ++i)
        std::fprintf(stderr, "error: %s\n", bs_results_error(res, i));
    if (errors > 0)
        exit_code = 1;

    if (args.assert_gates)
    {
        int passed = 0;
        if (bs_results_check_gates(res, &passed) != BS_OK)
            passed = 0;
        std::printf("%s", bs_results_gate_report(res));
        if (!passed)
            exit_code = 1;
    }
    std::printf("results written to %s\n", out_dir.c_str());
    bs_results_free(res);
    return exit_code;
}

struct OracleArgs
{
    int n = 12;
    int l = 4;
    int k = 3;
    std::uint64_t seed = 1;
    int trials = 200;
};

int oracle(const OracleArgs &args)
{
    bs_oracle_report rep;
    if (auto st = bs_oracle_compare(args.n, args.l, args.k, args.seed, args.trials, &rep); st != BS_OK)
        return report_failure("the oracle comparison", st);
    std::printf("N=%d L=%d K=%d seed=%llu trials=%d\n", args.n, args.l, args.k,
                static_cast<unsigned long long>(args.seed), rep.trials);
    std::printf("mean greedy rate      %.6f bits/s/Hz\n", rep.mean_greedy);
    std::printf("mean exhaustive rate  %.6f bits/s/Hz\n", rep.mean_exhaustive);
    std::printf("mean gap              %.6f bits/s/Hz\n", rep.mean_exhaustive - rep.mean_greedy);
    std::printf("max gap               %.6f bits/s/Hz\n", rep.max_gap_bits);
    std::printf("min greedy/exhaustive %.6f\n", rep.min_ratio);
    std::printf("within 95%%            %.1f%% of trials\n", 100.0 * rep.fraction_within_95);
    std::printf("exhaustive >= greedy  %s\n", rep.exhaustive_dominates ? "always" : "NOT always");
    return rep.exhaustive_dominates ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Beam selection and phase-only beamforming simulator for lens-array mmWave uplinks"};
    app.set_version_flag("--version", std::string(bs_version()));
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate_cmd = app.add_subcommand("simulate", "Run a Monte Carlo experiment described by a JSON spec");
    simulate_cmd->add_option("--config", sim.config, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
    simulate_cmd->add_option("--trials", sim.trials, "Override the trial count")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", sim.seed, "Override the base seed");
    simulate_cmd->add_option("--out", sim.out, "Override the output directory");
    simulate_cmd->add_flag("--assert", sim.assert_gates, "Exit nonzero when a feasibility or ordering gate fails");

    OracleArgs orc;
    auto *oracle_cmd = app.add_subcommand("oracle", "Compare greedy and exhaustive beam selection");
    oracle_cmd->add_option("--n", orc.n, "Lens antennas N")->required()->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--l", orc.l, "RF chains L")->required()->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--k", orc.k, "Users K")->required()->check(CLI::PositiveNumber);
    oracle_cmd->add_option("--seed", orc.seed, "Base seed")->required();
    oracle_cmd->add_option("--trials", orc.trials, "Random instances")->capture_default_str()->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (*simulate_cmd)
        return simulate(sim);
    return oracle(orc);
}
