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

#include "beamspace/beamspace.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "beamspace/experiment.hpp"
#include "beamspace/instance.hpp"
#include "beamspace/sequential.hpp"

struct bs_experiment
{
    beamspace::ExperimentSpec spec;
};

struct bs_results
{
    beamspace::ExperimentResults results;
    std::vector<beamspace::SummaryRow> summary;
    std::vector<std::string> error_lines;
    std::string gate_report;
};

struct bs_problem
{
    beamspace::Instance instance;
    std::uint64_t trial = 0;
};

struct bs_solution
{
    beamspace::Solution solution;
};

namespace
{

thread_local std::string last_error;

bs_status status_of(beamspace::ErrorCode code)
{
    using beamspace::ErrorCode;
    switch (code)
    {
    case ErrorCode::invalid_argument:
        return BS_ERR_INVALID_ARGUMENT;
    case ErrorCode::domain:
        return BS_ERR_DOMAIN;
    case ErrorCode::numerical:
        return BS_ERR_NUMERICAL;
    case ErrorCode::limit:
        return BS_ERR_LIMIT;
    case ErrorCode::io:
        return BS_ERR_IO;
    }
    return BS_ERR_INTERNAL;
}

bs_status fail(bs_status status, std::string message)
{
    last_error = std::move(message);
    return status;
}

bs_status ok()
{
    last_error.clear();
    return BS_OK;
}

// Runs `body` and turns every exception into a status code.
template <class F>
bs_status guarded(F &&body)
{
    try
    {
        body();
        return ok();
    }
    catch (const beamspace::Error &e)
    {
        return fail(status_of(e.code()), e.what());
    }
    catch (const nlohmann::json::exception &e)
    {
        return fail(BS_ERR_INVALID_ARGUMENT, e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(BS_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(BS_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(BS_ERR_INTERNAL, "unknown failure");
    }
}

void copy_name(char (&dst)[16], const std::string &src)
{
    std::memset(dst, 0, sizeof dst);
    std::memcpy(dst, src.data(), std::min(src.size(), sizeof dst - 1));
}

} // namespace

extern "C" {

const char *bs_version(void)
{
    return BEAMSPACE_VERSION;
}

const char *bs_last_error(void)
{
    return last_error.c_str();
}

const char *bs_status_name(bs_status status)
{
    switch (status)
    {
    case BS_OK:
        return "ok";
    case BS_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case BS_ERR_DOMAIN:
        return "domain error";
    case BS_ERR_NUMERICAL:
        return "numerical failure";
    case BS_ERR_LIMIT:
        return "limit exceeded";
    case BS_ERR_IO:
        return "i/o error";
    case BS_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

bs_status bs_experiment_parse(const char *json_text, bs_experiment **out)
{
    if (!json_text || !out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_experiment_parse: null argument");
    *out = nullptr;
    return guarded([&] {
        nlohmann::json doc;
        try
        {
            doc = nlohmann::json::parse(json_text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw beamspace::Error(beamspace::ErrorCode::invalid_argument,
                                   std::string("experiment spec is not valid JSON: ") + e.what());
        }
        auto exp = new bs_experiment{beamspace::ExperimentSpec::from_json(doc)};
        *out = exp;
    });
}

bs_status bs_experiment_load(const char *path, bs_experiment **out)
{
    if (!path || !out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_experiment_load: null argument");
    *out = nullptr;
    return guarded([&] { *out = new bs_experiment{beamspace::ExperimentSpec::load(path)}; });
}

bs_status bs_experiment_set_trials(bs_experiment *exp, int trials)
{
    if (!exp)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_experiment_set_trials: null handle");
    if (trials < 1)
        return fail(BS_ERR_INVALID_ARGUMENT, "trials must be >= 1");
    exp->spec.trials = trials;
    return ok();
}

bs_status bs_experiment_set_seed(bs_experiment *exp, uint64_t seed)
{
    if (!exp)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_experiment_set_seed: null handle");
    exp->spec.base.seed = seed;
    return ok();
}

bs_status bs_experiment_set_output_dir(bs_experiment *exp, const char *dir)
{
    if (!exp || !dir)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_experiment_set_output_dir: null argument");
    if (*dir == '\0')
        return fail(BS_ERR_INVALID_ARGUMENT, "output directory must not be empty");
    exp->spec.output_dir = dir;
    return ok();
}

const char *bs_experiment_output_dir(const bs_experiment *exp)
{
    return exp ? exp->spec.output_dir.c_str() : "";
}

bs_status bs_experiment_run(const bs_experiment *exp, int threads, bs_results **out)
{
    if (!exp || !out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_experiment_run: null argument");
    *out = nullptr;
    return guarded([&] {
        auto res = new bs_results;
        try
        {
            res->results = beamspace::run_experiment(exp->spec, threads);
            res->summary = res->results.summary();
            for (const auto &e : res->results.errors)
                res->error_lines.push_back(beamspace::to_string(e.scheme) + " sweep=" +
                                           beamspace::format_real(e.sweep_value) +
                                           " trial=" + std::to_string(e.trial_index) + ": " + e.message);
            for (const auto &g : res->results.gates())
                res->gate_report += std::string(g.passed ? "PASS " : "FAIL ") + g.name + ": " + g.detail + "\n";
        }
        catch (...)
        {
            delete res;
            throw;
        }
        *out = res;
    });
}

void bs_experiment_free(bs_experiment *exp)
{
    delete exp;
}

size_t bs_results_trial_count(const bs_results *res)
{
    return res ? res->results.trials.size() : 0;
}

bs_status bs_results_trial(const bs_results *res, size_t index, bs_trial_record *out)
{
    if (!res || !out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_results_trial: null argument");
    if (index >= res->results.trials.size())
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_results_trial: index out of range");
    const auto &t = res->results.trials[index];
    copy_name(out->scheme, beamspace::to_string(t.scheme));
    out->sweep_value = t.sweep_value;
    out->trial = t.trial_index;
    out->rate_bits = t.rate_bits;
    out->wall_ms = t.wall_ms;
    out->converged = t.converged ? 1 : 0;
    out->outer_iters = t.outer_iters;
    out->feasible = t.feasible ? 1 : 0;
    return ok();
}

size_t bs_results_summary_count(const bs_results *res)
{
    return res ? res->summary.size() : 0;
}

bs_status bs_results_summary(const bs_results *res, size_t index, bs_summary_record *out)
{
    if (!res || !out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_results_summary: null argument");
    if (index >= res->summary.size())
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_results_summary: index out of range");
    const auto &r = res->summary[index];
    copy_name(out->scheme, beamspace::to_string(r.scheme));
    out->sweep_value = r.sweep_value;
    out->mean_rate = r.mean_rate;
    out->ci95_low = r.ci95_low;
    out->ci95_high = r.ci95_high;
    out->n = r.n;
    return ok();
}

size_t bs_results_error_count(const bs_results *res)
{
    return res ? res->error_lines.size() : 0;
}

const char *bs_results_error(const bs_results *res, size_t index)
{
    if (!res || index >= res->error_lines.size())
        return "";
    return res->error_lines[index].c_str();
}

bs_status bs_results_write(const bs_results *res, const char *dir)
{
    if (!res || !dir)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_results_write: null argument");
    return guarded([&] { beamspace::emit_results(res->results, dir); });
}

bs_status bs_results_check_gates(const bs_results *res, int *all_passed)
{
    if (!res || !all_passed)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_results_check_gates: null argument");
    return guarded([&] {
        bool ok = true;
        for (const auto &g : res->results.gates())
            ok = ok && g.passed;
        *all_passed = ok ? 1 : 0;
    });
}

const char *bs_results_gate_report(const bs_results *res)
{
    return res ? res->gate_report.c_str() : "";
}

void bs_results_free(bs_results *res)
{
    delete res;
}

bs_status bs_problem_create(const char *config_json, uint64_t trial, bs_problem **out)
{
    if (!config_json || !out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_problem_create: null argument");
    *out = nullptr;
    return guarded([&] {
        nlohmann::json base;
        try
        {
            base = nlohmann::json::parse(config_json);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw beamspace::Error(beamspace::ErrorCode::invalid_argument,
                                   std::string("scenario is not valid JSON: ") + e.what());
        }
        const auto spec = beamspace::ExperimentSpec::from_json({{"base", base}, {"schemes", {"so"}}, {"trials", 1}});
        auto p = new bs_problem;
        try
        {
            p->instance = beamspace::draw_instance(spec.base, trial);
            p->trial = trial;
        }
        catch (...)
        {
            delete p;
            throw;
        }
        *out = p;
    });
}

int bs_problem_num_beams(const bs_problem *problem)
{
    return problem ? problem->instance.problem.num_beams() : 0;
}

int bs_problem_num_users(const bs_problem *problem)
{
    return problem ? problem->instance.problem.num_users() : 0;
}

void bs_problem_free(bs_problem *problem)
{
    delete problem;
}

bs_status bs_problem_solve(const bs_problem *problem, const char *scheme, bs_solution **out)
{
    if (!problem || !scheme || !out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_problem_solve: null argument");
    *out = nullptr;
    return guarded([&] {
        using namespace beamspace;
        const auto &inst = problem->instance;
        const auto kind = parse_scheme(scheme);
        auto sol = new bs_solution;
        try
        {
            switch (kind)
            {
            case Scheme::pdd: {
                RngStream rng(inst.config.seed, problem->trial, StreamPurpose::pdd_init);
                sol->solution = run_pdd(inst.problem, PddOptions{}, rng);
                break;
            }
            case Scheme::so:
                sol->solution = run_so(inst.problem);
                break;
            case Scheme::ia_like: {
                RngStream rng(inst.config.seed, problem->trial, StreamPurpose::ia_phases);
                sol->solution = baseline_ia_like(inst.problem, rng);
                break;
            }
            case Scheme::exhaustive:
                sol->solution = run_eigen_exhaustive(inst.problem);
                break;
            }
        }
        catch (...)
        {
            delete sol;
            throw;
        }
        *out = sol;
    });
}

double bs_solution_rate(const bs_solution *sol)
{
    return sol ? sol->solution.rate_bits : 0.0;
}

int bs_solution_converged(const bs_solution *sol)
{
    return sol && sol->solution.converged ? 1 : 0;
}

int bs_solution_outer_iters(const bs_solution *sol)
{
    return sol ? sol->solution.outer_iters : 0;
}

size_t bs_solution_num_selected(const bs_solution *sol)
{
    return sol ? sol->solution.selection.indices.size() : 0;
}

size_t bs_solution_selected(const bs_solution *sol, int *indices, size_t capacity)
{
    if (!sol || !indices)
        return 0;
    const auto &idx = sol->solution.selection.indices;
    const size_t n = std::min(capacity, idx.size());
    std::copy_n(idx.begin(), n, indices);
    return n;
}

size_t bs_solution_num_phases(const bs_solution *sol)
{
    return sol ? static_cast<size_t>(sol->solution.phases.total_size()) : 0;
}

size_t bs_solution_phases(const bs_solution *sol, double *re, double *im, size_t capacity)
{
    if (!sol || !re || !im)
        return 0;
    const auto &v = sol->solution.phases.vector();
    const size_t n = std::min(capacity, static_cast<size_t>(v.size()));
    for (size_t i = 0; i < n; ++i)
    {
        re[i] = v(static_cast<Eigen::Index>(i)).real();
        im[i] = v(static_cast<Eigen::Index>(i)).imag();
    }
    return n;
}

size_t bs_solution_trace_length(const bs_solution *sol)
{
    return sol ? sol->solution.trace.size() : 0;
}

bs_status bs_solution_trace_row(const bs_solution *sol, size_t index, int *outer_iter, double *rate_bits,
                                double *violation, double *rho, int *inner_iters)
{
    if (!sol)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_solution_trace_row: null handle");
    if (index >= sol->solution.trace.size())
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_solution_trace_row: index out of range");
    const auto &row = sol->solution.trace[index];
    if (outer_iter)
        *outer_iter = row.outer_iter;
    if (rate_bits)
        *rate_bits = row.rate_bits;
    if (violation)
        *violation = row.violation;
    if (rho)
        *rho = row.rho;
    if (inner_iters)
        *inner_iters = row.inner_iters;
    return ok();
}

void bs_solution_free(bs_solution *sol)
{
    delete sol;
}

bs_status bs_path_loss(double carrier_ghz, double distance_km, double *gain)
{
    if (!gain)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_path_loss: null output");
    return guarded([&] { *gain = beamspace::path_loss(carrier_ghz, distance_km); });
}

bs_status bs_oracle_compare(int n, int l, int k, uint64_t seed, int trials, bs_oracle_report *out)
{
    if (!out)
        return fail(BS_ERR_INVALID_ARGUMENT, "bs_oracle_compare: null output");
    return guarded([&] {
        const auto rep = beamspace::compare_greedy_exhaustive(n, l, k, seed, trials);
        out->trials = rep.trials;
        out->mean_greedy = rep.mean_greedy;
        out->mean_exhaustive = rep.mean_exhaustive;
        out->max_gap_bits = rep.max_gap_bits;
        out->min_ratio = rep.min_ratio;
        out->fraction_within_95 = rep.fraction_within_95;
        out->exhaustive_dominates = rep.exhaustive_dominates ? 1 : 0;
    });
}

} // extern "C"
