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

#include "beamspace/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>
#include <type_traits>

#include "beamspace/instance.hpp"
#include "beamspace/sequential.hpp"

namespace beamspace
{

using nlohmann::json;

std::string library_version()
{
    return BEAMSPACE_VERSION;
}

std::string to_string(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::none:
        return "none";
    case SweepAxis::power_dbm:
        return "power_dbm";
    case SweepAxis::ut_antennas:
        return "ut_antennas";
    case SweepAxis::rf_chains:
        return "rf_chains";
    }
    return "none";
}

std::string to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::pdd:
        return "pdd";
    case Scheme::so:
        return "so";
    case Scheme::ia_like:
        return "ia_like";
    case Scheme::exhaustive:
        return "exhaustive";
    }
    return "so";
}

SweepAxis parse_sweep_axis(const std::string &name)
{
    for (auto axis : {SweepAxis::none, SweepAxis::power_dbm, SweepAxis::ut_antennas, SweepAxis::rf_chains})
        if (to_string(axis) == name)
            return axis;
    throw Error(ErrorCode::invalid_argument,
                "unknown sweep_axis '" + name + "' (expected none, power_dbm, ut_antennas or rf_chains)");
}

Scheme parse_scheme(const std::string &name)
{
    for (auto s : {Scheme::pdd, Scheme::so, Scheme::ia_like, Scheme::exhaustive})
        if (to_string(s) == name)
            return s;
    throw Error(ErrorCode::invalid_argument, "unknown scheme '" + name + "' (expected pdd, so, ia_like or exhaustive)");
}

std::string to_string(PddInit init)
{
    return init == PddInit::uniform ? "uniform" : "sequential";
}

std::vector<double> ExperimentSpec::points() const
{
    if (sweep_axis == SweepAxis::none)
        return {0.0};
    return sweep_values;
}

SystemConfig ExperimentSpec::config_at(double value) const
{
    SystemConfig cfg = base;
    const auto k = static_cast<std::size_t>(std::max(cfg.num_users, 0));
    switch (sweep_axis)
    {
    case SweepAxis::none:
        break;
    case SweepAxis::power_dbm:
        cfg.max_power_dbm.assign(k, value);
        break;
    case SweepAxis::ut_antennas:
        cfg.ut_antennas.assign(k, static_cast<int>(std::lround(value)));
        break;
    case SweepAxis::rf_chains:
        cfg.rf_chains = static_cast<int>(std::lround(value));
        break;
    }
    return cfg;
}

std::vector<std::string> ExperimentSpec::violations() const
{
    std::vector<std::string> out;
    for (const auto &v : base.violations())
        out.push_back("base: " + v);
    if (trials < 1)
        out.push_back("trials must be >= 1");
    if (output_dir.empty())
        out.push_back("output_dir must not be empty");
    if (schemes.empty())
        out.push_back("schemes must list at least one scheme");
    if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size())
        out.push_back("schemes must not repeat");
    try
    {
        pdd.validate();
    }
    catch (const Error &e)
    {
        out.push_back(std::string("pdd: ") + e.what());
    }

    if (sweep_axis == SweepAxis::none && !sweep_values.empty())
        out.push_back("sweep_values must be empty when sweep_axis is none");
    if (sweep_axis != SweepAxis::none && sweep_values.empty())
        out.push_back("sweep_values must not be empty when sweep_axis is " + to_string(sweep_axis));
    for (double v : sweep_values)
    {
        if (!std::isfinite(v))
        {
            out.push_back("sweep_values must be finite");
            continue;
        }
        const bool integral_axis = sweep_axis == SweepAxis::ut_antennas || sweep_axis == SweepAxis::rf_chains;
        if (integral_axis && v != std::round(v))
        {
            out.push_back("sweep value " + format_real(v) + " must be an integer for " + to_string(sweep_axis));
            continue;
        }
        if (sweep_axis == SweepAxis::none || !base.violations().empty())
            continue;
        const auto cfg = config_at(v);
        for (const auto &msg : cfg.violations())
            out.push_back("sweep value " + format_real(v) + ": " + msg);
    }

    if (std::find(schemes.begin(), schemes.end(), Scheme::exhaustive) != schemes.end() && base.violations().empty())
    {
        for (double v : points())
        {
            const auto cfg = config_at(v);
            if (subset_count(cfg.bs_antennas, cfg.rf_chains) > max_exhaustive_subsets)
                out.push_back("exhaustive: C(" + std::to_string(cfg.bs_antennas) + ", " +
                              std::to_string(cfg.rf_chains) + ") exceeds the enumeration cap; use so instead");
        }
    }
    return out;
}

void ExperimentSpec::validate() const
{
    const auto v = violations();
    if (v.empty())
        return;
    std::string msg = "invalid experiment spec:";
    for (const auto &line : v)
        msg += "\n  - " + line;
    throw Error(ErrorCode::invalid_argument, msg);
}

namespace
{

// Collects every problem found while reading a JSON document.
class Reader
{
public:
    explicit Reader(std::vector<std::string> &errors) : errors_(errors) {}

    void reject_unknown(const json &obj, const std::string &where, std::initializer_list<const char *> known)
    {
        for (auto it = obj.begin(); it != obj.end(); ++it)
        {
            const bool ok = std::any_of(known.begin(), known.end(), [&](const char *k) { return it.key() == k; });
            if (!ok)
                errors_.push_back(where + ": unknown key '" + it.key() + "'");
        }
    }

    void integer(const json &obj, const std::string &where, const char *key, int &out)
    {
        if (!obj.contains(key))
            return;
        const auto &v = obj.at(key);
        if (!v.is_number_integer() || v.get<long long>() < std::numeric_limits<int>::min() ||
            v.get<long long>() > std::numeric_limits<int>::max())
            errors_.push_back(where + "." + key + " must be an integer");
        else
            out = v.get<int>();
    }

    void seed(const json &obj, const std::string &where, const char *key, std::uint64_t &out)
    {
        if (!obj.contains(key))
            return;
        const auto &v = obj.at(key);
        if (v.is_number_unsigned())
            out = v.get<std::uint64_t>();
        else if (v.is_number_integer() && v.get<long long>() >= 0)
            out = static_cast<std::uint64_t>(v.get<long long>());
        else
            errors_.push_back(where + "." + key + " must be a non-negative integer");
    }

    void real(const json &obj, const std::string &where, const char *key, double &out)
    {
        if (!obj.contains(key))
            return;
        const auto &v = obj.at(key);
        if (!v.is_number())
            errors_.push_back(where + "." + key + " must be a number");
        else
            out = v.get<double>();
    }

    void boolean(const json &obj, const std::string &where, const char *key, bool &out)
    {
        if (!obj.contains(key))
            return;
        const auto &v = obj.at(key);
        if (!v.is_boolean())
            errors_.push_back(where + "." + key + " must be true or false");
        else
            out = v.get<bool>();
    }

    void text(const json &obj, const std::string &where, const char *key, std::string &out)
    {
        if (!obj.contains(key))
            return;
        const auto &v = obj.at(key);
        if (!v.is_string())
            errors_.push_back(where + "." + key + " must be a string");
        else
            out = v.get<std::string>();
    }

    // A scalar broadcast to every user, or one entry per user.
    template <class T>
    void per_user(const json &obj, const std::string &where, const char *key, int users, std::vector<T> &out)
    {
        if (!obj.contains(key))
        {
            if (users >= 0 && out.size() != static_cast<std::size_t>(users) && !out.empty())
                out.assign(static_cast<std::size_t>(users), out.front());
            return;
        }
        const auto &v = obj.at(key);
        auto good = [](const json &x) {
            if constexpr (std::is_integral_v<T>)
                return x.is_number_integer();
            else
                return x.is_number();
        };
        if (good(v))
        {
            out.assign(static_cast<std::size_t>(std::max(users, 0)), v.get<T>());
            return;
        }
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), good))
        {
            errors_.push_back(where + "." + key + " must be a number or a list of numbers" +
                              (std::is_integral_v<T> ? " (integers)" : ""));
            return;
        }
        out.clear();
        for (const auto &x : v)
            out.push_back(x.get<T>());
    }

    std::vector<std::string> &errors() { return errors_; }

private:
    std::vector<std::string> &errors_;
};

SystemConfig read_system(const json &obj, Reader &r)
{
    SystemConfig cfg;
    if (!obj.is_object())
    {
        r.errors().push_back("base must be an object");
        return cfg;
    }
    r.reject_unknown(obj, "base",
                     {"bs_antennas", "rf_chains", "num_users", "ut_antennas", "num_paths", "max_power_dbm",
                      "noise_power_dbm", "carrier_ghz", "cell_radius_m", "seed"});
    r.integer(obj, "base", "bs_antennas", cfg.bs_antennas);
    r.integer(obj, "base", "rf_chains", cfg.rf_chains);
    r.integer(obj, "base", "num_users", cfg.num_users);
    r.per_user(obj, "base", "ut_antennas", cfg.num_users, cfg.ut_antennas);
    r.per_user(obj, "base", "num_paths", cfg.num_users, cfg.num_paths);
    r.per_user(obj, "base", "max_power_dbm", cfg.num_users, cfg.max_power_dbm);
    r.real(obj, "base", "noise_power_dbm", cfg.noise_power_dbm);
    r.real(obj, "base", "carrier_ghz", cfg.carrier_ghz);
    r.real(obj, "base", "cell_radius_m", cfg.cell_radius_m);
    r.seed(obj, "base", "seed", cfg.seed);
    return cfg;
}

PddOptions read_pdd(const json &obj, Reader &r)
{
    PddOptions o;
    if (!obj.is_object())
    {
        r.errors().push_back("pdd must be an object");
        return o;
    }
    r.reject_unknown(obj, "pdd",
                     {"init", "max_outer", "max_inner", "inner_tol", "rho0", "chi", "threshold0",
                      "violation_target", "rate_tol", "mm_max_iter", "mm_tol"});
    std::string init = to_string(o.init);
    r.text(obj, "pdd", "init", init);
    if (init == "sequential")
        o.init = PddInit::sequential;
    else if (init == "uniform")
        o.init = PddInit::uniform;
    else
        r.errors().push_back("pdd.init must be 'sequential' or 'uniform'");
    r.integer(obj, "pdd", "max_outer", o.max_outer);
    r.integer(obj, "pdd", "max_inner", o.max_inner);
    r.real(obj, "pdd", "inner_tol", o.inner_tol);
    r.real(obj, "pdd", "rho0", o.rho0);
    r.real(obj, "pdd", "chi", o.chi);
    r.real(obj, "pdd", "threshold0", o.threshold0);
    r.real(obj, "pdd", "violation_target", o.violation_target);
    r.real(obj, "pdd", "rate_tol", o.rate_tol);
    r.integer(obj, "pdd", "mm_max_iter", o.mm_max_iter);
    r.real(obj, "pdd", "mm_tol", o.mm_tol);
    return o;
}

} // namespace

ExperimentSpec ExperimentSpec::from_json(const json &doc)
{
    std::vector<std::string> errors;
    Reader r(errors);
    ExperimentSpec spec;
    if (!doc.is_object())
        throw Error(ErrorCode::invalid_argument, "invalid experiment spec:\n  - top level must be an object");

    r.reject_unknown(doc, "spec",
                     {"base", "sweep_axis", "sweep_values", "schemes", "trials", "output_dir", "pdd",
                      "dump_channels"});
    if (doc.contains("base"))
        spec.base = read_system(doc.at("base"), r);
    if (doc.contains("pdd"))
        spec.pdd = read_pdd(doc.at("pdd"), r);

    std::string axis = "none";
    r.text(doc, "spec", "sweep_axis", axis);
    try
    {
        spec.sweep_axis = parse_sweep_axis(axis);
    }
    catch (const Error &e)
    {
        errors.push_back(e.what());
    }

    if (doc.contains("sweep_values"))
    {
        const auto &v = doc.at("sweep_values");
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_number(); }))
            errors.push_back("spec.sweep_values must be a list of numbers");
        else
            for (const auto &x : v)
                spec.sweep_values.push_back(x.get<double>());
    }

    if (doc.contains("schemes"))
    {
        const auto &v = doc.at("schemes");
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_string(); }))
            errors.push_back("spec.schemes must be a list of scheme names");
        else
        {
            spec.schemes.clear();
            for (const auto &x : v)
            {
                try
                {
                    spec.schemes.push_back(parse_scheme(x.get<std::string>()));
                }
                catch (const Error &e)
                {
                    errors.push_back(e.what());
                }
            }
        }
    }

    r.integer(doc, "spec", "trials", spec.trials);
    r.text(doc, "spec", "output_dir", spec.output_dir);
    r.boolean(doc, "spec", "dump_channels", spec.dump_channels);

    if (errors.empty())
        errors = spec.violations();
    else
        for (const auto &v : spec.violations())
            if (std::find(errors.begin(), errors.end(), v) == errors.end())
                errors.push_back(v);
    if (!errors.empty())
    {
        std::string msg = "invalid experiment spec:";
        for (const auto &line : errors)
            msg += "\n  - " + line;
        throw Error(ErrorCode::invalid_argument, msg);
    }
    return spec;
}

ExperimentSpec ExperimentSpec::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io, "cannot open config file '" + path.string() + "'");
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error &e)
    {
        throw Error(ErrorCode::invalid_argument, "'" + path.string() + "' is not valid JSON: " + e.what());
    }
    return from_json(doc);
}

json ExperimentSpec::to_json() const
{
    json b = {{"bs_antennas", base.bs_antennas},
              {"rf_chains", base.rf_chains},
              {"num_users", base.num_users},
              {"ut_antennas", base.ut_antennas},
              {"num_paths", base.num_paths},
              {"max_power_dbm", base.max_power_dbm},
              {"noise_power_dbm", base.noise_power_dbm},
              {"carrier_ghz", base.carrier_ghz},
              {"cell_radius_m", base.cell_radius_m},
              {"seed", base.seed}};
    json p = {{"init", to_string(pdd.init)},
              {"max_outer", pdd.max_outer},
              {"max_inner", pdd.max_inner},
              {"inner_tol", pdd.inner_tol},
              {"rho0", pdd.rho0},
              {"chi", pdd.chi},
              {"threshold0", pdd.threshold0},
              {"violation_target", pdd.violation_target},
              {"rate_tol", pdd.rate_tol},
              {"mm_max_iter", pdd.mm_max_iter},
              {"mm_tol", pdd.mm_tol}};
    json names = json::array();
    for (auto s : schemes)
        names.push_back(to_string(s));
    return {{"base", b},
            {"sweep_axis", to_string(sweep_axis)},
            {"sweep_values", sweep_values},
            {"schemes", names},
            {"trials", trials},
            {"output_dir", output_dir},
            {"pdd", p},
            {"dump_channels", dump_channels}};
}

SummaryRow summarize(std::vector<double> values)
{
    SummaryRow row;
    row.n = static_cast<int>(values.size());
    if (values.empty())
    {
        row.mean_rate = row.ci95_low = row.ci95_high = std::numeric_limits<double>::quiet_NaN();
        return row;
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / row.n;
    double half = 0.0;
    if (row.n > 1)
    {
        double ss = 0.0;
        for (double v : values)
            ss += (v - mean) * (v - mean);
        constexpr double z95 = 1.959963984540054;
        half = z95 * std::sqrt(ss / (row.n - 1) / row.n);
    }
    row.mean_rate = mean;
    row.ci95_low = mean - half;
    row.ci95_high = mean + half;
    return row;
}

std::vector<SummaryRow> ExperimentResults::summary() const
{
    std::vector<SummaryRow> rows;
    for (double point : spec.points())
    {
        for (auto scheme : spec.schemes)
        {
            std::vector<double> rates;
            for (const auto &t : trials)
                if (t.scheme == scheme && t.sweep_value == point)
                    rates.push_back(t.rate_bits);
            if (rates.empty())
                continue;
            auto row = summarize(std::move(rates));
            row.scheme = scheme;
            row.sweep_value = point;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<GateResult> ExperimentResults::gates() const
{
    std::vector<GateResult> out;

    GateResult errs{"no_errors", errors.empty(), ""};
    errs.detail = std::to_string(errors.size()) + " failed scheme runs";
    out.push_back(errs);

    GateResult feas{"feasibility", true, ""};
    int bad = 0;
    for (const auto &t : trials)
        bad += t.feasible ? 0 : 1;
    feas.passed = bad == 0;
    feas.detail = std::to_string(bad) + " of " + std::to_string(trials.size()) + " outputs infeasible";
    out.push_back(feas);

    const std::vector<Scheme> chain{Scheme::pdd, Scheme::so, Scheme::ia_like};
    std::vector<Scheme> present;
    for (auto s : chain)
        if (std::find(spec.schemes.begin(), spec.schemes.end(), s) != spec.schemes.end())
            present.push_back(s);
    if (present.size() >= 2)
    {
        GateResult order{"ordering", true, ""};
        const auto rows = summary();
        auto mean_of = [&](Scheme s, double point) {
            for (const auto &r : rows)
                if (r.scheme == s && r.sweep_value == point)
                    return r.mean_rate;
            return std::numeric_limits<double>::quiet_NaN();
        };
        std::ostringstream detail;
        for (double point : spec.points())
        {
            for (std::size_t i = 0; i + 1 < present.size(); ++i)
            {
                const double hi = mean_of(present[i], point);
                const double lo = mean_of(present[i + 1], point);
                if (!(hi >= lo))
                {
                    order.passed = false;
                    detail << to_string(present[i]) << " < " << to_string(present[i + 1]) << " at "
                           << format_real(point) << " (" << format_real(hi) << " vs " << format_real(lo) << "); ";
                }
            }
        }
        order.detail = order.passed ? "mean rates ordered at every sweep point" : detail.str();
        out.push_back(order);
    }
    return out;
}

int worker_count(int max_tasks)
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1)
        n = 1;
    if (const char *env = std::getenv("BEAMSPACE_THREADS"))
    {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            n = static_cast<int>(std::min<long>(v, 1024));
    }
    return std::max(1, std::min(n, std::max(max_tasks, 1)));
}

namespace
{

struct TaskOutput
{
    std::vector<TrialResult> results;
    std::vector<TrialError> errors;
    json channels;
};

Solution solve(Scheme scheme, const PddProblem &problem, const ExperimentSpec &spec, std::uint64_t seed, int trial)
{
    switch (scheme)
    {
    case Scheme::pdd: {
        RngStream rng(seed, static_cast<std::uint64_t>(trial), StreamPurpose::pdd_init);
        return run_pdd(problem, spec.pdd, rng);
    }
    case Scheme::so:
        return run_so(problem);
    case Scheme::ia_like: {
        RngStream rng(seed, static_cast<std::uint64_t>(trial), StreamPurpose::ia_phases);
        return baseline_ia_like(problem, rng);
    }
    case Scheme::exhaustive:
        return run_eigen_exhaustive(problem);
    }
    throw Error(ErrorCode::invalid_argument, "unknown scheme");
}

TaskOutput run_task(const ExperimentSpec &spec, double point, int trial)
{
    TaskOutput out;
    const auto cfg = spec.config_at(point);
    Instance inst;
    try
    {
        inst = draw_instance(cfg, static_cast<std::uint64_t>(trial));
    }
    catch (const std::exception &e)
    {
        for (auto s : spec.schemes)
            out.errors.push_back({s, point, trial, std::string("channel draw: ") + e.what()});
        return out;
    }
    if (spec.dump_channels)
    {
        out.channels = channels_to_json(static_cast<std::uint64_t>(trial), inst.channels, inst.geometry);
        out.channels["sweep_value"] = point;
    }

    for (auto scheme : spec.schemes)
    {
        try
        {
            const auto t0 = std::chrono::steady_clock::now();
            auto sol = solve(scheme, inst.problem, spec, cfg.seed, trial);
            const auto t1 = std::chrono::steady_clock::now();
            TrialResult r;
            r.scheme = scheme;
            r.sweep_value = point;
            r.trial_index = trial;
            r.rate_bits = sol.rate_bits;
            r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            r.converged = sol.converged;
            r.outer_iters = sol.outer_iters;
            r.feasible = sol.selection.feasible(cfg.rf_chains) && sol.phases.max_modulus_error() <= 1e-12 &&
                         std::isfinite(sol.rate_bits) && sol.rate_bits >= 0.0;
            r.trace = std::move(sol.trace);
            out.results.push_back(std::move(r));
        }
        catch (const std::exception &e)
        {
            out.errors.push_back({scheme, point, trial, e.what()});
        }
    }
    return out;
}

} // namespace

ExperimentResults run_experiment(const ExperimentSpec &spec, int threads)
{
    spec.validate();
    const auto points = spec.points();
    const std::size_t tasks = points.size() * static_cast<std::size_t>(spec.trials);
    std::vector<TaskOutput> outputs(tasks);

    const int workers = threads > 0 ? std::min<int>(threads, static_cast<int>(std::max<std::size_t>(tasks, 1)))
                                    : worker_count(static_cast<int>(tasks));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < tasks; i = next++)
        {
            const auto point = points[i / static_cast<std::size_t>(spec.trials)];
            const auto trial = static_cast<int>(i % static_cast<std::size_t>(spec.trials));
            outputs[i] = run_task(spec, point, trial);
        }
    };
    if (workers <= 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
    }

    ExperimentResults res;
    res.spec = spec;
    for (auto &o : outputs)
    {
        for (auto &r : o.results)
            res.trials.push_back(std::move(r));
        for (auto &e : o.errors)
            res.errors.push_back(std::move(e));
        if (!o.channels.is_null())
            res.channel_dumps.push_back(std::move(o.channels));
    }
    return res;
}

std::string format_real(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

namespace
{

std::ofstream open_out(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    return out;
}

void close_out(std::ofstream &out, const std::filesystem::path &path)
{
    out.flush();
    if (!out)
        throw Error(ErrorCode::io, "write to '" + path.string() + "' failed");
}

std::string csv_quote(const std::string &s)
{
    std::string q = "\"";
    for (char c : s)
    {
        if (c == '"')
            q += "\"\"";
        else if (c == '\n' || c == '\r')
            q += ' ';
        else
            q += c;
    }
    return q + "\"";
}

std::string trace_name(std::size_t point_index, int trial)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "pdd_p%02zu_t%04d.csv", point_index, trial);
    return buf;
}

} // namespace

void emit_results(const ExperimentResults &results, const std::filesystem::path &dir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir / "traces", ec);
    if (ec)
        throw Error(ErrorCode::io, "cannot create '" + (dir / "traces").string() + "': " + ec.message());

    // Stale traces from an earlier run with more trials would be misleading.
    for (const auto &entry : fs::directory_iterator(dir / "traces", ec))
    {
        const auto name = entry.path().filename().string();
        if (name.rfind("pdd_", 0) == 0 && entry.path().extension() == ".csv")
            fs::remove(entry.path(), ec);
    }

    const auto points = results.spec.points();
    auto point_index = [&](double v) {
        return static_cast<std::size_t>(std::find(points.begin(), points.end(), v) - points.begin());
    };

    {
        const auto path = dir / "trials.csv";
        auto out = open_out(path);
        out << "scheme,sweep_value,trial,rate_bits,converged,outer_iters,feasible\n";
        for (const auto &t : results.trials)
            out << to_string(t.scheme) << ',' << format_real(t.sweep_value) << ',' << t.trial_index << ','
                << format_real(t.rate_bits) << ',' << (t.converged ? 1 : 0) << ',' << t.outer_iters << ','
                << (t.feasible ? 1 : 0) << '\n';
        close_out(out, path);
    }
    {
        const auto path = dir / "timing.csv";
        auto out = open_out(path);
        out << "scheme,sweep_value,trial,wall_ms\n";
        for (const auto &t : results.trials)
            out << to_string(t.scheme) << ',' << format_real(t.sweep_value) << ',' << t.trial_index << ','
                << format_real(t.wall_ms) << '\n';
        close_out(out, path);
    }
    {
        const auto path = dir / "summary.csv";
        auto out = open_out(path);
        out << "scheme,sweep_value,mean_rate,ci95_low,ci95_high,n\n";
        for (const auto &r : results.summary())
            out << to_string(r.scheme) << ',' << format_real(r.sweep_value) << ',' << format_real(r.mean_rate)
                << ',' << format_real(r.ci95_low) << ',' << format_real(r.ci95_high) << ',' << r.n << '\n';
        close_out(out, path);
    }
    {
        const auto path = dir / "errors.csv";
        auto out = open_out(path);
        out << "scheme,sweep_value,trial,message\n";
        for (const auto &e : results.errors)
            out << to_string(e.scheme) << ',' << format_real(e.sweep_value) << ',' << e.trial_index << ','
                << csv_quote(e.message) << '\n';
        close_out(out, path);
    }

    json trace_files = json::array();
    for (const auto &t : results.trials)
    {
        if (t.scheme != Scheme::pdd)
            continue;
        const auto name = trace_name(point_index(t.sweep_value), t.trial_index);
        const auto path = dir / "traces" / name;
        auto out = open_out(path);
        out << "outer_iter,rate_bits,violation_h,rho,inner_iters\n";
        for (const auto &row : t.trace)
            out << row.outer_iter << ',' << format_real(row.rate_bits) << ',' << format_real(row.violation) << ','
                << format_real(row.rho) << ',' << row.inner_iters << '\n';
        close_out(out, path);
        trace_files.push_back("traces/" + name);
    }

    if (results.spec.dump_channels)
    {
        const auto path = dir / "channels.jsonl";
        auto out = open_out(path);
        for (const auto &rec : results.channel_dumps)
            out << rec.dump() << '\n';
        close_out(out, path);
    }

    json files = {"trials.csv", "summary.csv", "timing.csv", "errors.csv"};
    if (results.spec.dump_channels)
        files.push_back("channels.jsonl");
    json manifest = {{"library", "beamspace"},
                     {"version", library_version()},
                     {"spec", results.spec.to_json()},
                     {"sweep_points", points},
                     {"trace_index", "traces/pdd_p<sweep point index>_t<trial>.csv"},
                     {"files", files},
                     {"traces", trace_files},
                     {"trial_rows", results.trials.size()},
                     {"error_rows", results.errors.size()}};
    const auto path = dir / "manifest.json";
    auto out = open_out(path);
    out << manifest.dump(2) << '\n';
    close_out(out, path);
}

} // namespace beamspace
