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

#include "beamspace/sequential.hpp"
#include "beamspace/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beamspace
{

CVector eigen_phase(const CMatrix &channel)
{
    const auto nk = channel.cols();
    const CMatrix gram = channel.adjoint() * channel;
    if (gram.cwiseAbs().maxCoeff() == 0.0)
        return CVector::Ones(nk);

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
    if (eig.info() != Eigen::Success)
        throw Error(ErrorCode::numerical, "eigen_phase: eigendecomposition failed");
    CVector v = eig.eigenvectors().col(nk - 1); // eigenvalues ascending

    // Global phase convention: first nonzero entry real positive.
    const double floor = 1e-12 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < nk; ++i)
    {
        if (std::abs(v(i)) > floor)
        {
            v *= std::conj(v(i)) / std::abs(v(i));
            break;
        }
    }

    CVector phi(nk);
    for (Eigen::Index i = 0; i < nk; ++i)
        phi(i) = std::abs(v(i)) > floor ? v(i) / std::abs(v(i)) : cdouble(1.0, 0.0);
    return phi;
}

double channel_gain(const CMatrix &channel, const CVector &phases)
{
    if (channel.cols() != phases.size())
        throw Error(ErrorCode::invalid_argument, "channel_gain: phase vector length differs from UT antennas");
    return (channel * phases).squaredNorm() / static_cast<double>(phases.size());
}

SelectionCandidate greedy_beam_select(const CMatrix &barh, double noise, int rf_chains)
{
    const auto n = static_cast<int>(barh.rows());
    const auto k = barh.cols();
    if (rf_chains < 0 || rf_chains > n)
        throw Error(ErrorCode::invalid_argument, "greedy_beam_select: L must lie in [0, N]");

    // M = I_K + X^H X / sigma^2 for the rows X picked so far. Adding row r
    // multiplies det(M) by 1 + r M^-1 r^H / sigma^2.
    CMatrix m = CMatrix::Identity(k, k);
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    SelectionCandidate out;
    std::vector<int> picked;
    for (int step = 0; step < rf_chains; ++step)
    {
        Eigen::LLT<CMatrix> llt(m);
        int best = -1;
        double best_gain = -1.0;
        for (int i = 0; i < n; ++i)
        {
            if (taken[static_cast<std::size_t>(i)])
                continue;
            const CVector r = barh.row(i).adjoint();
            const double gain = r.dot(llt.solve(r)).real() / noise;
            if (gain > best_gain)
            {
                best_gain = gain;
                best = i;
            }
        }
        taken[static_cast<std::size_t>(best)] = true;
        picked.push_back(best);
        const CVector r = barh.row(best).adjoint();
        m.noalias() += r * r.adjoint() / noise;

        std::vector<int> sorted = picked;
        std::sort(sorted.begin(), sorted.end());
        out.prefix_rates.push_back(sum_rate_selected(sorted, barh, noise));
    }
    std::sort(picked.begin(), picked.end());
    out.indices = picked;
    out.rate_bits = out.prefix_rates.empty() ? 0.0 : out.prefix_rates.back();
    return out;
}

double subset_count(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return std::round(c);
}

SelectionCandidate exhaustive_beam_select(const CMatrix &barh, double noise, int rf_chains)
{
    const auto n = static_cast<int>(barh.rows());
    if (rf_chains < 0 || rf_chains > n)
        throw Error(ErrorCode::invalid_argument, "exhaustive_beam_select: L must lie in [0, N]");
    if (subset_count(n, rf_chains) > max_exhaustive_subsets)
        throw Error(ErrorCode::limit, "exhaustive_beam_select: C(" + std::to_string(n) + ", " +
                                          std::to_string(rf_chains) +
                                          ") subsets exceed the enumeration cap; use greedy selection instead");

    std::vector<int> idx(static_cast<std::size_t>(rf_chains));
    std::iota(idx.begin(), idx.end(), 0);
    SelectionCandidate best;
    best.indices = idx;
    best.rate_bits = sum_rate_selected(idx, barh, noise);

    // Lexicographic successor of an ascending index tuple.
    auto advance = [&]() {
        int i = rf_chains - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - rf_chains + i)
            --i;
        if (i < 0)
            return false;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < rf_chains; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        return true;
    };
    while (advance())
    {
        const double r = sum_rate_selected(idx, barh, noise);
        if (r > best.rate_bits)
        {
            best.rate_bits = r;
            best.indices = idx;
        }
    }
    return best;
}

namespace
{

PhaseProfile eigen_phases(const PddProblem &problem)
{
    PhaseProfile phases(problem.ut_sizes());
    for (int k = 0; k < problem.num_users(); ++k)
        phases.set_segment(k, eigen_phase(problem.beamspace[k]));
    return phases;
}

Solution make_solution(const PddProblem &problem, PhaseProfile phases, std::vector<int> indices)
{
    Solution sol;
    sol.selection = BeamSelection::from_indices(problem.num_beams(), std::move(indices));
    sol.phases = std::move(phases);
    sol.rate_bits = sum_rate_selected(sol.selection.matrix(), problem.effective(sol.phases), problem.noise);
    return sol;
}

} // namespace

Solution run_so(const PddProblem &problem)
{
    problem.validate();
    auto phases = eigen_phases(problem);
    auto pick = greedy_beam_select(problem.effective(phases), problem.noise, problem.rf_chains);
    return make_solution(problem, std::move(phases), std::move(pick.indices));
}

Solution run_eigen_exhaustive(const PddProblem &problem)
{
    problem.validate();
    auto phases = eigen_phases(problem);
    auto pick = exhaustive_beam_select(problem.effective(phases), problem.noise, problem.rf_chains);
    return make_solution(problem, std::move(phases), std::move(pick.indices));
}

std::vector<int> max_magnitude_selection(const CMatrix &barh, int rf_chains)
{
    const auto n = static_cast<int>(barh.rows());
    if (rf_chains < 0 || rf_chains > n)
        throw Error(ErrorCode::invalid_argument, "max_magnitude_selection: L must lie in [0, N]");
    const RVector energy = barh.rowwise().squaredNorm();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (energy(a) != energy(b))
            return energy(a) > energy(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(rf_chains));
    std::sort(order.begin(), order.end());
    return order;
}

Solution baseline_ia_like(const PddProblem &problem, RngStream &rng)
{
    problem.validate();
    auto phases = PhaseProfile::random(problem.ut_sizes(), rng);
    auto indices = max_magnitude_selection(problem.effective(phases), problem.rf_chains);
    return make_solution(problem, std::move(phases), std::move(indices));
}

OracleReport compare_greedy_exhaustive(int bs_antennas, int rf_chains, int num_users, std::uint64_t seed, int trials)
{
    if (trials < 1)
        throw Error(ErrorCode::invalid_argument, "compare_greedy_exhaustive: trials must be >= 1");
    auto cfg = SystemConfig::uniform(bs_antennas, rf_chains, num_users, 4, 4, 10.0);
    cfg.seed = seed;
    cfg.validate();
    if (subset_count(bs_antennas, rf_chains) > max_exhaustive_subsets)
        throw Error(ErrorCode::limit, "compare_greedy_exhaustive: C(" + std::to_string(bs_antennas) + ", " +
                                          std::to_string(rf_chains) + ") exceeds the enumeration cap");
    const auto powers = to_linear(cfg);

    OracleReport rep;
    rep.trials = trials;
    int within = 0;
    for (int t = 0; t < trials; ++t)
    {
        RngStream rng(seed, static_cast<std::uint64_t>(t), StreamPurpose::oracle);
        const auto geometry = sample_geometry(cfg, rng);
        const auto channels = sample_channels(cfg, geometry, rng);
        const auto problem = make_problem(cfg, powers, channels);
        const CMatrix barh = problem.effective(eigen_phases(problem));
        const double g = greedy_beam_select(barh, problem.noise, rf_chains).rate_bits;
        const double e = exhaustive_beam_select(barh, problem.noise, rf_chains).rate_bits;
        rep.mean_greedy += g / trials;
        rep.mean_exhaustive += e / trials;
        rep.max_gap_bits = std::max(rep.max_gap_bits, e - g);
        const double ratio = e > 0.0 ? g / e : 1.0;
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        within += ratio >= 0.95 ? 1 : 0;
        if (e < g)
            rep.exhaustive_dominates = false;
    }
    rep.fraction_within_95 = static_cast<double>(within) / trials;
    return rep;
}

} // namespace beamspace
