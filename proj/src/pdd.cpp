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

#include "beamspace/pdd.hpp"
#include "beamspace/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beamspace
{

std::vector<int> PddProblem::ut_sizes() const
{
    std::vector<int> sizes;
    sizes.reserve(beamspace.size());
    for (const auto &c : beamspace)
        sizes.push_back(static_cast<int>(c.cols()));
    return sizes;
}

CMatrix PddProblem::effective(const PhaseProfile &phases) const
{
    return effective_channels(beamspace, phases, powers).scaled;
}

void PddProblem::validate() const
{
    if (beamspace.empty())
        throw Error(ErrorCode::invalid_argument, "PddProblem: no users");
    if (powers.size() != beamspace.size())
        throw Error(ErrorCode::invalid_argument, "PddProblem: one power per user required");
    for (const auto &c : beamspace)
        if (c.rows() != beamspace.front().rows() || c.cols() < 1)
            throw Error(ErrorCode::invalid_argument, "PddProblem: inconsistent channel dimensions");
    for (double p : powers)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw Error(ErrorCode::invalid_argument, "PddProblem: powers must be finite and non-negative");
    if (!(noise > 0.0))
        throw Error(ErrorCode::domain, "PddProblem: noise power must be positive");
    if (rf_chains < 1 || rf_chains > num_beams())
        throw Error(ErrorCode::invalid_argument, "PddProblem: rf_chains must lie in [1, N]");
}

void PddOptions::validate() const
{
    if (max_outer < 1 || max_inner < 1 || mm_max_iter < 1)
        throw Error(ErrorCode::invalid_argument, "PddOptions: iteration caps must be >= 1");
    if (!(chi > 0.0 && chi < 1.0))
        throw Error(ErrorCode::invalid_argument, "PddOptions: chi must lie in (0, 1)");
    if (!(rho0 > 0.0))
        throw Error(ErrorCode::invalid_argument, "PddOptions: rho0 must be positive");
    if (inner_tol < 0.0 || mm_tol < 0.0 || rate_tol < 0.0 || violation_target < 0.0 || threshold0 < 0.0)
        throw Error(ErrorCode::invalid_argument, "PddOptions: tolerances must be non-negative");
}

PddState initial_state(const PddProblem &problem, const PddOptions &options, const PhaseProfile &phases,
                       const RVector &selection)
{
    problem.validate();
    options.validate();
    const int n = problem.num_beams();
    if (selection.size() != n)
        throw Error(ErrorCode::invalid_argument, "initial_state: selection length differs from beam count");
    if (phases.sizes() != problem.ut_sizes())
        throw Error(ErrorCode::invalid_argument, "initial_state: phase profile does not match UT sizes");
    PddState st;
    st.phases = phases;
    st.s = selection;
    st.s_bar = selection.cwiseMax(0.0).cwiseMin(1.0);
    st.dual_xi = 0.0;
    st.dual_mu = RVector::Zero(n);
    st.dual_lambda = RVector::Zero(n);
    st.rho = options.rho0;
    st.violation_threshold = options.threshold0;
    st.scale_chi = options.chi;
    update_receiver(problem, st);
    update_weight(problem, st);
    return st;
}

PddState initial_state(const PddProblem &problem, const PddOptions &options, const PhaseProfile &phases)
{
    problem.validate();
    const int n = problem.num_beams();
    return initial_state(problem, options, phases, RVector::Constant(n, static_cast<double>(problem.rf_chains) / n));
}

PddState initial_state(const PddProblem &problem, const PddOptions &options, RngStream &rng)
{
    if (options.init == PddInit::uniform)
        return initial_state(problem, options, PhaseProfile::random(problem.ut_sizes(), rng));
    const auto so = run_so(problem);
    return initial_state(problem, options, so.phases, so.selection.mask_vector());
}

double penalty_term(const PddState &st, int rf_chains)
{
    const double sum_res = st.s.sum() - rf_chains + st.rho * st.dual_xi;
    const RVector copy_res = st.s - st.s_bar + st.rho * st.dual_mu;
    const RVector comp_res =
        st.s.cwiseProduct((RVector::Ones(st.s.size()) - st.s_bar)) + st.rho * st.dual_lambda;
    const double f2 = sum_res * sum_res + copy_res.squaredNorm() + comp_res.squaredNorm();
    return f2 / (2.0 * st.rho);
}

double al_objective(const PddProblem &problem, const PddState &st)
{
    const CMatrix barh = problem.effective(st.phases);
    const CMatrix e = mse_matrix(st.receiver, st.s, barh, problem.noise);
    return wmmse_objective(st.weight, e) + penalty_term(st, problem.rf_chains);
}

void update_weight(const PddProblem &problem, PddState &st)
{
    const CMatrix barh = problem.effective(st.phases);
    const CMatrix e = mse_matrix(st.receiver, st.s, barh, problem.noise);
    Eigen::LLT<CMatrix> llt(e);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::numerical, "update_weight: MSE matrix is singular");
    CMatrix w = llt.solve(CMatrix::Identity(e.rows(), e.cols()));
    st.weight = 0.5 * (w + w.adjoint());
}

void update_receiver(const PddProblem &problem, PddState &st)
{
    st.receiver = mmse_receiver(st.s, problem.effective(st.phases), problem.noise);
}

void update_relaxed_selection(PddState &st)
{
    // Minimizes (1 + s^2) x^2 - 2 (s + rho mu + s^2 + s rho lambda) x over x in [0, 1].
    for (Eigen::Index n = 0; n < st.s.size(); ++n)
    {
        const double s = st.s(n);
        const double a = 1.0 + s * s;
        const double b = s + st.rho * st.dual_mu(n) + s * s + s * st.rho * st.dual_lambda(n);
        st.s_bar(n) = std::clamp(b / a, 0.0, 1.0);
    }
}

SelectionQuadratic selection_quadratic(const PddProblem &problem, const PddState &st)
{
    const CMatrix barh = problem.effective(st.phases);
    const auto n = barh.rows();
    const double rho = st.rho;
    const double l = problem.rf_chains;

    // tr(W U^H D H H^H D U) = s^T Re{(U W U^H) o conj(H H^H)} s
    const CMatrix uw = st.receiver * st.weight;
    const CMatrix a = uw * st.receiver.adjoint();
    const CMatrix hh = barh * barh.adjoint();
    // q_n = [U W H^H]_{nn}; the linear WMMSE term is -2 Re{q}^T s
    const RVector q = (uw.cwiseProduct(barh.conjugate())).rowwise().sum().real();

    SelectionQuadratic out;
    out.G = a.cwiseProduct(hh.conjugate()).real();
    out.G.array() += 1.0 / (2.0 * rho);
    const RVector one_minus_bar = RVector::Ones(n) - st.s_bar;
    out.G.diagonal().array() += (1.0 + one_minus_bar.array().square()) / (2.0 * rho);
    out.G = 0.5 * (out.G + out.G.transpose());

    // Differentiating f2 gives rho*mu - s_bar for the copy constraint and
    // rho*(1 - s_bar)*lambda for the complementarity one.
    const RVector dual_part = RVector::Constant(n, rho * st.dual_xi - l) + (rho * st.dual_mu - st.s_bar) +
                              rho * one_minus_bar.cwiseProduct(st.dual_lambda);
    out.g = 2.0 * q - dual_part / rho;
    return out;
}

void update_selection(const PddProblem &problem, PddState &st)
{
    const auto quad = selection_quadratic(problem, st);
    Eigen::LLT<RMatrix> llt(quad.G + quad.G.transpose());
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::numerical, "update_selection: G + G^T is not positive definite");
    st.s = llt.solve(quad.g);
}

double MmSubproblem::objective(const CVector &phi) const
{
    return phi.dot(B * phi).real() - 2.0 * phi.dot(b).real();
}

MmSubproblem build_mm_subproblem(const PddProblem &problem, const PddState &st)
{
    const auto sizes = problem.ut_sizes();
    const int total = std::accumulate(sizes.begin(), sizes.end(), 0);
    const int k_users = problem.num_users();
    if (st.receiver.cols() != k_users || st.weight.rows() != k_users)
        throw Error(ErrorCode::invalid_argument, "build_mm_subproblem: receiver/weight do not match user count");

    MmSubproblem sub;
    sub.sizes = sizes;
    sub.B = CMatrix::Zero(total, total);
    sub.b = CVector::Zero(total);
    sub.majorizer_level = 0.0;

    // U_h^H Delta, K x N
    const CMatrix rd = st.receiver.adjoint() * st.s.cast<cdouble>().asDiagonal();
    int offset = 0;
    for (int k = 0; k < k_users; ++k)
    {
        const double scale = std::sqrt(problem.powers[k] / sizes[k]);
        const CMatrix y = scale * (rd * problem.beamspace[k]); // K x N_k
        CMatrix block = y.adjoint() * st.weight * y;
        block = 0.5 * (block + block.adjoint());
        sub.B.block(offset, offset, sizes[k], sizes[k]) = block;
        sub.b.segment(offset, sizes[k]) = y.adjoint() * st.weight.col(k);

        Eigen::SelfAdjointEigenSolver<CMatrix> eig(block, Eigen::EigenvaluesOnly);
        sub.majorizer_level = std::max(sub.majorizer_level, eig.eigenvalues().maxCoeff());
        offset += sizes[k];
    }
    return sub;
}

MmResult minimize_unit_modulus(const MmSubproblem &sub, const CVector &init, int max_iter, double tol)
{
    if (init.size() != sub.b.size())
        throw Error(ErrorCode::invalid_argument, "minimize_unit_modulus: initial point has the wrong length");

    MmResult res;
    res.phases = init;
    double prev = sub.objective(res.phases);
    res.objective.push_back(prev);
    for (int it = 0; it < max_iter; ++it)
    {
        const CVector z = sub.majorizer_level * res.phases - sub.B * res.phases + sub.b;
        for (Eigen::Index i = 0; i < z.size(); ++i)
        {
            const double mag = std::abs(z(i));
            if (mag > 0.0)
                res.phases(i) = z(i) / mag;
        }
        const double cur = sub.objective(res.phases);
        res.objective.push_back(cur);
        ++res.iterations;
        if (prev - cur <= tol * std::abs(prev))
            break;
        prev = cur;
    }
    return res;
}

void update_phases(const PddProblem &problem, PddState &st, const PddOptions &options)
{
    const auto sub = build_mm_subproblem(problem, st);
    const auto res = minimize_unit_modulus(sub, st.phases.vector(), options.mm_max_iter, options.mm_tol);
    st.phases.set_vector(res.phases);
}

InnerReport inner_bcd(const PddProblem &problem, PddState &st, const PddOptions &options)
{
    InnerReport rep;
    double prev = al_objective(problem, st);
    rep.cycle_objective.push_back(prev);

    auto record = [&] {
        if (options.record_steps)
            rep.step_objective.push_back(al_objective(problem, st));
    };

    for (int cycle = 0; cycle < options.max_inner; ++cycle)
    {
        update_weight(problem, st);
        record();
        update_receiver(problem, st);
        record();
        update_relaxed_selection(st);
        record();
        update_selection(problem, st);
        record();
        update_phases(problem, st, options);
        record();

        const double cur = al_objective(problem, st);
        rep.cycle_objective.push_back(cur);
        ++rep.cycles;
        ++st.inner_iter;
        if (options.inner_tol > 0.0 && prev - cur < options.inner_tol * std::abs(prev))
            break;
        prev = cur;
    }
    return rep;
}

double constraint_violation(const RVector &s, const RVector &s_bar, int rf_chains)
{
    double h = std::abs(s.sum() - rf_chains);
    for (Eigen::Index n = 0; n < s.size(); ++n)
    {
        h = std::max(h, std::abs(s_bar(n) - s(n)));
        h = std::max(h, std::abs(s(n) * (1.0 - s_bar(n))));
    }
    return h;
}

void outer_update(PddState &st, double violation, int rf_chains)
{
    if (violation < st.violation_threshold)
    {
        // Multiplier steps matching the residuals inside f2.
        st.dual_xi += (st.s.sum() - rf_chains) / st.rho;
        st.dual_mu += (st.s - st.s_bar) / st.rho;
        st.dual_lambda += st.s.cwiseProduct(RVector::Ones(st.s.size()) - st.s_bar) / st.rho;
    }
    else
    {
        st.rho *= st.scale_chi;
    }
    st.violation_threshold = st.scale_chi * violation;
    ++st.outer_iter;
}

std::vector<int> binarize_selection(const RVector &s, const CMatrix &barh, int rf_chains)
{
    const auto n = static_cast<int>(s.size());
    if (rf_chains < 0 || rf_chains > n)
        throw Error(ErrorCode::invalid_argument, "binarize_selection: rf_chains exceeds beam count");
    const RVector energy = barh.rowwise().squaredNorm();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (s(a) != s(b))
            return s(a) > s(b);
        if (energy(a) != energy(b))
            return energy(a) > energy(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(rf_chains));
    std::sort(order.begin(), order.end());
    return order;
}

namespace
{

// Rate reported per outer iteration: the current continuous s, clipped to the
// box, applied as a beam mask.
double trace_rate(const PddProblem &problem, const PddState &st)
{
    return sum_rate_masked(st.s.cwiseMax(0.0).cwiseMin(1.0), problem.effective(st.phases), problem.noise);
}

} // namespace

Solution run_pdd(const PddProblem &problem, const PddOptions &options, RngStream &rng)
{
    return run_pdd(problem, options, initial_state(problem, options, rng));
}

Solution run_pdd(const PddProblem &problem, const PddOptions &options, PddState st)
{
    problem.validate();
    options.validate();

    Solution sol;
    sol.converged = false;
    double prev_rate = 0.0;
    bool have_prev = false;
    for (int t = 0; t < options.max_outer; ++t)
    {
        const auto rep = inner_bcd(problem, st, options);
        const double h = constraint_violation(st.s, st.s_bar, problem.rf_chains);
        const double rate = trace_rate(problem, st);
        sol.trace.push_back({t + 1, rate, h, st.rho, rep.cycles});
        sol.outer_iters = t + 1;

        const bool settled =
            have_prev && std::abs(rate - prev_rate) <= options.rate_tol * std::max(1.0, std::abs(prev_rate));
        outer_update(st, h, problem.rf_chains);
        if (h <= options.violation_target && settled)
        {
            sol.converged = true;
            break;
        }
        prev_rate = rate;
        have_prev = true;
    }

    // Binary selection, then one MM pass on the phases for that selection.
    const auto indices = binarize_selection(st.s, problem.effective(st.phases), problem.rf_chains);
    PddState polish = st;
    polish.s = BeamSelection::from_indices(problem.num_beams(), indices).mask_vector();
    update_receiver(problem, polish);
    update_weight(problem, polish);
    update_phases(problem, polish, options);

    sol.selection = BeamSelection::from_indices(problem.num_beams(), indices, st.s);
    sol.phases = polish.phases;
    sol.rate_bits = sum_rate_selected(sol.selection.matrix(), problem.effective(sol.phases), problem.noise);
    return sol;
}

} // namespace beamspace
