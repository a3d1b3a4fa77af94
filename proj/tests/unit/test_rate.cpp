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

#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "beamspace/rate.hpp"
#include "helpers.hpp"

using namespace beamspace;

namespace
{

using cld = std::complex<long double>;

// det by Gaussian elimination with partial pivoting, in long double.
long double log2_det_long(const CMatrix &m)
{
    const auto n = m.rows();
    std::vector<cld> a(static_cast<size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a[i * n + j] = cld(m(i, j).real(), m(i, j).imag());
    cld det = 1.0L;
    for (Eigen::Index c = 0; c < n; ++c)
    {
        Eigen::Index p = c;
        for (Eigen::Index r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[p * n + c]))
                p = r;
        if (p != c)
        {
            for (Eigen::Index j = 0; j < n; ++j)
                std::swap(a[c * n + j], a[p * n + j]);
            det = -det;
        }
        det *= a[c * n + c];
        for (Eigen::Index r = c + 1; r < n; ++r)
        {
            const cld f = a[r * n + c] / a[c * n + c];
            for (Eigen::Index j = c; j < n; ++j)
                a[r * n + j] -= f * a[c * n + j];
        }
    }
    return std::log2(std::abs(det));
}

CMatrix selected_gram(const std::vector<int> &idx, const CMatrix &barh, double noise)
{
    CMatrix rows(idx.size(), barh.cols());
    for (size_t i = 0; i < idx.size(); ++i)
        rows.row(i) = barh.row(idx[i]);
    return CMatrix::Identity(idx.size(), idx.size()) + rows * rows.adjoint() / noise;
}

} // namespace

TEST_SUITE("rate")
{
    TEST_CASE("zero channel has zero rate")
    {
        const CMatrix z = CMatrix::Zero(8, 3);
        CHECK(sum_rate_selected(std::vector<int>{0, 3, 5}, z, 1e-10) == 0.0);
        CHECK(sum_rate_masked(RVector::Ones(8), z, 1e-10) == 0.0);
    }

    TEST_CASE("full selection and all-ones mask agree")
    {
        RngStream rng(1, 0, StreamPurpose::oracle);
        const CMatrix h = testing::random_cmatrix(6, 2, rng);
        const double full = std::log2(std::exp(log_det_identity_plus(h * h.adjoint() / 0.5)));
        CHECK(sum_rate_selected(RMatrix::Identity(6, 6), h, 0.5) == doctest::Approx(full).epsilon(1e-12));
        CHECK(sum_rate_masked(RVector::Ones(6), h, 0.5) == doctest::Approx(full).epsilon(1e-12));
        CHECK(sum_rate_masked(RVector::Zero(6), h, 0.5) == 0.0);
    }

    TEST_CASE("selected rate matches a long-double determinant")
    {
        RngStream rng(2, 0, StreamPurpose::oracle);
        for (int rep = 0; rep < 10; ++rep)
        {
            const CMatrix h = testing::random_cmatrix(8, 2, rng, 1e-5);
            const std::vector<int> idx{1, 4, 6};
            const double r = sum_rate_selected(idx, h, 1e-10);
            CHECK(r == doctest::Approx(static_cast<double>(log2_det_long(selected_gram(idx, h, 1e-10))))
                           .epsilon(1e-12));
        }
    }

    TEST_CASE("index and selector-matrix forms agree with the binary mask")
    {
        RngStream rng(3, 0, StreamPurpose::oracle);
        const CMatrix h = testing::random_cmatrix(10, 3, rng);
        const auto sel = BeamSelection::from_indices(10, {0, 2, 7, 9});
        CHECK(sel.feasible(4));
        const double a = sum_rate_selected(sel.indices, h, 0.1);
        CHECK(sum_rate_selected(sel.matrix(), h, 0.1) == doctest::Approx(a).epsilon(1e-13));
        CHECK(std::abs(sum_rate_masked(sel.mask_vector(), h, 0.1) - a) <= 1e-9);
    }

    TEST_CASE("selection bookkeeping")
    {
        CHECK_THROWS_AS(BeamSelection::from_indices(4, {1, 1}), Error);
        CHECK_THROWS_AS(BeamSelection::from_indices(4, {4}), Error);
        const auto sel = BeamSelection::from_indices(5, {3, 1});
        CHECK(sel.indices == std::vector<int>{1, 3});
        const RMatrix s = sel.matrix();
        CHECK((s * s.transpose() - RMatrix::Identity(2, 2)).norm() == 0.0);
        CHECK_FALSE(sel.feasible(3));
    }

    TEST_CASE("log det rejects non-Hermitian input")
    {
        CMatrix x = CMatrix::Identity(3, 3);
        x(0, 1) = cdouble(0.5, 0.0);
        CHECK_THROWS_AS(log_det_identity_plus(x), Error);
        CMatrix neg = -2.0 * CMatrix::Identity(2, 2);
        CHECK_THROWS_AS(log_det_identity_plus(neg), Error);
    }

    TEST_CASE("effective channel columns")
    {
        // single path, phases conjugate-matched to the AoD
        const int n = 8, nk = 4;
        const cdouble beta(0.8, -0.3);
        const double mu = 3e-9, theta = 0.7, p = 5.0;
        const auto ch = assemble_channel(n, nk, mu, CVector::Constant(1, beta), RVector::Constant(1, 0.2),
                                         RVector::Constant(1, theta));
        const PhaseProfile phases({nk}, steering(nk, theta));
        const auto eff = effective_channels({ch}, dft_lens(n), phases, {p});
        CHECK(eff.scaled.col(0).squaredNorm() == doctest::Approx(p * mu * n * nk * std::norm(beta)).epsilon(1e-12));

        const auto zero = assemble_channel(n, nk, 0.0, CVector::Constant(1, beta), RVector::Constant(1, 0.2),
                                           RVector::Constant(1, theta));
        CHECK(effective_channels({zero}, dft_lens(n), PhaseProfile({nk}), {p}).scaled.norm() == 0.0);

        const double base = eff.scaled.col(0).norm();
        CHECK(effective_channels({ch}, dft_lens(n), phases, {4 * p}).scaled.col(0).norm() ==
              doctest::Approx(2 * base).epsilon(1e-13));
    }

    TEST_CASE("rate is non-decreasing in every user power")
    {
        const auto inst = testing::small_instance(12, 4, 3, 5);
        const PhaseProfile phases(inst.problem.ut_sizes());
        const auto eff = effective_channels(inst.problem.beamspace, phases, inst.problem.powers);
        const std::vector<int> idx{0, 3, 5, 9};
        const RVector p = eff.powers;
        const RVector grad = rate_power_gradient(idx, eff.unscaled, p, inst.problem.noise);
        for (int k = 0; k < 3; ++k)
        {
            const double d = 1e-4 * p(k);
            RVector hi = p, lo = p;
            hi(k) += d;
            lo(k) -= d;
            const double fd = (sum_rate_with_powers(idx, eff.unscaled, hi, inst.problem.noise) -
                               sum_rate_with_powers(idx, eff.unscaled, lo, inst.problem.noise)) /
                              (2 * d);
            CHECK(grad(k) >= 0.0);
            CHECK(fd >= -1e-10);
            CHECK(grad(k) == doctest::Approx(fd).epsilon(1e-5));
        }
    }

    TEST_CASE("MSE matrix corner cases")
    {
        RngStream rng(4, 0, StreamPurpose::oracle);
        const CMatrix h = testing::random_cmatrix(6, 3, rng);
        const RVector s = RVector::Ones(6);
        const CMatrix e0 = mse_matrix(CMatrix::Zero(6, 3), s, h, 0.3);
        CHECK((e0 - CMatrix::Identity(3, 3)).norm() < 1e-15);

        // zero-forcing limit
        const CMatrix pinv = (h.adjoint() * h).inverse() * h.adjoint();
        const CMatrix ezf = mse_matrix(pinv.adjoint(), s, h, 1e-14);
        CHECK(ezf.cwiseAbs().maxCoeff() < 1e-10);
    }

    TEST_CASE("MMSE receiver attains the rate")
    {
        RngStream rng(5, 0, StreamPurpose::oracle);
        for (int rep = 0; rep < 20; ++rep)
        {
            const CMatrix h = testing::random_cmatrix(8, 3, rng);
            RVector s(8);
            for (int i = 0; i < 8; ++i)
                s(i) = rng.uniform();
            const double noise = 0.2;
            const CMatrix u = mmse_receiver(s, h, noise);
            const CMatrix e = mse_matrix(u, s, h, noise);
            const double lhs = -std::log2(std::exp(1.0)) * std::log(e.determinant().real());
            CHECK(std::abs(lhs - sum_rate_masked(s, h, noise)) <= 1e-8);
        }
    }

    TEST_CASE("WMMSE objective identities")
    {
        RngStream rng(6, 0, StreamPurpose::oracle);
        const CMatrix a = testing::random_cmatrix(3, 3, rng);
        const CMatrix e = a * a.adjoint() + CMatrix::Identity(3, 3);
        CHECK(wmmse_objective(CMatrix::Identity(3, 3), e) == doctest::Approx(e.trace().real()));
        CHECK(wmmse_objective(e.inverse(), e) == doctest::Approx(3.0 + std::log(e.determinant().real())));

        const CMatrix b = testing::random_cmatrix(3, 3, rng);
        const CMatrix w = b * b.adjoint() + 0.5 * CMatrix::Identity(3, 3);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(w);
        double logdet = 0.0;
        for (int i = 0; i < 3; ++i)
            logdet += std::log(es.eigenvalues()(i));
        CHECK(wmmse_objective(w, e) == doctest::Approx((w * e).trace().real() - logdet).epsilon(1e-12));
        CHECK_THROWS_AS(wmmse_objective(CMatrix::Zero(3, 3), e), Error);
    }
}
