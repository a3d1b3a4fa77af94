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
#include <numbers>

#include <doctest.h>

#include "beamspace/channel.hpp"
#include "helpers.hpp"

using namespace beamspace;

TEST_SUITE("channel")
{
    TEST_CASE("broadside steering vector is all ones")
    {
        const CVector a = steering(4, 0.0);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(a(i) - cdouble(1.0, 0.0)) < 1e-15);
    }

    TEST_CASE("two-element array at endfire")
    {
        const CVector a = steering(2, std::numbers::pi / 2);
        CHECK(std::abs(a(0) - cdouble(0.0, 1.0)) < 1e-15);
        CHECK(std::abs(a(1) - cdouble(0.0, -1.0)) < 1e-15);
    }

    TEST_CASE("steering norm and conjugate symmetry")
    {
        RngStream rng(1, 0, StreamPurpose::oracle);
        for (int rep = 0; rep < 20; ++rep)
        {
            const int t = 1 + rep % 9;
            const double psi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const CVector a = steering(t, psi);
            CHECK(a.squaredNorm() == doctest::Approx(t));
            CHECK((a - steering(t, -psi).conjugate()).norm() < 1e-13);
        }
        CHECK_THROWS_AS(steering(0, 0.1), Error);
    }

    TEST_CASE("lens is a centred unitary DFT")
    {
        const CMatrix u1 = dft_lens(1);
        CHECK(std::abs(u1(0, 0) - cdouble(1.0, 0.0)) < 1e-15);
        for (int n : {4, 7, 16})
        {
            const CMatrix u = dft_lens(n);
            CHECK((u * u.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(u.cwiseAbs().maxCoeff() - 1.0 / std::sqrt(n)) < 1e-15);
            CHECK(std::abs(u.cwiseAbs().minCoeff() - 1.0 / std::sqrt(n)) < 1e-15);
        }
    }

    TEST_CASE("plane wave on a lens direction focuses on one beam")
    {
        const int n = 8;
        const CMatrix u = dft_lens(n);
        for (int row = 0; row < n; ++row)
        {
            const double m = row - 0.5 * (n - 1);
            const CVector y = u * steering(n, std::asin(2.0 * m / n));
            CHECK(std::norm(y(row)) == doctest::Approx(n));
            CHECK(y.squaredNorm() - std::norm(y(row)) < 1e-20 + 1e-12 * n);
        }
    }

    TEST_CASE("single path gives a rank-one channel")
    {
        RngStream rng(2, 0, StreamPurpose::channel);
        UserGeometry g{0.05, 1.0};
        const auto ch = sample_channel(16, 4, 1, g, rng);
        Eigen::JacobiSVD<CMatrix> svd(ch.matrix);
        const auto sv = svd.singularValues();
        CHECK(sv(0) > 1.0);
        CHECK(sv(1) < 1e-12 * sv(0));
    }

    TEST_CASE("channel is rebuilt from its path parameters")
    {
        RngStream rng(5, 1, StreamPurpose::channel);
        const auto ch = sample_channel(12, 3, 4, UserGeometry{0.03, 2.5e-9}, rng);
        CMatrix manual = CMatrix::Zero(12, 3);
        for (int l = 0; l < 4; ++l)
            manual += ch.path_gains(l) * steering(12, ch.aoa(l)) * steering(3, ch.aod(l)).adjoint();
        manual *= std::sqrt(2.5e-9 / 4.0);
        CHECK((manual - ch.matrix).norm() <= 1e-14 * manual.norm());
    }

    TEST_CASE("mean Frobenius energy equals mu N N_k")
    {
        RngStream rng(7, 0, StreamPurpose::channel);
        double acc = 0.0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i)
            acc += sample_channel(16, 4, 4, UserGeometry{0.05, 1.0}, rng).matrix.squaredNorm();
        CHECK(acc / draws == doctest::Approx(64.0).epsilon(0.02));
    }

    TEST_CASE("channel dump round-trips bit-exactly")
    {
        const auto inst = testing::small_instance(16, 4, 3, 21, 2);
        const auto rec = channels_to_json(2, inst.channels, inst.geometry);
        const auto back = channels_from_json(nlohmann::json::parse(rec.dump()), 16, {4, 4, 4});
        REQUIRE(back.size() == 3);
        for (int k = 0; k < 3; ++k)
            CHECK((back[k].matrix - inst.channels[k].matrix).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("channel draws depend only on the stream key")
    {
        const auto a = testing::small_instance(16, 4, 3, 4, 9);
        const auto b = testing::small_instance(16, 4, 3, 4, 9);
        const auto c = testing::small_instance(16, 4, 3, 4, 10);
        CHECK((a.channels[2].matrix - b.channels[2].matrix).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.channels[2].matrix - c.channels[2].matrix).norm() > 0.0);
    }
}
