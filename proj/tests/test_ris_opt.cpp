// SPDX-License-Identifier: Apache-2.0
//
// thzris - wideband THz hybrid beamforming with double-layer true-time delays
// Copyright (C) 2026 thzris developers
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

#include "support.hpp"

#include "thzris/ris_opt.hpp"

#include <doctest.h>

#include <cmath>

using namespace thzris;

namespace
{

struct Instance
{
    ChannelSet channels;
    AnalogMatrices F;
    DigitalBeamformer d;
    double noise = 0.0;
};

Instance random_instance(int ris, int elements, int M, int K, int N, int n_rf, Rng &rng, bool direct = false)
{
    Instance in;
    in.channels = test::random_channels(ris, M, K, elements, N, rng, direct);
    in.F = test::random_analog(M, N, n_rf, rng);
    in.d = test::random_precoders(M, K, n_rf, rng);
    in.noise = 0.5;
    return in;
}

double fresh_rate(const Instance &in, const ReflectionConfig &theta)
{
    return evaluate_sum_rate(in.channels, theta, in.F, in.d, in.noise).total;
}

} // namespace

TEST_CASE("reflection alphabet")
{
    const auto one = candidate_set(1);
    REQUIRE(one.size() == 2);
    CHECK(one[1] == cd(-1.0, 0.0));
    const auto two = candidate_set(2);
    CHECK(two[1] == cd(0.0, 1.0));
    CHECK(two[3] == cd(0.0, -1.0));
    for (const cd &z : candidate_set(5))
        CHECK(std::abs(z) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(candidate_set(0), ConfigError);
    CHECK_THROWS_AS(candidate_set(17), ConfigError);

    ReflectionConfig theta(2, 3, 2);
    CHECK(theta.size() == 6);
    theta.set_index(4, 3);
    CHECK(theta.coefficient(1, 1) == cd(0.0, -1.0));
    CHECK_THROWS_AS(theta.set_index(0, 4), ConfigError);
    CHECK(ReflectionConfig::all_ones(2, 3, 2).coefficient(5) == cd(1.0, 0.0));
}

TEST_CASE("objective agrees with the cascaded-channel rate")
{
    Rng rng(1);
    for (bool direct : {false, true})
    {
        const Instance in = random_instance(2, 4, 3, 3, 10, 3, rng, direct);
        const ReflectionObjective obj(in.channels, in.F, in.d, in.noise);
        ReflectionConfig theta(2, 4, 2);
        std::uniform_int_distribution<int> pick(0, 3);
        for (int e = 0; e < theta.size(); ++e)
            theta.set_index(e, pick(rng));
        CHECK(obj.sum_rate(theta) == doctest::Approx(fresh_rate(in, theta)).epsilon(1e-12));

        const auto amp = obj.amplitudes(theta);
        for (int e = 0; e < theta.size(); ++e)
        {
            const auto rates = obj.candidate_rates(theta, e);
            const auto incremental = obj.candidate_rates(amp, theta, e);
            REQUIRE(rates.size() == 4);
            for (int q = 0; q < 4; ++q)
            {
                ReflectionConfig alt = theta;
                alt.set_index(e, q);
                CHECK(rates[q] == doctest::Approx(fresh_rate(in, alt)).epsilon(1e-12));
                CHECK(incremental[q] == doctest::Approx(rates[q]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("coordinate pass is monotone per element and counts evaluations")
{
    Rng rng(2);
    for (int bits : {1, 2, 3})
    {
        const Instance in = random_instance(2, 9, 2, 3, 8, 2, rng);
        const ReflectionObjective obj(in.channels, in.F, in.d, in.noise);
        ReflectionConfig theta(2, 9, bits);
        const double start = obj.sum_rate(theta);
        const PassResult pass = coordinate_pass(theta, obj);
        REQUIRE(pass.element_rates.size() == 18);
        CHECK(pass.evaluations == 18LL * (1 << bits));
        double prev = start;
        for (double r : pass.element_rates)
        {
            CHECK(r >= prev - 1e-12 * std::abs(prev));
            prev = r;
        }
        CHECK(pass.rate == doctest::Approx(fresh_rate(in, theta)).epsilon(1e-12));
    }
}

TEST_CASE("converged states are 1-flip optimal")
{
    Rng rng(3);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Instance in = random_instance(2, 6, 2, 2, 8, 2, rng);
        const int bits = 1 + trial % 2;
        const auto res = optimize_reflection(ReflectionConfig(2, 6, bits), in.channels, in.F, in.d, in.noise, 50);
        REQUIRE(res.converged);
        CHECK(res.passes <= 50);
        CHECK(res.pass_rates.size() == static_cast<std::size_t>(res.passes) + 1);
        for (std::size_t i = 1; i < res.pass_rates.size(); ++i)
            CHECK(res.pass_rates[i] >= res.pass_rates[i - 1] - 1e-12 * std::abs(res.pass_rates[i - 1]));

        const double at = fresh_rate(in, res.theta);
        CHECK(res.pass_rates.back() == doctest::Approx(at).epsilon(1e-12));
        for (int e = 0; e < res.theta.size(); ++e)
            for (int q = 0; q < (1 << bits); ++q)
            {
                ReflectionConfig alt = res.theta;
                alt.set_index(e, q);
                CHECK(fresh_rate(in, alt) <= at * (1.0 + 1e-12));
            }
    }
}

TEST_CASE("four-element surface against exhaustive search")
{
    Rng rng(4);
    double ratio = 0.0;
    for (int trial = 0; trial < 20; ++trial)
    {
        const Instance in = random_instance(1, 4, 2, 2, 6, 1, rng);
        double best = 0.0;
        for (int mask = 0; mask < 16; ++mask)
        {
            ReflectionConfig theta(1, 4, 1);
            for (int e = 0; e < 4; ++e)
                theta.set_index(e, (mask >> e) & 1);
            best = std::max(best, fresh_rate(in, theta));
        }
        const auto res = optimize_reflection(ReflectionConfig(1, 4, 1), in.channels, in.F, in.d, in.noise, 10);
        const double got = fresh_rate(in, res.theta);
        CHECK(got <= best * (1.0 + 1e-12));
        ratio += got / best / 20.0;
    }
    CHECK(ratio >= 0.95);
}

TEST_CASE("ties keep the lowest alphabet index")
{
    Rng rng(5);
    Instance in = random_instance(1, 4, 1, 2, 6, 2, rng, true);
    for (int m = 0; m < 1; ++m)
        in.channels.bs_ris(0, m).setZero();
    const auto res = optimize_reflection(ReflectionConfig(1, 4, 2), in.channels, in.F, in.d, in.noise, 5);
    CHECK(res.converged);
    CHECK(res.passes == 1);
    for (int e = 0; e < 4; ++e)
        CHECK(res.theta.index(e) == 0);
}

TEST_CASE("pass limits and degenerate inputs")
{
    Rng rng(6);
    const Instance in = random_instance(1, 4, 2, 2, 6, 2, rng);
    CHECK_THROWS_AS(optimize_reflection(ReflectionConfig(1, 4, 1), in.channels, in.F, in.d, in.noise, 0), ConfigError);
    const auto one = optimize_reflection(ReflectionConfig(1, 4, 1), in.channels, in.F, in.d, in.noise, 1);
    CHECK(one.passes == 1);
    CHECK(one.evaluations == 8);

    const Instance none = random_instance(0, 4, 2, 2, 6, 2, rng, true);
    const auto empty = optimize_reflection(ReflectionConfig(0, 4, 1), none.channels, none.F, none.d, none.noise, 3);
    CHECK(empty.converged);
    CHECK(empty.evaluations == 0);

    CHECK_THROWS_AS(ReflectionObjective(in.channels, test::random_analog(3, 6, 2, rng), in.d, in.noise), ConfigError);
}

TEST_CASE("optimization is deterministic")
{
    Rng rng(7);
    const Instance in = random_instance(2, 8, 3, 2, 8, 2, rng);
    const auto a = optimize_reflection(ReflectionConfig(2, 8, 2), in.channels, in.F, in.d, in.noise, 10);
    const auto b = optimize_reflection(ReflectionConfig(2, 8, 2), in.channels, in.F, in.d, in.noise, 10);
    CHECK(a.theta == b.theta);
    CHECK(a.pass_rates == b.pass_rates);
}
