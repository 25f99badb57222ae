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

#ifndef THZRIS_RANDOM_HPP
#define THZRIS_RANDOM_HPP

#include "thzris/system_config.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace thzris
{

using Rng = std::mt19937_64;

// SplitMix64 finalizer; mixes a master seed with stream identifiers into an
// independent sub-seed. Used for per-trial and per-purpose seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream)
{
    auto mix = [](std::uint64_t z)
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed);
    for (auto s : stream)
        h = mix(h ^ mix(s));
    return h;
}

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
inline cd complex_normal(Rng &rng, double variance = 1.0)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5 * variance));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace thzris

#endif
