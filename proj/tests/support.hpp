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

// Random instances shared by the unit tests.

#ifndef THZRIS_TESTS_SUPPORT_HPP
#define THZRIS_TESTS_SUPPORT_HPP

#include "thzris/channel.hpp"
#include "thzris/metrics.hpp"
#include "thzris/random.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace thzris::test
{

inline Eigen::MatrixXcd random_matrix(int rows, int cols, Rng &rng, double variance = 1.0)
{
    Eigen::MatrixXcd a(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            a(i, j) = complex_normal(rng, variance);
    return a;
}

inline EffectiveChannels random_equivalent(int subcarriers, int users, int chains, Rng &rng, double variance = 1.0)
{
    EffectiveChannels h(subcarriers, users);
    for (auto &row : h)
        row = random_matrix(1, chains, rng, variance);
    return h;
}

inline DigitalBeamformer random_precoders(int subcarriers, int users, int chains, Rng &rng)
{
    DigitalBeamformer d(subcarriers, users);
    for (auto &v : d)
        v = random_matrix(chains, 1, rng);
    return d;
}

inline AnalogMatrices random_analog(int subcarriers, int antennas, int chains, Rng &rng)
{
    AnalogMatrices F;
    for (int m = 0; m < subcarriers; ++m)
        F.push_back(random_matrix(antennas, chains, rng, 1.0 / antennas));
    return F;
}

inline AnalogMatrices identity_analog(int subcarriers, int chains)
{
    return AnalogMatrices(subcarriers, Eigen::MatrixXcd::Identity(chains, chains));
}

// Channel set with i.i.d. CN(0, 1) entries.
inline ChannelSet random_channels(int ris_count, int subcarriers, int users, int elements, int antennas, Rng &rng,
                                  bool with_direct = false)
{
    ChannelSet ch(ris_count, subcarriers, users, elements, antennas, with_direct);
    for (int r = 0; r < ris_count; ++r)
        for (int m = 0; m < subcarriers; ++m)
        {
            ch.bs_ris(r, m) = random_matrix(elements, antennas, rng);
            for (int k = 0; k < users; ++k)
                ch.ris_user(r, m, k) = random_matrix(1, elements, rng);
        }
    if (with_direct)
        for (int m = 0; m < subcarriers; ++m)
            for (int k = 0; k < users; ++k)
                ch.direct(m, k) = random_matrix(1, antennas, rng);
    return ch;
}

// Splits one CSV record, honouring double-quoted cells.
inline std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i)
    {
        const char c = line[i];
        if (quoted && c == '"' && i + 1 < line.size() && line[i + 1] == '"')
            cells.back() += line[++i];
        else if (c == '"')
            quoted = !quoted;
        else if (c == ',' && !quoted)
            cells.emplace_back();
        else
            cells.back() += c;
    }
    return cells;
}

} // namespace thzris::test

#endif
