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

#include "thzris/metrics.hpp"

#include <cmath>

namespace thzris
{

EffectiveChannels project_channels(const EffectiveChannels &h, const AnalogMatrices &F)
{
    if (static_cast<int>(F.size()) != h.subcarriers())
        throw ConfigError("one analog matrix per subcarrier is required");
    EffectiveChannels out(h.subcarriers(), h.users());
    for (int m = 0; m < h.subcarriers(); ++m)
        for (int k = 0; k < h.users(); ++k)
        {
            if (h(m, k).size() != F[m].rows())
                throw ConfigError("analog matrix row count does not match the antenna count");
            out(m, k) = h(m, k) * F[m];
        }
    return out;
}

UserGrid<double> sinr(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power)
{
    const int M = equivalent.subcarriers();
    const int K = equivalent.users();
    if (d.subcarriers() != M || d.users() != K)
        throw ConfigError("precoder grid does not match the channel grid");
    UserGrid<double> out(M, K, 0.0);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
        {
            const auto &h = equivalent(m, k);
            double interference = 0.0;
            double signal = 0.0;
            for (int j = 0; j < K; ++j)
            {
                const double p = std::norm((h * d(m, j)).value());
                if (j == k)
                    signal = p;
                else
                    interference += p;
            }
            out(m, k) = signal / (interference + noise_power);
        }
    return out;
}

RateSummary sum_rate(const UserGrid<double> &sinr_values)
{
    RateSummary out;
    for (int m = 0; m < sinr_values.subcarriers(); ++m)
        for (int k = 0; k < sinr_values.users(); ++k)
            out.total += std::log2(1.0 + sinr_values(m, k));
    if (sinr_values.subcarriers() > 0)
        out.per_subcarrier = out.total / sinr_values.subcarriers();
    return out;
}

double transmit_power(const AnalogMatrices &F, const DigitalBeamformer &d)
{
    double p = 0.0;
    for (int m = 0; m < d.subcarriers(); ++m)
        for (int k = 0; k < d.users(); ++k)
            p += (F.at(m) * d(m, k)).squaredNorm();
    return p;
}

RateSummary evaluate_sum_rate(const ChannelSet &channels, const ReflectionConfig &theta, const AnalogMatrices &F,
                              const DigitalBeamformer &d, double noise_power)
{
    return sum_rate(sinr(project_channels(effective_channel(channels, theta), F), d, noise_power));
}

} // namespace thzris
