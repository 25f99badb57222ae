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

#ifndef THZRIS_METRICS_HPP
#define THZRIS_METRICS_HPP

#include "thzris/channel.hpp"
#include "thzris/grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace thzris
{

// Per-(subcarrier, user) digital precoders d_{m,k}, each N_RF x 1.
using DigitalBeamformer = UserGrid<Eigen::VectorXcd>;

// One N x N_RF analog matrix per subcarrier.
using AnalogMatrices = std::vector<Eigen::MatrixXcd>;

// Equivalent baseband channels h_{m,k} F_m (1 x N_RF).
EffectiveChannels project_channels(const EffectiveChannels &h, const AnalogMatrices &F);

// gamma_{m,k} = |h_{m,k} d_{m,k}|^2 / (sum_{j != k} |h_{m,k} d_{m,j}|^2 + sigma^2) on equivalent channels.
UserGrid<double> sinr(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power);

struct RateSummary
{
    double total = 0.0;          // sum over subcarriers and users, bit/s/Hz
    double per_subcarrier = 0.0; // total / M
};

RateSummary sum_rate(const UserGrid<double> &sinr_values);

// sum_{m,k} ||F_m d_{m,k}||^2.
double transmit_power(const AnalogMatrices &F, const DigitalBeamformer &d);

// Rate of (F, d) over the channel produced by the reflection state `theta`.
RateSummary evaluate_sum_rate(const ChannelSet &channels, const ReflectionConfig &theta, const AnalogMatrices &F,
                              const DigitalBeamformer &d, double noise_power);

} // namespace thzris

#endif
