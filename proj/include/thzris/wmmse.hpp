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

#ifndef THZRIS_WMMSE_HPP
#define THZRIS_WMMSE_HPP

#include "thzris/metrics.hpp"

#include <vector>

namespace thzris
{

// All inputs are equivalent channels h_{m,k} F_m (1 x N_RF).

struct WmmseWeights
{
    UserGrid<double> xi;    // MSE, in (0, 1]
    UserGrid<double> omega; // 1 / xi
};

struct PrecoderUpdate
{
    DigitalBeamformer d;
    double mu = 0.0; // power multiplier, 0 when the unconstrained minimizer is feasible
};

struct WmmseOptions
{
    int max_iterations = 5; // I_d
    double tolerance = 1e-4; // relative rate change
};

struct WmmseResult
{
    DigitalBeamformer d;
    std::vector<double> rate_trace; // entry 0 is the rate of d_init, then one entry per iteration
    int iterations = 0;
};

// Receive filter minimizing E|chi y - s|^2: chi = conj(h d_k) / (sum_j |h d_j|^2 + sigma^2).
UserGrid<cd> update_combiners(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power);

// xi = 1 - |h d_k|^2 / (sum_j |h d_j|^2 + sigma^2), omega = 1 / xi.
WmmseWeights update_weights(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power);

// MSE of user k at subcarrier m for a given receive filter.
double mean_squared_error(const EffectiveChannels &equivalent, const DigitalBeamformer &d, const UserGrid<cd> &chi,
                          double noise_power, int m, int k);

// sum omega * mse / ln 2 - log2(omega).
double wmmse_objective(const EffectiveChannels &equivalent, const DigitalBeamformer &d, const UserGrid<cd> &chi,
                       const UserGrid<double> &omega, double noise_power);

// Minimizes sum omega * mse over d subject to sum ||F_m d_{m,k}||^2 <= P_max with one global
// multiplier. When F_m has dependent columns d is restricted to the row space of F_m.
PrecoderUpdate update_precoders(const EffectiveChannels &equivalent, const UserGrid<cd> &chi,
                                const UserGrid<double> &omega, const AnalogMatrices &F, double max_power);

// d_{m,k} = h_{m,k}^H scaled by one common factor so that the power budget is met with equality.
DigitalBeamformer matched_filter(const EffectiveChannels &equivalent, const AnalogMatrices &F, double max_power);

// Scales d by one common factor into the power ball (no-op when already feasible).
DigitalBeamformer scale_to_power(DigitalBeamformer d, const AnalogMatrices &F, double max_power);

WmmseResult wmmse_solve(const EffectiveChannels &equivalent, const AnalogMatrices &F, double max_power,
                        double noise_power, const DigitalBeamformer &d_init, const WmmseOptions &options = {});

} // namespace thzris

#endif
