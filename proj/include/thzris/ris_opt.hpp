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

#ifndef THZRIS_RIS_OPT_HPP
#define THZRIS_RIS_OPT_HPP

#include "thzris/channel.hpp"
#include "thzris/metrics.hpp"
#include "thzris/reflection.hpp"

#include <vector>

namespace thzris
{

// Sum rate as a function of the reflection state for fixed F and d.
//
// The received amplitude of stream j at user k on subcarrier m is affine in every reflection
// coefficient: s = direct F_m d_j + sum_e phi_e t_e with t_e = f[n] (G[n, :] F_m d_j). The
// per-element terms are precomputed once, so a candidate evaluation costs O(M K^2 R N_RIS).
class ReflectionObjective
{
public:
    ReflectionObjective(const ChannelSet &channels, const AnalogMatrices &F, const DigitalBeamformer &d,
                        double noise_power);

    int elements() const { return elements_; }
    int ris_count() const { return ris_count_; }
    int elements_per_ris() const { return elements_per_ris_; }

    double sum_rate(const ReflectionConfig &theta) const;

    // Rate of every alphabet candidate at `element`, all other elements as in `theta`.
    std::vector<double> candidate_rates(const ReflectionConfig &theta, int element) const;

    // Received amplitudes [m][k][j] for `theta`, and the incremental forms used by a pass.
    std::vector<cd> amplitudes(const ReflectionConfig &theta) const;
    std::vector<double> candidate_rates(const std::vector<cd> &amplitudes, const ReflectionConfig &theta,
                                        int element) const;
    void move_element(std::vector<cd> &amplitudes, int element, cd from, cd to) const;

private:
    std::size_t term_index(int e, int m, int k, int j) const
    {
        return ((static_cast<std::size_t>(e) * subcarriers_ + m) * users_ + k) * users_ + j;
    }
    double rate_from(const std::vector<cd> &amplitudes) const;

    int ris_count_ = 0;
    int elements_per_ris_ = 0;
    int elements_ = 0;
    int subcarriers_ = 0;
    int users_ = 0;
    double noise_ = 0.0;
    std::vector<cd> base_;  // [m][k][j]
    std::vector<cd> terms_; // [e][m][k][j]
};

struct PassResult
{
    bool changed = false;
    double rate = 0.0;
    long long evaluations = 0;
    std::vector<double> element_rates; // rate after each element update
};

// One sweep over all elements in order. Each element takes the candidate with the highest rate
// (ties to the lowest alphabet index) with the other elements held at their current values.
PassResult coordinate_pass(ReflectionConfig &theta, const ReflectionObjective &objective);

struct ReflectionResult
{
    ReflectionConfig theta;
    std::vector<double> pass_rates; // entry 0 is the initial rate, then one entry per pass
    int passes = 0;
    long long evaluations = 0;
    bool converged = false; // a full pass changed nothing
    std::vector<double> element_rates;
};

// Repeats coordinate_pass up to `max_passes` times, stopping after a pass that changes nothing.
ReflectionResult optimize_reflection(const ReflectionConfig &init, const ReflectionObjective &objective,
                                     int max_passes);
ReflectionResult optimize_reflection(const ReflectionConfig &init, const ChannelSet &channels,
                                     const AnalogMatrices &F, const DigitalBeamformer &d, double noise_power,
                                     int max_passes);

} // namespace thzris

#endif
