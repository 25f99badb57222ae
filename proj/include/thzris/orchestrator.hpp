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

#ifndef THZRIS_ORCHESTRATOR_HPP
#define THZRIS_ORCHESTRATOR_HPP

#include "thzris/channel.hpp"
#include "thzris/metrics.hpp"
#include "thzris/ris_opt.hpp"
#include "thzris/ttd_analog.hpp"
#include "thzris/wmmse.hpp"

#include <string>
#include <vector>

namespace thzris
{

struct SolveOptions
{
    int outer_iterations = 10;     // I_max
    int inner_iterations = 5;      // I_d
    int reflection_passes = 10;    // I_o
    int reflection_bits = 1;       // Q
    double outer_tolerance = 1e-4; // relative rate change
    double inner_tolerance = 1e-4;
};

struct DelayRange
{
    std::string layer; // "single", "second" or "first"
    double max_tc = 0.0; // upper end of [0, max] in carrier periods
};

struct HardwareReport
{
    std::string scheme;
    int rf_chains = 0;
    int large_ttds = 0;
    int total_ttds = 0;
    int total_bits = 0;
    std::vector<DelayRange> delay_ranges; // worst case over steering angles (|sin theta| = 1)
};

HardwareReport hardware_report(const SystemConfig &cfg, const AnalogArchitecture &arch);

struct ComplexityReport
{
    double wmmse_operations = 0.0;      // I_max I_d M N^2
    double reflection_operations = 0.0; // I_max I_o 2^Q K N R N_RIS
    double total_operations = 0.0;
    HardwareReport hardware;
};

ComplexityReport complexity_report(const SystemConfig &cfg, const AnalogArchitecture &arch,
                                   const SolveOptions &options);

struct WarmStart
{
    DigitalBeamformer d;
    ReflectionConfig theta;
};

struct SolveResult
{
    AnalogMatrices F;
    DigitalBeamformer d;
    ReflectionConfig theta;
    std::vector<double> rate_trace;                     // R_sum; entry 0 is the initialization
    std::vector<std::vector<double>> inner_traces;      // WMMSE rate trace of every outer round
    std::vector<std::vector<double>> reflection_traces; // pass rates of every outer round
    int outer_iterations = 0;
    long long wmmse_iterations = 0;
    long long reflection_evaluations = 0;
    RateSummary rate;
    HardwareReport hardware;
};

// Steering angle of every RF chain: the LoS departure towards RIS r, or towards user
// (chain mod K) when the scenario has no RIS.
std::vector<double> chain_angles(const Scenario &scenario, const SystemConfig &cfg);

// F_m for every subcarrier.
AnalogMatrices analog_matrices(const AnalogBeamformer &analog, const SystemConfig &cfg);

// Alternates WMMSE precoding and RIS coordinate updates for fixed F built from `angles`.
// `channels` is the channel the optimizer sees (possibly an erroneous estimate).
SolveResult joint_optimize(const ChannelSet &channels, const std::vector<double> &angles, const SystemConfig &cfg,
                           const AnalogArchitecture &arch, const SolveOptions &options = {},
                           const WarmStart *warm = nullptr);

// Same, with F and the channel derived from `scenario`.
SolveResult joint_optimize(const Scenario &scenario, const SystemConfig &cfg, const AnalogArchitecture &arch,
                           const SolveOptions &options = {});

} // namespace thzris

#endif
