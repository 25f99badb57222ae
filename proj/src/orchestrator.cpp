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

#include "thzris/orchestrator.hpp"

#include <cmath>

namespace thzris
{

namespace
{

double tidy(double x)
{
    return std::round(x * 1e9) / 1e9;
}

} // namespace

HardwareReport hardware_report(const SystemConfig &cfg, const AnalogArchitecture &arch)
{
    const int N = cfg.bs_antennas;
    arch.validate(N);
    HardwareReport out;
    out.scheme = arch.label();
    out.rf_chains = cfg.rf_chains;
    out.large_ttds = cfg.rf_chains * arch.large_ttds_per_chain();
    out.total_ttds = cfg.rf_chains * arch.ttds_per_chain();
    out.total_bits = cfg.rf_chains * arch.bits_per_chain();

    const double td_over_tc = cfg.antenna_delay() / cfg.carrier_period();
    switch (arch.kind)
    {
    case SchemeKind::ps_only:
        break;
    case SchemeKind::single_layer:
    {
        const int S = N / arch.subarrays;
        out.delay_ranges.push_back({"single", tidy((arch.subarrays - 1) * S * td_over_tc)});
        break;
    }
    case SchemeKind::double_layer:
    {
        const int P = N / (arch.groups * arch.per_group);
        out.delay_ranges.push_back({"second", tidy((arch.groups - 1) * arch.per_group * P * td_over_tc)});
        out.delay_ranges.push_back({"first", tidy((arch.per_group - 1) * P * td_over_tc)});
        break;
    }
    }
    return out;
}

ComplexityReport complexity_report(const SystemConfig &cfg, const AnalogArchitecture &arch,
                                   const SolveOptions &options)
{
    ComplexityReport out;
    const double N = cfg.bs_antennas;
    out.wmmse_operations =
        static_cast<double>(options.outer_iterations) * options.inner_iterations * cfg.subcarriers * N * N;
    out.reflection_operations = static_cast<double>(options.outer_iterations) * options.reflection_passes *
                                std::ldexp(1.0, options.reflection_bits) * cfg.users * N * cfg.ris_count *
                                cfg.ris_elements();
    out.total_operations = out.wmmse_operations + out.reflection_operations;
    out.hardware = hardware_report(cfg, arch);
    return out;
}

std::vector<double> chain_angles(const Scenario &scenario, const SystemConfig &cfg)
{
    std::vector<double> angles(cfg.rf_chains);
    if (scenario.ris_count() > 0)
    {
        if (scenario.ris_count() != cfg.rf_chains)
            throw ConfigError("N_RF must equal the RIS count");
        for (int r = 0; r < cfg.rf_chains; ++r)
            angles[r] = scenario.ris_departure(r);
        return angles;
    }
    if (scenario.user_count() == 0 || scenario.direct.empty())
        throw ConfigError("a scenario without RIS needs direct links to at least one user");
    for (int c = 0; c < cfg.rf_chains; ++c)
        angles[c] = scenario.user_departure(c % scenario.user_count());
    return angles;
}

AnalogMatrices analog_matrices(const AnalogBeamformer &analog, const SystemConfig &cfg)
{
    AnalogMatrices F;
    for (double f : subcarrier_frequencies(cfg))
        F.push_back(analog.compose(f));
    return F;
}

SolveResult joint_optimize(const ChannelSet &channels, const std::vector<double> &angles, const SystemConfig &cfg,
                           const AnalogArchitecture &arch, const SolveOptions &options, const WarmStart *warm)
{
    cfg.validate();
    if (options.outer_iterations < 0 || options.inner_iterations < 1 || options.reflection_passes < 1)
        throw ConfigError("iteration counts must satisfy I_max >= 0, I_d >= 1, I_o >= 1");
    if (channels.subcarriers() != cfg.subcarriers || channels.users() != cfg.users ||
        channels.antennas() != cfg.bs_antennas || channels.ris_count() != cfg.ris_count)
        throw ConfigError("channel set does not match the system configuration");

    const double P = cfg.max_power_w;
    const double noise = cfg.noise_power_w;

    SolveResult out;
    out.F = analog_matrices(build_analog_beamformer(arch, angles, cfg), cfg);
    out.hardware = hardware_report(cfg, arch);

    if (warm)
    {
        out.theta = warm->theta;
        out.d = scale_to_power(warm->d, out.F, P);
    }
    else
    {
        out.theta = ReflectionConfig::all_ones(cfg.ris_count, channels.ris_elements(), options.reflection_bits);
        out.d = matched_filter(project_channels(effective_channel(channels, out.theta), out.F), out.F, P);
    }
    out.rate = evaluate_sum_rate(channels, out.theta, out.F, out.d, noise);
    out.rate_trace.push_back(out.rate.total);

    const WmmseOptions inner{options.inner_iterations, options.inner_tolerance};
    for (int it = 0; it < options.outer_iterations; ++it)
    {
        const EffectiveChannels eq = project_channels(effective_channel(channels, out.theta), out.F);
        WmmseResult w = wmmse_solve(eq, out.F, P, noise, out.d, inner);
        out.d = std::move(w.d);
        out.wmmse_iterations += w.iterations;
        out.inner_traces.push_back(std::move(w.rate_trace));

        ReflectionResult r = optimize_reflection(out.theta, channels, out.F, out.d, noise, options.reflection_passes);
        out.theta = std::move(r.theta);
        out.reflection_evaluations += r.evaluations;
        out.reflection_traces.push_back(std::move(r.pass_rates));

        const double prev = out.rate_trace.back();
        out.rate = evaluate_sum_rate(channels, out.theta, out.F, out.d, noise);
        if (!std::isfinite(out.rate.total))
            throw NumericalError("sum rate is not finite");
        out.rate_trace.push_back(out.rate.total);
        ++out.outer_iterations;
        if (std::abs(out.rate.total - prev) <= options.outer_tolerance * std::abs(prev))
            break;
    }
    return out;
}

SolveResult joint_optimize(const Scenario &scenario, const SystemConfig &cfg, const AnalogArchitecture &arch,
                           const SolveOptions &options)
{
    return joint_optimize(generate_channels(scenario, cfg), chain_angles(scenario, cfg), cfg, arch, options);
}

} // namespace thzris
