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

#include "thzris/ttd_analog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thzris
{

namespace
{

constexpr int kMaxBits = 40;

cd unit_phasor(double phase)
{
    return {std::cos(phase), std::sin(phase)};
}

// Uniform view of the three schemes as (second-layer TTDs, first-layer TTDs per second-layer
// TTD, antennas per PS subarray). The single layer is K_H = U, K_L = 1 with the TTD delay held
// in `first`; PS-only is a single subarray spanning the array.
struct Layout
{
    int groups;
    int per_group;
    int group_size;

    int subarrays() const { return groups * per_group; }
};

Layout layout_of(const AnalogArchitecture &arch, int antennas)
{
    switch (arch.kind)
    {
    case SchemeKind::ps_only:
        return {1, 1, antennas};
    case SchemeKind::single_layer:
        return {arch.subarrays, 1, antennas / arch.subarrays};
    case SchemeKind::double_layer:
        return {arch.groups, arch.per_group, antennas / (arch.groups * arch.per_group)};
    }
    return {1, 1, antennas};
}

// Offset that makes a layer's delays non-negative when the steering angle is negative.
double layer_offset(double most_negative, std::optional<double> step)
{
    if (most_negative >= 0.0)
        return 0.0;
    const double magnitude = -most_negative;
    if (!step)
        return magnitude;
    return std::ceil(magnitude / *step - 1e-9) * *step;
}

double total_delay(const DelayAssignment &d, const Layout &lay, int n)
{
    const int sub = n / lay.group_size;
    const int group = sub / lay.per_group;
    double tau = d.first.empty() ? 0.0 : d.first[sub];
    if (!d.second.empty())
        tau += d.second[group];
    return tau;
}

Eigen::VectorXcd chain_phase_shifters(const AnalogArchitecture &arch, const Layout &lay, double theta0,
                                      const SystemConfig &cfg)
{
    const int N = cfg.bs_antennas;
    const double amp = 1.0 / std::sqrt(static_cast<double>(lay.group_size));
    const double step = kTwoPi * cfg.carrier_hz * cfg.antenna_delay() * std::sin(theta0);
    Eigen::VectorXcd c(N);
    for (int n = 0; n < N; ++n)
    {
        const double phase = step * (n % lay.group_size);
        c(n) = amp * (arch.ps_bits > 0 ? quantize_phase(phase, arch.ps_bits) : unit_phasor(phase));
    }
    return c;
}

DelayAssignment chain_delays(const AnalogArchitecture &arch, double theta0, const SystemConfig &cfg)
{
    DelayAssignment d = ideal_delays(arch, theta0, cfg);
    if (arch.continuous_delays() || arch.kind == SchemeKind::ps_only)
        return d;
    const double step = *arch.delay_step_tc * cfg.carrier_period();
    const int first_bits = arch.kind == SchemeKind::single_layer ? arch.single_bits : arch.sub_bits;
    for (auto &tau : d.first)
        tau = quantize_delay(tau, first_bits, step);
    for (auto &tau : d.second)
        tau = quantize_delay(tau, arch.group_bits, step);
    return d;
}

Eigen::VectorXcd chain_column(const Eigen::VectorXcd &ps, const DelayAssignment &d, const Layout &lay,
                              double freq_hz)
{
    Eigen::VectorXcd col(ps.size());
    for (Eigen::Index n = 0; n < ps.size(); ++n)
        col(n) = ps(n) * unit_phasor(kTwoPi * freq_hz * total_delay(d, lay, static_cast<int>(n)));
    return col;
}

} // namespace

AnalogArchitecture AnalogArchitecture::ps_only(int ps_bits)
{
    AnalogArchitecture a;
    a.kind = SchemeKind::ps_only;
    a.delay_step_tc.reset();
    a.ps_bits = ps_bits;
    return a;
}

AnalogArchitecture AnalogArchitecture::single_layer(int subarrays, int bits, std::optional<double> delay_step_tc,
                                                    int ps_bits)
{
    AnalogArchitecture a;
    a.kind = SchemeKind::single_layer;
    a.subarrays = subarrays;
    a.single_bits = bits;
    a.delay_step_tc = delay_step_tc;
    a.ps_bits = ps_bits;
    return a;
}

AnalogArchitecture AnalogArchitecture::double_layer(int groups, int per_group, int group_bits, int sub_bits,
                                                    std::optional<double> delay_step_tc, int ps_bits)
{
    AnalogArchitecture a;
    a.kind = SchemeKind::double_layer;
    a.groups = groups;
    a.per_group = per_group;
    a.group_bits = group_bits;
    a.sub_bits = sub_bits;
    a.delay_step_tc = delay_step_tc;
    a.ps_bits = ps_bits;
    return a;
}

int AnalogArchitecture::ps_group_size(int antennas) const
{
    return layout_of(*this, antennas).group_size;
}

int AnalogArchitecture::ps_group_count() const
{
    switch (kind)
    {
    case SchemeKind::ps_only:
        return 1;
    case SchemeKind::single_layer:
        return subarrays;
    case SchemeKind::double_layer:
        return groups * per_group;
    }
    return 1;
}

int AnalogArchitecture::ttds_per_chain() const
{
    switch (kind)
    {
    case SchemeKind::ps_only:
        return 0;
    case SchemeKind::single_layer:
        return subarrays;
    case SchemeKind::double_layer:
        return groups + groups * per_group;
    }
    return 0;
}

int AnalogArchitecture::large_ttds_per_chain() const
{
    switch (kind)
    {
    case SchemeKind::ps_only:
        return 0;
    case SchemeKind::single_layer:
        return subarrays;
    case SchemeKind::double_layer:
        return groups;
    }
    return 0;
}

int AnalogArchitecture::bits_per_chain() const
{
    switch (kind)
    {
    case SchemeKind::ps_only:
        return 0;
    case SchemeKind::single_layer:
        return subarrays * single_bits;
    case SchemeKind::double_layer:
        return groups * group_bits + groups * per_group * sub_bits;
    }
    return 0;
}

void AnalogArchitecture::validate(int antennas) const
{
    auto fail = [](const std::string &what)
    { throw ConfigError("scheme: " + what); };

    if (antennas < 1)
        fail("antenna count must be >= 1");
    if (ps_bits < 0 || ps_bits > kMaxBits)
        fail("ps_bits must lie in [0, 40]");
    if (delay_step_tc && !(*delay_step_tc > 0.0 && std::isfinite(*delay_step_tc)))
        fail("delay step must be positive");
    switch (kind)
    {
    case SchemeKind::ps_only:
        break;
    case SchemeKind::single_layer:
        if (subarrays < 1 || antennas % subarrays != 0)
            fail("U must divide the antenna count");
        if (single_bits < 0 || single_bits > kMaxBits)
            fail("P_s must lie in [0, 40]");
        break;
    case SchemeKind::double_layer:
        if (groups < 1 || per_group < 1 || antennas % (groups * per_group) != 0)
            fail("K_H * K_L must divide the antenna count");
        if (group_bits < 0 || group_bits > kMaxBits || sub_bits < 0 || sub_bits > kMaxBits)
            fail("P_H and P_L must lie in [0, 40]");
        break;
    }
}

std::string AnalogArchitecture::label() const
{
    switch (kind)
    {
    case SchemeKind::ps_only:
        return "ps";
    case SchemeKind::single_layer:
        return "single_ttd(" + std::to_string(subarrays) + ")";
    case SchemeKind::double_layer:
        return "double_ttd(" + std::to_string(groups) + "," + std::to_string(per_group) + ")";
    }
    return "unknown";
}

double wrap_phase(double phase)
{
    double w = std::fmod(phase, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    return w >= kTwoPi ? 0.0 : w;
}

double ps_phase(int n, double theta0, const SystemConfig &cfg)
{
    return kTwoPi * cfg.carrier_hz * (n - 1) * cfg.antenna_delay() * std::sin(theta0);
}

double phase_error(const AnalogArchitecture &arch, int n, double freq_hz, double theta0, const SystemConfig &cfg)
{
    const Layout lay = layout_of(arch, cfg.bs_antennas);
    const int slot = (n - 1) % lay.group_size;
    return kTwoPi * (freq_hz - cfg.carrier_hz) * slot * cfg.antenna_delay() * std::sin(theta0);
}

double split_direction(double theta0, double freq_hz, const SystemConfig &cfg)
{
    const double arg = cfg.carrier_hz / freq_hz * std::sin(theta0);
    if (!(std::abs(arg) <= 1.0))
        throw std::domain_error("split direction undefined: |(f_c / f_m) sin(theta0)| > 1");
    return std::asin(arg);
}

DelayAssignment ideal_delays(const AnalogArchitecture &arch, double theta0, const SystemConfig &cfg)
{
    arch.validate(cfg.bs_antennas);
    const Layout lay = layout_of(arch, cfg.bs_antennas);
    const double unit = cfg.antenna_delay() * std::sin(theta0);
    std::optional<double> step;
    if (arch.delay_step_tc)
        step = *arch.delay_step_tc * cfg.carrier_period();

    DelayAssignment d;
    if (arch.kind == SchemeKind::ps_only)
        return d;

    d.first.resize(lay.subarrays());
    for (int g = 0; g < lay.groups; ++g)
        for (int l = 0; l < lay.per_group; ++l)
            d.first[g * lay.per_group + l] =
                (arch.kind == SchemeKind::single_layer ? g : l) * static_cast<double>(lay.group_size) * unit;

    if (arch.kind == SchemeKind::double_layer)
    {
        d.second.resize(lay.groups);
        for (int g = 0; g < lay.groups; ++g)
            d.second[g] = g * static_cast<double>(lay.per_group) * lay.group_size * unit;
    }

    auto shift = [&](std::vector<double> &layer)
    {
        if (layer.empty())
            return;
        const double offset = layer_offset(*std::min_element(layer.begin(), layer.end()), step);
        for (auto &tau : layer)
            tau = std::max(0.0, tau + offset);
    };
    shift(d.first);
    shift(d.second);
    return d;
}

double quantize_delay(double tau, int bits, double step)
{
    if (!(step > 0.0))
        throw ConfigError("delay step must be positive");
    const double top = std::ldexp(1.0, std::clamp(bits, 0, kMaxBits)) - 1.0;
    if (!(tau > 0.0))
        return 0.0;
    const double lo = std::min(std::floor(tau / step), top);
    const double hi = std::min(lo + 1.0, top);
    return std::abs(tau - hi * step) < std::abs(tau - lo * step) ? hi * step : lo * step;
}

cd quantize_phase(double phase, int bits)
{
    const long long levels = 1LL << std::clamp(bits, 1, 30);
    const double step = kTwoPi / static_cast<double>(levels);
    const double x = wrap_phase(phase) / step;
    long long k = static_cast<long long>(std::floor(x));
    const double frac = x - static_cast<double>(k);
    if (frac > 0.5)
        ++k;
    else if (frac == 0.5 && k == levels - 1)
        k = 0; // tie between the last point and point 0 goes to index 0
    k %= levels;
    return unit_phasor(step * static_cast<double>(k));
}

BitRequirement required_bits(const SystemConfig &cfg, double theta0, int groups, int per_group, int subarrays)
{
    const int N = cfg.bs_antennas;
    if (groups < 1 || per_group < 1 || N % (groups * per_group) != 0)
        throw ConfigError("bits: K_H * K_L must divide the antenna count");
    if (subarrays < 1 || N % subarrays != 0)
        throw ConfigError("bits: U must divide the antenna count");

    BitRequirement out;
    const double s = std::abs(std::sin(theta0));
    if (s < 1e-15)
    {
        out.delay_needed = false;
        out.max_ps_group = N;
        return out;
    }
    const double td = cfg.antenna_delay();
    const double tc = cfg.carrier_period();
    const int P = N / (groups * per_group);
    const int S = N / subarrays;

    auto bits_for = [](double ratio)
    {
        if (!(ratio > 1.0))
            return 0;
        return static_cast<int>(std::ceil(std::log2(ratio)));
    };

    out.max_ps_group = static_cast<int>(std::floor(tc / (td * s)));
    out.first_layer_bits = bits_for((per_group - 1) * P * td * s / tc);
    out.second_layer_bits = bits_for((N - P * per_group) * td * s / tc);
    out.single_layer_bits = bits_for((subarrays - 1) * S * td * s / tc);
    return out;
}

double bit_ratio(int groups, int group_bits, int per_group, int sub_bits, int subarrays, int single_bits)
{
    const double denom = static_cast<double>(subarrays) * single_bits;
    if (!(denom > 0.0))
        throw ConfigError("bit ratio: U * P_s must be positive");
    return (static_cast<double>(groups) * group_bits + static_cast<double>(groups) * per_group * sub_bits) / denom;
}

double dirichlet_sinc(int n, double x)
{
    const double den = std::sin(0.5 * kPi * x);
    if (std::abs(den) < 1e-12)
        return n * std::cos(0.5 * kPi * n * x) / std::cos(0.5 * kPi * x);
    return std::sin(0.5 * kPi * n * x) / den;
}

Eigen::VectorXcd steering_weights(const AnalogArchitecture &arch, double theta0, double freq_hz,
                                  const SystemConfig &cfg)
{
    arch.validate(cfg.bs_antennas);
    const Layout lay = layout_of(arch, cfg.bs_antennas);
    const Eigen::VectorXcd ps = chain_phase_shifters(arch, lay, theta0, cfg);
    const Eigen::VectorXcd col = chain_column(ps, chain_delays(arch, theta0, cfg), lay, freq_hz);
    return col / std::sqrt(static_cast<double>(lay.subarrays()));
}

double gain_closed_form(const AnalogArchitecture &arch, double freq_hz, double theta0, const SystemConfig &cfg)
{
    arch.validate(cfg.bs_antennas);
    const Layout lay = layout_of(arch, cfg.bs_antennas);
    const double zeta = freq_hz / cfg.carrier_hz;
    // 2 d f_c / c is 1 for half-wavelength spacing.
    const double x = (zeta - 1.0) * std::sin(theta0) * 2.0 * cfg.spacing() * cfg.carrier_hz / kSpeedOfLight;
    return lay.subarrays() * std::abs(dirichlet_sinc(lay.group_size, x)) / cfg.bs_antennas;
}

double array_gain(const AnalogArchitecture &arch, double steer, double look, double freq_hz,
                  const SystemConfig &cfg)
{
    const Eigen::VectorXcd w = steering_weights(arch, steer, freq_hz, cfg);
    // a(look, f)^H w, evaluated directly to avoid materializing a.
    const int N = cfg.bs_antennas;
    const double step = kTwoPi * cfg.spacing() * freq_hz / kSpeedOfLight * std::sin(look);
    cd acc{0.0, 0.0};
    for (int n = 0; n < N; ++n)
        acc += unit_phasor(-step * n) * w(n);
    return std::abs(acc) / std::sqrt(static_cast<double>(N));
}

double gain_brute_force(const AnalogArchitecture &arch, double freq_hz, double theta0, const SystemConfig &cfg)
{
    return array_gain(arch, theta0, theta0, freq_hz, cfg);
}

AnalogBeamformer::AnalogBeamformer(AnalogArchitecture arch, int antennas, double carrier_hz,
                                   std::vector<Eigen::VectorXcd> ps, std::vector<DelayAssignment> delays)
    : arch_(std::move(arch)), antennas_(antennas), carrier_hz_(carrier_hz), ps_(std::move(ps)),
      delays_(std::move(delays))
{
    if (ps_.size() != delays_.size())
        throw ConfigError("analog beamformer: phase-shifter and delay chain counts differ");
}

Eigen::MatrixXcd AnalogBeamformer::compose(double freq_hz) const
{
    const Layout lay = layout_of(arch_, antennas_);
    Eigen::MatrixXcd F(antennas_, chains());
    for (int c = 0; c < chains(); ++c)
        F.col(c) = chain_column(ps_[c], delays_[c], lay, freq_hz);
    return F;
}

Eigen::MatrixXcd AnalogBeamformer::ps_matrix() const
{
    const Layout lay = layout_of(arch_, antennas_);
    const int G = lay.subarrays();
    Eigen::MatrixXcd FA = Eigen::MatrixXcd::Zero(antennas_, static_cast<Eigen::Index>(G) * chains());
    for (int c = 0; c < chains(); ++c)
        for (int n = 0; n < antennas_; ++n)
            FA(n, c * G + n / lay.group_size) = ps_[c](n);
    return FA;
}

Eigen::MatrixXcd AnalogBeamformer::first_layer_matrix(double freq_hz) const
{
    const Layout lay = layout_of(arch_, antennas_);
    const int G = lay.subarrays();
    Eigen::MatrixXcd FL = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(G) * chains(),
                                                 static_cast<Eigen::Index>(lay.groups) * chains());
    for (int c = 0; c < chains(); ++c)
        for (int s = 0; s < G; ++s)
        {
            const double tau = delays_[c].first.empty() ? 0.0 : delays_[c].first[s];
            FL(c * G + s, c * lay.groups + s / lay.per_group) = unit_phasor(kTwoPi * freq_hz * tau);
        }
    return FL;
}

Eigen::MatrixXcd AnalogBeamformer::second_layer_matrix(double freq_hz) const
{
    const Layout lay = layout_of(arch_, antennas_);
    Eigen::MatrixXcd FH = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(lay.groups) * chains(), chains());
    for (int c = 0; c < chains(); ++c)
        for (int g = 0; g < lay.groups; ++g)
        {
            const double tau = delays_[c].second.empty() ? 0.0 : delays_[c].second[g];
            FH(c * lay.groups + g, c) = unit_phasor(kTwoPi * freq_hz * tau);
        }
    return FH;
}

AnalogBeamformer AnalogBeamformer::with_chain_delay_offset(int chain, double offset) const
{
    AnalogBeamformer copy = *this;
    auto &d = copy.delays_.at(chain);
    for (auto &tau : d.first)
        tau += offset;
    for (auto &tau : d.second)
        tau += offset;
    return copy;
}

AnalogBeamformer build_analog_beamformer(const AnalogArchitecture &arch, const std::vector<double> &chain_angles,
                                         const SystemConfig &cfg)
{
    arch.validate(cfg.bs_antennas);
    if (static_cast<int>(chain_angles.size()) != cfg.rf_chains)
        throw ConfigError("analog beamformer: expected one steering angle per RF chain");
    const Layout lay = layout_of(arch, cfg.bs_antennas);

    std::vector<Eigen::VectorXcd> ps;
    std::vector<DelayAssignment> delays;
    for (double theta : chain_angles)
    {
        if (!std::isfinite(theta) || std::abs(theta) > 0.5 * kPi + 1e-12)
            throw ConfigError("analog beamformer: steering angle outside [-pi/2, pi/2]");
        ps.push_back(chain_phase_shifters(arch, lay, theta, cfg));
        delays.push_back(chain_delays(arch, theta, cfg));
    }
    return AnalogBeamformer(arch, cfg.bs_antennas, cfg.carrier_hz, std::move(ps), std::move(delays));
}

} // namespace thzris
