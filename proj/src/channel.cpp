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

#include "thzris/channel.hpp"

#include <algorithm>
#include <cmath>

namespace thzris
{

namespace
{

constexpr double kMinSeparation = 1e-9; // m

cd unit_phasor(double phase)
{
    return {std::cos(phase), std::sin(phase)};
}

void check_finite(const Vec3 &p, const char *what)
{
    if (!p.allFinite())
        throw ConfigError(std::string("scenario: non-finite ") + what + " position");
}

double separation(const Vec3 &a, const Vec3 &b)
{
    const double d = (b - a).norm();
    if (!(d > kMinSeparation))
        throw ConfigError("scenario: coincident nodes, angle undefined");
    return d;
}

cd hop_gain(GainModel model, double dist, const SystemConfig &cfg, Rng &rng)
{
    switch (model)
    {
    case GainModel::unit_gain:
        return {1.0, 0.0};
    case GainModel::free_space:
        return {kSpeedOfLight / (4.0 * kPi * cfg.carrier_hz * dist), 0.0};
    case GainModel::complex_gaussian:
        return complex_normal(rng);
    }
    return {1.0, 0.0};
}

double hop_delay(GainModel model, double dist)
{
    return model == GainModel::unit_gain ? 0.0 : dist / kSpeedOfLight;
}

} // namespace

GainModel parse_gain_model(const std::string &name)
{
    if (name == "unit_gain")
        return GainModel::unit_gain;
    if (name == "free_space")
        return GainModel::free_space;
    if (name == "complex_gaussian")
        return GainModel::complex_gaussian;
    throw ConfigError("unknown gain model '" + name + "'");
}

std::string to_string(GainModel model)
{
    switch (model)
    {
    case GainModel::unit_gain:
        return "unit_gain";
    case GainModel::free_space:
        return "free_space";
    case GainModel::complex_gaussian:
        return "complex_gaussian";
    }
    return "unknown";
}

double ula_departure_angle(const Vec3 &bs, const Vec3 &target)
{
    const double dist = separation(bs, target);
    return std::asin(std::clamp((target.x() - bs.x()) / dist, -1.0, 1.0));
}

RisAngles ris_direction_angles(const Vec3 &ris, const Vec3 &other)
{
    const Vec3 w = (other - ris) / separation(ris, other);
    const double along_rows = w.y();
    const double along_cols = -w.z();
    if (along_cols < -1e-12)
        throw ConfigError("scenario: node lies above the RIS column axis, elevation outside [-pi/2, pi/2]");

    RisAngles out;
    const double v = std::acos(std::clamp(along_cols, 0.0, 1.0));
    out.elevation = along_rows < 0.0 ? -v : v;
    const double sin_v = std::sin(out.elevation);
    if (std::abs(sin_v) < 1e-15)
    {
        out.azimuth = 0.0;
        return out;
    }
    const double u = std::acos(std::clamp(along_rows / sin_v, 0.0, 1.0));
    out.azimuth = w.x() < 0.0 ? -u : u;
    return out;
}

Scenario make_scenario(const Geometry &geometry, const SystemConfig &cfg, const GainSpec &gain)
{
    check_finite(geometry.bs, "BS");
    for (const auto &p : geometry.ris)
        check_finite(p, "RIS");
    for (const auto &p : geometry.users)
        check_finite(p, "user");

    Rng rng(gain.seed);
    Scenario s;
    s.geometry = geometry;
    const int R = static_cast<int>(geometry.ris.size());
    const int K = static_cast<int>(geometry.users.size());

    s.bs_ris.resize(R);
    for (int r = 0; r < R; ++r)
    {
        const double dist = separation(geometry.bs, geometry.ris[r]);
        BsRisPath path;
        path.gain = hop_gain(gain.model, dist, cfg, rng);
        path.delay = hop_delay(gain.model, dist);
        path.departure = ula_departure_angle(geometry.bs, geometry.ris[r]);
        const RisAngles arrival = ris_direction_angles(geometry.ris[r], geometry.bs);
        path.arrival_azimuth = arrival.azimuth;
        path.arrival_elevation = arrival.elevation;
        s.bs_ris[r].push_back(path);
    }

    s.ris_user.resize(static_cast<std::size_t>(R) * K);
    for (int r = 0; r < R; ++r)
        for (int k = 0; k < K; ++k)
        {
            const double dist = separation(geometry.ris[r], geometry.users[k]);
            RisUserPath path;
            path.gain = hop_gain(gain.model, dist, cfg, rng);
            path.delay = hop_delay(gain.model, dist);
            const RisAngles departure = ris_direction_angles(geometry.ris[r], geometry.users[k]);
            path.azimuth = departure.azimuth;
            path.elevation = departure.elevation;
            s.ris_user[static_cast<std::size_t>(r) * K + k].push_back(path);
        }

    if (R == 0)
    {
        s.direct.resize(K);
        for (int k = 0; k < K; ++k)
        {
            const double dist = separation(geometry.bs, geometry.users[k]);
            DirectPath path;
            path.gain = hop_gain(gain.model, dist, cfg, rng);
            path.delay = hop_delay(gain.model, dist);
            path.departure = ula_departure_angle(geometry.bs, geometry.users[k]);
            s.direct[k].push_back(path);
        }
    }
    return s;
}

Vec3 uniform_disk_point(const Vec3 &centre, double radius, Rng &rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double rho = radius * std::sqrt(unit(rng));
    const double phi = kTwoPi * unit(rng);
    return centre + Vec3(rho * std::cos(phi), rho * std::sin(phi), 0.0);
}

Geometry reference_geometry(int users, Rng &rng)
{
    Geometry g;
    g.bs = Vec3(50.0, 0.0, 3.0);
    g.ris = {Vec3(0.0, 80.0, 6.0), Vec3(0.0, 80.0, 8.0), Vec3(0.0, 85.0, 6.0), Vec3(0.0, 85.0, 8.0)};
    for (int k = 0; k < users; ++k)
        g.users.push_back(uniform_disk_point(Vec3(0.0, 85.0, 0.0), 1.0, rng));
    return g;
}

ChannelSet::ChannelSet(int ris_count, int subcarriers, int users, int ris_elements, int antennas, bool with_direct)
    : ris_count_(ris_count), subcarriers_(subcarriers), users_(users), ris_elements_(ris_elements),
      antennas_(antennas)
{
    g_.assign(static_cast<std::size_t>(ris_count) * subcarriers, Eigen::MatrixXcd::Zero(ris_elements, antennas));
    f_.assign(static_cast<std::size_t>(ris_count) * subcarriers * users, Eigen::RowVectorXcd::Zero(ris_elements));
    if (with_direct)
        direct_.assign(static_cast<std::size_t>(subcarriers) * users, Eigen::RowVectorXcd::Zero(antennas));
}

bool ChannelSet::operator==(const ChannelSet &other) const
{
    if (ris_count_ != other.ris_count_ || subcarriers_ != other.subcarriers_ || users_ != other.users_ ||
        ris_elements_ != other.ris_elements_ || antennas_ != other.antennas_ ||
        direct_.size() != other.direct_.size())
        return false;
    auto same = [](const auto &a, const auto &b)
    {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i].array() == b[i].array()).all())
                return false;
        return true;
    };
    return same(g_, other.g_) && same(f_, other.f_) && same(direct_, other.direct_);
}

Eigen::VectorXcd ula_response(double theta, double freq_hz, int antennas, const SystemConfig &cfg)
{
    const double step = kTwoPi * cfg.spacing() * freq_hz / kSpeedOfLight * std::sin(theta);
    const double amp = 1.0 / std::sqrt(static_cast<double>(antennas));
    Eigen::VectorXcd a(antennas);
    for (int n = 0; n < antennas; ++n)
        a(n) = amp * unit_phasor(step * n);
    return a;
}

Eigen::VectorXcd upa_response(double u, double v, double freq_hz, int rows, int cols, const SystemConfig &cfg)
{
    const double k = kTwoPi * cfg.spacing() * freq_hz / kSpeedOfLight;
    const double row_step = k * std::cos(u) * std::sin(v);
    const double col_step = k * std::cos(v);
    const double amp = 1.0 / std::sqrt(static_cast<double>(rows) * cols);
    Eigen::VectorXcd b(rows * cols);
    for (int mx = 0; mx < rows; ++mx)
        for (int my = 0; my < cols; ++my)
            b(mx * cols + my) = amp * unit_phasor(row_step * mx + col_step * my);
    return b;
}

ChannelSet generate_channels(const Scenario &scenario, const SystemConfig &cfg)
{
    cfg.validate();
    const int R = scenario.ris_count();
    const int K = scenario.user_count();
    const int M = cfg.subcarriers;
    const int N = cfg.bs_antennas;
    const int n_ris = cfg.ris_elements();
    if (R != cfg.ris_count)
        throw ConfigError("scenario: RIS count differs from system configuration");
    if (K != cfg.users)
        throw ConfigError("scenario: user count differs from system configuration");

    const auto freqs = subcarrier_frequencies(cfg);
    ChannelSet ch(R, M, K, n_ris, N, R == 0);

    for (int r = 0; r < R; ++r)
        for (int m = 0; m < M; ++m)
        {
            auto &G = ch.bs_ris(r, m);
            for (const auto &p : scenario.bs_ris[r])
            {
                const cd coeff = p.gain * unit_phasor(-kTwoPi * p.delay * freqs[m]);
                const Eigen::VectorXcd b =
                    upa_response(p.arrival_azimuth, p.arrival_elevation, freqs[m], cfg.ris_rows, cfg.ris_cols, cfg);
                const Eigen::VectorXcd a = ula_response(p.departure, freqs[m], N, cfg);
                G.noalias() += coeff * b * a.adjoint();
            }
            for (int k = 0; k < K; ++k)
            {
                auto &f = ch.ris_user(r, m, k);
                for (const auto &p : scenario.ris_user[static_cast<std::size_t>(r) * K + k])
                {
                    const cd coeff = p.gain * unit_phasor(-kTwoPi * p.delay * freqs[m]);
                    f += coeff * upa_response(p.azimuth, p.elevation, freqs[m], cfg.ris_rows, cfg.ris_cols, cfg)
                                     .transpose();
                }
            }
        }

    if (R == 0)
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                for (const auto &p : scenario.direct.at(k))
                    ch.direct(m, k) += los_channel_single(p.departure, p.gain, p.delay, freqs[m], N, cfg);
    return ch;
}

ChannelSet generate_channels(const Geometry &geometry, const SystemConfig &cfg, const GainSpec &gain)
{
    return generate_channels(make_scenario(geometry, cfg, gain), cfg);
}

EffectiveChannels effective_channel(const ChannelSet &channels, const ReflectionConfig &theta)
{
    const int R = channels.ris_count();
    const int n_ris = channels.ris_elements();
    if (theta.ris_count() != R || theta.elements_per_ris() != n_ris)
        throw ConfigError("reflection configuration dimension does not match the channel set");

    const int M = channels.subcarriers();
    const int K = channels.users();
    EffectiveChannels h(M, K, Eigen::RowVectorXcd::Zero(channels.antennas()));
    Eigen::RowVectorXcd weighted(n_ris);
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
        {
            auto &row = h(m, k);
            if (channels.has_direct())
                row = channels.direct(m, k);
            for (int r = 0; r < R; ++r)
            {
                const auto &f = channels.ris_user(r, m, k);
                for (int e = 0; e < n_ris; ++e)
                    weighted(e) = f(e) * theta.coefficient(r, e);
                row.noalias() += weighted * channels.bs_ris(r, m);
            }
        }
    return h;
}

Eigen::RowVectorXcd los_channel_single(double theta0, cd alpha, double tau, double freq_hz, int antennas,
                                       const SystemConfig &cfg)
{
    const cd coeff = alpha * unit_phasor(-kTwoPi * tau * freq_hz);
    return coeff * ula_response(theta0, freq_hz, antennas, cfg).adjoint();
}

ChannelSet apply_csi_error(const ChannelSet &channels, double delta, std::uint64_t seed)
{
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw ConfigError("CSI error ratio delta must be a finite non-negative number");
    ChannelSet out = channels;
    if (delta == 0.0)
        return out;

    Rng rng(seed);
    const double scale = std::sqrt(delta);
    auto perturb = [&](cd &h)
    { h += scale * std::abs(h) * complex_normal(rng); };

    for (int r = 0; r < out.ris_count(); ++r)
        for (int m = 0; m < out.subcarriers(); ++m)
        {
            auto &G = out.bs_ris(r, m);
            for (Eigen::Index j = 0; j < G.cols(); ++j)
                for (Eigen::Index i = 0; i < G.rows(); ++i)
                    perturb(G(i, j));
        }
    for (int r = 0; r < out.ris_count(); ++r)
        for (int m = 0; m < out.subcarriers(); ++m)
            for (int k = 0; k < out.users(); ++k)
            {
                auto &f = out.ris_user(r, m, k);
                for (Eigen::Index i = 0; i < f.size(); ++i)
                    perturb(f(i));
            }
    if (out.has_direct())
        for (int m = 0; m < out.subcarriers(); ++m)
            for (int k = 0; k < out.users(); ++k)
            {
                auto &h = out.direct(m, k);
                for (Eigen::Index i = 0; i < h.size(); ++i)
                    perturb(h(i));
            }
    return out;
}

} // namespace thzris
