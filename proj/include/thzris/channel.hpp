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

#ifndef THZRIS_CHANNEL_HPP
#define THZRIS_CHANNEL_HPP

#include "thzris/grid.hpp"
#include "thzris/random.hpp"
#include "thzris/reflection.hpp"
#include "thzris/system_config.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace thzris
{

using Vec3 = Eigen::Vector3d;

// Geometry conventions
// - The BS ULA lies along the x-axis. The departure angle theta of a BS path satisfies
//   sin(theta) = (target - bs).x / |target - bs|, so theta is in [-pi/2, pi/2].
// - Each RIS lies in the y-z plane. Element (row, col) sits at d * (row * y_hat - col * z_hat),
//   i.e. rows run along +y and columns run downwards. A direction w (unit vector from the RIS
//   towards the other node) maps onto the response angles through
//       cos(u) sin(v) = w.y,    cos(v) = -w.z,
//   with sign(v) = sign(w.y) and sign(u) = sign(w.x). Nodes above the RIS (w.z > 0) cannot be
//   represented with u, v in [-pi/2, pi/2] and are rejected.

enum class GainModel
{
    unit_gain,       // |alpha| = 1, zero path delay
    free_space,      // alpha = c / (4 pi f_c dist), delay = dist / c
    complex_gaussian // alpha ~ CN(0, 1), delay = dist / c
};

struct GainSpec
{
    GainModel model = GainModel::free_space;
    std::uint64_t seed = 0; // only used by complex_gaussian
};

GainModel parse_gain_model(const std::string &name);
std::string to_string(GainModel model);

// One propagation path of the BS -> RIS hop.
struct BsRisPath
{
    cd gain{1.0, 0.0};
    double delay = 0.0;           // s
    double departure = 0.0;       // theta at the BS, rad
    double arrival_azimuth = 0.0; // u at the RIS, rad
    double arrival_elevation = 0.0; // v at the RIS, rad
};

// One propagation path of the RIS -> user hop.
struct RisUserPath
{
    cd gain{1.0, 0.0};
    double delay = 0.0;
    double azimuth = 0.0;   // u
    double elevation = 0.0; // v
};

// One propagation path of a direct BS -> user link (only used when the scenario has no RIS).
struct DirectPath
{
    cd gain{1.0, 0.0};
    double delay = 0.0;
    double departure = 0.0;
};

struct Geometry
{
    Vec3 bs = Vec3(50.0, 0.0, 3.0);
    std::vector<Vec3> ris;
    std::vector<Vec3> users;
};

// Positions plus the per-hop path lists derived from them. The LoS path is always first;
// further paths may be appended by callers to model L1, L2 > 1.
struct Scenario
{
    Geometry geometry;
    std::vector<std::vector<BsRisPath>> bs_ris;     // [r][l1]
    std::vector<std::vector<RisUserPath>> ris_user; // [r * K + k][l2]
    std::vector<std::vector<DirectPath>> direct;    // [k][l], empty unless R == 0

    int ris_count() const { return static_cast<int>(geometry.ris.size()); }
    int user_count() const { return static_cast<int>(geometry.users.size()); }

    // LoS departure angle from the BS towards RIS r.
    double ris_departure(int r) const { return bs_ris.at(r).front().departure; }
    // LoS departure angle from the BS towards user k (direct-link scenarios).
    double user_departure(int k) const { return direct.at(k).front().departure; }
};

struct RisAngles
{
    double azimuth = 0.0;
    double elevation = 0.0;
};

double ula_departure_angle(const Vec3 &bs, const Vec3 &target);
RisAngles ris_direction_angles(const Vec3 &ris, const Vec3 &other);

// Derives angles, gains and delays. Rejects non-finite or coincident positions.
Scenario make_scenario(const Geometry &geometry, const SystemConfig &cfg, const GainSpec &gain);

// The reference layout: BS at (50, 0, 3), RISs at (0,80,6), (0,80,8), (0,85,6), (0,85,8)
// and `users` users placed uniformly on the unit disk centred at (0, 85, 0) in the z = 0 plane.
Geometry reference_geometry(int users, Rng &rng);
Vec3 uniform_disk_point(const Vec3 &centre, double radius, Rng &rng);

// Wideband channel tensors. G(r, m) is N_RIS x N, f(r, m, k) is 1 x N_RIS and the optional
// direct(m, k) is 1 x N.
class ChannelSet
{
public:
    ChannelSet() = default;
    ChannelSet(int ris_count, int subcarriers, int users, int ris_elements, int antennas, bool with_direct = false);

    int ris_count() const { return ris_count_; }
    int subcarriers() const { return subcarriers_; }
    int users() const { return users_; }
    int ris_elements() const { return ris_elements_; }
    int antennas() const { return antennas_; }
    bool has_direct() const { return !direct_.empty(); }

    Eigen::MatrixXcd &bs_ris(int r, int m) { return g_.at(static_cast<std::size_t>(r) * subcarriers_ + m); }
    const Eigen::MatrixXcd &bs_ris(int r, int m) const { return g_.at(static_cast<std::size_t>(r) * subcarriers_ + m); }

    Eigen::RowVectorXcd &ris_user(int r, int m, int k) { return f_.at(f_index(r, m, k)); }
    const Eigen::RowVectorXcd &ris_user(int r, int m, int k) const { return f_.at(f_index(r, m, k)); }

    Eigen::RowVectorXcd &direct(int m, int k) { return direct_.at(static_cast<std::size_t>(m) * users_ + k); }
    const Eigen::RowVectorXcd &direct(int m, int k) const { return direct_.at(static_cast<std::size_t>(m) * users_ + k); }

    bool operator==(const ChannelSet &other) const;

private:
    std::size_t f_index(int r, int m, int k) const
    {
        return (static_cast<std::size_t>(r) * subcarriers_ + m) * users_ + k;
    }

    int ris_count_ = 0;
    int subcarriers_ = 0;
    int users_ = 0;
    int ris_elements_ = 0;
    int antennas_ = 0;
    std::vector<Eigen::MatrixXcd> g_;
    std::vector<Eigen::RowVectorXcd> f_;
    std::vector<Eigen::RowVectorXcd> direct_;
};

using EffectiveChannels = UserGrid<Eigen::RowVectorXcd>;

// ULA response a(theta, f): entry n = exp(j 2 pi d (f/c) n sin(theta)) / sqrt(N).
Eigen::VectorXcd ula_response(double theta, double freq_hz, int antennas, const SystemConfig &cfg);

// UPA response b(u, v, f): entry (row, col) at index row * cols + col carries phase
// 2 pi d (f/c) (row cos(u) sin(v) + col cos(v)) and amplitude 1/sqrt(rows * cols).
Eigen::VectorXcd upa_response(double u, double v, double freq_hz, int rows, int cols, const SystemConfig &cfg);

ChannelSet generate_channels(const Scenario &scenario, const SystemConfig &cfg);
ChannelSet generate_channels(const Geometry &geometry, const SystemConfig &cfg, const GainSpec &gain);

// h(m, k) = direct(m, k) + sum_r f(r, m, k) Phi_r G(r, m).
EffectiveChannels effective_channel(const ChannelSet &channels, const ReflectionConfig &theta);

// Single-RF-chain LoS channel alpha exp(-j 2 pi tau f_m) a(theta0, f_m)^H.
Eigen::RowVectorXcd los_channel_single(double theta0, cd alpha, double tau, double freq_hz, int antennas,
                                       const SystemConfig &cfg);

// Entrywise CSI perturbation h + e with e ~ CN(0, delta |h|^2). delta == 0 returns the input.
// All draws come from a single stream seeded by `seed`, in a fixed order, so a given seed
// produces the same unit-variance error pattern for every delta.
ChannelSet apply_csi_error(const ChannelSet &channels, double delta, std::uint64_t seed);

} // namespace thzris

#endif
