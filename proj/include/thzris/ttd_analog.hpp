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

#ifndef THZRIS_TTD_ANALOG_HPP
#define THZRIS_TTD_ANALOG_HPP

#include "thzris/system_config.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace thzris
{

enum class SchemeKind
{
    ps_only,      // every antenna behind a frequency-flat phase shifter
    single_layer, // U parallel TTDs, each feeding S = N/U phase shifters
    double_layer  // K_H large-range TTDs, each feeding K_L small-range TTDs of P = N/(K_H K_L) antennas
};

// Analog front end of one RF chain.
//
// Antenna n (0-based) of a double-layer chain belongs to second-layer TTD
// k_h = n / (K_L P), first-layer TTD k_l = (n / P) % K_L and phase-shifter slot p = n % P.
// The single-layer scheme uses the same layout with K_H = U, K_L = 1.
struct AnalogArchitecture
{
    SchemeKind kind = SchemeKind::double_layer;
    int subarrays = 0;     // U (single layer)
    int single_bits = 0;   // P_s
    int groups = 0;        // K_H (double layer)
    int per_group = 0;     // K_L
    int group_bits = 0;    // P_H, second-layer TTD bits
    int sub_bits = 0;      // P_L, first-layer TTD bits
    std::optional<double> delay_step_tc = 1.0; // D / T_c; empty means continuous delays
    int ps_bits = 0;       // b; 0 means infinite resolution

    static AnalogArchitecture ps_only(int ps_bits = 0);
    static AnalogArchitecture single_layer(int subarrays, int bits, std::optional<double> delay_step_tc = 1.0,
                                           int ps_bits = 0);
    static AnalogArchitecture double_layer(int groups, int per_group, int group_bits, int sub_bits,
                                           std::optional<double> delay_step_tc = 1.0, int ps_bits = 0);

    // Antennas behind one first-layer (or single-layer) TTD: P, S, or N for PS-only.
    int ps_group_size(int antennas) const;
    // Number of PS subarrays per chain: K_H K_L, U, or 1.
    int ps_group_count() const;
    // Number of TTDs per RF chain: K_H + K_H K_L, U, or 0.
    int ttds_per_chain() const;
    // Large-range TTDs per RF chain: K_H, U, or 0.
    int large_ttds_per_chain() const;
    // Configuration bits per RF chain.
    int bits_per_chain() const;

    bool continuous_delays() const { return !delay_step_tc.has_value(); }

    // Throws ConfigError on divisibility or range violations.
    void validate(int antennas) const;

    // Short stable label, e.g. "double_ttd(8,4)".
    std::string label() const;
};

// Per-chain TTD settings. `first` holds one delay per PS subarray (k_h * K_L + k_l for the
// double layer, u for the single layer); `second` holds the K_H second-layer delays.
struct DelayAssignment
{
    std::vector<double> first;
    std::vector<double> second;
};

double wrap_phase(double phase);

// Psi_c = 2 pi f_c (n - 1) T_d sin(theta0) for 1-based antenna index n.
double ps_phase(int n, double theta0, const SystemConfig &cfg);

// Difference between the ideal per-antenna phase at f_m and the phase the scheme produces,
// for 1-based antenna index n and unquantized ideal delays.
double phase_error(const AnalogArchitecture &arch, int n, double freq_hz, double theta0, const SystemConfig &cfg);

// Beam direction arcsin((f_c / f_m) sin(theta0)) of a PS-only array at f_m.
// Throws std::domain_error if the argument leaves [-1, 1].
double split_direction(double theta0, double freq_hz, const SystemConfig &cfg);

// Ideal TTD delays for steering towards theta0. For sin(theta0) < 0 each layer receives a
// constant offset (the magnitude of its most negative delay, rounded up to a grid point when
// the delays are quantized) so that every delay is non-negative.
DelayAssignment ideal_delays(const AnalogArchitecture &arch, double theta0, const SystemConfig &cfg);

// Nearest point of {0, D, ..., (2^bits - 1) D}; exact midpoints go to the smaller point.
double quantize_delay(double tau, int bits, double step);

// Nearest point of the 2^bits-point phase grid (chordal distance, ties to the lower index).
// Returns the unit-modulus phasor.
cd quantize_phase(double phase, int bits);

struct BitRequirement
{
    bool delay_needed = true; // false when sin(theta0) == 0
    int max_ps_group = 0;     // floor(T_c / (T_d |sin theta0|))
    int first_layer_bits = 0; // P_L
    int second_layer_bits = 0; // P_H
    int single_layer_bits = 0; // P_s
};

// Minimum TTD bits for delay step D = T_c. P = N / (K_H K_L) and S = N / U.
BitRequirement required_bits(const SystemConfig &cfg, double theta0, int groups, int per_group, int subarrays);

// (K_H P_H + K_H K_L P_L) / (U P_s).
double bit_ratio(int groups, int group_bits, int per_group, int sub_bits, int subarrays, int single_bits);

// sin(pi n x / 2) / sin(pi x / 2), with the removable singularity evaluated as its limit.
double dirichlet_sinc(int n, double x);

// Unit-norm per-antenna weights of a single chain steered to theta0, evaluated at f_m.
// Uses ideal delays, or quantized ones when the architecture says so.
Eigen::VectorXcd steering_weights(const AnalogArchitecture &arch, double theta0, double freq_hz,
                                  const SystemConfig &cfg);

// Normalized array gain from the Dirichlet-sinc closed form (unquantized schemes).
double gain_closed_form(const AnalogArchitecture &arch, double freq_hz, double theta0, const SystemConfig &cfg);

// |a(look, f_m)^H w| with w = steering_weights(arch, steer, f_m).
double array_gain(const AnalogArchitecture &arch, double steer, double look, double freq_hz,
                  const SystemConfig &cfg);

// array_gain at the design direction.
double gain_brute_force(const AnalogArchitecture &arch, double freq_hz, double theta0, const SystemConfig &cfg);

// Multi-chain analog beamformer F = F_A F_L F_H under the fully-connected reading: every RF
// chain owns a complete TTD network spanning all N antennas and chain outputs add up at each
// antenna. Immutable after construction.
class AnalogBeamformer
{
public:
    AnalogBeamformer(AnalogArchitecture arch, int antennas, double carrier_hz, std::vector<Eigen::VectorXcd> ps,
                     std::vector<DelayAssignment> delays);

    const AnalogArchitecture &architecture() const { return arch_; }
    int antennas() const { return antennas_; }
    int chains() const { return static_cast<int>(ps_.size()); }

    // Per-chain phase-shifter weights (N entries of modulus 1/sqrt(group size)).
    const Eigen::VectorXcd &phase_shifters(int chain) const { return ps_.at(chain); }
    const DelayAssignment &delays(int chain) const { return delays_.at(chain); }

    // N x N_RF analog matrix at frequency f_m.
    Eigen::MatrixXcd compose(double freq_hz) const;

    // Factor matrices. F_A is N x (groups N_RF), F_L is (groups N_RF) x (K_H N_RF) and F_H is
    // (K_H N_RF) x N_RF, where groups = PS subarrays per chain. For the single-layer scheme
    // F_L is the diagonal TTD stage and F_H is the all-ones combiner; for PS-only both are
    // trivial combiners.
    Eigen::MatrixXcd ps_matrix() const;
    Eigen::MatrixXcd first_layer_matrix(double freq_hz) const;
    Eigen::MatrixXcd second_layer_matrix(double freq_hz) const;

    // Copy with a constant delay added to every TTD of one chain.
    AnalogBeamformer with_chain_delay_offset(int chain, double offset) const;

private:
    AnalogArchitecture arch_;
    int antennas_;
    double carrier_hz_;
    std::vector<Eigen::VectorXcd> ps_;
    std::vector<DelayAssignment> delays_;
};

// Builds one chain per steering angle (one per RIS). Delays follow the ideal TTD design and are
// then quantized; phase-shifter weights compensate the in-subarray phase at f_c and are snapped
// to the b-bit grid when b > 0.
AnalogBeamformer build_analog_beamformer(const AnalogArchitecture &arch, const std::vector<double> &chain_angles,
                                         const SystemConfig &cfg);

} // namespace thzris

#endif
