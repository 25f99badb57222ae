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

#ifndef THZRIS_SYSTEM_CONFIG_HPP
#define THZRIS_SYSTEM_CONFIG_HPP

#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace thzris
{
using cd = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Invalid user input (configuration, dimensions, ranges). The CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A computation that could not produce a finite result. The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Output files or directories could not be written.
class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

// Carrier, band, array and power parameters of the downlink.
// Defaults are the reference desk-scale configuration (128-antenna BS at 300 GHz, 30 GHz
// band split into 8 subcarriers, 4 RISs of 4x4 elements, 4 users, 10 dBm, -85 dBm noise).
struct SystemConfig
{
    double carrier_hz = 300e9;   // f_c
    double bandwidth_hz = 30e9;  // B
    int subcarriers = 8;         // M
    int bs_antennas = 128;       // N
    int rf_chains = 4;           // N_RF
    int users = 4;               // K
    int ris_count = 4;           // R, 0 means no RIS (direct-link studies)
    int ris_rows = 4;            // M_x
    int ris_cols = 4;            // M_y
    double max_power_w = 0.01;   // P_max
    double noise_power_w = 3.1622776601683794e-12; // sigma^2 per user per subcarrier
    std::optional<double> antenna_spacing_m; // d, defaults to half the carrier wavelength

    int ris_elements() const { return ris_rows * ris_cols; }
    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    double spacing() const { return antenna_spacing_m.value_or(0.5 * wavelength()); }

    // Delay between consecutive antennas (T_d = d / c).
    double antenna_delay() const { return spacing() / kSpeedOfLight; }

    // Carrier period (T_c = 1 / f_c).
    double carrier_period() const { return 1.0 / carrier_hz; }

    // Throws ConfigError naming the first violated field.
    void validate() const;
};

// f_m = f_c + (B/M)(m - 1 - (M-1)/2) for m = 1..M (returned 0-based).
std::vector<double> subcarrier_frequencies(const SystemConfig &cfg);

} // namespace thzris

#endif
