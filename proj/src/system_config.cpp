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

#include "thzris/system_config.hpp"

#include <cmath>

namespace thzris
{

double dbm_to_watt(double dbm)
{
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

double watt_to_dbm(double watt)
{
    return 10.0 * std::log10(watt * 1e3);
}

void SystemConfig::validate() const
{
    auto fail = [](const std::string &what)
    { throw ConfigError("system: " + what); };

    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
        fail("carrier frequency must be positive");
    if (!(bandwidth_hz >= 0.0) || !(bandwidth_hz < 2.0 * carrier_hz))
        fail("bandwidth must lie in [0, 2 f_c)");
    if (subcarriers < 1)
        fail("subcarrier count must be >= 1");
    if (bs_antennas < 1)
        fail("BS antenna count must be >= 1");
    if (rf_chains < 1)
        fail("RF chain count must be >= 1");
    if (users < 0)
        fail("user count must be >= 0");
    if (ris_count < 0)
        fail("RIS count must be >= 0");
    if (ris_count > 0 && rf_chains != ris_count)
        fail("RF chain count must equal the RIS count");
    if (ris_rows < 1 || ris_cols < 1)
        fail("RIS grid dimensions must be >= 1");
    if (!(max_power_w > 0.0))
        fail("maximum transmit power must be positive");
    if (!(noise_power_w > 0.0))
        fail("noise power must be positive");
    if (antenna_spacing_m && !(*antenna_spacing_m > 0.0))
        fail("antenna spacing must be positive");
}

std::vector<double> subcarrier_frequencies(const SystemConfig &cfg)
{
    const int M = cfg.subcarriers;
    const double step = cfg.bandwidth_hz / M;
    std::vector<double> f(M);
    for (int m = 0; m < M; ++m)
        f[m] = cfg.carrier_hz + step * (m - 0.5 * (M - 1));
    return f;
}

} // namespace thzris
