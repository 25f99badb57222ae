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

#include "thzris/thzris.h"

#include "thzris/experiments.hpp"
#include "thzris/orchestrator.hpp"
#include "thzris/ttd_analog.hpp"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

using namespace thzris;

struct thz_system
{
    SystemConfig cfg;
};

struct thz_arch
{
    AnalogArchitecture arch;
};

struct thz_experiment
{
    ExperimentSpec spec;
    std::string last_csv;
};

namespace
{

thread_local std::string g_last_error;

thz_status fail(thz_status code, const std::string &msg)
{
    g_last_error = msg;
    return code;
}

template <class Fn>
thz_status guarded(Fn &&fn)
{
    try
    {
        g_last_error.clear();
        fn();
        return THZ_OK;
    }
    catch (const ConfigError &e)
    {
        return fail(THZ_ERR_CONFIG, e.what());
    }
    catch (const NumericalError &e)
    {
        return fail(THZ_ERR_NUMERIC, e.what());
    }
    catch (const std::domain_error &e)
    {
        return fail(THZ_ERR_NUMERIC, e.what());
    }
    catch (const std::bad_alloc &)
    {
        return fail(THZ_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return fail(THZ_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return fail(THZ_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char *what)
{
    if (!ok)
        throw ConfigError(what);
}

int as_int(double value, const std::string &key)
{
    if (!std::isfinite(value) || value != std::floor(value) || std::abs(value) > 1e9)
        throw ConfigError(key + " must be an integer");
    return static_cast<int>(value);
}

thz_status copy_out(const std::string &text, char *buf, size_t len)
{
    if (!buf || len <= text.size())
        return fail(THZ_ERR_CONFIG, "output buffer too small");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return THZ_OK;
}

} // namespace

extern "C" {

THZ_API const char *thz_version(void)
{
    static const std::string v = library_version();
    return v.c_str();
}

THZ_API const char *thz_last_error(void)
{
    return g_last_error.c_str();
}

THZ_API thz_status thz_system_create(thz_system **out)
{
    return guarded(
        [&]
        {
            require(out != nullptr, "out must not be null");
            *out = new thz_system{};
        });
}

THZ_API thz_status thz_system_load(const char *path, thz_system **out)
{
    return guarded(
        [&]
        {
            require(path && out, "arguments must not be null");
            *out = new thz_system{system_from_ini(load_ini(path))};
        });
}

THZ_API void thz_system_destroy(thz_system *sys)
{
    delete sys;
}

THZ_API thz_status thz_system_set(thz_system *sys, const char *key, double value)
{
    return guarded(
        [&]
        {
            require(sys && key, "system and key must not be null");
            SystemConfig c = sys->cfg;
            const std::string k = key;
            if (k == "f_c")
                c.carrier_hz = value;
            else if (k == "B")
                c.bandwidth_hz = value;
            else if (k == "M")
                c.subcarriers = as_int(value, k);
            else if (k == "N")
                c.bs_antennas = as_int(value, k);
            else if (k == "N_RF")
                c.rf_chains = as_int(value, k);
            else if (k == "K")
                c.users = as_int(value, k);
            else if (k == "R")
                c.ris_count = as_int(value, k);
            else if (k == "M_x")
                c.ris_rows = as_int(value, k);
            else if (k == "M_y")
                c.ris_cols = as_int(value, k);
            else if (k == "P_max_dBm")
                c.max_power_w = dbm_to_watt(value);
            else if (k == "P_max_W")
                c.max_power_w = value;
            else if (k == "sigma2_dBm")
                c.noise_power_w = dbm_to_watt(value);
            else if (k == "sigma2_W")
                c.noise_power_w = value;
            else if (k == "d_spacing")
                c.antenna_spacing_m = value;
            else
                throw ConfigError("unknown system key '" + k + "'");
            c.validate();
            sys->cfg = c;
        });
}

THZ_API thz_status thz_system_get(const thz_system *sys, const char *key, double *value)
{
    return guarded(
        [&]
        {
            require(sys && key && value, "arguments must not be null");
            const SystemConfig &c = sys->cfg;
            const std::string k = key;
            if (k == "f_c")
                *value = c.carrier_hz;
            else if (k == "B")
                *value = c.bandwidth_hz;
            else if (k == "M")
                *value = c.subcarriers;
            else if (k == "N")
                *value = c.bs_antennas;
            else if (k == "N_RF")
                *value = c.rf_chains;
            else if (k == "K")
                *value = c.users;
            else if (k == "R")
                *value = c.ris_count;
            else if (k == "M_x")
                *value = c.ris_rows;
            else if (k == "M_y")
                *value = c.ris_cols;
            else if (k == "P_max_dBm")
                *value = watt_to_dbm(c.max_power_w);
            else if (k == "P_max_W")
                *value = c.max_power_w;
            else if (k == "sigma2_dBm")
                *value = watt_to_dbm(c.noise_power_w);
            else if (k == "sigma2_W")
                *value = c.noise_power_w;
            else if (k == "d_spacing")
                *value = c.spacing();
            else
                throw ConfigError("unknown system key '" + k + "'");
        });
}

THZ_API thz_status thz_arch_create(const char *descriptor, thz_arch **out)
{
    return guarded(
        [&]
        {
            require(descriptor && out, "arguments must not be null");
            *out = new thz_arch{parse_architecture(descriptor)};
        });
}

THZ_API void thz_arch_destroy(thz_arch *arch)
{
    delete arch;
}

THZ_API thz_status thz_arch_label(const thz_arch *arch, char *buf, size_t len)
{
    if (!arch)
        return fail(THZ_ERR_CONFIG, "architecture must not be null");
    return copy_out(arch->arch.label(), buf, len);
}

THZ_API thz_status thz_gain(const thz_system *sys, const thz_arch *arch, double theta0, double freq_hz,
                            double *gain)
{
    return guarded(
        [&]
        {
            require(sys && arch && gain, "arguments must not be null");
            require(std::isfinite(theta0) && std::abs(theta0) <= 0.5 * kPi, "theta0 must lie in [-pi/2, pi/2]");
            require(freq_hz > 0.0 && std::isfinite(freq_hz), "frequency must be positive");
            *gain = gain_brute_force(arch->arch, freq_hz, theta0, sys->cfg);
        });
}

THZ_API thz_status thz_gain_closed_form(const thz_system *sys, const thz_arch *arch, double theta0,
                                        double freq_hz, double *gain)
{
    return guarded(
        [&]
        {
            require(sys && arch && gain, "arguments must not be null");
            require(freq_hz > 0.0 && std::isfinite(freq_hz), "frequency must be positive");
            *gain = gain_closed_form(arch->arch, freq_hz, theta0, sys->cfg);
        });
}

THZ_API thz_status thz_split_direction(const thz_system *sys, double theta0, double freq_hz, double *theta)
{
    return guarded(
        [&]
        {
            require(sys && theta, "arguments must not be null");
            require(freq_hz > 0.0 && std::isfinite(freq_hz), "frequency must be positive");
            *theta = split_direction(theta0, freq_hz, sys->cfg);
        });
}

THZ_API thz_status thz_required_bits(const thz_system *sys, double theta0, int K_H, int K_L, int U,
                                     thz_bits *out)
{
    return guarded(
        [&]
        {
            require(sys && out, "arguments must not be null");
            const BitRequirement b = required_bits(sys->cfg, theta0, K_H, K_L, U);
            out->delay_needed = b.delay_needed ? 1 : 0;
            out->max_ps_group = b.max_ps_group;
            out->first_layer_bits = b.first_layer_bits;
            out->second_layer_bits = b.second_layer_bits;
            out->single_layer_bits = b.single_layer_bits;
        });
}

THZ_API thz_status thz_bit_ratio(int K_H, int P_H, int K_L, int P_L, int U, int P_s, double *eta)
{
    return guarded(
        [&]
        {
            require(eta != nullptr, "eta must not be null");
            *eta = bit_ratio(K_H, P_H, K_L, P_L, U, P_s);
        });
}

THZ_API thz_status thz_hardware_report(const thz_system *sys, const thz_arch *arch, thz_hardware *out)
{
    return guarded(
        [&]
        {
            require(sys && arch && out, "arguments must not be null");
            const HardwareReport hw = hardware_report(sys->cfg, arch->arch);
            *out = thz_hardware{};
            out->large_ttds = hw.large_ttds;
            out->total_ttds = hw.total_ttds;
            out->total_bits = hw.total_bits;
            out->layers = static_cast<int>(hw.delay_ranges.size());
            for (std::size_t i = 0; i < hw.delay_ranges.size() && i < 2; ++i)
                out->max_delay_tc[i] = hw.delay_ranges[i].max_tc;
        });
}

THZ_API thz_status thz_experiment_load(const char *path, thz_experiment **out)
{
    return guarded(
        [&]
        {
            require(path && out, "arguments must not be null");
            *out = new thz_experiment{load_experiment(path), {}};
        });
}

THZ_API void thz_experiment_destroy(thz_experiment *exp)
{
    delete exp;
}

THZ_API thz_status thz_experiment_set_seed(thz_experiment *exp, uint64_t seed)
{
    return guarded(
        [&]
        {
            require(exp != nullptr, "experiment must not be null");
            exp->spec.seed = seed;
        });
}

THZ_API thz_status thz_experiment_set_trials(thz_experiment *exp, int trials)
{
    return guarded(
        [&]
        {
            require(exp != nullptr, "experiment must not be null");
            require(trials >= 1, "trials must be >= 1");
            exp->spec.trials = trials;
        });
}

THZ_API thz_status thz_experiment_set_output(thz_experiment *exp, const char *dir)
{
    return guarded(
        [&]
        {
            require(exp && dir, "arguments must not be null");
            exp->spec.output_dir = dir;
        });
}

THZ_API thz_status thz_experiment_set_threads(thz_experiment *exp, int threads)
{
    return guarded(
        [&]
        {
            require(exp != nullptr, "experiment must not be null");
            require(threads >= 0, "threads must be >= 0");
            exp->spec.threads = threads;
        });
}

THZ_API thz_status thz_experiment_run(thz_experiment *exp)
{
    try
    {
        if (!exp)
            return fail(THZ_ERR_CONFIG, "experiment must not be null");
        g_last_error.clear();
        exp->last_csv = run_experiment(exp->spec).csv_path;
        return THZ_OK;
    }
    catch (const ConfigError &e)
    {
        return fail(THZ_ERR_CONFIG, e.what());
    }
    catch (const IoError &e)
    {
        return fail(THZ_ERR_IO, e.what());
    }
    catch (const NumericalError &e)
    {
        return fail(THZ_ERR_NUMERIC, e.what());
    }
    catch (const std::domain_error &e)
    {
        return fail(THZ_ERR_NUMERIC, e.what());
    }
    catch (const std::exception &e)
    {
        return fail(THZ_ERR_INTERNAL, e.what());
    }
}

THZ_API thz_status thz_experiment_output(const thz_experiment *exp, char *buf, size_t len)
{
    if (!exp)
        return fail(THZ_ERR_CONFIG, "experiment must not be null");
    if (exp->last_csv.empty())
        return fail(THZ_ERR_CONFIG, "experiment has not been run");
    return copy_out(exp->last_csv, buf, len);
}

} // extern "C"
