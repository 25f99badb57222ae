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

// thzris-cli: experiment runner and one-shot analysis tools on top of the C API.

#include "thzris/thzris.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>

namespace
{

constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;

int exit_code(thz_status s)
{
    switch (s)
    {
    case THZ_OK:
        return 0;
    case THZ_ERR_CONFIG:
    case THZ_ERR_IO:
        return kExitConfig;
    default:
        return kExitNumeric;
    }
}

// Prints the error of a failed call and converts it to an exit code.
int report(thz_status s)
{
    if (s != THZ_OK)
        std::cerr << "error: " << thz_last_error() << "\n";
    return exit_code(s);
}

struct SystemHandle
{
    thz_system *p = nullptr;
    ~SystemHandle() { thz_system_destroy(p); }
};

struct ArchHandle
{
    thz_arch *p = nullptr;
    ~ArchHandle() { thz_arch_destroy(p); }
};

struct ExperimentHandle
{
    thz_experiment *p = nullptr;
    ~ExperimentHandle() { thz_experiment_destroy(p); }
};

// Shared array options of the analysis subcommands.
struct ArrayOptions
{
    int antennas = 128;
    double carrier_hz = 300e9;
    double bandwidth_hz = 30e9;

    thz_status apply(thz_system *sys) const
    {
        thz_status s = thz_system_set(sys, "N", antennas);
        if (s == THZ_OK)
            s = thz_system_set(sys, "f_c", carrier_hz);
        if (s == THZ_OK)
            s = thz_system_set(sys, "B", bandwidth_hz);
        return s;
    }
};

void add_array_options(CLI::App *cmd, ArrayOptions &o)
{
    cmd->add_option("--N", o.antennas, "BS antennas")->capture_default_str();
    cmd->add_option("--fc", o.carrier_hz, "carrier frequency in Hz")->capture_default_str();
    cmd->add_option("--bandwidth", o.bandwidth_hz, "bandwidth in Hz")->capture_default_str();
}

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"thzris-cli: wideband THz hybrid beamforming with true-time delays"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(thz_version()));

    // run
    std::string spec_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int trials = 0;
    int threads = -1;
    auto *run = app.add_subcommand("run", "run an experiment spec file");
    run->add_option("spec", spec_path, "experiment spec file")->required();
    run->add_option("--seed", seed, "master seed (overrides the spec file)");
    run->add_option("--out", out_dir, "output directory (overrides the spec file and THZRIS_OUT_DIR)");
    run->add_option("--trials", trials, "Monte-Carlo trials per grid point")->check(CLI::PositiveNumber);
    run->add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);

    // gain
    std::string scheme = "double_ttd";
    double theta = std::numbers::pi / 4.0;
    double fm = 0.0;
    int U = 32;
    int K_H = 8;
    int K_L = 4;
    ArrayOptions gain_array;
    auto *gain = app.add_subcommand("gain", "normalized array gain of one scheme");
    gain->add_option("--scheme", scheme, "ps, single_ttd, double_ttd or a full descriptor")->capture_default_str();
    gain->add_option("--theta", theta, "steering angle in rad")->capture_default_str();
    gain->add_option("--fm", fm, "evaluation frequency in Hz (default: carrier)");
    gain->add_option("--U", U, "single-layer TTDs")->capture_default_str();
    gain->add_option("--K_H", K_H, "large-range TTDs")->capture_default_str();
    gain->add_option("--K_L", K_L, "small-range TTDs per large-range TTD")->capture_default_str();
    add_array_options(gain, gain_array);

    // bits
    std::string bits_config;
    double bits_theta = std::numbers::pi / 4.0;
    int bits_U = 32;
    int bits_K_H = 8;
    int bits_K_L = 4;
    ArrayOptions bits_array;
    auto *bits = app.add_subcommand("bits", "minimum TTD bits and bit ratio for a delay step of one carrier period");
    bits->add_option("--config", bits_config, "spec file whose [system] section sets N and f_c");
    bits->add_option("--theta", bits_theta, "steering angle in rad")->capture_default_str();
    bits->add_option("--U", bits_U, "single-layer TTDs")->capture_default_str();
    bits->add_option("--K_H", bits_K_H, "large-range TTDs")->capture_default_str();
    bits->add_option("--K_L", bits_K_L, "small-range TTDs per large-range TTD")->capture_default_str();
    add_array_options(bits, bits_array);

    // hardware
    ArrayOptions hw_array;
    int hw_rf = 4;
    auto *hardware = app.add_subcommand("hardware", "hardware cost of the single- and double-layer schemes");
    hardware->add_option("--N_RF", hw_rf, "RF chains")->capture_default_str();
    add_array_options(hardware, hw_array);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &)
    {
        std::cout << app.help();
        return 0;
    }
    catch (const CLI::CallForVersion &)
    {
        std::cout << thz_version() << "\n";
        return 0;
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    if (run->parsed())
    {
        ExperimentHandle exp;
        if (thz_status s = thz_experiment_load(spec_path.c_str(), &exp.p); s != THZ_OK)
            return report(s);
        if (run->count("--seed"))
            if (thz_status s = thz_experiment_set_seed(exp.p, seed); s != THZ_OK)
                return report(s);
        if (run->count("--trials"))
            if (thz_status s = thz_experiment_set_trials(exp.p, trials); s != THZ_OK)
                return report(s);
        if (run->count("--threads"))
            if (thz_status s = thz_experiment_set_threads(exp.p, threads); s != THZ_OK)
                return report(s);
        if (run->count("--out"))
            if (thz_status s = thz_experiment_set_output(exp.p, out_dir.c_str()); s != THZ_OK)
                return report(s);
        if (thz_status s = thz_experiment_run(exp.p); s != THZ_OK)
            return report(s);
        char path[4096];
        if (thz_status s = thz_experiment_output(exp.p, path, sizeof path); s != THZ_OK)
            return report(s);
        std::cout << path << "\n";
        return 0;
    }

    SystemHandle sys;
    if (thz_status s = thz_system_create(&sys.p); s != THZ_OK)
        return report(s);

    if (gain->parsed())
    {
        if (thz_status s = gain_array.apply(sys.p); s != THZ_OK)
            return report(s);
        std::string desc = scheme;
        if (scheme == "single_ttd")
            desc = "single_ttd(U=" + std::to_string(U) + ")";
        else if (scheme == "double_ttd")
            desc = "double_ttd(K_H=" + std::to_string(K_H) + ",K_L=" + std::to_string(K_L) + ")";
        ArchHandle arch;
        if (thz_status s = thz_arch_create(desc.c_str(), &arch.p); s != THZ_OK)
            return report(s);
        double value = 0.0;
        const double f = gain->count("--fm") ? fm : gain_array.carrier_hz;
        if (thz_status s = thz_gain(sys.p, arch.p, theta, f, &value); s != THZ_OK)
            return report(s);
        std::cout << fmt(value) << "\n";
        return 0;
    }

    if (bits->parsed())
    {
        if (!bits_config.empty())
        {
            thz_system_destroy(sys.p);
            sys.p = nullptr;
            if (thz_status s = thz_system_load(bits_config.c_str(), &sys.p); s != THZ_OK)
                return report(s);
        }
        else if (thz_status s = bits_array.apply(sys.p); s != THZ_OK)
            return report(s);
        thz_bits b{};
        if (thz_status s = thz_required_bits(sys.p, bits_theta, bits_K_H, bits_K_L, bits_U, &b); s != THZ_OK)
            return report(s);
        if (!b.delay_needed)
        {
            std::cout << "no delay compensation needed at theta0 = 0\n";
            return 0;
        }
        const int single_total = bits_U * b.single_layer_bits;
        const int double_total = bits_K_H * b.second_layer_bits + bits_K_H * bits_K_L * b.first_layer_bits;
        std::cout << "P_L=" << b.first_layer_bits << "\n"
                  << "P_H=" << b.second_layer_bits << "\n"
                  << "P_s=" << b.single_layer_bits << "\n"
                  << "max_ps_group=" << b.max_ps_group << "\n"
                  << "bits_single_layer=" << single_total << "\n"
                  << "bits_double_layer=" << double_total << "\n";
        double eta = 0.0;
        if (thz_status s = thz_bit_ratio(bits_K_H, b.second_layer_bits, bits_K_L, b.first_layer_bits, bits_U,
                                         b.single_layer_bits, &eta);
            s != THZ_OK)
            return report(s);
        std::cout << "eta=" << fmt(100.0 * eta) << "%\n";
        return 0;
    }

    if (hardware->parsed())
    {
        if (thz_status s = hw_array.apply(sys.p); s != THZ_OK)
            return report(s);
        if (thz_status s = thz_system_set(sys.p, "N_RF", hw_rf); s != THZ_OK)
            return report(s);
        if (thz_status s = thz_system_set(sys.p, "R", hw_rf); s != THZ_OK)
            return report(s);
        const char *rows[] = {"single_ttd(U=32,P_s=8)", "double_ttd(K_H=8,K_L=4,P_H=8,P_L=4)",
                              "double_ttd(K_H=8,K_L=2,P_H=8,P_L=4)"};
        std::cout << "scheme,large_ttds,total_ttds,total_bits,delay_ranges_Tc\n";
        for (const char *row : rows)
        {
            ArchHandle arch;
            if (thz_status s = thz_arch_create(row, &arch.p); s != THZ_OK)
                return report(s);
            thz_hardware hw{};
            if (thz_status s = thz_hardware_report(sys.p, arch.p, &hw); s != THZ_OK)
                return report(s);
            char label[64];
            if (thz_status s = thz_arch_label(arch.p, label, sizeof label); s != THZ_OK)
                return report(s);
            const std::string cell(label);
            std::cout << (cell.find(',') == std::string::npos ? cell : '"' + cell + '"') << "," << hw.large_ttds << "," << hw.total_ttds << "," << hw.total_bits << ",";
            for (int i = 0; i < hw.layers; ++i)
                std::cout << (i ? "+" : "") << "[0;" << fmt(hw.max_delay_tc[i]) << "]";
            std::cout << "\n";
        }
        return 0;
    }
    return kExitConfig;
}
