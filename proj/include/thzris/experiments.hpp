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

#ifndef THZRIS_EXPERIMENTS_HPP
#define THZRIS_EXPERIMENTS_HPP

#include "thzris/channel.hpp"
#include "thzris/config_file.hpp"
#include "thzris/orchestrator.hpp"
#include "thzris/ttd_analog.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace thzris
{

enum class ExperimentId
{
    phase_compensation,
    phase_error,
    gain_vs_subcarrier,
    rate_vs_power,
    inner_convergence,
    outer_convergence,
    hardware_table,
    rate_vs_ris_elements,
    rate_vs_csi_error
};

ExperimentId parse_experiment_id(const std::string &name);
std::string to_string(ExperimentId id);

std::string library_version();

struct SchemeSpec
{
    std::string label;
    AnalogArchitecture arch;
};

// Architecture from key/value pairs: scheme = ps | single_ttd | double_ttd plus U, P_s, K_H,
// K_L, P_H, P_L, D_over_Tc (number or "continuous") and ps_bits. `default_step` applies when
// D_over_Tc is absent.
AnalogArchitecture architecture_from_keys(const std::map<std::string, std::string> &keys,
                                          std::optional<double> default_step);

// Compact descriptor, e.g. "ps", "single_ttd(U=32,P_s=8)" or "double_ttd(K_H=8,K_L=4,D_over_Tc=0.15)".
AnalogArchitecture parse_architecture(const std::string &descriptor, std::optional<double> default_step = {});

struct ScenarioSpec
{
    GainModel gain = GainModel::free_space;
    bool direct_link = false; // link = direct: no RIS, chains steered at the users
    Vec3 bs = Vec3(50.0, 0.0, 3.0);
    std::vector<Vec3> ris = {Vec3(0.0, 80.0, 6.0), Vec3(0.0, 80.0, 8.0), Vec3(0.0, 85.0, 6.0),
                             Vec3(0.0, 85.0, 8.0)};
    Vec3 user_centre = Vec3(0.0, 85.0, 0.0);
    double user_radius = 1.0;
};

struct SweepAxis
{
    std::string key;
    std::vector<std::string> values;
};

struct ExperimentSpec
{
    ExperimentId id = ExperimentId::gain_vs_subcarrier;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string output_dir; // empty: $THZRIS_OUT_DIR, then the working directory
    int threads = 0;        // 0: hardware concurrency
    double theta0 = kPi / 4.0;
    std::optional<double> freq_hz; // phase experiments; default is the upper band edge
    bool include_rate = false;     // hardware_table
    SystemConfig system;
    ScenarioSpec scenario;
    SolveOptions solve;
    std::vector<SchemeSpec> schemes;
    std::vector<SweepAxis> sweep;
    std::vector<double> csi_deltas = {0.0};
    IniDocument source; // echoed into the manifest
};

// Reference configuration overridden by the [system] section, if any.
SystemConfig system_from_ini(const IniDocument &doc);

// Validates the document and fills in defaults. Errors name the offending section and key.
ExperimentSpec parse_experiment(const IniDocument &doc);
ExperimentSpec load_experiment(const std::string &path);

// One fully resolved point of the sweep grid.
struct GridPoint
{
    std::vector<std::pair<std::string, std::string>> values; // in sweep-key order
    SystemConfig system;
    std::vector<SchemeSpec> schemes;
    double delta = 0.0;
    double theta0 = 0.0;
};

std::vector<GridPoint> expand_grid(const ExperimentSpec &spec);

// Per-trial scenario: users drawn from mix_seed(seed, {trial, 1}), gains from mix_seed(seed, {trial, 2}).
Scenario trial_scenario(const ExperimentSpec &spec, const SystemConfig &cfg, int trial);
std::uint64_t trial_csi_seed(const ExperimentSpec &spec, int trial);

// Result rows as CSV text including the '#' metadata header. Deterministic for a given spec.
std::string render_csv(const ExperimentSpec &spec);

struct ExperimentOutput
{
    std::string csv_path;
    std::string manifest_path;
    double wall_seconds = 0.0;
};

// Writes <dir>/<id>.csv and <dir>/<id>.json through temporary files and renames.
ExperimentOutput run_experiment(const ExperimentSpec &spec);

// Writes `content` to `path` through a temporary file in the same directory.
void write_file_atomic(const std::string &path, const std::string &content);

} // namespace thzris

#endif
