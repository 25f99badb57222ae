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

#include "support.hpp"

#include "thzris/experiments.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace thzris;
namespace fs = std::filesystem;

namespace
{

const char *kSmallRate = R"([experiment]
id = rate_vs_power
trials = 3
seed = 42

[system]
N = 16
M = 2
K = 2
R = 2
N_RF = 2
M_x = 2
M_y = 2

[scenario]
gain = complex_gaussian
ris = 0,80,6; 0,85,8

[solver]
I_max = 3

[scheme ps]
scheme = ps

[scheme single]
scheme = single_ttd
U = 4
P_s = 6

[scheme double]
scheme = double_ttd
K_H = 2
K_L = 2
P_H = 6
P_L = 3

[sweep]
P_max_dBm = 0, 10
)";

ExperimentSpec spec_from(const std::string &text)
{
    return parse_experiment(parse_ini_string(text, "test.ini"));
}

// Same small system with a different experiment id and extra lines in [experiment].
std::string small_with(const std::string &id, const std::string &extra = "", const std::string &sweep = "")
{
    std::string text = kSmallRate;
    text.replace(text.find("rate_vs_power"), 13, id);
    if (extra.find("trials") != std::string::npos)
        text.erase(text.find("trials = 3\n"), 11);
    text.replace(text.find("seed = 42\n") + 10, 0, extra);
    const auto pos = text.find("[sweep]");
    text = text.substr(0, pos) + (sweep.empty() ? "" : "[sweep]\n" + sweep);
    return text;
}

std::string error_of(const std::string &text)
{
    try
    {
        spec_from(text);
    }
    catch (const ConfigError &e)
    {
        return e.what();
    }
    return {};
}

std::vector<std::vector<std::string>> data_rows(const std::string &csv)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        if (header)
        {
            header = false;
            continue;
        }
        rows.push_back(test::split_csv_line(line));
    }
    return rows;
}

std::string header_row(const std::string &csv)
{
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            return line;
    return {};
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

fs::path scratch_dir(const std::string &name)
{
    const char *env = std::getenv("THZRIS_TEST_TMP");
    fs::path base = env && *env ? fs::path(env) : fs::temp_directory_path() / "thzris_tests";
    fs::path p = base / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("experiment ids round-trip")
{
    for (const char *name : {"phase_compensation", "phase_error", "gain_vs_subcarrier", "rate_vs_power",
                             "inner_convergence", "outer_convergence", "hardware_table", "rate_vs_ris_elements",
                             "rate_vs_csi_error"})
        CHECK(to_string(parse_experiment_id(name)) == name);
    CHECK_THROWS_AS(parse_experiment_id("fig12"), ConfigError);
    CHECK(library_version() == "0.3.0");
}

TEST_CASE("defaults of a minimal spec")
{
    const auto rate = spec_from("[experiment]\nid = rate_vs_power\n");
    CHECK(rate.trials == 100);
    CHECK(rate.seed == 1);
    CHECK(rate.theta0 == doctest::Approx(kPi / 4));
    CHECK(rate.scenario.gain == GainModel::free_space);
    REQUIRE(rate.schemes.size() == 4);
    CHECK(rate.schemes[0].label == "ps");
    CHECK(rate.schemes[2].label == "double_ttd(8,4)");
    CHECK(rate.schemes[2].arch.group_bits == 8);
    CHECK(rate.schemes[2].arch.sub_bits == 4);
    CHECK(rate.schemes[1].arch.single_bits == 8);
    CHECK(rate.schemes[1].arch.delay_step_tc == std::optional<double>(0.15));
    CHECK(rate.schemes[3].arch.per_group == 2);
    CHECK(rate.solve.outer_iterations == 10);
    CHECK(rate.solve.reflection_bits == 1);

    const auto analysis = spec_from("[experiment]\nid = phase_error\n");
    CHECK(analysis.schemes[1].arch.continuous_delays());

    const auto hw = spec_from("[experiment]\nid = hardware_table\n");
    REQUIRE(hw.schemes.size() == 3);
    CHECK(hw.schemes[0].label == "single_ttd(32)");
}

TEST_CASE("explicit sections")
{
    const auto spec = spec_from(kSmallRate);
    CHECK(spec.trials == 3);
    CHECK(spec.seed == 42);
    CHECK(spec.system.bs_antennas == 16);
    CHECK(spec.system.ris_elements() == 4);
    CHECK(spec.scenario.gain == GainModel::complex_gaussian);
    CHECK(spec.scenario.ris.size() == 2);
    CHECK(spec.solve.outer_iterations == 3);
    REQUIRE(spec.schemes.size() == 3);
    CHECK(spec.schemes[1].label == "single");
    CHECK(spec.schemes[1].arch.subarrays == 4);
    CHECK(spec.schemes[2].arch.sub_bits == 3);
    REQUIRE(spec.sweep.size() == 1);
    CHECK(spec.sweep[0].values == std::vector<std::string>{"0", "10"});

    const auto direct = spec_from("[experiment]\nid = rate_vs_power\n[system]\nN_RF = 2\n[scenario]\nlink = direct\n");
    CHECK(direct.system.ris_count == 0);
    CHECK(direct.scenario.direct_link);

    const auto sys = system_from_ini(parse_ini_string("[system]\nf_c = 140e9\nP_max_dBm = 20\n"));
    CHECK(sys.carrier_hz == 140e9);
    CHECK(sys.max_power_w == doctest::Approx(0.1));
}

TEST_CASE("architecture descriptors")
{
    const auto a = parse_architecture("double_ttd(K_H=4, K_L=8, D_over_Tc=0.5, ps_bits=2)");
    CHECK(a.kind == SchemeKind::double_layer);
    CHECK(a.groups == 4);
    CHECK(a.per_group == 8);
    CHECK(a.delay_step_tc == std::optional<double>(0.5));
    CHECK(a.ps_bits == 2);
    CHECK(parse_architecture("single_ttd(U=16,D_over_Tc=continuous)").continuous_delays());
    CHECK(parse_architecture("single_ttd", 0.15).delay_step_tc == std::optional<double>(0.15));
    CHECK(parse_architecture("ps").kind == SchemeKind::ps_only);
    CHECK_THROWS_AS(parse_architecture("triple_ttd"), ConfigError);
    CHECK_THROWS_AS(parse_architecture("single_ttd(U=16"), ConfigError);
    CHECK_THROWS_AS(parse_architecture("single_ttd(U)"), ConfigError);
    CHECK_THROWS_AS(parse_architecture("single_ttd(V=3)"), ConfigError);
    CHECK_THROWS_AS(parse_architecture("single_ttd(U=x)"), ConfigError);
    CHECK_THROWS_AS(parse_architecture("single_ttd(D_over_Tc=-1)"), ConfigError);
}

TEST_CASE("spec errors name the offending place")
{
    CHECK(error_of("[experiment]\nid = rate_vs_power\n[plot]\n") == "test.ini:3: unknown section [plot]");
    CHECK(error_of("[experiment]\nid = rate_vs_power\ncolour = red\n") == "[experiment] colour: unknown key");
    CHECK(error_of("[experiment]\ntrials = 3\n") == "[experiment] id: missing");
    CHECK(error_of("[system]\nN = 4\n") == "[experiment] section is required");
    CHECK(error_of("[experiment]\nid = rate_vs_power\ntrials = 0\n") ==
          "[experiment] trials: value 0 outside [1, 1000000]");
    CHECK(error_of("[experiment]\nid = rate_vs_power\n[sweep]\ntheta0 = 0.1\n") ==
          "[sweep] theta0: not a sweep key of experiment rate_vs_power");
    CHECK(error_of("[experiment]\nid = rate_vs_power\n[system]\nR = 2\nN_RF = 2\n") ==
          "[scenario] ris: 4 positions given but [system] R = 2");
    CHECK(error_of("[experiment]\nid = rate_vs_power\n[scenario]\ngain = rician\n") ==
          "[scenario] gain: unknown gain model 'rician'");
    CHECK(error_of("[experiment]\nid = rate_vs_power\n[scheme a]\nscheme = single_ttd\nU = 5\n") ==
          "test.ini:3: scheme: U must divide the antenna count");
    CHECK(error_of("[experiment]\nid = rate_vs_power\n[sweep]\nP_max_dBm = 1, ten\n") ==
          "[sweep] P_max_dBm: expected a number, got 'ten'");
    CHECK(error_of("[experiment]\nid = rate_vs_power\n[system]\nN_RF = 3\n").rfind("[system] system:", 0) == 0);
    CHECK(error_of("[experiment]\nid = phase_error\ntheta0 = 2\n") == "theta0 must lie in [-pi/2, pi/2]");
    CHECK_FALSE(error_of("[experiment]\nid = rate_vs_ris_elements\n[sweep]\nris_grid = 2x2, 4x8\n").size());
    CHECK(error_of("[experiment]\nid = rate_vs_ris_elements\n[sweep]\nris_grid = 4by4\n") ==
          "ris_grid: expected '<rows>x<cols>', got '4by4'");
}

TEST_CASE("sweep grid is the Cartesian product in key order")
{
    auto spec = spec_from(small_with("rate_vs_csi_error", "", "delta = 0, 0.1\nD_over_Tc = 0.5, continuous\n"));
    const auto grid = expand_grid(spec);
    REQUIRE(grid.size() == 4);
    CHECK(grid[1].values == std::vector<std::pair<std::string, std::string>>{{"delta", "0"}, {"D_over_Tc", "continuous"}});
    CHECK(grid[2].delta == 0.1);
    CHECK(grid[2].schemes[1].arch.delay_step_tc == std::optional<double>(0.5));
    CHECK(grid[3].schemes[2].arch.continuous_delays());
    CHECK(grid[3].schemes[0].arch.kind == SchemeKind::ps_only);

    spec = spec_from(small_with("rate_vs_ris_elements", "", "ris_grid = 1x3\nP_max_dBm = 20\n"));
    const auto g2 = expand_grid(spec);
    REQUIRE(g2.size() == 1);
    CHECK(g2[0].system.ris_elements() == 3);
    CHECK(g2[0].system.max_power_w == doctest::Approx(0.1));
}

TEST_CASE("trial scenarios are seeded per trial")
{
    const auto spec = spec_from(kSmallRate);
    const auto a = trial_scenario(spec, spec.system, 0);
    const auto b = trial_scenario(spec, spec.system, 0);
    const auto c = trial_scenario(spec, spec.system, 1);
    CHECK(a.geometry.users[0] == b.geometry.users[0]);
    CHECK(a.bs_ris[0][0].gain == b.bs_ris[0][0].gain);
    CHECK(a.geometry.users[0] != c.geometry.users[0]);
    CHECK(trial_csi_seed(spec, 0) != trial_csi_seed(spec, 1));
    CHECK((a.geometry.users[1] - spec.scenario.user_centre).norm() <= spec.scenario.user_radius);
}

TEST_CASE("hardware table output")
{
    const auto csv = render_csv(spec_from("[experiment]\nid = hardware_table\n"));
    const std::string expected_rows = "scheme,large_ttds,total_ttds,total_bits,delay_ranges_Tc\n"
                                      "single_ttd(32),128,128,1024,[0;62]\n"
                                      "\"double_ttd(8,4)\",32,160,768,[0;56]+[0;6]\n"
                                      "\"double_ttd(8,2)\",32,96,512,[0;56]+[0;4]\n";
    CHECK(csv.size() > expected_rows.size());
    CHECK(csv.substr(csv.size() - expected_rows.size()) == expected_rows);
    CHECK(csv.rfind("# thzris 0.3.0\n# experiment: hardware_table\n", 0) == 0);
}

TEST_CASE("analysis rows match independent formulas")
{
    const auto gain = spec_from("[experiment]\nid = gain_vs_subcarrier\n[sweep]\ntheta0 = 0.3, 0.785\n");
    const auto rows = data_rows(render_csv(gain));
    CHECK(header_row(render_csv(gain)) == "theta0,scheme,f_m_Hz,theta0_rad,gain");
    REQUIRE(rows.size() == 2 * 4 * 8);
    for (const auto &r : rows)
    {
        const auto arch = r[1] == "ps" ? AnalogArchitecture::ps_only()
                          : r[1] == "single_ttd(32)"
                              ? AnalogArchitecture::single_layer(32, 8, std::nullopt)
                              : AnalogArchitecture::double_layer(8, r[1] == "double_ttd(8,4)" ? 4 : 2, 8, 4,
                                                                 std::nullopt);
        const double closed = gain_closed_form(arch, std::stod(r[2]), std::stod(r[3]), SystemConfig{});
        CHECK(std::stod(r[4]) == doctest::Approx(closed).epsilon(1e-10));
    }

    const auto phase = spec_from("[experiment]\nid = phase_compensation\n[scheme d]\nscheme = double_ttd\n");
    const auto prow = data_rows(render_csv(phase));
    REQUIRE(prow.size() == 128);
    const SystemConfig cfg;
    for (const auto &r : prow)
    {
        const int n = std::stoi(r[1]);
        CHECK(std::stod(r[2]) == 315e9);
        const double ideal = std::fmod(kTwoPi * 315e9 * (n - 1) * 0.5 / 300e9 * std::sin(kPi / 4), kTwoPi);
        CHECK(std::stod(r[4]) == doctest::Approx(ideal).epsilon(1e-9));
        const double err = phase_error(AnalogArchitecture::double_layer(8, 4, 8, 4, std::nullopt), n, 315e9, kPi / 4, cfg);
        const double diff = std::remainder(std::stod(r[4]) - std::stod(r[5]) - err, kTwoPi);
        CHECK(std::abs(diff) < 1e-8);
    }

    const auto err = spec_from("[experiment]\nid = phase_error\nfreq_hz = 290e9\n[scheme p]\nscheme = ps\n");
    const auto erow = data_rows(render_csv(err));
    REQUIRE(erow.size() == 128);
    CHECK(std::stod(erow[127][4]) == doctest::Approx(kTwoPi * (-10e9) * 127 * 0.5 / 300e9 * std::sin(kPi / 4)));
}

TEST_CASE("Monte-Carlo rows re-derive from per-trial solves")
{
    const auto spec = spec_from(kSmallRate);
    const std::string csv = render_csv(spec);
    CHECK(header_row(csv) == "P_max_dBm,scheme,trials,rate_sum,rate_per_subcarrier");
    const auto rows = data_rows(csv);
    REQUIRE(rows.size() == 6);
    const auto grid = expand_grid(spec);
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (std::size_t s = 0; s < 3; ++s)
        {
            double sum = 0.0, per = 0.0;
            for (int t = 0; t < spec.trials; ++t)
            {
                const Scenario sc = trial_scenario(spec, grid[g].system, t);
                const auto r = joint_optimize(sc, grid[g].system, grid[g].schemes[s].arch, spec.solve);
                sum += r.rate.total;
                per += r.rate.per_subcarrier;
            }
            const auto &row = rows[g * 3 + s];
            CHECK(row[0] == grid[g].values[0].second);
            CHECK(row[1] == spec.schemes[s].label);
            CHECK(row[2] == "3");
            CHECK(row[3] == num(sum / 3.0));
            CHECK(row[4] == num(per / 3.0));
        }
}

TEST_CASE("convergence experiments emit padded traces")
{
    const auto outer = spec_from(small_with("outer_convergence", "trials = 2\n"));
    const auto rows = data_rows(render_csv(outer));
    REQUIRE(rows.size() == 3 * 4);
    for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t i = 1; i < 4; ++i)
            CHECK(std::stod(rows[s * 4 + i][2]) >= std::stod(rows[s * 4 + i - 1][2]) * (1.0 - 1e-9));

    const auto inner = spec_from(small_with("inner_convergence", "", "P_max_dBm = 5\n"));
    const std::string csv = render_csv(inner);
    CHECK(header_row(csv) == "P_max_dBm,scheme,outer_iteration,stage,iteration,rate_sum,rate_per_subcarrier");
    // 3 schemes x 3 rounds x (I_d + 1 + I_o + 1) rows.
    CHECK(data_rows(csv).size() == 3 * 3 * (6 + 11));
}

TEST_CASE("output is independent of the thread count")
{
    for (const std::string id : {"rate_vs_power", "rate_vs_csi_error"})
    {
        std::string text = small_with(id, "", id == "rate_vs_power" ? "P_max_dBm = 0, 10\n" : "delta = 0, 0.2\n");
        auto spec = spec_from(text);
        spec.threads = 1;
        const std::string one = render_csv(spec);
        spec.threads = 3;
        const std::string three = render_csv(spec);
        spec.threads = 0;
        CHECK(one == three);
        CHECK(one == render_csv(spec));
    }
}

TEST_CASE("run writes CSV and manifest through atomic renames")
{
    const fs::path dir = scratch_dir("run");
    auto spec = spec_from(small_with("rate_vs_power", "trials = 2\n"));
    spec.output_dir = dir.string();
    const auto out = run_experiment(spec);
    CHECK(out.csv_path == (dir / "rate_vs_power.csv").string());
    const std::string first = slurp(out.csv_path);
    CHECK(first == render_csv(spec));

    const auto manifest = nlohmann::json::parse(slurp(out.manifest_path));
    CHECK(manifest["experiment"] == "rate_vs_power");
    CHECK(manifest["version"] == "thzris-0.3.0");
    CHECK(manifest["seed"] == 42);
    CHECK(manifest["trials"] == 2);
    CHECK(manifest["csv"] == "rate_vs_power.csv");
    CHECK(manifest["schemes"].size() == 3);
    CHECK(manifest["config"]["system"]["N"] == "16");
    CHECK(manifest["wall_time_s"].get<double>() >= 0.0);

    run_experiment(spec);
    CHECK(slurp(out.csv_path) == first);
    for (const auto &entry : fs::directory_iterator(dir))
        CHECK(entry.path().extension() != ".tmp");

    spec.seed = 43;
    CHECK(render_csv(spec) != first);
}

TEST_CASE("output directory falls back to the environment")
{
    const fs::path dir = scratch_dir("env");
    auto spec = spec_from("[experiment]\nid = hardware_table\n");
    ::setenv("THZRIS_OUT_DIR", dir.string().c_str(), 1);
    const auto out = run_experiment(spec);
    ::unsetenv("THZRIS_OUT_DIR");
    CHECK(fs::exists(dir / "hardware_table.csv"));
    CHECK(out.manifest_path == (dir / "hardware_table.json").string());
}

TEST_CASE("write failures raise I/O errors")
{
    const fs::path dir = scratch_dir("io");
    CHECK_THROWS_AS(write_file_atomic((dir / "missing" / "x.csv").string(), "x"), IoError);
    write_file_atomic((dir / "x.csv").string(), "abc");
    CHECK(slurp(dir / "x.csv") == "abc");
    CHECK_FALSE(fs::exists(dir / "x.csv.tmp"));

    std::ofstream(dir / "blocker") << "file";
    auto spec = spec_from("[experiment]\nid = hardware_table\n");
    spec.output_dir = (dir / "blocker" / "sub").string();
    CHECK_THROWS_AS(run_experiment(spec), IoError);
}
