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

// Exercises the shared library through its C interface only.

#include "thzris/thzris.h"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace
{

fs::path scratch()
{
    const char *env = std::getenv("THZRIS_TEST_TMP");
    fs::path p = env && *env ? fs::path(env) : fs::temp_directory_path() / "thzris_capi";
    fs::create_directories(p);
    return p;
}

fs::path write_spec(const std::string &name, const std::string &text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char *kSmall = "[experiment]\nid = rate_vs_power\ntrials = 2\n"
                     "[system]\nN = 16\nM = 2\nK = 2\nR = 2\nN_RF = 2\nM_x = 2\nM_y = 2\n"
                     "[scenario]\ngain = complex_gaussian\nris = 0,80,6; 0,85,8\n"
                     "[solver]\nI_max = 2\n"
                     "[scheme single]\nscheme = single_ttd\nU = 4\nP_s = 6\n";

} // namespace

TEST_CASE("version and error state")
{
    CHECK(std::string(thz_version()) == "0.3.0");
    thz_arch *arch = nullptr;
    CHECK(thz_arch_create("quad_ttd", &arch) == THZ_ERR_CONFIG);
    CHECK(arch == nullptr);
    CHECK(std::strstr(thz_last_error(), "quad_ttd") != nullptr);
    CHECK(thz_arch_create(nullptr, &arch) == THZ_ERR_CONFIG);
    CHECK(thz_arch_create("ps", nullptr) == THZ_ERR_CONFIG);
    thz_system_destroy(nullptr);
    thz_arch_destroy(nullptr);
    thz_experiment_destroy(nullptr);
}

TEST_CASE("system parameters")
{
    thz_system *sys = nullptr;
    REQUIRE(thz_system_create(&sys) == THZ_OK);
    double v = 0.0;
    CHECK(thz_system_get(sys, "N", &v) == THZ_OK);
    CHECK(v == 128.0);
    CHECK(thz_system_set(sys, "P_max_dBm", 20.0) == THZ_OK);
    CHECK(thz_system_get(sys, "P_max_W", &v) == THZ_OK);
    CHECK(v == doctest::Approx(0.1));
    CHECK(thz_system_set(sys, "N", 64.0) == THZ_OK);
    CHECK(thz_system_set(sys, "N", 64.5) == THZ_ERR_CONFIG);
    CHECK(thz_system_set(sys, "bogus", 1.0) == THZ_ERR_CONFIG);
    CHECK(thz_system_get(sys, "bogus", &v) == THZ_ERR_CONFIG);
    CHECK(thz_system_set(sys, "f_c", -1.0) == THZ_ERR_CONFIG);
    thz_system_destroy(sys);

    const fs::path spec = write_spec("system.ini", "[system]\nf_c = 140e9\nN = 64\n");
    REQUIRE(thz_system_load(spec.string().c_str(), &sys) == THZ_OK);
    CHECK(thz_system_get(sys, "f_c", &v) == THZ_OK);
    CHECK(v == 140e9);
    thz_system_destroy(sys);
    CHECK(thz_system_load((scratch() / "none.ini").string().c_str(), &sys) == THZ_ERR_CONFIG);
}

TEST_CASE("gain, bits and hardware through the C interface")
{
    thz_system *sys = nullptr;
    REQUIRE(thz_system_create(&sys) == THZ_OK);
    thz_arch *dbl = nullptr;
    REQUIRE(thz_arch_create("double_ttd(K_H=8,K_L=4,P_H=8,P_L=4)", &dbl) == THZ_OK);

    char label[32];
    CHECK(thz_arch_label(dbl, label, sizeof label) == THZ_OK);
    CHECK(std::string(label) == "double_ttd(8,4)");
    char tiny[4];
    CHECK(thz_arch_label(dbl, tiny, sizeof tiny) == THZ_ERR_CONFIG);

    double g = 0.0, c = 0.0;
    CHECK(thz_gain(sys, dbl, M_PI / 4, 300e9, &g) == THZ_OK);
    CHECK(g == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(thz_gain(sys, dbl, M_PI / 4, 312e9, &g) == THZ_OK);
    CHECK(thz_gain_closed_form(sys, dbl, M_PI / 4, 312e9, &c) == THZ_OK);
    CHECK(std::abs(g - c) < 1e-10);

    double theta = 0.0;
    CHECK(thz_split_direction(sys, M_PI / 4, 315e9, &theta) == THZ_OK);
    CHECK(theta == doctest::Approx(std::asin(300.0 / 315.0 * std::sin(M_PI / 4))));
    CHECK(thz_split_direction(sys, 1.5, 250e9, &theta) == THZ_ERR_NUMERIC);

    thz_bits bits{};
    CHECK(thz_required_bits(sys, M_PI / 4, 8, 4, 32, &bits) == THZ_OK);
    CHECK(bits.delay_needed == 1);
    CHECK(bits.first_layer_bits == 3);
    CHECK(bits.second_layer_bits == 6);
    CHECK(bits.single_layer_bits == 6);
    double eta = 0.0;
    CHECK(thz_bit_ratio(8, 6, 4, 3, 32, 6, &eta) == THZ_OK);
    CHECK(eta == 0.75);
    CHECK(thz_bit_ratio(8, 6, 4, 3, 0, 6, &eta) == THZ_ERR_CONFIG);

    thz_hardware hw{};
    CHECK(thz_hardware_report(sys, dbl, &hw) == THZ_OK);
    CHECK(hw.large_ttds == 32);
    CHECK(hw.total_ttds == 160);
    CHECK(hw.total_bits == 768);
    CHECK(hw.layers == 2);
    CHECK(hw.max_delay_tc[0] == 56.0);
    CHECK(hw.max_delay_tc[1] == 6.0);

    thz_arch_destroy(dbl);
    thz_system_destroy(sys);
}

TEST_CASE("experiment lifecycle")
{
    const fs::path spec = write_spec("small.ini", kSmall);
    const fs::path out = scratch() / "exp_out";
    fs::remove_all(out);

    thz_experiment *exp = nullptr;
    REQUIRE(thz_experiment_load(spec.string().c_str(), &exp) == THZ_OK);
    char path[1024];
    CHECK(thz_experiment_output(exp, path, sizeof path) == THZ_ERR_CONFIG);
    CHECK(thz_experiment_set_trials(exp, 0) == THZ_ERR_CONFIG);
    CHECK(thz_experiment_set_threads(exp, -1) == THZ_ERR_CONFIG);
    CHECK(thz_experiment_set_seed(exp, 7) == THZ_OK);
    CHECK(thz_experiment_set_threads(exp, 2) == THZ_OK);
    CHECK(thz_experiment_set_output(exp, out.string().c_str()) == THZ_OK);
    REQUIRE(thz_experiment_run(exp) == THZ_OK);
    REQUIRE(thz_experiment_output(exp, path, sizeof path) == THZ_OK);
    CHECK(fs::path(path) == out / "rate_vs_power.csv");
    const std::string first = slurp(path);
    CHECK(first.find("# seed: 7\n") != std::string::npos);

    CHECK(thz_experiment_set_threads(exp, 1) == THZ_OK);
    REQUIRE(thz_experiment_run(exp) == THZ_OK);
    CHECK(slurp(path) == first);

    std::ofstream(scratch() / "blocker") << "x";
    CHECK(thz_experiment_set_output(exp, (scratch() / "blocker" / "sub").string().c_str()) == THZ_OK);
    CHECK(thz_experiment_run(exp) == THZ_ERR_IO);
    thz_experiment_destroy(exp);

    const fs::path bad = write_spec("bad.ini", "[experiment]\nid = rate_vs_power\n[scheme]\nscheme = single_ttd\nU = 5\n");
    CHECK(thz_experiment_load(bad.string().c_str(), &exp) == THZ_ERR_CONFIG);
    CHECK(std::strstr(thz_last_error(), "U must divide") != nullptr);
}
