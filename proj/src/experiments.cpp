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

#include "thzris/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#ifndef THZRIS_VERSION
#define THZRIS_VERSION "0.0.0"
#endif

namespace thzris
{

namespace
{

const std::vector<std::pair<ExperimentId, std::string>> kExperimentNames = {
    {ExperimentId::phase_compensation, "phase_compensation"},
    {ExperimentId::phase_error, "phase_error"},
    {ExperimentId::gain_vs_subcarrier, "gain_vs_subcarrier"},
    {ExperimentId::rate_vs_power, "rate_vs_power"},
    {ExperimentId::inner_convergence, "inner_convergence"},
    {ExperimentId::outer_convergence, "outer_convergence"},
    {ExperimentId::hardware_table, "hardware_table"},
    {ExperimentId::rate_vs_ris_elements, "rate_vs_ris_elements"},
    {ExperimentId::rate_vs_csi_error, "rate_vs_csi_error"},
};

bool is_analysis(ExperimentId id)
{
    return id == ExperimentId::phase_compensation || id == ExperimentId::phase_error ||
           id == ExperimentId::gain_vs_subcarrier;
}

std::set<std::string> sweep_keys_for(ExperimentId id)
{
    switch (id)
    {
    case ExperimentId::phase_compensation:
    case ExperimentId::phase_error:
    case ExperimentId::gain_vs_subcarrier:
        return {"theta0", "D_over_Tc"};
    case ExperimentId::rate_vs_power:
    case ExperimentId::inner_convergence:
    case ExperimentId::outer_convergence:
    case ExperimentId::hardware_table:
        return {"P_max_dBm", "D_over_Tc"};
    case ExperimentId::rate_vs_ris_elements:
        return {"ris_grid", "P_max_dBm", "D_over_Tc"};
    case ExperimentId::rate_vs_csi_error:
        return {"delta", "P_max_dBm", "D_over_Tc"};
    }
    return {};
}

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Quotes a CSV cell that contains a separator or a quote.
std::string field(const std::string &text)
{
    if (text.find_first_of(",\"\n") == std::string::npos)
        return text;
    std::string out = "\"";
    for (char c : text)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

[[noreturn]] void bad(const IniSection &s, const std::string &key, const std::string &what)
{
    std::string name = "[" + s.name + (s.label.empty() ? "" : " " + s.label) + "]";
    throw ConfigError(name + " " + key + ": " + what);
}

void reject_unknown(const IniSection &s, const std::set<std::string> &known)
{
    for (const auto &[k, v] : s.entries)
        if (!known.count(k))
            bad(s, k, "unknown key");
}

int to_int(const IniSection &s, const std::string &key, const std::string &value, long long lo, long long hi)
{
    const long long x = to_integer(s, key, value);
    if (x < lo || x > hi)
        bad(s, key, "value " + value + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
}

Vec3 to_vec3(const IniSection &s, const std::string &key, const std::string &value)
{
    const auto parts = split_list(value, ',');
    if (parts.size() != 3)
        bad(s, key, "expected 'x, y, z', got '" + value + "'");
    return Vec3(to_double(s, key, parts[0]), to_double(s, key, parts[1]), to_double(s, key, parts[2]));
}

std::optional<double> parse_step(const std::string &value)
{
    if (value == "continuous" || value == "ideal")
        return std::nullopt;
    char *end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !(x > 0.0) || !std::isfinite(x))
        throw ConfigError("D_over_Tc: expected a positive number or 'continuous', got '" + value + "'");
    return x;
}

std::pair<int, int> parse_grid(const std::string &value)
{
    const auto x = value.find('x');
    int rows = 0;
    int cols = 0;
    try
    {
        std::size_t used = 0;
        if (x == std::string::npos)
            throw ConfigError("");
        rows = std::stoi(value.substr(0, x), &used);
        if (used != x)
            throw ConfigError("");
        const std::string tail = value.substr(x + 1);
        cols = std::stoi(tail, &used);
        if (used != tail.size())
            throw ConfigError("");
    }
    catch (const std::exception &)
    {
        throw ConfigError("ris_grid: expected '<rows>x<cols>', got '" + value + "'");
    }
    if (rows < 1 || cols < 1)
        throw ConfigError("ris_grid: dimensions must be >= 1");
    return {rows, cols};
}

std::vector<SchemeSpec> default_schemes(ExperimentId id, std::optional<double> step)
{
    std::vector<SchemeSpec> out;
    if (id != ExperimentId::hardware_table)
        out.push_back({"ps", AnalogArchitecture::ps_only()});
    out.push_back({"single_ttd(32)", AnalogArchitecture::single_layer(32, 8, step)});
    out.push_back({"double_ttd(8,4)", AnalogArchitecture::double_layer(8, 4, 8, 4, step)});
    out.push_back({"double_ttd(8,2)", AnalogArchitecture::double_layer(8, 2, 8, 4, step)});
    return out;
}

void apply_system(SystemConfig &cfg, const IniSection &s)
{
    reject_unknown(s, {"f_c", "B", "M", "N", "N_RF", "K", "R", "M_x", "M_y", "P_max_dBm", "P_max_W", "sigma2_dBm",
                       "sigma2_W", "d_spacing"});
    for (const auto &[k, v] : s.entries)
    {
        if (k == "f_c")
            cfg.carrier_hz = to_double(s, k, v);
        else if (k == "B")
            cfg.bandwidth_hz = to_double(s, k, v);
        else if (k == "M")
            cfg.subcarriers = to_int(s, k, v, 1, 1 << 16);
        else if (k == "N")
            cfg.bs_antennas = to_int(s, k, v, 1, 1 << 20);
        else if (k == "N_RF")
            cfg.rf_chains = to_int(s, k, v, 1, 1 << 12);
        else if (k == "K")
            cfg.users = to_int(s, k, v, 1, 1 << 12);
        else if (k == "R")
            cfg.ris_count = to_int(s, k, v, 0, 1 << 12);
        else if (k == "M_x")
            cfg.ris_rows = to_int(s, k, v, 1, 1 << 12);
        else if (k == "M_y")
            cfg.ris_cols = to_int(s, k, v, 1, 1 << 12);
        else if (k == "P_max_dBm")
            cfg.max_power_w = dbm_to_watt(to_double(s, k, v));
        else if (k == "P_max_W")
            cfg.max_power_w = to_double(s, k, v);
        else if (k == "sigma2_dBm")
            cfg.noise_power_w = dbm_to_watt(to_double(s, k, v));
        else if (k == "sigma2_W")
            cfg.noise_power_w = to_double(s, k, v);
        else if (k == "d_spacing")
            cfg.antenna_spacing_m = to_double(s, k, v);
    }
}

void apply_solver(SolveOptions &o, const IniSection &s)
{
    reject_unknown(s, {"I_max", "I_d", "I_o", "Q", "outer_tol", "inner_tol"});
    for (const auto &[k, v] : s.entries)
    {
        if (k == "I_max")
            o.outer_iterations = to_int(s, k, v, 0, 10000);
        else if (k == "I_d")
            o.inner_iterations = to_int(s, k, v, 1, 10000);
        else if (k == "I_o")
            o.reflection_passes = to_int(s, k, v, 1, 10000);
        else if (k == "Q")
            o.reflection_bits = to_int(s, k, v, 1, 16);
        else if (k == "outer_tol" || k == "inner_tol")
        {
            const double x = to_double(s, k, v);
            if (!(x >= 0.0))
                bad(s, k, "tolerance must be >= 0");
            (k == "outer_tol" ? o.outer_tolerance : o.inner_tolerance) = x;
        }
    }
}

void apply_scenario(ScenarioSpec &sc, const IniSection &s)
{
    reject_unknown(s, {"gain", "link", "bs", "ris", "user_centre", "user_radius"});
    for (const auto &[k, v] : s.entries)
    {
        if (k == "gain")
        {
            try
            {
                sc.gain = parse_gain_model(v);
            }
            catch (const ConfigError &e)
            {
                bad(s, k, e.what());
            }
        }
        else if (k == "link")
        {
            if (v != "ris" && v != "direct")
                bad(s, k, "expected 'ris' or 'direct'");
            sc.direct_link = v == "direct";
        }
        else if (k == "bs")
            sc.bs = to_vec3(s, k, v);
        else if (k == "ris")
        {
            sc.ris.clear();
            for (const auto &p : split_list(v, ';'))
                sc.ris.push_back(to_vec3(s, k, p));
        }
        else if (k == "user_centre")
            sc.user_centre = to_vec3(s, k, v);
        else if (k == "user_radius")
        {
            sc.user_radius = to_double(s, k, v);
            if (!(sc.user_radius >= 0.0))
                bad(s, k, "radius must be >= 0");
        }
    }
}

// Runs fn(0..n-1) on up to `threads` workers. The first failing index (lowest) is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn)
{
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&]
    {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                fn(i);
            }
            catch (...)
            {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
    }
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

// Outcome of one (grid point, scheme, trial) solve.
struct TrialOutcome
{
    RateSummary rate;
    std::vector<double> outer;                     // outer rate trace
    std::vector<std::vector<double>> inner;        // WMMSE traces
    std::vector<std::vector<double>> reflection;   // reflection pass traces
};

TrialOutcome run_trial(const ExperimentSpec &spec, const GridPoint &gp, const SchemeSpec &scheme, int trial)
{
    const SystemConfig &cfg = gp.system;
    const Scenario sc = trial_scenario(spec, cfg, trial);
    const ChannelSet truth = generate_channels(sc, cfg);
    const std::vector<double> angles = chain_angles(sc, cfg);

    TrialOutcome out;
    if (spec.id == ExperimentId::rate_vs_csi_error && gp.delta > 0.0)
    {
        const ChannelSet estimate = apply_csi_error(truth, gp.delta, trial_csi_seed(spec, trial));
        const SolveResult r = joint_optimize(estimate, angles, cfg, scheme.arch, spec.solve);
        out.rate = evaluate_sum_rate(truth, r.theta, r.F, r.d, cfg.noise_power_w);
        out.outer = r.rate_trace;
        return out;
    }
    SolveResult r = joint_optimize(truth, angles, cfg, scheme.arch, spec.solve);
    out.rate = r.rate;
    out.outer = std::move(r.rate_trace);
    out.inner = std::move(r.inner_traces);
    out.reflection = std::move(r.reflection_traces);
    return out;
}

// Value at position i of a trace, repeating the last entry when the trace stopped early.
double padded(const std::vector<double> &trace, std::size_t i)
{
    if (trace.empty())
        return 0.0;
    return trace[std::min(i, trace.size() - 1)];
}

std::string delay_ranges_text(const HardwareReport &hw)
{
    if (hw.delay_ranges.empty())
        return "-";
    std::string out;
    for (const auto &r : hw.delay_ranges)
    {
        if (!out.empty())
            out += "+";
        out += "[0;" + num(r.max_tc) + "]";
    }
    return out;
}

} // namespace

ExperimentId parse_experiment_id(const std::string &name)
{
    for (const auto &[id, text] : kExperimentNames)
        if (text == name)
            return id;
    throw ConfigError("unknown experiment id '" + name + "'");
}

std::string to_string(ExperimentId id)
{
    for (const auto &[eid, text] : kExperimentNames)
        if (eid == id)
            return text;
    return "unknown";
}

std::string library_version()
{
    return THZRIS_VERSION;
}

AnalogArchitecture architecture_from_keys(const std::map<std::string, std::string> &keys,
                                          std::optional<double> default_step)
{
    static const std::set<std::string> known = {"scheme", "U", "P_s", "K_H", "K_L", "P_H", "P_L", "D_over_Tc",
                                                "ps_bits"};
    for (const auto &[k, v] : keys)
        if (!known.count(k))
            throw ConfigError("scheme: unknown key '" + k + "'");
    auto get = [&](const std::string &k) -> std::optional<std::string>
    {
        const auto it = keys.find(k);
        return it == keys.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    auto integer = [&](const std::string &k, int fallback)
    {
        const auto v = get(k);
        if (!v)
            return fallback;
        std::size_t used = 0;
        int x = 0;
        try
        {
            x = std::stoi(*v, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != v->size())
            throw ConfigError("scheme: " + k + " expects an integer, got '" + *v + "'");
        return x;
    };

    const auto kind = get("scheme");
    if (!kind)
        throw ConfigError("scheme: missing 'scheme' (ps, single_ttd or double_ttd)");
    const std::optional<double> step = get("D_over_Tc") ? parse_step(*get("D_over_Tc")) : default_step;
    const int ps_bits = integer("ps_bits", 0);

    AnalogArchitecture arch;
    if (*kind == "ps")
        arch = AnalogArchitecture::ps_only(ps_bits);
    else if (*kind == "single_ttd")
        arch = AnalogArchitecture::single_layer(integer("U", 32), integer("P_s", 8), step, ps_bits);
    else if (*kind == "double_ttd")
        arch = AnalogArchitecture::double_layer(integer("K_H", 8), integer("K_L", 4), integer("P_H", 8),
                                                integer("P_L", 4), step, ps_bits);
    else
        throw ConfigError("scheme: unknown scheme '" + *kind + "' (expected ps, single_ttd or double_ttd)");
    return arch;
}

AnalogArchitecture parse_architecture(const std::string &descriptor, std::optional<double> default_step)
{
    const std::string d = trim(descriptor);
    std::map<std::string, std::string> keys;
    const auto open = d.find('(');
    if (open == std::string::npos)
        keys["scheme"] = d;
    else
    {
        if (d.back() != ')')
            throw ConfigError("scheme descriptor '" + d + "' lacks a closing parenthesis");
        keys["scheme"] = trim(d.substr(0, open));
        for (const auto &item : split_list(d.substr(open + 1, d.size() - open - 2), ','))
        {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ConfigError("scheme descriptor item '" + item + "' is not key=value");
            keys[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
        }
    }
    return architecture_from_keys(keys, default_step);
}

SystemConfig system_from_ini(const IniDocument &doc)
{
    SystemConfig cfg;
    if (const IniSection *s = doc.unique("system"))
        apply_system(cfg, *s);
    cfg.validate();
    return cfg;
}

ExperimentSpec parse_experiment(const IniDocument &doc)
{
    static const std::set<std::string> sections = {"experiment", "system", "solver", "scenario", "scheme", "sweep"};
    for (const auto &s : doc.sections)
        if (!sections.count(s.name))
            throw ConfigError(doc.source + ":" + std::to_string(s.line) + ": unknown section [" + s.name + "]");

    ExperimentSpec spec;
    spec.source = doc;
    const IniSection *exp = doc.unique("experiment");
    if (!exp)
        throw ConfigError("[experiment] section is required");
    reject_unknown(*exp, {"id", "trials", "seed", "output", "threads", "theta0", "freq_hz", "include_rate"});
    const auto id = exp->find("id");
    if (!id)
        bad(*exp, "id", "missing");
    spec.id = parse_experiment_id(*id);
    for (const auto &[k, v] : exp->entries)
    {
        if (k == "trials")
            spec.trials = to_int(*exp, k, v, 1, 1000000);
        else if (k == "seed")
        {
            const long long x = to_integer(*exp, k, v);
            if (x < 0)
                bad(*exp, k, "seed must be >= 0");
            spec.seed = static_cast<std::uint64_t>(x);
        }
        else if (k == "output")
            spec.output_dir = v;
        else if (k == "threads")
            spec.threads = to_int(*exp, k, v, 0, 4096);
        else if (k == "theta0")
            spec.theta0 = to_double(*exp, k, v);
        else if (k == "freq_hz")
            spec.freq_hz = to_double(*exp, k, v);
        else if (k == "include_rate")
            spec.include_rate = to_bool(*exp, k, v);
    }

    if (const IniSection *s = doc.unique("system"))
        apply_system(spec.system, *s);
    if (const IniSection *s = doc.unique("solver"))
        apply_solver(spec.solve, *s);
    if (const IniSection *s = doc.unique("scenario"))
        apply_scenario(spec.scenario, *s);

    if (spec.scenario.direct_link)
    {
        spec.system.ris_count = 0;
        spec.scenario.ris.clear();
    }
    else if (static_cast<int>(spec.scenario.ris.size()) != spec.system.ris_count)
        throw ConfigError("[scenario] ris: " + std::to_string(spec.scenario.ris.size()) +
                          " positions given but [system] R = " + std::to_string(spec.system.ris_count));

    const std::optional<double> default_step =
        is_analysis(spec.id) ? std::optional<double>() : std::optional<double>(0.15);
    for (const IniSection *s : doc.all("scheme"))
    {
        std::map<std::string, std::string> keys(s->entries.begin(), s->entries.end());
        try
        {
            SchemeSpec sch{s->label, architecture_from_keys(keys, default_step)};
            if (sch.label.empty())
                sch.label = sch.arch.label();
            sch.arch.validate(spec.system.bs_antennas);
            spec.schemes.push_back(std::move(sch));
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(doc.source + ":" + std::to_string(s->line) + ": " + e.what());
        }
    }
    if (spec.schemes.empty())
        spec.schemes = default_schemes(spec.id, default_step);

    if (const IniSection *s = doc.unique("sweep"))
    {
        const auto allowed = sweep_keys_for(spec.id);
        for (const auto &[k, v] : s->entries)
        {
            if (!allowed.count(k))
                bad(*s, k, "not a sweep key of experiment " + to_string(spec.id));
            SweepAxis axis{k, split_list(v, ',')};
            if (axis.values.empty())
                bad(*s, k, "empty value list");
            spec.sweep.push_back(std::move(axis));
        }
    }

    try
    {
        spec.system.validate();
    }
    catch (const ConfigError &e)
    {
        throw ConfigError(std::string("[system] ") + e.what());
    }
    expand_grid(spec); // surfaces bad sweep values now
    return spec;
}

ExperimentSpec load_experiment(const std::string &path)
{
    return parse_experiment(load_ini(path));
}

std::vector<GridPoint> expand_grid(const ExperimentSpec &spec)
{
    std::vector<GridPoint> points(1);
    points[0].system = spec.system;
    points[0].schemes = spec.schemes;
    points[0].theta0 = spec.theta0;

    for (const auto &axis : spec.sweep)
    {
        std::vector<GridPoint> next;
        for (const auto &base : points)
            for (const auto &value : axis.values)
            {
                GridPoint gp = base;
                gp.values.emplace_back(axis.key, value);
                char *end = nullptr;
                const double x = std::strtod(value.c_str(), &end);
                const bool numeric = !value.empty() && end == value.c_str() + value.size() && std::isfinite(x);
                auto need_number = [&]
                {
                    if (!numeric)
                        throw ConfigError("[sweep] " + axis.key + ": expected a number, got '" + value + "'");
                };
                if (axis.key == "P_max_dBm")
                {
                    need_number();
                    gp.system.max_power_w = dbm_to_watt(x);
                }
                else if (axis.key == "delta")
                {
                    need_number();
                    if (x < 0.0)
                        throw ConfigError("[sweep] delta: must be >= 0");
                    gp.delta = x;
                }
                else if (axis.key == "theta0")
                {
                    need_number();
                    gp.theta0 = x;
                }
                else if (axis.key == "ris_grid")
                {
                    const auto [rows, cols] = parse_grid(value);
                    gp.system.ris_rows = rows;
                    gp.system.ris_cols = cols;
                }
                else if (axis.key == "D_over_Tc")
                {
                    const auto step = parse_step(value);
                    for (auto &s : gp.schemes)
                        if (s.arch.kind != SchemeKind::ps_only)
                            s.arch.delay_step_tc = step;
                }
                next.push_back(std::move(gp));
            }
        points = std::move(next);
    }
    for (auto &gp : points)
    {
        gp.system.validate();
        for (const auto &s : gp.schemes)
            s.arch.validate(gp.system.bs_antennas);
        if (std::abs(gp.theta0) > 0.5 * kPi)
            throw ConfigError("theta0 must lie in [-pi/2, pi/2]");
    }
    return points;
}

Scenario trial_scenario(const ExperimentSpec &spec, const SystemConfig &cfg, int trial)
{
    Rng rng(mix_seed(spec.seed, {static_cast<std::uint64_t>(trial), 1}));
    Geometry g;
    g.bs = spec.scenario.bs;
    if (!spec.scenario.direct_link)
        g.ris = spec.scenario.ris;
    for (int k = 0; k < cfg.users; ++k)
        g.users.push_back(uniform_disk_point(spec.scenario.user_centre, spec.scenario.user_radius, rng));
    return make_scenario(g, cfg, GainSpec{spec.scenario.gain, mix_seed(spec.seed, {static_cast<std::uint64_t>(trial), 2})});
}

std::uint64_t trial_csi_seed(const ExperimentSpec &spec, int trial)
{
    return mix_seed(spec.seed, {static_cast<std::uint64_t>(trial), 3});
}

std::string render_csv(const ExperimentSpec &spec)
{
    const std::vector<GridPoint> grid = expand_grid(spec);
    std::ostringstream out;
    out << "# thzris " << library_version() << "\n";
    out << "# experiment: " << to_string(spec.id) << "\n";
    out << "# seed: " << spec.seed << "\n";
    out << "# trials: " << spec.trials << "\n";
    out << "# gain_model: " << to_string(spec.scenario.gain) << "\n";
    out << "# link: " << (spec.scenario.direct_link ? "direct" : "ris") << "\n";
    for (const auto &axis : spec.sweep)
    {
        out << "# sweep " << axis.key << ":";
        for (const auto &v : axis.values)
            out << " " << v;
        out << "\n";
    }
    for (const auto &s : spec.schemes)
        out << "# scheme " << s.label << ": " << s.arch.label() << " D_over_Tc="
            << (s.arch.delay_step_tc ? num(*s.arch.delay_step_tc) : std::string("continuous"))
            << " ps_bits=" << s.arch.ps_bits << "\n";

    std::string prefix_header;
    for (const auto &axis : spec.sweep)
        prefix_header += axis.key + ",";
    auto prefix = [](const GridPoint &gp)
    {
        std::string p;
        for (const auto &[k, v] : gp.values)
            p += v + ",";
        return p;
    };

    const ExperimentId id = spec.id;
    if (is_analysis(id))
    {
        if (id == ExperimentId::phase_compensation)
            out << prefix_header << "scheme,antenna,f_m_Hz,theta0_rad,ideal_phase_rad,applied_phase_rad\n";
        else if (id == ExperimentId::phase_error)
            out << prefix_header << "scheme,antenna,f_m_Hz,theta0_rad,phase_error_rad\n";
        else
            out << prefix_header << "scheme,f_m_Hz,theta0_rad,gain\n";

        for (const auto &gp : grid)
        {
            const SystemConfig &cfg = gp.system;
            const double f = spec.freq_hz.value_or(cfg.carrier_hz + 0.5 * cfg.bandwidth_hz);
            for (const auto &s : gp.schemes)
            {
                if (id == ExperimentId::gain_vs_subcarrier)
                {
                    for (double fm : subcarrier_frequencies(cfg))
                        out << prefix(gp) << field(s.label) << "," << num(fm) << "," << num(gp.theta0) << ","
                            << num(gain_brute_force(s.arch, fm, gp.theta0, cfg)) << "\n";
                    continue;
                }
                const Eigen::VectorXcd w = steering_weights(s.arch, gp.theta0, f, cfg);
                for (int n = 1; n <= cfg.bs_antennas; ++n)
                {
                    out << prefix(gp) << field(s.label) << "," << n << "," << num(f) << "," << num(gp.theta0) << ",";
                    if (id == ExperimentId::phase_compensation)
                        out << num(wrap_phase(kTwoPi * f * (n - 1) * cfg.antenna_delay() * std::sin(gp.theta0)))
                            << "," << num(wrap_phase(std::arg(w(n - 1)))) << "\n";
                    else
                        out << num(phase_error(s.arch, n, f, gp.theta0, cfg)) << "\n";
                }
            }
        }
        return out.str();
    }

    if (id == ExperimentId::hardware_table && !spec.include_rate)
    {
        out << prefix_header << "scheme,large_ttds,total_ttds,total_bits,delay_ranges_Tc\n";
        for (const auto &gp : grid)
            for (const auto &s : gp.schemes)
            {
                const HardwareReport hw = hardware_report(gp.system, s.arch);
                out << prefix(gp) << field(s.label) << "," << hw.large_ttds << "," << hw.total_ttds << "," << hw.total_bits
                    << "," << delay_ranges_text(hw) << "\n";
            }
        return out.str();
    }

    // Monte-Carlo experiments: every (grid point, scheme, trial) is an independent task and the
    // reduction below runs in trial order.
    const std::size_t S = spec.schemes.size();
    const std::size_t T = static_cast<std::size_t>(spec.trials);
    std::vector<TrialOutcome> outcomes(grid.size() * S * T);
    parallel_for(outcomes.size(), spec.threads,
                 [&](std::size_t i)
                 {
                     const std::size_t g = i / (S * T);
                     const std::size_t s = (i / T) % S;
                     const int t = static_cast<int>(i % T);
                     outcomes[i] = run_trial(spec, grid[g], grid[g].schemes[s], t);
                 });
    auto at = [&](std::size_t g, std::size_t s, std::size_t t) -> const TrialOutcome &
    { return outcomes[(g * S + s) * T + t]; };

    const double inv = 1.0 / static_cast<double>(T);
    if (id == ExperimentId::outer_convergence)
    {
        out << prefix_header << "scheme,iteration,rate_sum,rate_per_subcarrier\n";
        const std::size_t len = static_cast<std::size_t>(spec.solve.outer_iterations) + 1;
        for (std::size_t g = 0; g < grid.size(); ++g)
            for (std::size_t s = 0; s < S; ++s)
                for (std::size_t i = 0; i < len; ++i)
                {
                    double acc = 0.0;
                    for (std::size_t t = 0; t < T; ++t)
                        acc += padded(at(g, s, t).outer, i);
                    const double mean = acc * inv;
                    out << prefix(grid[g]) << field(grid[g].schemes[s].label) << "," << i << "," << num(mean) << ","
                        << num(mean / grid[g].system.subcarriers) << "\n";
                }
        return out.str();
    }
    if (id == ExperimentId::inner_convergence)
    {
        out << prefix_header << "scheme,outer_iteration,stage,iteration,rate_sum,rate_per_subcarrier\n";
        const int rounds = spec.solve.outer_iterations;
        for (std::size_t g = 0; g < grid.size(); ++g)
            for (std::size_t s = 0; s < S; ++s)
                for (int r = 0; r < rounds; ++r)
                    for (int stage = 0; stage < 2; ++stage)
                    {
                        const std::size_t len = static_cast<std::size_t>(
                            stage == 0 ? spec.solve.inner_iterations : spec.solve.reflection_passes) + 1;
                        for (std::size_t i = 0; i < len; ++i)
                        {
                            double acc = 0.0;
                            for (std::size_t t = 0; t < T; ++t)
                            {
                                const TrialOutcome &o = at(g, s, t);
                                const auto &traces = stage == 0 ? o.inner : o.reflection;
                                // rounds skipped by the outer early exit hold the final rate
                                acc += static_cast<std::size_t>(r) < traces.size() ? padded(traces[r], i)
                                                                                   : padded(o.outer, o.outer.size());
                            }
                            const double mean = acc * inv;
                            out << prefix(grid[g]) << field(grid[g].schemes[s].label) << "," << (r + 1) << ","
                                << (stage == 0 ? "digital" : "reflection") << "," << i << "," << num(mean) << ","
                                << num(mean / grid[g].system.subcarriers) << "\n";
                        }
                    }
        return out.str();
    }

    if (id == ExperimentId::hardware_table)
        out << prefix_header << "scheme,large_ttds,total_ttds,total_bits,delay_ranges_Tc,trials,rate_sum,rate_per_subcarrier\n";
    else
        out << prefix_header << "scheme,trials,rate_sum,rate_per_subcarrier\n";
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (std::size_t s = 0; s < S; ++s)
        {
            double acc = 0.0;
            double acc_sc = 0.0;
            for (std::size_t t = 0; t < T; ++t)
            {
                acc += at(g, s, t).rate.total;
                acc_sc += at(g, s, t).rate.per_subcarrier;
            }
            const SchemeSpec &sch = grid[g].schemes[s];
            out << prefix(grid[g]) << field(sch.label) << ",";
            if (id == ExperimentId::hardware_table)
            {
                const HardwareReport hw = hardware_report(grid[g].system, sch.arch);
                out << hw.large_ttds << "," << hw.total_ttds << "," << hw.total_bits << "," << delay_ranges_text(hw)
                    << ",";
            }
            out << T << "," << num(acc * inv) << "," << num(acc_sc * inv) << "\n";
        }
    return out.str();
}

void write_file_atomic(const std::string &path, const std::string &content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out)
        {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
    {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto '" + target.string() + "'");
    }
}

ExperimentOutput run_experiment(const ExperimentSpec &spec)
{
    namespace fs = std::filesystem;
    std::string dir = spec.output_dir;
    if (dir.empty())
    {
        const char *env = std::getenv("THZRIS_OUT_DIR");
        dir = env && *env ? env : ".";
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir + "'");

    const auto start = std::chrono::steady_clock::now();
    const std::string csv = render_csv(spec);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ExperimentOutput out;
    const std::string stem = to_string(spec.id);
    out.csv_path = (fs::path(dir) / (stem + ".csv")).string();
    out.manifest_path = (fs::path(dir) / (stem + ".json")).string();
    out.wall_seconds = wall;

    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    for (const auto &s : spec.source.sections)
    {
        nlohmann::ordered_json sec = nlohmann::ordered_json::object();
        for (const auto &[k, v] : s.entries)
            sec[k] = v;
        const std::string name = s.label.empty() ? s.name : s.name + " " + s.label;
        config[name] = sec;
    }
    nlohmann::ordered_json schemes = nlohmann::ordered_json::array();
    for (const auto &s : spec.schemes)
        schemes.push_back({{"label", s.label},
                           {"architecture", s.arch.label()},
                           {"D_over_Tc", s.arch.delay_step_tc ? nlohmann::ordered_json(*s.arch.delay_step_tc)
                                                              : nlohmann::ordered_json("continuous")},
                           {"ps_bits", s.arch.ps_bits}});
    nlohmann::ordered_json manifest = {
        {"experiment", stem},
        {"version", "thzris-" + library_version()},
        {"seed", spec.seed},
        {"trials", spec.trials},
        {"threads", spec.threads},
        {"gain_model", to_string(spec.scenario.gain)},
        {"wall_time_s", wall},
        {"csv", fs::path(out.csv_path).filename().string()},
        {"schemes", schemes},
        {"config", config},
    };

    write_file_atomic(out.csv_path, csv);
    write_file_atomic(out.manifest_path, manifest.dump(2) + "\n");
    return out;
}

} // namespace thzris
