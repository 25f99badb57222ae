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

#include "thzris/ris_opt.hpp"

#include <cmath>

namespace thzris
{

std::vector<cd> candidate_set(int bits)
{
    if (bits < 1 || bits > 16)
        throw ConfigError("reflection bits Q must lie in [1, 16]");
    const int n = 1 << bits;
    std::vector<cd> out(n);
    out[0] = {1.0, 0.0};
    for (int q = 1; q < n; ++q)
    {
        // exact values on the axes keep |phi| = 1 and +-1, +-j exact
        if (4 * q == n)
            out[q] = {0.0, 1.0};
        else if (2 * q == n)
            out[q] = {-1.0, 0.0};
        else if (4 * q == 3 * n)
            out[q] = {0.0, -1.0};
        else
            out[q] = std::polar(1.0, kTwoPi * q / n);
    }
    return out;
}

ReflectionConfig::ReflectionConfig(int ris_count, int elements_per_ris, int bits)
    : bits_(bits), ris_count_(ris_count), elements_per_ris_(elements_per_ris), alphabet_(candidate_set(bits))
{
    if (ris_count < 0 || elements_per_ris < 0)
        throw ConfigError("reflection configuration dimensions must be non-negative");
    indices_.assign(static_cast<std::size_t>(ris_count) * elements_per_ris, 0);
}

ReflectionConfig ReflectionConfig::all_ones(int ris_count, int elements_per_ris, int bits)
{
    return ReflectionConfig(ris_count, elements_per_ris, bits);
}

void ReflectionConfig::set_index(int element, int alphabet_index)
{
    if (alphabet_index < 0 || alphabet_index >= static_cast<int>(alphabet_.size()))
        throw ConfigError("reflection index outside the alphabet");
    indices_.at(element) = alphabet_index;
}

ReflectionObjective::ReflectionObjective(const ChannelSet &channels, const AnalogMatrices &F,
                                         const DigitalBeamformer &d, double noise_power)
    : ris_count_(channels.ris_count()), elements_per_ris_(channels.ris_elements()),
      elements_(channels.ris_count() * channels.ris_elements()), subcarriers_(channels.subcarriers()),
      users_(channels.users()), noise_(noise_power)
{
    const int M = subcarriers_;
    const int K = users_;
    if (static_cast<int>(F.size()) != M || d.subcarriers() != M || d.users() != K)
        throw ConfigError("reflection objective: F and d must match the channel grid");

    base_.assign(static_cast<std::size_t>(M) * K * K, cd{0.0, 0.0});
    terms_.assign(static_cast<std::size_t>(elements_) * M * K * K, cd{0.0, 0.0});

    for (int m = 0; m < M; ++m)
    {
        Eigen::MatrixXcd D(F[m].cols(), K);
        for (int j = 0; j < K; ++j)
            D.col(j) = d(m, j);
        const Eigen::MatrixXcd FD = F[m] * D; // N x K transmitted vectors

        if (channels.has_direct())
            for (int k = 0; k < K; ++k)
            {
                const Eigen::RowVectorXcd y = channels.direct(m, k) * FD;
                for (int j = 0; j < K; ++j)
                    base_[(static_cast<std::size_t>(m) * K + k) * K + j] = y(j);
            }

        for (int r = 0; r < ris_count_; ++r)
        {
            const Eigen::MatrixXcd GFD = channels.bs_ris(r, m) * FD; // N_RIS x K
            for (int k = 0; k < K; ++k)
            {
                const auto &f = channels.ris_user(r, m, k);
                for (int n = 0; n < elements_per_ris_; ++n)
                {
                    const int e = r * elements_per_ris_ + n;
                    for (int j = 0; j < K; ++j)
                        terms_[term_index(e, m, k, j)] = f(n) * GFD(n, j);
                }
            }
        }
    }
}

double ReflectionObjective::rate_from(const std::vector<cd> &amplitudes) const
{
    const int K = users_;
    double total = 0.0;
    for (int m = 0; m < subcarriers_; ++m)
        for (int k = 0; k < K; ++k)
        {
            const cd *row = &amplitudes[(static_cast<std::size_t>(m) * K + k) * K];
            double interference = 0.0;
            for (int j = 0; j < K; ++j)
                if (j != k)
                    interference += std::norm(row[j]);
            total += std::log2(1.0 + std::norm(row[k]) / (interference + noise_));
        }
    return total;
}

std::vector<cd> ReflectionObjective::amplitudes(const ReflectionConfig &theta) const
{
    if (theta.size() != elements_)
        throw ConfigError("reflection configuration does not match the objective");
    std::vector<cd> s = base_;
    const std::size_t block = s.size();
    for (int e = 0; e < elements_; ++e)
    {
        const cd phi = theta.coefficient(e);
        const cd *t = &terms_[static_cast<std::size_t>(e) * block];
        for (std::size_t i = 0; i < block; ++i)
            s[i] += phi * t[i];
    }
    return s;
}

double ReflectionObjective::sum_rate(const ReflectionConfig &theta) const
{
    return rate_from(amplitudes(theta));
}

std::vector<double> ReflectionObjective::candidate_rates(const ReflectionConfig &theta, int element) const
{
    if (theta.size() != elements_)
        throw ConfigError("reflection configuration does not match the objective");
    // The other elements are summed afresh in a fixed order.
    std::vector<cd> rest = base_;
    const std::size_t block = rest.size();
    for (int e = 0; e < elements_; ++e)
    {
        if (e == element)
            continue;
        const cd phi = theta.coefficient(e);
        const cd *t = &terms_[static_cast<std::size_t>(e) * block];
        for (std::size_t i = 0; i < block; ++i)
            rest[i] += phi * t[i];
    }
    std::vector<double> rates(theta.alphabet().size());
    const cd *t = &terms_[static_cast<std::size_t>(element) * block];
    std::vector<cd> s(block);
    for (std::size_t q = 0; q < rates.size(); ++q)
    {
        for (std::size_t i = 0; i < block; ++i)
            s[i] = rest[i] + theta.alphabet()[q] * t[i];
        rates[q] = rate_from(s);
    }
    return rates;
}

std::vector<double> ReflectionObjective::candidate_rates(const std::vector<cd> &amplitudes,
                                                         const ReflectionConfig &theta, int element) const
{
    const std::size_t block = base_.size();
    if (amplitudes.size() != block || theta.size() != elements_)
        throw ConfigError("reflection configuration does not match the objective");
    const cd *t = &terms_[static_cast<std::size_t>(element) * block];
    const cd current = theta.coefficient(element);
    std::vector<double> rates(theta.alphabet().size());
    std::vector<cd> s(block);
    for (std::size_t q = 0; q < rates.size(); ++q)
    {
        const cd delta = theta.alphabet()[q] - current;
        for (std::size_t i = 0; i < block; ++i)
            s[i] = amplitudes[i] + delta * t[i];
        rates[q] = rate_from(s);
    }
    return rates;
}

void ReflectionObjective::move_element(std::vector<cd> &amplitudes, int element, cd from, cd to) const
{
    const std::size_t block = base_.size();
    const cd *t = &terms_[static_cast<std::size_t>(element) * block];
    const cd delta = to - from;
    for (std::size_t i = 0; i < block; ++i)
        amplitudes[i] += delta * t[i];
}

PassResult coordinate_pass(ReflectionConfig &theta, const ReflectionObjective &objective)
{
    PassResult out;
    // Amplitudes are rebuilt at the start of every pass and then updated in place.
    std::vector<cd> amp = objective.amplitudes(theta);
    for (int e = 0; e < objective.elements(); ++e)
    {
        const std::vector<double> rates = objective.candidate_rates(amp, theta, e);
        out.evaluations += static_cast<long long>(rates.size());
        int best = 0;
        for (int q = 1; q < static_cast<int>(rates.size()); ++q)
            if (rates[q] > rates[best])
                best = q;
        if (!std::isfinite(rates[best]))
            throw NumericalError("reflection objective is not finite");
        if (best != theta.index(e))
        {
            objective.move_element(amp, e, theta.coefficient(e), theta.alphabet()[best]);
            theta.set_index(e, best);
            out.changed = true;
        }
        out.element_rates.push_back(rates[best]);
    }
    out.rate = objective.sum_rate(theta);
    return out;
}

ReflectionResult optimize_reflection(const ReflectionConfig &init, const ReflectionObjective &objective,
                                     int max_passes)
{
    if (max_passes < 1)
        throw ConfigError("I_o must be >= 1");
    ReflectionResult out;
    out.theta = init;
    out.pass_rates.push_back(objective.sum_rate(init));
    if (objective.elements() == 0)
    {
        out.converged = true;
        return out;
    }
    for (int pass = 0; pass < max_passes; ++pass)
    {
        PassResult p = coordinate_pass(out.theta, objective);
        ++out.passes;
        out.evaluations += p.evaluations;
        out.pass_rates.push_back(p.rate);
        out.element_rates.insert(out.element_rates.end(), p.element_rates.begin(), p.element_rates.end());
        if (!p.changed)
        {
            out.converged = true;
            break;
        }
    }
    return out;
}

ReflectionResult optimize_reflection(const ReflectionConfig &init, const ChannelSet &channels,
                                     const AnalogMatrices &F, const DigitalBeamformer &d, double noise_power,
                                     int max_passes)
{
    return optimize_reflection(init, ReflectionObjective(channels, F, d, noise_power), max_passes);
}

} // namespace thzris
