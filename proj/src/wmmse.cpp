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

#include "thzris/wmmse.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace thzris
{

namespace
{

// Desired amplitude h d_k, interference-plus-noise power and T = sum_j |h d_j|^2 + sigma^2.
struct Received
{
    cd desired;
    double rest;
    double total;
};

Received received(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power, int m, int k)
{
    const auto &h = equivalent(m, k);
    Received out{{0.0, 0.0}, noise_power, 0.0};
    for (int j = 0; j < d.users(); ++j)
    {
        const cd y = (h * d(m, j)).value();
        if (j == k)
            out.desired = y;
        else
            out.rest += std::norm(y);
    }
    out.total = out.rest + std::norm(out.desired);
    return out;
}

void check_grid(const EffectiveChannels &equivalent, const DigitalBeamformer &d)
{
    if (d.subcarriers() != equivalent.subcarriers() || d.users() != equivalent.users())
        throw ConfigError("precoder grid does not match the channel grid");
}

double rate_of(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power)
{
    const double r = sum_rate(sinr(equivalent, d, noise_power)).total;
    if (!std::isfinite(r))
        throw NumericalError("sum rate is not finite");
    return r;
}

// Whitened per-subcarrier system. W spans the column space of F^H F with W^H F^H F W = I, so
// d = W x gives ||F d|| = ||x||. With W^H A W = V diag(lambda) V^H,
// d_k = W V diag(1 / (lambda + mu)) c_k and ||F d_k||^2 = sum_i |c_ki|^2 / (lambda_i + mu)^2.
// Directions outside the column space of F carry no power and are left at zero.
struct Whitened
{
    Eigen::MatrixXcd whiten;
    Eigen::MatrixXcd basis;
    Eigen::VectorXd eig;
    std::vector<Eigen::VectorXcd> coeff;
    double null_level = 0.0;
};

double power_at(const std::vector<Whitened> &sys, double mu)
{
    double p = 0.0;
    for (const auto &w : sys)
        for (const auto &c : w.coeff)
            for (Eigen::Index i = 0; i < c.size(); ++i)
            {
                if (mu == 0.0 && w.eig(i) <= w.null_level)
                    continue;
                const double den = w.eig(i) + mu;
                p += std::norm(c(i)) / (den * den);
            }
    return p;
}

} // namespace

UserGrid<cd> update_combiners(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power)
{
    check_grid(equivalent, d);
    UserGrid<cd> chi(equivalent.subcarriers(), equivalent.users());
    for (int m = 0; m < equivalent.subcarriers(); ++m)
        for (int k = 0; k < equivalent.users(); ++k)
        {
            const Received rx = received(equivalent, d, noise_power, m, k);
            chi(m, k) = std::conj(rx.desired) / rx.total;
        }
    return chi;
}

WmmseWeights update_weights(const EffectiveChannels &equivalent, const DigitalBeamformer &d, double noise_power)
{
    check_grid(equivalent, d);
    const int M = equivalent.subcarriers();
    const int K = equivalent.users();
    WmmseWeights w{UserGrid<double>(M, K, 1.0), UserGrid<double>(M, K, 1.0)};
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
        {
            const Received rx = received(equivalent, d, noise_power, m, k);
            const double xi = rx.rest / rx.total;
            if (!(xi > 0.0))
                throw NumericalError("mean squared error collapsed to zero");
            w.xi(m, k) = xi;
            w.omega(m, k) = 1.0 / xi;
        }
    return w;
}

double mean_squared_error(const EffectiveChannels &equivalent, const DigitalBeamformer &d, const UserGrid<cd> &chi,
                          double noise_power, int m, int k)
{
    const Received rx = received(equivalent, d, noise_power, m, k);
    const cd c = chi(m, k);
    return std::norm(c) * rx.total - 2.0 * std::real(c * rx.desired) + 1.0;
}

double wmmse_objective(const EffectiveChannels &equivalent, const DigitalBeamformer &d, const UserGrid<cd> &chi,
                       const UserGrid<double> &omega, double noise_power)
{
    check_grid(equivalent, d);
    double obj = 0.0;
    for (int m = 0; m < equivalent.subcarriers(); ++m)
        for (int k = 0; k < equivalent.users(); ++k)
        {
            const double w = omega(m, k);
            obj += w * mean_squared_error(equivalent, d, chi, noise_power, m, k) / std::log(2.0) - std::log2(w);
        }
    return obj;
}

PrecoderUpdate update_precoders(const EffectiveChannels &equivalent, const UserGrid<cd> &chi,
                                const UserGrid<double> &omega, const AnalogMatrices &F, double max_power)
{
    const int M = equivalent.subcarriers();
    const int K = equivalent.users();
    if (static_cast<int>(F.size()) != M)
        throw ConfigError("one analog matrix per subcarrier is required");
    if (!(max_power > 0.0))
        throw ConfigError("P_max must be positive");

    std::vector<Whitened> sys(M);
    double energy = 0.0;
    for (int m = 0; m < M; ++m)
    {
        const Eigen::Index n_rf = F[m].cols();
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n_rf, n_rf);
        for (int j = 0; j < K; ++j)
        {
            const auto &h = equivalent(m, j);
            A.noalias() += (omega(m, j) * std::norm(chi(m, j))) * (h.adjoint() * h);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(F[m].adjoint() * F[m]);
        if (gram.info() != Eigen::Success)
            throw NumericalError("eigendecomposition of F^H F failed");
        Whitened &w = sys[m];
        const Eigen::VectorXd s = gram.eigenvalues();
        const double floor = 1e-12 * std::max(s.maxCoeff(), 0.0);
        int rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            rank += s(i) > floor && s(i) > 0.0;
        w.whiten.resize(n_rf, rank);
        for (Eigen::Index i = s.size() - rank, c = 0; i < s.size(); ++i, ++c)
            w.whiten.col(c) = gram.eigenvectors().col(i) / std::sqrt(s(i));
        Eigen::MatrixXcd C = w.whiten.adjoint() * A * w.whiten;
        C = 0.5 * (C + C.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
        if (es.info() != Eigen::Success)
            throw NumericalError("eigendecomposition failed in the precoder update");
        w.basis = es.eigenvectors();
        w.eig = es.eigenvalues().cwiseMax(0.0);
        w.null_level = rank > 0 ? 1e-12 * w.eig.maxCoeff() : 0.0;
        w.coeff.resize(K);
        for (int k = 0; k < K; ++k)
        {
            const Eigen::VectorXcd rhs = (omega(m, k) * std::conj(chi(m, k))) * equivalent(m, k).adjoint();
            w.coeff[k] = w.basis.adjoint() * (w.whiten.adjoint() * rhs);
            energy += w.coeff[k].squaredNorm();
        }
    }

    double mu = 0.0;
    if (energy > 0.0 && power_at(sys, 0.0) > max_power)
    {
        double lo = 0.0;
        double hi = std::sqrt(energy / max_power);
        while (hi - lo > 1e-10 * hi)
        {
            const double mid = 0.5 * (lo + hi);
            if (power_at(sys, mid) > max_power)
                lo = mid;
            else
                hi = mid;
        }
        mu = hi;
    }

    PrecoderUpdate out{DigitalBeamformer(M, K), mu};
    for (int m = 0; m < M; ++m)
    {
        const Whitened &w = sys[m];
        for (int k = 0; k < K; ++k)
        {
            Eigen::VectorXcd scaled = w.coeff[k];
            for (Eigen::Index i = 0; i < scaled.size(); ++i)
                scaled(i) = (mu == 0.0 && w.eig(i) <= w.null_level) ? cd{0.0, 0.0} : scaled(i) / (w.eig(i) + mu);
            out.d(m, k) = w.whiten * (w.basis * scaled);
        }
    }
    return out;
}

DigitalBeamformer scale_to_power(DigitalBeamformer d, const AnalogMatrices &F, double max_power)
{
    const double p = transmit_power(F, d);
    if (p > max_power)
    {
        const double s = std::sqrt(max_power / p);
        for (auto &v : d)
            v *= s;
    }
    return d;
}

DigitalBeamformer matched_filter(const EffectiveChannels &equivalent, const AnalogMatrices &F, double max_power)
{
    DigitalBeamformer d(equivalent.subcarriers(), equivalent.users());
    for (int m = 0; m < equivalent.subcarriers(); ++m)
        for (int k = 0; k < equivalent.users(); ++k)
            d(m, k) = equivalent(m, k).adjoint();
    const double p = transmit_power(F, d);
    if (p > 0.0)
    {
        const double s = std::sqrt(max_power / p);
        for (auto &v : d)
            v *= s;
    }
    return d;
}

WmmseResult wmmse_solve(const EffectiveChannels &equivalent, const AnalogMatrices &F, double max_power,
                        double noise_power, const DigitalBeamformer &d_init, const WmmseOptions &options)
{
    check_grid(equivalent, d_init);
    WmmseResult out;
    out.d = scale_to_power(d_init, F, max_power);
    out.rate_trace.push_back(rate_of(equivalent, out.d, noise_power));
    for (int it = 0; it < options.max_iterations; ++it)
    {
        const UserGrid<cd> chi = update_combiners(equivalent, out.d, noise_power);
        const WmmseWeights w = update_weights(equivalent, out.d, noise_power);
        out.d = update_precoders(equivalent, chi, w.omega, F, max_power).d;
        const double prev = out.rate_trace.back();
        const double rate = rate_of(equivalent, out.d, noise_power);
        out.rate_trace.push_back(rate);
        ++out.iterations;
        if (std::abs(rate - prev) <= options.tolerance * std::abs(prev))
            break;
    }
    return out;
}

} // namespace thzris
