// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The blindnull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "blindnull/radiosim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blindnull::radiosim {

void ChannelSet::validate() const
{
    if (h12.size() == 0 || !h12.allFinite() || h12.norm() == 0.0)
        throw std::invalid_argument("H12 must be nonzero and finite");
    if (n_r() >= n_t())
        throw std::invalid_argument("need n_r < n_t for a null space");
    if (h21.rows() != n_t() || h21.cols() != p1.rows() || p1.rows() != p1.cols())
        throw std::invalid_argument("H21 / P1 dimensions inconsistent");
    if (!(noise_var_pu >= 0.0) || !(noise_var_su >= 0.0))
        throw std::invalid_argument("noise variances must be non-negative");
}

ChannelSet random_channel(int n_r, int n_t, std::uint64_t seed)
{
    if (n_r < 1 || n_r >= n_t)
        throw std::invalid_argument("random_channel needs 1 <= n_r < n_t");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const auto draw = [&](int r, int c) {
        ComplexMatrix m(r, c);
        for (int j = 0; j < c; ++j)
            for (int i = 0; i < r; ++i)
                m(i, j) = {g(rng), g(rng)};
        return m;
    };
    ChannelSet ch;
    ch.h12 = draw(n_r, n_t);
    ch.h12 /= std::sqrt((ch.h12.adjoint() * ch.h12).norm());
    ch.h21 = draw(n_t, n_r);
    ch.p1 = ComplexMatrix::Identity(n_r, n_r);
    return ch;
}

std::string to_string(PowerControlKind k)
{
    return k == PowerControlKind::SnrTarget ? "snr_target" : "waterfilling";
}

PowerControlKind power_control_from_string(const std::string& s)
{
    if (s == "snr_target")
        return PowerControlKind::SnrTarget;
    if (s == "waterfilling" || s == "waterfilling_proxy")
        return PowerControlKind::WaterfillingProxy;
    throw std::invalid_argument("unknown power control kind: " + s);
}

PowerStep step_power_control(const PowerControlModel& m, double noise_var_pu, double /*p_prev*/,
                             double interference)
{
    if (!(interference >= 0.0))
        throw std::invalid_argument("interference must be non-negative");
    const double raw = m.kind == PowerControlKind::SnrTarget
                           ? m.gamma_target * (noise_var_pu + interference) / m.g_eff
                           : m.water_level - (noise_var_pu + interference);
    PowerStep s;
    s.p = std::clamp(raw, m.p_min, m.p_max);
    s.saturated = raw <= m.p_min || raw >= m.p_max;
    return s;
}

RadioOracle::RadioOracle(ChannelSet channel, PowerControlModel model, MeasurementConfig meas)
    : QueryOracle(model.kind == PowerControlKind::SnrTarget ? oracle::Direction::Increasing
                                                            : oracle::Direction::Decreasing),
      channel_(std::move(channel)), model_(model), meas_(meas), rng_(meas.seed)
{
    channel_.validate();
    if (!(model_.p_min < model_.p_max) || !(model_.g_eff > 0.0) || !(model_.gamma_target > 0.0))
        throw std::invalid_argument("invalid power control model");
    if (meas_.N_prime < 1 || meas_.N < meas_.N_prime)
        throw std::invalid_argument("need 1 <= N' <= N");
    // a1 = ||H21 P1||_F^2, a2 = E||v2||^2
    a1_ = (channel_.h21 * channel_.p1).squaredNorm();
    a2_ = channel_.n_t() * channel_.noise_var_su;
}

double RadioOracle::baseline_q() const
{
    return a1_ * step_power_control(model_, channel_.noise_var_pu, p_, 0.0).p + a2_;
}

double RadioOracle::measure(const ComplexVector& x)
{
    const double interference = (channel_.h12 * x).squaredNorm();
    const PowerStep s = step_power_control(model_, channel_.noise_var_pu, p_, interference);
    p_ = s.p;
    saturated_in_phase_ = saturated_in_phase_ || s.saturated;
    double q = a1_ * p_ + a2_;
    if (meas_.noise_enabled && meas_.noise_std > 0.0) {
        std::normal_distribution<double> n(0.0, meas_.noise_std);
        double acc = 0.0;
        for (int i = 0; i < meas_.N_prime; ++i)
            acc += n(rng_);
        q += acc / meas_.N_prime;
    }
    return q;
}

std::unique_ptr<RadioOracle> as_oracle(ChannelSet channel, PowerControlModel model,
                                       MeasurementConfig meas)
{
    return std::make_unique<RadioOracle>(std::move(channel), model, meas);
}

} // namespace blindnull::radiosim
