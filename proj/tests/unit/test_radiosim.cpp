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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "blindnull/bnsl.hpp"
#include "blindnull/radiosim.hpp"
#include "fixtures.hpp"

using namespace blindnull;
using namespace blindnull::radiosim;

TEST(PowerControl, SnrTargetExamples)
{
    const PowerControlModel m;
    EXPECT_DOUBLE_EQ(step_power_control(m, 0.1, 0.0, 0.0).p, 1.0);
    const double p1 = step_power_control(m, 0.1, 0.0, 0.1).p;
    const double p2 = step_power_control(m, 0.1, 0.0, 0.2).p;
    EXPECT_DOUBLE_EQ(p1, 2.0);
    EXPECT_DOUBLE_EQ(p2, 3.0);
    EXPECT_FALSE(step_power_control(m, 0.1, 0.0, 0.2).saturated);
}

TEST(PowerControl, Saturation)
{
    const PowerControlModel m;
    const PowerStep s = step_power_control(m, 0.1, 0.0, 1e6);
    EXPECT_EQ(s.p, m.p_max);
    EXPECT_TRUE(s.saturated);
    PowerControlModel w;
    w.kind = PowerControlKind::WaterfillingProxy;
    const PowerStep d = step_power_control(w, 0.1, 0.0, 50.0);
    EXPECT_EQ(d.p, w.p_min);
    EXPECT_TRUE(d.saturated);
    EXPECT_THROW(step_power_control(m, 0.1, 0.0, -1.0), std::invalid_argument);
}

TEST(PowerControl, WaterfillingDecreasing)
{
    PowerControlModel w;
    w.kind = PowerControlKind::WaterfillingProxy;
    EXPECT_DOUBLE_EQ(step_power_control(w, 0.1, 0.0, 0.0).p, 9.9);
    EXPECT_GT(step_power_control(w, 0.1, 0.0, 0.1).p, step_power_control(w, 0.1, 0.0, 0.2).p);
}

TEST(RandomChannel, DeterministicAndNormalised)
{
    const ChannelSet a = random_channel(2, 4, 7), b = random_channel(2, 4, 7), c = random_channel(2, 4, 8);
    EXPECT_EQ((a.h12 - b.h12).norm(), 0.0);
    EXPECT_GT((a.h12 - c.h12).norm(), 0.0);
    EXPECT_NEAR(a.gram().frobenius_norm(), 1.0, 1e-12);
    EXPECT_THROW(random_channel(3, 3, 1), std::invalid_argument);
}

TEST(RandomChannel, RankIsNr)
{
    for (int s = 0; s < 500; ++s) {
        const int n_t = 2 + s % 7;
        const int n_r = 1 + s % (n_t - 1);
        const auto ev = linalg::sorted_eigenvalues(random_channel(n_r, n_t, s).gram());
        ASSERT_GT(ev(n_t - n_r), 1e-10) << s;
        ASSERT_LT(std::abs(ev(n_t - n_r - 1)), 1e-10) << s;
    }
}

TEST(RadioOracle, NullProbeGivesBaseline)
{
    const ChannelSet ch = random_channel(2, 3, 11);
    RadioOracle o(ch, {});
    EXPECT_EQ(o.direction(), oracle::Direction::Increasing);
    const auto ev = linalg::reference_cyclic_jacobi(ch.gram(), 1e-15);
    int idx = 0;
    ev.eigenvalues.minCoeff(&idx);
    o.advance_phase();
    const double q0 = o.baseline_q();
    EXPECT_NEAR(o.probe(ev.eigenvectors.col(idx)), q0, 1e-12);
    EXPECT_DOUBLE_EQ(o.probe(linalg::ComplexVector::Zero(3)), q0);
    o.advance_phase();
    EXPECT_DOUBLE_EQ(o.probe(linalg::ComplexVector::Zero(3)), q0);
}

TEST(RadioOracle, AffineCoefficientsRecoverable)
{
    const ChannelSet ch = random_channel(2, 4, 12);
    RadioOracle o(ch, {});
    o.advance_phase();
    // two probes with known interference pin down q = a1 p + a2
    linalg::ComplexVector x = linalg::ComplexVector::Zero(4);
    const double q0 = o.probe(x);
    const double p0 = o.last_power();
    x(0) = 1.0;
    const double q1 = o.probe(x);
    const double p1 = o.last_power();
    const double a1 = (q1 - q0) / (p1 - p0);
    const double a2 = q0 - a1 * p0;
    EXPECT_NEAR(a1, (ch.h21 * ch.p1).squaredNorm(), 1e-10);
    EXPECT_NEAR(a2, 4 * ch.noise_var_su, 1e-10);
}

TEST(RadioOracle, MonotoneInInterference)
{
    std::mt19937_64 rng(13);
    for (auto kind : {PowerControlKind::SnrTarget, PowerControlKind::WaterfillingProxy}) {
        const ChannelSet ch = random_channel(3, 5, 13);
        PowerControlModel m;
        m.kind = kind;
        RadioOracle o(ch, m);
        o.advance_phase();
        std::vector<double> inter, q;
        for (int i = 0; i < 50; ++i) {
            linalg::ComplexVector x = fixtures::random_complex(5, 1, rng);
            x.normalize();
            inter.push_back((ch.h12 * x).squaredNorm());
            q.push_back(o.probe(x));
        }
        std::vector<int> by_i(50), by_q(50);
        std::iota(by_i.begin(), by_i.end(), 0);
        by_q = by_i;
        std::sort(by_i.begin(), by_i.end(), [&](int a, int b) { return inter[a] < inter[b]; });
        if (kind == PowerControlKind::SnrTarget)
            std::sort(by_q.begin(), by_q.end(), [&](int a, int b) { return q[a] < q[b]; });
        else
            std::sort(by_q.begin(), by_q.end(), [&](int a, int b) { return q[a] > q[b]; });
        EXPECT_EQ(by_i, by_q);
        EXPECT_FALSE(o.phase_warning());
    }
}

TEST(RadioOracle, SaturationFlagsPhase)
{
    ChannelSet ch = random_channel(1, 2, 14);
    PowerControlModel m;
    m.p_max = 1.5; // hit by moderate interference
    RadioOracle o(ch, m);
    o.advance_phase();
    o.probe(linalg::ComplexVector::Zero(2));
    EXPECT_FALSE(o.phase_warning());
    linalg::ComplexVector x = ch.h12.row(0).adjoint();
    x.normalize();
    o.probe(x);
    EXPECT_TRUE(o.phase_warning());
    o.advance_phase();
    EXPECT_FALSE(o.phase_warning());
}

TEST(RadioOracle, NoiseAveraging)
{
    const ChannelSet ch = random_channel(2, 3, 15);
    MeasurementConfig meas;
    meas.noise_enabled = true;
    meas.noise_std = 0.8;
    meas.N_prime = 64;
    meas.seed = 3;
    RadioOracle o(ch, {}, meas);
    o.advance_phase();
    const linalg::ComplexVector x = linalg::ComplexVector::Zero(3);
    std::vector<double> q;
    for (int i = 0; i < 4000; ++i)
        q.push_back(o.probe(x));
    const double mean = std::accumulate(q.begin(), q.end(), 0.0) / q.size();
    double var = 0.0;
    for (double v : q)
        var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (q.size() - 1));
    EXPECT_NEAR(mean, o.baseline_q(), 0.01);
    EXPECT_NEAR(sd, 0.8 / 8.0, 0.01);

    RadioOracle again(ch, {}, meas);
    again.advance_phase();
    EXPECT_EQ(again.probe(x), q[0]);
}

TEST(RadioOracle, PairedTraceMatchesAffineIdeal)
{
    for (int s = 0; s < 10; ++s) {
        const ChannelSet ch = random_channel(2, 3, 100 + s);
        RadioOracle radio(ch, {});
        const double slope = radio.a1() * 10.0, offset = radio.a1() * 10.0 * 0.1 + radio.a2();
        oracle::IdealOracle ideal(ch.gram(), {oracle::MapFamily::Affine, slope, offset, 0});
        bnsl::BnslConfig c;
        c.eta_schedule = {1e-3};
        c.max_cycles = 3;
        c.stopping = false;
        c.n_r = 2;
        const auto a = bnsl::run_bnsl(radio, c);
        const auto b = bnsl::run_bnsl(ideal, c);
        ASSERT_EQ(a.trace.size(), b.trace.size());
        for (std::size_t i = 0; i < a.trace.size(); ++i) {
            ASSERT_EQ(a.trace[i].theta_hat, b.trace[i].theta_hat);
            ASSERT_EQ(a.trace[i].phi_hat, b.trace[i].phi_hat);
        }
    }
}

TEST(RadioOracle, RejectsBadConfig)
{
    ChannelSet ch = random_channel(2, 3, 1);
    PowerControlModel m;
    m.p_min = 5;
    m.p_max = 1;
    EXPECT_THROW(RadioOracle(ch, m), std::invalid_argument);
    MeasurementConfig meas;
    meas.N_prime = 0;
    EXPECT_THROW(RadioOracle(ch, {}, meas), std::invalid_argument);
    ch.h21.resize(1, 1);
    EXPECT_THROW(RadioOracle(ch, {}), std::invalid_argument);
    EXPECT_THROW(power_control_from_string("x"), std::invalid_argument);
}
