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

#ifndef BLINDNULL_RADIOSIM_HPP
#define BLINDNULL_RADIOSIM_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "blindnull/linalg.hpp"
#include "blindnull/oracle.hpp"

namespace blindnull::radiosim {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::HermitianMatrix;

struct ChannelSet {
    ComplexMatrix h12; // n_r x n_t, SU -> PU receiver. Hidden.
    ComplexMatrix h21; // n_t x n_r, PU transmitter -> SU receiver
    ComplexMatrix p1;  // n_r x n_r PU precoder shape, scaled by the controlled power
    double noise_var_pu = 0.1;  // sigma_1^2
    double noise_var_su = 0.01; // sigma_2^2

    int n_r() const { return static_cast<int>(h12.rows()); }
    int n_t() const { return static_cast<int>(h12.cols()); }
    // G = H12^* H12
    HermitianMatrix gram() const { return HermitianMatrix::gram(h12); }
    void validate() const;
};

// i.i.d. CN(0,1) entries; H12 rescaled so ||G||_F = 1. P1 = I.
ChannelSet random_channel(int n_r, int n_t, std::uint64_t seed);

enum class PowerControlKind { SnrTarget, WaterfillingProxy };

std::string to_string(PowerControlKind k);
PowerControlKind power_control_from_string(const std::string& s);

struct PowerControlModel {
    PowerControlKind kind = PowerControlKind::SnrTarget;
    double gamma_target = 10.0; // linear SNR
    double g_eff = 1.0;         // PU own-link gain
    double water_level = 10.0;  // c in c - (sigma^2 + I)
    double p_min = 1e-3;
    double p_max = 100.0;
};

struct PowerStep {
    double p = 0.0;
    bool saturated = false;
};

// Steady-state PU power after one control cycle. snr_target is increasing in
// the interference, waterfilling_proxy decreasing; both clamp to [p_min, p_max].
// p_prev is unused: the loop settles within one cycle.
PowerStep step_power_control(const PowerControlModel& model, double noise_var_pu,
                             double p_prev, double interference);

struct MeasurementConfig {
    int N = 100;       // samples per transmission cycle
    int N_prime = 16;  // snapshots averaged into q
    bool noise_enabled = false;
    double noise_std = 0.0; // per-snapshot perturbation
    std::uint64_t seed = 0;
};

// The SU's energy measurement wired as an oracle: each probe runs one PU
// power-control cycle against the interference ||H12 x||^2 and returns
// q = a1 p + a2 (+ averaged noise).
class RadioOracle final : public oracle::QueryOracle {
public:
    RadioOracle(ChannelSet channel, PowerControlModel model, MeasurementConfig meas = {});

    int dim() const override { return channel_.n_t(); }
    bool phase_warning() const override { return saturated_in_phase_; }

    double a1() const noexcept { return a1_; }
    double a2() const noexcept { return a2_; }
    double last_power() const noexcept { return p_; }
    // q for a silent SU, noise off
    double baseline_q() const;
    const ChannelSet& channel() const noexcept { return channel_; }

protected:
    double measure(const ComplexVector& x) override;
    void on_advance_phase() override { saturated_in_phase_ = false; }

private:
    ChannelSet channel_;
    PowerControlModel model_;
    MeasurementConfig meas_;
    double a1_ = 0.0;
    double a2_ = 0.0;
    double p_ = 0.0;
    bool saturated_in_phase_ = false;
    std::mt19937_64 rng_;
};

std::unique_ptr<RadioOracle> as_oracle(ChannelSet channel, PowerControlModel model,
                                       MeasurementConfig meas = {});

} // namespace blindnull::radiosim

#endif // BLINDNULL_RADIOSIM_HPP
