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

#ifndef BLINDNULL_BNSL_HPP
#define BLINDNULL_BNSL_HPP

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "blindnull/linalg.hpp"
#include "blindnull/linesearch.hpp"
#include "blindnull/oracle.hpp"

namespace blindnull::bnsl {

using linalg::ComplexMatrix;
using linalg::HermitianMatrix;
using linalg::RealVector;
using linalg::RotationParams;
using oracle::QueryOracle;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One learning phase.
struct PhaseRecord {
    long long k = 0;          // phase index, from 1
    int sweep = 0;            // pivot cycle, from 0
    long long cycle_count = 0; // transmission cycles used so far (run-relative)
    int l = 0;
    int m = 1;
    double theta_hat = 0.0;
    double phi_hat = 0.0;
    double eta = 0.0;
    int probes = 0;
    int reprobe_probes = 0;
    bool degenerate = false;       // phi bracket flat: no rotation
    bool theta_degenerate = false; // theta bracket flat: theta = 0
    bool warning = false;          // oracle reported an assumption violation
    double P = kNaN;               // evaluation side only
    double interference_sq = kNaN; // evaluation side only
};

using ConvergenceTrace = std::vector<PhaseRecord>;

// Evaluation-side disclosure of G. Never handed to the blind algorithm; the
// harness attaches it to fill P_k and ||H T_k||^2 in the trace.
class Evaluator {
public:
    // null_dim = n_t - n_r, the number of columns counted as interference.
    Evaluator(HermitianMatrix g, int null_dim);

    const HermitianMatrix& g() const noexcept { return g_; }
    int null_dim() const noexcept { return null_dim_; }
    double norm_g() const noexcept { return g_.frobenius_norm(); }

    // off_diagonal_norm(W^* G W)
    double off_norm(const ComplexMatrix& w) const;
    // Sum of the null_dim smallest column Rayleigh quotients of W.
    double interference(const ComplexMatrix& w) const;
    // ||G T||-side quantity for explicit columns: sum_j t_j^* G t_j.
    double interference_of(const ComplexMatrix& t) const;

private:
    HermitianMatrix g_;
    int null_dim_;
};

struct BnslConfig {
    std::vector<double> eta_schedule{1e-4}; // per pivot cycle; last entry repeats
    std::optional<double> xi;               // default 10 * eta of the current cycle
    bool stopping = true;                   // false: run exactly max_cycles
    int max_cycles = 50;
    std::optional<long long> cycle_budget;  // transmission cycles for the learning loop
    std::optional<oracle::Direction> direction; // default: oracle.direction()
    bool auto_detect_direction = false;
    linesearch::LineSearchMode mode = linesearch::LineSearchMode::Comparison;
    std::optional<ComplexMatrix> initial_w; // default identity

    // Null-space extraction. With n_r unset, the rank is estimated.
    std::optional<int> n_r;
    bool detect_rank = true;
    double null_tol = 1e-8;

    // Harness hooks, both optional.
    std::shared_ptr<const Evaluator> evaluator;
    // Overrides eta_schedule; called once at the start of each pivot cycle.
    std::function<double(int sweep, const ComplexMatrix& w)> eta_controller;
};

struct PrecoderState {
    ComplexMatrix w;
    long long k = 0;
    std::vector<double> deltas; // last full cycle of |theta_hat|
    std::size_t next = 0;

    explicit PrecoderState(ComplexMatrix w0);
    void push_delta(double d);
    double max_delta() const;
};

struct BlindRotation {
    RotationParams params;
    bool degenerate = false;
    bool theta_degenerate = false;
    int probes = 0;
    int reprobe_probes = 0;
};

// Two line searches in the current phase: phi over probes W r(pi/3, phi),
// then 2 theta over probes W r(theta, phi_hat), then the fold into
// (-pi/4, pi/4]. Does not advance the phase or touch W.
BlindRotation blind_rotation_params(QueryOracle& oracle, const ComplexMatrix& w, int l, int m,
                                    double eta, linesearch::Order order = {},
                                    linesearch::LineSearchMode mode = linesearch::LineSearchMode::Comparison);

// Column indices of W by ascending x^* G x, from one probe per column in a
// fresh phase. Ties keep index order. `values` receives the raw q.
std::vector<int> order_columns(QueryOracle& oracle, const ComplexMatrix& w, linesearch::Order order,
                               RealVector* values = nullptr);

struct RankEstimate {
    int nullity = 0;
    int estimated_rank = 0;
    bool consistent = true; // null flags form a prefix of the ordering
    std::vector<bool> null_flags; // in ordering order
};

// null_membership_test on every column in `ordering` (2 cycles each, one
// phase). The nullity is the length of the leading run of null columns, the
// smallest rank consistent with the ordering.
RankEstimate estimate_rank(QueryOracle& oracle, const ComplexMatrix& w,
                           const std::vector<int>& ordering, double tol = 1e-8);

struct NullSpaceReport {
    ComplexMatrix w;
    ComplexMatrix t;           // n_t x (n_t - n_r) or x nullity
    std::vector<int> ordering;
    RealVector ordering_values;
    std::optional<RankEstimate> rank;
    int null_dim = 0;          // columns in t
    ConvergenceTrace trace;
    int sweeps_completed = 0;
    bool converged = false;        // delta stopping fired
    bool budget_exhausted = false;
    long long learning_cycles = 0;
    long long ordering_cycles = 0;
    long long rank_cycles = 0;
    long long direction_cycles = 0;
    long long transmission_cycles = 0; // sum of the four above
    double initial_P = kNaN;
    double initial_interference = kNaN;
    double interference_sq = kNaN; // ||H T||_F^2 of the returned t
};

NullSpaceReport run_bnsl(QueryOracle& oracle, const BnslConfig& config);

// Probes y -> parent.probe(U y) for U with orthonormal columns. Phases are
// the parent's phases.
class SubspaceOracle final : public QueryOracle {
public:
    SubspaceOracle(QueryOracle& parent, ComplexMatrix u);
    int dim() const override { return static_cast<int>(u_.cols()); }
    bool phase_warning() const override { return parent_.phase_warning(); }

protected:
    double measure(const linalg::ComplexVector& x) override;
    void on_advance_phase() override { parent_.advance_phase(); }

private:
    QueryOracle& parent_;
    ComplexMatrix u_;
};

struct RcStage {
    ComplexMatrix u; // orthonormal basis the stage searched in
    NullSpaceReport inner;
    linalg::ComplexVector v;
    double v_interference = kNaN; // ||H v||^2, evaluation side
};

struct RcBnslReport {
    ComplexMatrix t; // [v_1 ... v_{n_t - n_r}]
    int n_r = 0;
    std::vector<RcStage> stages;
    std::optional<NullSpaceReport> rank_prefix; // only when n_r was estimated
    long long transmission_cycles = 0;
    double interference_sq = kNaN;
};

struct RcBnslConfig {
    BnslConfig inner;             // evaluator here is the full-G one
    std::optional<int> n_r;       // estimated with a BNSL prefix when unset
    BnslConfig rank_prefix;       // used only when n_r is unset
    std::optional<ComplexMatrix> seed_w; // default identity
};

RcBnslReport run_rc_bnsl(QueryOracle& oracle, const RcBnslConfig& config);

} // namespace blindnull::bnsl

#endif // BLINDNULL_BNSL_HPP
