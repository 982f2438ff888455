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

#include "blindnull/bnsl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace blindnull::bnsl {

using linalg::ComplexVector;
using linesearch::LineSearchMode;
using linesearch::Order;

Evaluator::Evaluator(HermitianMatrix g, int null_dim) : g_(std::move(g)), null_dim_(null_dim)
{
    if (null_dim < 0 || null_dim > g_.dim())
        throw std::invalid_argument("Evaluator: null_dim out of range");
}

double Evaluator::off_norm(const ComplexMatrix& w) const
{
    return linalg::off_diagonal_norm(HermitianMatrix::congruence(g_, w));
}

double Evaluator::interference(const ComplexMatrix& w) const
{
    RealVector q = linalg::column_quadratic_forms(g_, w);
    std::sort(q.data(), q.data() + q.size());
    return q.head(null_dim_).sum();
}

double Evaluator::interference_of(const ComplexMatrix& t) const
{
    return t.cols() == 0 ? 0.0 : linalg::column_quadratic_forms(g_, t).sum();
}

PrecoderState::PrecoderState(ComplexMatrix w0) : w(std::move(w0))
{
    const auto n = static_cast<std::size_t>(w.cols());
    deltas.assign(n * (n - 1) / 2, std::numeric_limits<double>::infinity());
}

void PrecoderState::push_delta(double d)
{
    deltas[next] = d;
    next = (next + 1) % deltas.size();
}

double PrecoderState::max_delta() const
{
    return *std::max_element(deltas.begin(), deltas.end());
}

BlindRotation blind_rotation_params(QueryOracle& oracle, const ComplexMatrix& w, int l, int m,
                                    double eta, Order order, LineSearchMode mode)
{
    constexpr double kPi = linalg::kPi;
    BlindRotation out;
    out.params = {l, m, 0.0, 0.0};

    const auto phi_obj = [&](double phi) {
        return oracle.probe(linalg::rotated_column(w, l, m, kPi / 3.0, phi));
    };
    const auto phi = linesearch::line_search(phi_obj, kPi, eta, order, mode);
    out.probes += phi.evaluations;
    out.reprobe_probes += phi.reprobe_evaluations;
    if (phi.degenerate) {
        out.degenerate = true;
        return out;
    }
    out.params.phi = phi.z_hat;

    // search z = 2 theta over a full period
    const auto theta_obj = [&](double z) {
        return oracle.probe(linalg::rotated_column(w, l, m, 0.5 * z, out.params.phi));
    };
    const auto th = linesearch::line_search(theta_obj, kPi, eta, order, mode);
    out.probes += th.evaluations;
    out.reprobe_probes += th.reprobe_evaluations;
    if (th.degenerate) {
        out.theta_degenerate = true;
        return out;
    }
    out.params.theta = linalg::fold_quarter(0.5 * th.z_hat);
    return out;
}

std::vector<int> order_columns(QueryOracle& oracle, const ComplexMatrix& w, Order order,
                               RealVector* values)
{
    oracle.advance_phase();
    const int n = static_cast<int>(w.cols());
    RealVector q(n);
    for (int j = 0; j < n; ++j)
        q(j) = oracle.probe(w.col(j));
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return order.better(q(a), q(b)); });
    if (values)
        *values = q;
    return idx;
}

RankEstimate estimate_rank(QueryOracle& oracle, const ComplexMatrix& w,
                           const std::vector<int>& ordering, double tol)
{
    oracle.advance_phase();
    RankEstimate r;
    bool prefix = true;
    for (int j : ordering) {
        const bool null = oracle::null_membership_test(oracle, w.col(j), tol);
        r.null_flags.push_back(null);
        if (null && prefix)
            ++r.nullity;
        else if (null)
            r.consistent = false;
        else
            prefix = false;
    }
    r.estimated_rank = static_cast<int>(ordering.size()) - r.nullity;
    return r;
}

NullSpaceReport run_bnsl(QueryOracle& oracle, const BnslConfig& cfg)
{
    const int n = oracle.dim();
    if (n < 2)
        throw std::invalid_argument("run_bnsl needs n_t >= 2");
    if (cfg.eta_schedule.empty() && !cfg.eta_controller)
        throw std::invalid_argument("run_bnsl needs an eta schedule");
    for (double e : cfg.eta_schedule)
        if (!(e > 0.0))
            throw std::invalid_argument("eta entries must be positive");
    if (cfg.xi && !(*cfg.xi > 0.0))
        throw std::invalid_argument("xi must be positive");
    if (cfg.max_cycles < 0)
        throw std::invalid_argument("max_cycles must be non-negative");
    if (cfg.n_r && (*cfg.n_r < 0 || *cfg.n_r > n))
        throw std::invalid_argument("n_r out of range");
    if (!cfg.n_r && !cfg.detect_rank)
        throw std::invalid_argument("n_r unknown and rank detection disabled");
    if (cfg.evaluator && cfg.evaluator->g().dim() != n)
        throw std::invalid_argument("evaluator dimension mismatch");

    NullSpaceReport rep;
    const long long start = oracle.cycles_used();

    std::optional<oracle::Direction> dir = cfg.direction;
    if (!dir && cfg.auto_detect_direction) {
        oracle.advance_phase();
        dir = oracle::detect_direction(oracle);
        rep.direction_cycles = oracle.cycles_used() - start;
    }
    if (!dir)
        dir = oracle.direction();
    if (*dir == oracle::Direction::Unknown)
        throw std::invalid_argument("measurement direction unknown");
    const Order order = Order::from(*dir);

    ComplexMatrix w0 = cfg.initial_w ? *cfg.initial_w : ComplexMatrix::Identity(n, n);
    if (w0.rows() != n || w0.cols() != n ||
        (w0.adjoint() * w0 - ComplexMatrix::Identity(n, n)).norm() > 1e-10)
        throw std::invalid_argument("initial W must be n_t x n_t unitary");
    PrecoderState st(std::move(w0));
    if (cfg.evaluator) {
        rep.initial_P = cfg.evaluator->off_norm(st.w);
        rep.initial_interference = cfg.evaluator->interference(st.w);
    }

    const auto pivots = linalg::cyclic_pivots(n);
    const long long learn_start = oracle.cycles_used();
    bool stop = false;
    for (int sweep = 0; sweep < cfg.max_cycles && !stop; ++sweep) {
        const double eta = cfg.eta_controller
                               ? cfg.eta_controller(sweep, st.w)
                               : cfg.eta_schedule[std::min<std::size_t>(
                                     static_cast<std::size_t>(sweep), cfg.eta_schedule.size() - 1)];
        if (!(eta > 0.0))
            throw std::invalid_argument("eta must be positive");
        const double xi = cfg.xi ? *cfg.xi : 10.0 * eta;

        for (const auto& [l, m] : pivots) {
            if (cfg.cycle_budget && oracle.cycles_used() - learn_start >= *cfg.cycle_budget) {
                rep.budget_exhausted = true;
                stop = true;
                break;
            }
            oracle.advance_phase();
            const BlindRotation br = blind_rotation_params(oracle, st.w, l, m, eta, order, cfg.mode);
            linalg::apply_rotation(st.w, br.params);
            ++st.k;
            st.push_delta(std::abs(br.params.theta));

            PhaseRecord rec;
            rec.k = st.k;
            rec.sweep = sweep;
            rec.cycle_count = oracle.cycles_used() - start;
            rec.l = l;
            rec.m = m;
            rec.theta_hat = br.params.theta;
            rec.phi_hat = br.params.phi;
            rec.eta = eta;
            rec.probes = br.probes;
            rec.reprobe_probes = br.reprobe_probes;
            rec.degenerate = br.degenerate;
            rec.theta_degenerate = br.theta_degenerate;
            rec.warning = oracle.phase_warning();
            if (cfg.evaluator) {
                rec.P = cfg.evaluator->off_norm(st.w);
                rec.interference_sq = cfg.evaluator->interference(st.w);
            }
            rep.trace.push_back(rec);

            if (cfg.stopping && st.max_delta() < xi) {
                rep.converged = true;
                stop = true;
                break;
            }
        }
    }
    rep.sweeps_completed = static_cast<int>(rep.trace.size() / pivots.size());
    rep.learning_cycles = oracle.cycles_used() - learn_start;

    long long mark = oracle.cycles_used();
    rep.ordering = order_columns(oracle, st.w, order, &rep.ordering_values);
    rep.ordering_cycles = oracle.cycles_used() - mark;

    if (cfg.detect_rank) {
        mark = oracle.cycles_used();
        rep.rank = estimate_rank(oracle, st.w, rep.ordering, cfg.null_tol);
        rep.rank_cycles = oracle.cycles_used() - mark;
    }
    rep.null_dim = cfg.n_r ? n - *cfg.n_r : rep.rank->nullity;
    rep.t.resize(n, rep.null_dim);
    for (int j = 0; j < rep.null_dim; ++j)
        rep.t.col(j) = st.w.col(rep.ordering[static_cast<std::size_t>(j)]);
    if (cfg.evaluator)
        rep.interference_sq = cfg.evaluator->interference_of(rep.t);

    rep.transmission_cycles = oracle.cycles_used() - start;
    rep.w = std::move(st.w);
    return rep;
}

} // namespace blindnull::bnsl
