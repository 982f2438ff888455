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
#include <stdexcept>
#include <string>

#include "blindnull/bnsl.hpp"

namespace blindnull::bnsl {

SubspaceOracle::SubspaceOracle(QueryOracle& parent, ComplexMatrix u)
    : QueryOracle(parent.direction()), parent_(parent), u_(std::move(u))
{
    if (u_.rows() != parent.dim() || u_.cols() < 1)
        throw std::invalid_argument("SubspaceOracle: U must have parent.dim() rows");
    const auto k = u_.cols();
    if ((u_.adjoint() * u_ - ComplexMatrix::Identity(k, k)).norm() > 1e-10)
        throw std::invalid_argument("SubspaceOracle: U columns must be orthonormal");
}

double SubspaceOracle::measure(const linalg::ComplexVector& x)
{
    // ||U x|| = ||x||, so this cap already passed; keep the parent in step
    oracle::PowerCapGuard guard(parent_, std::max(parent_.power_cap(), power_cap()));
    return parent_.probe(u_ * x);
}

RcBnslReport run_rc_bnsl(QueryOracle& oracle, const RcBnslConfig& cfg)
{
    const int n = oracle.dim();
    const long long start = oracle.cycles_used();
    RcBnslReport rep;

    const ComplexMatrix w = cfg.seed_w ? *cfg.seed_w : ComplexMatrix::Identity(n, n);
    if (w.rows() != n || w.cols() != n ||
        (w.adjoint() * w - ComplexMatrix::Identity(n, n)).norm() > 1e-10)
        throw std::invalid_argument("RC-BNSL seed W must be n_t x n_t unitary");

    if (cfg.n_r) {
        rep.n_r = *cfg.n_r;
    } else {
        BnslConfig prefix = cfg.rank_prefix;
        prefix.n_r.reset();
        prefix.detect_rank = true;
        if (!prefix.evaluator)
            prefix.evaluator = cfg.inner.evaluator;
        rep.rank_prefix = run_bnsl(oracle, prefix);
        rep.n_r = rep.rank_prefix->rank->estimated_rank;
    }
    const int n_r = rep.n_r;
    if (n_r < 1 || n_r >= n)
        throw std::invalid_argument("RC-BNSL needs 1 <= n_r < n_t (got " + std::to_string(n_r) + ")");
    const int d = n_r + 1;
    const int stages = n - n_r;
    const std::shared_ptr<const Evaluator>& outer = cfg.inner.evaluator;

    ComplexMatrix u = w.rightCols(d);
    rep.t.resize(n, stages);
    for (int s = 0; s < stages; ++s) {
        SubspaceOracle sub(oracle, u);
        BnslConfig inner = cfg.inner;
        inner.n_r = n_r;
        inner.detect_rank = false;
        inner.initial_w.reset();
        if (outer)
            inner.evaluator = std::make_shared<Evaluator>(HermitianMatrix::congruence(outer->g(), u), 1);

        RcStage stage;
        stage.u = u;
        stage.inner = run_bnsl(sub, inner);
        const auto& ord = stage.inner.ordering;
        stage.v = u * stage.inner.w.col(ord[0]);
        if (outer)
            stage.v_interference = linalg::quadratic_form(outer->g(), stage.v);
        rep.t.col(s) = stage.v;

        if (s + 1 < stages) {
            ComplexMatrix next(n, d);
            next.col(0) = w.col(n - n_r - s - 2);
            for (int j = 1; j < d; ++j)
                next.col(j) = u * stage.inner.w.col(ord[static_cast<std::size_t>(j)]);
            u = std::move(next);
        }
        rep.stages.push_back(std::move(stage));
    }
    if (outer)
        rep.interference_sq = outer->interference_of(rep.t);
    rep.transmission_cycles = oracle.cycles_used() - start;
    return rep;
}

} // namespace blindnull::bnsl
