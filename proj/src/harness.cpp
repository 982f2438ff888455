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
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "blindnull/experiments.hpp"

namespace blindnull::experiments {

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial)
{
    std::uint64_t z = base + trial + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn)
{
    if (count <= 0)
        return;
    if (workers <= 0)
        workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, count);

    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::mutex mu;
    int next = 0;
    auto body = [&] {
        for (;;) {
            int i;
            {
                std::lock_guard<std::mutex> lock(mu);
                i = next++;
            }
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(body);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::string to_string(OracleKind k) { return k == OracleKind::Ideal ? "ideal" : "radio"; }

OracleKind oracle_kind_from_string(const std::string& s)
{
    if (s == "ideal")
        return OracleKind::Ideal;
    if (s == "radio")
        return OracleKind::Radio;
    throw std::invalid_argument("unknown oracle kind: " + s);
}

TrialResult run_trial(const ExperimentConfig& cfg, int trial)
{
    if (cfg.n_r < 0 || cfg.n_r >= cfg.n_t)
        throw std::invalid_argument("need 0 <= n_r < n_t");
    TrialResult out;
    out.trial = trial;
    out.seed = trial_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    const radiosim::ChannelSet ch = radiosim::random_channel(cfg.n_r, cfg.n_t, out.seed);
    const linalg::HermitianMatrix g = ch.gram();
    out.norm_g = g.frobenius_norm();
    out.delta = linalg::eigen_gap_delta(linalg::sorted_eigenvalues(g));

    std::unique_ptr<oracle::QueryOracle> o;
    if (cfg.oracle == OracleKind::Ideal) {
        oracle::IdealOracleOptions opt;
        opt.family = cfg.map;
        opt.seed = out.seed;
        o = std::make_unique<oracle::IdealOracle>(g, opt);
    } else {
        radiosim::MeasurementConfig meas = cfg.measurement;
        meas.seed = trial_seed(out.seed, 1);
        o = radiosim::as_oracle(ch, cfg.power, meas);
    }

    bnsl::BnslConfig bc;
    bc.eta_schedule = cfg.eta_schedule;
    bc.xi = cfg.xi;
    bc.stopping = cfg.stopping;
    bc.max_cycles = cfg.cycles;
    bc.evaluator = std::make_shared<bnsl::Evaluator>(g, cfg.n_t - cfg.n_r);
    if (cfg.detect_rank) {
        bc.detect_rank = true;
    } else {
        bc.n_r = cfg.n_r;
        bc.detect_rank = false;
    }

    if (cfg.rc) {
        bnsl::RcBnslConfig rc;
        rc.inner = bc;
        rc.inner.n_r.reset();
        rc.inner.detect_rank = false;
        rc.rank_prefix = bc;
        if (!cfg.detect_rank)
            rc.n_r = cfg.n_r;
        out.rc_report = bnsl::run_rc_bnsl(*o, rc);
    } else {
        out.report = bnsl::run_bnsl(*o, bc);
    }
    return out;
}

std::vector<TrialResult> run_trials(const ExperimentConfig& cfg)
{
    if (cfg.trials < 0)
        throw std::invalid_argument("trials must be non-negative");
    if (cfg.eta_schedule.empty())
        throw std::invalid_argument("empty eta schedule");
    for (double e : cfg.eta_schedule)
        if (!(e > 0.0))
            throw std::invalid_argument("eta entries must be positive");
    return parallel_map<TrialResult>(cfg.trials, cfg.workers,
                                     [&](int t) { return run_trial(cfg, t); });
}

// ---- accounting -----------------------------------------------------------

namespace {

int expected_phase_probes(const bnsl::PhaseRecord& r)
{
    const int search = 3 + linesearch::bisection_steps(linalg::kPi / 2.0, r.eta);
    if (r.degenerate)
        return 4;
    return search + (r.theta_degenerate ? 4 : search);
}

} // namespace

void audit(const bnsl::NullSpaceReport& r, AccountingAudit& acc)
{
    long long sum = 0;
    for (const auto& rec : r.trace) {
        ++acc.phases;
        if (rec.probes != expected_phase_probes(rec))
            ++acc.mismatches;
        sum += rec.probes;
    }
    const long long n = r.w.cols();
    const long long rank_expected = r.rank ? 2 * n : 0;
    const bool ok = sum == r.learning_cycles && r.ordering_cycles == n &&
                    r.rank_cycles == rank_expected &&
                    r.transmission_cycles ==
                        r.direction_cycles + r.learning_cycles + r.ordering_cycles + r.rank_cycles &&
                    (r.trace.empty() || r.trace.back().cycle_count == r.direction_cycles + sum);
    if (!ok)
        ++acc.total_mismatches;
}

void audit(const bnsl::RcBnslReport& r, AccountingAudit& acc)
{
    long long sum = 0;
    if (r.rank_prefix) {
        audit(*r.rank_prefix, acc);
        sum += r.rank_prefix->transmission_cycles;
    }
    for (const auto& s : r.stages) {
        audit(s.inner, acc);
        sum += s.inner.transmission_cycles;
    }
    if (sum != r.transmission_cycles)
        ++acc.total_mismatches;
}

LinearBoundRun verify_linear_bound(int n_t, int n_r, int trials, std::uint64_t seed, int cycles,
                                   int workers)
{
    struct One {
        BoundReport bound;
        AccountingAudit acc;
    };
    const auto runs = parallel_map<One>(trials, workers, [&](int t) {
        const auto g = radiosim::random_channel(n_r, n_t, trial_seed(seed, static_cast<std::uint64_t>(t))).gram();
        auto ev = std::make_shared<bnsl::Evaluator>(g, n_t - n_r);
        bnsl::BnslConfig c;
        c.stopping = false;
        c.max_cycles = cycles;
        c.n_r = n_r;
        c.detect_rank = false;
        c.evaluator = ev;
        // floor keeps the bisection finite once P reaches rounding level;
        // such cycles fall below kResolvableEta and are not judged
        c.eta_controller = [n_t, ev](int, const linalg::ComplexMatrix& w) {
            return std::max(eta_sufficiency(n_t, ev->off_norm(w), ev->norm_g()), 1e-12);
        };
        oracle::IdealOracle o(g);
        const auto r = bnsl::run_bnsl(o, c);
        One out;
        out.bound = check_linear_bound(r, n_t, g.frobenius_norm());
        audit(r, out.acc);
        return out;
    });
    LinearBoundRun out;
    out.n_t = n_t;
    for (const auto& r : runs) {
        out.checked += r.bound.checked;
        out.skipped += r.bound.skipped;
        out.violations += r.bound.violations;
        out.accounting.phases += r.acc.phases;
        out.accounting.mismatches += r.acc.mismatches;
        out.accounting.total_mismatches += r.acc.total_mismatches;
        out.trials.push_back(r.bound);
    }
    return out;
}

// ---- outputs --------------------------------------------------------------

namespace {

std::string g15(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

} // namespace

void write_trace_rows(std::ostream& out, int trial, const bnsl::ConvergenceTrace& trace)
{
    for (const auto& r : trace)
        out << trial << ',' << r.k << ',' << r.cycle_count << ',' << r.l + 1 << ',' << r.m + 1 << ','
            << g15(r.theta_hat) << ',' << g15(r.phi_hat) << ',' << g15(r.P) << ','
            << g15(r.interference_sq) << ',' << g15(r.eta) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<TrialResult>& trials, bool header)
{
    if (header)
        out << kTraceHeader << '\n';
    for (const auto& t : trials) {
        if (t.rc_report) {
            // stages are concatenated; cycle counts stay stage-relative
            for (const auto& s : t.rc_report->stages)
                write_trace_rows(out, t.trial, s.inner.trace);
        } else {
            write_trace_rows(out, t.trial, t.report.trace);
        }
    }
}

namespace {

nlohmann::json stats(const std::vector<double>& v)
{
    if (v.empty())
        return nullptr;
    return {{"median", median(v)}, {"q1", quantile(v, 0.25)}, {"q3", quantile(v, 0.75)}};
}

} // namespace

nlohmann::json summarize(const ExperimentConfig& cfg, const std::vector<TrialResult>& trials)
{
    nlohmann::json j;
    j["n_t"] = cfg.n_t;
    j["n_r"] = cfg.n_r;
    j["trials"] = trials.size();
    j["eta_schedule"] = cfg.eta_schedule;
    j["cycles"] = cfg.cycles;
    j["oracle"] = to_string(cfg.oracle);
    j["rc"] = cfg.rc;
    j["seed"] = cfg.seed;

    std::vector<double> cycles, interference, final_p;
    AccountingAudit acc;
    int rank_correct = 0, rank_checked = 0;
    for (const auto& t : trials) {
        if (t.rc_report) {
            cycles.push_back(static_cast<double>(t.rc_report->transmission_cycles));
            interference.push_back(t.rc_report->interference_sq);
            audit(*t.rc_report, acc);
            continue;
        }
        const auto& r = t.report;
        cycles.push_back(static_cast<double>(r.transmission_cycles));
        interference.push_back(r.interference_sq);
        if (!r.trace.empty())
            final_p.push_back(r.trace.back().P);
        if (r.rank) {
            ++rank_checked;
            rank_correct += r.rank->estimated_rank == cfg.n_r ? 1 : 0;
        }
        audit(r, acc);
    }
    j["transmission_cycles"] = stats(cycles);
    j["interference_sq"] = stats(interference);
    j["final_P"] = stats(final_p);
    if (rank_checked > 0)
        j["rank_correct"] = {{"correct", rank_correct}, {"checked", rank_checked}};

    // median P^2 at each completed cycle (plain runs)
    const int m = cfg.n_t * (cfg.n_t - 1) / 2;
    nlohmann::json per_cycle = nlohmann::json::array();
    for (int c = 0; c <= cfg.cycles; ++c) {
        std::vector<double> v;
        for (const auto& t : trials) {
            if (t.rc_report)
                continue;
            const auto& tr = t.report.trace;
            if (c == 0)
                v.push_back(t.report.initial_P * t.report.initial_P);
            else if (static_cast<std::size_t>(c * m) <= tr.size())
                v.push_back(tr[static_cast<std::size_t>(c * m - 1)].P * tr[static_cast<std::size_t>(c * m - 1)].P);
        }
        if (v.empty())
            break;
        per_cycle.push_back({{"cycle", c}, {"P_sq", stats(v)}});
    }
    j["per_cycle"] = per_cycle;
    j["accounting"] = {{"phases", acc.phases},
                       {"phase_mismatches", acc.mismatches},
                       {"total_mismatches", acc.total_mismatches}};
    return j;
}

} // namespace blindnull::experiments
