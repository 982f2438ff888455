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

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "blindnull/experiments.hpp"

namespace blindnull::experiments {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& p)
{
    std::ofstream f(p);
    if (!f)
        throw std::runtime_error("cannot write " + p.string());
    f.precision(15);
    return f;
}

ExperimentConfig base_config(const FigureOverrides& o, int n_t, int n_r, int trials)
{
    ExperimentConfig c;
    c.n_t = o.n_t.value_or(n_t);
    c.n_r = o.n_r.value_or(n_r);
    c.trials = o.trials.value_or(trials);
    c.seed = o.seed.value_or(1);
    c.oracle = o.oracle.value_or(OracleKind::Ideal);
    c.workers = o.workers;
    c.stopping = false;
    return c;
}

// Per phase k: median cycle count and interference quartiles over trials.
struct Curve {
    std::vector<double> cycle_count, med, q1, q3, med_norm;
};

Curve interference_curve(const std::vector<TrialResult>& trials)
{
    Curve c;
    if (trials.empty())
        return c;
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& t : trials)
        len = std::min(len, t.report.trace.size());
    for (std::size_t k = 0; k <= len; ++k) {
        std::vector<double> cc, v, vn;
        for (const auto& t : trials) {
            const auto& r = t.report;
            const double i = k == 0 ? r.initial_interference : r.trace[k - 1].interference_sq;
            cc.push_back(k == 0 ? 0.0 : static_cast<double>(r.trace[k - 1].cycle_count));
            v.push_back(i);
            vn.push_back(r.initial_interference > 0.0 ? i / r.initial_interference : 0.0);
        }
        c.cycle_count.push_back(median(cc));
        c.med.push_back(median(v));
        c.q1.push_back(quantile(v, 0.25));
        c.q3.push_back(quantile(v, 0.75));
        c.med_norm.push_back(median(vn));
    }
    return c;
}

FigureOutput figure4(const FigureOverrides& o, const fs::path& dir)
{
    const std::vector<double> grid = o.eta.value_or(std::vector<double>{1e-1, 1e-2, 1e-4});
    FigureOutput out;
    const fs::path trace_path = dir / "fig4_trace.csv";
    const fs::path curve_path = dir / "fig4_curves.csv";
    auto trace = open_out(trace_path);
    auto curves = open_out(curve_path);
    trace << kTraceHeader << '\n';
    curves << "eta,cycle,median_P_sq,q1_P_sq,q3_P_sq\n";

    nlohmann::json per_eta = nlohmann::json::array();
    std::vector<double> first_decrease;
    for (double eta : grid) {
        ExperimentConfig c = base_config(o, 3, 2, 200);
        c.eta_schedule = {eta};
        c.cycles = 6;
        const auto trials = run_trials(c);
        write_trace_csv(trace, trials, false);
        const int m = c.n_t * (c.n_t - 1) / 2;
        std::vector<double> med;
        for (int cyc = 0; cyc <= c.cycles && !trials.empty(); ++cyc) {
            std::vector<double> v;
            for (const auto& t : trials) {
                const double p = cyc == 0 ? t.report.initial_P
                                          : t.report.trace[static_cast<std::size_t>(cyc * m - 1)].P;
                v.push_back(p * p);
            }
            med.push_back(median(v));
            curves << eta << ',' << cyc << ',' << med.back() << ',' << quantile(v, 0.25) << ','
                   << quantile(v, 0.75) << '\n';
        }
        nlohmann::json j = summarize(c, trials);
        j["eta"] = eta;
        if (med.size() >= 2) {
            j["first_cycle_decrease"] = med[0] - med[1];
            first_decrease.push_back(med[0] - med[1]);
        }
        if (med.size() >= 4)
            j["median_P_sq_after_3"] = med[3];
        per_eta.push_back(j);
    }
    out.summary["figure"] = 4;
    out.summary["runs"] = per_eta;
    if (!first_decrease.empty()) {
        const double hi = *std::max_element(first_decrease.begin(), first_decrease.end());
        const double lo = *std::min_element(first_decrease.begin(), first_decrease.end());
        out.summary["first_cycle_decrease_spread"] = hi > 0.0 ? (hi - lo) / hi : 0.0;
    }
    out.files = {trace_path, curve_path};
    return out;
}

void write_curve(std::ostream& f, const std::string& lead, const Curve& c, const std::vector<double>& bound)
{
    for (std::size_t k = 0; k < c.med.size(); ++k) {
        f << lead << k << ',' << c.cycle_count[k] << ',' << c.med[k] << ',' << c.q1[k] << ','
          << c.q3[k] << ',' << c.med_norm[k];
        if (!bound.empty())
            f << ',' << bound[std::min(k, bound.size() - 1)];
        f << '\n';
    }
}

FigureOutput figure5(const FigureOverrides& o, const fs::path& dir)
{
    std::vector<double> schedule;
    if (o.eta)
        schedule = *o.eta;
    else
        for (double db : {-10.0, -20.0, -30.0, -40.0})
            schedule.push_back(eta_from_db(db));

    FigureOutput out;
    const fs::path curve_path = dir / "fig5_curves.csv";
    auto curves = open_out(curve_path);
    curves << "n_r,k,cycle_count,median_interference_sq,q1,q3,median_normalized,plateau_term\n";
    out.files.push_back(curve_path);
    nlohmann::json runs = nlohmann::json::array();

    std::vector<int> nrs{1, 2};
    if (o.n_r)
        nrs = {*o.n_r};
    for (int n_r : nrs) {
        ExperimentConfig c = base_config(o, 3, n_r, 200);
        c.n_r = n_r;
        c.eta_schedule = schedule;
        c.cycles = static_cast<int>(schedule.size()) + 2;
        const auto trials = run_trials(c);
        const fs::path tp = dir / ("fig5_trace_nr" + std::to_string(n_r) + ".csv");
        auto trace = open_out(tp);
        write_trace_csv(trace, trials);
        out.files.push_back(tp);

        // plateau term per phase, median over trials
        const int m = c.n_t * (c.n_t - 1) / 2;
        std::vector<double> bound;
        if (!trials.empty()) {
            for (std::size_t k = 0; k <= trials.front().report.trace.size(); ++k) {
                const double eta = schedule[std::min<std::size_t>(
                    k == 0 ? 0 : (k - 1) / static_cast<std::size_t>(m), schedule.size() - 1)];
                std::vector<double> b;
                for (const auto& t : trials)
                    if (std::isfinite(t.delta))
                        b.push_back(plateau_bound(c.n_t, n_r, eta, t.norm_g, t.delta));
                bound.push_back(b.empty() ? 0.0 : median(b));
            }
        }
        write_curve(curves, std::to_string(n_r) + ",", interference_curve(trials), bound);
        nlohmann::json j = summarize(c, trials);
        runs.push_back(j);
    }
    out.summary["figure"] = 5;
    out.summary["eta_schedule"] = schedule;
    out.summary["runs"] = runs;
    return out;
}

FigureOutput figure6(const FigureOverrides& o, const fs::path& dir)
{
    std::vector<double> schedule;
    if (o.eta)
        schedule = *o.eta;
    else
        for (double db : {-6.0, -8.0, -15.0})
            schedule.push_back(eta_from_db(db));

    FigureOutput out;
    const fs::path curve_path = dir / "fig6_curves.csv";
    auto curves = open_out(curve_path);
    curves << "n_t,k,cycle_count,median_interference_sq,q1,q3,median_normalized\n";
    out.files.push_back(curve_path);
    nlohmann::json runs = nlohmann::json::array();

    std::vector<int> nts{3, 4, 5, 6, 7, 8};
    if (o.n_t)
        nts = {*o.n_t};
    for (int n_t : nts) {
        ExperimentConfig c = base_config(o, n_t, 2, 200);
        c.n_t = n_t;
        c.eta_schedule = schedule;
        c.cycles = static_cast<int>(schedule.size());
        const auto trials = run_trials(c);
        const fs::path tp = dir / ("fig6_trace_nt" + std::to_string(n_t) + ".csv");
        auto trace = open_out(tp);
        write_trace_csv(trace, trials);
        out.files.push_back(tp);
        write_curve(curves, std::to_string(n_t) + ",", interference_curve(trials), {});
        runs.push_back(summarize(c, trials));
    }
    out.summary["figure"] = 6;
    out.summary["eta_schedule"] = schedule;
    out.summary["runs"] = runs;
    return out;
}

} // namespace

FigureOutput run_figure(int id, const FigureOverrides& o, const fs::path& out_dir)
{
    fs::create_directories(out_dir);
    FigureOutput out;
    switch (id) {
    case 4: out = figure4(o, out_dir); break;
    case 5: out = figure5(o, out_dir); break;
    case 6: out = figure6(o, out_dir); break;
    default: throw std::invalid_argument("figure id must be 4, 5 or 6");
    }
    const fs::path js = out_dir / ("fig" + std::to_string(id) + "_summary.json");
    auto f = open_out(js);
    f << out.summary.dump(2) << '\n';
    out.files.push_back(js);
    return out;
}

// ---- cluster --------------------------------------------------------------

ClusterReport cluster_experiment(const ClusterConfig& cfg)
{
    if (cfg.n_t < 3)
        throw std::invalid_argument("a cluster needs n_t >= 3");
    if (cfg.cluster_size < 2 || cfg.cluster_size > cfg.n_t - 1)
        throw std::invalid_argument("cluster size must lie in [2, n_t - 1]");
    if (!(cfg.cluster_width >= 0.0) || !(cfg.delta_c > 0.0) || !(cfg.eta > 0.0))
        throw std::invalid_argument("invalid cluster parameters");

    const int n = cfg.n_t;
    const int groups = n - cfg.cluster_size + 1;
    const int m = n * (n - 1) / 2;
    ClusterReport rep;
    std::vector<double> orders;
    for (int t = 0; t < cfg.trials; ++t) {
        std::mt19937_64 rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
        std::uniform_real_distribution<double> u01(0.0, 1.0);

        // group centres spaced by 3 delta_c .. 4.5 delta_c
        std::vector<double> centre{0.2};
        for (int gi = 1; gi < groups; ++gi)
            centre.push_back(centre.back() + 3.0 * cfg.delta_c * (1.0 + 0.5 * u01(rng)));
        const int where = static_cast<int>(u01(rng) * groups) % groups;

        std::vector<double> xi(static_cast<std::size_t>(cfg.cluster_size));
        double mean = 0.0;
        for (auto& x : xi) {
            x = 2.0 * u01(rng) - 1.0;
            mean += x / cfg.cluster_size;
        }
        double mx = 0.0;
        for (auto& x : xi) {
            x -= mean;
            mx = std::max(mx, std::abs(x));
        }
        double sum_sq = 0.0;
        for (auto& x : xi) {
            x = mx > 0.0 ? x * cfg.cluster_width / mx : 0.0;
            sum_sq += x * x;
        }

        linalg::RealVector lam(n);
        int idx = 0;
        for (int gi = 0; gi < groups; ++gi) {
            if (gi == where)
                for (double x : xi)
                    lam(idx++) = centre[static_cast<std::size_t>(gi)] + x;
            else
                lam(idx++) = centre[static_cast<std::size_t>(gi)];
        }
        linalg::ComplexMatrix z(n, n);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                z(i, j) = linalg::Complex(nd(rng), nd(rng));
        const linalg::ComplexMatrix q = Eigen::HouseholderQR<linalg::ComplexMatrix>(z).householderQ();
        const linalg::HermitianMatrix g(q * lam.cast<linalg::Complex>().asDiagonal() * q.adjoint());

        oracle::IdealOracle o(g);
        bnsl::BnslConfig bc;
        bc.eta_schedule = {cfg.eta};
        bc.stopping = false;
        bc.max_cycles = cfg.cycles;
        bc.n_r = n;
        bc.detect_rank = false;
        bc.evaluator = std::make_shared<bnsl::Evaluator>(g, 0);
        const auto r = bnsl::run_bnsl(o, bc);

        ClusterTrial ct;
        std::vector<double> p{r.initial_P};
        for (const auto& rec : r.trace)
            p.push_back(rec.P);
        for (std::size_t c = 0; c < p.size(); c += static_cast<std::size_t>(m))
            ct.p.push_back(p[c]);
        ct.delta_c = cfg.delta_c;
        ct.delta = linalg::eigen_gap_delta(linalg::sorted_eigenvalues(g), 10.0 * cfg.cluster_width + 1e-9);
        ct.band_lo = 2.0 * cfg.delta_c * std::sqrt(sum_sq);
        ct.band_hi = cfg.delta_c * cfg.delta_c / 8.0;

        // pairs inside the band and clear of the eta plateau
        const double lower = std::max(std::sqrt(ct.band_lo), 10.0 * cfg.eta * g.frobenius_norm());
        try {
            orders.push_back(estimate_convergence_order(p, m, lower, std::sqrt(ct.band_hi)));
            ++rep.trials_with_band_pairs;
        } catch (const std::invalid_argument&) {
        }
        rep.trials.push_back(std::move(ct));
    }
    rep.median_order_in_band = orders.empty() ? std::nan("") : median(orders);
    return rep;
}

} // namespace blindnull::experiments
