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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blindnull/experiments.hpp"

namespace fs = std::filesystem;
using namespace blindnull;
using namespace blindnull::experiments;

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::vector<double> eta;
    std::vector<double> eta_db;
    std::optional<int> n_t;
    std::optional<int> n_r;
    std::optional<std::string> oracle;
    std::string out = "out";
    int workers = 0;

    void attach(CLI::App* app)
    {
        app->add_option("--seed", seed, "Base seed");
        app->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::NonNegativeNumber);
        app->add_option("--eta", eta, "Line-search accuracy (list)")->delimiter(',');
        app->add_option("--eta-db", eta_db, "Accuracy in dB, 10^(dB/10) (list)")->delimiter(',')->excludes("--eta");
        app->add_option("--nt", n_t, "SU transmit antennas");
        app->add_option("--nr", n_r, "PU receive antennas");
        app->add_option("--oracle", oracle, "ideal or radio")->check(CLI::IsMember({"ideal", "radio"}));
        app->add_option("--out", out, "Output directory");
        app->add_option("--workers", workers, "Worker threads, 0 = all cores");
    }

    std::optional<std::vector<double>> etas() const
    {
        if (!eta.empty())
            return eta;
        if (!eta_db.empty()) {
            std::vector<double> v;
            for (double d : eta_db)
                v.push_back(eta_from_db(d));
            return v;
        }
        return std::nullopt;
    }
};

void write_json(const fs::path& p, const nlohmann::json& j)
{
    std::ofstream f(p);
    if (!f)
        throw std::runtime_error("cannot write " + p.string());
    f << j.dump(2) << '\n';
}

int cmd_run(const std::string& config_path, const Common& c)
{
    ExperimentConfig cfg = parse_config_file(config_path);
    if (c.seed) cfg.seed = *c.seed;
    if (c.trials) cfg.trials = *c.trials;
    if (auto e = c.etas()) cfg.eta_schedule = *e;
    if (c.n_t) cfg.n_t = *c.n_t;
    if (c.n_r) cfg.n_r = *c.n_r;
    if (c.oracle) cfg.oracle = oracle_kind_from_string(*c.oracle);
    if (c.out != "out") cfg.out_dir = c.out;
    if (c.workers) cfg.workers = c.workers;

    const fs::path dir = cfg.out_dir;
    fs::create_directories(dir);
    const auto trials = run_trials(cfg);
    {
        std::ofstream f(dir / "trace.csv");
        write_trace_csv(f, trials);
    }
    const auto summary = summarize(cfg, trials);
    write_json(dir / "summary.json", summary);
    std::cout << "wrote " << (dir / "trace.csv").string() << " and " << (dir / "summary.json").string() << '\n';
    return 0;
}

int cmd_figure(int id, const Common& c)
{
    FigureOverrides o;
    o.trials = c.trials;
    o.seed = c.seed;
    o.eta = c.etas();
    o.n_t = c.n_t;
    o.n_r = c.n_r;
    if (c.oracle)
        o.oracle = oracle_kind_from_string(*c.oracle);
    o.workers = c.workers;
    const auto out = run_figure(id, o, c.out);
    for (const auto& f : out.files)
        std::cout << "wrote " << f.string() << '\n';
    return 0;
}

int cmd_verify(const Common& c)
{
    const fs::path dir = c.out;
    fs::create_directories(dir);
    const int trials = c.trials.value_or(50);
    const std::uint64_t seed = c.seed.value_or(1);
    nlohmann::json j;
    long long violations = 0;

    // linear bound with eta from the sufficiency table
    std::vector<int> sizes{3, 4, 5, 6, 8};
    if (c.n_t)
        sizes = {*c.n_t};
    std::ofstream csv(dir / "linear_bound.csv");
    csv.precision(15);
    csv << "n_t,trial,cycle,P_k,P_next,eta,lhs,rhs,checked,violation\n";
    nlohmann::json lin = nlohmann::json::array();
    for (int n : sizes) {
        const int n_r = c.n_r.value_or(2);
        const auto run = verify_linear_bound(n, n_r, trials, seed, 6, c.workers);
        for (std::size_t t = 0; t < run.trials.size(); ++t)
            for (const auto& r : run.trials[t].rows)
                csv << n << ',' << t << ',' << r.cycle << ',' << r.p_k << ',' << r.p_next << ',' << r.eta << ','
                    << r.lhs << ',' << r.rhs << ',' << r.checked << ',' << r.violation << '\n';
        violations += run.violations + run.accounting.mismatches + run.accounting.total_mismatches;
        lin.push_back({{"n_t", n},
                       {"checked", run.checked},
                       {"skipped_below_resolution", run.skipped},
                       {"violations", run.violations},
                       {"accounting_mismatches", run.accounting.mismatches + run.accounting.total_mismatches}});
        std::printf("linear bound n_t=%d: %d violations over %d cycle pairs (%d below resolution)\n", n,
                    run.violations, run.checked, run.skipped);
    }
    j["linear_bound"] = lin;

    // interference plateau over the eta grid
    ExperimentConfig cfg;
    cfg.n_t = c.n_t.value_or(3);
    cfg.n_r = c.n_r.value_or(2);
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.cycles = 20;
    cfg.stopping = true;
    cfg.workers = c.workers;
    if (c.oracle)
        cfg.oracle = oracle_kind_from_string(*c.oracle);
    std::vector<PlateauSample> samples;
    for (double eta : c.etas().value_or(std::vector<double>{1e-1, 1e-2, 1e-4})) {
        cfg.eta_schedule = {eta};
        for (const auto& t : run_trials(cfg)) {
            if (!std::isfinite(t.delta))
                continue;
            samples.push_back({eta, t.report.interference_sq,
                               plateau_bound(cfg.n_t, cfg.n_r, eta, t.norm_g, t.delta),
                               !t.report.budget_exhausted});
        }
    }
    if (!samples.empty()) {
        const auto rep = check_interference_plateau(samples, 10.0);
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : rep.points)
            pts.push_back({{"eta", p.eta},
                           {"median_interference_sq", p.median_interference},
                           {"trials", p.trials},
                           {"excluded", p.excluded},
                           {"violations", p.violations}});
        j["plateau"] = {{"n_t", cfg.n_t}, {"n_r", cfg.n_r}, {"slope", rep.slope}, {"points", pts},
                        {"violations", rep.violations}};
        violations += rep.violations;
        std::printf("plateau n_t=%d n_r=%d: slope %.3f, %d violations\n", cfg.n_t, cfg.n_r, rep.slope,
                    rep.violations);
    }
    j["total_violations"] = violations;
    write_json(dir / "verify_bounds.json", j);
    std::printf("%s\n", violations == 0 ? "all bounds hold" : "bound violations found");
    return violations == 0 ? 0 : 2;
}

int cmd_rank_demo(const Common& c)
{
    const fs::path dir = c.out;
    fs::create_directories(dir);
    const int n_t = c.n_t.value_or(6);
    std::vector<int> nrs;
    if (c.n_r)
        nrs = {*c.n_r};
    else
        for (int r = 1; r < n_t; ++r)
            nrs.push_back(r);

    std::ofstream csv(dir / "rank_detect.csv");
    csv << "n_t,n_r,trial,estimated_rank,consistent,transmission_cycles,rank_cycles\n";
    nlohmann::json rows = nlohmann::json::array();
    int wrong = 0;
    for (int n_r : nrs) {
        ExperimentConfig cfg;
        cfg.n_t = n_t;
        cfg.n_r = n_r;
        cfg.trials = c.trials.value_or(20);
        cfg.seed = c.seed.value_or(1);
        cfg.eta_schedule = c.etas().value_or(std::vector<double>{1e-5});
        cfg.cycles = 12;
        cfg.stopping = true;
        cfg.detect_rank = true;
        cfg.workers = c.workers;
        if (c.oracle)
            cfg.oracle = oracle_kind_from_string(*c.oracle);
        int correct = 0;
        for (const auto& t : run_trials(cfg)) {
            const auto& rk = *t.report.rank;
            correct += rk.estimated_rank == n_r ? 1 : 0;
            csv << n_t << ',' << n_r << ',' << t.trial << ',' << rk.estimated_rank << ',' << rk.consistent << ','
                << t.report.transmission_cycles << ',' << t.report.rank_cycles << '\n';
        }
        wrong += cfg.trials - correct;
        rows.push_back({{"n_r", n_r}, {"trials", cfg.trials}, {"correct", correct}});
        std::printf("n_t=%d n_r=%d: %d/%d ranks correct\n", n_t, n_r, correct, cfg.trials);
    }
    write_json(dir / "rank_detect.json", {{"n_t", n_t}, {"results", rows}, {"wrong", wrong}});
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Blind null-space learning experiments"};
    app.require_subcommand(1);

    Common run_opts, fig_opts, ver_opts, rank_opts;
    std::string config;
    int fig_id = 4;

    auto* run = app.add_subcommand("run", "Run an experiment from a plain-text config file");
    run->add_option("config", config, "key = value config file")->required()->check(CLI::ExistingFile);
    run_opts.attach(run);

    auto* fig = app.add_subcommand("figure", "Reproduce Fig. 4, 5 or 6 as CSV data");
    fig->add_option("--id", fig_id, "Figure number")->required()->check(CLI::IsMember({4, 5, 6}));
    fig_opts.attach(fig);

    auto* ver = app.add_subcommand("verify-bounds", "Check the linear-rate and plateau bounds; nonzero exit on violation");
    ver_opts.attach(ver);

    auto* rank = app.add_subcommand("rank-detect-demo", "Blind rank estimation over random channels");
    rank_opts.attach(rank);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run)
            return cmd_run(config, run_opts);
        if (*fig)
            return cmd_figure(fig_id, fig_opts);
        if (*ver)
            return cmd_verify(ver_opts);
        if (*rank)
            return cmd_rank_demo(rank_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
