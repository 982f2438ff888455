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

#ifndef BLINDNULL_EXPERIMENTS_HPP
#define BLINDNULL_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blindnull/bnsl.hpp"
#include "blindnull/radiosim.hpp"

namespace blindnull::experiments {

// ---- bounds ---------------------------------------------------------------

// rho = (1 - 2^{-(n-1)(n-2)/2})^{1/2}; n >= 3.
double linear_rate_coefficient(int n);

enum class SufficiencyMode { Table, Formula };

// Line-search accuracy sufficient for the linear rate, proportional to P/||G||.
// Table mode supports n in {3,4,5,6,8}. Formula mode uses
//   a = (2^{-(n-2)(n-1)/2} / (2 (7 + 2 sqrt2)(n^2 - n)))^{1/2},
// half the contraction margin, and accepts any n >= 3. Returns a * P_k / ||G||.
double eta_sufficiency(int n, double p_k, double norm_g, SufficiencyMode mode = SufficiencyMode::Table);

// P_k^2 (1 - 2^{-(n-1)(n-2)/2}) + (n^2 - n)(7 + 2 sqrt2) eta^2 ||G||^2
double linear_bound_rhs(int n, double p_k, double eta, double norm_g);

// 2 (2 n_t n_r - n_r^2 - n_r) eta^2 ||G||^2 / delta
double plateau_bound(int n_t, int n_r, double eta, double norm_g, double delta);

// Smallest line-search accuracy a comparison search can deliver in double
// precision; pairs run at a finer eta are reported but not judged.
inline constexpr double kResolvableEta = 1.4901161193847656e-08; // sqrt(eps)

struct LinearBoundRow {
    int cycle = 0;
    double p_k = 0.0;
    double p_next = 0.0;
    double eta = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool checked = true;
    bool violation = false;
};

struct BoundReport {
    std::vector<LinearBoundRow> rows;
    int checked = 0;
    int skipped = 0;
    int violations = 0;
};

// p holds P_0 (before the first phase) then P after every phase. eta holds
// the accuracy of each phase. Pairs (P_{cm}, P_{(c+1)m}) are checked.
// Throws std::invalid_argument when shorter than one cycle.
BoundReport check_linear_bound(const std::vector<double>& p, const std::vector<double>& eta,
                               int n, double norm_g, double min_eta = kResolvableEta);
BoundReport check_linear_bound(const bnsl::NullSpaceReport& r, int n, double norm_g,
                               double min_eta = kResolvableEta);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    int points = 0;
};

// Least squares on (log x, log y). Needs two distinct positive x values.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log P_{k+m} against log P_k over pairs with P_k <= upper and
// P_{k+m} >= lower (all phase offsets). Throws std::invalid_argument with
// fewer than two usable pairs.
double estimate_convergence_order(const std::vector<double>& p, int m, double lower, double upper);

struct PlateauSample {
    double eta = 0.0;
    double interference = 0.0;
    double bound = 0.0; // plateau_bound for this trial
    bool converged = true;
};

struct PlateauPoint {
    double eta = 0.0;
    double median_interference = 0.0;
    int trials = 0;
    int excluded = 0;
    int violations = 0; // interference > slack * bound
};

struct PlateauReport {
    std::vector<PlateauPoint> points; // ascending eta
    double slope = 0.0;
    int violations = 0;
    int excluded = 0;
};

PlateauReport check_interference_plateau(const std::vector<PlateauSample>& samples, double slack = 10.0);

// ---- statistics -----------------------------------------------------------

// Linear-interpolated quantile, q in [0, 1]. Throws on empty input.
double quantile(std::vector<double> v, double q);
inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

// ---- harness --------------------------------------------------------------

// SplitMix64 of base + trial: independent per-trial seeds.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial);

// Runs fn(0..count-1) on a small pool; results land by index. Worker count
// 0 means hardware_concurrency. Exceptions propagate from the lowest index.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

template <class T>
std::vector<T> parallel_map(int count, int workers, const std::function<T(int)>& fn)
{
    std::vector<T> out(static_cast<std::size_t>(count));
    parallel_for(count, workers, [&](int i) { out[static_cast<std::size_t>(i)] = fn(i); });
    return out;
}

enum class OracleKind { Ideal, Radio };
std::string to_string(OracleKind k);
OracleKind oracle_kind_from_string(const std::string& s);

struct ExperimentConfig {
    int n_t = 3;
    int n_r = 2;
    int trials = 200;
    std::vector<double> eta_schedule{1e-4};
    int cycles = 6;
    bool stopping = false;
    std::optional<double> xi;
    bool rc = false; // RC-BNSL instead of BNSL
    bool detect_rank = false;
    OracleKind oracle = OracleKind::Ideal;
    oracle::MapFamily map = oracle::MapFamily::Identity;
    radiosim::PowerControlModel power;
    radiosim::MeasurementConfig measurement;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out_dir = "out";
};

// dB to eta: 10^(dB/10).
double eta_from_db(double db);

// Plain-text "key = value" lines, '#' comments. Keys: n_t, n_r, trials,
// eta (comma list), eta_db (comma list), cycles, stopping, xi, rc,
// detect_rank, oracle, map, power_control, gamma, noise, noise_std, N,
// N_prime, seed, workers, out. Unknown keys throw.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

struct TrialResult {
    int trial = 0;
    std::uint64_t seed = 0;
    double norm_g = 0.0;
    double delta = 0.0; // one third of the minimal eigen gap
    bnsl::NullSpaceReport report;                // plain runs
    std::optional<bnsl::RcBnslReport> rc_report; // rc runs
};

// Channel from random_channel(n_r, n_t, trial_seed(seed, t)); evaluator attached.
TrialResult run_trial(const ExperimentConfig& cfg, int trial);
std::vector<TrialResult> run_trials(const ExperimentConfig& cfg);

// ---- accounting audit -----------------------------------------------------

struct AccountingAudit {
    long long phases = 0;
    long long mismatches = 0;
    long long total_mismatches = 0; // run totals that do not add up
};

// Per phase: probes == 2 (3 + ceil(log2((pi/2)/eta))), or 4 for a flat phi
// bracket, 3 + ... + 4 for a flat theta bracket. Totals: learning cycles
// equal the phase sum; transmission cycles add ordering and rank probes.
void audit(const bnsl::NullSpaceReport& r, AccountingAudit& acc);
void audit(const bnsl::RcBnslReport& r, AccountingAudit& acc);

// ---- bound verification runs ---------------------------------------------

struct LinearBoundRun {
    int n_t = 0;
    int checked = 0;
    int skipped = 0;
    int violations = 0;
    std::vector<BoundReport> trials;
    AccountingAudit accounting;
};

// Ideal-oracle BNSL on random_channel(n_r, n_t) draws with the eta of each
// cycle set to eta_sufficiency(n_t, P, ||G||) from the disclosed iterate.
LinearBoundRun verify_linear_bound(int n_t, int n_r, int trials, std::uint64_t seed, int cycles = 6,
                                   int workers = 0);

// ---- outputs --------------------------------------------------------------

inline const char* kTraceHeader = "trial,k,cycle_count,l,m,theta_hat,phi_hat,P_k,interference_sq,eta_k";

// One row per phase, 15 significant digits; l and m are one based.
void write_trace_csv(std::ostream& out, const std::vector<TrialResult>& trials, bool header = true);
void write_trace_rows(std::ostream& out, int trial, const bnsl::ConvergenceTrace& trace);

nlohmann::json summarize(const ExperimentConfig& cfg, const std::vector<TrialResult>& trials);

// ---- figures --------------------------------------------------------------

struct FigureOverrides {
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> eta; // Fig 4 grid or Fig 5/6 schedule
    std::optional<int> n_t;
    std::optional<int> n_r;
    std::optional<OracleKind> oracle;
    int workers = 0;
};

struct FigureOutput {
    std::vector<std::filesystem::path> files;
    nlohmann::json summary;
};

// Writes CSVs and <name>_summary.json under out_dir.
FigureOutput run_figure(int id, const FigureOverrides& o, const std::filesystem::path& out_dir);

// ---- cluster experiment ---------------------------------------------------

struct ClusterConfig {
    int n_t = 5;
    int cluster_size = 2;
    double cluster_width = 1e-6; // max |xi_l|
    double delta_c = 0.25;       // separation scale of the rest
    double eta = 1e-8;
    int cycles = 6;
    int trials = 20;
    std::uint64_t seed = 7;
};

struct ClusterTrial {
    std::vector<double> p; // P_0, then after each cycle
    double band_lo = 0.0;  // 2 delta_c sqrt(sum xi^2), compared with P^2
    double band_hi = 0.0;  // delta_c^2 / 8
    double delta_c = 0.0;
    double delta = 0.0;
};

struct ClusterReport {
    std::vector<ClusterTrial> trials;
    double median_order_in_band = 0.0; // NaN if no trial had two in-band pairs
    int trials_with_band_pairs = 0;
};

// Builds G = U diag(lambda) U^* with a cluster of size cluster_size around one
// eigenvalue and the rest spaced by 3 delta_c or more; runs BNSL; measures the
// convergence order while P^2 sits inside the cluster band. Throws for
// n_t < 3 or cluster_size outside [2, n_t - 1].
ClusterReport cluster_experiment(const ClusterConfig& cfg);

} // namespace blindnull::experiments

#endif // BLINDNULL_EXPERIMENTS_HPP
