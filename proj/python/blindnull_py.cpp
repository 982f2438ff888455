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

#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blindnull/bnsl.hpp"
#include "blindnull/experiments.hpp"
#include "blindnull/linalg.hpp"
#include "blindnull/oracle.hpp"
#include "blindnull/radiosim.hpp"

namespace py = pybind11;
using namespace blindnull;
using linalg::ComplexMatrix;
using linalg::HermitianMatrix;

namespace {

py::dict trace_dict(const bnsl::ConvergenceTrace& tr)
{
    std::vector<long long> k, cc;
    std::vector<int> l, m, probes;
    std::vector<double> th, ph, p, i2, eta;
    for (const auto& r : tr) {
        k.push_back(r.k);
        cc.push_back(r.cycle_count);
        l.push_back(r.l);
        m.push_back(r.m);
        th.push_back(r.theta_hat);
        ph.push_back(r.phi_hat);
        p.push_back(r.P);
        i2.push_back(r.interference_sq);
        eta.push_back(r.eta);
        probes.push_back(r.probes);
    }
    py::dict d;
    d["k"] = k;
    d["cycle_count"] = cc;
    d["l"] = l;
    d["m"] = m;
    d["theta_hat"] = th;
    d["phi_hat"] = ph;
    d["P_k"] = p;
    d["interference_sq"] = i2;
    d["eta_k"] = eta;
    d["probes"] = probes;
    return d;
}

py::dict report_dict(const bnsl::NullSpaceReport& r)
{
    py::dict d;
    d["w"] = r.w;
    d["t"] = r.t;
    d["ordering"] = r.ordering;
    d["null_dim"] = r.null_dim;
    d["trace"] = trace_dict(r.trace);
    d["sweeps_completed"] = r.sweeps_completed;
    d["converged"] = r.converged;
    d["learning_cycles"] = r.learning_cycles;
    d["ordering_cycles"] = r.ordering_cycles;
    d["rank_cycles"] = r.rank_cycles;
    d["transmission_cycles"] = r.transmission_cycles;
    d["initial_P"] = r.initial_P;
    d["interference_sq"] = r.interference_sq;
    if (r.rank) {
        d["estimated_rank"] = r.rank->estimated_rank;
        d["nullity"] = r.rank->nullity;
    } else {
        d["estimated_rank"] = py::none();
        d["nullity"] = py::none();
    }
    return d;
}

bnsl::BnslConfig make_config(std::vector<double> eta, int max_cycles, bool stopping, std::optional<int> n_r,
                             std::optional<double> xi)
{
    bnsl::BnslConfig c;
    c.eta_schedule = std::move(eta);
    c.max_cycles = max_cycles;
    c.stopping = stopping;
    c.xi = xi;
    c.n_r = n_r;
    c.detect_rank = !n_r.has_value();
    return c;
}

} // namespace

PYBIND11_MODULE(_blindnull, mod)
{
    mod.doc() = "Blind null-space learning from monotone scalar measurements";

    // linear algebra
    mod.def("closed_form_rotation", [](const ComplexMatrix& a, int l, int m) {
        const auto p = linalg::closed_form_rotation(HermitianMatrix(a), l, m);
        return py::make_tuple(p.theta, p.phi);
    }, py::arg("a"), py::arg("l"), py::arg("m"));
    mod.def("build_rotation", [](int l, int m, double theta, double phi, int n) {
        return linalg::build_rotation({l, m, theta, phi}, n);
    }, py::arg("l"), py::arg("m"), py::arg("theta"), py::arg("phi"), py::arg("n"));
    mod.def("off_diagonal_norm", [](const ComplexMatrix& a) {
        return linalg::off_diagonal_norm(HermitianMatrix(a));
    });
    mod.def("sorted_eigenvalues", [](const ComplexMatrix& a) {
        return linalg::sorted_eigenvalues(HermitianMatrix(a));
    });
    mod.def("eigen_gap_delta", [](const linalg::RealVector& ev) { return linalg::eigen_gap_delta(ev); });

    // oracles
    py::class_<oracle::QueryOracle>(mod, "QueryOracle")
        .def("probe", &oracle::QueryOracle::probe)
        .def("advance_phase", &oracle::QueryOracle::advance_phase)
        .def_property_readonly("cycles_used", &oracle::QueryOracle::cycles_used)
        .def_property_readonly("dim", &oracle::QueryOracle::dim);

    py::class_<oracle::IdealOracle, oracle::QueryOracle>(mod, "IdealOracle")
        .def(py::init([](const ComplexMatrix& g, const std::string& family, double a, double b, std::uint64_t seed) {
                 oracle::IdealOracleOptions o;
                 o.family = oracle::map_family_from_string(family);
                 o.affine_a = a;
                 o.affine_b = b;
                 o.seed = seed;
                 return std::make_unique<oracle::IdealOracle>(HermitianMatrix(g), o);
             }),
             py::arg("g"), py::arg("family") = "identity", py::arg("a") = 7.0, py::arg("b") = 1.0,
             py::arg("seed") = 0);

    py::class_<radiosim::ChannelSet>(mod, "ChannelSet")
        .def_readwrite("h12", &radiosim::ChannelSet::h12)
        .def_readwrite("h21", &radiosim::ChannelSet::h21)
        .def_readwrite("p1", &radiosim::ChannelSet::p1)
        .def("gram", [](const radiosim::ChannelSet& c) { return c.gram().matrix(); });
    mod.def("random_channel", &radiosim::random_channel, py::arg("n_r"), py::arg("n_t"), py::arg("seed"));

    py::class_<radiosim::RadioOracle, oracle::QueryOracle>(mod, "RadioOracle")
        .def(py::init([](const radiosim::ChannelSet& ch, const std::string& power, bool noise, double noise_std,
                         std::uint64_t seed) {
                 radiosim::PowerControlModel m;
                 m.kind = radiosim::power_control_from_string(power);
                 radiosim::MeasurementConfig meas;
                 meas.noise_enabled = noise;
                 meas.noise_std = noise_std;
                 meas.seed = seed;
                 return std::make_unique<radiosim::RadioOracle>(ch, m, meas);
             }),
             py::arg("channel"), py::arg("power_control") = "snr_target", py::arg("noise") = false,
             py::arg("noise_std") = 0.0, py::arg("seed") = 0)
        .def_property_readonly("a1", &radiosim::RadioOracle::a1)
        .def_property_readonly("a2", &radiosim::RadioOracle::a2);

    // algorithms
    mod.def("blind_rotation_params", [](oracle::QueryOracle& o, const ComplexMatrix& w, int l, int m, double eta) {
        const auto r = bnsl::blind_rotation_params(o, w, l, m, eta, linesearch::Order::from(o.direction()));
        return py::make_tuple(r.params.theta, r.params.phi, r.probes);
    }, py::arg("oracle"), py::arg("w"), py::arg("l"), py::arg("m"), py::arg("eta"));

    mod.def("run_bnsl",
            [](oracle::QueryOracle& o, std::vector<double> eta, int max_cycles, bool stopping, std::optional<int> n_r,
               std::optional<double> xi, std::optional<ComplexMatrix> g_eval) {
                auto c = make_config(std::move(eta), max_cycles, stopping, n_r, xi);
                if (g_eval)
                    c.evaluator = std::make_shared<bnsl::Evaluator>(HermitianMatrix(*g_eval),
                                                                    o.dim() - n_r.value_or(0));
                return report_dict(bnsl::run_bnsl(o, c));
            },
            py::arg("oracle"), py::arg("eta") = std::vector<double>{1e-4}, py::arg("max_cycles") = 50,
            py::arg("stopping") = true, py::arg("n_r") = py::none(), py::arg("xi") = py::none(),
            py::arg("g_eval") = py::none(),
            "Blind null-space learning. g_eval is evaluation-side only and fills P_k.");

    mod.def("run_rc_bnsl",
            [](oracle::QueryOracle& o, int n_r, std::vector<double> eta, int max_cycles) {
                bnsl::RcBnslConfig c;
                c.inner = make_config(std::move(eta), max_cycles, true, std::nullopt, std::nullopt);
                c.n_r = n_r;
                const auto r = bnsl::run_rc_bnsl(o, c);
                py::dict d;
                d["t"] = r.t;
                d["n_r"] = r.n_r;
                d["stages"] = r.stages.size();
                d["transmission_cycles"] = r.transmission_cycles;
                return d;
            },
            py::arg("oracle"), py::arg("n_r"), py::arg("eta") = std::vector<double>{1e-3},
            py::arg("max_cycles") = 30);

    // bounds and experiments
    mod.def("linear_rate_coefficient", &experiments::linear_rate_coefficient);
    mod.def("eta_sufficiency", [](int n, double p, double g, bool formula) {
        return experiments::eta_sufficiency(n, p, g,
                                            formula ? experiments::SufficiencyMode::Formula
                                                    : experiments::SufficiencyMode::Table);
    }, py::arg("n_t"), py::arg("p_k"), py::arg("norm_g"), py::arg("formula") = false);
    mod.def("linear_bound_rhs", &experiments::linear_bound_rhs);
    mod.def("plateau_bound", &experiments::plateau_bound);
    mod.def("estimate_convergence_order", &experiments::estimate_convergence_order, py::arg("p"), py::arg("m"),
            py::arg("lower"), py::arg("upper"));
    mod.def("eta_from_db", &experiments::eta_from_db);

    mod.def("run_experiment", [](const std::string& config_text) {
        std::istringstream in(config_text);
        const auto cfg = experiments::parse_config(in);
        const auto trials = experiments::run_trials(cfg);
        std::ostringstream csv;
        experiments::write_trace_csv(csv, trials);
        return py::make_tuple(csv.str(), experiments::summarize(cfg, trials).dump());
    }, py::arg("config_text"), "Runs a key = value config; returns (trace_csv, summary_json).");

    mod.def("run_figure", [](int id, const std::string& out_dir, std::optional<int> trials, std::optional<std::uint64_t> seed) {
        experiments::FigureOverrides o;
        o.trials = trials;
        o.seed = seed;
        const auto r = experiments::run_figure(id, o, out_dir);
        std::vector<std::string> files;
        for (const auto& f : r.files)
            files.push_back(f.string());
        return py::make_tuple(files, r.summary.dump());
    }, py::arg("id"), py::arg("out_dir"), py::arg("trials") = py::none(), py::arg("seed") = py::none());
}
