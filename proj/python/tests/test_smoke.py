# SPDX-License-Identifier: Apache-2.0
#
# Copyright 2026 The blindnull Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import blindnull as bn


def _psd(n, rank, seed):
    rng = np.random.default_rng(seed)
    h = (rng.normal(size=(rank, n)) + 1j * rng.normal(size=(rank, n))) / np.sqrt(2)
    g = h.conj().T @ h
    return g / np.linalg.norm(g)


def test_rate_coefficient_values():
    assert bn.linear_rate_coefficient(3) == pytest.approx(math.sqrt(0.5))
    assert bn.linear_rate_coefficient(4) == pytest.approx(math.sqrt(1 - 2**-3))
    with pytest.raises(ValueError):
        bn.linear_rate_coefficient(2)


def test_eta_table():
    assert bn.eta_sufficiency(3, 1.0, 1.0) == pytest.approx(0.08)
    assert bn.eta_sufficiency(8, 2.0, 1.0) == pytest.approx(4e-5)


def test_closed_form_annihilates():
    g = _psd(4, 4, 1)
    theta, phi = bn.closed_form_rotation(g, 0, 2)
    r = bn.build_rotation(0, 2, theta, phi, 4)
    a = r.conj().T @ g @ r
    assert abs(a[0, 2]) < 1e-12


def test_bnsl_finds_null_space():
    ch = bn.random_channel(2, 4, 11)
    g = ch.gram()
    o = bn.IdealOracle(g)
    rep = bn.run_bnsl(o, eta=[1e-4], max_cycles=20, g_eval=g, n_r=2)
    t = rep["t"]
    assert t.shape == (4, 2)
    # numpy eigensolver as the reference
    vals, vecs = np.linalg.eigh(g)
    null = vecs[:, :2]
    s = np.linalg.svd(null.conj().T @ t, compute_uv=False)
    assert math.acos(min(1.0, s.min())) < 2e-4
    assert rep["transmission_cycles"] == o.cycles_used
    assert len(rep["trace"]["P_k"]) == len(rep["trace"]["k"])


def test_rank_estimate():
    ch = bn.random_channel(3, 5, 3)
    rep = bn.run_bnsl(bn.IdealOracle(ch.gram()), eta=[1e-5], max_cycles=12)
    assert rep["estimated_rank"] == 3


def test_radio_oracle_matches_affine_ideal():
    ch = bn.random_channel(2, 3, 5)
    radio = bn.RadioOracle(ch)
    ideal = bn.IdealOracle(ch.gram(), family="affine", a=radio.a1 * 10.0,
                           b=radio.a1 * 10.0 * 0.1 + radio.a2)
    a = bn.run_bnsl(radio, eta=[1e-3], max_cycles=3, stopping=False, n_r=2)
    b = bn.run_bnsl(ideal, eta=[1e-3], max_cycles=3, stopping=False, n_r=2)
    assert a["trace"]["theta_hat"] == b["trace"]["theta_hat"]
    assert a["trace"]["phi_hat"] == b["trace"]["phi_hat"]


def test_rc_bnsl_shape():
    ch = bn.random_channel(2, 5, 9)
    rep = bn.run_rc_bnsl(bn.IdealOracle(ch.gram()), n_r=2)
    assert rep["t"].shape == (5, 3)
    assert rep["stages"] == 3


def test_experiment_and_figure(tmp_path):
    csv, summary = bn.run_experiment("n_t = 3\nn_r = 2\ntrials = 3\neta = 1e-2\ncycles = 2\n")
    lines = csv.strip().splitlines()
    assert lines[0].startswith("trial,k,cycle_count")
    assert len(lines) == 1 + 3 * 2 * 3
    assert summary["accounting"]["phase_mismatches"] == 0
    files, fig = bn.run_figure(4, tmp_path, trials=4)
    assert fig["figure"] == 4
    assert all((tmp_path / f).exists() or __import__("os").path.exists(f) for f in files)


def test_errors_are_python_exceptions():
    o = bn.IdealOracle(_psd(3, 3, 0))
    with pytest.raises(RuntimeError):
        o.probe(np.zeros(3, dtype=complex))  # before the first phase
    o.advance_phase()
    with pytest.raises(ValueError):
        o.probe(np.ones(3, dtype=complex) * 2.0)  # above the power cap
