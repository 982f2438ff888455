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

"""Blind null-space learning: Python bindings."""

import json as _json

from ._blindnull import (
    ChannelSet,
    IdealOracle,
    QueryOracle,
    RadioOracle,
    blind_rotation_params,
    build_rotation,
    closed_form_rotation,
    eigen_gap_delta,
    estimate_convergence_order,
    eta_from_db,
    eta_sufficiency,
    linear_rate_coefficient,
    off_diagonal_norm,
    plateau_bound,
    random_channel,
    run_bnsl,
    run_rc_bnsl,
    sorted_eigenvalues,
    linear_bound_rhs,
)
from ._blindnull import run_experiment as _run_experiment
from ._blindnull import run_figure as _run_figure

__version__ = "0.1.0"


def run_experiment(config_text):
    """Run a key = value config. Returns (trace_csv_text, summary_dict)."""
    csv, summary = _run_experiment(config_text)
    return csv, _json.loads(summary)


def run_figure(fig_id, out_dir, trials=None, seed=None):
    """Write CSV data for figure 4, 5 or 6. Returns (files, summary_dict)."""
    files, summary = _run_figure(fig_id, str(out_dir), trials, seed)
    return files, _json.loads(summary)
