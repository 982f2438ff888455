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

#ifndef BLINDNULL_LINESEARCH_HPP
#define BLINDNULL_LINESEARCH_HPP

#include <functional>

#include "blindnull/oracle.hpp"

namespace blindnull::linesearch {

// One evaluation is one oracle probe.
using Objective = std::function<double(double)>;

// Order on measured values. With Decreasing, a larger q means a smaller
// x^* G x, so "better" flips.
struct Order {
    bool decreasing = false;

    static Order from(oracle::Direction d);
    bool better(double a, double b) const { return decreasing ? a > b : a < b; }
    bool no_worse(double a, double b) const { return !better(b, a); }
};

enum class LineSearchMode {
    Comparison, // four-point bracket, memoized bisection
    Table       // literal transcription of the original pseudo-code table, for comparison
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double w_lo = 0.0;
    double w_hi = 0.0;
    bool degenerate = false;
    int evaluations = 0;
};

struct SearchResult {
    double z_hat = 0.0;
    int evaluations = 0;         // oracle calls actually made
    int comparisons = 0;         // bisection steps
    int reprobe_evaluations = 0; // cost if both endpoints were probed per step
    bool degenerate = false;
    double lo = 0.0; // final interval
    double hi = 0.0;
};

// Number of halvings that take `length` to at most `eta`; equals
// ceil(log2(length / eta)) for eta > 0. Throws on eta <= 0.
int bisection_steps(double length, double eta);

// Exact probe count of line_search in Comparison mode: 3 + bisection_steps(z_max/2, eta).
int expected_evaluations(double z_max, double eta);

// Probes 0, z_max/2, z_max and -z_max/2 (the objective is assumed 2 z_max
// periodic and symmetric-unimodal about its minimizer). Returns the length
// z_max/2 interval between the best point and its better neighbour, with both
// endpoint values. If all four values compare equal the result is degenerate.
Bracket bracket(const Objective& w, double z_max, Order order = {});

// Endpoint-comparison bisection on a bracket whose endpoint values are known.
// Ties shrink the right endpoint. Costs bisection_steps - 1 probes.
SearchResult binary_min(const Objective& w, const Bracket& b, double eta, Order order = {});

// z_hat is wrapped into (-z_max, z_max]. Requires 0 < eta < z_max/2.
SearchResult line_search(const Objective& w, double z_max, double eta, Order order = {},
                         LineSearchMode mode = LineSearchMode::Comparison);

} // namespace blindnull::linesearch

#endif // BLINDNULL_LINESEARCH_HPP
