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

#include "blindnull/linesearch.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace blindnull::linesearch {

namespace {

void check_args(double z_max, double eta)
{
    if (!(z_max > 0.0) || !std::isfinite(z_max))
        throw std::invalid_argument("line search needs z_max > 0");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("line search needs eta > 0");
    if (eta >= z_max / 2.0)
        throw std::invalid_argument("line search needs eta below the bracket length z_max/2");
}

double wrap_period(double z, double half_period)
{
    const double period = 2.0 * half_period;
    double r = z - period * std::round(z / period);
    if (r <= -half_period)
        r += period;
    return r;
}

SearchResult table_search(const Objective& w, double z_max, double eta, Order order)
{
    // Steps 1-10 as printed. Value differences in step 2 are not
    // comparison-only; kept for reference runs.
    SearchResult r;
    const double L = z_max;
    const double w0 = w(0.0), wh = w(z_max / 2.0), wm = w(z_max);
    r.evaluations = 3;
    const int a = std::abs(wh - w0) > std::abs(wh - wm) ? 1 : 0;
    const int b = order.better(w0, wh) ? 1 : 0;
    const int c = order.better(wh, wm) ? 1 : 0;
    double hi = z_max * a * (1 - b) + z_max * (1 - a) * c;
    double lo = hi - L;
    double z = z_max / 2.0;
    while (std::abs(hi - lo) >= eta) {
        z = 0.5 * (hi + lo);
        const double wlo = w(lo), whi = w(hi);
        r.evaluations += 2;
        ++r.comparisons;
        if (order.no_worse(wlo, whi))
            hi = z;
        else
            lo = z;
    }
    r.z_hat = z;
    r.lo = lo;
    r.hi = hi;
    r.reprobe_evaluations = r.evaluations;
    r.degenerate = w0 == wh && wh == wm;
    return r;
}

} // namespace

Order Order::from(oracle::Direction d)
{
    return Order{d == oracle::Direction::Decreasing};
}

int bisection_steps(double length, double eta)
{
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw std::invalid_argument("bisection needs eta > 0");
    int n = 0;
    while (length > eta) {
        length *= 0.5;
        ++n;
    }
    return n;
}

int expected_evaluations(double z_max, double eta)
{
    check_args(z_max, eta);
    return 3 + bisection_steps(z_max / 2.0, eta);
}

Bracket bracket(const Objective& w, double z_max, Order order)
{
    if (!(z_max > 0.0))
        throw std::invalid_argument("bracket needs z_max > 0");
    const double step = z_max / 2.0;
    // angular order 0, step, 2 step, 3 step (== -step)
    std::array<double, 4> v{};
    v[0] = w(0.0);
    v[1] = w(step);
    v[2] = w(z_max);
    v[3] = w(-step);

    Bracket b;
    b.evaluations = 4;
    if (v[0] == v[1] && v[1] == v[2] && v[2] == v[3]) {
        b.degenerate = true;
        return b;
    }
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (order.better(v[i], v[best]))
            best = i;
    const int next = (best + 1) % 4;
    const int prev = (best + 3) % 4;
    const double at = best * step;
    if (order.better(v[prev], v[next])) {
        b.lo = at - step;
        b.hi = at;
        b.w_lo = v[prev];
        b.w_hi = v[best];
    } else {
        b.lo = at;
        b.hi = at + step;
        b.w_lo = v[best];
        b.w_hi = v[next];
    }
    return b;
}

SearchResult binary_min(const Objective& w, const Bracket& b, double eta, Order order)
{
    SearchResult r;
    r.lo = b.lo;
    r.hi = b.hi;
    const int steps = bisection_steps(b.hi - b.lo, eta);
    double wlo = b.w_lo, whi = b.w_hi;
    for (int i = 0; i < steps; ++i) {
        const double mid = 0.5 * (r.lo + r.hi);
        const bool left = order.no_worse(wlo, whi);
        if (left)
            r.hi = mid;
        else
            r.lo = mid;
        ++r.comparisons;
        if (i + 1 < steps) {
            const double wm = w(mid);
            ++r.evaluations;
            (left ? whi : wlo) = wm;
        }
    }
    r.z_hat = 0.5 * (r.lo + r.hi);
    r.reprobe_evaluations = 2 * r.comparisons;
    return r;
}

SearchResult line_search(const Objective& w, double z_max, double eta, Order order,
                         LineSearchMode mode)
{
    check_args(z_max, eta);
    if (mode == LineSearchMode::Table)
        return table_search(w, z_max, eta, order);

    const Bracket b = bracket(w, z_max, order);
    if (b.degenerate) {
        SearchResult r;
        r.degenerate = true;
        r.evaluations = b.evaluations;
        r.reprobe_evaluations = b.evaluations;
        return r;
    }
    SearchResult r = binary_min(w, b, eta, order);
    r.evaluations += b.evaluations;
    r.reprobe_evaluations += b.evaluations;
    r.z_hat = wrap_period(r.z_hat, z_max);
    return r;
}

} // namespace blindnull::linesearch
