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
#include <map>
#include <stdexcept>

#include "blindnull/experiments.hpp"

namespace blindnull::experiments {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double linear_bound_const(int n) { return static_cast<double>(n * n - n) * (7.0 + 2.0 * kSqrt2); }

double contraction(int n) { return std::exp2(-0.5 * static_cast<double>((n - 1) * (n - 2))); }

} // namespace

double linear_rate_coefficient(int n)
{
    if (n < 3)
        throw std::invalid_argument("linear rate needs n_t >= 3");
    return std::sqrt(1.0 - contraction(n));
}

double eta_sufficiency(int n, double p_k, double norm_g, SufficiencyMode mode)
{
    if (!(norm_g > 0.0) || !(p_k >= 0.0))
        throw std::invalid_argument("eta_sufficiency needs P_k >= 0 and ||G|| > 0");
    double a = 0.0;
    if (mode == SufficiencyMode::Table) {
        switch (n) {
        case 3: a = 8e-2; break;
        case 4: a = 2e-2; break;
        case 5: a = 7e-3; break;
        case 6: a = 1e-3; break;
        case 8: a = 2e-5; break;
        default: throw std::invalid_argument("no table entry for n_t = " + std::to_string(n));
        }
    } else {
        if (n < 3)
            throw std::invalid_argument("eta_sufficiency needs n_t >= 3");
        a = std::sqrt(contraction(n) / (2.0 * linear_bound_const(n)));
    }
    return a * p_k / norm_g;
}

double linear_bound_rhs(int n, double p_k, double eta, double norm_g)
{
    return p_k * p_k * (1.0 - contraction(n)) + linear_bound_const(n) * eta * eta * norm_g * norm_g;
}

double plateau_bound(int n_t, int n_r, double eta, double norm_g, double delta)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("plateau bound needs delta > 0");
    const double c = 2.0 * static_cast<double>(2 * n_t * n_r - n_r * n_r - n_r);
    return c * eta * eta * norm_g * norm_g / delta;
}

BoundReport check_linear_bound(const std::vector<double>& p, const std::vector<double>& eta,
                               int n, double norm_g, double min_eta)
{
    if (n < 3)
        throw std::invalid_argument("linear bound needs n_t >= 3");
    const std::size_t m = static_cast<std::size_t>(n * (n - 1) / 2);
    if (p.size() < m + 1 || eta.size() + 1 < p.size())
        throw std::invalid_argument("trace shorter than one cycle");

    BoundReport rep;
    for (std::size_t c = 0; (c + 1) * m < p.size(); ++c) {
        LinearBoundRow row;
        row.cycle = static_cast<int>(c);
        row.p_k = p[c * m];
        row.p_next = p[(c + 1) * m];
        // one cycle may mix accuracies; the loosest governs
        row.eta = *std::max_element(eta.begin() + static_cast<std::ptrdiff_t>(c * m),
                                    eta.begin() + static_cast<std::ptrdiff_t>((c + 1) * m));
        row.lhs = row.p_next * row.p_next;
        row.rhs = linear_bound_rhs(n, row.p_k, row.eta, norm_g);
        row.checked = row.eta >= min_eta;
        if (row.checked) {
            ++rep.checked;
            row.violation = row.lhs > row.rhs;
            rep.violations += row.violation ? 1 : 0;
        } else {
            ++rep.skipped;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

BoundReport check_linear_bound(const bnsl::NullSpaceReport& r, int n, double norm_g, double min_eta)
{
    std::vector<double> p{r.initial_P};
    std::vector<double> eta;
    for (const auto& rec : r.trace) {
        p.push_back(rec.P);
        eta.push_back(rec.eta);
    }
    if (std::any_of(p.begin(), p.end(), [](double v) { return std::isnan(v); }))
        throw std::invalid_argument("trace has no evaluator values");
    return check_linear_bound(p, eta, n, norm_g, min_eta);
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("fit_loglog: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++k;
    }
    const double den = k * sxx - sx * sx;
    if (k < 2 || !(std::abs(den) > 1e-12 * std::max(1.0, k * sxx)))
        throw std::invalid_argument("fit_loglog: need two distinct positive points");
    LineFit f;
    f.slope = (k * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / k;
    f.points = k;
    return f;
}

double estimate_convergence_order(const std::vector<double>& p, int m, double lower, double upper)
{
    if (m < 1)
        throw std::invalid_argument("cycle length must be positive");
    std::vector<double> x, y;
    for (std::size_t k = 0; k + static_cast<std::size_t>(m) < p.size(); ++k) {
        const double a = p[k], b = p[k + static_cast<std::size_t>(m)];
        if (a <= upper && b >= lower && a > 0.0 && b > 0.0) {
            x.push_back(a);
            y.push_back(b);
        }
    }
    if (x.size() < 2)
        throw std::invalid_argument("not enough pre-plateau points");
    return fit_loglog(x, y).slope;
}

PlateauReport check_interference_plateau(const std::vector<PlateauSample>& samples, double slack)
{
    std::map<double, std::vector<const PlateauSample*>> by_eta;
    for (const auto& s : samples)
        by_eta[s.eta].push_back(&s);

    PlateauReport rep;
    std::vector<double> xs, ys;
    for (const auto& [eta, group] : by_eta) {
        PlateauPoint pt;
        pt.eta = eta;
        std::vector<double> vals;
        for (const auto* s : group) {
            if (!s->converged) {
                ++pt.excluded;
                continue;
            }
            ++pt.trials;
            vals.push_back(s->interference);
            if (s->interference > slack * s->bound)
                ++pt.violations;
        }
        pt.median_interference = vals.empty() ? std::nan("") : median(vals);
        rep.violations += pt.violations;
        rep.excluded += pt.excluded;
        if (!vals.empty()) {
            xs.push_back(eta);
            ys.push_back(pt.median_interference);
        }
        rep.points.push_back(pt);
    }
    rep.slope = fit_loglog(xs, ys).slope;
    return rep;
}

double quantile(std::vector<double> v, double q)
{
    if (v.empty())
        throw std::invalid_argument("quantile of empty sample");
    std::sort(v.begin(), v.end());
    const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= v.size())
        return v.back();
    const double f = pos - static_cast<double>(i);
    return v[i] + f * (v[i + 1] - v[i]);
}

double eta_from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace blindnull::experiments
