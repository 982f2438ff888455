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

#include "blindnull/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace blindnull::linalg {

namespace {

void mirror_upper(ComplexMatrix& m)
{
    const Eigen::Index n = m.rows();
    for (Eigen::Index p = 0; p < n; ++p) {
        m(p, p) = Complex(m(p, p).real(), 0.0);
        for (Eigen::Index q = p + 1; q < n; ++q)
            m(q, p) = std::conj(m(p, q));
    }
}

void check_pivot(int l, int m, int n)
{
    if (n < 2)
        throw std::invalid_argument("rotation needs dimension >= 2");
    if (l < 0 || m >= n || l >= m)
        throw std::out_of_range("pivot (" + std::to_string(l) + ", " + std::to_string(m) +
                                ") invalid for dimension " + std::to_string(n));
}

} // namespace

HermitianMatrix::HermitianMatrix(ComplexMatrix entries, double symmetry_tol)
    : m_(std::move(entries))
{
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw std::invalid_argument("HermitianMatrix must be square and non-empty");
    if (!m_.allFinite())
        throw std::invalid_argument("HermitianMatrix entries must be finite");
    const double scale = std::max(1.0, m_.norm());
    const double asym = (m_ - m_.adjoint()).norm();
    if (asym > symmetry_tol * scale)
        throw std::invalid_argument("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    mirror_upper(m_);
}

HermitianMatrix HermitianMatrix::identity(int dim)
{
    return HermitianMatrix(ComplexMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::gram(const ComplexMatrix& h)
{
    ComplexMatrix g = h.adjoint() * h;
    mirror_upper(g);
    return HermitianMatrix(std::move(g));
}

HermitianMatrix HermitianMatrix::congruence(const HermitianMatrix& g, const ComplexMatrix& w)
{
    if (w.rows() != g.dim())
        throw std::invalid_argument("congruence: dimension mismatch");
    ComplexMatrix a = w.adjoint() * g.matrix() * w;
    mirror_upper(a);
    return HermitianMatrix(std::move(a));
}

ComplexMatrix build_rotation(const RotationParams& p, int n)
{
    check_pivot(p.l, p.m, n);
    ComplexMatrix r = ComplexMatrix::Identity(n, n);
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    r(p.l, p.l) = c;
    r(p.m, p.m) = c;
    r(p.l, p.m) = std::polar(s, -p.phi);
    r(p.m, p.l) = -std::polar(s, p.phi);
    return r;
}

ComplexVector rotation_column(const RotationParams& p, int n)
{
    check_pivot(p.l, p.m, n);
    ComplexVector r = ComplexVector::Zero(n);
    r(p.l) = std::cos(p.theta);
    r(p.m) = -std::polar(std::sin(p.theta), p.phi);
    return r;
}

ComplexVector rotated_column(const ComplexMatrix& w, int l, int m, double theta, double phi)
{
    check_pivot(l, m, static_cast<int>(w.cols()));
    return std::cos(theta) * w.col(l) - std::polar(std::sin(theta), phi) * w.col(m);
}

void apply_rotation(ComplexMatrix& w, const RotationParams& p)
{
    check_pivot(p.l, p.m, static_cast<int>(w.cols()));
    const double c = std::cos(p.theta);
    const Complex e_minus = std::polar(std::sin(p.theta), -p.phi); // R_{lm}
    const Complex e_plus = -std::polar(std::sin(p.theta), p.phi);  // R_{ml}
    const ComplexVector wl = w.col(p.l);
    const ComplexVector wm = w.col(p.m);
    w.col(p.l) = c * wl + e_plus * wm;
    w.col(p.m) = e_minus * wl + c * wm;
}

HermitianMatrix rotate(const HermitianMatrix& a, const RotationParams& p)
{
    const int n = a.dim();
    check_pivot(p.l, p.m, n);
    ComplexMatrix b = a.matrix();
    apply_rotation(b, p); // A R
    const double c = std::cos(p.theta);
    const Complex r_lm = std::polar(std::sin(p.theta), -p.phi);
    const Complex r_ml = -std::polar(std::sin(p.theta), p.phi);
    // R^* (A R): rows l and m only.
    const Eigen::RowVectorXcd bl = b.row(p.l);
    const Eigen::RowVectorXcd bm = b.row(p.m);
    b.row(p.l) = c * bl + std::conj(r_ml) * bm;
    b.row(p.m) = std::conj(r_lm) * bl + c * bm;
    mirror_upper(b);
    return HermitianMatrix(std::move(b));
}

double quadratic_form(const HermitianMatrix& a, const ComplexVector& x)
{
    if (x.size() != a.dim())
        throw std::invalid_argument("quadratic_form: dimension mismatch");
    const Complex v = x.dot(a.matrix() * x);
    const double scale = a.frobenius_norm() * x.squaredNorm();
    if (std::abs(v.imag()) > 1e-12 * std::max(scale, std::numeric_limits<double>::min()))
        throw std::domain_error("quadratic_form: imaginary residue, input not Hermitian");
    return v.real();
}

RealVector column_quadratic_forms(const HermitianMatrix& g, const ComplexMatrix& w)
{
    RealVector out(w.cols());
    for (Eigen::Index j = 0; j < w.cols(); ++j)
        out(j) = quadratic_form(g, w.col(j));
    return out;
}

double fold_quarter(double theta)
{
    const double quarter = kPi / 4.0;
    const double half = kPi / 2.0;
    double t = theta - half * std::round(theta / half);
    if (t <= -quarter)
        t += half;
    else if (t > quarter)
        t -= half;
    return t;
}

double wrap_pi(double angle)
{
    double a = std::remainder(angle, 2.0 * kPi);
    if (a <= -kPi)
        a += 2.0 * kPi;
    return a;
}

double periodic_distance(double a, double b, double period)
{
    return std::abs(std::remainder(a - b, period));
}

RotationParams closed_form_rotation(const HermitianMatrix& a, int l, int m)
{
    check_pivot(l, m, a.dim());
    const Complex alm = a(l, m);
    const double mag = std::abs(alm);
    if (mag == 0.0)
        return {l, m, 0.0, 0.0};
    const double diff = a(l, l).real() - a(m, m).real();
    const double theta = fold_quarter(0.5 * std::atan2(-2.0 * mag, diff));
    return {l, m, theta, -std::arg(alm)};
}

double off_diagonal_norm(const HermitianMatrix& a)
{
    double sum = 0.0;
    for (int p = 0; p < a.dim(); ++p)
        for (int q = p + 1; q < a.dim(); ++q)
            sum += std::norm(a(p, q));
    return std::sqrt(sum);
}

std::vector<std::pair<int, int>> cyclic_pivots(int n)
{
    std::vector<std::pair<int, int>> pivots;
    pivots.reserve(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
    for (int l = 0; l < n; ++l)
        for (int m = l + 1; m < n; ++m)
            pivots.emplace_back(l, m);
    return pivots;
}

JacobiResult reference_cyclic_jacobi(const HermitianMatrix& g, double tol, int max_sweeps,
                                     PivotRule rule)
{
    const int n = g.dim();
    JacobiResult out;
    out.eigenvectors = ComplexMatrix::Identity(n, n);
    HermitianMatrix a = g;
    out.off_norms.push_back(off_diagonal_norm(a));
    const auto pivots = cyclic_pivots(n);

    while (out.off_norms.back() >= tol) {
        if (out.sweeps == max_sweeps)
            throw std::runtime_error("reference_cyclic_jacobi: no convergence after " +
                                     std::to_string(max_sweeps) + " sweeps");
        for (std::size_t step = 0; step < pivots.size(); ++step) {
            auto [l, m] = pivots[step];
            if (rule == PivotRule::Classic) {
                double best = -1.0;
                for (const auto& [pl, pm] : pivots) {
                    const double v = std::abs(a(pl, pm));
                    if (v > best) {
                        best = v;
                        l = pl;
                        m = pm;
                    }
                }
            }
            const RotationParams p = closed_form_rotation(a, l, m);
            a = rotate(a, p);
            apply_rotation(out.eigenvectors, p);
        }
        ++out.sweeps;
        out.off_norms.push_back(off_diagonal_norm(a));
    }
    out.eigenvalues = a.matrix().diagonal().real();
    return out;
}

RealVector sorted_eigenvalues(const HermitianMatrix& g, double tol)
{
    const double scale = std::max(g.frobenius_norm(), std::numeric_limits<double>::min());
    RealVector ev = reference_cyclic_jacobi(g, tol * scale).eigenvalues;
    std::sort(ev.data(), ev.data() + ev.size());
    return ev;
}

double eigen_gap_delta(const RealVector& eigenvalues, double merge_tol)
{
    std::vector<double> ev(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
    std::sort(ev.begin(), ev.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < ev.size(); ++i) {
        const double d = ev[i] - ev[i - 1];
        if (d > merge_tol)
            gap = std::min(gap, d);
    }
    return gap / 3.0;
}

} // namespace blindnull::linalg
