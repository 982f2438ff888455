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

// Shared fixtures for the unit tests. Deliberately independent of the library
// helpers so they can serve as oracles.

#ifndef BLINDNULL_TESTS_FIXTURES_HPP
#define BLINDNULL_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace fixtures {

inline Eigen::MatrixXcd random_complex(int rows, int cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = {n(rng), n(rng)};
    return m;
}

// Random PSD G = H^* H with H of size rank x n, scaled to ||G||_F = 1.
inline Eigen::MatrixXcd random_psd(int n, int rank, std::mt19937_64& rng)
{
    Eigen::MatrixXcd h = random_complex(rank, n, rng);
    Eigen::MatrixXcd g = h.adjoint() * h;
    g /= g.norm();
    return 0.5 * (g + g.adjoint());
}

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng)
{
    Eigen::MatrixXcd a = random_complex(n, n, rng);
    return 0.5 * (a + a.adjoint());
}

// Roots of the characteristic polynomial, ascending. Only n = 2 and n = 3.
inline std::vector<double> char_poly_eigenvalues(const Eigen::MatrixXcd& a)
{
    std::vector<double> out;
    if (a.rows() == 2) {
        const double p = a(0, 0).real(), q = a(1, 1).real();
        const double r = std::norm(a(0, 1));
        const double mid = 0.5 * (p + q);
        const double rad = std::sqrt(0.25 * (p - q) * (p - q) + r);
        out = {mid - rad, mid + rad};
    } else if (a.rows() == 3) {
        // x^3 + b x^2 + c x + d, real coefficients for Hermitian input
        const double b = -a.trace().real();
        double c = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                c += (a(i, i) * a(j, j) - a(i, j) * a(j, i)).real();
        const double d = -a.determinant().real();
        const double p = c - b * b / 3.0;
        const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
        const double pi = std::acos(-1.0);
        if (std::abs(p) < 1e-300) {
            const double x = std::cbrt(-q) - b / 3.0;
            out = {x, x, x};
        } else {
            const double m = 2.0 * std::sqrt(-p / 3.0);
            const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
            const double t = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k)
                out.push_back(m * std::cos(t - 2.0 * pi * k / 3.0) - b / 3.0);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fixtures

#endif
