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

#ifndef BLINDNULL_LINALG_HPP
#define BLINDNULL_LINALG_HPP

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace blindnull::linalg {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// Dense square Hermitian matrix. The constructor rejects non-finite entries and
// asymmetry beyond a relative tolerance, then stores the exactly Hermitian
// part (upper triangle mirrored, real diagonal).
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(ComplexMatrix entries, double symmetry_tol = 1e-12);

    static HermitianMatrix identity(int dim);
    // G = H^* H.
    static HermitianMatrix gram(const ComplexMatrix& h);
    // W^* G W, for W with G.dim() rows.
    static HermitianMatrix congruence(const HermitianMatrix& g, const ComplexMatrix& w);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    Complex operator()(int p, int q) const { return m_(p, q); }
    double frobenius_norm() const { return m_.norm(); }

private:
    ComplexMatrix m_;
};

// One two-plane rotation R_{l,m}(theta, phi). Indices are zero based and l < m.
struct RotationParams {
    int l = 0;
    int m = 1;
    double theta = 0.0;
    double phi = 0.0;
};

// Full n x n rotation:
//   [R]_{pp} = cos(theta)              p in {l, m}
//   [R]_{lm} = e^{-i phi} sin(theta)
//   [R]_{ml} = -e^{i phi} sin(theta)
//   [R]_{pp} = 1                       p not in {l, m}
ComplexMatrix build_rotation(const RotationParams& p, int n);

// Column l of R_{l,m}(theta, phi): cos(theta) e_l - e^{i phi} sin(theta) e_m.
ComplexVector rotation_column(const RotationParams& p, int n);

// W * r_{l,m}(theta, phi) without forming r: the probe direction used when the
// current precoder is W.
ComplexVector rotated_column(const ComplexMatrix& w, int l, int m, double theta, double phi);

// In-place W <- W R_{l,m}(theta, phi); touches columns l and m only.
void apply_rotation(ComplexMatrix& w, const RotationParams& p);

// R^* A R, the congruence induced by W <- W R on A = W^* G W. Only rows and
// columns l, m change; the result is re-mirrored from its upper triangle.
HermitianMatrix rotate(const HermitianMatrix& a, const RotationParams& p);

// x^* A x. Throws std::domain_error if the imaginary residue exceeds
// 1e-12 * ||A||_F * ||x||^2.
double quadratic_form(const HermitianMatrix& a, const ComplexVector& x);

// Rayleigh quotient of each column of W.
RealVector column_quadratic_forms(const HermitianMatrix& g, const ComplexMatrix& w);

// Maps theta into (-pi/4, pi/4] by adding a multiple of pi/2.
double fold_quarter(double theta);

// Wraps an angle into (-pi, pi].
double wrap_pi(double angle);

// Distance between two angles modulo `period`.
double periodic_distance(double a, double b, double period);

// The (theta, phi) that annihilates entry (l, m) of rotate(A, .), with
// theta in (-pi/4, pi/4]. theta = phi = 0 when a_{lm} = 0.
RotationParams closed_form_rotation(const HermitianMatrix& a, int l, int m);

// sqrt(sum_{l<m} |a_{lm}|^2).
double off_diagonal_norm(const HermitianMatrix& a);

// Row-cyclic pivot order: (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
std::vector<std::pair<int, int>> cyclic_pivots(int n);

enum class PivotRule { Cyclic, Classic };

struct JacobiResult {
    RealVector eigenvalues;     // diagonal of the final iterate, unsorted
    ComplexMatrix eigenvectors; // G = V diag(eigenvalues) V^*
    int sweeps = 0;
    std::vector<double> off_norms; // before the first sweep, then after each
};

// Non-blind cyclic Jacobi using closed_form_rotation. Throws
// std::runtime_error if off_diagonal_norm is still >= tol after max_sweeps.
JacobiResult reference_cyclic_jacobi(const HermitianMatrix& g, double tol,
                                     int max_sweeps = 30,
                                     PivotRule rule = PivotRule::Cyclic);

// Eigenvalues in ascending order, via reference_cyclic_jacobi run to
// tol * ||G||_F.
RealVector sorted_eigenvalues(const HermitianMatrix& g, double tol = 1e-13);

// One third of the smallest gap between distinct eigenvalues. Eigenvalues
// closer than `merge_tol` count as equal. Returns +inf when all coincide.
double eigen_gap_delta(const RealVector& eigenvalues, double merge_tol = 1e-9);

} // namespace blindnull::linalg

#endif // BLINDNULL_LINALG_HPP
