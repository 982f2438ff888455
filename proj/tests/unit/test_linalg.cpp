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

#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "blindnull/linalg.hpp"
#include "fixtures.hpp"

using namespace blindnull::linalg;

namespace {

constexpr double kPi_ = 3.14159265358979323846;
const Complex kI{0.0, 1.0};

HermitianMatrix two_by_two(double a, Complex b, double c)
{
    ComplexMatrix m(2, 2);
    m << a, b, std::conj(b), c;
    return HermitianMatrix(m);
}

} // namespace

TEST(BuildRotation, ZeroAngleIsIdentity)
{
    const ComplexMatrix r = build_rotation({0, 1, 0.0, 1.234}, 2);
    EXPECT_LT((r - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(BuildRotation, QuarterTurn)
{
    const ComplexMatrix r = build_rotation({0, 1, kPi_ / 2, 0.0}, 2);
    ComplexMatrix expect(2, 2);
    expect << 0.0, 1.0, -1.0, 0.0;
    EXPECT_LT((r - expect).cwiseAbs().maxCoeff(), 1e-15);
}

// [PAPER] entry rule, (l,m) = (1,3) in one-based terms.
TEST(BuildRotation, EntryRuleThreeByThree)
{
    const ComplexMatrix r = build_rotation({0, 2, kPi_ / 4, kPi_ / 2}, 3);
    const double h = std::sqrt(2.0) / 2.0;
    EXPECT_LT(std::abs(r(0, 2) - std::exp(-kI * (kPi_ / 2)) * h), 1e-15);
    EXPECT_LT(std::abs(r(2, 0) + std::exp(kI * (kPi_ / 2)) * h), 1e-15);
    EXPECT_LT(std::abs(r(1, 1) - 1.0), 1e-15);
    EXPECT_LT(std::abs(r(0, 1)), 1e-15);
}

TEST(BuildRotation, RejectsBadIndices)
{
    EXPECT_THROW(build_rotation({1, 1, 0.1, 0.0}, 3), std::out_of_range);
    EXPECT_THROW(build_rotation({0, 3, 0.1, 0.0}, 3), std::out_of_range);
    EXPECT_THROW(build_rotation({0, 1, 0.1, 0.0}, 1), std::invalid_argument);
}

TEST(BuildRotation, UnitaryProperty)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int t = 0; t < 500; ++t) {
        const int n = 2 + t % 7;
        const int l = t % (n - 1);
        const int m = l + 1 + (t / 3) % (n - l - 1);
        const ComplexMatrix r = build_rotation({l, m, u(rng), u(rng)}, n);
        const ComplexMatrix e = r * r.adjoint() - ComplexMatrix::Identity(n, n);
        ASSERT_LT(e.cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(RotationColumn, MatchesMatrixColumn)
{
    const RotationParams p{1, 3, 0.7, -2.1};
    const ComplexMatrix r = build_rotation(p, 5);
    EXPECT_LT((rotation_column(p, 5) - r.col(1)).norm(), 1e-15);
    std::mt19937_64 rng(3);
    const ComplexMatrix w = fixtures::random_complex(5, 5, rng);
    EXPECT_LT((rotated_column(w, 1, 3, 0.7, -2.1) - w * r.col(1)).norm(), 1e-13);
    ComplexMatrix w2 = w;
    apply_rotation(w2, p);
    EXPECT_LT((w2 - w * r).norm(), 1e-13);
}

TEST(Rotate, DiagonalEqualBlockUnchanged)
{
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a.diagonal() << 2.0, 5.0, 2.0;
    const HermitianMatrix b = rotate(HermitianMatrix(a), {0, 2, 0.4, 1.1});
    EXPECT_NEAR(b(0, 0).real(), 2.0, 1e-14);
    EXPECT_NEAR(b(2, 2).real(), 2.0, 1e-14);
    EXPECT_LT(std::abs(b(0, 2)), 1e-14);
}

// [DERIVED] [[2,1],[1,2]] has eigenpairs (1, [1,-1]/sqrt2), (3, [1,1]/sqrt2).
TEST(Rotate, TwoByTwoDiagonalises)
{
    const HermitianMatrix b = rotate(two_by_two(2.0, 1.0, 2.0), {0, 1, kPi_ / 4, 0.0});
    EXPECT_NEAR(b(0, 0).real(), 1.0, 1e-14);
    EXPECT_NEAR(b(1, 1).real(), 3.0, 1e-14);
    EXPECT_LT(std::abs(b(0, 1)), 1e-14);
}

TEST(Rotate, MatchesExplicitCongruenceAndKeepsNorm)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + t % 6;
        const HermitianMatrix a(fixtures::random_hermitian(n, rng));
        const RotationParams p{0, n - 1, 0.1 * t, -0.05 * t};
        const ComplexMatrix r = build_rotation(p, n);
        const HermitianMatrix b = rotate(a, p);
        ASSERT_LT((b.matrix() - r.adjoint() * a.matrix() * r).norm(), 1e-12);
        ASSERT_NEAR(b.frobenius_norm(), a.frobenius_norm(), 1e-12);
        ASSERT_EQ((b.matrix() - b.matrix().adjoint()).norm(), 0.0);
    }
}

TEST(QuadraticForm, Examples)
{
    const ComplexVector x = (ComplexVector(2) << 1.0, kI).finished() / std::sqrt(2.0);
    EXPECT_NEAR(quadratic_form(HermitianMatrix::identity(2), x), 1.0, 1e-15);
    const ComplexVector y = ComplexVector::Constant(2, 1.0 / std::sqrt(2.0));
    EXPECT_NEAR(quadratic_form(two_by_two(2.0, 1.0, 2.0), y), 3.0, 1e-14);
    const ComplexVector e1 = (ComplexVector(2) << 0.0, 1.0).finished();
    EXPECT_EQ(quadratic_form(two_by_two(1.0, 0.0, 0.0), e1), 0.0);
    EXPECT_THROW(quadratic_form(HermitianMatrix::identity(3), y), std::invalid_argument);
}

TEST(QuadraticForm, NonNegativeOnGram)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + t % 6;
        const HermitianMatrix g(fixtures::random_psd(n, 1 + t % n, rng));
        const ComplexVector v = fixtures::random_complex(n, 1, rng);
        ASSERT_GE(quadratic_form(g, v), -1e-14 * v.squaredNorm());
    }
}

TEST(HermitianMatrixCtor, RejectsBadInput)
{
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 1.0;
    EXPECT_THROW(HermitianMatrix{m}, std::invalid_argument);
    m << 1.0, std::nan(""), std::nan(""), 1.0;
    EXPECT_THROW(HermitianMatrix{m}, std::invalid_argument);
    EXPECT_THROW(HermitianMatrix{ComplexMatrix(2, 3)}, std::invalid_argument);
}

TEST(ClosedForm, Examples)
{
    RotationParams p = closed_form_rotation(two_by_two(2.0, 1.0, 2.0), 0, 1);
    EXPECT_NEAR(p.theta, kPi_ / 4, 1e-15);
    EXPECT_NEAR(p.phi, 0.0, 1e-15);

    p = closed_form_rotation(two_by_two(4.0, 0.0, -1.0), 0, 1);
    EXPECT_EQ(p.theta, 0.0);
    EXPECT_EQ(p.phi, 0.0);

    const HermitianMatrix a = two_by_two(3.0, 1.0, 1.0);
    p = closed_form_rotation(a, 0, 1);
    EXPECT_NEAR(p.theta, -kPi_ / 8, 1e-15);
    EXPECT_NEAR(p.phi, 0.0, 1e-15);
    EXPECT_LT(std::abs(rotate(a, p)(0, 1)), 1e-12);
}

TEST(ClosedForm, AnnihilatesAndReducesOffNorm)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 1000; ++t) {
        const int n = 2 + t % 7;
        const HermitianMatrix a(fixtures::random_hermitian(n, rng));
        const int l = t % (n - 1);
        const int m = n - 1;
        const RotationParams p = closed_form_rotation(a, l, m);
        ASSERT_GT(p.theta, -kPi_ / 4);
        ASSERT_LE(p.theta, kPi_ / 4);
        const HermitianMatrix b = rotate(a, p);
        const double f = a.frobenius_norm();
        ASSERT_LE(std::abs(b(l, m)), 1e-10 * f);
        const double before = off_diagonal_norm(a), after = off_diagonal_norm(b);
        ASSERT_NEAR(after * after, before * before - std::norm(a(l, m)), 1e-10 * f * f);
    }
}

TEST(OffDiagonalNorm, Examples)
{
    EXPECT_NEAR(off_diagonal_norm(two_by_two(2.0, 1.0, 2.0)), 1.0, 1e-15);
    EXPECT_EQ(off_diagonal_norm(two_by_two(2.0, 0.0, 7.0)), 0.0);
    EXPECT_NEAR(off_diagonal_norm(two_by_two(1.0, 2.0 * kI, 1.0)), 2.0, 1e-15);
}

TEST(Angles, FoldAndWrap)
{
    EXPECT_NEAR(fold_quarter(kPi_ / 3), kPi_ / 3 - kPi_ / 2, 1e-15);
    EXPECT_NEAR(fold_quarter(-kPi_ / 3), -kPi_ / 3 + kPi_ / 2, 1e-15);
    EXPECT_NEAR(fold_quarter(-kPi_ / 4), kPi_ / 4, 1e-15);
    EXPECT_NEAR(fold_quarter(0.1), 0.1, 1e-16);
    EXPECT_NEAR(wrap_pi(3 * kPi_ / 2), -kPi_ / 2, 1e-15);
    EXPECT_NEAR(periodic_distance(kPi_ / 4, -kPi_ / 4, kPi_ / 2), 0.0, 1e-15);
}

TEST(CyclicPivots, RowOrder)
{
    const auto p = cyclic_pivots(4);
    ASSERT_EQ(p.size(), 6u);
    EXPECT_EQ(p[0], std::make_pair(0, 1));
    EXPECT_EQ(p[2], std::make_pair(0, 3));
    EXPECT_EQ(p[3], std::make_pair(1, 2));
    EXPECT_EQ(p[5], std::make_pair(2, 3));
}

TEST(ReferenceJacobi, DiagonalInput)
{
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d.diagonal() << 3.0, 1.0;
    const JacobiResult r = reference_cyclic_jacobi(HermitianMatrix(d), 1e-14);
    EXPECT_EQ(r.sweeps, 0);
    EXPECT_EQ(r.eigenvalues(0), 3.0);
    EXPECT_EQ(r.eigenvalues(1), 1.0);
    EXPECT_LT((r.eigenvectors - ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(ReferenceJacobi, TwoByTwoEigenvectors)
{
    const JacobiResult r = reference_cyclic_jacobi(two_by_two(2.0, 1.0, 2.0), 1e-14);
    EXPECT_NEAR(r.eigenvalues(0), 1.0, 1e-14);
    EXPECT_NEAR(r.eigenvalues(1), 3.0, 1e-14);
    const double s = 1.0 / std::sqrt(2.0);
    // columns match [1,-1]/sqrt2 and [1,1]/sqrt2 up to a unit phase
    EXPECT_NEAR(std::abs(r.eigenvectors.col(0).dot((ComplexVector(2) << s, -s).finished())), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(r.eigenvectors.col(1).dot((ComplexVector(2) << s, s).finished())), 1.0, 1e-14);
}

TEST(ReferenceJacobi, ReconstructsRandomPsd)
{
    std::mt19937_64 rng(2026);
    for (int t = 0; t < 50; ++t) {
        const HermitianMatrix g(fixtures::random_psd(5, 1 + t % 5, rng));
        const JacobiResult r = reference_cyclic_jacobi(g, 1e-14);
        const ComplexMatrix v = r.eigenvectors;
        const ComplexMatrix back = v * r.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
        ASSERT_LT((back - g.matrix()).norm(), 1e-10);
        ASSERT_LT((v.adjoint() * v - ComplexMatrix::Identity(5, 5)).norm(), 1e-12);
    }
}

TEST(ReferenceJacobi, ClassicPivotAgrees)
{
    std::mt19937_64 rng(8);
    const HermitianMatrix g(fixtures::random_psd(6, 6, rng));
    const RealVector a = sorted_eigenvalues(g);
    RealVector b = reference_cyclic_jacobi(g, 1e-13, 30, PivotRule::Classic).eigenvalues;
    std::sort(b.data(), b.data() + b.size());
    EXPECT_LT((a - b).norm(), 1e-12);
}

TEST(ReferenceJacobi, MatchesCharacteristicPolynomial)
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 400; ++t) {
        const int n = 2 + t % 2;
        const ComplexMatrix a = fixtures::random_hermitian(n, rng);
        const RealVector got = sorted_eigenvalues(HermitianMatrix(a));
        const auto want = fixtures::char_poly_eigenvalues(a);
        for (int i = 0; i < n; ++i)
            ASSERT_NEAR(got(i), want[static_cast<std::size_t>(i)], 1e-8);
    }
}

TEST(EigenGap, ThirdOfSmallestDistinctGap)
{
    RealVector ev(4);
    ev << 0.0, 1e-12, 0.5, 2.0;
    EXPECT_NEAR(eigen_gap_delta(ev), (0.5 - 1e-12) / 3.0, 1e-15);
    RealVector same = RealVector::Constant(3, 1.0);
    EXPECT_TRUE(std::isinf(eigen_gap_delta(same)));
}
