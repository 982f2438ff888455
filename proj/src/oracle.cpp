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

#include "blindnull/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blindnull::oracle {

std::string to_string(Direction d)
{
    switch (d) {
    case Direction::Increasing: return "increasing";
    case Direction::Decreasing: return "decreasing";
    case Direction::Unknown: break;
    }
    return "unknown";
}

std::string to_string(MapFamily f)
{
    switch (f) {
    case MapFamily::Identity: return "identity";
    case MapFamily::Affine: return "affine";
    case MapFamily::Exp: return "exp";
    case MapFamily::Log1p: return "log1p";
    case MapFamily::CubicPlusLinear: return "cubic";
    case MapFamily::RandomAffine: return "random_affine";
    case MapFamily::NegatedAffine: return "negated_affine";
    }
    return "?";
}

MapFamily map_family_from_string(const std::string& s)
{
    for (auto f : {MapFamily::Identity, MapFamily::Affine, MapFamily::Exp, MapFamily::Log1p,
                   MapFamily::CubicPlusLinear, MapFamily::RandomAffine, MapFamily::NegatedAffine})
        if (to_string(f) == s)
            return f;
    throw std::invalid_argument("unknown map family: " + s);
}

double QueryOracle::probe(const ComplexVector& x)
{
    if (phase_ == 0)
        throw std::logic_error("probe before the first learning phase");
    if (x.size() != dim())
        throw std::invalid_argument("probe length " + std::to_string(x.size()) +
                                    " != " + std::to_string(dim()));
    // small slack so unit-norm rotation columns never trip the cap
    if (x.norm() > power_cap_ * (1.0 + 1e-12))
        throw std::invalid_argument("probe exceeds power cap");
    ++cycles_;
    const double q = measure(x);
    if (!std::isfinite(q))
        throw std::runtime_error("oracle produced a non-finite measurement");
    return q;
}

void QueryOracle::advance_phase()
{
    ++phase_;
    on_advance_phase();
}

void QueryOracle::set_power_cap(double cap)
{
    if (!(cap > 0.0))
        throw std::invalid_argument("power cap must be positive");
    power_cap_ = cap;
}

double MonotoneMap::operator()(double s) const
{
    switch (family) {
    case MapFamily::Identity: return s;
    case MapFamily::Affine:
    case MapFamily::RandomAffine: return a * s + b;
    case MapFamily::NegatedAffine: return -a * s + b;
    case MapFamily::Exp: return std::exp(s);
    case MapFamily::Log1p: return std::log1p(s);
    case MapFamily::CubicPlusLinear: return s * s * s + s;
    }
    return s;
}

IdealOracle::IdealOracle(HermitianMatrix g, IdealOracleOptions opts)
    : QueryOracle(opts.family == MapFamily::NegatedAffine ? Direction::Decreasing
                                                          : Direction::Increasing),
      g_(std::move(g)), opts_(opts), rng_(opts.seed)
{
    if ((opts.family == MapFamily::Affine || opts.family == MapFamily::NegatedAffine) &&
        !(opts.affine_a > 0.0))
        throw std::invalid_argument("affine slope must be positive");
    map_ = {opts.family, opts.affine_a, opts.affine_b};
}

double IdealOracle::measure(const ComplexVector& x)
{
    return map_(linalg::quadratic_form(g_, x));
}

void IdealOracle::on_advance_phase()
{
    if (opts_.family != MapFamily::RandomAffine)
        return;
    std::uniform_real_distribution<double> slope(0.5, 5.0);
    std::uniform_real_distribution<double> offset(-1.0, 1.0);
    map_.a = slope(rng_);
    map_.b = offset(rng_);
}

bool null_membership_test(QueryOracle& oracle, const ComplexVector& v, double tol)
{
    const double nv = v.norm();
    if (!(nv > 0.0))
        throw std::invalid_argument("null_membership_test needs a nonzero vector");
    if (!(tol >= 0.0))
        throw std::invalid_argument("tolerance must be non-negative");
    // both probes sit in one phase by construction: nothing advances in between
    PowerCapGuard guard(oracle, std::max(oracle.power_cap(), 2.0 * nv));
    const double q1 = oracle.probe(v);
    const double q2 = oracle.probe(2.0 * v);
    return std::abs(q1 - q2) <= tol * std::max(1.0, std::abs(q2));
}

Direction detect_direction(QueryOracle& oracle)
{
    const int n = oracle.dim();
    ComplexVector e = ComplexVector::Zero(n);
    const double q0 = oracle.probe(e);
    e(0) = oracle.power_cap();
    const double q1 = oracle.probe(e);
    if (q1 > q0)
        return Direction::Increasing;
    if (q1 < q0)
        return Direction::Decreasing;
    return Direction::Unknown;
}

} // namespace blindnull::oracle
