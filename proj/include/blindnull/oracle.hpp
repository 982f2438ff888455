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

#ifndef BLINDNULL_ORACLE_HPP
#define BLINDNULL_ORACLE_HPP

#include <cstdint>
#include <random>
#include <string>

#include "blindnull/linalg.hpp"

namespace blindnull::oracle {

using linalg::ComplexVector;
using linalg::HermitianMatrix;

enum class Direction { Increasing, Decreasing, Unknown };

std::string to_string(Direction d);

// Everything the blind side may observe. One probe is one transmission cycle.
// Within a phase the returned values are a strictly monotone function of
// x^* G x (increasing or decreasing per direction()).
class QueryOracle {
public:
    virtual ~QueryOracle() = default;

    // Throws std::logic_error before the first advance_phase(),
    // std::invalid_argument on a length mismatch or a probe above the power cap.
    double probe(const ComplexVector& x);
    void advance_phase();

    long long cycles_used() const noexcept { return cycles_; }
    int phase() const noexcept { return phase_; }
    Direction direction() const noexcept { return direction_; }
    double power_cap() const noexcept { return power_cap_; }
    void set_power_cap(double cap);

    virtual int dim() const = 0;

    // True if the current phase broke the monotone-measurement assumption
    // (a simulator hitting a power clamp, say). Ideal oracles never do.
    virtual bool phase_warning() const { return false; }

protected:
    explicit QueryOracle(Direction direction) : direction_(direction) {}
    void set_direction(Direction d) noexcept { direction_ = d; }

    virtual double measure(const ComplexVector& x) = 0;
    virtual void on_advance_phase() {}

private:
    long long cycles_ = 0;
    int phase_ = 0;
    double power_cap_ = 1.0;
    Direction direction_;
};

// Raises the power cap for the lifetime of the guard.
class PowerCapGuard {
public:
    PowerCapGuard(QueryOracle& o, double cap) : o_(o), saved_(o.power_cap()) { o_.set_power_cap(cap); }
    ~PowerCapGuard() { o_.set_power_cap(saved_); }
    PowerCapGuard(const PowerCapGuard&) = delete;
    PowerCapGuard& operator=(const PowerCapGuard&) = delete;

private:
    QueryOracle& o_;
    double saved_;
};

enum class MapFamily {
    Identity,
    Affine,       // a s + b, a > 0
    Exp,
    Log1p,
    CubicPlusLinear, // s^3 + s
    RandomAffine, // fresh (a, b) every phase
    NegatedAffine // -a s + b, the decreasing case
};

std::string to_string(MapFamily f);
MapFamily map_family_from_string(const std::string& s);

struct MonotoneMap {
    MapFamily family = MapFamily::Identity;
    double a = 1.0;
    double b = 0.0;
    double operator()(double s) const;
};

struct IdealOracleOptions {
    MapFamily family = MapFamily::Identity;
    double affine_a = 7.0;
    double affine_b = 1.0;
    std::uint64_t seed = 0; // RandomAffine only
};

// Noise-free oracle q = f_k(x^* G x).
class IdealOracle final : public QueryOracle {
public:
    explicit IdealOracle(HermitianMatrix g, IdealOracleOptions opts = {});

    int dim() const override { return g_.dim(); }
    const MonotoneMap& current_map() const noexcept { return map_; }

protected:
    double measure(const ComplexVector& x) override;
    void on_advance_phase() override;

private:
    HermitianMatrix g_;
    IdealOracleOptions opts_;
    MonotoneMap map_;
    std::mt19937_64 rng_;
};

// v in N(G) iff S(G, v) = S(G, 2v): probes v and 2v in the current phase with
// the cap raised to 2 ||v||. Costs 2 cycles.
bool null_membership_test(QueryOracle& oracle, const ComplexVector& v, double tol = 1e-8);

// Optional heuristic: probes the zero vector and a full-power unit vector.
// Only meaningful when e_1 is not a null direction. Costs 2 cycles.
Direction detect_direction(QueryOracle& oracle);

} // namespace blindnull::oracle

#endif // BLINDNULL_ORACLE_HPP
