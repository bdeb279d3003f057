/*
 * Copyright 2026 The rscoop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rscoop/field.hpp"

namespace rscoop {

/// Polynomial over F, constant term first.
using Polynomial = std::vector<FieldElement>;

struct Message {
    std::vector<FieldElement> coeffs;
};

struct Codeword {
    std::vector<FieldElement> symbols;
};

/**
 * [n, k] Reed-Solomon code RS_A over F with its GRS dual multipliers
 * lambda_a = prod_{b != a} (a - b)^{-1}.
 */
class RSCode {
public:
    /// Throws InvalidArgument on duplicate points or k outside [1, n).
    RSCode(FieldPtr field, std::vector<FieldElement> points, std::size_t k);

    /// Code on the first n elements of the canonical enumeration.
    static RSCode prefix(FieldPtr field, std::size_t n, std::size_t k);

    const TowerField& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }
    const std::vector<FieldElement>& points() const { return points_; }
    FieldElement point(std::size_t i) const { return points_[i]; }
    const std::vector<FieldElement>& multipliers() const { return lambdas_; }
    FieldElement multiplier(std::size_t i) const { return lambdas_[i]; }
    std::size_t length() const { return points_.size(); }
    std::size_t dimension() const { return k_; }

    /// n - k >= |B|^(t-1); every trace repair scheme here needs it.
    bool repair_feasible() const { return feasible_; }
    std::size_t required_redundancy() const { return required_redundancy_; }

    Codeword encode(const Message& msg) const;

    /// Interpolates the unique degree < k polynomial through k symbols.
    Message lagrange_decode(std::span<const std::size_t> positions,
                            std::span<const FieldElement> values) const;

private:
    FieldPtr field_;
    std::vector<FieldElement> points_;
    std::size_t k_;
    std::vector<FieldElement> lambdas_;
    std::size_t required_redundancy_;
    bool feasible_;
};

FieldElement evaluate(const TowerField& field, const Polynomial& poly, FieldElement x);

/// Lagrange interpolation through (xs[i], ys[i]); returns coefficients.
Polynomial interpolate(const TowerField& field, std::span<const FieldElement> xs,
                       std::span<const FieldElement> ys);

/// Tr(u (x - center)) / (x - center), and u at x == center.
FieldElement trace_quotient_eval(const TowerField& field, FieldElement u, FieldElement center,
                                 FieldElement x);

struct OrthogonalityCheck {
    FieldElement sum;
    bool orthogonal;
};

/// sum_a lambda_a g(a) f(a); zero for deg f < k, deg g < n - k.
/// Throws InvalidArgument when either degree bound is violated.
OrthogonalityCheck check_orthogonality(const RSCode& code, const Message& f,
                                       const Polynomial& g);

}  // namespace rscoop
