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

// B-linear algebra inside F: coordinates, solves, trace kernels, dual bases.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rscoop/field.hpp"

namespace rscoop {

using Coordinates = std::vector<SubElement>;
using BMatrix = std::vector<std::vector<SubElement>>;

/// Ordered, B-linearly independent list of elements of F.
class BBasis {
public:
    BBasis() = default;
    /// Throws AlgebraError if the elements are dependent over B.
    BBasis(const TowerField& field, std::vector<FieldElement> elements);

    const std::vector<FieldElement>& elements() const { return elements_; }
    std::size_t rank() const { return elements_.size(); }
    FieldElement operator[](std::size_t i) const { return elements_[i]; }

private:
    std::vector<FieldElement> elements_;
};

/// Subspace of F over B, carried by its canonical basis.
class BSubspace {
public:
    BSubspace() = default;
    explicit BSubspace(BBasis basis) : basis_(std::move(basis)) {}

    const BBasis& basis() const { return basis_; }
    std::size_t dim() const { return basis_.rank(); }

    bool contains(const TowerField& field, FieldElement x) const;
    /// All |B|^dim elements, sorted in enumeration order.
    std::vector<FieldElement> elements(const TowerField& field) const;

private:
    BBasis basis_;
};

/**
 * Incremental row echelon form over B.
 *
 * Vectors are coordinate rows over B. Pivot selection is the first nonzero
 * column, so insertion order alone determines the result.
 */
class Echelon {
public:
    explicit Echelon(const TowerField& field, std::size_t width);

    /// Adds a row; returns true if the rank increased.
    bool insert(std::vector<SubElement> row);
    bool in_span(std::vector<SubElement> row) const;
    std::size_t rank() const { return rows_.size(); }

private:
    std::vector<SubElement> reduce(std::vector<SubElement> row) const;

    const TowerField* field_;
    std::size_t width_;
    std::vector<std::vector<SubElement>> rows_;
    std::vector<std::size_t> pivots_;
};

std::size_t rank_over_base(const TowerField& field, std::span<const FieldElement> elements);

/// Solves A x = b over B. Free variables are set to zero. Returns nullopt when
/// the system is inconsistent; throws InvalidArgument on a shape mismatch.
std::optional<std::vector<SubElement>> solve_over_base(const TowerField& field, const BMatrix& a,
                                                       const std::vector<SubElement>& b);

/// Basis of {x : A x = 0} over B, in reduced form (one free variable per vector).
std::vector<std::vector<SubElement>> nullspace_over_base(const TowerField& field,
                                                         const BMatrix& a,
                                                         std::size_t columns);

/// Unique c with sum c_i basis_i = x. Throws AlgebraError if x is outside the span.
Coordinates coords_in_basis(const TowerField& field, FieldElement x, const BBasis& basis);

FieldElement combine(const TowerField& field, std::span<const SubElement> coeffs,
                     std::span<const FieldElement> elements);

/// Greedy basis of span(generators): scan the span in enumeration order and
/// keep each element that raises the rank.
BBasis canonical_basis(const TowerField& field, std::span<const FieldElement> generators);

/// K = ker Tr, dimension t-1.
BSubspace trace_kernel(const TowerField& field);

/// K_{a,b} = {x : Tr((a-b)x) = 0} = K/(a-b).
BSubspace pair_kernel(const TowerField& field, FieldElement alpha, FieldElement beta);

/// K_{1,2,3} = {x : Tr(a1 x) = Tr(a2 x) = Tr(a3 x)} = K_{1,2} cap K_{2,3}.
BSubspace triple_kernel(const TowerField& field, FieldElement a1, FieldElement a2,
                        FieldElement a3);

BSubspace intersect(const TowerField& field, const BSubspace& lhs, const BSubspace& rhs);

/// Image sigma*S, canonicalized.
BSubspace scale_subspace(const TowerField& field, FieldElement sigma, const BSubspace& subspace);

/**
 * Appends elements to `inner` until it has `target_dim` vectors, taking the
 * first rank-raising candidate in enumeration order. With a constraint the
 * candidates are the constraint's elements.
 */
BBasis extend_basis(const TowerField& field, const BBasis& inner, std::size_t target_dim,
                    const BSubspace* constraint = nullptr);

/// {d_j} with Tr(basis_i d_j) = [i == j]. Requires rank t.
BBasis dual_basis(const TowerField& field, const BBasis& basis);

/// gamma = sum_i traces_i * dual_i, given traces_i = Tr(basis_i * gamma).
FieldElement recover_from_traces(const TowerField& field, const BBasis& basis,
                                 std::span<const SubElement> traces);

/// sigma K == K as sets, checked by comparing the element sets.
bool scaling_fixes_kernel(const TowerField& field, FieldElement sigma);

/// The independent side of that check: sigma is a nonzero element of B.
bool in_base_units(const TowerField& field, FieldElement sigma);

}  // namespace rscoop
