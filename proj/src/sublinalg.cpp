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

#include "rscoop/sublinalg.hpp"

#include <algorithm>
#include <string>

#include "rscoop/errors.hpp"

namespace rscoop {

namespace {

bool is_zero(const std::vector<SubElement>& row)
{
    return std::all_of(row.begin(), row.end(), [](SubElement c) { return c.value == 0; });
}

// Elements of span(independent) in enumeration order.
std::vector<FieldElement> span_elements(const TowerField& field,
                                        std::span<const FieldElement> independent)
{
    std::vector<FieldElement> span{field.zero()};
    for (FieldElement g : independent) {
        std::vector<FieldElement> next;
        next.reserve(span.size() * field.base_size());
        for (FieldElement v : span) {
            for (std::uint32_t c = 0; c < field.base_size(); ++c) {
                next.push_back(field.add(v, field.scale({c}, g)));
            }
        }
        span = std::move(next);
    }
    std::sort(span.begin(), span.end());
    return span;
}

struct Reduced {
    BMatrix rows;
    std::vector<std::size_t> pivot_columns;
};

// Reduced row echelon form; pivot = first row at or below the current one with
// a nonzero entry in the column.
Reduced rref(const TowerField& field, BMatrix m, std::size_t columns)
{
    Reduced out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < columns && row < m.size(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.size() && m[pivot][col].value == 0) {
            ++pivot;
        }
        if (pivot == m.size()) {
            continue;
        }
        std::swap(m[row], m[pivot]);
        const SubElement scale = field.sub_inv(m[row][col]);
        for (auto& c : m[row]) {
            c = field.sub_mul(c, scale);
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].value == 0) {
                continue;
            }
            const SubElement factor = m[r][col];
            for (std::size_t c = 0; c < m[r].size(); ++c) {
                m[r][c] = field.sub_sub(m[r][c], field.sub_mul(factor, m[row][c]));
            }
        }
        out.pivot_columns.push_back(col);
        ++row;
    }
    out.rows = std::move(m);
    return out;
}

}  // namespace

BBasis::BBasis(const TowerField& field, std::vector<FieldElement> elements)
    : elements_(std::move(elements))
{
    if (elements_.size() > field.degree()) {
        throw AlgebraError("basis has more than t elements");
    }
    Echelon echelon(field, field.degree());
    for (FieldElement x : elements_) {
        if (!echelon.insert(field.coordinates(x))) {
            throw AlgebraError("basis elements are dependent over B (at " + field.format(x) + ")");
        }
    }
}

bool BSubspace::contains(const TowerField& field, FieldElement x) const
{
    Echelon echelon(field, field.degree());
    for (FieldElement b : basis_.elements()) {
        echelon.insert(field.coordinates(b));
    }
    return echelon.in_span(field.coordinates(x));
}

std::vector<FieldElement> BSubspace::elements(const TowerField& field) const
{
    return span_elements(field, basis_.elements());
}

Echelon::Echelon(const TowerField& field, std::size_t width) : field_(&field), width_(width) {}

std::vector<SubElement> Echelon::reduce(std::vector<SubElement> row) const
{
    if (row.size() != width_) {
        throw InvalidArgument("row width mismatch in echelon form");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const SubElement factor = row[pivots_[i]];
        if (factor.value == 0) {
            continue;
        }
        for (std::size_t c = 0; c < width_; ++c) {
            row[c] = field_->sub_sub(row[c], field_->sub_mul(factor, rows_[i][c]));
        }
    }
    return row;
}

bool Echelon::insert(std::vector<SubElement> row)
{
    row = reduce(std::move(row));
    const auto it =
        std::find_if(row.begin(), row.end(), [](SubElement c) { return c.value != 0; });
    if (it == row.end()) {
        return false;
    }
    const SubElement scale = field_->sub_inv(*it);
    for (auto& c : row) {
        c = field_->sub_mul(c, scale);
    }
    pivots_.push_back(static_cast<std::size_t>(it - row.begin()));
    rows_.push_back(std::move(row));
    return true;
}

bool Echelon::in_span(std::vector<SubElement> row) const { return is_zero(reduce(std::move(row))); }

std::size_t rank_over_base(const TowerField& field, std::span<const FieldElement> elements)
{
    Echelon echelon(field, field.degree());
    for (FieldElement x : elements) {
        echelon.insert(field.coordinates(x));
    }
    return echelon.rank();
}

std::optional<std::vector<SubElement>> solve_over_base(const TowerField& field, const BMatrix& a,
                                                       const std::vector<SubElement>& b)
{
    if (a.size() != b.size()) {
        throw InvalidArgument("solve: " + std::to_string(a.size()) + " rows but rhs has " +
                              std::to_string(b.size()) + " entries");
    }
    if (a.empty()) {
        return std::vector<SubElement>{};
    }
    const std::size_t columns = a.front().size();
    BMatrix augmented = a;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r].size() != columns) {
            throw InvalidArgument("solve: ragged matrix");
        }
        augmented[r].push_back(b[r]);
    }
    const Reduced reduced = rref(field, std::move(augmented), columns);
    for (const auto& row : reduced.rows) {
        const bool lhs_zero = std::all_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(columns),
                                          [](SubElement c) { return c.value == 0; });
        if (lhs_zero && row[columns].value != 0) {
            return std::nullopt;
        }
    }
    std::vector<SubElement> x(columns);
    for (std::size_t i = 0; i < reduced.pivot_columns.size(); ++i) {
        x[reduced.pivot_columns[i]] = reduced.rows[i][columns];
    }
    return x;
}

std::vector<std::vector<SubElement>> nullspace_over_base(const TowerField& field,
                                                         const BMatrix& a, std::size_t columns)
{
    const Reduced reduced = rref(field, a, columns);
    std::vector<bool> is_pivot(columns, false);
    for (std::size_t c : reduced.pivot_columns) {
        is_pivot[c] = true;
    }
    std::vector<std::vector<SubElement>> basis;
    for (std::size_t free = 0; free < columns; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        std::vector<SubElement> v(columns);
        v[free] = {1};
        for (std::size_t i = 0; i < reduced.pivot_columns.size(); ++i) {
            v[reduced.pivot_columns[i]] = field.sub_neg(reduced.rows[i][free]);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

Coordinates coords_in_basis(const TowerField& field, FieldElement x, const BBasis& basis)
{
    const std::size_t t = field.degree();
    BMatrix a(t, std::vector<SubElement>(basis.rank()));
    for (std::size_t j = 0; j < basis.rank(); ++j) {
        const auto column = field.coordinates(basis[j]);
        for (std::size_t i = 0; i < t; ++i) {
            a[i][j] = column[i];
        }
    }
    auto solution = solve_over_base(field, a, field.coordinates(x));
    if (!solution) {
        throw AlgebraError("element " + field.format(x) + " is outside the span of the basis");
    }
    return *solution;
}

FieldElement combine(const TowerField& field, std::span<const SubElement> coeffs,
                     std::span<const FieldElement> elements)
{
    if (coeffs.size() != elements.size()) {
        throw InvalidArgument("combine: coefficient count mismatch");
    }
    FieldElement acc = field.zero();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        acc = field.add(acc, field.scale(coeffs[i], elements[i]));
    }
    return acc;
}

BBasis canonical_basis(const TowerField& field, std::span<const FieldElement> generators)
{
    std::vector<FieldElement> independent;
    {
        Echelon echelon(field, field.degree());
        for (FieldElement g : generators) {
            if (echelon.insert(field.coordinates(g))) {
                independent.push_back(g);
            }
        }
    }
    std::vector<FieldElement> picked;
    Echelon echelon(field, field.degree());
    for (FieldElement x : span_elements(field, independent)) {
        if (picked.size() == independent.size()) {
            break;
        }
        if (echelon.insert(field.coordinates(x))) {
            picked.push_back(x);
        }
    }
    return BBasis(field, std::move(picked));
}

namespace {

template <typename Predicate>
BSubspace scan_kernel(const TowerField& field, std::size_t dim, Predicate in_kernel)
{
    std::vector<FieldElement> picked;
    Echelon echelon(field, field.degree());
    for (std::uint32_t i = 1; i < field.size() && picked.size() < dim; ++i) {
        const FieldElement x = field.element(i);
        if (in_kernel(x) && echelon.insert(field.coordinates(x))) {
            picked.push_back(x);
        }
    }
    if (picked.size() != dim) {
        throw AlgebraError("trace kernel has dimension " + std::to_string(picked.size()) +
                           ", expected " + std::to_string(dim));
    }
    return BSubspace(BBasis(field, std::move(picked)));
}

}  // namespace

BSubspace trace_kernel(const TowerField& field)
{
    return scan_kernel(field, field.degree() - 1,
                       [&](FieldElement x) { return field.trace(x).value == 0; });
}

BSubspace pair_kernel(const TowerField& field, FieldElement alpha, FieldElement beta)
{
    if (alpha == beta) {
        throw InvalidArgument("pair kernel needs distinct points");
    }
    const FieldElement diff = field.sub(alpha, beta);
    return scan_kernel(field, field.degree() - 1,
                       [&](FieldElement x) { return field.trace(field.mul(diff, x)).value == 0; });
}

BSubspace triple_kernel(const TowerField& field, FieldElement a1, FieldElement a2, FieldElement a3)
{
    if (a1 == a2 || a2 == a3 || a1 == a3) {
        throw InvalidArgument("triple kernel needs pairwise distinct points");
    }
    BSubspace result = intersect(field, pair_kernel(field, a1, a2), pair_kernel(field, a2, a3));
    const std::size_t t = field.degree();
    if (result.dim() + 1 != t && result.dim() + 2 != t) {
        throw AlgebraError("triple kernel dimension " + std::to_string(result.dim()) +
                           " outside [t-2, t-1]");
    }
    return result;
}

BSubspace intersect(const TowerField& field, const BSubspace& lhs, const BSubspace& rhs)
{
    const std::size_t r1 = lhs.dim();
    const std::size_t r2 = rhs.dim();
    if (r1 == 0 || r2 == 0) {
        return {};
    }
    const std::size_t t = field.degree();
    // Columns: lhs_i and -rhs_j; kernel vectors (a, b) give sum a_i lhs_i in both.
    BMatrix m(t, std::vector<SubElement>(r1 + r2));
    for (std::size_t j = 0; j < r1; ++j) {
        const auto column = field.coordinates(lhs.basis()[j]);
        for (std::size_t i = 0; i < t; ++i) {
            m[i][j] = column[i];
        }
    }
    for (std::size_t j = 0; j < r2; ++j) {
        const auto column = field.coordinates(field.neg(rhs.basis()[j]));
        for (std::size_t i = 0; i < t; ++i) {
            m[i][r1 + j] = column[i];
        }
    }
    std::vector<FieldElement> generators;
    for (const auto& v : nullspace_over_base(field, m, r1 + r2)) {
        generators.push_back(combine(field, std::span(v).first(r1), lhs.basis().elements()));
    }
    return BSubspace(canonical_basis(field, generators));
}

BSubspace scale_subspace(const TowerField& field, FieldElement sigma, const BSubspace& subspace)
{
    std::vector<FieldElement> image;
    for (FieldElement x : subspace.basis().elements()) {
        image.push_back(field.mul(sigma, x));
    }
    return BSubspace(canonical_basis(field, image));
}

BBasis extend_basis(const TowerField& field, const BBasis& inner, std::size_t target_dim,
                    const BSubspace* constraint)
{
    if (target_dim > field.degree()) {
        throw InvalidArgument("cannot extend beyond dimension t");
    }
    if (constraint != nullptr) {
        if (target_dim > constraint->dim()) {
            throw InvalidArgument("target dimension exceeds the constraint subspace");
        }
        for (FieldElement x : inner.elements()) {
            if (!constraint->contains(field, x)) {
                throw InvalidArgument("inner basis is not inside the constraint subspace");
            }
        }
    }
    std::vector<FieldElement> result = inner.elements();
    if (result.size() >= target_dim) {
        return inner;
    }
    Echelon echelon(field, field.degree());
    for (FieldElement x : result) {
        echelon.insert(field.coordinates(x));
    }
    auto consider = [&](FieldElement x) {
        if (result.size() < target_dim && echelon.insert(field.coordinates(x))) {
            result.push_back(x);
        }
    };
    if (constraint != nullptr) {
        for (FieldElement x : constraint->elements(field)) {
            consider(x);
        }
    } else {
        for (std::uint32_t i = 0; i < field.size() && result.size() < target_dim; ++i) {
            consider(field.element(i));
        }
    }
    if (result.size() != target_dim) {
        throw AlgebraError("basis extension to dimension " + std::to_string(target_dim) +
                           " is impossible");
    }
    return BBasis(field, std::move(result));
}

BBasis dual_basis(const TowerField& field, const BBasis& basis)
{
    const std::size_t t = field.degree();
    if (basis.rank() != t) {
        throw InvalidArgument("dual basis needs a full basis of rank t");
    }
    // Gram system against the power basis: gram[i][k] = Tr(basis_i * x^k).
    std::vector<FieldElement> power(t);
    std::uint32_t weight = 1;
    for (std::size_t k = 0; k < t; ++k) {
        power[k] = field.element(weight);
        weight *= field.base_size();
    }
    BMatrix gram(t, std::vector<SubElement>(t));
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t k = 0; k < t; ++k) {
            gram[i][k] = field.trace(field.mul(basis[i], power[k]));
        }
    }
    std::vector<FieldElement> dual;
    for (std::size_t j = 0; j < t; ++j) {
        std::vector<SubElement> rhs(t);
        rhs[j] = {1};
        auto c = solve_over_base(field, gram, rhs);
        if (!c) {
            throw AlgebraError("singular trace Gram matrix");
        }
        dual.push_back(combine(field, *c, power));
    }
    return BBasis(field, std::move(dual));
}

FieldElement recover_from_traces(const TowerField& field, const BBasis& basis,
                                 std::span<const SubElement> traces)
{
    if (basis.rank() != field.degree()) {
        throw InvalidArgument("recovery needs a basis of rank t, got " +
                              std::to_string(basis.rank()));
    }
    if (traces.size() != basis.rank()) {
        throw InvalidArgument("recovery needs exactly t traces");
    }
    const BBasis dual = dual_basis(field, basis);
    return combine(field, traces, dual.elements());
}

bool scaling_fixes_kernel(const TowerField& field, FieldElement sigma)
{
    const BSubspace kernel = trace_kernel(field);
    const auto elements = kernel.elements(field);
    std::vector<FieldElement> scaled;
    scaled.reserve(elements.size());
    for (FieldElement x : elements) {
        scaled.push_back(field.mul(sigma, x));
    }
    std::sort(scaled.begin(), scaled.end());
    scaled.erase(std::unique(scaled.begin(), scaled.end()), scaled.end());
    return scaled == elements;
}

bool in_base_units(const TowerField& field, FieldElement sigma)
{
    return sigma.value != 0 && field.in_base(sigma);
}

}  // namespace rscoop
