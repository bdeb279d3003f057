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

#include "rscoop/rscode.hpp"

#include <algorithm>
#include <string>

#include "rscoop/errors.hpp"

namespace rscoop {

RSCode::RSCode(FieldPtr field, std::vector<FieldElement> points, std::size_t k)
    : field_(std::move(field)), points_(std::move(points)), k_(k)
{
    const TowerField& f = *field_;
    const std::size_t n = points_.size();
    if (k_ < 1 || k_ >= n) {
        throw InvalidArgument("need 1 <= k < n, got k=" + std::to_string(k_) +
                              ", n=" + std::to_string(n));
    }
    if (n > f.size()) {
        throw InvalidArgument("code length exceeds field size");
    }
    auto sorted = points_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("evaluation points must be distinct");
    }
    for (FieldElement x : points_) {
        if (x.value >= f.size()) {
            throw InvalidArgument("evaluation point outside the field");
        }
    }

    lambdas_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        FieldElement prod = f.one();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                prod = f.mul(prod, f.sub(points_[i], points_[j]));
            }
        }
        lambdas_.push_back(f.inv(prod));
    }

    required_redundancy_ = 1;
    for (std::uint32_t i = 0; i + 1 < f.degree(); ++i) {
        required_redundancy_ *= f.base_size();
    }
    feasible_ = n - k_ >= required_redundancy_;
}

RSCode RSCode::prefix(FieldPtr field, std::size_t n, std::size_t k)
{
    if (n > field->size()) {
        throw InvalidArgument("n=" + std::to_string(n) + " exceeds the field size " +
                              std::to_string(field->size()));
    }
    std::vector<FieldElement> points;
    for (std::size_t i = 0; i < n; ++i) {
        points.push_back(field->element(static_cast<std::uint32_t>(i)));
    }
    return RSCode(std::move(field), std::move(points), k);
}

FieldElement evaluate(const TowerField& field, const Polynomial& poly, FieldElement x)
{
    FieldElement acc = field.zero();
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        acc = field.add(field.mul(acc, x), *it);
    }
    return acc;
}

Codeword RSCode::encode(const Message& msg) const
{
    if (msg.coeffs.size() != k_) {
        throw InvalidArgument("message has " + std::to_string(msg.coeffs.size()) +
                              " symbols, expected " + std::to_string(k_));
    }
    Codeword word;
    word.symbols.reserve(points_.size());
    for (FieldElement x : points_) {
        word.symbols.push_back(evaluate(*field_, msg.coeffs, x));
    }
    return word;
}

Polynomial interpolate(const TowerField& field, std::span<const FieldElement> xs,
                       std::span<const FieldElement> ys)
{
    const std::size_t m = xs.size();
    if (ys.size() != m) {
        throw InvalidArgument("interpolate: point/value count mismatch");
    }
    // master(x) = prod (x - xs_j), then divide out one root per term.
    Polynomial master{field.one()};
    for (FieldElement root : xs) {
        Polynomial next(master.size() + 1, field.zero());
        for (std::size_t i = 0; i < master.size(); ++i) {
            next[i + 1] = field.add(next[i + 1], master[i]);
            next[i] = field.sub(next[i], field.mul(root, master[i]));
        }
        master = std::move(next);
    }
    Polynomial result(m, field.zero());
    for (std::size_t j = 0; j < m; ++j) {
        // Synthetic division of master by (x - xs_j).
        Polynomial quotient(m, field.zero());
        FieldElement carry = field.zero();
        for (std::size_t i = m + 1; i-- > 1;) {
            carry = field.add(master[i], field.mul(carry, xs[j]));
            quotient[i - 1] = carry;
        }
        FieldElement denom = field.one();
        for (std::size_t i = 0; i < m; ++i) {
            if (i != j) {
                const FieldElement diff = field.sub(xs[j], xs[i]);
                if (diff.value == 0) {
                    throw InvalidArgument("interpolate: repeated abscissa");
                }
                denom = field.mul(denom, diff);
            }
        }
        const FieldElement weight = field.div(ys[j], denom);
        for (std::size_t i = 0; i < m; ++i) {
            result[i] = field.add(result[i], field.mul(weight, quotient[i]));
        }
    }
    return result;
}

Message RSCode::lagrange_decode(std::span<const std::size_t> positions,
                                std::span<const FieldElement> values) const
{
    if (positions.size() != k_ || values.size() != k_) {
        throw InvalidArgument("lagrange_decode needs exactly k positions and values");
    }
    std::vector<FieldElement> xs;
    xs.reserve(k_);
    for (std::size_t pos : positions) {
        if (pos >= points_.size()) {
            throw InvalidArgument("position out of range");
        }
        xs.push_back(points_[pos]);
    }
    auto sorted = std::vector<std::size_t>(positions.begin(), positions.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("lagrange_decode: repeated positions");
    }
    return Message{interpolate(*field_, xs, values)};
}

FieldElement trace_quotient_eval(const TowerField& field, FieldElement u, FieldElement center,
                                 FieldElement x)
{
    if (x == center) {
        return u;
    }
    const FieldElement diff = field.sub(x, center);
    return field.div(field.embed(field.trace(field.mul(u, diff))), diff);
}

OrthogonalityCheck check_orthogonality(const RSCode& code, const Message& f, const Polynomial& g)
{
    if (f.coeffs.size() > code.dimension()) {
        throw InvalidArgument("f has degree >= k");
    }
    if (g.size() > code.length() - code.dimension()) {
        throw InvalidArgument("g has degree >= n-k");
    }
    const TowerField& field = code.field();
    FieldElement sum = field.zero();
    for (std::size_t i = 0; i < code.length(); ++i) {
        const FieldElement a = code.point(i);
        sum = field.add(sum, field.mul(code.multiplier(i),
                                       field.mul(evaluate(field, g, a), evaluate(field, f.coeffs, a))));
    }
    return {sum, sum.value == 0};
}

}  // namespace rscoop
