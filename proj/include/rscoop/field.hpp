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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace rscoop {

/**
 * Element of the subfield B = GF(p^s).
 *
 * Stored as its index in the canonical enumeration: the coefficient vector
 * over GF(p) read as a base-p integer, constant term least significant.
 */
struct SubElement {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(SubElement, SubElement) = default;
};

/**
 * Element of F = GF(p^(s*t)), represented in the power basis of mF over B.
 *
 * The index is sum_i c_i * |B|^i where c_i are the B-coordinates, which is the
 * same as reading all s*t GF(p) digits as one base-p integer.
 */
struct FieldElement {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

inline constexpr std::size_t kDefaultSizeCap = std::size_t{1} << 20;

/**
 * Tower GF(p) <= B = GF(p^s) <= F = GF(p^(s*t)) with canonical moduli.
 *
 * Immutable after construction. Arithmetic runs on precomputed tables: full
 * add/mul tables for B and log/antilog tables for F.
 */
class TowerField {
public:
    /// Builds the tower, searching for the lexicographically smallest monic
    /// irreducible moduli. Throws InvalidArgument on bad parameters.
    static std::shared_ptr<const TowerField> create(std::uint32_t p, std::uint32_t s,
                                                    std::uint32_t t,
                                                    std::size_t size_cap = kDefaultSizeCap);

    /// Parses "gf(p^N)/gf(p^s)" (exponent may be written "(s*t)"; "gf(p)" means s=1).
    static std::shared_ptr<const TowerField> from_spec(std::string_view spec,
                                                       std::size_t size_cap = kDefaultSizeCap);

    std::uint32_t characteristic() const { return p_; }
    std::uint32_t base_degree() const { return s_; }
    std::uint32_t degree() const { return t_; }
    std::uint32_t base_size() const { return q_; }
    std::uint32_t size() const { return order_; }

    /// Monic modulus of B over GF(p), coefficients c_0..c_s.
    const std::vector<std::uint32_t>& base_modulus() const { return base_modulus_; }
    /// Monic modulus of F over B, coefficients c_0..c_t.
    const std::vector<SubElement>& modulus() const { return modulus_; }

    std::string spec() const;

    // B arithmetic.
    SubElement sub_add(SubElement a, SubElement b) const { return {b_add_[a.value * q_ + b.value]}; }
    SubElement sub_mul(SubElement a, SubElement b) const { return {b_mul_[a.value * q_ + b.value]}; }
    SubElement sub_neg(SubElement a) const { return {b_neg_[a.value]}; }
    SubElement sub_sub(SubElement a, SubElement b) const { return sub_add(a, sub_neg(b)); }
    SubElement sub_inv(SubElement a) const;

    // F arithmetic.
    FieldElement zero() const { return {0}; }
    FieldElement one() const { return {1}; }
    FieldElement add(FieldElement a, FieldElement b) const;
    FieldElement neg(FieldElement a) const;
    FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }
    FieldElement mul(FieldElement a, FieldElement b) const;
    FieldElement inv(FieldElement a) const;
    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }
    FieldElement pow(FieldElement a, std::uint64_t e) const;

    /// Scalar multiplication by an element of B.
    FieldElement scale(SubElement c, FieldElement x) const { return mul(embed(c), x); }

    /// B sits inside F as the elements whose upper t-1 coordinates vanish.
    FieldElement embed(SubElement b) const { return {b.value}; }
    bool in_base(FieldElement x) const { return x.value < q_; }

    /// Coordinates over B in the power basis of mF (length t).
    std::vector<SubElement> coordinates(FieldElement x) const;
    FieldElement from_coordinates(const std::vector<SubElement>& coords) const;

    /// Tr_{F/B}(x) = x + x^q + ... + x^(q^(t-1)).
    SubElement trace(FieldElement x) const { return {trace_[x.value]}; }

    /// x-th element of the canonical enumeration.
    FieldElement element(std::uint32_t index) const { return {index}; }
    std::vector<FieldElement> enumerate() const;

    /// Base-p digits, most significant first (s*t digits for F, s for B).
    std::string format(FieldElement x) const;
    std::string format(SubElement b) const;
    FieldElement parse_element(std::string_view text) const;

    TowerField(const TowerField&) = delete;
    TowerField& operator=(const TowerField&) = delete;

private:
    TowerField(std::uint32_t p, std::uint32_t s, std::uint32_t t);

    void build_base();
    void build_extension();
    FieldElement mul_by_polynomial(FieldElement a, FieldElement b) const;
    std::string format_digits(std::uint32_t value, std::uint32_t width) const;

    std::uint32_t p_;
    std::uint32_t s_;
    std::uint32_t t_;
    std::uint32_t q_;
    std::uint32_t order_;

    std::vector<std::uint32_t> base_modulus_;
    std::vector<SubElement> modulus_;

    std::vector<std::uint32_t> b_add_;
    std::vector<std::uint32_t> b_mul_;
    std::vector<std::uint32_t> b_neg_;
    std::vector<std::uint32_t> b_inv_;

    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> trace_;
};

using FieldPtr = std::shared_ptr<const TowerField>;

bool is_prime(std::uint32_t n);

}  // namespace rscoop
