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

#include "rscoop/field.hpp"

#include <algorithm>
#include <charconv>
#include <regex>
#include <string>

#include "rscoop/errors.hpp"

namespace rscoop {

namespace {

struct PrimeOps {
    std::uint32_t p;

    std::uint32_t size() const { return p; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p; }
    std::uint32_t neg(std::uint32_t a) const { return (p - a) % p; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p);
    }
    std::uint32_t inv(std::uint32_t a) const
    {
        // Fermat; p is small.
        std::uint64_t result = 1;
        std::uint64_t base = a;
        for (std::uint32_t e = p - 2; e != 0; e >>= 1) {
            if (e & 1U) {
                result = result * base % p;
            }
            base = base * base % p;
        }
        return static_cast<std::uint32_t>(result);
    }
};

struct BaseOps {
    const TowerField* field;

    std::uint32_t size() const { return field->base_size(); }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        return field->sub_add({a}, {b}).value;
    }
    std::uint32_t neg(std::uint32_t a) const { return field->sub_neg({a}).value; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        return field->sub_mul({a}, {b}).value;
    }
    std::uint32_t inv(std::uint32_t a) const { return field->sub_inv({a}).value; }
};

using Poly = std::vector<std::uint32_t>;

// Remainder of a modulo the monic polynomial m (coefficients low to high).
template <typename Ops>
Poly poly_rem(Poly a, const Poly& m, const Ops& ops)
{
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        const std::uint32_t lead = a.back();
        const std::size_t shift = a.size() - 1 - dm;
        if (lead != 0) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                a[shift + i] = ops.add(a[shift + i], ops.neg(ops.mul(lead, m[i])));
            }
        }
        a.pop_back();
    }
    return a;
}

// Monic polynomial with coefficients given by the base-|ops| digits of n.
template <typename Ops>
Poly monic_from_index(std::uint64_t n, std::size_t degree, const Ops& ops)
{
    Poly poly(degree + 1, 0);
    for (std::size_t i = 0; i < degree; ++i) {
        poly[i] = static_cast<std::uint32_t>(n % ops.size());
        n /= ops.size();
    }
    poly[degree] = 1;
    return poly;
}

// Exhaustive factor test: no monic divisor of degree 1..d/2.
template <typename Ops>
bool is_irreducible(const Poly& m, const Ops& ops)
{
    const std::size_t d = m.size() - 1;
    for (std::size_t k = 1; k <= d / 2; ++k) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < k; ++i) {
            count *= ops.size();
        }
        for (std::uint64_t n = 0; n < count; ++n) {
            const Poly divisor = monic_from_index(n, k, ops);
            const Poly rem = poly_rem(m, divisor, ops);
            if (std::all_of(rem.begin(), rem.end(), [](std::uint32_t c) { return c == 0; })) {
                return false;
            }
        }
    }
    return true;
}

// Lexicographically smallest monic irreducible of the given degree, comparing
// (c_{d-1}, ..., c_0) under the canonical element order.
template <typename Ops>
Poly canonical_modulus(std::size_t degree, const Ops& ops)
{
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < degree; ++i) {
        count *= ops.size();
    }
    for (std::uint64_t n = 0; n < count; ++n) {
        Poly candidate = monic_from_index(n, degree, ops);
        if (is_irreducible(candidate, ops)) {
            return candidate;
        }
    }
    throw AlgebraError("no irreducible polynomial found");
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n)
{
    std::vector<std::uint32_t> factors;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            factors.push_back(d);
            while (n % d == 0) {
                n /= d;
            }
        }
    }
    if (n > 1) {
        factors.push_back(n);
    }
    return factors;
}

std::uint32_t parse_uint(const std::string& text)
{
    std::uint32_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidArgument("bad integer in field spec: " + text);
    }
    return value;
}

}  // namespace

bool is_prime(std::uint32_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

TowerField::TowerField(std::uint32_t p, std::uint32_t s, std::uint32_t t)
    : p_(p), s_(s), t_(t), q_(1), order_(1)
{
    for (std::uint32_t i = 0; i < s_; ++i) {
        q_ *= p_;
    }
    for (std::uint32_t i = 0; i < t_; ++i) {
        order_ *= q_;
    }
}

std::shared_ptr<const TowerField> TowerField::create(std::uint32_t p, std::uint32_t s,
                                                     std::uint32_t t, std::size_t size_cap)
{
    if (!is_prime(p)) {
        throw InvalidArgument("characteristic " + std::to_string(p) + " is not prime");
    }
    if (s < 1) {
        throw InvalidArgument("base degree s must be at least 1");
    }
    if (t < 2) {
        throw InvalidArgument("relative degree t must be at least 2 (B must be a proper subfield)");
    }
    std::uint64_t order = 1;
    for (std::uint32_t i = 0; i < s * t; ++i) {
        order *= p;
        if (order > size_cap) {
            throw InvalidArgument("field size exceeds cap of " + std::to_string(size_cap) +
                                  " elements");
        }
    }

    std::shared_ptr<TowerField> field(new TowerField(p, s, t));
    field->build_base();
    field->build_extension();
    return field;
}

void TowerField::build_base()
{
    const PrimeOps prime{p_};
    base_modulus_ = canonical_modulus(s_, prime);

    auto digits = [&](std::uint32_t x) {
        Poly d(s_, 0);
        for (std::uint32_t i = 0; i < s_; ++i) {
            d[i] = x % p_;
            x /= p_;
        }
        return d;
    };
    auto index = [&](const Poly& d) {
        std::uint32_t x = 0;
        for (std::size_t i = d.size(); i-- > 0;) {
            x = x * p_ + d[i];
        }
        return x;
    };

    b_add_.resize(std::size_t{q_} * q_);
    b_mul_.resize(std::size_t{q_} * q_);
    b_neg_.resize(q_);
    b_inv_.assign(q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a) {
        const Poly da = digits(a);
        Poly neg(s_);
        for (std::uint32_t i = 0; i < s_; ++i) {
            neg[i] = prime.neg(da[i]);
        }
        b_neg_[a] = index(neg);
        for (std::uint32_t b = 0; b < q_; ++b) {
            const Poly db = digits(b);
            Poly sum(s_);
            for (std::uint32_t i = 0; i < s_; ++i) {
                sum[i] = prime.add(da[i], db[i]);
            }
            b_add_[std::size_t{a} * q_ + b] = index(sum);

            Poly prod(2 * s_ - 1, 0);
            for (std::uint32_t i = 0; i < s_; ++i) {
                for (std::uint32_t j = 0; j < s_; ++j) {
                    prod[i + j] = prime.add(prod[i + j], prime.mul(da[i], db[j]));
                }
            }
            const std::uint32_t product = index(poly_rem(prod, base_modulus_, prime));
            b_mul_[std::size_t{a} * q_ + b] = product;
            if (product == 1) {
                b_inv_[a] = b;
            }
        }
    }
}

FieldElement TowerField::mul_by_polynomial(FieldElement a, FieldElement b) const
{
    const BaseOps ops{this};
    const auto ca = coordinates(a);
    const auto cb = coordinates(b);
    Poly prod(2 * t_ - 1, 0);
    for (std::uint32_t i = 0; i < t_; ++i) {
        if (ca[i].value == 0) {
            continue;
        }
        for (std::uint32_t j = 0; j < t_; ++j) {
            prod[i + j] = ops.add(prod[i + j], ops.mul(ca[i].value, cb[j].value));
        }
    }
    Poly modulus(modulus_.size());
    std::transform(modulus_.begin(), modulus_.end(), modulus.begin(),
                   [](SubElement c) { return c.value; });
    const Poly rem = poly_rem(prod, modulus, ops);
    std::vector<SubElement> coords(t_);
    for (std::uint32_t i = 0; i < t_; ++i) {
        coords[i] = {i < rem.size() ? rem[i] : 0U};
    }
    return from_coordinates(coords);
}

void TowerField::build_extension()
{
    const BaseOps ops{this};
    const Poly modulus = canonical_modulus(t_, ops);
    modulus_.clear();
    for (std::uint32_t c : modulus) {
        modulus_.push_back({c});
    }

    // Primitive element: g^((n-1)/r) != 1 for every prime r | n-1.
    const std::uint32_t group = order_ - 1;
    const auto factors = prime_factors(group);
    auto slow_pow = [&](FieldElement g, std::uint32_t e) {
        FieldElement result = one();
        FieldElement base = g;
        for (; e != 0; e >>= 1) {
            if (e & 1U) {
                result = mul_by_polynomial(result, base);
            }
            base = mul_by_polynomial(base, base);
        }
        return result;
    };
    FieldElement generator{0};
    for (std::uint32_t candidate = 1; candidate < order_; ++candidate) {
        const FieldElement g{candidate};
        const bool primitive = std::all_of(factors.begin(), factors.end(), [&](std::uint32_t r) {
            return slow_pow(g, group / r) != one();
        });
        if (primitive) {
            generator = g;
            break;
        }
    }
    if (generator.value == 0) {
        throw AlgebraError("no primitive element found; modulus is not irreducible");
    }

    exp_.resize(group);
    log_.assign(order_, 0);
    FieldElement x = one();
    for (std::uint32_t i = 0; i < group; ++i) {
        exp_[i] = x.value;
        log_[x.value] = i;
        x = mul_by_polynomial(x, generator);
    }
    if (x != one()) {
        throw AlgebraError("generator order mismatch");
    }

    trace_.resize(order_);
    for (std::uint32_t v = 0; v < order_; ++v) {
        FieldElement acc = zero();
        FieldElement y{v};
        for (std::uint32_t i = 0; i < t_; ++i) {
            acc = add(acc, y);
            y = pow(y, q_);
        }
        if (!in_base(acc)) {
            throw AlgebraError("trace of " + format(FieldElement{v}) + " left the subfield");
        }
        trace_[v] = acc.value;
    }
}

SubElement TowerField::sub_inv(SubElement a) const
{
    if (a.value == 0) {
        throw AlgebraError("inverse of zero in subfield");
    }
    return {b_inv_[a.value]};
}

FieldElement TowerField::add(FieldElement a, FieldElement b) const
{
    if (p_ == 2) {
        return {a.value ^ b.value};
    }
    std::uint32_t x = a.value;
    std::uint32_t y = b.value;
    std::uint32_t result = 0;
    std::uint32_t weight = 1;
    while (x != 0 || y != 0) {
        result += ((x % p_ + y % p_) % p_) * weight;
        x /= p_;
        y /= p_;
        weight *= p_;
    }
    return {result};
}

FieldElement TowerField::neg(FieldElement a) const
{
    if (p_ == 2) {
        return a;
    }
    std::uint32_t x = a.value;
    std::uint32_t result = 0;
    std::uint32_t weight = 1;
    while (x != 0) {
        result += ((p_ - x % p_) % p_) * weight;
        x /= p_;
        weight *= p_;
    }
    return {result};
}

FieldElement TowerField::mul(FieldElement a, FieldElement b) const
{
    if (a.value == 0 || b.value == 0) {
        return zero();
    }
    std::uint32_t e = log_[a.value] + log_[b.value];
    const std::uint32_t group = order_ - 1;
    if (e >= group) {
        e -= group;
    }
    return {exp_[e]};
}

FieldElement TowerField::inv(FieldElement a) const
{
    if (a.value == 0) {
        throw AlgebraError("inverse of zero");
    }
    const std::uint32_t group = order_ - 1;
    return {exp_[(group - log_[a.value]) % group]};
}

FieldElement TowerField::pow(FieldElement a, std::uint64_t e) const
{
    if (e == 0) {
        return one();
    }
    if (a.value == 0) {
        return zero();
    }
    const std::uint64_t group = order_ - 1;
    return {exp_[(std::uint64_t{log_[a.value]} * (e % group)) % group]};
}

std::vector<SubElement> TowerField::coordinates(FieldElement x) const
{
    std::vector<SubElement> coords(t_);
    std::uint32_t v = x.value;
    for (std::uint32_t i = 0; i < t_; ++i) {
        coords[i] = {v % q_};
        v /= q_;
    }
    return coords;
}

FieldElement TowerField::from_coordinates(const std::vector<SubElement>& coords) const
{
    if (coords.size() != t_) {
        throw InvalidArgument("expected " + std::to_string(t_) + " coordinates");
    }
    std::uint32_t v = 0;
    for (std::size_t i = coords.size(); i-- > 0;) {
        v = v * q_ + coords[i].value;
    }
    return {v};
}

std::vector<FieldElement> TowerField::enumerate() const
{
    std::vector<FieldElement> all(order_);
    for (std::uint32_t i = 0; i < order_; ++i) {
        all[i] = {i};
    }
    return all;
}

std::string TowerField::spec() const
{
    std::string out = "gf(" + std::to_string(p_) + "^" + std::to_string(s_ * t_) + ")/gf(" +
                      std::to_string(p_);
    if (s_ > 1) {
        out += "^" + std::to_string(s_);
    }
    return out + ")";
}

std::shared_ptr<const TowerField> TowerField::from_spec(std::string_view spec,
                                                        std::size_t size_cap)
{
    static const std::regex pattern(
        R"(\s*gf\((\d+)(?:\^(?:(\d+)|\((\d+)\*(\d+)\)))?\)\s*/\s*gf\((\d+)(?:\^\(?(\d+)\)?)?\)\s*)",
        std::regex::icase);
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_match(spec.begin(), spec.end(), m, pattern)) {
        throw InvalidArgument("malformed field spec '" + std::string(spec) +
                              "', expected gf(p^N)/gf(p^s)");
    }
    const std::uint32_t p = parse_uint(m[1].str());
    std::uint32_t total = 1;
    if (m[2].matched) {
        total = parse_uint(m[2].str());
    } else if (m[3].matched) {
        total = parse_uint(m[3].str()) * parse_uint(m[4].str());
    }
    const std::uint32_t base_p = parse_uint(m[5].str());
    const std::uint32_t s = m[6].matched ? parse_uint(m[6].str()) : 1;
    if (base_p != p) {
        throw InvalidArgument("field spec mixes characteristics " + std::to_string(p) + " and " +
                              std::to_string(base_p));
    }
    if (s == 0 || total % s != 0) {
        throw InvalidArgument("base degree " + std::to_string(s) + " does not divide " +
                              std::to_string(total));
    }
    return create(p, s, total / s, size_cap);
}

std::string TowerField::format_digits(std::uint32_t value, std::uint32_t width) const
{
    std::vector<std::uint32_t> digits(width);
    for (std::uint32_t i = 0; i < width; ++i) {
        digits[width - 1 - i] = value % p_;
        value /= p_;
    }
    std::string out;
    for (std::uint32_t i = 0; i < width; ++i) {
        const std::uint32_t d = digits[i];
        if (p_ <= 36) {
            out.push_back(static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
        } else {
            if (i != 0) {
                out.push_back('.');
            }
            out += std::to_string(d);
        }
    }
    return out;
}

std::string TowerField::format(FieldElement x) const { return format_digits(x.value, s_ * t_); }

std::string TowerField::format(SubElement b) const { return format_digits(b.value, s_); }

FieldElement TowerField::parse_element(std::string_view text) const
{
    std::vector<std::uint32_t> digits;
    if (p_ <= 36) {
        for (char c : text) {
            std::uint32_t d = 0;
            if (c >= '0' && c <= '9') {
                d = static_cast<std::uint32_t>(c - '0');
            } else if (c >= 'a' && c <= 'z') {
                d = static_cast<std::uint32_t>(c - 'a' + 10);
            } else {
                throw InvalidArgument("bad digit in element '" + std::string(text) + "'");
            }
            digits.push_back(d);
        }
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t dot = std::min(text.find('.', start), text.size());
            digits.push_back(parse_uint(std::string(text.substr(start, dot - start))));
            start = dot + 1;
        }
    }
    if (digits.empty() || digits.size() > s_ * t_) {
        throw InvalidArgument("element '" + std::string(text) + "' has wrong length");
    }
    std::uint64_t value = 0;
    for (std::uint32_t d : digits) {
        if (d >= p_) {
            throw InvalidArgument("digit out of range in element '" + std::string(text) + "'");
        }
        value = value * p_ + d;
    }
    return {static_cast<std::uint32_t>(value)};
}

}  // namespace rscoop
