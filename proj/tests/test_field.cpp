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

#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "rscoop/errors.hpp"
#include "rscoop/field.hpp"

using namespace rscoop;
using namespace rscoop::test;

namespace {

struct FrozenTower {
    std::uint32_t p, s, t;
    std::vector<std::uint32_t> base_modulus;
    std::vector<std::uint32_t> modulus;
    std::uint32_t first_trace_one;
    std::uint32_t first_kernel_unit;
    std::uint32_t kernel_size;
};

// Values from tests/oracles/tower_oracle.py (plain polynomial arithmetic).
const std::vector<FrozenTower> kFrozen = {
    {2, 1, 2, {0, 1}, {1, 1, 1}, 2, 1, 2},
    {3, 1, 2, {0, 1}, {1, 0, 1}, 2, 3, 3},
    {2, 1, 4, {0, 1}, {1, 1, 0, 0, 1}, 8, 1, 8},
    {2, 2, 3, {1, 1, 1}, {2, 0, 0, 1}, 1, 4, 16},
    {5, 1, 2, {0, 1}, {2, 0, 1}, 3, 5, 5},
    {2, 1, 3, {0, 1}, {1, 1, 0, 1}, 1, 2, 4},
};

void check_axioms_exhaustive(const TowerField& f)
{
    const std::uint32_t n = f.size();
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = 0; b < n; ++b) {
            const FieldElement x{a}, y{b};
            REQUIRE(f.add(x, y) == f.add(y, x));
            REQUIRE(f.mul(x, y) == f.mul(y, x));
            for (std::uint32_t c = 0; c < n; ++c) {
                const FieldElement z{c};
                REQUIRE(f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z)));
                REQUIRE(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)));
                REQUIRE(f.add(f.add(x, y), z) == f.add(x, f.add(y, z)));
            }
        }
    }
}

}  // namespace

TEST_SUITE("fieldcore")
{
    TEST_CASE("canonical moduli and trace data match the oracle")
    {
        for (const FrozenTower& fz : kFrozen) {
            CAPTURE(fz.p);
            CAPTURE(fz.s);
            CAPTURE(fz.t);
            auto f = gf(fz.p, fz.s, fz.t);
            CHECK(f->base_modulus() == fz.base_modulus);
            CHECK(values(f->modulus()) == fz.modulus);
            std::uint32_t first_one = 0, first_unit = 0, kernel = 0;
            for (std::uint32_t i = f->size(); i-- > 0;) {
                const SubElement tr = f->trace(el(i));
                if (tr.value == 1) {
                    first_one = i;
                }
                if (tr.value == 0) {
                    ++kernel;
                    if (i != 0) {
                        first_unit = i;
                    }
                }
            }
            CHECK(first_one == fz.first_trace_one);
            CHECK(first_unit == fz.first_kernel_unit);
            CHECK(kernel == fz.kernel_size);
        }
    }

    TEST_CASE("small-field facts")
    {
        auto gf4 = gf(2, 1, 2);
        CHECK(gf4->mul(el(2), el(2)) == el(3));
        CHECK(gf4->trace(el(2)) == sub(1));
        CHECK(values(gf4->enumerate()) == std::vector<std::uint32_t>{0, 1, 2, 3});

        auto gf9 = gf(3, 1, 2);
        CHECK(gf9->trace(el(2)) == sub(1));
        CHECK(gf9->trace(el(3)) == sub(0));
        CHECK(values(gf9->coordinates(el(3))) == std::vector<std::uint32_t>{0, 1});
        CHECK(gf9->element(0) == gf9->zero());
        CHECK(gf9->element(1) == gf9->one());
    }

    TEST_CASE("field axioms, exhaustive up to 64 elements")
    {
        check_axioms_exhaustive(*gf(2, 1, 2));
        check_axioms_exhaustive(*gf(3, 1, 2));
        check_axioms_exhaustive(*gf(2, 1, 4));
        check_axioms_exhaustive(*gf(5, 1, 2));
        check_axioms_exhaustive(*gf(2, 2, 3));
    }

    TEST_CASE("field axioms on random triples in larger towers")
    {
        std::mt19937_64 rng(11);
        for (auto f : {gf(2, 4, 2), gf(2, 1, 8), gf(3, 2, 2), gf(7, 1, 3)}) {
            for (int trial = 0; trial < 20000; ++trial) {
                const FieldElement x{static_cast<std::uint32_t>(rng() % f->size())};
                const FieldElement y{static_cast<std::uint32_t>(rng() % f->size())};
                const FieldElement z{static_cast<std::uint32_t>(rng() % f->size())};
                REQUIRE(f->mul(f->mul(x, y), z) == f->mul(x, f->mul(y, z)));
                REQUIRE(f->mul(x, f->add(y, z)) == f->add(f->mul(x, y), f->mul(x, z)));
                REQUIRE(f->sub(f->add(x, y), y) == x);
            }
        }
    }

    TEST_CASE("inverses and powers")
    {
        for (auto f : {gf(2, 1, 4), gf(3, 1, 2), gf(2, 2, 3), gf(5, 1, 2), gf(2, 4, 3)}) {
            for (std::uint32_t i = 1; i < f->size(); ++i) {
                REQUIRE(f->mul(el(i), f->inv(el(i))) == f->one());
                REQUIRE(f->pow(el(i), f->size() - 1) == f->one());
            }
            CHECK_THROWS_AS((void)f->inv(f->zero()), AlgebraError);
            for (std::uint32_t i = 1; i < f->base_size(); ++i) {
                REQUIRE(f->sub_mul(sub(i), f->sub_inv(sub(i))) == sub(1));
            }
        }
    }

    TEST_CASE("trace is B-valued, Frobenius-fixed, B-linear and surjective")
    {
        for (auto f : {gf(2, 1, 2), gf(3, 1, 2), gf(2, 1, 4), gf(2, 2, 3), gf(5, 1, 2),
                       gf(2, 4, 3), gf(2, 6, 2), gf(2, 1, 12)}) {
            std::vector<std::size_t> hits(f->base_size());
            for (std::uint32_t i = 0; i < f->size(); ++i) {
                const FieldElement tr = f->embed(f->trace(el(i)));
                REQUIRE(f->pow(tr, f->base_size()) == tr);
                // Tr is the sum of the Galois conjugates.
                FieldElement sum = f->zero();
                FieldElement y = el(i);
                for (std::uint32_t k = 0; k < f->degree(); ++k) {
                    sum = f->add(sum, y);
                    y = f->pow(y, f->base_size());
                }
                REQUIRE(sum == tr);
                ++hits[f->trace(el(i)).value];
            }
            std::size_t kernel = f->size() / f->base_size();
            for (std::size_t h : hits) {
                CHECK(h == kernel);
            }
        }
        auto f = gf(3, 1, 2);
        for (std::uint32_t a = 0; a < 3; ++a) {
            for (std::uint32_t b = 0; b < 3; ++b) {
                for (std::uint32_t x = 0; x < 9; ++x) {
                    for (std::uint32_t y = 0; y < 9; ++y) {
                        const SubElement lhs =
                            f->trace(f->add(f->scale(sub(a), el(x)), f->scale(sub(b), el(y))));
                        const SubElement rhs = f->sub_add(f->sub_mul(sub(a), f->trace(el(x))),
                                                          f->sub_mul(sub(b), f->trace(el(y))));
                        REQUIRE(lhs == rhs);
                    }
                }
            }
        }
        CHECK(gf(2, 1, 4)->trace(gf(2, 1, 4)->zero()) == sub(0));
    }

    TEST_CASE("spec strings")
    {
        auto a = TowerField::from_spec("gf(2^4)/gf(2)");
        CHECK(a->degree() == 4);
        CHECK(a->spec() == "gf(2^4)/gf(2)");
        auto b = TowerField::from_spec("GF(2^(2*3))/gf(2^2)");
        CHECK(b->base_degree() == 2);
        CHECK(b->degree() == 3);
        CHECK(b->spec() == "gf(2^6)/gf(2^2)");
        CHECK(TowerField::from_spec(" gf(3^2) / gf(3) ")->size() == 9);
        CHECK_THROWS_AS(TowerField::from_spec("gf(2^4)"), InvalidArgument);
        CHECK_THROWS_AS(TowerField::from_spec("gf(4^3)/gf(4)"), InvalidArgument);
        CHECK_THROWS_AS(TowerField::from_spec("gf(2^4)/gf(3)"), InvalidArgument);
        CHECK_THROWS_AS(TowerField::from_spec("gf(2^4)/gf(2^3)"), InvalidArgument);
        CHECK_THROWS_AS(TowerField::from_spec("gf(2^4)/gf(2^4)"), InvalidArgument);
        CHECK_THROWS_AS(TowerField::from_spec("gf(2^30)/gf(2)"), InvalidArgument);
        CHECK_THROWS_AS(TowerField::create(2, 1, 8, 100), InvalidArgument);
    }

    TEST_CASE("element text round-trips")
    {
        for (auto f : {gf(2, 1, 4), gf(3, 1, 2), gf(2, 2, 3), gf(5, 1, 2)}) {
            for (FieldElement x : f->enumerate()) {
                REQUIRE(f->parse_element(f->format(x)) == x);
            }
        }
        auto f = gf(2, 1, 4);
        CHECK(f->format(el(8)) == "1000");
        CHECK(f->parse_element("11") == el(3));
        CHECK_THROWS_AS(f->parse_element("10000"), InvalidArgument);
        CHECK_THROWS_AS(f->parse_element("2"), InvalidArgument);
        CHECK_THROWS_AS(f->parse_element(""), InvalidArgument);
    }

    TEST_CASE("coordinates over B")
    {
        auto f = gf(2, 2, 3);
        for (FieldElement x : f->enumerate()) {
            const auto c = f->coordinates(x);
            REQUIRE(c.size() == 3);
            REQUIRE(f->from_coordinates(c) == x);
            REQUIRE(f->in_base(x) == (c[1].value == 0 && c[2].value == 0));
        }
    }
}
