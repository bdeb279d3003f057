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

#include <set>

#include "helpers.hpp"
#include "rscoop/errors.hpp"
#include "rscoop/repair.hpp"
#include "rscoop/report.hpp"

using namespace rscoop;
using namespace rscoop::test;

namespace {

const NamedCoefficients& coeffs(const RepairPlan& plan, const std::string& name)
{
    for (const NamedCoefficients& c : plan.coefficients) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range(name);
}

FieldElement param(const RepairPlan& plan, const std::string& name)
{
    for (const NamedElement& p : plan.parameters) {
        if (p.name == name) {
            return p.value;
        }
    }
    throw std::out_of_range(name);
}

std::set<std::tuple<std::size_t, std::size_t, std::size_t>> arrows(const RepairPlan& plan)
{
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> out;
    for (const ExchangeMessage& m : plan.exchange_schedule) {
        out.insert({m.round, m.sender + 1, m.receiver + 1});
    }
    return out;
}

// Brute force over B^2 for one node's system of the one-round exchange.
bool system_solvable(const TowerField& f, SubElement a12, SubElement a21, SubElement r1,
                     SubElement r2, SubElement ix, SubElement iy)
{
    for (std::uint32_t x = 0; x < f.base_size(); ++x) {
        for (std::uint32_t y = 0; y < f.base_size(); ++y) {
            const bool e1 = f.sub_add(sub(x), f.sub_mul(a12, sub(y))) == r1;
            const bool e2 = f.sub_add(f.sub_mul(a21, sub(x)), sub(y)) == r2;
            const bool ne = f.sub_add(f.sub_mul(ix, sub(x)), f.sub_mul(iy, sub(y))) != sub(1);
            if (e1 && e2 && ne) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

TEST_SUITE("repair")
{
    TEST_CASE("classification")
    {
        const RSCode c16 = RSCode::prefix(gf(2, 1, 4), 16, 8);
        CHECK(classify(c16, make_pattern(c16, {3})).tag == Branch::single);
        CHECK(classify(c16, make_pattern(c16, {3, 9})).tag == Branch::two);
        const SchemeBranch b = classify(c16, make_pattern(c16, {0, 1, 2}));
        CHECK(b.tag == Branch::three_l2);
        CHECK(b.kernel_dim == 2);

        const RSCode c9 = RSCode::prefix(gf(3, 1, 2), 9, 6);
        CHECK(classify(c9, make_pattern(c9, {0, 1, 2})).tag == Branch::three_l1_t2_char3);
        const RSCode c25 = RSCode::prefix(gf(5, 1, 2), 25, 20);
        CHECK(classify(c25, make_pattern(c25, {0, 2, 4})).tag == Branch::three_l1_t2_char_not3);
        const RSCode c64 = RSCode::prefix(gf(2, 2, 3), 64, 48);
        CHECK(classify(c64, make_pattern(c64, {0, 1, 2})).tag == Branch::three_l1_general);

        const RSCode c4 = RSCode::prefix(gf(2, 1, 2), 4, 1);
        try {
            (void)classify(c4, make_pattern(c4, {0, 1, 2}));
            FAIL("expected UnsupportedPattern");
        } catch (const UnsupportedPattern& e) {
            CHECK(e.l == 0);
            CHECK(e.t == 2);
        }
        const RSCode c8 = RSCode::prefix(gf(2, 1, 3), 8, 4);
        CHECK_THROWS_AS((void)classify(c8, make_pattern(c8, {0, 1, 2})), UnsupportedPattern);

        const RSCode bad = RSCode::prefix(gf(2, 1, 4), 16, 9);
        CHECK_THROWS_AS((void)classify(bad, make_pattern(bad, {0})), InvalidArgument);
    }

    TEST_CASE("pattern validation")
    {
        const RSCode c = RSCode::prefix(gf(2, 1, 4), 16, 8);
        CHECK(make_pattern(c, {5, 2}).erased == std::vector<std::size_t>{2, 5});
        CHECK_THROWS_AS(make_pattern(c, {}), InvalidArgument);
        CHECK_THROWS_AS(make_pattern(c, {1, 1}), InvalidArgument);
        CHECK_THROWS_AS(make_pattern(c, {16}), InvalidArgument);
        CHECK_THROWS_AS(make_pattern(c, {0, 1, 2, 3}), InvalidArgument);
        const RSCode tight = RSCode::prefix(gf(2, 1, 2), 4, 2);
        CHECK_THROWS_AS(make_pattern(tight, {0, 1, 2}), InvalidArgument);
    }

    TEST_CASE("parameter choices")
    {
        CHECK(choose_delta(*gf(2, 1, 2)) == el(2));
        CHECK(choose_delta(*gf(2, 1, 4)) == el(8));
        CHECK(choose_gamma_two(*gf(2, 1, 2)) == el(1));
        CHECK(choose_gamma_two(*gf(2, 1, 4)) == el(1));
        CHECK(choose_gamma_two(*gf(3, 1, 2)) == el(3));
        for (auto f : {gf(2, 1, 2), gf(3, 1, 2), gf(2, 1, 4), gf(2, 2, 3), gf(5, 1, 2)}) {
            CHECK(f->trace(choose_delta(*f)) == sub(1));
            CHECK(f->trace(choose_gamma_two(*f)) == sub(0));
            CHECK(choose_gamma_two(*f) != f->zero());
        }
        const RSCode c9 = RSCode::prefix(gf(3, 1, 2), 9, 6);
        const RepairPlan p9 = plan_repair(c9, make_pattern(c9, {0, 1, 2}));
        CHECK(p9.delta == el(2));
        CHECK(param(p9, "gamma1") == el(1));
        CHECK(param(p9, "gamma2") == el(1));
    }

    TEST_CASE("two-erasure plan matches the oracle")
    {
        const RSCode c = RSCode::prefix(gf(2, 1, 4), 16, 8);
        const RepairPlan plan = plan_two(c, make_pattern(c, {0, 1}));
        CHECK(values(plan.nodes[0].check_basis) == std::vector<std::uint32_t>{1, 2, 4, 8});
        CHECK(param(plan, "gamma") == el(1));
        CHECK(values(coeffs(plan, "a").values) == std::vector<std::uint32_t>{1, 0, 0, 0});
        CHECK(plan.rounds == 1);
        CHECK(plan.exchange_schedule.size() == 2);
        // Node 1's message only touches its t-1 pure traces.
        for (const Term& term : plan.exchange_schedule[0].recipe) {
            const auto* o = std::get_if<Obtained>(&term.source);
            REQUIRE(o != nullptr);
            CHECK(o->index < 3);
        }
    }

    TEST_CASE("char-3 mixing matrix")
    {
        const RSCode c = RSCode::prefix(gf(3, 1, 2), 9, 6);
        const RepairPlan plan = plan_three_l1(c, make_pattern(c, {0, 1, 2}));
        CHECK(plan.branch.tag == Branch::three_l1_t2_char3);
        CHECK(values(coeffs(plan, "mixing_row_1").values) == std::vector<std::uint32_t>{2, 1, 1});
        CHECK(values(coeffs(plan, "mixing_row_2").values) == std::vector<std::uint32_t>{1, 2, 1});
        CHECK(values(coeffs(plan, "mixing_row_3").values) == std::vector<std::uint32_t>{1, 1, 2});
        // Inverse of the mixing matrix mod 3.
        CHECK(values(coeffs(plan, "unmix_node1").values) == std::vector<std::uint32_t>{0, 2, 2});
        CHECK(values(coeffs(plan, "unmix_node2").values) == std::vector<std::uint32_t>{2, 0, 2});
        CHECK(values(coeffs(plan, "unmix_node3").values) == std::vector<std::uint32_t>{2, 2, 0});
    }

    TEST_CASE("bandwidth and schedule shape per branch")
    {
        const RSCode c16 = RSCode::prefix(gf(2, 1, 4), 16, 8);
        CHECK(plan_bandwidth(plan_repair(c16, make_pattern(c16, {4}))) == Bandwidth{15, 0, 0});
        CHECK(plan_bandwidth(plan_repair(c16, make_pattern(c16, {4, 7}))) == Bandwidth{28, 2, 1});
        const RepairPlan l2 = plan_repair(c16, make_pattern(c16, {4, 7, 11}));
        CHECK(plan_bandwidth(l2) == Bandwidth{39, 6, 3});
        const std::set<std::tuple<std::size_t, std::size_t, std::size_t>> fig{
            {1, 2, 1}, {1, 3, 1}, {2, 1, 2}, {2, 1, 3}, {3, 2, 3}, {3, 3, 2}};
        CHECK(arrows(l2) == fig);

        const RSCode c25 = RSCode::prefix(gf(5, 1, 2), 25, 20);
        const RepairPlan l1 = plan_repair(c25, make_pattern(c25, {0, 1, 3}));
        CHECK(plan_bandwidth(l1) == Bandwidth{66, 6, 1});
        std::set<std::tuple<std::size_t, std::size_t, std::size_t>> all_pairs;
        for (std::size_t s = 1; s <= 3; ++s) {
            for (std::size_t r = 1; r <= 3; ++r) {
                if (s != r) {
                    all_pairs.insert({1, s, r});
                }
            }
        }
        CHECK(arrows(l1) == all_pairs);
    }

    TEST_CASE("every plan on small codes validates with rank-t recovery bases")
    {
        for (auto [f, n, k] : {std::tuple{gf(2, 1, 4), 16u, 8u}, std::tuple{gf(3, 1, 2), 9u, 6u},
                               std::tuple{gf(2, 1, 2), 4u, 1u}, std::tuple{gf(5, 1, 2), 25u, 20u}}) {
            const RSCode code = RSCode::prefix(f, n, k);
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a; b < n; ++b) {
                    for (std::size_t c = b; c < n; ++c) {
                        std::vector<std::size_t> e{a};
                        if (b > a) {
                            e.push_back(b);
                        }
                        if (c > b && b > a) {
                            e.push_back(c);
                        }
                        if (c > b && b == a) {
                            continue;
                        }
                        if (n - e.size() < k) {
                            continue;
                        }
                        try {
                            const RepairPlan plan = plan_repair(code, make_pattern(code, e));
                            for (const NodePlan& node : plan.nodes) {
                                REQUIRE(node.recovery_basis.rank() == f->degree());
                            }
                            validate_plan(code, plan);
                        } catch (const UnsupportedPattern&) {
                            REQUIRE(e.size() == 3);
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("gamma systems")
    {
        // t = 2, p != 3: x = y = Tr(gamma^-1) / 3.
        auto f25 = gf(5, 1, 2);
        const FieldElement g = choose_gamma_two(*f25);
        const GammaSystemSolution s = solve_gamma_system(*f25, g, g);
        const SubElement third = f25->sub_inv(sub(3));
        const SubElement expect = f25->sub_mul(f25->trace(f25->inv(g)), third);
        CHECK(s.pairs[0].first == expect);
        CHECK(s.pairs[0].second == expect);

        // t >= 3 with Tr(g1) = Tr(g2) = Tr(g1^-1 g2) = 0.
        auto f64 = gf(2, 2, 3);
        const FieldElement g1 = choose_gamma_two(*f64);
        FieldElement g2{};
        for (FieldElement x : f64->enumerate()) {
            if (x.value && f64->trace(x).value == 0 &&
                f64->trace(f64->mul(f64->inv(g1), x)).value == 0) {
                g2 = x;
                break;
            }
        }
        const GammaSystemSolution s64 = solve_gamma_system(*f64, g1, g2);
        const SubElement x1 = f64->trace(f64->inv(g1));
        CHECK(s64.pairs[0].first == x1);
        CHECK(s64.pairs[0].second ==
              f64->sub_sub(f64->trace(f64->inv(g2)),
                           f64->sub_mul(f64->trace(f64->mul(g1, f64->inv(g2))), x1)));

        CHECK_THROWS_AS(solve_gamma_system(*f64, f64->zero(), g2), InvalidArgument);

        // Either every node's system is solvable and the answer satisfies it,
        // or the solver refuses and brute force agrees.
        for (auto f : {gf(2, 1, 4), gf(2, 1, 3), gf(3, 1, 2)}) {
            for (std::uint32_t a = 1; a < f->size(); ++a) {
                for (std::uint32_t b = 1; b < f->size(); ++b) {
                    const FieldElement c1{a}, c2{b};
                    const auto tr = [&](FieldElement x) { return f->trace(x); };
                    const FieldElement i1 = f->inv(c1), i2 = f->inv(c2);
                    const SubElement t[6] = {tr(f->mul(i1, c2)), tr(f->mul(c1, i2)), tr(c1),
                                             tr(c2), tr(i1), tr(i2)};
                    const bool ok = system_solvable(*f, t[0], t[1], t[4], t[5], t[2], t[3]) &&
                                    system_solvable(*f, t[3], t[5], t[2], t[1], t[4], t[0]) &&
                                    system_solvable(*f, t[2], t[4], t[3], t[0], t[5], t[1]);
                    try {
                        const auto sol = solve_gamma_system(*f, c1, c2);
                        REQUIRE(ok);
                        REQUIRE(sol.pairs.size() == 3);
                    } catch (const AlgebraError&) {
                        REQUIRE_FALSE(ok);
                    }
                }
            }
        }
    }

    TEST_CASE("validation rejects broken plans")
    {
        const RSCode c = RSCode::prefix(gf(2, 1, 4), 16, 8);
        const RepairPlan good = plan_repair(c, make_pattern(c, {0, 5, 9}));
        CHECK_NOTHROW(validate_plan(c, good));

        RepairPlan wrong_coeff = good;
        wrong_coeff.nodes[1].recovery_recipes.back().push_back({Obtained{0}, sub(1)});
        CHECK_THROWS_AS(validate_plan(c, wrong_coeff), PlanError);

        RepairPlan same_round = good;
        same_round.exchange_schedule[0].recipe.push_back({Received{1, 2}, sub(1)});
        CHECK_THROWS_AS(validate_plan(c, same_round), PlanError);

        RepairPlan early_own = good;
        early_own.exchange_schedule[0].recipe.push_back({OwnSymbol{el(1)}, sub(1)});
        CHECK_THROWS_AS(validate_plan(c, early_own), PlanError);

        RepairPlan bad_mu = good;
        bad_mu.helper_instructions[3].mu = c.field().add(bad_mu.helper_instructions[3].mu, el(1));
        CHECK_THROWS_AS(validate_plan(c, bad_mu), PlanError);

        RepairPlan missing = good;
        missing.nodes[2].recovery_recipes.pop_back();
        CHECK_THROWS_AS(validate_plan(c, missing), PlanError);

        RepairPlan dup = good;
        dup.exchange_schedule.push_back(dup.exchange_schedule.back());
        CHECK_THROWS_AS(validate_plan(c, dup), PlanError);
    }

    TEST_CASE("plans are deterministic")
    {
        const RSCode c = RSCode::prefix(gf(2, 2, 3), 64, 48);
        const auto p = make_pattern(c, {0, 1, 2});
        CHECK(plan_json(c, plan_repair(c, p)).dump() == plan_json(c, plan_repair(c, p)).dump());
    }

    TEST_CASE("branch builders refuse other patterns")
    {
        const RSCode c = RSCode::prefix(gf(2, 1, 4), 16, 8);
        CHECK_THROWS_AS(plan_single(c, make_pattern(c, {0, 1})), InvalidArgument);
        CHECK_THROWS_AS(plan_two(c, make_pattern(c, {0})), InvalidArgument);
        CHECK_THROWS_AS(plan_three_l1(c, make_pattern(c, {0, 1, 2})), InvalidArgument);
        CHECK_THROWS_AS(plan_three_l2(c, make_pattern(c, {0, 1})), InvalidArgument);
    }

    TEST_CASE("explicit evaluation sets and non-unit multipliers")
    {
        auto f = gf(2, 1, 4);
        const RSCode c(f, {el(3), el(7), el(12), el(1), el(9), el(14), el(5), el(10), el(0),
                           el(6), el(2)},
                       3);
        for (FieldElement l : c.multipliers()) {
            CHECK(l != f->zero());
        }
        CHECK(c.repair_feasible());
        CHECK_NOTHROW(validate_plan(c, plan_repair(c, make_pattern(c, {0, 4, 8}))));
        CHECK_NOTHROW(validate_plan(c, plan_repair(c, make_pattern(c, {2, 10}))));
    }
}
