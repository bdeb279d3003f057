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

#include "rscoop/repair.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "rscoop/errors.hpp"

namespace rscoop {

namespace {

constexpr SubElement kOne{1};

Term obtained(std::size_t index, SubElement coeff = kOne) { return {Obtained{index}, coeff}; }
Term received(std::size_t round, std::size_t sender, SubElement coeff = kOne)
{
    return {Received{round, sender}, coeff};
}
Term own_symbol(FieldElement theta) { return {OwnSymbol{theta}, kOne}; }

bool same_source(const TermSource& a, const TermSource& b)
{
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto* x = std::get_if<Obtained>(&a)) {
        return x->index == std::get<Obtained>(b).index;
    }
    if (const auto* x = std::get_if<Received>(&a)) {
        const auto& y = std::get<Received>(b);
        return x->round == y.round && x->sender == y.sender;
    }
    return std::get<OwnSymbol>(a).theta == std::get<OwnSymbol>(b).theta;
}

// Merges repeated sources and drops zero coefficients, keeping first-seen order.
Recipe normalize(const TowerField& field, const Recipe& recipe)
{
    Recipe out;
    for (const Term& term : recipe) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const Term& t) { return same_source(t.source, term.source); });
        if (it == out.end()) {
            out.push_back(term);
        } else {
            it->coeff = field.sub_add(it->coeff, term.coeff);
        }
    }
    std::erase_if(out, [](const Term& t) { return t.coeff.value == 0; });
    return out;
}

Recipe scaled(const TowerField& field, const Recipe& recipe, SubElement factor)
{
    Recipe out = recipe;
    for (Term& term : out) {
        term.coeff = field.sub_mul(term.coeff, factor);
    }
    return out;
}

Recipe sum_of(const TowerField& field, std::initializer_list<Recipe> parts)
{
    Recipe all;
    for (const Recipe& part : parts) {
        all.insert(all.end(), part.begin(), part.end());
    }
    return normalize(field, all);
}

Recipe linear(const TowerField& field, std::span<const SubElement> coeffs, std::size_t offset = 0)
{
    Recipe out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        out.push_back(obtained(offset + i, coeffs[i]));
    }
    return normalize(field, out);
}

std::vector<FieldElement> scaled_elements(const TowerField& field, FieldElement factor,
                                          std::span<const FieldElement> xs)
{
    std::vector<FieldElement> out;
    for (FieldElement x : xs) {
        out.push_back(field.mul(factor, x));
    }
    return out;
}

RepairPlan start_plan(const RSCode& code, const FailurePattern& pattern, SchemeBranch branch)
{
    RepairPlan plan;
    plan.branch = branch;
    plan.pattern = pattern;
    for (std::size_t i = 0; i < code.length(); ++i) {
        if (!std::binary_search(pattern.erased.begin(), pattern.erased.end(), i)) {
            plan.helpers.push_back(i);
        }
    }
    plan.delta = choose_delta(code.field());
    return plan;
}

NodePlan make_node(std::size_t position, FieldElement scale, std::vector<FieldElement> check_basis)
{
    NodePlan node;
    node.position = position;
    node.check_scale = scale;
    node.check_basis = std::move(check_basis);
    return node;
}

// Fills helper instructions and the Phase-1 folding coefficients from each
// node's check polynomials.
void build_phase1(const RSCode& code, RepairPlan& plan)
{
    const TowerField& field = code.field();
    for (std::size_t h = 0; h < plan.helpers.size(); ++h) {
        const std::size_t helper = plan.helpers[h];
        for (std::size_t j = 0; j < plan.nodes.size(); ++j) {
            const NodePlan& node = plan.nodes[j];
            const FieldElement diff = field.sub(code.point(helper), code.point(node.position));
            const FieldElement mu =
                field.div(field.mul(node.check_scale, code.multiplier(helper)), diff);
            plan.helper_instructions.push_back({helper, j, mu});
        }
    }
    for (NodePlan& node : plan.nodes) {
        node.obtain_coeffs.assign(node.check_basis.size(),
                                  std::vector<SubElement>(plan.helpers.size()));
        for (std::size_t i = 0; i < node.check_basis.size(); ++i) {
            for (std::size_t h = 0; h < plan.helpers.size(); ++h) {
                const FieldElement diff =
                    field.sub(code.point(plan.helpers[h]), code.point(node.position));
                node.obtain_coeffs[i][h] =
                    field.sub_neg(field.trace(field.mul(node.check_basis[i], diff)));
            }
        }
    }
}

void finish_plan(const RSCode& code, RepairPlan& plan)
{
    build_phase1(code, plan);
    std::stable_sort(plan.exchange_schedule.begin(), plan.exchange_schedule.end(),
                     [](const ExchangeMessage& a, const ExchangeMessage& b) {
                         return a.round < b.round;
                     });
    validate_plan(code, plan);
}

void add_form(const TowerField& field, TraceForm& acc, const TraceForm& form, SubElement coeff)
{
    for (std::size_t e = 0; e < acc.size(); ++e) {
        acc[e] = field.add(acc[e], field.scale(coeff, form[e]));
    }
}

std::string describe(const TermSource& source)
{
    if (const auto* o = std::get_if<Obtained>(&source)) {
        return "obtained[" + std::to_string(o->index) + "]";
    }
    if (const auto* r = std::get_if<Received>(&source)) {
        return "received(round " + std::to_string(r->round) + ", from node " +
               std::to_string(r->sender + 1) + ")";
    }
    return "own-symbol";
}

// Round after which a node holds its recovered symbol (0 = right after Phase 1).
std::size_t recovery_round(const NodePlan& node)
{
    std::size_t round = 0;
    for (const Recipe& recipe : node.recovery_recipes) {
        for (const Term& term : recipe) {
            if (const auto* r = std::get_if<Received>(&term.source)) {
                round = std::max(round, r->round);
            }
        }
    }
    return round;
}

}  // namespace

const char* branch_name(Branch branch)
{
    switch (branch) {
    case Branch::single:
        return "single";
    case Branch::two:
        return "two";
    case Branch::three_l1_general:
        return "three-l1-general";
    case Branch::three_l1_t2_char_not3:
        return "three-l1-t2-charNot3";
    case Branch::three_l1_t2_char3:
        return "three-l1-t2-char3";
    case Branch::three_l2:
        return "three-l2";
    }
    return "unknown";
}

FailurePattern make_pattern(const RSCode& code, std::vector<std::size_t> erased)
{
    std::sort(erased.begin(), erased.end());
    if (std::adjacent_find(erased.begin(), erased.end()) != erased.end()) {
        throw InvalidArgument("erased indices must be distinct");
    }
    if (erased.empty() || erased.size() > 3) {
        throw InvalidArgument("between one and three erasures are supported");
    }
    if (erased.back() >= code.length()) {
        throw InvalidArgument("erased index " + std::to_string(erased.back()) +
                              " out of range for n=" + std::to_string(code.length()));
    }
    if (code.length() - erased.size() < code.dimension()) {
        throw InvalidArgument("fewer than k surviving symbols");
    }
    return FailurePattern{std::move(erased)};
}

SchemeBranch classify(const RSCode& code, const FailurePattern& pattern)
{
    const TowerField& field = code.field();
    if (!code.repair_feasible()) {
        throw InvalidArgument("repair needs n-k >= |B|^(t-1) = " +
                              std::to_string(code.required_redundancy()) + ", got n-k = " +
                              std::to_string(code.length() - code.dimension()));
    }
    switch (pattern.erased.size()) {
    case 1:
        return {Branch::single, std::nullopt};
    case 2:
        return {Branch::two, std::nullopt};
    case 3:
        break;
    default:
        throw InvalidArgument("between one and three erasures are supported");
    }
    const auto& e = pattern.erased;
    const std::size_t l =
        triple_kernel(field, code.point(e[0]), code.point(e[1]), code.point(e[2])).dim();
    const std::size_t t = field.degree();
    if (l + 1 == t) {
        if (t >= 3) {
            return {Branch::three_l1_general, l};
        }
        return {field.characteristic() == 3 ? Branch::three_l1_t2_char3
                                            : Branch::three_l1_t2_char_not3,
                l};
    }
    if (t > 3) {
        return {Branch::three_l2, l};
    }
    throw UnsupportedPattern(l, t);
}

FieldElement choose_delta(const TowerField& field)
{
    for (std::uint32_t i = 0; i < field.size(); ++i) {
        if (field.trace(field.element(i)) == kOne) {
            return field.element(i);
        }
    }
    throw AlgebraError("trace is not surjective");
}

FieldElement choose_gamma_two(const TowerField& field)
{
    for (std::uint32_t i = 1; i < field.size(); ++i) {
        if (field.trace(field.element(i)).value == 0) {
            return field.element(i);
        }
    }
    throw AlgebraError("trace kernel is trivial");
}

GammaSystemSolution solve_gamma_system(const TowerField& field, FieldElement gamma1,
                                       FieldElement gamma2)
{
    if (gamma1.value == 0 || gamma2.value == 0) {
        throw InvalidArgument("gamma1 and gamma2 must be nonzero");
    }
    const auto tr = [&](FieldElement x) { return field.trace(x); };
    const FieldElement inv1 = field.inv(gamma1);
    const FieldElement inv2 = field.inv(gamma2);
    const SubElement tr_g1 = tr(gamma1);
    const SubElement tr_g2 = tr(gamma2);
    const SubElement tr_i1 = tr(inv1);
    const SubElement tr_i2 = tr(inv2);
    const SubElement tr_i1g2 = tr(field.mul(inv1, gamma2));
    const SubElement tr_g1i2 = tr(field.mul(gamma1, inv2));

    struct System {
        SubElement a12, a21, rhs1, rhs2, ineq_x, ineq_y;
    };
    // x + a12 y = rhs1, a21 x + y = rhs2, ineq_x x + ineq_y y != 1.
    const System systems[3] = {
        {tr_i1g2, tr_g1i2, tr_i1, tr_i2, tr_g1, tr_g2},
        {tr_g2, tr_i2, tr_g1, tr_g1i2, tr_i1, tr_i1g2},
        {tr_g1, tr_i1, tr_g2, tr_i1g2, tr_i2, tr_g1i2},
    };

    GammaSystemSolution solution;
    for (std::size_t node = 0; node < 3; ++node) {
        const System& sys = systems[node];
        auto satisfies = [&](SubElement x, SubElement y) {
            const bool eq1 = field.sub_add(x, field.sub_mul(sys.a12, y)) == sys.rhs1;
            const bool eq2 = field.sub_add(field.sub_mul(sys.a21, x), y) == sys.rhs2;
            const SubElement lhs =
                field.sub_add(field.sub_mul(sys.ineq_x, x), field.sub_mul(sys.ineq_y, y));
            return eq1 && eq2 && lhs != kOne;
        };
        const BMatrix a{{kOne, sys.a12}, {sys.a21, kOne}};
        const SubElement det = field.sub_sub(kOne, field.sub_mul(sys.a12, sys.a21));
        std::optional<std::pair<SubElement, SubElement>> found;
        if (det.value != 0) {
            const auto x = solve_over_base(field, a, {sys.rhs1, sys.rhs2});
            if (x && satisfies((*x)[0], (*x)[1])) {
                found = std::make_pair((*x)[0], (*x)[1]);
            }
        } else {
            for (std::uint32_t x = 0; x < field.base_size() && !found; ++x) {
                for (std::uint32_t y = 0; y < field.base_size() && !found; ++y) {
                    if (satisfies({x}, {y})) {
                        found = std::make_pair(SubElement{x}, SubElement{y});
                    }
                }
            }
        }
        if (!found) {
            throw AlgebraError("gamma system for node " + std::to_string(node + 1) +
                               " has no admissible solution for gamma1=" + field.format(gamma1) +
                               ", gamma2=" + field.format(gamma2));
        }
        solution.pairs.push_back(*found);
    }
    return solution;
}

RepairPlan plan_single(const RSCode& code, const FailurePattern& pattern)
{
    const TowerField& field = code.field();
    const SchemeBranch branch = classify(code, pattern);
    if (branch.tag != Branch::single) {
        throw InvalidArgument("plan_single needs exactly one erasure");
    }
    RepairPlan plan = start_plan(code, pattern, branch);
    const BBasis basis = extend_basis(field, BBasis{}, field.degree());

    NodePlan node = make_node(pattern.erased[0], field.one(), basis.elements());
    node.recovery_basis = basis;
    for (std::size_t i = 0; i < field.degree(); ++i) {
        node.recovery_recipes.push_back({obtained(i)});
    }
    plan.nodes.push_back(std::move(node));
    finish_plan(code, plan);
    return plan;
}

RepairPlan plan_two(const RSCode& code, const FailurePattern& pattern)
{
    const TowerField& field = code.field();
    const SchemeBranch branch = classify(code, pattern);
    if (branch.tag != Branch::two) {
        throw InvalidArgument("plan_two needs exactly two erasures");
    }
    const std::size_t t = field.degree();
    RepairPlan plan = start_plan(code, pattern, branch);
    const FieldElement a1 = code.point(pattern.erased[0]);
    const FieldElement a2 = code.point(pattern.erased[1]);
    const FieldElement d12 = field.sub(a1, a2);
    const FieldElement inv_d12 = field.inv(d12);

    const BSubspace k12 = pair_kernel(field, a1, a2);
    std::vector<FieldElement> u = k12.basis().elements();
    u.push_back(field.mul(plan.delta, inv_d12));
    const BBasis u_full(field, u);

    const FieldElement gamma = choose_gamma_two(field);
    plan.parameters.push_back({"gamma", gamma});

    // gamma/(a1-a2) lies in K_{1,2}: node 1 builds its trace from pure traces.
    const Coordinates e = coords_in_basis(field, field.mul(gamma, inv_d12), k12.basis());
    // 1/(a1-a2) = sum a_i gamma u_i.
    const BBasis gamma_u(field, scaled_elements(field, gamma, u));
    const Coordinates a = coords_in_basis(field, inv_d12, gamma_u);
    plan.coefficients.push_back({"node1_to_node2", e});
    plan.coefficients.push_back({"a", a});

    NodePlan node1 = make_node(pattern.erased[0], field.one(), u);
    NodePlan node2 = make_node(pattern.erased[1], gamma, u);

    const SubElement minus_one = field.sub_neg(kOne);
    std::vector<FieldElement> basis1(u.begin(), u.end() - 1);
    basis1.push_back(
        field.mul(field.sub(plan.delta, field.scale(a[t - 1], gamma)), inv_d12));
    node1.recovery_basis = BBasis(field, basis1);
    node2.recovery_basis = gamma_u;
    for (std::size_t i = 0; i + 1 < t; ++i) {
        node1.recovery_recipes.push_back({obtained(i)});
        node2.recovery_recipes.push_back({obtained(i)});
    }
    node1.recovery_recipes.push_back({obtained(t - 1), received(1, 1, minus_one)});
    node2.recovery_recipes.push_back({obtained(t - 1), received(1, 0, minus_one)});

    plan.nodes = {std::move(node1), std::move(node2)};
    plan.exchange_schedule.push_back({1, 0, 1, linear(field, e)});
    plan.exchange_schedule.push_back({1, 1, 0, linear(field, a)});
    plan.rounds = 1;
    finish_plan(code, plan);
    return plan;
}

namespace {

void build_three_l1_char3(const RSCode& code, RepairPlan& plan, const std::vector<FieldElement>& u,
                          FieldElement inv_d12)
{
    const TowerField& field = code.field();
    const std::size_t t = field.degree();
    plan.parameters.push_back({"gamma1", field.one()});
    plan.parameters.push_back({"gamma2", field.one()});
    for (std::size_t j = 0; j < 3; ++j) {
        plan.nodes.push_back(make_node(plan.pattern.erased[j], field.one(), u));
    }

    // Mixed terms S_{k,t} = sum_e m[k][e] Tr(c_e/(a1-a2)).
    BMatrix mixing(3, std::vector<SubElement>(3));
    for (std::size_t k = 0; k < 3; ++k) {
        const TraceForm form = obtained_form(code, plan, k, t - 1);
        for (std::size_t e = 0; e < 3; ++e) {
            const FieldElement entry = field.div(form[e], inv_d12);
            if (!field.in_base(entry)) {
                throw AlgebraError("mixed-term coefficient outside B");
            }
            mixing[k][e] = {entry.value};
        }
        plan.coefficients.push_back({"mixing_row_" + std::to_string(k + 1), mixing[k]});
    }

    BMatrix transposed(3, std::vector<SubElement>(3));
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            transposed[r][c] = mixing[c][r];
        }
    }
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<SubElement> unit(3);
        unit[j] = kOne;
        const auto w = solve_over_base(field, transposed, unit);
        if (!w) {
            throw AlgebraError("mixed-term coefficient matrix is singular");
        }
        plan.coefficients.push_back({"unmix_node" + std::to_string(j + 1), *w});

        NodePlan& node = plan.nodes[j];
        std::vector<FieldElement> basis(u.begin(), u.end() - 1);
        basis.push_back(inv_d12);
        node.recovery_basis = BBasis(field, basis);
        for (std::size_t i = 0; i + 1 < t; ++i) {
            node.recovery_recipes.push_back({obtained(i)});
        }
        Recipe last;
        for (std::size_t k = 0; k < 3; ++k) {
            last.push_back(k == j ? obtained(t - 1, (*w)[k]) : received(1, k, (*w)[k]));
        }
        node.recovery_recipes.push_back(normalize(field, last));
    }
    for (std::size_t sender = 0; sender < 3; ++sender) {
        for (std::size_t receiver = 0; receiver < 3; ++receiver) {
            if (sender != receiver) {
                plan.exchange_schedule.push_back({1, sender, receiver, {obtained(t - 1)}});
            }
        }
    }
}

void build_three_l1_systems(const RSCode& code, RepairPlan& plan, const std::vector<FieldElement>& u,
                          const BBasis& kernel_basis, FieldElement inv_d12, FieldElement gamma1,
                          FieldElement gamma2, const GammaSystemSolution& sol)
{
    const TowerField& field = code.field();
    const std::size_t t = field.degree();
    const FieldElement delta = plan.delta;
    const FieldElement g1 = gamma1;
    const FieldElement g2 = gamma2;
    const FieldElement g1_inv = field.inv(g1);
    const FieldElement g2_inv = field.inv(g2);
    plan.parameters.push_back({"gamma1", g1});
    plan.parameters.push_back({"gamma2", g2});
    const FieldElement scales[3] = {field.one(), g1, g2};
    for (std::size_t j = 0; j < 3; ++j) {
        plan.nodes.push_back(make_node(plan.pattern.erased[j], scales[j], u));
        plan.coefficients.push_back(
            {"xy_node" + std::to_string(j + 1), {sol.pairs[j].first, sol.pairs[j].second}});
    }

    const auto b = [&](SubElement c) { return field.embed(c); };
    // Coefficients of the (t-1) pure traces plus the t-th (mixed) coefficient.
    const auto full = [&](FieldElement target, SubElement last) {
        Coordinates c = coords_in_basis(field, field.mul(target, inv_d12), kernel_basis);
        c.push_back(last);
        return c;
    };
    const auto [x1, y1] = sol.pairs[0];
    const auto [x2, y2] = sol.pairs[1];
    const auto [x3, y3] = sol.pairs[2];
    const auto sub3 = [&](FieldElement a, FieldElement bb, FieldElement c) {
        return field.sub(field.sub(a, bb), c);
    };

    // Into node 1: node 2 uses (a_i), node 3 uses (b_i).
    const Coordinates to1_from2 =
        full(sub3(g1_inv, field.mul(b(x1), delta), field.mul(b(y1), field.mul(g1_inv, g2))), x1);
    const Coordinates to1_from3 =
        full(sub3(g2_inv, field.mul(b(y1), delta), field.mul(b(x1), field.mul(g1, g2_inv))), y1);
    // Into node 2: from node 1 and node 3.
    const Coordinates to2_from1 =
        full(sub3(g1, field.mul(b(y2), g2), field.mul(b(x2), delta)), x2);
    const Coordinates to2_from3 = full(
        sub3(field.mul(g1, g2_inv), field.mul(b(x2), g2_inv), field.mul(b(y2), delta)), y2);
    // Into node 3: from node 1 and node 2.
    const Coordinates to3_from1 =
        full(sub3(g2, field.mul(b(y3), g1), field.mul(b(x3), delta)), x3);
    const Coordinates to3_from2 = full(
        sub3(field.mul(g2, g1_inv), field.mul(b(x3), g1_inv), field.mul(b(y3), delta)), y3);

    plan.coefficients.push_back({"node2_to_node1", to1_from2});
    plan.coefficients.push_back({"node3_to_node1", to1_from3});
    plan.coefficients.push_back({"node1_to_node2", to2_from1});
    plan.coefficients.push_back({"node3_to_node2", to2_from3});
    plan.coefficients.push_back({"node1_to_node3", to3_from1});
    plan.coefficients.push_back({"node2_to_node3", to3_from2});

    plan.exchange_schedule.push_back({1, 0, 1, linear(field, to2_from1)});
    plan.exchange_schedule.push_back({1, 0, 2, linear(field, to3_from1)});
    plan.exchange_schedule.push_back({1, 1, 0, linear(field, to1_from2)});
    plan.exchange_schedule.push_back({1, 1, 2, linear(field, to3_from2)});
    plan.exchange_schedule.push_back({1, 2, 0, linear(field, to1_from3)});
    plan.exchange_schedule.push_back({1, 2, 1, linear(field, to2_from3)});

    // Replaced t-th recovery vectors.
    const FieldElement last_vec[3] = {
        field.mul(sub3(delta, field.mul(b(x1), g1), field.mul(b(y1), g2)), inv_d12),
        field.mul(sub3(field.mul(g1, delta), b(x2), field.mul(b(y2), g2)), inv_d12),
        field.mul(sub3(field.mul(g2, delta), b(x3), field.mul(b(y3), g1)), inv_d12),
    };
    const SubElement minus_one = field.sub_neg(kOne);
    for (std::size_t j = 0; j < 3; ++j) {
        NodePlan& node = plan.nodes[j];
        std::vector<FieldElement> basis =
            scaled_elements(field, scales[j], std::span(u).first(t - 1));
        basis.push_back(last_vec[j]);
        node.recovery_basis = BBasis(field, basis);
        for (std::size_t i = 0; i + 1 < t; ++i) {
            node.recovery_recipes.push_back({obtained(i)});
        }
        Recipe last{obtained(t - 1)};
        for (std::size_t k = 0; k < 3; ++k) {
            if (k != j) {
                last.push_back(received(1, k, minus_one));
            }
        }
        node.recovery_recipes.push_back(last);
    }
}

}  // namespace

RepairPlan plan_three_l1(const RSCode& code, const FailurePattern& pattern)
{
    const TowerField& field = code.field();
    const SchemeBranch branch = classify(code, pattern);
    if (branch.tag != Branch::three_l1_general && branch.tag != Branch::three_l1_t2_char_not3 &&
        branch.tag != Branch::three_l1_t2_char3) {
        throw InvalidArgument("plan_three_l1 needs a pattern with dim K_{1,2,3} = t-1");
    }
    RepairPlan plan = start_plan(code, pattern, branch);
    if (branch.tag == Branch::three_l1_t2_char3) {
        plan.delta = field.embed(SubElement{2});
    }
    if (field.trace(plan.delta) != kOne) {
        throw AlgebraError("delta does not have trace 1");
    }

    const auto& e = pattern.erased;
    const FieldElement a1 = code.point(e[0]);
    const FieldElement a2 = code.point(e[1]);
    const FieldElement a3 = code.point(e[2]);
    const FieldElement inv_d12 = field.inv(field.sub(a1, a2));
    const BSubspace k123 = triple_kernel(field, a1, a2, a3);
    std::vector<FieldElement> u = k123.basis().elements();
    u.push_back(field.mul(plan.delta, inv_d12));

    if (branch.tag == Branch::three_l1_t2_char3) {
        build_three_l1_char3(code, plan, u, inv_d12);
    } else {
        FieldElement gamma1 = choose_gamma_two(field);
        FieldElement gamma2 = gamma1;
        if (branch.tag == Branch::three_l1_general) {
            const FieldElement g1_inv = field.inv(gamma1);
            gamma2 = field.zero();
            for (std::uint32_t i = 1; i < field.size(); ++i) {
                const FieldElement x = field.element(i);
                if (field.trace(x).value == 0 && field.trace(field.mul(g1_inv, x)).value == 0) {
                    gamma2 = x;
                    break;
                }
            }
            if (gamma2.value == 0) {
                throw AlgebraError("K* cap gamma1 K is empty");
            }
        }
        std::optional<GammaSystemSolution> solution;
        try {
            solution = solve_gamma_system(field, gamma1, gamma2);
        } catch (const AlgebraError&) {
            // Fallback: exhaustive search over K* x K*.
            const auto kernel = trace_kernel(field).elements(field);
            for (FieldElement c1 : kernel) {
                for (FieldElement c2 : kernel) {
                    if (solution || c1.value == 0 || c2.value == 0) {
                        continue;
                    }
                    try {
                        solution = solve_gamma_system(field, c1, c2);
                        gamma1 = c1;
                        gamma2 = c2;
                    } catch (const AlgebraError&) {
                    }
                }
            }
            if (!solution) {
                throw AlgebraError("no (gamma1, gamma2) in K* x K* admits the one-round exchange");
            }
        }
        build_three_l1_systems(code, plan, u, k123.basis(), inv_d12, gamma1, gamma2, *solution);
    }
    plan.rounds = 1;
    finish_plan(code, plan);
    return plan;
}

RepairPlan plan_three_l2(const RSCode& code, const FailurePattern& pattern)
{
    const TowerField& field = code.field();
    const SchemeBranch branch = classify(code, pattern);
    if (branch.tag != Branch::three_l2) {
        throw InvalidArgument("plan_three_l2 needs a pattern with dim K_{1,2,3} = t-2");
    }
    const std::size_t t = field.degree();
    RepairPlan plan = start_plan(code, pattern, branch);
    const auto& e = pattern.erased;
    const FieldElement a1 = code.point(e[0]);
    const FieldElement a2 = code.point(e[1]);
    const FieldElement a3 = code.point(e[2]);
    const FieldElement d12 = field.sub(a1, a2);
    const FieldElement d23 = field.sub(a2, a3);
    const FieldElement d31 = field.sub(a3, a1);

    const BSubspace k123 = triple_kernel(field, a1, a2, a3);
    const BBasis& z = k123.basis();
    const BSubspace k12 = pair_kernel(field, a1, a2);
    const BSubspace k23 = pair_kernel(field, a2, a3);
    const BSubspace k13 = pair_kernel(field, a1, a3);

    // Element of `within` outside K_{1,2,3}, normalized so Tr(x * diff) = 1.
    const auto normalized_extension = [&](const BSubspace& within, FieldElement diff) {
        const FieldElement x = extend_basis(field, z, t - 1, &within).elements().back();
        const SubElement tr = field.trace(field.mul(x, diff));
        if (tr.value == 0) {
            throw AlgebraError("extension vector lies in the next pair kernel");
        }
        return field.scale(field.sub_inv(tr), x);
    };
    const FieldElement u_last = normalized_extension(k12, d23);
    const FieldElement v_last = normalized_extension(k23, d31);
    const FieldElement w_last = normalized_extension(k13, d12);

    std::vector<FieldElement> u_basis = z.elements();
    std::vector<FieldElement> v_basis = z.elements();
    std::vector<FieldElement> w_basis = z.elements();
    u_basis.insert(u_basis.end(), {u_last, w_last});
    v_basis.insert(v_basis.end(), {v_last, u_last});
    w_basis.insert(w_basis.end(), {w_last, v_last});

    FieldElement gamma2 = field.zero();
    for (std::uint32_t i = 1; i < field.size(); ++i) {
        const FieldElement x = field.element(i);
        if (k123.contains(field, field.div(field.inv(x), d31))) {
            gamma2 = x;
            break;
        }
    }
    if (gamma2.value == 0) {
        throw AlgebraError("no gamma2 with gamma2^-1/(a3-a1) in K_{1,2,3}");
    }
    const BSubspace kappa_space =
        intersect(field, scale_subspace(field, field.mul(gamma2, d12), k123), trace_kernel(field));
    if (kappa_space.dim() == 0) {
        throw AlgebraError("gamma2 (a1-a2) K_{1,2,3} cap K is trivial");
    }
    const FieldElement kappa = kappa_space.elements(field)[1];
    const FieldElement gamma1 = field.div(gamma2, kappa);
    plan.parameters.push_back({"gamma1", gamma1});
    plan.parameters.push_back({"gamma2", gamma2});
    plan.parameters.push_back({"kappa", kappa});

    plan.nodes.push_back(make_node(e[0], field.one(), u_basis));
    plan.nodes.push_back(make_node(e[1], gamma1, v_basis));
    plan.nodes.push_back(make_node(e[2], gamma2, w_basis));

    const SubElement minus_one = field.sub_neg(kOne);
    const std::size_t inner = t - 2;  // dim K_{1,2,3}

    // Round 1: Tr(c2/(a1-a2)) and Tr(c3/(a3-a1)) from pure traces.
    const Coordinates r1_from2 =
        coords_in_basis(field, field.inv(field.mul(gamma1, d12)), z);
    const Coordinates r1_from3 =
        coords_in_basis(field, field.inv(field.mul(gamma2, d31)), z);
    plan.coefficients.push_back({"round1_node2", r1_from2});
    plan.coefficients.push_back({"round1_node3", r1_from3});
    plan.exchange_schedule.push_back({1, 1, 0, linear(field, r1_from2)});
    plan.exchange_schedule.push_back({1, 2, 0, linear(field, r1_from3)});

    {
        NodePlan& node = plan.nodes[0];
        std::vector<FieldElement> basis = z.elements();
        basis.insert(basis.end(), {u_last, w_last});
        node.recovery_basis = BBasis(field, basis);
        for (std::size_t i = 0; i < inner; ++i) {
            node.recovery_recipes.push_back({obtained(i)});
        }
        node.recovery_recipes.push_back({obtained(inner), received(1, 2)});
        node.recovery_recipes.push_back({obtained(inner + 1), received(1, 1, minus_one)});
    }

    // Round 2: node 1 returns the interference traces of its own symbol.
    plan.exchange_schedule.push_back({2, 0, 1, {own_symbol(field.div(gamma1, d12))}});
    plan.exchange_schedule.push_back({2, 0, 2, {own_symbol(field.div(gamma2, d31))}});

    // Pure traces after round 2. Node 2: Tr(gamma1 v_i c2), i < t-1.
    std::vector<Recipe> node2_pure;
    for (std::size_t i = 0; i < inner; ++i) {
        node2_pure.push_back({obtained(i)});
    }
    node2_pure.push_back({obtained(inner), received(2, 0)});
    // Node 3: Tr(gamma2 w_i c3), i < t-2, and Tr(gamma2 v_{t-1} c3).
    std::vector<Recipe> node3_pure;
    for (std::size_t i = 0; i < inner; ++i) {
        node3_pure.push_back({obtained(i)});
    }
    const Recipe node3_w_mixed{obtained(inner)};
    const Recipe node3_v_last{obtained(inner + 1), received(2, 0, minus_one)};

    // Round 3, node 2 -> node 3: Tr(gamma2 c2/(a2-a3)); gamma2/(gamma1 (a2-a3)) in K_{2,3}.
    std::vector<FieldElement> v_head(v_basis.begin(), v_basis.end() - 1);
    const Coordinates h =
        coords_in_basis(field, field.div(gamma2, field.mul(gamma1, d23)), BBasis(field, v_head));
    Recipe to3;
    for (std::size_t i = 0; i < h.size(); ++i) {
        to3 = sum_of(field, {to3, scaled(field, node2_pure[i], h[i])});
    }
    // Node 3 -> node 2 with a from gamma1/(a2-a3) = sum a_i gamma2 w_i.
    const Coordinates a = coords_in_basis(field, field.div(gamma1, d23),
                                          BBasis(field, scaled_elements(field, gamma2, w_basis)));
    Recipe to2;
    for (std::size_t i = 0; i < inner; ++i) {
        to2 = sum_of(field, {to2, scaled(field, node3_pure[i], a[i])});
    }
    to2 = sum_of(field, {to2, scaled(field, node3_w_mixed, a[inner]),
                         scaled(field, node3_v_last, a[inner + 1])});
    plan.coefficients.push_back({"round3_node2", h});
    plan.coefficients.push_back({"a", a});
    plan.exchange_schedule.push_back({3, 1, 2, to3});
    plan.exchange_schedule.push_back({3, 2, 1, to2});

    {
        NodePlan& node = plan.nodes[1];
        std::vector<FieldElement> basis = v_head;
        basis.push_back(u_last);
        node.recovery_basis = BBasis(field, scaled_elements(field, gamma1, basis));
        node.recovery_recipes = node2_pure;
        node.recovery_recipes.push_back(sum_of(
            field, {Recipe{obtained(inner + 1), received(3, 2, minus_one)},
                    scaled(field, to3, field.sub_neg(a[inner]))}));
    }
    {
        NodePlan& node = plan.nodes[2];
        std::vector<FieldElement> basis = z.elements();
        basis.insert(basis.end(), {w_last, v_last});
        node.recovery_basis = BBasis(field, scaled_elements(field, gamma2, basis));
        node.recovery_recipes = node3_pure;
        node.recovery_recipes.push_back({obtained(inner), received(3, 1)});
        node.recovery_recipes.push_back(node3_v_last);
    }

    plan.rounds = 3;
    finish_plan(code, plan);
    return plan;
}

RepairPlan plan_repair(const RSCode& code, const FailurePattern& pattern)
{
    switch (classify(code, pattern).tag) {
    case Branch::single:
        return plan_single(code, pattern);
    case Branch::two:
        return plan_two(code, pattern);
    case Branch::three_l2:
        return plan_three_l2(code, pattern);
    default:
        return plan_three_l1(code, pattern);
    }
}

Bandwidth plan_bandwidth(const RepairPlan& plan)
{
    return {plan.helper_instructions.size(), plan.exchange_schedule.size(), plan.rounds};
}

TraceForm obtained_form(const RSCode& code, const RepairPlan& plan, std::size_t node,
                        std::size_t index)
{
    const TowerField& field = code.field();
    const NodePlan& n = plan.nodes.at(node);
    TraceForm form;
    for (const NodePlan& other : plan.nodes) {
        form.push_back(field.mul(n.check_scale,
                                 trace_quotient_eval(field, n.check_basis.at(index),
                                                     code.point(n.position),
                                                     code.point(other.position))));
    }
    return form;
}

void validate_plan(const RSCode& code, const RepairPlan& plan)
{
    const TowerField& field = code.field();
    const std::size_t t = field.degree();
    const std::size_t r = plan.nodes.size();
    if (r != plan.pattern.erased.size()) {
        throw PlanError("node count does not match the failure pattern");
    }

    // Phase 1 must follow each node's check polynomials.
    for (const HelperInstruction& ins : plan.helper_instructions) {
        const NodePlan& node = plan.nodes.at(ins.replacement);
        const FieldElement diff = field.sub(code.point(ins.helper), code.point(node.position));
        const FieldElement expected =
            field.div(field.mul(node.check_scale, code.multiplier(ins.helper)), diff);
        if (ins.mu != expected) {
            throw PlanError("helper " + std::to_string(ins.helper) +
                            " instruction does not match node " +
                            std::to_string(ins.replacement + 1) + "'s check polynomials");
        }
    }
    if (plan.helper_instructions.size() != r * plan.helpers.size()) {
        throw PlanError("every helper must serve every replacement node once");
    }

    std::vector<std::vector<TraceForm>> obtained_forms(r);
    for (std::size_t j = 0; j < r; ++j) {
        if (plan.nodes[j].check_basis.size() != t ||
            rank_over_base(field, plan.nodes[j].check_basis) != t) {
            throw PlanError("node " + std::to_string(j + 1) + " check basis is not a basis of F");
        }
        for (std::size_t i = 0; i < t; ++i) {
            obtained_forms[j].push_back(obtained_form(code, plan, j, i));
        }
    }

    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, TraceForm> message_forms;
    std::vector<std::size_t> ready_after(r);
    for (std::size_t j = 0; j < r; ++j) {
        ready_after[j] = recovery_round(plan.nodes[j]);
    }

    // Evaluates a recipe held by `node` at the start of `round` (round > rounds
    // means "after the last round").
    const auto eval = [&](std::size_t node, std::size_t round, const Recipe& recipe,
                          bool allow_own) {
        TraceForm acc(r, field.zero());
        for (const Term& term : recipe) {
            TraceForm form(r, field.zero());
            if (const auto* o = std::get_if<Obtained>(&term.source)) {
                if (o->index >= t) {
                    throw PlanError("recipe references obtained[" + std::to_string(o->index) + "]");
                }
                form = obtained_forms[node][o->index];
            } else if (const auto* rv = std::get_if<Received>(&term.source)) {
                const auto key = std::make_tuple(rv->round, rv->sender, node);
                if (rv->round >= round || !message_forms.contains(key)) {
                    throw PlanError("node " + std::to_string(node + 1) + " uses " +
                                    describe(term.source) + " before it can hold it (round " +
                                    std::to_string(round) + ")");
                }
                form = message_forms.at(key);
            } else {
                const auto& own = std::get<OwnSymbol>(term.source);
                if (!allow_own || ready_after[node] >= round) {
                    throw PlanError("node " + std::to_string(node + 1) +
                                    " uses its own symbol before recovering it (round " +
                                    std::to_string(round) + ")");
                }
                form[node] = own.theta;
            }
            add_form(field, acc, form, term.coeff);
        }
        return acc;
    };

    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    std::size_t previous_round = 0;
    for (const ExchangeMessage& msg : plan.exchange_schedule) {
        if (msg.round < 1 || msg.round > plan.rounds || msg.round < previous_round) {
            throw PlanError("message round " + std::to_string(msg.round) + " out of order");
        }
        if (msg.sender >= r || msg.receiver >= r || msg.sender == msg.receiver) {
            throw PlanError("bad message endpoints");
        }
        const auto key = std::make_tuple(msg.round, msg.sender, msg.receiver);
        if (!seen.insert(key).second) {
            throw PlanError("duplicate message in round " + std::to_string(msg.round));
        }
        previous_round = msg.round;
    }
    for (const ExchangeMessage& msg : plan.exchange_schedule) {
        message_forms[{msg.round, msg.sender, msg.receiver}] =
            eval(msg.sender, msg.round, msg.recipe, true);
    }

    for (std::size_t j = 0; j < r; ++j) {
        const NodePlan& node = plan.nodes[j];
        if (node.recovery_basis.rank() != t) {
            throw PlanError("node " + std::to_string(j + 1) + " recovery basis has rank " +
                            std::to_string(node.recovery_basis.rank()));
        }
        if (node.recovery_recipes.size() != t) {
            throw PlanError("node " + std::to_string(j + 1) + " needs t recovery recipes");
        }
        for (std::size_t i = 0; i < t; ++i) {
            const TraceForm form = eval(j, plan.rounds + 1, node.recovery_recipes[i], false);
            for (std::size_t e = 0; e < r; ++e) {
                const FieldElement expected = e == j ? node.recovery_basis[i] : field.zero();
                if (form[e] != expected) {
                    throw PlanError("node " + std::to_string(j + 1) + " recovery trace " +
                                    std::to_string(i + 1) + " has wrong coefficient on node " +
                                    std::to_string(e + 1));
                }
            }
        }
    }
}

}  // namespace rscoop
