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

// Cooperative trace repair plans for one, two and three erasures.
//
// Every scheme works on the scaled unknowns c_j = lambda_j f(alpha_j). A
// replacement node j uses t check polynomials
//     P_{j,i}(x) = g_j * Tr(b_{j,i} (x - alpha_j)) / (x - alpha_j)
// with a node scale g_j and a check basis b_{j,1..t}. Helper alpha sends
// Tr(g_j lambda_alpha f(alpha) / (alpha - alpha_j)) and node j folds those into
// its t "obtained" subsymbols
//     S_{j,i} = sum_{erased e} Tr(P_{j,i}(alpha_e) c_e).
// Phase 2 messages and recovery traces are B-linear recipes over what a node
// holds. A plan is only returned after a symbolic check that every recovery
// recipe yields Tr(zeta_i c_j) for a rank-t basis zeta.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rscoop/rscode.hpp"
#include "rscoop/sublinalg.hpp"

namespace rscoop {

struct FailurePattern {
    /// Indices into the evaluation set, strictly increasing, 1 to 3 entries.
    std::vector<std::size_t> erased;
};

/// Sorts, dedups and range-checks; throws InvalidArgument.
FailurePattern make_pattern(const RSCode& code, std::vector<std::size_t> erased);

enum class Branch {
    single,
    two,
    three_l1_general,
    three_l1_t2_char_not3,
    three_l1_t2_char3,
    three_l2,
};

const char* branch_name(Branch branch);

struct SchemeBranch {
    Branch tag = Branch::single;
    /// dim K_{1,2,3} for three erasures.
    std::optional<std::size_t> kernel_dim;
};

// Recipe terms. Node-local indices: 0..r-1 is the position in the pattern.

/// i-th obtained subsymbol S_{j,i} after Phase 1.
struct Obtained {
    std::size_t index;
};
/// Subsymbol received from `sender` in round `round` (1-based).
struct Received {
    std::size_t round;
    std::size_t sender;
};
/// Tr(theta * c_j) computed from the node's own recovered symbol.
struct OwnSymbol {
    FieldElement theta;
};

using TermSource = std::variant<Obtained, Received, OwnSymbol>;

struct Term {
    TermSource source;
    SubElement coeff;
};

using Recipe = std::vector<Term>;

struct ExchangeMessage {
    std::size_t round;
    std::size_t sender;
    std::size_t receiver;
    Recipe recipe;
};

struct HelperInstruction {
    std::size_t helper;       // index into A
    std::size_t replacement;  // node-local index
    FieldElement mu;          // helper sends Tr(mu * f(alpha_helper))
};

struct NodePlan {
    std::size_t position;  // index into A
    FieldElement check_scale;
    std::vector<FieldElement> check_basis;  // t elements (U', V' or W')
    /// obtain_coeffs[i][h]: weight of the h-th helper download in S_{j,i}.
    std::vector<std::vector<SubElement>> obtain_coeffs;
    BBasis recovery_basis;
    std::vector<Recipe> recovery_recipes;  // t recipes, recipe i -> Tr(basis_i c_j)
};

struct NamedCoefficients {
    std::string name;
    std::vector<SubElement> values;
};

struct NamedElement {
    std::string name;
    FieldElement value;
};

struct RepairPlan {
    SchemeBranch branch;
    FailurePattern pattern;
    std::vector<std::size_t> helpers;  // surviving indices, ascending
    FieldElement delta;
    std::vector<NamedElement> parameters;  // gamma, gamma1, gamma2, kappa
    std::vector<NamedCoefficients> coefficients;
    std::vector<NodePlan> nodes;
    std::vector<HelperInstruction> helper_instructions;
    std::vector<ExchangeMessage> exchange_schedule;  // sorted by round
    std::size_t rounds = 0;
};

struct Bandwidth {
    std::size_t phase1 = 0;
    std::size_t phase2 = 0;
    std::size_t rounds = 0;

    friend bool operator==(const Bandwidth&, const Bandwidth&) = default;
};

struct GammaSystemSolution {
    /// (x_i, y_i) for nodes 1..3.
    std::vector<std::pair<SubElement, SubElement>> pairs;
};

/// Throws UnsupportedPattern (l = t-2, t <= 3) or InvalidArgument (infeasible code).
SchemeBranch classify(const RSCode& code, const FailurePattern& pattern);

/// Enumeration-first element with trace 1.
FieldElement choose_delta(const TowerField& field);
/// Enumeration-first nonzero element of K.
FieldElement choose_gamma_two(const TowerField& field);

/// The three 2x2 systems of the one-round three-erasure exchange. Throws
/// AlgebraError when some node's system has no solution meeting its
/// inequality.
GammaSystemSolution solve_gamma_system(const TowerField& field, FieldElement gamma1,
                                       FieldElement gamma2);

RepairPlan plan_single(const RSCode& code, const FailurePattern& pattern);
RepairPlan plan_two(const RSCode& code, const FailurePattern& pattern);
RepairPlan plan_three_l1(const RSCode& code, const FailurePattern& pattern);
RepairPlan plan_three_l2(const RSCode& code, const FailurePattern& pattern);

/// classify + the matching plan_* builder.
RepairPlan plan_repair(const RSCode& code, const FailurePattern& pattern);

Bandwidth plan_bandwidth(const RepairPlan& plan);

/// Symbolic form of a subsymbol: sum_e Tr(form[e] * c_e).
using TraceForm = std::vector<FieldElement>;

/// Static dataflow and algebra check. Throws PlanError naming the first
/// offending edge or recipe.
void validate_plan(const RSCode& code, const RepairPlan& plan);

/// Symbolic form of S_{j,i}.
TraceForm obtained_form(const RSCode& code, const RepairPlan& plan, std::size_t node,
                        std::size_t index);

}  // namespace rscoop
