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

#include "rscoop/simnet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "rscoop/errors.hpp"

namespace rscoop {

void BandwidthLedger::record(const LedgerEntry& entry)
{
    entries_.push_back(entry);
    rounds_ = std::max(rounds_, entry.round);
}

std::size_t BandwidthLedger::phase_total(int phase) const
{
    std::size_t total = 0;
    for (const LedgerEntry& e : entries_) {
        if (e.phase == phase) {
            total += e.subsymbols;
        }
    }
    return total;
}

namespace {

std::string edge(std::size_t node, const TermSource& source, std::size_t round)
{
    std::string what;
    if (const auto* r = std::get_if<Received>(&source)) {
        what = "round-" + std::to_string(r->round) + " message from node " +
               std::to_string(r->sender + 1);
    } else if (std::holds_alternative<OwnSymbol>(source)) {
        what = "its own symbol";
    } else {
        what = "obtained subsymbol " + std::to_string(std::get<Obtained>(source).index);
    }
    return "node " + std::to_string(node + 1) + " needs " + what + " in round " +
           std::to_string(round) + " but does not hold it";
}

// Value of a recipe held by node `j` during `round`. Only data from earlier
// rounds is visible.
SubElement evaluate_recipe(const RSCode& code, const std::vector<NodeState>& nodes, std::size_t j,
                           std::size_t round, const Recipe& recipe)
{
    const TowerField& field = code.field();
    const NodeState& node = nodes[j];
    SubElement acc{0};
    for (const Term& term : recipe) {
        SubElement value{0};
        if (const auto* o = std::get_if<Obtained>(&term.source)) {
            if (o->index >= node.obtained.size()) {
                throw PlanError(edge(j, term.source, round));
            }
            value = node.obtained[o->index];
        } else if (const auto* r = std::get_if<Received>(&term.source)) {
            auto it = node.inbox.find({r->round, r->sender});
            if (r->round >= round || it == node.inbox.end()) {
                throw PlanError(edge(j, term.source, round));
            }
            value = it->second;
        } else {
            const auto& own = std::get<OwnSymbol>(term.source);
            if (!node.stored || !node.recovered_at || *node.recovered_at >= round) {
                throw PlanError(edge(j, term.source, round));
            }
            const FieldElement scaled = field.mul(code.multiplier(node.index), *node.stored);
            value = field.trace(field.mul(own.theta, scaled));
        }
        acc = field.sub_add(acc, field.sub_mul(term.coeff, value));
    }
    return acc;
}

bool recipes_ready(const NodeState& node, const NodePlan& plan)
{
    for (const Recipe& recipe : plan.recovery_recipes) {
        for (const Term& term : recipe) {
            if (const auto* r = std::get_if<Received>(&term.source)) {
                if (!node.inbox.contains({r->round, r->sender})) {
                    return false;
                }
            } else if (std::holds_alternative<OwnSymbol>(term.source)) {
                return false;
            }
        }
    }
    return true;
}

FieldElement recover_symbol(const RSCode& code, const std::vector<NodeState>& nodes,
                            std::size_t j, const NodePlan& plan, std::size_t after_round)
{
    std::vector<SubElement> traces;
    for (const Recipe& recipe : plan.recovery_recipes) {
        traces.push_back(evaluate_recipe(code, nodes, j, after_round + 1, recipe));
    }
    const FieldElement scaled = recover_from_traces(code.field(), plan.recovery_basis, traces);
    return code.field().div(scaled, code.multiplier(plan.position));
}

void try_recover(const RSCode& code, std::vector<NodeState>& nodes, const RepairPlan& plan,
                 std::size_t after_round)
{
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!nodes[j].stored && recipes_ready(nodes[j], plan.nodes[j])) {
            nodes[j].stored = recover_symbol(code, nodes, j, plan.nodes[j], after_round);
            nodes[j].recovered_at = after_round;
        }
    }
}

std::vector<NodeState> phase_one(const RSCode& code, const RepairPlan& plan,
                                 const std::vector<SubElement>& downloads_flat)
{
    const TowerField& field = code.field();
    std::vector<NodeState> nodes;
    for (const NodePlan& np : plan.nodes) {
        NodeState state;
        state.index = np.position;
        state.downloads.assign(plan.helpers.size(), SubElement{0});
        nodes.push_back(std::move(state));
    }
    std::map<std::size_t, std::size_t> helper_slot;
    for (std::size_t h = 0; h < plan.helpers.size(); ++h) {
        helper_slot[plan.helpers[h]] = h;
    }
    for (std::size_t i = 0; i < plan.helper_instructions.size(); ++i) {
        const HelperInstruction& ins = plan.helper_instructions[i];
        nodes.at(ins.replacement).downloads.at(helper_slot.at(ins.helper)) = downloads_flat[i];
    }
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const NodePlan& np = plan.nodes[j];
        for (const auto& row : np.obtain_coeffs) {
            SubElement acc{0};
            for (std::size_t h = 0; h < row.size(); ++h) {
                acc = field.sub_add(acc, field.sub_mul(row[h], nodes[j].downloads[h]));
            }
            nodes[j].obtained.push_back(acc);
        }
    }
    return nodes;
}

}  // namespace

Transcript run_repair(const RSCode& code, const Codeword& codeword, const RepairPlan& plan)
{
    const TowerField& field = code.field();
    if (codeword.symbols.size() != code.length()) {
        throw InvalidArgument("codeword length does not match the code");
    }
    for (const NodePlan& np : plan.nodes) {
        if (np.position >= code.length()) {
            throw InvalidArgument("plan does not fit this code");
        }
    }

    Transcript transcript;

    // Phase 1: each helper answers from its own symbol only.
    std::vector<SubElement> downloads;
    for (const HelperInstruction& ins : plan.helper_instructions) {
        const SubElement value = field.trace(field.mul(ins.mu, codeword.symbols.at(ins.helper)));
        const std::size_t receiver = plan.nodes.at(ins.replacement).position;
        downloads.push_back(value);
        transcript.ledger.record({1, 0, ins.helper, receiver, 1});
        transcript.messages.push_back({1, 0, ins.helper, receiver, value});
    }
    std::vector<NodeState> nodes = phase_one(code, plan, downloads);
    try_recover(code, nodes, plan, 0);

    // Phase 2: compute all sends from pre-round state, then deliver.
    for (std::size_t round = 1; round <= plan.rounds; ++round) {
        std::vector<std::pair<const ExchangeMessage*, SubElement>> outgoing;
        for (const ExchangeMessage& msg : plan.exchange_schedule) {
            if (msg.round == round) {
                outgoing.emplace_back(&msg, evaluate_recipe(code, nodes, msg.sender, round, msg.recipe));
            }
        }
        for (const auto& [msg, value] : outgoing) {
            nodes.at(msg->receiver).inbox[{round, msg->sender}] = value;
            const std::size_t from = plan.nodes[msg->sender].position;
            const std::size_t to = plan.nodes[msg->receiver].position;
            transcript.ledger.record({2, round, from, to, 1});
            transcript.messages.push_back({2, round, from, to, value});
        }
        try_recover(code, nodes, plan, round);
    }

    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (!nodes[j].stored) {
            throw PlanError("node " + std::to_string(j + 1) + " did not recover its symbol");
        }
        transcript.recovered.emplace_back(nodes[j].index, *nodes[j].stored);
    }
    std::sort(transcript.recovered.begin(), transcript.recovered.end());
    if (transcript.ledger.totals() != plan_bandwidth(plan)) {
        throw PlanError("executed bandwidth differs from the plan's static count");
    }
    return transcript;
}

std::vector<std::pair<std::size_t, FieldElement>> replay_recovery(const RSCode& code,
                                                                  const RepairPlan& plan,
                                                                  const Transcript& transcript)
{
    std::vector<SubElement> downloads;
    std::map<std::size_t, std::size_t> local;
    for (std::size_t j = 0; j < plan.nodes.size(); ++j) {
        local[plan.nodes[j].position] = j;
    }
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t, SubElement>> exchanged;
    for (const SentSubsymbol& m : transcript.messages) {
        if (m.phase == 1) {
            downloads.push_back(m.value);
        } else {
            exchanged.emplace_back(local.at(m.receiver), m.round, local.at(m.sender), m.value);
        }
    }
    if (downloads.size() != plan.helper_instructions.size()) {
        throw InvalidArgument("transcript does not match the plan");
    }
    std::vector<NodeState> nodes = phase_one(code, plan, downloads);
    for (const auto& [receiver, round, sender, value] : exchanged) {
        nodes.at(receiver).inbox[{round, sender}] = value;
    }
    std::vector<std::pair<std::size_t, FieldElement>> out;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out.emplace_back(nodes[j].index,
                         recover_symbol(code, nodes, j, plan.nodes[j], plan.rounds));
    }
    std::sort(out.begin(), out.end());
    return out;
}

OracleReport verify_against_oracle(const RSCode& code, const Codeword& codeword,
                                   const Transcript& transcript)
{
    const TowerField& field = code.field();
    std::vector<std::size_t> erased;
    for (const auto& [index, value] : transcript.recovered) {
        erased.push_back(index);
    }
    std::vector<std::size_t> positions;
    std::vector<FieldElement> values;
    for (std::size_t i = 0; i < code.length() && positions.size() < code.dimension(); ++i) {
        if (std::find(erased.begin(), erased.end(), i) == erased.end()) {
            positions.push_back(i);
            values.push_back(codeword.symbols.at(i));
        }
    }
    const Message decoded = code.lagrange_decode(positions, values);

    OracleReport report;
    report.naive_per_node = code.dimension() * field.degree();
    report.naive_total = report.naive_per_node * erased.size();
    for (const auto& [index, value] : transcript.recovered) {
        const FieldElement expected = evaluate(field, decoded.coeffs, code.point(index));
        report.symbols.push_back({index, value, expected, value == expected});
        report.all_equal = report.all_equal && value == expected;
    }
    return report;
}

double bits_per_subsymbol(const TowerField& field)
{
    return field.base_degree() * std::log2(static_cast<double>(field.characteristic()));
}

MessageSource MessageSource::from_list(std::vector<Message> messages)
{
    MessageSource src;
    src.kind_ = Kind::explicit_list;
    src.count_ = messages.size();
    src.list_ = std::move(messages);
    return src;
}

MessageSource MessageSource::from_seed(std::uint64_t seed, std::size_t count)
{
    MessageSource src;
    src.kind_ = Kind::seeded;
    src.seed_ = seed;
    src.count_ = count;
    return src;
}

MessageSource MessageSource::all_messages()
{
    MessageSource src;
    src.kind_ = Kind::exhaustive;
    return src;
}

std::vector<Message> MessageSource::generate(const RSCode& code, std::size_t cap) const
{
    const TowerField& field = code.field();
    const std::size_t k = code.dimension();
    std::vector<Message> out;
    switch (kind_) {
    case Kind::explicit_list:
        for (const Message& m : list_) {
            if (m.coeffs.size() != k) {
                throw InvalidArgument("message has " + std::to_string(m.coeffs.size()) +
                                      " symbols, expected k=" + std::to_string(k));
            }
            for (FieldElement x : m.coeffs) {
                if (x.value >= field.size()) {
                    throw InvalidArgument("message symbol outside the field");
                }
            }
        }
        return list_;
    case Kind::seeded: {
        // Raw engine output keeps the stream identical across standard libraries.
        std::mt19937_64 rng(seed_);
        for (std::size_t m = 0; m < count_; ++m) {
            Message msg;
            for (std::size_t i = 0; i < k; ++i) {
                msg.coeffs.push_back(FieldElement{static_cast<std::uint32_t>(rng() % field.size())});
            }
            out.push_back(std::move(msg));
        }
        return out;
    }
    case Kind::exhaustive: {
        double total = std::pow(static_cast<double>(field.size()), static_cast<double>(k));
        if (total > static_cast<double>(cap)) {
            throw InvalidArgument("exhaustive message set too large (|F|^k > " +
                                  std::to_string(cap) + ")");
        }
        std::vector<std::uint32_t> digits(k, 0);
        for (std::size_t m = 0; m < static_cast<std::size_t>(total); ++m) {
            Message msg;
            for (std::uint32_t d : digits) {
                msg.coeffs.push_back(FieldElement{d});
            }
            out.push_back(std::move(msg));
            for (std::size_t i = 0; i < k; ++i) {
                if (++digits[i] < field.size()) {
                    break;
                }
                digits[i] = 0;
            }
        }
        return out;
    }
    }
    return out;
}

namespace {

SweepRow sweep_one(const RSCode& code, const std::vector<std::size_t>& erased,
                   const std::vector<Message>& messages)
{
    SweepRow row;
    row.pattern = erased;
    row.messages = messages.size();
    row.naive_subsymbols = erased.size() * code.dimension() * code.field().degree();
    try {
        const FailurePattern pattern = make_pattern(code, erased);
        const RepairPlan plan = plan_repair(code, pattern);
        row.branch = branch_name(plan.branch.tag);
        row.kernel_dim = plan.branch.kernel_dim;
        row.bandwidth = plan_bandwidth(plan);
        for (const Message& msg : messages) {
            const Codeword word = code.encode(msg);
            const Transcript transcript = run_repair(code, word, plan);
            if (verify_against_oracle(code, word, transcript).all_equal &&
                transcript.ledger.totals() == row.bandwidth) {
                ++row.recovered_ok;
            }
        }
        row.ok = row.recovered_ok == row.messages;
        if (!row.ok) {
            row.diagnostic = std::to_string(row.messages - row.recovered_ok) + " mismatches";
        }
    } catch (const UnsupportedPattern& e) {
        row.branch = "unsupported";
        row.kernel_dim = e.l;
        row.diagnostic = e.what();
    } catch (const std::exception& e) {
        row.branch = "error";
        row.diagnostic = e.what();
    }
    return row;
}

}  // namespace

SweepReport sweep_patterns(const RSCode& code, const std::vector<std::vector<std::size_t>>& patterns,
                           const MessageSource& messages, std::size_t threads)
{
    if (!code.repair_feasible()) {
        throw InvalidArgument("repair needs n-k >= |B|^(t-1) = " +
                              std::to_string(code.required_redundancy()));
    }
    const std::vector<Message> batch = messages.generate(code);
    SweepReport report;
    report.erasures = patterns.empty() ? 0 : patterns.front().size();
    report.rows.resize(patterns.size());

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, std::max<std::size_t>(1, patterns.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < patterns.size(); i = next++) {
            report.rows[i] = sweep_one(code, patterns[i], batch);
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    worker();
    for (std::thread& th : pool) {
        th.join();
    }

    for (const SweepRow& row : report.rows) {
        ++report.branch_counts[row.branch];
        if (row.ok) {
            ++report.ok_count;
        } else if (row.branch == "unsupported") {
            ++report.unsupported;
        } else {
            ++report.failures;
        }
    }
    return report;
}

SweepReport sweep(const RSCode& code, std::size_t r, const MessageSource& messages,
                  std::size_t threads)
{
    if (r < 1 || r > 3) {
        throw InvalidArgument("sweep supports r in {1, 2, 3}");
    }
    const std::size_t n = code.length();
    if (r > n - code.dimension()) {
        throw InvalidArgument("r=" + std::to_string(r) + " leaves fewer than k surviving symbols");
    }
    std::vector<std::vector<std::size_t>> patterns;
    std::vector<std::size_t> current(r);
    for (std::size_t i = 0; i < r; ++i) {
        current[i] = i;
    }
    if (r <= n) {
        while (true) {
            patterns.push_back(current);
            std::size_t i = r;
            while (i > 0 && current[i - 1] == n - r + i - 1) {
                --i;
            }
            if (i == 0) {
                break;
            }
            ++current[i - 1];
            for (std::size_t j = i; j < r; ++j) {
                current[j] = current[j - 1] + 1;
            }
        }
    }
    SweepReport report = sweep_patterns(code, patterns, messages, threads);
    report.erasures = r;
    return report;
}

}  // namespace rscoop
