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

// Synchronous-round execution of repair plans on simulated nodes.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rscoop/repair.hpp"

namespace rscoop {

struct LedgerEntry {
    int phase;            // 1 = helper download, 2 = exchange
    std::size_t round;    // 0 in phase 1
    std::size_t sender;   // index into A
    std::size_t receiver; // index into A
    std::size_t subsymbols;
};

class BandwidthLedger {
public:
    void record(const LedgerEntry& entry);

    const std::vector<LedgerEntry>& entries() const { return entries_; }
    std::size_t phase_total(int phase) const;
    std::size_t rounds() const { return rounds_; }
    Bandwidth totals() const { return {phase_total(1), phase_total(2), rounds_}; }

private:
    std::vector<LedgerEntry> entries_;
    std::size_t rounds_ = 0;
};

struct SentSubsymbol {
    int phase;
    std::size_t round;
    std::size_t sender;
    std::size_t receiver;
    SubElement value;
};

struct Transcript {
    BandwidthLedger ledger;
    std::vector<SentSubsymbol> messages;
    /// Erased index -> recovered symbol, ascending.
    std::vector<std::pair<std::size_t, FieldElement>> recovered;
};

/// State of one replacement node during a run.
struct NodeState {
    std::size_t index;
    std::optional<FieldElement> stored;  // nullopt while erased
    std::vector<SubElement> downloads;   // one per helper, Phase 1
    std::vector<SubElement> obtained;    // S_{j,i}
    std::map<std::pair<std::size_t, std::size_t>, SubElement> inbox;  // (round, sender) -> value
    std::optional<std::size_t> recovered_at;  // round after which stored was set
};

/**
 * Runs `plan` against `codeword`. Erased positions are never read. Phase 2
 * rounds compute every send from pre-round state and then deliver all of
 * them. Throws PlanError if a recipe touches data its node does not hold.
 */
Transcript run_repair(const RSCode& code, const Codeword& codeword, const RepairPlan& plan);

/// Recomputes recovered symbols from the transcript's subsymbols alone.
std::vector<std::pair<std::size_t, FieldElement>> replay_recovery(const RSCode& code,
                                                                  const RepairPlan& plan,
                                                                  const Transcript& transcript);

struct SymbolCheck {
    std::size_t index;
    FieldElement recovered;
    FieldElement expected;
    bool equal;
};

struct OracleReport {
    std::vector<SymbolCheck> symbols;
    bool all_equal = true;
    /// Naive repair downloads k symbols of t subsymbols each, per erased node.
    std::size_t naive_per_node = 0;
    std::size_t naive_total = 0;
};

/// Decodes from the first k surviving symbols and compares each erased one.
OracleReport verify_against_oracle(const RSCode& code, const Codeword& codeword,
                                   const Transcript& transcript);

/// Bits per B-subsymbol, s * log2(p).
double bits_per_subsymbol(const TowerField& field);

class MessageSource {
public:
    enum class Kind { explicit_list, seeded, exhaustive };

    static MessageSource from_list(std::vector<Message> messages);
    static MessageSource from_seed(std::uint64_t seed, std::size_t count);
    static MessageSource all_messages();

    Kind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t count() const { return count_; }

    /// Throws InvalidArgument when an explicit message has the wrong length or
    /// the exhaustive set exceeds `cap` messages.
    std::vector<Message> generate(const RSCode& code, std::size_t cap = 1u << 20) const;

private:
    Kind kind_ = Kind::seeded;
    std::vector<Message> list_;
    std::uint64_t seed_ = 0;
    std::size_t count_ = 0;
};

struct SweepRow {
    std::vector<std::size_t> pattern;
    std::string branch;  // branch name, "unsupported" or "error"
    std::optional<std::size_t> kernel_dim;
    Bandwidth bandwidth;
    std::size_t messages = 0;
    std::size_t recovered_ok = 0;
    bool ok = false;
    std::size_t naive_subsymbols = 0;
    std::string diagnostic;
};

struct SweepReport {
    std::size_t erasures = 0;
    std::vector<SweepRow> rows;
    std::map<std::string, std::size_t> branch_counts;
    std::size_t ok_count = 0;
    std::size_t unsupported = 0;
    std::size_t failures = 0;
};

/// All size-r patterns in lexicographic order. Unsupported patterns are
/// tallied. `threads` = 0 picks the hardware concurrency.
SweepReport sweep(const RSCode& code, std::size_t r, const MessageSource& messages,
                  std::size_t threads = 0);

/// Sweep over an explicit pattern list.
SweepReport sweep_patterns(const RSCode& code, const std::vector<std::vector<std::size_t>>& patterns,
                           const MessageSource& messages, std::size_t threads = 0);

}  // namespace rscoop
