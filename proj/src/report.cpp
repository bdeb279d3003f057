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

#include "rscoop/report.hpp"

#include <iomanip>
#include <map>
#include <sstream>
#include <tuple>

namespace rscoop {

namespace {

std::string join(const std::vector<std::size_t>& xs, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += std::to_string(xs[i]);
    }
    return out;
}

Json elements_json(const TowerField& field, const std::vector<FieldElement>& xs)
{
    Json arr = Json::array();
    for (FieldElement x : xs) {
        arr.push_back(field.format(x));
    }
    return arr;
}

Json coords_json(const TowerField& field, const std::vector<SubElement>& xs)
{
    Json arr = Json::array();
    for (SubElement x : xs) {
        arr.push_back(field.format(x));
    }
    return arr;
}

Json recipe_json(const TowerField& field, const Recipe& recipe)
{
    Json arr = Json::array();
    for (const Term& term : recipe) {
        Json t;
        if (const auto* o = std::get_if<Obtained>(&term.source)) {
            t["source"] = "obtained";
            t["index"] = o->index;
        } else if (const auto* r = std::get_if<Received>(&term.source)) {
            t["source"] = "received";
            t["round"] = r->round;
            t["from"] = r->sender + 1;
        } else {
            t["source"] = "own";
            t["theta"] = field.format(std::get<OwnSymbol>(term.source).theta);
        }
        t["coeff"] = field.format(term.coeff);
        arr.push_back(std::move(t));
    }
    return arr;
}

std::string recipe_text(const TowerField& field, const Recipe& recipe)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < recipe.size(); ++i) {
        const Term& term = recipe[i];
        if (i) {
            os << " + ";
        }
        if (term.coeff.value != 1) {
            os << field.format(term.coeff) << "*";
        }
        if (const auto* o = std::get_if<Obtained>(&term.source)) {
            os << "S" << o->index + 1;
        } else if (const auto* r = std::get_if<Received>(&term.source)) {
            os << "M" << r->round << "[node " << r->sender + 1 << "]";
        } else {
            os << "Tr(" << field.format(std::get<OwnSymbol>(term.source).theta) << "*c)";
        }
    }
    return recipe.empty() ? "0" : os.str();
}

Json header(const RSCode& code)
{
    Json j;
    j["schema"] = kReportSchema;
    j["field"] = code.field().spec();
    j["n"] = code.length();
    j["k"] = code.dimension();
    return j;
}

Json bandwidth_json(const Bandwidth& bw)
{
    Json j;
    j["phase1"] = bw.phase1;
    j["phase2"] = bw.phase2;
    j["rounds"] = bw.rounds;
    return j;
}

// Per-link volume if every link of the phase carries the same amount, else null.
Json uniform_link_volume(const BandwidthLedger& ledger, int phase)
{
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> links;
    for (const LedgerEntry& e : ledger.entries()) {
        if (e.phase == phase) {
            links[{e.round, e.sender, e.receiver}] += e.subsymbols;
        }
    }
    if (links.empty()) {
        return nullptr;
    }
    const std::size_t first = links.begin()->second;
    for (const auto& [link, volume] : links) {
        if (volume != first) {
            return nullptr;
        }
    }
    return first;
}

std::vector<FieldElement> kernel_units(const TowerField& field, std::size_t limit)
{
    std::vector<FieldElement> out;
    for (std::uint32_t i = 1; i < field.size() && out.size() < limit; ++i) {
        if (field.trace(field.element(i)).value == 0) {
            out.push_back(field.element(i));
        }
    }
    return out;
}

}  // namespace

std::string polynomial_string(const TowerField& field, const std::vector<SubElement>& coeffs)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        const SubElement c = coeffs[i];
        if (c.value == 0) {
            continue;
        }
        if (!first) {
            os << " + ";
        }
        first = false;
        const std::string digits =
            field.base_degree() > 1 ? "[" + field.format(c) + "]" : field.format(c);
        if (i == 0) {
            os << digits;
            continue;
        }
        if (c.value != 1) {
            os << digits;
        }
        os << "x";
        if (i > 1) {
            os << "^" << i;
        }
    }
    return first ? "0" : os.str();
}

std::string prime_polynomial_string(const std::vector<std::uint32_t>& coeffs)
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        if (coeffs[i] == 0) {
            continue;
        }
        if (!first) {
            os << " + ";
        }
        first = false;
        if (i == 0 || coeffs[i] != 1) {
            os << coeffs[i];
        }
        if (i > 0) {
            os << "x";
            if (i > 1) {
                os << "^" << i;
            }
        }
    }
    return first ? "0" : os.str();
}

Json field_info_json(const TowerField& field)
{
    Json j;
    j["schema"] = kReportSchema;
    j["field"] = field.spec();
    j["p"] = field.characteristic();
    j["s"] = field.base_degree();
    j["t"] = field.degree();
    j["base_size"] = field.base_size();
    j["size"] = field.size();
    j["base_modulus"] = prime_polynomial_string(field.base_modulus());
    j["modulus"] = polynomial_string(field, field.modulus());
    const BSubspace kernel = trace_kernel(field);
    j["kernel_size"] = field.size() / field.base_size();
    j["kernel_basis"] = elements_json(field, kernel.basis().elements());
    j["delta"] = field.format(choose_delta(field));
    if (field.characteristic() == 3 && field.degree() == 2) {
        j["delta_char3"] = field.format(field.embed(SubElement{2}));
    }
    j["gamma"] = field.format(choose_gamma_two(field));
    j["gamma_candidates"] = elements_json(field, kernel_units(field, 4));
    return j;
}

Json plan_json(const RSCode& code, const RepairPlan& plan)
{
    const TowerField& field = code.field();
    Json j = header(code);
    j["erased"] = plan.pattern.erased;
    j["branch"] = branch_name(plan.branch.tag);
    j["l"] = plan.branch.kernel_dim ? Json(*plan.branch.kernel_dim) : Json(nullptr);
    j["delta"] = field.format(plan.delta);
    Json params = Json::object();
    for (const NamedElement& p : plan.parameters) {
        params[p.name] = field.format(p.value);
    }
    j["parameters"] = params;
    Json coeffs = Json::object();
    for (const NamedCoefficients& c : plan.coefficients) {
        coeffs[c.name] = coords_json(field, c.values);
    }
    j["coefficients"] = coeffs;
    j["bandwidth"] = bandwidth_json(plan_bandwidth(plan));

    Json nodes = Json::array();
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        const NodePlan& node = plan.nodes[i];
        Json n;
        n["node"] = i + 1;
        n["position"] = node.position;
        n["check_scale"] = field.format(node.check_scale);
        n["check_basis"] = elements_json(field, node.check_basis);
        n["recovery_basis"] = elements_json(field, node.recovery_basis.elements());
        Json recipes = Json::array();
        for (const Recipe& r : node.recovery_recipes) {
            recipes.push_back(recipe_json(field, r));
        }
        n["recovery_recipes"] = recipes;
        nodes.push_back(std::move(n));
    }
    j["nodes"] = nodes;
    j["helpers"] = plan.helpers;

    Json helpers = Json::array();
    for (const HelperInstruction& ins : plan.helper_instructions) {
        Json h;
        h["helper"] = ins.helper;
        h["node"] = ins.replacement + 1;
        h["mu"] = field.format(ins.mu);
        helpers.push_back(std::move(h));
    }
    j["helper_instructions"] = helpers;

    Json schedule = Json::array();
    for (const ExchangeMessage& msg : plan.exchange_schedule) {
        Json m;
        m["round"] = msg.round;
        m["sender"] = msg.sender + 1;
        m["receiver"] = msg.receiver + 1;
        m["recipe"] = recipe_json(field, msg.recipe);
        schedule.push_back(std::move(m));
    }
    j["exchange_schedule"] = schedule;
    return j;
}

Json repair_json(const RSCode& code, const RepairPlan& plan, const std::vector<RepairRun>& runs)
{
    const TowerField& field = code.field();
    Json j = header(code);
    j["erased"] = plan.pattern.erased;
    j["branch"] = branch_name(plan.branch.tag);
    j["bandwidth"] = bandwidth_json(plan_bandwidth(plan));
    j["bits_per_subsymbol"] = bits_per_subsymbol(field);
    bool all_ok = true;
    Json arr = Json::array();
    for (const RepairRun& run : runs) {
        Json r;
        r["message"] = run.message_index;
        r["ok"] = run.oracle.all_equal;
        all_ok = all_ok && run.oracle.all_equal;
        r["ledger"] = bandwidth_json(run.transcript.ledger.totals());
        r["per_link"] = {{"phase1", uniform_link_volume(run.transcript.ledger, 1)},
                         {"phase2", uniform_link_volume(run.transcript.ledger, 2)}};
        r["naive_subsymbols"] = run.oracle.naive_total;
        Json symbols = Json::array();
        for (const SymbolCheck& s : run.oracle.symbols) {
            Json e;
            e["index"] = s.index;
            e["recovered"] = field.format(s.recovered);
            e["expected"] = field.format(s.expected);
            e["equal"] = s.equal;
            symbols.push_back(std::move(e));
        }
        r["symbols"] = symbols;
        Json downloads = Json::array();
        Json exchanged = Json::array();
        for (const SentSubsymbol& m : run.transcript.messages) {
            if (m.phase == 1) {
                downloads.push_back(field.format(m.value));
            } else {
                Json e;
                e["round"] = m.round;
                e["sender"] = m.sender;
                e["receiver"] = m.receiver;
                e["value"] = field.format(m.value);
                exchanged.push_back(std::move(e));
            }
        }
        r["phase1_values"] = downloads;
        r["exchanged"] = exchanged;
        arr.push_back(std::move(r));
    }
    j["ok"] = all_ok;
    j["runs"] = arr;
    return j;
}

Json sweep_json(const RSCode& code, const SweepReport& report)
{
    Json j = header(code);
    j["r"] = report.erasures;
    j["patterns"] = report.rows.size();
    j["ok"] = report.ok_count;
    j["unsupported"] = report.unsupported;
    j["failures"] = report.failures;
    Json counts = Json::object();
    for (const auto& [name, count] : report.branch_counts) {
        counts[name] = count;
    }
    j["branch_counts"] = counts;
    Json rows = Json::array();
    for (const SweepRow& row : report.rows) {
        Json r;
        r["pattern"] = row.pattern;
        r["branch"] = row.branch;
        r["l"] = row.kernel_dim ? Json(*row.kernel_dim) : Json(nullptr);
        r["phase1_subsymbols"] = row.bandwidth.phase1;
        r["phase2_subsymbols"] = row.bandwidth.phase2;
        r["rounds"] = row.bandwidth.rounds;
        r["messages"] = row.messages;
        r["recovered_ok"] = row.recovered_ok;
        r["ok"] = row.ok;
        r["naive_subsymbols"] = row.naive_subsymbols;
        if (!row.diagnostic.empty()) {
            r["diagnostic"] = row.diagnostic;
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;
    return j;
}

std::string sweep_csv(const SweepReport& report)
{
    std::ostringstream os;
    os << "pattern,branch,phase1_subsymbols,phase2_subsymbols,rounds,ok,naive_subsymbols\n";
    for (const SweepRow& row : report.rows) {
        os << join(row.pattern, ';') << ',' << row.branch << ',' << row.bandwidth.phase1 << ','
           << row.bandwidth.phase2 << ',' << row.bandwidth.rounds << ','
           << (row.ok ? "true" : "false") << ',' << row.naive_subsymbols << '\n';
    }
    return os.str();
}

std::string repair_csv(const RepairPlan& plan, const std::vector<RepairRun>& runs)
{
    std::ostringstream os;
    os << "pattern,branch,phase1_subsymbols,phase2_subsymbols,rounds,ok,naive_subsymbols\n";
    for (const RepairRun& run : runs) {
        const Bandwidth bw = run.transcript.ledger.totals();
        os << join(plan.pattern.erased, ';') << ',' << branch_name(plan.branch.tag) << ','
           << bw.phase1 << ',' << bw.phase2 << ',' << bw.rounds << ','
           << (run.oracle.all_equal ? "true" : "false") << ',' << run.oracle.naive_total << '\n';
    }
    return os.str();
}

std::string field_info_table(const TowerField& field)
{
    const Json j = field_info_json(field);
    std::ostringstream os;
    os << "field          " << field.spec() << '\n'
       << "p, s, t        " << field.characteristic() << ", " << field.base_degree() << ", "
       << field.degree() << '\n'
       << "|B|, |F|       " << field.base_size() << ", " << field.size() << '\n'
       << "mB             " << j["base_modulus"].get<std::string>() << '\n'
       << "mF             " << j["modulus"].get<std::string>() << '\n'
       << "|K|            " << j["kernel_size"].get<std::size_t>() << '\n'
       << "delta          " << j["delta"].get<std::string>() << '\n';
    if (j.contains("delta_char3")) {
        os << "delta (char 3) " << j["delta_char3"].get<std::string>() << '\n';
    }
    os << "gamma          " << j["gamma"].get<std::string>() << '\n' << "gamma options ";
    for (const auto& g : j["gamma_candidates"]) {
        os << ' ' << g.get<std::string>();
    }
    os << '\n';
    return os.str();
}

std::string plan_table(const RSCode& code, const RepairPlan& plan)
{
    const TowerField& field = code.field();
    const Bandwidth bw = plan_bandwidth(plan);
    std::ostringstream os;
    os << "field      " << field.spec() << "  n=" << code.length() << " k=" << code.dimension()
       << '\n'
       << "erased     " << join(plan.pattern.erased, ',') << '\n'
       << "branch     " << branch_name(plan.branch.tag);
    if (plan.branch.kernel_dim) {
        os << " (l=" << *plan.branch.kernel_dim << ")";
    }
    os << '\n' << "delta      " << field.format(plan.delta) << '\n';
    for (const NamedElement& p : plan.parameters) {
        os << std::left << std::setw(11) << p.name << field.format(p.value) << '\n';
    }
    os << "bandwidth  phase1=" << bw.phase1 << " phase2=" << bw.phase2 << " rounds=" << bw.rounds
       << '\n';
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        const NodePlan& node = plan.nodes[i];
        os << "node " << i + 1 << " (position " << node.position << ")\n  check basis   ";
        for (FieldElement x : node.check_basis) {
            os << ' ' << field.format(x);
        }
        os << "\n  recovery basis";
        for (FieldElement x : node.recovery_basis.elements()) {
            os << ' ' << field.format(x);
        }
        os << '\n';
        for (std::size_t r = 0; r < node.recovery_recipes.size(); ++r) {
            os << "  trace " << r + 1 << " = " << recipe_text(field, node.recovery_recipes[r])
               << '\n';
        }
    }
    for (const ExchangeMessage& msg : plan.exchange_schedule) {
        os << "round " << msg.round << ": node " << msg.sender + 1 << " -> node "
           << msg.receiver + 1 << "  " << recipe_text(field, msg.recipe) << '\n';
    }
    return os.str();
}

std::string repair_table(const RSCode& code, const RepairPlan& plan,
                         const std::vector<RepairRun>& runs)
{
    const TowerField& field = code.field();
    std::ostringstream os;
    os << "field " << field.spec() << "  n=" << code.length() << " k=" << code.dimension()
       << "  erased " << join(plan.pattern.erased, ',') << "  branch "
       << branch_name(plan.branch.tag) << '\n';
    std::size_t ok = 0;
    for (const RepairRun& run : runs) {
        const Bandwidth bw = run.transcript.ledger.totals();
        os << "message " << run.message_index << ": " << (run.oracle.all_equal ? "ok" : "MISMATCH")
           << "  phase1=" << bw.phase1 << " phase2=" << bw.phase2 << " rounds=" << bw.rounds
           << "  naive=" << run.oracle.naive_total;
        for (const SymbolCheck& s : run.oracle.symbols) {
            os << "  [" << s.index << "] " << field.format(s.recovered);
            if (!s.equal) {
                os << " expected " << field.format(s.expected);
            }
        }
        os << '\n';
        ok += run.oracle.all_equal ? 1 : 0;
    }
    os << ok << "/" << runs.size() << " verified\n";
    return os.str();
}

std::string sweep_table(const RSCode& code, const SweepReport& report)
{
    std::ostringstream os;
    os << "field " << code.field().spec() << "  n=" << code.length() << " k=" << code.dimension()
       << "  r=" << report.erasures << '\n'
       << "patterns " << report.rows.size() << "  ok " << report.ok_count << "  unsupported "
       << report.unsupported << "  failures " << report.failures << '\n';
    for (const auto& [name, count] : report.branch_counts) {
        os << "  " << std::left << std::setw(22) << name << count << '\n';
    }
    std::map<std::string, std::size_t> seen;
    for (const SweepRow& row : report.rows) {
        if (seen[row.branch]++ == 0) {
            os << "  e.g. " << join(row.pattern, ',') << " -> " << row.branch << "  phase1="
               << row.bandwidth.phase1 << " phase2=" << row.bandwidth.phase2
               << " rounds=" << row.bandwidth.rounds;
            if (!row.diagnostic.empty()) {
                os << "  (" << row.diagnostic << ")";
            }
            os << '\n';
        }
    }
    for (const SweepRow& row : report.rows) {
        if (!row.ok && row.branch != "unsupported") {
            os << "  FAILED " << join(row.pattern, ',') << ": " << row.diagnostic << '\n';
        }
    }
    return os.str();
}

}  // namespace rscoop
