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

#include "rscoop/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rscoop/errors.hpp"
#include "rscoop/report.hpp"

namespace rscoop {

namespace {

struct RunConfig {
    std::string field;
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::size_t> erased;
    std::vector<std::string> points;
    std::vector<std::string> messages;  // each "d,d,...,d"
    std::uint64_t seed = 1;
    std::size_t samples = 0;
    bool exhaustive = false;
    std::size_t r = 0;
    std::size_t threads = 0;
    std::string format = "table";
    std::string out;
};

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) {
        parts.push_back(item);
    }
    return parts;
}

RSCode build_code(const RunConfig& cfg)
{
    FieldPtr field = TowerField::from_spec(cfg.field);
    if (!cfg.points.empty()) {
        if (cfg.n != 0 && cfg.n != cfg.points.size()) {
            throw InvalidArgument("--n disagrees with the number of --points");
        }
        std::vector<FieldElement> pts;
        for (const std::string& p : cfg.points) {
            pts.push_back(field->parse_element(p));
        }
        RSCode code(field, std::move(pts), cfg.k);
        return code;
    }
    if (cfg.n == 0) {
        throw InvalidArgument("--n is required unless --points is given");
    }
    return RSCode::prefix(field, cfg.n, cfg.k);
}

void require_feasible(const RSCode& code)
{
    if (!code.repair_feasible()) {
        throw InvalidArgument("infeasible (n, k): repair needs n - k >= |B|^(t-1) = " +
                              std::to_string(code.required_redundancy()) + ", got n - k = " +
                              std::to_string(code.length() - code.dimension()));
    }
}

MessageSource message_source(const RunConfig& cfg, const RSCode& code, std::size_t default_samples)
{
    const int chosen = (!cfg.messages.empty() ? 1 : 0) + (cfg.exhaustive ? 1 : 0);
    if (chosen > 1) {
        throw InvalidArgument("--message and --exhaustive are mutually exclusive");
    }
    if (!cfg.messages.empty()) {
        std::vector<Message> list;
        for (const std::string& text : cfg.messages) {
            Message msg;
            for (const std::string& digit : split(text, ',')) {
                msg.coeffs.push_back(code.field().parse_element(digit));
            }
            list.push_back(std::move(msg));
        }
        return MessageSource::from_list(std::move(list));
    }
    if (cfg.exhaustive) {
        return MessageSource::all_messages();
    }
    return MessageSource::from_seed(cfg.seed, cfg.samples ? cfg.samples : default_samples);
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text)
{
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
        throw InvalidArgument("cannot open --out " + cfg.out);
    }
    file << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_field_info(const RunConfig& cfg, std::ostream& out)
{
    FieldPtr field = TowerField::from_spec(cfg.field);
    if (cfg.format == "json") {
        emit(cfg, out, dump(field_info_json(*field)));
    } else if (cfg.format == "csv") {
        const Json j = field_info_json(*field);
        std::ostringstream os;
        os << "field,p,s,t,base_modulus,modulus,kernel_size,delta,gamma\n"
           << field->spec() << ',' << j["p"] << ',' << j["s"] << ',' << j["t"] << ','
           << j["base_modulus"].get<std::string>() << ',' << j["modulus"].get<std::string>() << ','
           << j["kernel_size"] << ',' << j["delta"].get<std::string>() << ','
           << j["gamma"].get<std::string>() << '\n';
        emit(cfg, out, os.str());
    } else {
        emit(cfg, out, field_info_table(*field));
    }
    return kExitOk;
}

int cmd_plan(const RunConfig& cfg, std::ostream& out)
{
    const RSCode code = build_code(cfg);
    require_feasible(code);
    const RepairPlan plan = plan_repair(code, make_pattern(code, cfg.erased));
    if (cfg.format == "json") {
        emit(cfg, out, dump(plan_json(code, plan)));
    } else if (cfg.format == "csv") {
        const Bandwidth bw = plan_bandwidth(plan);
        std::ostringstream os;
        os << "pattern,branch,phase1_subsymbols,phase2_subsymbols,rounds\n";
        for (std::size_t i = 0; i < cfg.erased.size(); ++i) {
            os << (i ? ";" : "") << plan.pattern.erased[i];
        }
        os << ',' << branch_name(plan.branch.tag) << ',' << bw.phase1 << ',' << bw.phase2 << ','
           << bw.rounds << '\n';
        emit(cfg, out, os.str());
    } else {
        emit(cfg, out, plan_table(code, plan));
    }
    return kExitOk;
}

int cmd_repair(const RunConfig& cfg, std::ostream& out)
{
    const RSCode code = build_code(cfg);
    require_feasible(code);
    const RepairPlan plan = plan_repair(code, make_pattern(code, cfg.erased));
    const std::vector<Message> messages = message_source(cfg, code, 1).generate(code);
    std::vector<RepairRun> runs;
    bool ok = true;
    for (std::size_t i = 0; i < messages.size(); ++i) {
        const Codeword word = code.encode(messages[i]);
        Transcript transcript = run_repair(code, word, plan);
        OracleReport oracle = verify_against_oracle(code, word, transcript);
        ok = ok && oracle.all_equal;
        runs.push_back({i, std::move(transcript), std::move(oracle)});
    }
    if (cfg.format == "json") {
        emit(cfg, out, dump(repair_json(code, plan, runs)));
    } else if (cfg.format == "csv") {
        emit(cfg, out, repair_csv(plan, runs));
    } else {
        emit(cfg, out, repair_table(code, plan, runs));
    }
    return ok ? kExitOk : kExitMismatch;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out)
{
    const RSCode code = build_code(cfg);
    require_feasible(code);
    const SweepReport report = sweep(code, cfg.r, message_source(cfg, code, 100), cfg.threads);
    if (cfg.format == "json") {
        emit(cfg, out, dump(sweep_json(code, report)));
    } else if (cfg.format == "csv") {
        emit(cfg, out, sweep_csv(report));
    } else {
        emit(cfg, out, sweep_table(code, report));
    }
    if (report.failures > 0) {
        return kExitMismatch;
    }
    return report.unsupported > 0 ? kExitUnsupported : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cooperative trace repair for Reed-Solomon codes over tower fields", "rscoop"};
    app.require_subcommand(1);
    RunConfig cfg;
    const std::vector<std::string> formats{"table", "json", "csv"};

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--field", cfg.field, "Field spec, e.g. gf(2^4)/gf(2)")->required();
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember(formats));
        sub->add_option("--out", cfg.out, "Write output to PATH");
    };
    auto add_code = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "Code length (first n field elements)");
        sub->add_option("--k", cfg.k, "Code dimension")->required();
        sub->add_option("--points", cfg.points, "Explicit evaluation set")->delimiter(',');
    };
    auto add_messages = [&](CLI::App* sub) {
        sub->add_option("--message", cfg.messages,
                        "Message coefficients d0,d1,...,d(k-1); repeat for more messages");
        sub->add_option("--seed", cfg.seed, "Seed for pseudorandom messages");
        sub->add_option("--samples", cfg.samples, "Number of pseudorandom messages");
        sub->add_flag("--exhaustive", cfg.exhaustive, "Every message in F^k");
    };

    CLI::App* info = app.add_subcommand("field-info", "Print the tower, moduli and parameters");
    add_common(info);

    CLI::App* plan = app.add_subcommand("plan", "Print a repair plan without running it");
    add_common(plan);
    add_code(plan);
    plan->add_option("--erased", cfg.erased, "Erased indices i,j[,m]")
        ->required()
        ->delimiter(',');

    CLI::App* repair = app.add_subcommand("repair", "Run a repair and verify it");
    add_common(repair);
    add_code(repair);
    add_messages(repair);
    repair->add_option("--erased", cfg.erased, "Erased indices i,j[,m]")
        ->required()
        ->delimiter(',');

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Repair every pattern of r erasures");
    add_common(sweep_cmd);
    add_code(sweep_cmd);
    add_messages(sweep_cmd);
    sweep_cmd->add_option("--r", cfg.r, "Erasure count (1, 2 or 3)")->required();
    sweep_cmd->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (info->parsed()) {
            return cmd_field_info(cfg, out);
        }
        if (plan->parsed()) {
            return cmd_plan(cfg, out);
        }
        if (repair->parsed()) {
            return cmd_repair(cfg, out);
        }
        return cmd_sweep(cfg, out);
    } catch (const UnsupportedPattern& e) {
        err << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
}

}  // namespace rscoop
