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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rscoop/cli.hpp"

using namespace rscoop;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string kGF16 = "gf(2^4)/gf(2)";

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("field-info")
    {
        const Run t = cli({"field-info", "--field", kGF16});
        CHECK(t.code == kExitOk);
        CHECK(t.out.find("x^4 + x + 1") != std::string::npos);

        const Run j = cli({"field-info", "--field", "gf(3^2)/gf(3)", "--format", "json"});
        REQUIRE(j.code == kExitOk);
        const auto doc = nlohmann::json::parse(j.out);
        CHECK(doc["schema"] == 1);
        CHECK(doc["delta"] == "02");
        CHECK(doc["delta_char3"] == "02");
        CHECK(doc["kernel_size"] == 3);

        CHECK(cli({"field-info", "--field", "gf(2^4"}).code == kExitInvalid);
        CHECK(cli({"field-info", "--field", "gf(4^3)/gf(4)"}).code == kExitInvalid);
        CHECK(cli({"field-info"}).code == kExitInvalid);
        CHECK(cli({"bogus"}).code == kExitInvalid);
        CHECK(cli({"--help"}).code == kExitOk);
    }

    TEST_CASE("repair")
    {
        const Run r = cli({"repair", "--field", kGF16, "--n", "16", "--k", "8", "--erased", "0,1",
                           "--seed", "7", "--format", "json"});
        REQUIRE(r.code == kExitOk);
        const auto doc = nlohmann::json::parse(r.out);
        CHECK(doc["ok"] == true);
        CHECK(doc["bandwidth"]["phase1"] == 28);
        CHECK(doc["bandwidth"]["phase2"] == 2);
        CHECK(doc["bandwidth"]["rounds"] == 1);
        CHECK(doc["runs"][0]["per_link"]["phase1"] == 1);
        CHECK(doc["runs"][0]["per_link"]["phase2"] == 1);

        const Run m = cli({"repair", "--field", "gf(2^2)/gf(2)", "--n", "4", "--k", "2",
                           "--erased", "3", "--message", "01,10", "--message", "11,00"});
        CHECK(m.code == kExitOk);
        CHECK(cli({"repair", "--field", "gf(2^2)/gf(2)", "--n", "4", "--k", "2", "--erased", "3",
                   "--message", "01,10,11"})
                  .code == kExitInvalid);

        const Run csv = cli({"repair", "--field", kGF16, "--n", "16", "--k", "8", "--erased",
                             "2,5,9", "--format", "csv"});
        CHECK(csv.code == kExitOk);
        CHECK(csv.out.rfind("pattern,branch,phase1_subsymbols,phase2_subsymbols,rounds,ok,naive_subsymbols", 0) == 0);
    }

    TEST_CASE("sweep")
    {
        const Run s = cli({"sweep", "--field", kGF16, "--n", "16", "--k", "8", "--r", "3",
                           "--samples", "3", "--format", "json"});
        REQUIRE(s.code == kExitOk);
        const auto doc = nlohmann::json::parse(s.out);
        CHECK(doc["patterns"] == 560);
        CHECK(doc["ok"] == 560);

        const Run u = cli({"sweep", "--field", "gf(2^2)/gf(2)", "--n", "4", "--k", "1", "--r", "3"});
        CHECK(u.code == kExitUnsupported);
    }

    TEST_CASE("exit codes for unsupported and invalid input")
    {
        const Run u = cli({"plan", "--field", "gf(2^2)/gf(2)", "--n", "4", "--k", "1", "--erased",
                           "0,1,2"});
        CHECK(u.code == kExitUnsupported);
        CHECK(u.err.find("l=0, t=2") != std::string::npos);
        CHECK(cli({"plan", "--field", "gf(2^3)/gf(2)", "--n", "8", "--k", "4", "--erased", "0,1,2"})
                  .code == kExitUnsupported);
        CHECK(cli({"plan", "--field", kGF16, "--n", "16", "--k", "9", "--erased", "0"}).code ==
              kExitInvalid);
        CHECK(cli({"plan", "--field", kGF16, "--n", "16", "--k", "8", "--erased", "0,0"}).code ==
              kExitInvalid);
        CHECK(cli({"plan", "--field", kGF16, "--n", "16", "--k", "8", "--erased", "x"}).code ==
              kExitInvalid);
        CHECK(cli({"plan", "--field", kGF16, "--n", "16", "--k", "8", "--erased", "0",
                   "--format", "xml"})
                  .code == kExitInvalid);
    }

    TEST_CASE("output is deterministic and --out writes a file")
    {
        const std::vector<std::string> args{"plan", "--field", "gf(2^6)/gf(2^2)", "--n", "64",
                                            "--k", "48", "--erased", "0,1,2", "--format", "json"};
        const Run a = cli(args);
        const Run b = cli(args);
        CHECK(a.code == kExitOk);
        CHECK(a.out == b.out);

        const auto path = std::filesystem::temp_directory_path() / "rscoop_cli_test.json";
        std::vector<std::string> with_out = args;
        with_out.push_back("--out");
        with_out.push_back(path.string());
        CHECK(cli(with_out).code == kExitOk);
        std::ifstream in(path);
        std::stringstream text;
        text << in.rdbuf();
        CHECK(text.str() == a.out);
        std::filesystem::remove(path);
    }
}
