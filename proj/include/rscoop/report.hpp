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

// JSON, CSV and plain-table renderings. Key order is fixed so equal inputs
// give byte-identical output.

#include <string>
#include <vector>

#include <json.hpp>

#include "rscoop/simnet.hpp"

namespace rscoop {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// "x^4 + x + 1"; coefficients of B with s > 1 print as bracketed digit strings.
std::string polynomial_string(const TowerField& field, const std::vector<SubElement>& coeffs);
std::string prime_polynomial_string(const std::vector<std::uint32_t>& coeffs);

Json field_info_json(const TowerField& field);
Json plan_json(const RSCode& code, const RepairPlan& plan);

struct RepairRun {
    std::size_t message_index;
    Transcript transcript;
    OracleReport oracle;
};

Json repair_json(const RSCode& code, const RepairPlan& plan, const std::vector<RepairRun>& runs);
Json sweep_json(const RSCode& code, const SweepReport& report);

std::string sweep_csv(const SweepReport& report);
std::string repair_csv(const RepairPlan& plan, const std::vector<RepairRun>& runs);

std::string field_info_table(const TowerField& field);
std::string plan_table(const RSCode& code, const RepairPlan& plan);
std::string repair_table(const RSCode& code, const RepairPlan& plan,
                         const std::vector<RepairRun>& runs);
std::string sweep_table(const RSCode& code, const SweepReport& report);

}  // namespace rscoop
