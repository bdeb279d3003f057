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

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "rscoop/field.hpp"

namespace rscoop::test {

/// Shared tower instances; building GF(2^12) tables is not free.
inline FieldPtr gf(std::uint32_t p, std::uint32_t s, std::uint32_t t)
{
    static std::mutex mu;
    static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, FieldPtr> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{p, s, t}];
    if (!slot) {
        slot = TowerField::create(p, s, t);
    }
    return slot;
}

inline FieldElement el(std::uint32_t v) { return FieldElement{v}; }
inline SubElement sub(std::uint32_t v) { return SubElement{v}; }

inline std::vector<std::uint32_t> values(const std::vector<FieldElement>& xs)
{
    std::vector<std::uint32_t> out;
    for (FieldElement x : xs) {
        out.push_back(x.value);
    }
    return out;
}

inline std::vector<std::uint32_t> values(const std::vector<SubElement>& xs)
{
    std::vector<std::uint32_t> out;
    for (SubElement x : xs) {
        out.push_back(x.value);
    }
    return out;
}

}  // namespace rscoop::test
