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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rscoop {

/// Bad user-supplied parameters (field spec, code parameters, indices).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An algebraic invariant failed. Always a bug in the caller or in this library.
class AlgebraError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A repair plan failed its static validation or a recipe touched data its
/// node does not hold yet.
class PlanError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Three-erasure pattern with dim K_{1,2,3} = t-2 and t <= 3: no scheme exists.
class UnsupportedPattern : public std::runtime_error {
public:
    UnsupportedPattern(std::size_t kernel_dim, std::size_t degree)
        : std::runtime_error("unsupported failure pattern: l=" + std::to_string(kernel_dim) +
                             ", t=" + std::to_string(degree) +
                             " (the l=t-2 three-erasure scheme requires t>3)"),
          l(kernel_dim),
          t(degree)
    {
    }

    std::size_t l;
    std::size_t t;
};

}  // namespace rscoop
