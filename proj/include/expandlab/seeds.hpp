// Copyright 2026 The expandlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EXPANDLAB_SEEDS_HPP
#define EXPANDLAB_SEEDS_HPP

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <string_view>

namespace expandlab {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view data);

/// Seed for a named subtask. Stable across platforms and thread counts.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);
/// Seed for the i-th trial of a subtask.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) without the implementation-defined behaviour of
/// std::uniform_int_distribution, so streams match across standard libraries.
std::uint64_t uniform_below(Rng &rng, std::uint64_t bound);
/// Uniform double in [0, 1) from the top 53 bits.
double uniform_unit(Rng &rng);

/// Runs fn(i) for i in [0, count) on up to `threads` threads. Work is split into contiguous
/// chunks; callers write results to per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &fn);

}  // namespace expandlab

#endif  // EXPANDLAB_SEEDS_HPP
