// Copyright 2026 The dpspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPSPEC_RNG_H_
#define DPSPEC_RNG_H_

#include <cstdint>
#include <random>

namespace dpspec {

// Every stochastic operation takes an explicit 64-bit seed and builds its own
// engine from it. Independent streams are obtained with DeriveSeed, never by
// sharing an engine across operations.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t Mix64(std::uint64_t x);

// Seed of substream `index` under `parent`. Pure function of its inputs, so
// trial seeds do not depend on execution order.
std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index);

inline Rng MakeRng(std::uint64_t seed) { return Rng(Mix64(seed)); }

// Fixed substream tags so that the same seed feeds the same draw regardless
// of which other draws a pipeline performs.
namespace stream {
inline constexpr std::uint64_t kGraph = 1;
inline constexpr std::uint64_t kMechanism = 2;
inline constexpr std::uint64_t kShuffle = 3;
inline constexpr std::uint64_t kProjection = 4;
inline constexpr std::uint64_t kNoise = 5;
inline constexpr std::uint64_t kInit = 6;
inline constexpr std::uint64_t kKmeans = 7;
inline constexpr std::uint64_t kSubsample = 8;
}  // namespace stream

}  // namespace dpspec

#endif  // DPSPEC_RNG_H_
