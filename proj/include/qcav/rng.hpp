// Copyright 2026 The qcav Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace qcav {

/// Per-trajectory random stream: std::mt19937_64 seeded through std::seed_seq with the 32-bit
/// words {seed_lo, seed_hi, index_lo, index_hi, 0x71636176}. Both the engine and seed_seq are
/// fully specified by the standard, so a (seed, index) pair yields the same sequence on every
/// conforming platform. Uniform variates are built from the top 53 bits directly rather than
/// through std::uniform_real_distribution, whose algorithm is implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on the open interval (0, 1).
  double uniform_open();

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcav
