// Copyright 2026 The qadapt Authors
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

#include "qadapt/rng.hpp"

// RngStream is header-only; this translation unit pins the reference vector
// of the generator at compile time.
namespace qadapt {
static_assert(RngStream::mix64(0) == 0);
static_assert(RngStream::mix64(RngStream::kGamma) == 0xE220A8397B1DCDAFULL,
              "first SplitMix64 output for seed 0");
} // namespace qadapt
