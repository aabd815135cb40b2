// Copyright 2026 The CrowdLens Authors
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

#include <string_view>

namespace crowdlens {

inline constexpr double kWinklerPrefixScale = 0.1;
inline constexpr std::size_t kWinklerMaxPrefix = 4;

/// Jaro similarity in [0, 1]. Two empty strings are identical (1.0); one
/// empty string against a non-empty one scores 0.0.
double jaro(std::string_view a, std::string_view b);

/// Jaro-Winkler similarity: jaro + l * p * (1 - jaro), with l the common
/// prefix length capped at 4 and p = 0.1. The boost applies at every Jaro
/// level.
double jaro_winkler(std::string_view a, std::string_view b);

}  // namespace crowdlens
