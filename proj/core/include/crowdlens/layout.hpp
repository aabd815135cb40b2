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

#include <span>
#include <vector>

namespace crowdlens {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct OverlapResolution {
  std::vector<Point2> positions;
  int iterations = 0;                // sweeps that moved at least one pair
  std::size_t residual_overlaps = 0;  // pairs closer than 2r - 1e-6
  bool converged = false;             // false: iteration budget exceeded
};

/// Pushes apart every pair of circles whose centres are closer than
/// 2 * radius, half the overlap to each side, sweeping until no pair
/// overlaps or the budget runs out. Pairs that do not overlap are never
/// touched, so non-overlapping input comes back unchanged.
OverlapResolution resolve_overlaps(std::vector<Point2> positions, double radius,
                                   int max_iterations = 500);

/// Pairs with centre distance < 2 * radius - tolerance.
std::size_t count_overlaps(std::span<const Point2> positions, double radius,
                           double tolerance = 1e-6);

/// value / max(values); all zeros when the maximum is not positive.
std::vector<double> normalize_by_max(std::span<const double> values);

}  // namespace crowdlens
