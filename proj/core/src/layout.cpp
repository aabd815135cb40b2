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

#include "crowdlens/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "crowdlens/error.hpp"

namespace crowdlens {

OverlapResolution resolve_overlaps(std::vector<Point2> positions, double radius,
                                   int max_iterations) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::kInvalidArgument, "radius must be positive and finite");
  }
  for (const auto& p : positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kInvalidArgument, "positions must be finite");
    }
  }
  const double target = 2.0 * radius;
  // Pairs within this slack of `target` count as touching, not overlapping.
  const double slack = 1e-9 * target;
  // Separated pairs land slightly beyond `target`, and each push is
  // over-relaxed; both cut the sweeps needed on jammed inputs several-fold.
  const double push_to = target * (1.0 + 1e-3);
  constexpr double kRelaxation = 1.5;
  constexpr double kGoldenAngle = std::numbers::pi * (3.0 - 2.2360679774997896964);

  OverlapResolution out;
  const std::size_t n = positions.size();
  while (out.iterations < max_iterations) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = positions[j].x - positions[i].x;
        double dy = positions[j].y - positions[i].y;
        double dist = std::hypot(dx, dy);
        if (dist >= target - slack) continue;
        if (dist == 0.0) {
          const double angle = kGoldenAngle * static_cast<double>(i * n + j);
          dx = std::cos(angle);
          dy = std::sin(angle);
        } else {
          dx /= dist;
          dy /= dist;
        }
        const double half = 0.5 * kRelaxation * (push_to - dist);
        positions[i].x -= dx * half;
        positions[i].y -= dy * half;
        positions[j].x += dx * half;
        positions[j].y += dy * half;
        moved = true;
      }
    }
    if (!moved) {
      out.converged = true;
      break;
    }
    ++out.iterations;
  }
  if (!out.converged) {
    // The last sweep may have fixed everything; check.
    out.converged = count_overlaps(positions, radius, slack) == 0;
  }
  out.residual_overlaps = count_overlaps(positions, radius);
  out.positions = std::move(positions);
  return out;
}

std::size_t count_overlaps(std::span<const Point2> positions, double radius,
                           double tolerance) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      const double d = std::hypot(positions[j].x - positions[i].x,
                                  positions[j].y - positions[i].y);
      if (d < 2.0 * radius - tolerance) ++count;
    }
  }
  return count;
}

std::vector<double> normalize_by_max(std::span<const double> values) {
  double hi = 0.0;
  for (double v : values) hi = std::max(hi, v);
  std::vector<double> out(values.size(), 0.0);
  if (hi > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] / hi;
  }
  return out;
}

}  // namespace crowdlens
