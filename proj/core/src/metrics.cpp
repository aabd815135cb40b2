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

#include "crowdlens/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "crowdlens/error.hpp"

namespace crowdlens {

namespace {

void check_dims(const FeatureVector& a, const FeatureVector& b, const WeightVector& w) {
  if (a.values.size() != b.values.size() || a.values.size() != w.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature and weight dimensions differ",
                {{"a", a.values.size()}, {"b", b.values.size()}, {"w", w.size()}});
  }
  if (a.values.empty()) throw Error(ErrorCode::kSchemaMismatch, "empty feature vectors");
}

}  // namespace

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  bool any = false;
  for (double x : w_) {
    if (!std::isfinite(x) || x < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be finite and non-negative");
    }
    any = any || x > 0.0;
  }
  if (!any) throw Error(ErrorCode::kInvalidArgument, "weights must not all be zero");
}

double overlap_distance(const FeatureVector& a, const FeatureVector& b,
                        const WeightVector& w) {
  check_dims(a, b, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const auto* x = std::get_if<std::string>(&a.values[i]);
    const auto* y = std::get_if<std::string>(&b.values[i]);
    if (!x || !y) {
      throw Error(ErrorCode::kSchemaMismatch, "overlap metric needs categorical values",
                  {{"dimension", i}});
    }
    if (*x != *y) sum += w[i];
  }
  return sum / static_cast<double>(a.values.size());
}

double weighted_euclidean(const FeatureVector& a, const FeatureVector& b,
                          const WeightVector& w) {
  check_dims(a, b, w);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const auto* x = std::get_if<double>(&a.values[i]);
    const auto* y = std::get_if<double>(&b.values[i]);
    if (!x || !y) {
      throw Error(ErrorCode::kSchemaMismatch, "euclidean metric needs numeric values",
                  {{"dimension", i}});
    }
    const double d = *x - *y;
    sum += d * d * w[i];
  }
  return std::sqrt(sum);
}

Eigen::MatrixXd pairwise_distances(std::span<const FeatureVector> items, Metric metric,
                                   const WeightVector& w) {
  const auto n = static_cast<Eigen::Index>(items.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = metric == Metric::kOverlap ? overlap_distance(items[i], items[j], w)
                                                  : weighted_euclidean(items[i], items[j], w);
      d(i, j) = d(j, i) = v;
    }
  }
  return d;
}

void min_max_scale(std::vector<FeatureVector>& items) {
  if (items.empty()) return;
  const std::size_t dims = items.front().values.size();
  for (std::size_t k = 0; k < dims; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& it : items) {
      if (const auto* v = std::get_if<double>(&it.values.at(k))) {
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
    }
    if (!(lo <= hi)) continue;  // categorical dimension
    for (auto& it : items) {
      if (auto* v = std::get_if<double>(&it.values[k])) {
        *v = hi > lo ? (*v - lo) / (hi - lo) : 0.0;
      }
    }
  }
}

WeightVector selection_weights(const std::vector<std::string>& names,
                               const std::vector<WeightSelection>& selection,
                               double unselected) {
  if (selection.empty()) return WeightVector::equal(names.size());
  std::vector<double> w(names.size(), unselected);
  for (const auto& sel : selection) {
    auto it = std::find(names.begin(), names.end(), sel.name);
    if (it == names.end()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown weight parameter",
                  {{"parameter", sel.name}, {"available", names}});
    }
    w[static_cast<std::size_t>(it - names.begin())] = sel.weight.value_or(1.0);
  }
  return WeightVector(std::move(w));
}

std::vector<WeightSelection> parse_weight_selection(std::string_view text) {
  std::vector<WeightSelection> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    WeightSelection sel;
    const auto colon = item.find(':');
    sel.name = std::string(item.substr(0, colon));
    if (colon != std::string_view::npos) {
      const std::string num(item.substr(colon + 1));
      char* end = nullptr;
      const double v = std::strtod(num.c_str(), &end);
      if (num.empty() || end != num.c_str() + num.size()) {
        throw Error(ErrorCode::kInvalidArgument, "weight must be a number",
                    {{"parameter", sel.name}, {"value", num}});
      }
      sel.weight = v;
    }
    out.push_back(std::move(sel));
  }
  return out;
}

}  // namespace crowdlens
