// Copyright 2026 The Runway Toolkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "runway/cpcl.hpp"

#include <cmath>

#include "runway/error.hpp"

namespace runway::cpcl {

void CpclConfig::validate() const {
  if (!(dp_tolerance > 0.0)) throw InvalidInput("dp_tolerance must be > 0");
  if (!(beta > 0.0)) throw InvalidInput("beta must be > 0");
}

std::size_t key_point_count(std::span<const Point2> contour, double tolerance) {
  if (contour.size() < 4) throw InvalidInput("predicted contour needs at least 4 points");
  return simplify_polyline_indices(contour, tolerance, true).size();
}

double smooth_l1(double delta, double beta) {
  if (!(beta > 0.0)) throw InvalidInput("beta must be > 0");
  const double a = std::abs(delta);
  return a < beta ? 0.5 * delta * delta / beta : a - 0.5 * beta;
}

double cpcl_loss(std::span<const Point2> contour, std::size_t gt_corner_count,
                 const CpclConfig& config) {
  config.validate();
  if (gt_corner_count < 3) throw InvalidInput("degenerate ground-truth polygon");
  const auto key_points = key_point_count(contour, config.dp_tolerance);
  return smooth_l1(static_cast<double>(key_points) - static_cast<double>(gt_corner_count),
                   config.beta);
}

}  // namespace runway::cpcl
