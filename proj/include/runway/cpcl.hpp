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

#pragma once

#include <cstddef>
#include <span>

#include "runway/geometry.hpp"

namespace runway::cpcl {

struct CpclConfig {
  double dp_tolerance = 1.0;
  double beta = 1.0;

  void validate() const;
};

// Number of Douglas-Peucker key points of a closed predicted contour.
std::size_t key_point_count(std::span<const Point2> contour, double tolerance);

// 0.5 * d^2 / beta inside |d| < beta, |d| - 0.5 * beta outside.
double smooth_l1(double delta, double beta = 1.0);

// smooth_l1(key points - ground-truth corner count).
double cpcl_loss(std::span<const Point2> contour, std::size_t gt_corner_count,
                 const CpclConfig& config = {});

}  // namespace runway::cpcl
