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

#include <array>
#include <numbers>
#include <string>

#include "runway/geometry.hpp"

namespace runway::spm {

struct SpmConfig {
  int element_size = 3;
  int open_repetitions = 3;
  // Instances covering at most this fraction of the frame pass through.
  double area_gate = 0.001;
  // Minimum IoU of the fitted quadrilateral against the input mask.
  double iou_threshold = 0.9;
  // Transversal heights as fractions of the coarse contour's bounding box,
  // measured from its top edge.
  std::array<double, 2> transversal_offsets = {0.25, 0.75};
  // Base of the logarithm in the adaptive DP tolerance.
  double tolerance_log_base = std::numbers::e;

  void validate() const;
};

enum class SmoothKind { kQuadrilateral, kDpFallback, kPassthrough };

const char* to_string(SmoothKind kind);

struct CornerSet {
  Point2 center;
  std::array<Point2, 2> positioning;  // upper, lower
  std::array<Point2, 4> corners;      // counter-clockwise on screen
};

struct SmoothResult {
  Contour polygon;
  SmoothKind kind = SmoothKind::kPassthrough;
  double fit_iou = 0.0;
};

// DP tolerance 0.01 * log(length).
double adaptive_tolerance(double length, double log_base = std::numbers::e);

// Corner search on a closed contour given in continuous coordinates.
CornerSet locate_corners(const Contour& contour, Point2 center, const SpmConfig& config);

// Least-squares edges between consecutive corners, closed into a quadrilateral
// ordered like the corners.
Contour fit_quadrilateral(const Contour& contour, const CornerSet& corners);

// The full pipeline. The returned polygon is in continuous frame coordinates.
SmoothResult smooth_instance(const BinaryMask& mask, const SpmConfig& config = {});

}  // namespace runway::spm
