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
#include <span>
#include <vector>

#include <Eigen/Core>

#include "runway/dataset.hpp"
#include "runway/geometry.hpp"

namespace runway::annotate {

// Invertible planar projective map, scaled so the bottom-right entry is 1
// whenever that entry is non-zero.
class Homography {
 public:
  Homography();
  explicit Homography(const Eigen::Matrix3d& matrix);

  // Rounded copy; the map itself is held and applied in extended precision.
  const Eigen::Matrix3d& matrix() const { return rounded_; }

  // Throws GeometryError("point at infinity") when the point maps to the line
  // at infinity.
  Point2 apply(Point2 p) const;
  Homography inverse() const;

  // (a * b).apply(p) == a.apply(b.apply(p))
  friend Homography operator*(const Homography& a, const Homography& b);

 private:
  using Precise = Eigen::Matrix<long double, 3, 3>;
  static Homography from_precise(const Precise& m);
  friend Homography homography_from_correspondences(std::span<const Point2, 4> src,
                                                    std::span<const Point2, 4> dst);

  Precise m_;
  Eigen::Matrix3d rounded_;
};

// Exact four-point DLT with Hartley normalisation of both point sets.
Homography homography_from_correspondences(std::span<const Point2, 4> src,
                                           std::span<const Point2, 4> dst);

std::vector<Point2> apply_homography(const Homography& h, std::span<const Point2> points);

// Top-view runway rectangle with corners (0,0), (W,0), (W,L), (0,L); the
// first two are the near end.
struct CanonicalRect {
  double width = 100.0;
  double length = 400.0;

  void validate() const;
  std::array<Point2, 4> corners() const;
};

// One non-runway instance in the rectified frame, coordinates as fractions of
// (width, length).
struct ProportionEntry {
  int category_id = 0;
  std::vector<std::vector<Point2>> polygons;
};

struct ProportionModel {
  std::vector<ProportionEntry> entries;

  bool has_category(int category_id) const;
  void validate() const;
};

// Runway corners counter-clockwise on screen, starting from the vertex
// nearest the image's bottom-left (the largest y - x).
std::array<Point2, 4> order_runway_corners(std::span<const Point2> quad);

// Stage one: rectify a fully annotated reference image.
ProportionModel derive_proportions(std::span<const InstanceAnnotation> reference,
                                   const CanonicalRect& rect = {});

// Stage two: the runway annotation followed by every modelled category mapped
// back into the image. Ids and image ids are left for the caller.
std::vector<InstanceAnnotation> propagate(std::span<const Point2> runway_polygon,
                                          const ProportionModel& model,
                                          const CanonicalRect& rect = {});

}  // namespace runway::annotate
