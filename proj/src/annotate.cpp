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

#include "runway/annotate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "runway/error.hpp"

namespace runway::annotate {

namespace {

using Precise = Eigen::Matrix<long double, 3, 3>;

Precise normalized(const Precise& m) {
  if (!m.allFinite()) throw GeometryError("homography has non-finite entries");
  // pixel-space entries span many decades, so compare singular values
  const Eigen::Matrix<long double, 3, 1> sv = Eigen::JacobiSVD<Precise>(m).singularValues();
  if (!(sv(2) > 1e-14L * sv(0))) throw GeometryError("homography is singular");
  if (std::abs(m(2, 2)) > 1e-12L * m.norm()) return m / m(2, 2);
  return m / m.norm();
}

// Similarity taking the centroid to the origin and the mean distance to sqrt(2).
Precise conditioner(std::span<const Point2, 4> pts) {
  long double cx = 0.0L, cy = 0.0L;
  for (const Point2& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= 4;
  cy /= 4;
  long double mean = 0.0L;
  for (const Point2& p : pts) mean += std::hypot(p.x - cx, p.y - cy);
  mean /= 4;
  const long double s = std::sqrt(2.0L) / mean;
  Precise t;
  t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
  return t;
}

void require_general_position(std::span<const Point2, 4> pts) {
  double extent = 0.0;
  for (const Point2& a : pts) {
    for (const Point2& b : pts) extent = std::max(extent, distance(a, b));
  }
  if (!(extent > 0.0)) throw GeometryError("degenerate correspondences");
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      for (int k = j + 1; k < 4; ++k) {
        if (std::abs(cross(pts[j] - pts[i], pts[k] - pts[i])) <= 1e-10 * extent * extent) {
          throw GeometryError("degenerate correspondences");
        }
      }
    }
  }
}

Eigen::Matrix<long double, 3, 1> lift(const Precise& m, Point2 p) {
  return m * Eigen::Matrix<long double, 3, 1>(p.x, p.y, 1.0L);
}

}  // namespace

Homography::Homography() : Homography(Eigen::Matrix3d::Identity()) {}

Homography::Homography(const Eigen::Matrix3d& matrix)
    : m_(normalized(matrix.cast<long double>())), rounded_(m_.cast<double>()) {}

Homography Homography::from_precise(const Precise& m) {
  Homography h;
  h.m_ = normalized(m);
  h.rounded_ = h.m_.cast<double>();
  return h;
}

Point2 Homography::apply(Point2 p) const {
  const auto q = lift(m_, p);
  if (std::abs(q.z()) <= 1e-12L) throw GeometryError("point at infinity");
  return {static_cast<double>(q.x() / q.z()), static_cast<double>(q.y() / q.z())};
}

Homography Homography::inverse() const { return from_precise(m_.inverse()); }

Homography operator*(const Homography& a, const Homography& b) {
  return Homography::from_precise(a.m_ * b.m_);
}

Homography homography_from_correspondences(std::span<const Point2, 4> src,
                                           std::span<const Point2, 4> dst) {
  require_general_position(src);
  require_general_position(dst);
  const Precise ts = conditioner(src);
  const Precise td = conditioner(dst);

  Eigen::Matrix<long double, 9, 9> a = Eigen::Matrix<long double, 9, 9>::Zero();
  for (int i = 0; i < 4; ++i) {
    const auto ps = lift(ts, src[i]);
    const auto qs = lift(td, dst[i]);
    const long double px = ps.x() / ps.z(), py = ps.y() / ps.z();
    const long double qx = qs.x() / qs.z(), qy = qs.y() / qs.z();
    a.row(2 * i) << -px, -py, -1, 0, 0, 0, qx * px, qx * py, qx;
    a.row(2 * i + 1) << 0, 0, 0, -px, -py, -1, qy * px, qy * py, qy;
  }
  const Eigen::JacobiSVD<Eigen::Matrix<long double, 9, 9>> svd(a, Eigen::ComputeFullV);
  const Eigen::Matrix<long double, 9, 1> h = svd.matrixV().col(8);
  Precise hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  return Homography::from_precise(td.inverse() * hn * ts);
}

std::vector<Point2> apply_homography(const Homography& h, std::span<const Point2> points) {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const Point2& p : points) out.push_back(h.apply(p));
  return out;
}

void CanonicalRect::validate() const {
  if (!(width > 0.0 && length > 0.0)) throw InvalidInput("canonical rectangle must be positive");
}

std::array<Point2, 4> CanonicalRect::corners() const {
  return {Point2{0.0, 0.0}, Point2{width, 0.0}, Point2{width, length}, Point2{0.0, length}};
}

bool ProportionModel::has_category(int category_id) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const ProportionEntry& e) { return e.category_id == category_id; });
}

void ProportionModel::validate() const {
  if (entries.empty()) throw InvalidInput("proportion model is empty");
  std::size_t aiming = 0;
  for (const auto& e : entries) {
    if (e.category_id == static_cast<int>(Category::kRunway)) {
      throw InvalidInput("proportion model must not contain the runway");
    }
    if (e.category_id == static_cast<int>(Category::kAimingMarking)) ++aiming;
    for (const auto& poly : e.polygons) {
      if (poly.size() < 3) throw InvalidInput("proportion model polygon has < 3 vertices");
      for (const Point2& p : poly) {
        if (!(p.x >= -0.5 && p.x <= 1.5 && p.y >= -0.5 && p.y <= 1.5)) {
          throw InvalidInput("annotation of category " + std::to_string(e.category_id) +
                             " lies outside the rectified runway frame");
        }
      }
    }
  }
  if (aiming != 0 && aiming != 2) {
    throw InvalidInput("aiming marking must consist of exactly two strips, got " +
                       std::to_string(aiming));
  }
}

std::array<Point2, 4> order_runway_corners(std::span<const Point2> quad) {
  if (quad.size() != 4) throw InvalidInput("runway must be quadrilateral");
  Point2 c{};
  for (const Point2& p : quad) c = c + 0.25 * p;
  std::array<Point2, 4> out;
  std::copy(quad.begin(), quad.end(), out.begin());
  // Increasing on-screen angle is counter-clockwise.
  std::sort(out.begin(), out.end(), [&](Point2 a, Point2 b) {
    return std::atan2(c.y - a.y, a.x - c.x) < std::atan2(c.y - b.y, b.x - c.x);
  });
  const auto start = std::max_element(out.begin(), out.end(), [](Point2 a, Point2 b) {
    return (a.y - a.x) < (b.y - b.x);
  });
  std::rotate(out.begin(), start, out.end());
  return out;
}

namespace {

const InstanceAnnotation& find_runway(std::span<const InstanceAnnotation> annotations) {
  const InstanceAnnotation* runway = nullptr;
  for (const auto& a : annotations) {
    if (a.category_id != static_cast<int>(Category::kRunway)) continue;
    if (runway) throw InvalidInput("reference contains more than one runway");
    runway = &a;
  }
  if (!runway) throw InvalidInput("reference has no runway annotation");
  if (runway->segmentation.size() != 1 || runway->segmentation[0].points.size() != 4) {
    throw InvalidInput("runway must be quadrilateral");
  }
  return *runway;
}

}  // namespace

ProportionModel derive_proportions(std::span<const InstanceAnnotation> reference,
                                   const CanonicalRect& rect) {
  rect.validate();
  const InstanceAnnotation& runway = find_runway(reference);
  const auto image_corners = order_runway_corners(runway.segmentation[0].points);
  const auto canonical = rect.corners();
  const Homography to_top = homography_from_correspondences(image_corners, canonical);

  ProportionModel model;
  for (const auto& a : reference) {
    if (a.category_id == static_cast<int>(Category::kRunway)) continue;
    ProportionEntry entry;
    entry.category_id = a.category_id;
    for (const Contour& poly : a.segmentation) {
      auto& out = entry.polygons.emplace_back();
      for (const Point2& p : poly.points) {
        const Point2 q = to_top.apply(p);
        out.push_back({q.x / rect.width, q.y / rect.length});
      }
    }
    model.entries.push_back(std::move(entry));
  }
  if (model.entries.empty()) throw InvalidInput("reference has only a runway: nothing to derive");
  model.validate();
  return model;
}

std::vector<InstanceAnnotation> propagate(std::span<const Point2> runway_polygon,
                                          const ProportionModel& model,
                                          const CanonicalRect& rect) {
  rect.validate();
  model.validate();
  const auto image_corners = order_runway_corners(runway_polygon);
  const auto canonical = rect.corners();
  const Homography to_image = homography_from_correspondences(canonical, image_corners);

  std::vector<InstanceAnnotation> out;
  InstanceAnnotation runway;
  runway.category_id = static_cast<int>(Category::kRunway);
  runway.segmentation.push_back(
      Contour{{runway_polygon.begin(), runway_polygon.end()}, true});
  runway.area = polygon_area(runway.segmentation);
  out.push_back(std::move(runway));

  for (const auto& entry : model.entries) {
    InstanceAnnotation ann;
    ann.category_id = entry.category_id;
    for (const auto& poly : entry.polygons) {
      Contour c;
      for (const Point2& f : poly) c.points.push_back(to_image.apply({f.x * rect.width, f.y * rect.length}));
      ann.segmentation.push_back(std::move(c));
    }
    ann.area = polygon_area(ann.segmentation);
    out.push_back(std::move(ann));
  }
  return out;
}

}  // namespace runway::annotate
