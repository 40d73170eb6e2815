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

#include "runway/spm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "runway/error.hpp"

namespace runway::spm {

void SpmConfig::validate() const {
  StructuringElement{element_size};
  if (open_repetitions < 1) throw InvalidInput("open_repetitions must be >= 1");
  if (!(area_gate > 0.0 && area_gate < 1.0)) throw InvalidInput("area_gate must be in (0, 1)");
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw InvalidInput("iou_threshold must be in (0, 1]");
  }
  for (double f : transversal_offsets) {
    if (!(f > 0.0 && f < 1.0)) throw InvalidInput("transversal offsets must be in (0, 1)");
  }
  if (transversal_offsets[0] == transversal_offsets[1]) {
    throw InvalidInput("transversal offsets must be distinct");
  }
  if (!(tolerance_log_base > 1.0)) throw InvalidInput("tolerance_log_base must be > 1");
}

const char* to_string(SmoothKind kind) {
  switch (kind) {
    case SmoothKind::kQuadrilateral:
      return "quadrilateral";
    case SmoothKind::kDpFallback:
      return "dp_fallback";
    case SmoothKind::kPassthrough:
      return "passthrough";
  }
  return "unknown";
}

double adaptive_tolerance(double length, double log_base) {
  if (!(length > 1.0)) throw GeometryError("degenerate perimeter");
  return 0.01 * std::log(length) / std::log(log_base);
}

namespace {

// On-screen polar angle about `center`; increasing is counter-clockwise.
double screen_angle(Point2 center, Point2 p) { return std::atan2(center.y - p.y, p.x - center.x); }

// Midpoint of the extreme crossings of the closed contour with y = level.
Point2 positioning_point(const std::vector<Point2>& pts, double level) {
  double left = std::numeric_limits<double>::infinity();
  double right = -std::numeric_limits<double>::infinity();
  int hits = 0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = pts[i];
    const Point2 b = pts[(i + 1) % n];
    const bool crosses = (a.y <= level && level < b.y) || (b.y <= level && level < a.y);
    if (!crosses) continue;
    const double x = a.x + (level - a.y) * (b.x - a.x) / (b.y - a.y);
    left = std::min(left, x);
    right = std::max(right, x);
    ++hits;
  }
  if (hits < 2) throw GeometryError("degenerate cross-section");
  return {0.5 * (left + right), level};
}

}  // namespace

CornerSet locate_corners(const Contour& contour, Point2 center, const SpmConfig& config) {
  const auto& pts = contour.points;
  if (!contour.closed || pts.size() < 8) throw GeometryError("contour too short");
  double ymin = pts[0].y, ymax = pts[0].y, xmin = pts[0].x, xmax = pts[0].x;
  for (const Point2& p : pts) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
  }
  if (center.x < xmin || center.x > xmax || center.y < ymin || center.y > ymax) {
    throw GeometryError("center outside contour bounds");
  }

  const double lo = std::min(config.transversal_offsets[0], config.transversal_offsets[1]);
  const double hi = std::max(config.transversal_offsets[0], config.transversal_offsets[1]);
  CornerSet out;
  out.center = center;
  out.positioning[0] = positioning_point(pts, ymin + lo * (ymax - ymin));
  out.positioning[1] = positioning_point(pts, ymin + hi * (ymax - ymin));

  const Point2 up = out.positioning[0] - center;
  const Point2 down = out.positioning[1] - center;
  if (up.y >= 0.0 || down.y <= 0.0) throw GeometryError("degenerate cross-section");

  // Sets: 0 lower-left, 1 lower-right, 2 upper-right, 3 upper-left.
  std::array<double, 4> best;
  best.fill(-1.0);
  std::array<std::size_t, 4> best_idx{};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 d = pts[i] - center;
    int set = 0;
    if (d.y < 0.0) {
      set = cross(up, d) < 0.0 ? 3 : 2;
    } else {
      set = cross(down, d) > 0.0 ? 0 : 1;
    }
    const double r = dot(d, d);
    if (r > best[set]) {
      best[set] = r;
      best_idx[set] = i;
    }
  }
  for (double b : best) {
    if (b < 0.0) throw GeometryError("degenerate corner set");
  }
  for (int k = 0; k < 4; ++k) out.corners[k] = pts[best_idx[k]];
  std::sort(out.corners.begin(), out.corners.end(), [&](Point2 a, Point2 b) {
    return screen_angle(center, a) < screen_angle(center, b);
  });
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      if (out.corners[a] == out.corners[b]) throw GeometryError("degenerate corner set");
    }
  }
  return out;
}

Contour fit_quadrilateral(const Contour& contour, const CornerSet& corners) {
  std::array<double, 4> theta;
  for (int k = 0; k < 4; ++k) theta[k] = screen_angle(corners.center, corners.corners[k]);

  // Edge k runs from corner k to corner k + 1 and owns [theta_k, theta_{k+1}).
  std::array<std::vector<Point2>, 4> sets;
  for (const Point2& p : contour.points) {
    const double phi = screen_angle(corners.center, p);
    int edge = 3;
    for (int k = 0; k < 3; ++k) {
      if (phi >= theta[k] && phi < theta[k + 1]) {
        edge = k;
        break;
      }
    }
    sets[edge].push_back(p);
  }

  try {
    std::array<Line2, 4> lines;
    for (int k = 0; k < 4; ++k) lines[k] = fit_line_least_squares(sets[k]);
    Contour quad;
    quad.closed = true;
    for (int k = 0; k < 4; ++k) quad.points.push_back(intersect_lines(lines[(k + 3) % 4], lines[k]));
    return quad;
  } catch (const GeometryError&) {
    throw GeometryError("degenerate quadrilateral");
  }
}

namespace {

Contour component_polygon(const Component& comp, Point2 origin) {
  if (comp.border.points.size() >= 3) return to_pixel_centres(comp.border, origin);
  // One- or two-pixel borders: the pixel-edge rectangle around the component.
  const double x0 = comp.bounds.x0 + origin.x;
  const double y0 = comp.bounds.y0 + origin.y;
  const double x1 = comp.bounds.x1 + origin.x;
  const double y1 = comp.bounds.y1 + origin.y;
  return Contour{{{x0, y1}, {x1, y1}, {x1, y0}, {x0, y0}}, true};
}

const Component& largest(const std::vector<Component>& comps) {
  const Component* best = &comps.front();
  for (const Component& c : comps) {
    if (c.area > best->area) best = &c;
  }
  return *best;
}

double fit_iou(const Contour& polygon, const BinaryMask& mask, const Box& mask_bounds) {
  const Box frame{0, 0, mask.width(), mask.height()};
  const Box window =
      box_intersection(box_union(mask_bounds, polygon_bounds(polygon.points)), frame);
  if (window.empty()) return 0.0;
  const BinaryMask fitted = rasterize_polygons(std::span<const Contour>(&polygon, 1), window);
  return mask_iou(fitted, mask.crop(window));
}

}  // namespace

SmoothResult smooth_instance(const BinaryMask& mask, const SpmConfig& config) {
  config.validate();
  const auto bounds = mask.bounds();
  if (!bounds) throw GeometryError("empty mask");

  const BinaryMask local = mask.crop(*bounds);
  const Point2 origin{static_cast<double>(bounds->x0), static_cast<double>(bounds->y0)};
  const double area = static_cast<double>(local.count());
  const double frame = static_cast<double>(mask.width()) * static_cast<double>(mask.height());

  SmoothResult result;
  if (area <= config.area_gate * frame) {
    result.kind = SmoothKind::kPassthrough;
    result.polygon = component_polygon(largest(find_components(local)), origin);
    result.fit_iou = fit_iou(result.polygon, mask, *bounds);
    return result;
  }

  const BinaryMask opened =
      morphological_open(local, StructuringElement{config.element_size}, config.open_repetitions);
  const auto coarse_components = find_components(opened);

  Contour coarse;
  if (!coarse_components.empty()) {
    const Component& comp = largest(coarse_components);
    coarse = component_polygon(comp, origin);
    try {
      const Point2 c = centroid(component_mask(opened, comp));
      const Point2 center{c.x + origin.x + 0.5, c.y + origin.y + 0.5};
      const CornerSet corners = locate_corners(coarse, center, config);
      Contour quad = fit_quadrilateral(coarse, corners);
      if (is_simple_polygon(quad.points)) {
        const double iou = fit_iou(quad, mask, *bounds);
        if (iou >= config.iou_threshold) {
          result.kind = SmoothKind::kQuadrilateral;
          result.polygon = std::move(quad);
          result.fit_iou = iou;
          return result;
        }
      }
    } catch (const GeometryError&) {
      // Fall through to polygon simplification.
    }
  } else {
    coarse = component_polygon(largest(find_components(local)), origin);
  }

  result.kind = SmoothKind::kDpFallback;
  result.polygon = coarse;
  const double length = perimeter(coarse.points, true);
  if (length > 1.0) {
    auto simplified = simplify_polyline(
        coarse.points, adaptive_tolerance(length, config.tolerance_log_base), true);
    if (simplified.size() >= 3) result.polygon.points = std::move(simplified);
  }
  result.fit_iou = fit_iou(result.polygon, mask, *bounds);
  return result;
}

}  // namespace runway::spm
