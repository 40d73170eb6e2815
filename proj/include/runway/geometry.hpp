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
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace runway {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
};

double dot(Point2 a, Point2 b);
double cross(Point2 a, Point2 b);
double distance(Point2 a, Point2 b);
double squared_distance(Point2 a, Point2 b);

// Ordered boundary. Coordinates follow the image convention (x right, y down);
// "counter-clockwise" always means counter-clockwise as displayed on screen.
struct Contour {
  std::vector<Point2> points;
  bool closed = true;

  friend bool operator==(const Contour&, const Contour&) = default;
};

// a*x + b*y = c with (a, b) a unit normal.
struct Line2 {
  Point2 normal;
  double offset = 0.0;

  double signed_distance(Point2 p) const { return dot(normal, p) - offset; }
};

// Half-open integer pixel rectangle [x0, x1) x [y0, y1).
struct Box {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }

  friend bool operator==(const Box&, const Box&) = default;
};

Box box_union(const Box& a, const Box& b);
Box box_intersection(const Box& a, const Box& b);

class BinaryMask {
 public:
  BinaryMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value = true) { bits_[index(x, y)] = value ? 1 : 0; }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::size_t count() const;
  bool empty() const { return count() == 0; }

  // Tight bounds of the set pixels; nullopt for an empty mask.
  std::optional<Box> bounds() const;

  // Sub-window copy. Pixels of `window` outside this mask read as background.
  BinaryMask crop(const Box& window) const;

  // Writes `patch` into this mask with its top-left at (x0, y0), clipped.
  void paste(const BinaryMask& patch, int x0, int y0);

  std::span<const std::uint8_t> data() const { return bits_; }
  std::span<std::uint8_t> data() { return bits_; }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

// Square structuring element of odd side length. Size 1 makes opening the
// identity.
class StructuringElement {
 public:
  explicit StructuringElement(int size = 3);
  int size() const { return size_; }
  int radius() const { return size_ / 2; }

 private:
  int size_;
};

// ---------------------------------------------------------------------------
// Raster operations

BinaryMask erode(const BinaryMask& mask, StructuringElement element);
BinaryMask dilate(const BinaryMask& mask, StructuringElement element);

// Erosion then dilation, repeated. Pixels outside the raster count as
// background, so the result is always a subset of the input.
BinaryMask morphological_open(const BinaryMask& mask, StructuringElement element,
                              int repetitions = 1);

// First moments over zeroth moment, in pixel-index coordinates.
Point2 centroid(const BinaryMask& mask);

double mask_iou(const BinaryMask& a, const BinaryMask& b);

struct Component {
  Contour border;  // pixel-index coordinates, counter-clockwise
  std::size_t area = 0;
  Box bounds;
};

// 8-connected components in raster order of their first pixel, each with its
// outer border traced by Suzuki border following. Holes are ignored.
std::vector<Component> find_components(const BinaryMask& mask);

std::vector<Contour> trace_contours(const BinaryMask& mask);

// Mask holding only the given component (selected by its border start pixel).
BinaryMask component_mask(const BinaryMask& mask, const Component& component);

// Pixel-index contour to continuous coordinates through pixel centres.
Contour to_pixel_centres(const Contour& contour, Point2 origin = {});

// Even-odd fill sampled at pixel centres (x + 0.5, y + 0.5). Centres lying on
// an edge are included. Pixels outside the raster are clipped.
BinaryMask rasterize_polygon(const Contour& polygon, int width, int height);

// Same fill restricted to `window`; pixel (i, j) of the result is frame pixel
// (window.x0 + i, window.y0 + j). Multiple polygons are unioned.
BinaryMask rasterize_polygons(std::span<const Contour> polygons, const Box& window);

// Integer pixel window covering the polygon's sample points.
Box polygon_bounds(std::span<const Point2> points);

// ---------------------------------------------------------------------------
// Vector operations

double perimeter(std::span<const Point2> points, bool closed);

// Signed shoelace area; positive for counter-clockwise in the y-up sense,
// i.e. negative for on-screen counter-clockwise order.
double signed_area(std::span<const Point2> points);

// Douglas-Peucker. Closed input is split at its farthest point pair, each arc
// simplified, and the kept indices returned in input order.
std::vector<std::size_t> simplify_polyline_indices(std::span<const Point2> points,
                                                   double tolerance, bool closed);
std::vector<Point2> simplify_polyline(std::span<const Point2> points, double tolerance,
                                      bool closed);

// Orthogonal (total) least squares line through the point centroid.
Line2 fit_line_least_squares(std::span<const Point2> points);

Point2 intersect_lines(const Line2& a, const Line2& b);

// True when no two non-adjacent edges of the closed polygon intersect.
bool is_simple_polygon(std::span<const Point2> points);

}  // namespace runway
