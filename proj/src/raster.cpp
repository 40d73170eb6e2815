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

#include <algorithm>
#include <cmath>

#include "runway/error.hpp"
#include "runway/geometry.hpp"

namespace runway {

namespace {

constexpr double kOnEdgeEps = 1e-9;

void validate_polygon(const Contour& polygon) {
  if (!polygon.closed || polygon.points.size() < 3) {
    throw InvalidInput("not a closed polygon");
  }
  for (const Point2& p : polygon.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InvalidInput("not a closed polygon: non-finite vertex");
    }
  }
}

// Rows j whose centre j + 0.5 satisfies lo <= j + 0.5 < hi.
std::pair<int, int> row_span(double lo, double hi) {
  return {static_cast<int>(std::ceil(lo - 0.5)), static_cast<int>(std::ceil(hi - 0.5)) - 1};
}

void fill_polygon(const Contour& polygon, const Box& window, BinaryMask& out) {
  const int h = window.height();
  const auto& pts = polygon.points;
  const std::size_t n = pts.size();

  std::vector<std::vector<double>> crossings(static_cast<std::size_t>(h));
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = pts[i];
    const Point2 b = pts[(i + 1) % n];
    if (a.y == b.y) continue;
    const double ylo = std::min(a.y, b.y);
    const double yhi = std::max(a.y, b.y);
    auto [r0, r1] = row_span(ylo, yhi);
    r0 = std::max(r0, window.y0);
    r1 = std::min(r1, window.y1 - 1);
    for (int r = r0; r <= r1; ++r) {
      const double yc = r + 0.5;
      const double x = a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y);
      crossings[static_cast<std::size_t>(r - window.y0)].push_back(x);
    }
  }
  for (int j = 0; j < h; ++j) {
    auto& xs = crossings[static_cast<std::size_t>(j)];
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int c0 = std::max(static_cast<int>(std::ceil(xs[k] - 0.5)), window.x0);
      const int c1 = std::min(static_cast<int>(std::floor(xs[k + 1] - 0.5)), window.x1 - 1);
      for (int c = c0; c <= c1; ++c) out.set(c - window.x0, j);
    }
  }

  // Centres exactly on an edge (including horizontal edges and vertices).
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = pts[i];
    const Point2 b = pts[(i + 1) % n];
    const double ylo = std::min(a.y, b.y);
    const double yhi = std::max(a.y, b.y);
    const int r0 = std::max(static_cast<int>(std::ceil(ylo - kOnEdgeEps - 0.5)), window.y0);
    const int r1 = std::min(static_cast<int>(std::floor(yhi + kOnEdgeEps - 0.5)), window.y1 - 1);
    for (int r = r0; r <= r1; ++r) {
      const double yc = r + 0.5;
      if (std::abs(b.y - a.y) <= kOnEdgeEps) {
        if (std::abs(yc - a.y) > kOnEdgeEps) continue;
        const double xlo = std::min(a.x, b.x);
        const double xhi = std::max(a.x, b.x);
        const int c0 = std::max(static_cast<int>(std::ceil(xlo - kOnEdgeEps - 0.5)), window.x0);
        const int c1 =
            std::min(static_cast<int>(std::floor(xhi + kOnEdgeEps - 0.5)), window.x1 - 1);
        for (int c = c0; c <= c1; ++c) out.set(c - window.x0, r - window.y0);
        continue;
      }
      const double x = a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y);
      const double c = std::round(x - 0.5);
      if (std::abs(c + 0.5 - x) > kOnEdgeEps) continue;
      const int ci = static_cast<int>(c);
      if (ci >= window.x0 && ci < window.x1) out.set(ci - window.x0, r - window.y0);
    }
  }
}

}  // namespace

Box polygon_bounds(std::span<const Point2> points) {
  if (points.empty()) return {};
  double xlo = points[0].x, xhi = points[0].x, ylo = points[0].y, yhi = points[0].y;
  for (const Point2& p : points) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  auto clamp_int = [](double v) {
    return static_cast<int>(std::clamp(v, -1e9, 1e9));
  };
  return {clamp_int(std::floor(xlo - 0.5)), clamp_int(std::floor(ylo - 0.5)),
          clamp_int(std::ceil(xhi - 0.5)) + 1, clamp_int(std::ceil(yhi - 0.5)) + 1};
}

BinaryMask rasterize_polygons(std::span<const Contour> polygons, const Box& window) {
  if (window.empty()) throw InvalidInput("empty raster window");
  BinaryMask out(window.width(), window.height());
  for (const Contour& polygon : polygons) {
    validate_polygon(polygon);
    fill_polygon(polygon, window, out);
  }
  return out;
}

BinaryMask rasterize_polygon(const Contour& polygon, int width, int height) {
  return rasterize_polygons(std::span<const Contour>(&polygon, 1), Box{0, 0, width, height});
}

}  // namespace runway
