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
#include <numeric>

#include "runway/error.hpp"
#include "runway/geometry.hpp"

namespace runway {

double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double squared_distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}
double distance(Point2 a, Point2 b) { return std::sqrt(squared_distance(a, b)); }

double perimeter(std::span<const Point2> points, bool closed) {
  if (points.size() < 2) throw InvalidInput("perimeter needs at least 2 points");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) total += distance(points[i], points[i + 1]);
  if (closed) total += distance(points.back(), points.front());
  return total;
}

double signed_area(std::span<const Point2> points) {
  double twice = 0.0;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(points[i], points[(i + 1) % n]);
  return 0.5 * twice;
}

namespace {

// Perpendicular distance from p to the line through a and b; falls back to
// the point distance when a == b.
double chord_deviation(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len = std::hypot(ab.x, ab.y);
  if (len == 0.0) return distance(p, a);
  return std::abs(cross(ab, p - a)) / len;
}

// Douglas-Peucker over points[order[first..last]], marking kept entries.
void simplify_arc(std::span<const Point2> points, std::span<const std::size_t> order,
                  double tolerance, std::vector<char>& keep) {
  if (order.size() < 3) return;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, order.size() - 1}};
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    const Point2 a = points[order[lo]];
    const Point2 b = points[order[hi]];
    double best = -1.0;
    std::size_t best_k = lo;
    for (std::size_t k = lo + 1; k < hi; ++k) {
      const double d = chord_deviation(points[order[k]], a, b);
      if (d > best) {
        best = d;
        best_k = k;
      }
    }
    if (best > tolerance) {
      keep[order[best_k]] = 1;
      stack.push_back({best_k, hi});
      stack.push_back({lo, best_k});
    }
  }
}

std::vector<Point2> convex_hull(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// The first index pair (i < j) in input order at maximal mutual distance.
std::pair<std::size_t, std::size_t> farthest_pair(std::span<const Point2> points) {
  std::vector<Point2> hull = convex_hull({points.begin(), points.end()});
  auto lex_less = [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
  std::sort(hull.begin(), hull.end(), lex_less);

  // Diameter endpoints are hull vertices; every input point sitting on a hull
  // vertex is a candidate so that ties resolve by input order.
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::binary_search(hull.begin(), hull.end(), points[i], lex_less)) {
      candidates.push_back(i);
    }
  }
  double best = -1.0;
  std::pair<std::size_t, std::size_t> pair{0, 1};
  for (std::size_t a = 0; a < candidates.size(); ++a) {
    for (std::size_t b = a + 1; b < candidates.size(); ++b) {
      const double d = squared_distance(points[candidates[a]], points[candidates[b]]);
      if (d > best) {
        best = d;
        pair = {candidates[a], candidates[b]};
      }
    }
  }
  return pair;
}

}  // namespace

std::vector<std::size_t> simplify_polyline_indices(std::span<const Point2> points,
                                                   double tolerance, bool closed) {
  if (points.size() < 2) throw InvalidInput("degenerate polyline");
  if (!(tolerance >= 0.0)) throw InvalidInput("tolerance must be >= 0");
  const std::size_t n = points.size();
  std::vector<char> keep(n, 0);

  if (!closed || n < 3) {
    keep.front() = 1;
    keep.back() = 1;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    simplify_arc(points, order, tolerance, keep);
  } else {
    const auto [i, j] = farthest_pair(points);
    keep[i] = 1;
    keep[j] = 1;
    std::vector<std::size_t> arc;
    for (std::size_t k = i; k <= j; ++k) arc.push_back(k);
    simplify_arc(points, arc, tolerance, keep);
    arc.clear();
    for (std::size_t k = j; k < n; ++k) arc.push_back(k);
    for (std::size_t k = 0; k <= i; ++k) arc.push_back(k);
    simplify_arc(points, arc, tolerance, keep);
  }

  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (keep[k]) out.push_back(k);
  }
  return out;
}

std::vector<Point2> simplify_polyline(std::span<const Point2> points, double tolerance,
                                      bool closed) {
  std::vector<Point2> out;
  for (std::size_t k : simplify_polyline_indices(points, tolerance, closed)) {
    out.push_back(points[k]);
  }
  return out;
}

Line2 fit_line_least_squares(std::span<const Point2> points) {
  if (points.size() < 2) throw GeometryError("degenerate point set");
  double mx = 0.0, my = 0.0;
  for (const Point2& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const Point2& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx + syy == 0.0) throw GeometryError("degenerate point set");

  // Principal axis of the 2x2 scatter matrix; the normal is perpendicular.
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  Point2 normal{-std::sin(theta), std::cos(theta)};
  if (normal.x < 0.0 || (normal.x == 0.0 && normal.y < 0.0)) normal = -1.0 * normal;
  return {normal, normal.x * mx + normal.y * my};
}

Point2 intersect_lines(const Line2& a, const Line2& b) {
  const double det = cross(a.normal, b.normal);
  if (std::abs(det) <= 1e-9) throw GeometryError("parallel lines");
  return {(a.offset * b.normal.y - b.offset * a.normal.y) / det,
          (a.normal.x * b.offset - b.normal.x * a.offset) / det};
}

namespace {

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

bool is_simple_polygon(std::span<const Point2> points) {
  const std::size_t n = points.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(points[i], points[(i + 1) % n], points[j], points[(j + 1) % n])) {
        return false;
      }
    }
  }
  return std::abs(signed_area(points)) > 0.0;
}

}  // namespace runway
