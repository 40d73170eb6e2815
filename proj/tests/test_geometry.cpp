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
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "runway/error.hpp"
#include "runway/geometry.hpp"
#include "runway/synthetic.hpp"

using namespace runway;

namespace {

BinaryMask filled(int w, int h, const Box& box) {
  BinaryMask m(w, h);
  for (int y = box.y0; y < box.y1; ++y) {
    for (int x = box.x0; x < box.x1; ++x) m.set(x, y);
  }
  return m;
}

BinaryMask random_mask(synthetic::Rng& rng, int w, int h, double density) {
  BinaryMask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) m.set(x, y, rng.uniform() < density);
  }
  return m;
}

Contour poly(std::initializer_list<Point2> pts) { return Contour{pts, true}; }

}  // namespace

TEST_CASE("mask basics") {
  BinaryMask m(4, 3);
  CHECK(m.empty());
  CHECK_FALSE(m.bounds().has_value());
  m.set(1, 2);
  m.set(3, 0);
  CHECK(m.count() == 2);
  CHECK(*m.bounds() == Box{1, 0, 4, 3});
  CHECK_THROWS_AS(BinaryMask(0, 3), InvalidInput);

  const BinaryMask crop = m.crop({1, 1, 5, 4});
  CHECK(crop.width() == 4);
  CHECK(crop.at(0, 1));
  CHECK_FALSE(crop.at(3, 2));

  BinaryMask big(6, 6);
  big.paste(m, 4, 4);
  CHECK(big.count() == 0);  // (1,2) lands at (5,6), outside
  big.paste(m, 2, 2);
  CHECK(big.at(3, 4));
  CHECK(big.at(5, 2));
}

TEST_CASE("structuring element validates size") {
  CHECK_THROWS_AS(StructuringElement(0), InvalidInput);
  CHECK_THROWS_AS(StructuringElement(4), InvalidInput);
  CHECK(StructuringElement(5).radius() == 2);
}

TEST_CASE("tracing a single pixel gives one point") {
  BinaryMask m(3, 3);
  m.set(1, 1);
  const auto contours = trace_contours(m);
  REQUIRE(contours.size() == 1);
  CHECK(contours[0].points == std::vector<Point2>{{1, 1}});
}

TEST_CASE("tracing a square visits exactly its border pixels") {
  const BinaryMask m = filled(20, 20, {5, 5, 15, 15});
  const auto contours = trace_contours(m);
  REQUIRE(contours.size() == 1);
  const auto& pts = contours[0].points;
  CHECK(pts.size() == 36);
  std::set<std::pair<int, int>> got, want;
  for (auto p : pts) got.insert({static_cast<int>(p.x), static_cast<int>(p.y)});
  for (int y = 5; y < 15; ++y) {
    for (int x = 5; x < 15; ++x) {
      if (x == 5 || x == 14 || y == 5 || y == 14) want.insert({x, y});
    }
  }
  CHECK(got == want);
  // counter-clockwise on screen: negative y-up shoelace area
  CHECK(signed_area(pts) < 0.0);
}

TEST_CASE("tracing counts 8-connected components") {
  BinaryMask m(12, 12);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) {
      m.set(x, y);
      m.set(x + 6, y + 6);
    }
  }
  CHECK(trace_contours(m).size() == 2);
  m.set(3, 3);
  m.set(4, 4);
  m.set(5, 5);  // diagonal bridge joins them under 8-connectivity
  CHECK(trace_contours(m).size() == 1);
  CHECK(trace_contours(BinaryMask(5, 5)).empty());
}

TEST_CASE("traced border pixels are all foreground and touch background") {
  synthetic::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const BinaryMask m = random_mask(rng, 24, 18, 0.55);
    std::size_t total = 0;
    for (const auto& c : find_components(m)) {
      total += c.area;
      for (auto p : c.border.points) {
        const int x = static_cast<int>(p.x), y = static_cast<int>(p.y);
        REQUIRE(m.at(x, y));
        bool touches = false;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (std::abs(dx) + std::abs(dy) != 1) continue;
            touches |= !m.contains(x + dx, y + dy) || !m.at(x + dx, y + dy);
          }
        }
        CHECK(touches);
      }
    }
    CHECK(total == m.count());
  }
}

TEST_CASE("component mask isolates one component") {
  BinaryMask m(10, 10);
  m.set(1, 1);
  m.set(2, 2);
  m.set(7, 7);
  const auto comps = find_components(m);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].area == 2);
  const BinaryMask only = component_mask(m, comps[1]);
  CHECK(only.count() == 1);
  CHECK(only.at(7, 7));
}

TEST_CASE("opening examples") {
  const StructuringElement b3(3);
  CHECK(morphological_open(BinaryMask(8, 8), b3, 1).empty());

  BinaryMask dot(9, 9);
  dot.set(4, 4);
  CHECK(morphological_open(dot, b3, 1).empty());

  const BinaryMask square = filled(20, 20, {5, 5, 15, 15});
  CHECK(morphological_open(square, b3, 3) == square);
  CHECK(morphological_open(square, b3, 3) == oracle::open(square, 3, 3));

  CHECK(morphological_open(dot, StructuringElement(1), 3) == dot);
  CHECK_THROWS_AS(morphological_open(dot, b3, 0), InvalidInput);
}

TEST_CASE("morphology matches the brute-force oracle") {
  synthetic::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 5 + static_cast<int>(rng.uniform() * 20);
    const int h = 5 + static_cast<int>(rng.uniform() * 20);
    const BinaryMask m = random_mask(rng, w, h, 0.6);
    for (int size : {1, 3, 5}) {
      const StructuringElement e(size);
      CHECK(erode(m, e) == oracle::erode(m, size));
      CHECK(dilate(m, e) == oracle::dilate(m, size));
      const BinaryMask opened = morphological_open(m, e, 1);
      CHECK(opened == oracle::open(m, size, 1));
      // anti-extensive and idempotent
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (opened.at(x, y)) REQUIRE(m.at(x, y));
        }
      }
      CHECK(morphological_open(opened, e, 1) == opened);
    }
  }
}

TEST_CASE("centroid") {
  BinaryMask one(10, 10);
  one.set(3, 7);
  CHECK(centroid(one) == Point2{3, 7});

  const Point2 c = centroid(filled(12, 6, {0, 0, 10, 4}));
  CHECK(c.x == doctest::Approx(4.5));
  CHECK(c.y == doctest::Approx(1.5));

  BinaryMask plus(21, 21);
  for (int k = 5; k <= 15; ++k) {
    plus.set(k, 10);
    plus.set(10, k);
  }
  const Point2 p = centroid(plus);
  CHECK(p.x == doctest::Approx(10.0));
  CHECK(p.y == doctest::Approx(10.0));

  CHECK_THROWS_WITH_AS(centroid(BinaryMask(3, 3)), "empty mask", GeometryError);
}

TEST_CASE("douglas-peucker examples") {
  const std::vector<Point2> line{{0, 0}, {1, 1}, {2, 2}};
  CHECK(simplify_polyline(line, 0.1, false) == std::vector<Point2>{{0, 0}, {2, 2}});

  const std::vector<Point2> square{{0, 0}, {5, 0}, {10, 0}, {10, 5}, {10, 10},
                                   {5, 10}, {0, 10}, {0, 5}};
  const std::vector<Point2> corners{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  CHECK(simplify_polyline(square, 0.5, true) == corners);

  const std::vector<Point2> zigzag{{0, 0}, {1, 0.3}, {2, -0.2}, {3, 0.4}, {4, 0}};
  CHECK(simplify_polyline(zigzag, 0.0, false) == zigzag);

  CHECK_THROWS_WITH_AS(simplify_polyline(std::vector<Point2>{{1, 1}}, 1.0, false),
                       "degenerate polyline", InvalidInput);
}

TEST_CASE("douglas-peucker agrees with the recursive reference") {
  synthetic::Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 60);
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < n; ++i) {
      // coarse grid to provoke distance ties
      pts.push_back({std::round(rng.uniform(0, 20)), std::round(rng.uniform(0, 20))});
    }
    const double tol = rng.uniform(0, 3);
    const bool closed = trial % 2 == 0;
    const auto idx = simplify_polyline_indices(pts, tol, closed);
    CHECK(idx == oracle::douglas_peucker(pts, tol, closed));
    CHECK(std::is_sorted(idx.begin(), idx.end()));

    // fixed point
    const auto once = simplify_polyline(pts, tol, closed);
    if (once.size() >= 2) CHECK(simplify_polyline(once, tol, closed) == once);
  }
}

TEST_CASE("total least squares lines") {
  std::vector<Point2> on_line;
  for (int k = -3; k <= 3; ++k) on_line.push_back({double(k), 2.0 * k + 1.0});
  const Line2 l = fit_line_least_squares(on_line);
  CHECK(std::hypot(l.normal.x, l.normal.y) == doctest::Approx(1.0).epsilon(1e-12));
  for (auto p : on_line) CHECK(std::abs(l.signed_distance(p)) < 1e-12);

  const Line2 v = fit_line_least_squares(std::vector<Point2>{{3, 0}, {3, 1}, {3, 5}});
  CHECK(v.normal.x == doctest::Approx(1.0));
  CHECK(std::abs(v.normal.y) < 1e-12);
  CHECK(v.offset == doctest::Approx(3.0));

  const double eps = 0.25;
  const double s = eps / std::sqrt(2.0);
  std::vector<Point2> pert;
  for (int k = 0; k < 10; ++k) {
    const double sign = k % 2 == 0 ? 1.0 : -1.0;
    for (double sg : {sign, -sign}) pert.push_back({k - sg * s, k + sg * s});
  }
  const Line2 d = fit_line_least_squares(pert);
  CHECK(std::abs(d.normal.x - 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(d.normal.y + 1.0 / std::sqrt(2.0)) < 1e-9);
  CHECK(std::abs(d.offset) < 1e-9);

  CHECK_THROWS_WITH_AS(fit_line_least_squares(std::vector<Point2>{{1, 1}, {1, 1}}),
                       "degenerate point set", GeometryError);
}

TEST_CASE("line fit is rotation equivariant") {
  synthetic::Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2> pts;
    for (int k = 0; k < 20; ++k) {
      const double t = rng.uniform(-10, 10);
      pts.push_back({t, 0.4 * t + rng.uniform(-0.5, 0.5)});
    }
    const double a = rng.uniform(0, 2 * std::numbers::pi);
    const double c = std::cos(a), s = std::sin(a);
    std::vector<Point2> rotated;
    for (auto p : pts) rotated.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
    const Line2 l0 = fit_line_least_squares(pts);
    const Line2 l1 = fit_line_least_squares(rotated);
    const Point2 n{c * l0.normal.x - s * l0.normal.y, s * l0.normal.x + c * l0.normal.y};
    // normals agree up to sign
    CHECK(std::abs(std::abs(dot(n, l1.normal)) - 1.0) < 1e-6);
  }
}

TEST_CASE("line intersection") {
  const Line2 x0{{1, 0}, 0}, y0{{0, 1}, 0};
  CHECK(intersect_lines(x0, y0) == Point2{0, 0});
  const double r = 1.0 / std::sqrt(2.0);
  const Point2 p = intersect_lines({{-r, r}, 0}, {{r, r}, 2 * r});
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(intersect_lines(x0, {{1, 0}, 5}), "parallel lines", GeometryError);
}

TEST_CASE("rasterization examples") {
  const BinaryMask m = rasterize_polygon(poly({{0, 0}, {10, 0}, {10, 4}, {0, 4}}), 20, 10);
  CHECK(m.count() == 40);
  CHECK(m == filled(20, 10, {0, 0, 10, 4}));

  CHECK(rasterize_polygon(poly({{50, 50}, {60, 50}, {55, 60}}), 20, 10).empty());

  std::vector<Point2> disc;
  for (int k = 0; k < 64; ++k) {
    const double a = 2 * std::numbers::pi * k / 64;
    disc.push_back({100 + 60 * std::cos(a), 80 + 60 * std::sin(a)});
  }
  const double area = std::abs(signed_area(disc));
  const double pixels = static_cast<double>(rasterize_polygon({disc, true}, 200, 160).count());
  CHECK(std::abs(pixels - area) / area < 0.05);

  CHECK_THROWS_WITH_AS(rasterize_polygon(Contour{{{0, 0}, {4, 4}}, true}, 5, 5),
                       "not a closed polygon", InvalidInput);
  CHECK_THROWS_AS(rasterize_polygon(Contour{{{0, 0}, {4, 0}, {4, 4}}, false}, 5, 5),
                  InvalidInput);
}

TEST_CASE("centres on edges are included") {
  // triangle whose hypotenuse passes through centres (k + 0.5, k + 0.5)
  const BinaryMask m = rasterize_polygon(poly({{0.5, 0.5}, {6.5, 0.5}, {6.5, 6.5}}), 8, 8);
  for (int k = 0; k <= 6; ++k) {
    CHECK(m.at(k, k));
    CHECK(m.at(k, 0));
    CHECK(m.at(6, k));
  }
  CHECK(m.count() == 28);
}

TEST_CASE("rasterization matches the point-in-polygon oracle") {
  synthetic::Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 8);
    Contour c;
    for (std::size_t i = 0; i < n; ++i) {
      Point2 p{rng.uniform(-5, 45), rng.uniform(-5, 35)};
      if (trial % 3 == 0) p = {std::round(p.x * 2) / 2, std::round(p.y * 2) / 2};
      c.points.push_back(p);
    }
    const BinaryMask got = rasterize_polygon(c, 40, 30);
    const BinaryMask want = oracle::rasterize({c}, 40, 30);
    CHECK(got == want);

    const Box window{7, 3, 31, 25};
    const BinaryMask part = rasterize_polygons(std::span<const Contour>(&c, 1), window);
    CHECK(part == want.crop(window));
  }
}

TEST_CASE("trace then rasterize reproduces convex masks") {
  synthetic::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Point2 ctr{rng.uniform(30, 50), rng.uniform(25, 35)};
    const auto corners = oracle::rectangle_corners(ctr, rng.uniform(10, 40), rng.uniform(10, 30),
                                                   rng.uniform(0, 3));
    const Contour quad{{corners.begin(), corners.end()}, true};
    const BinaryMask m = rasterize_polygon(quad, 80, 60);
    if (m.count() < 100) continue;
    const auto contours = trace_contours(m);
    REQUIRE(contours.size() == 1);
    const BinaryMask back = rasterize_polygon(to_pixel_centres(contours[0]), 80, 60);
    CHECK(mask_iou(back, m) >= 0.95);
  }
}

TEST_CASE("mask iou") {
  const BinaryMask a = filled(30, 20, {0, 0, 10, 10});
  CHECK(mask_iou(a, a) == 1.0);
  CHECK(mask_iou(a, filled(30, 20, {15, 0, 25, 10})) == 0.0);
  CHECK(mask_iou(a, filled(30, 20, {5, 0, 15, 10})) == doctest::Approx(1.0 / 3.0));
  CHECK(mask_iou(BinaryMask(4, 4), BinaryMask(4, 4)) == 0.0);
  CHECK_THROWS_AS(mask_iou(a, BinaryMask(10, 10)), InvalidInput);

  synthetic::Rng rng(3);
  const BinaryMask x = random_mask(rng, 15, 15, 0.4), y = random_mask(rng, 15, 15, 0.4);
  CHECK(mask_iou(x, y) == mask_iou(y, x));
  CHECK(mask_iou(x, y) == doctest::Approx(oracle::iou(x, y)));
}

TEST_CASE("perimeter") {
  CHECK(perimeter(std::vector<Point2>{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true) == 4.0);
  CHECK(perimeter(std::vector<Point2>{{0, 0}, {3, 4}}, false) == 5.0);
  CHECK(perimeter(std::vector<Point2>{{0, 0}, {100, 0}, {100, 50}, {0, 50}}, true) == 300.0);
  CHECK_THROWS_AS(perimeter(std::vector<Point2>{{0, 0}}, false), InvalidInput);
}

TEST_CASE("simple polygon check") {
  CHECK(is_simple_polygon(std::vector<Point2>{{0, 0}, {4, 0}, {4, 4}, {0, 4}}));
  CHECK_FALSE(is_simple_polygon(std::vector<Point2>{{0, 0}, {4, 4}, {4, 0}, {0, 4}}));
}
