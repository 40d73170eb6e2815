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

#include <array>
#include <cstdint>

#include "runway/geometry.hpp"

namespace runway {

namespace {

// Neighbour offsets in on-screen clockwise order starting east.
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(int fx, int fy, int tx, int ty) {
  for (int d = 0; d < 8; ++d) {
    if (fx + kDx[d] == tx && fy + kDy[d] == ty) return d;
  }
  return -1;
}

// Border following for the outer border whose first raster pixel is (sx, sy).
Contour follow_border(const BinaryMask& mask, int sx, int sy) {
  auto fg = [&](int x, int y) { return mask.contains(x, y) && mask.at(x, y); };

  Contour out;
  out.closed = true;

  // Clockwise from the west neighbour, which is background by construction.
  int p1x = 0, p1y = 0;
  bool found = false;
  for (int k = 0; k < 8; ++k) {
    const int d = (4 + k) % 8;
    if (fg(sx + kDx[d], sy + kDy[d])) {
      p1x = sx + kDx[d];
      p1y = sy + kDy[d];
      found = true;
      break;
    }
  }
  if (!found) {
    out.points.push_back({static_cast<double>(sx), static_cast<double>(sy)});
    return out;
  }

  int px = p1x, py = p1y;  // previous
  int cx = sx, cy = sy;    // current
  while (true) {
    // Counter-clockwise from the element after the previous pixel.
    const int back = direction_of(cx, cy, px, py);
    int nx = cx, ny = cy;
    for (int k = 1; k <= 8; ++k) {
      const int d = ((back - k) % 8 + 8) % 8;
      if (fg(cx + kDx[d], cy + kDy[d])) {
        nx = cx + kDx[d];
        ny = cy + kDy[d];
        break;
      }
    }
    out.points.push_back({static_cast<double>(cx), static_cast<double>(cy)});
    if (nx == sx && ny == sy && cx == p1x && cy == p1y) break;
    px = cx;
    py = cy;
    cx = nx;
    cy = ny;
  }
  return out;
}

}  // namespace

std::vector<Component> find_components(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<std::int32_t> label(static_cast<std::size_t>(w) * h, 0);
  std::vector<Component> components;
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!mask.at(x, y) || label[idx] != 0) continue;
      const auto id = static_cast<std::int32_t>(components.size() + 1);
      Component comp;
      comp.bounds = {x, y, x + 1, y + 1};
      label[idx] = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const auto [qx, qy] = stack.back();
        stack.pop_back();
        ++comp.area;
        comp.bounds = box_union(comp.bounds, {qx, qy, qx + 1, qy + 1});
        for (int d = 0; d < 8; ++d) {
          const int nx = qx + kDx[d];
          const int ny = qy + kDy[d];
          if (!mask.contains(nx, ny) || !mask.at(nx, ny)) continue;
          const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
          if (label[nidx] != 0) continue;
          label[nidx] = id;
          stack.push_back({nx, ny});
        }
      }
      comp.border = follow_border(mask, x, y);
      components.push_back(std::move(comp));
    }
  }
  return components;
}

std::vector<Contour> trace_contours(const BinaryMask& mask) {
  std::vector<Contour> out;
  for (auto& comp : find_components(mask)) out.push_back(std::move(comp.border));
  return out;
}

BinaryMask component_mask(const BinaryMask& mask, const Component& component) {
  BinaryMask out(mask.width(), mask.height());
  if (component.border.points.empty()) return out;
  const int sx = static_cast<int>(component.border.points.front().x);
  const int sy = static_cast<int>(component.border.points.front().y);
  std::vector<std::pair<int, int>> stack{{sx, sy}};
  out.set(sx, sy);
  while (!stack.empty()) {
    const auto [qx, qy] = stack.back();
    stack.pop_back();
    for (int d = 0; d < 8; ++d) {
      const int nx = qx + kDx[d];
      const int ny = qy + kDy[d];
      if (!mask.contains(nx, ny) || !mask.at(nx, ny) || out.at(nx, ny)) continue;
      out.set(nx, ny);
      stack.push_back({nx, ny});
    }
  }
  return out;
}

Contour to_pixel_centres(const Contour& contour, Point2 origin) {
  Contour out;
  out.closed = contour.closed;
  out.points.reserve(contour.points.size());
  for (const Point2& p : contour.points) {
    out.points.push_back({p.x + origin.x + 0.5, p.y + origin.y + 0.5});
  }
  return out;
}

}  // namespace runway
