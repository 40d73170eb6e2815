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
#include <string>

#include "runway/error.hpp"
#include "runway/geometry.hpp"

namespace runway {

Box box_union(const Box& a, const Box& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

Box box_intersection(const Box& a, const Box& b) {
  Box out{std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
          std::min(a.y1, b.y1)};
  if (out.empty()) return {};
  return out;
}

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw InvalidInput("mask dimensions must be positive, got " + std::to_string(width) +
                       "x" + std::to_string(height));
  }
  bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::optional<Box> BinaryMask::bounds() const {
  int x0 = width_, y0 = height_, x1 = -1, y1 = -1;
  for (int y = 0; y < height_; ++y) {
    const std::uint8_t* row = bits_.data() + index(0, y);
    const std::uint8_t* first = std::find(row, row + width_, std::uint8_t{1});
    if (first == row + width_) continue;
    const int last =
        width_ - 1 -
        static_cast<int>(std::find(std::make_reverse_iterator(row + width_),
                                   std::make_reverse_iterator(row), std::uint8_t{1}) -
                         std::make_reverse_iterator(row + width_));
    x0 = std::min(x0, static_cast<int>(first - row));
    x1 = std::max(x1, last);
    y0 = std::min(y0, y);
    y1 = y;
  }
  if (y1 < 0) return std::nullopt;
  return Box{x0, y0, x1 + 1, y1 + 1};
}

BinaryMask BinaryMask::crop(const Box& window) const {
  BinaryMask out(std::max(window.width(), 1), std::max(window.height(), 1));
  const Box overlap = box_intersection(window, Box{0, 0, width_, height_});
  for (int y = overlap.y0; y < overlap.y1; ++y) {
    const auto* src = bits_.data() + index(overlap.x0, y);
    std::copy(src, src + overlap.width(),
              out.bits_.data() + out.index(overlap.x0 - window.x0, y - window.y0));
  }
  return out;
}

void BinaryMask::paste(const BinaryMask& patch, int x0, int y0) {
  const Box overlap = box_intersection(Box{x0, y0, x0 + patch.width(), y0 + patch.height()},
                                       Box{0, 0, width_, height_});
  for (int y = overlap.y0; y < overlap.y1; ++y) {
    const auto* src = patch.bits_.data() + patch.index(overlap.x0 - x0, y - y0);
    std::copy(src, src + overlap.width(), bits_.data() + index(overlap.x0, y));
  }
}

StructuringElement::StructuringElement(int size) : size_(size) {
  if (size < 1 || size % 2 == 0) {
    throw InvalidInput("structuring element size must be odd and >= 1, got " +
                       std::to_string(size));
  }
}

namespace {

// One separable pass of a square min/max filter. `need_all` selects erosion.
// Samples outside the line count as background.
void filter_line(const std::uint8_t* in, std::uint8_t* out, int n, std::ptrdiff_t stride,
                 int radius, bool need_all, std::vector<int>& prefix) {
  prefix.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + in[i * stride];
  for (int i = 0; i < n; ++i) {
    const int lo = i - radius;
    const int hi = i + radius;
    const int set = prefix[std::min(hi, n - 1) + 1] - prefix[std::max(lo, 0)];
    if (need_all) {
      out[i * stride] = (lo >= 0 && hi < n && set == 2 * radius + 1) ? 1 : 0;
    } else {
      out[i * stride] = set > 0 ? 1 : 0;
    }
  }
}

BinaryMask separable_filter(const BinaryMask& mask, StructuringElement element,
                            bool need_all) {
  const int r = element.radius();
  if (r == 0) return mask;
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask tmp(w, h);
  BinaryMask out(w, h);
  std::vector<int> prefix;
  for (int y = 0; y < h; ++y) {
    filter_line(mask.data().data() + static_cast<std::ptrdiff_t>(y) * w,
                tmp.data().data() + static_cast<std::ptrdiff_t>(y) * w, w, 1, r, need_all,
                prefix);
  }
  for (int x = 0; x < w; ++x) {
    filter_line(tmp.data().data() + x, out.data().data() + x, h, w, r, need_all, prefix);
  }
  return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, StructuringElement element) {
  return separable_filter(mask, element, /*need_all=*/true);
}

BinaryMask dilate(const BinaryMask& mask, StructuringElement element) {
  return separable_filter(mask, element, /*need_all=*/false);
}

BinaryMask morphological_open(const BinaryMask& mask, StructuringElement element,
                              int repetitions) {
  if (repetitions < 1) {
    throw InvalidInput("open repetitions must be >= 1, got " + std::to_string(repetitions));
  }
  BinaryMask out = mask;
  for (int i = 0; i < repetitions; ++i) out = dilate(erode(out, element), element);
  return out;
}

Point2 centroid(const BinaryMask& mask) {
  double m00 = 0.0, m10 = 0.0, m01 = 0.0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      m00 += 1.0;
      m10 += x;
      m01 += y;
    }
  }
  if (m00 == 0.0) throw GeometryError("empty mask");
  return {m10 / m00, m01 / m00};
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidInput("mask dimension mismatch: " + std::to_string(a.width()) + "x" +
                       std::to_string(a.height()) + " vs " + std::to_string(b.width()) +
                       "x" + std::to_string(b.height()));
  }
  std::size_t inter = 0, uni = 0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    inter += da[i] & db[i];
    uni += da[i] | db[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace runway
