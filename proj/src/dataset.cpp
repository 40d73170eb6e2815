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

#include "runway/dataset.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "runway/error.hpp"

namespace runway {

const char* category_name(int category_id) {
  switch (static_cast<Category>(category_id)) {
    case Category::kRunway:
      return "runway";
    case Category::kThresholdMarking:
      return "threshold_marking";
    case Category::kAimingMarking:
      return "aiming_marking";
  }
  return "unknown";
}

std::vector<CategoryInfo> default_categories() {
  return {{1, "runway"}, {2, "threshold_marking"}, {3, "aiming_marking"}};
}

double polygon_area(const std::vector<Contour>& segmentation) {
  double total = 0.0;
  for (const Contour& c : segmentation) total += std::abs(signed_area(c.points));
  return total;
}

const ImageInfo* DatasetManifest::find_image(std::int64_t id) const {
  for (const auto& img : images) {
    if (img.id == id) return &img;
  }
  return nullptr;
}

bool DatasetManifest::has_category(int id) const {
  for (const auto& c : categories) {
    if (c.id == id) return true;
  }
  return false;
}

void validate_manifest(const DatasetManifest& manifest) {
  std::unordered_set<std::int64_t> images;
  for (const auto& img : manifest.images) {
    if (!images.insert(img.id).second) {
      throw InvalidInput("duplicate image id " + std::to_string(img.id));
    }
    if (img.width < 1 || img.height < 1) {
      throw InvalidInput("image " + std::to_string(img.id) + " has invalid size");
    }
  }
  std::unordered_set<int> categories;
  for (const auto& c : manifest.categories) {
    if (!categories.insert(c.id).second) {
      throw InvalidInput("duplicate category id " + std::to_string(c.id));
    }
  }
  std::unordered_set<std::int64_t> annotations;
  for (const auto& a : manifest.annotations) {
    if (!annotations.insert(a.id).second) {
      throw InvalidInput("duplicate annotation id " + std::to_string(a.id));
    }
    if (!images.contains(a.image_id)) {
      throw InvalidInput("annotation " + std::to_string(a.id) + " references missing image id " +
                         std::to_string(a.image_id));
    }
    if (!categories.contains(a.category_id)) {
      throw InvalidInput("annotation " + std::to_string(a.id) +
                         " references missing category id " + std::to_string(a.category_id));
    }
    for (const auto& poly : a.segmentation) {
      if (poly.points.size() < 3) {
        throw InvalidInput("annotation " + std::to_string(a.id) + ": degenerate polygon");
      }
    }
    if (a.score && !(*a.score >= 0.0 && *a.score <= 1.0)) {
      throw InvalidInput("annotation " + std::to_string(a.id) + ": score outside [0, 1]");
    }
  }
}

}  // namespace runway
