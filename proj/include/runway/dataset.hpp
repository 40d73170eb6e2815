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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "runway/geometry.hpp"

namespace runway {

enum class Category : int {
  kRunway = 1,
  kThresholdMarking = 2,
  kAimingMarking = 3,
};

const char* category_name(int category_id);

struct ImageInfo {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;
  std::optional<std::string> group_id;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

struct CategoryInfo {
  int id = 0;
  std::string name;

  friend bool operator==(const CategoryInfo&, const CategoryInfo&) = default;
};

// One instance: a category plus one or more closed polygons in continuous
// image coordinates (pixel (i, j) covers [i, i+1) x [j, j+1)).
struct InstanceAnnotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  int category_id = 0;
  std::vector<Contour> segmentation;
  double area = 0.0;
  std::optional<double> score;
  std::optional<std::string> group_id;

  friend bool operator==(const InstanceAnnotation&, const InstanceAnnotation&) = default;
};

// Sum of absolute shoelace areas over the polygons.
double polygon_area(const std::vector<Contour>& segmentation);

struct DatasetManifest {
  std::vector<ImageInfo> images;
  std::vector<CategoryInfo> categories;
  std::vector<InstanceAnnotation> annotations;

  const ImageInfo* find_image(std::int64_t id) const;
  bool has_category(int id) const;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

// The three fixed categories.
std::vector<CategoryInfo> default_categories();

// Checks unique ids and that every annotation references an existing image
// and category. Throws InvalidInput naming the offending id.
void validate_manifest(const DatasetManifest& manifest);

}  // namespace runway
