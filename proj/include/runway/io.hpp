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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "runway/dataset.hpp"
#include "runway/geometry.hpp"

namespace runway::io {

// COCO JSON with polygon segmentation. RLE segmentation is rejected. Missing
// areas are filled from the polygons' shoelace area.
DatasetManifest parse_coco(std::string_view text, std::string_view source = "<memory>");
std::string format_coco(const DatasetManifest& manifest);

DatasetManifest read_coco(const std::filesystem::path& path);

// Predictions given either as a full COCO manifest or as a COCO results list
// (a bare array of annotations).
std::vector<InstanceAnnotation> parse_predictions(std::string_view text,
                                                  std::string_view source = "<memory>");
std::vector<InstanceAnnotation> read_predictions(const std::filesystem::path& path);
void write_coco(const DatasetManifest& manifest, const std::filesystem::path& path);

using LabelMap = std::map<std::string, int, std::less<>>;

// runway / threshold / aiming, with a few common spellings.
LabelMap default_label_map();

struct LabelMeImage {
  std::string file_name;
  int width = 0;
  int height = 0;
  std::vector<InstanceAnnotation> annotations;
  std::vector<std::string> warnings;  // skipped non-polygon shapes
};

LabelMeImage parse_labelme(std::string_view text, const LabelMap& labels = default_label_map(),
                           std::string_view source = "<memory>");
LabelMeImage read_labelme(const std::filesystem::path& path,
                          const LabelMap& labels = default_label_map());

// Binary P5 graymap, 0 background and 255 foreground. Any non-zero sample
// reads as foreground.
std::string encode_pgm(const BinaryMask& mask);
BinaryMask decode_pgm(std::string_view bytes);
void write_pgm(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask read_pgm(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace runway::io
