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

#include <array>
#include <cstdint>
#include <vector>

#include "runway/annotate.hpp"
#include "runway/dataset.hpp"
#include "runway/geometry.hpp"

namespace runway::synthetic {

struct SyntheticSceneSpec {
  std::uint64_t seed = 0;
  int count = 1;
  // Standard deviation of the boundary displacement, in pixels.
  double noise_sigma = 2.0;
  int width = 1920;
  int height = 1080;
  // Fraction of scenes that carry only a runway.
  double runway_only_fraction = 0.0;

  void validate() const;
};

// Rasterized noisy instance, stored as a window of the frame.
struct MaskPatch {
  std::int64_t annotation_id = 0;
  Box window;
  BinaryMask mask{1, 1};
};

struct SyntheticScene {
  ImageInfo image;
  std::array<Point2, 4> runway;  // image corners, canonical corner order
  annotate::Homography canonical_to_image;
  std::vector<InstanceAnnotation> clean;
  // Traced borders of the noisy masks, scored like predictions.
  std::vector<InstanceAnnotation> noisy;
  std::vector<MaskPatch> masks;
};

struct SyntheticCorpus {
  DatasetManifest clean;
  DatasetManifest noisy;
  std::vector<MaskPatch> masks;
};

// Threshold marking plus the two aiming-marking strips, as fractions of the
// rectified runway.
const annotate::ProportionModel& canonical_layout();

// Scene `index` of the corpus; depends only on (spec, index).
SyntheticScene generate_scene(const SyntheticSceneSpec& spec, std::size_t index);

SyntheticCorpus generate_synthetic_corpus(const SyntheticSceneSpec& spec, bool keep_masks = true);

// Small deterministic generator shared by fixtures and tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();

 private:
  std::uint64_t state_;
};

}  // namespace runway::synthetic
