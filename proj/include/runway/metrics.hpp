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
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "runway/dataset.hpp"
#include "runway/geometry.hpp"

namespace runway::metrics {

// 0.50, 0.55, ..., 0.95.
std::vector<double> default_iou_thresholds();

struct EvalConfig {
  std::vector<double> iou_thresholds = default_iou_thresholds();
  // Ground-truth area buckets: small < small_max_area <= medium < large_min_area <= large.
  double small_max_area = 32.0 * 32.0;
  double large_min_area = 92.0 * 92.0;
  // DP tolerance used to refine contours before measuring smoothness.
  double as_tolerance = 1.0;

  void validate() const;
};

struct MetricSet {
  std::optional<double> ap;
  std::optional<double> ap50;
  std::optional<double> ap75;
  std::optional<double> ap_s;
  std::optional<double> ap_m;
  std::optional<double> ap_l;
};

struct EvalReport : MetricSet {
  std::optional<double> as_mean;
  std::size_t as_count = 0;
  std::size_t as_skipped = 0;  // degenerate predicted polygons
  std::map<int, MetricSet> per_category;
};

struct ScoredMatch {
  double score = 0.0;
  bool true_positive = false;
};

// Detections of one category at one IoU threshold, possibly pooled over images.
struct MatchSet {
  std::vector<ScoredMatch> detections;
  std::size_t num_ground_truth = 0;

  void append(const MatchSet& other);
};

struct PrCurve {
  std::vector<double> precision;
  std::vector<double> recall;
};

// Refined point count over log2 of the refined perimeter. Smaller is smoother.
double average_smoothness(const Contour& polygon, double tolerance = 1.0);

// Pixel IoU of two annotations rasterized in a width x height frame.
double annotation_iou(const InstanceAnnotation& a, const InstanceAnnotation& b, int width,
                      int height);

// Greedy matching of one image/category: predictions in descending score
// order each claim the unmatched ground truth of highest IoU >= threshold.
MatchSet match_instances(std::span<const InstanceAnnotation> ground_truth,
                         std::span<const InstanceAnnotation> predictions, double iou_threshold,
                         int width, int height);

// Cumulative precision/recall over detections sorted by descending score.
PrCurve pr_curve(const MatchSet& matches);

// 101-point interpolated area under the curve.
double average_precision(std::span<const double> precision, std::span<const double> recall);

EvalReport evaluate(const DatasetManifest& ground_truth,
                    std::span<const InstanceAnnotation> predictions,
                    const EvalConfig& config = {});

}  // namespace runway::metrics
