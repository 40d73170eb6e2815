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

#include "runway/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "runway/error.hpp"
#include "runway/parallel.hpp"

namespace runway::metrics {

std::vector<double> default_iou_thresholds() {
  std::vector<double> out;
  for (int k = 0; k < 10; ++k) out.push_back((50.0 + 5.0 * k) / 100.0);
  return out;
}

void EvalConfig::validate() const {
  if (iou_thresholds.empty()) throw InvalidInput("iou_thresholds must not be empty");
  for (std::size_t i = 0; i < iou_thresholds.size(); ++i) {
    const double t = iou_thresholds[i];
    if (!(t > 0.0 && t <= 1.0)) throw InvalidInput("iou thresholds must lie in (0, 1]");
    if (i > 0 && !(t > iou_thresholds[i - 1])) {
      throw InvalidInput("iou thresholds must be strictly increasing");
    }
  }
  if (!(small_max_area > 0.0 && small_max_area < large_min_area)) {
    throw InvalidInput("area buckets must satisfy 0 < small_max_area < large_min_area");
  }
  if (!(as_tolerance >= 0.0)) throw InvalidInput("as_tolerance must be >= 0");
}

void MatchSet::append(const MatchSet& other) {
  detections.insert(detections.end(), other.detections.begin(), other.detections.end());
  num_ground_truth += other.num_ground_truth;
}

double average_smoothness(const Contour& polygon, double tolerance) {
  if (!polygon.closed || polygon.points.size() < 3) throw InvalidInput("not a closed polygon");
  const auto refined = simplify_polyline(polygon.points, tolerance, true);
  const double length = perimeter(refined, true);
  if (!(length > 1.0)) throw GeometryError("degenerate perimeter");
  return static_cast<double>(refined.size()) / std::log2(length);
}

namespace {

struct Raster {
  Box window;
  BinaryMask mask{1, 1};
  std::size_t pixels = 0;
};

Raster rasterize(const InstanceAnnotation& ann, int width, int height) {
  Raster r;
  Box bounds;
  for (const Contour& poly : ann.segmentation) bounds = box_union(bounds, polygon_bounds(poly.points));
  r.window = box_intersection(bounds, Box{0, 0, width, height});
  if (r.window.empty()) return r;
  r.mask = rasterize_polygons(ann.segmentation, r.window);
  r.pixels = r.mask.count();
  return r;
}

double raster_iou(const Raster& a, const Raster& b) {
  const std::size_t uni_base = a.pixels + b.pixels;
  if (uni_base == 0) return 0.0;
  const Box overlap = box_intersection(a.window, b.window);
  std::size_t inter = 0;
  for (int y = overlap.y0; y < overlap.y1; ++y) {
    for (int x = overlap.x0; x < overlap.x1; ++x) {
      inter += a.mask.at(x - a.window.x0, y - a.window.y0) &&
               b.mask.at(x - b.window.x0, y - b.window.y0);
    }
  }
  return static_cast<double>(inter) / static_cast<double>(uni_base - inter);
}

enum class Outcome : std::uint8_t { kTruePositive, kFalsePositive, kIgnored };

// COCO-style greedy assignment. `ious[d][g]` is indexed by detection in
// descending score order and ground truth with non-ignored entries first.
std::vector<Outcome> assign(const std::vector<std::vector<double>>& ious,
                            const std::vector<char>& gt_ignored,
                            const std::vector<char>& det_out_of_range, double threshold) {
  std::vector<char> taken(gt_ignored.size(), 0);
  std::vector<Outcome> out(ious.size(), Outcome::kFalsePositive);
  for (std::size_t d = 0; d < ious.size(); ++d) {
    double best = std::min(threshold, 1.0 - 1e-10);
    long m = -1;
    for (std::size_t g = 0; g < gt_ignored.size(); ++g) {
      if (taken[g]) continue;
      if (m > -1 && !gt_ignored[m] && gt_ignored[g]) break;
      if (ious[d][g] < best) continue;
      best = ious[d][g];
      m = static_cast<long>(g);
    }
    if (m == -1) {
      out[d] = det_out_of_range[d] ? Outcome::kIgnored : Outcome::kFalsePositive;
      continue;
    }
    taken[m] = 1;
    out[d] = gt_ignored[m] ? Outcome::kIgnored : Outcome::kTruePositive;
  }
  return out;
}

std::vector<std::size_t> by_descending_score(std::span<const InstanceAnnotation> preds) {
  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *preds[a].score > *preds[b].score;
  });
  return order;
}

void require_scores(std::span<const InstanceAnnotation> preds) {
  for (const auto& p : preds) {
    if (!p.score) throw InvalidInput("prediction " + std::to_string(p.id) + " has no score");
  }
}

}  // namespace

double annotation_iou(const InstanceAnnotation& a, const InstanceAnnotation& b, int width,
                      int height) {
  return raster_iou(rasterize(a, width, height), rasterize(b, width, height));
}

MatchSet match_instances(std::span<const InstanceAnnotation> ground_truth,
                         std::span<const InstanceAnnotation> predictions, double iou_threshold,
                         int width, int height) {
  require_scores(predictions);
  std::vector<Raster> gt;
  for (const auto& g : ground_truth) gt.push_back(rasterize(g, width, height));
  const auto order = by_descending_score(predictions);
  std::vector<std::vector<double>> ious;
  for (std::size_t d : order) {
    const Raster pr = rasterize(predictions[d], width, height);
    auto& row = ious.emplace_back();
    for (const Raster& g : gt) row.push_back(raster_iou(pr, g));
  }
  const auto outcome = assign(ious, std::vector<char>(gt.size(), 0),
                              std::vector<char>(order.size(), 0), iou_threshold);
  MatchSet out;
  out.num_ground_truth = gt.size();
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.detections.push_back(
        {*predictions[order[k]].score, outcome[k] == Outcome::kTruePositive});
  }
  return out;
}

PrCurve pr_curve(const MatchSet& matches) {
  if (matches.num_ground_truth == 0) throw InvalidInput("recall undefined: no ground truth");
  std::vector<std::size_t> order(matches.detections.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return matches.detections[a].score > matches.detections[b].score;
  });
  PrCurve curve;
  double tp = 0.0, fp = 0.0;
  for (std::size_t k : order) {
    (matches.detections[k].true_positive ? tp : fp) += 1.0;
    curve.precision.push_back(tp / (tp + fp));
    curve.recall.push_back(tp / static_cast<double>(matches.num_ground_truth));
  }
  return curve;
}

double average_precision(std::span<const double> precision, std::span<const double> recall) {
  if (precision.size() != recall.size()) {
    throw InvalidInput("precision and recall must have equal length");
  }
  if (precision.empty()) return 0.0;
  std::vector<double> envelope(precision.begin(), precision.end());
  for (std::size_t i = envelope.size() - 1; i > 0; --i) {
    envelope[i - 1] = std::max(envelope[i - 1], envelope[i]);
  }
  double sum = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = k / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end()) sum += envelope[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / 101.0;
}

namespace {

struct AreaRange {
  double lo;
  double hi;
  bool contains(double a) const { return a >= lo && a < hi; }
};

std::optional<double> mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::optional<std::size_t> threshold_index(const std::vector<double>& thresholds, double t) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (std::abs(thresholds[i] - t) < 1e-12) return i;
  }
  return std::nullopt;
}

// One (image, category) cell of the evaluation grid.
struct Cell {
  std::vector<std::size_t> gt;     // indices into ground_truth.annotations
  std::vector<std::size_t> preds;  // indices into predictions, descending score
  std::vector<std::vector<double>> ious;  // [pred][gt]
};

}  // namespace

EvalReport evaluate(const DatasetManifest& ground_truth,
                    std::span<const InstanceAnnotation> predictions, const EvalConfig& config) {
  config.validate();
  validate_manifest(ground_truth);
  require_scores(predictions);

  std::unordered_map<std::int64_t, std::size_t> image_index;
  for (std::size_t i = 0; i < ground_truth.images.size(); ++i) {
    image_index[ground_truth.images[i].id] = i;
  }
  std::vector<int> categories;
  for (const auto& c : ground_truth.categories) categories.push_back(c.id);
  std::sort(categories.begin(), categories.end());
  std::unordered_map<int, std::size_t> category_index;
  for (std::size_t k = 0; k < categories.size(); ++k) category_index[categories[k]] = k;

  for (const auto& p : predictions) {
    if (!image_index.contains(p.image_id)) {
      throw InvalidInput("prediction " + std::to_string(p.id) + " references unknown image id " +
                         std::to_string(p.image_id));
    }
    if (!category_index.contains(p.category_id)) {
      throw InvalidInput("prediction " + std::to_string(p.id) +
                         " references unknown category id " + std::to_string(p.category_id));
    }
  }

  const std::size_t num_images = ground_truth.images.size();
  const std::size_t num_cats = categories.size();
  std::vector<Cell> cells(num_images * num_cats);
  auto cell_of = [&](std::int64_t image_id, int cat) -> Cell& {
    return cells[image_index.at(image_id) * num_cats + category_index.at(cat)];
  };
  for (std::size_t i = 0; i < ground_truth.annotations.size(); ++i) {
    const auto& a = ground_truth.annotations[i];
    cell_of(a.image_id, a.category_id).gt.push_back(i);
  }
  for (std::size_t d : by_descending_score(predictions)) {
    cell_of(predictions[d].image_id, predictions[d].category_id).preds.push_back(d);
  }

  parallel_for(cells.size(), [&](std::size_t c) {
    Cell& cell = cells[c];
    if (cell.gt.empty() || cell.preds.empty()) return;
    const ImageInfo& img = ground_truth.images[c / num_cats];
    std::vector<Raster> gt;
    for (std::size_t g : cell.gt) {
      gt.push_back(rasterize(ground_truth.annotations[g], img.width, img.height));
    }
    for (std::size_t d : cell.preds) {
      const Raster pr = rasterize(predictions[d], img.width, img.height);
      auto& row = cell.ious.emplace_back();
      for (const Raster& g : gt) row.push_back(raster_iou(pr, g));
    }
  });

  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<AreaRange> ranges = {{0.0, inf},
                                         {0.0, config.small_max_area},
                                         {config.small_max_area, config.large_min_area},
                                         {config.large_min_area, inf}};
  const std::size_t num_thr = config.iou_thresholds.size();

  // ap[a][t][k], nullopt where the category has no ground truth in range.
  std::vector<std::vector<std::vector<std::optional<double>>>> ap(
      ranges.size(), std::vector<std::vector<std::optional<double>>>(
                         num_thr, std::vector<std::optional<double>>(num_cats)));

  for (std::size_t a = 0; a < ranges.size(); ++a) {
    for (std::size_t t = 0; t < num_thr; ++t) {
      for (std::size_t k = 0; k < num_cats; ++k) {
        MatchSet pooled;
        for (std::size_t i = 0; i < num_images; ++i) {
          const Cell& cell = cells[i * num_cats + k];
          // Ground truths in range first, keeping input order within each class.
          std::vector<std::size_t> gt_order(cell.gt.size());
          std::iota(gt_order.begin(), gt_order.end(), std::size_t{0});
          std::stable_sort(gt_order.begin(), gt_order.end(), [&](std::size_t x, std::size_t y) {
            const bool ix = !ranges[a].contains(ground_truth.annotations[cell.gt[x]].area);
            const bool iy = !ranges[a].contains(ground_truth.annotations[cell.gt[y]].area);
            return ix < iy;
          });
          std::vector<char> gt_ignored;
          for (std::size_t g : gt_order) {
            const bool out = !ranges[a].contains(ground_truth.annotations[cell.gt[g]].area);
            gt_ignored.push_back(out ? 1 : 0);
            if (!out) ++pooled.num_ground_truth;
          }
          std::vector<char> det_out;
          std::vector<std::vector<double>> ious;
          for (std::size_t d = 0; d < cell.preds.size(); ++d) {
            det_out.push_back(ranges[a].contains(predictions[cell.preds[d]].area) ? 0 : 1);
            auto& row = ious.emplace_back();
            for (std::size_t g : gt_order) row.push_back(cell.ious.empty() ? 0.0 : cell.ious[d][g]);
          }
          const auto outcome = assign(ious, gt_ignored, det_out, config.iou_thresholds[t]);
          for (std::size_t d = 0; d < outcome.size(); ++d) {
            if (outcome[d] == Outcome::kIgnored) continue;
            pooled.detections.push_back({*predictions[cell.preds[d]].score,
                                         outcome[d] == Outcome::kTruePositive});
          }
        }
        if (pooled.num_ground_truth == 0) continue;
        const PrCurve curve = pr_curve(pooled);
        ap[a][t][k] = average_precision(curve.precision, curve.recall);
      }
    }
  }

  auto summarize = [&](std::size_t a, std::optional<std::size_t> t,
                       std::optional<std::size_t> k) -> std::optional<double> {
    std::vector<double> values;
    for (std::size_t ti = 0; ti < num_thr; ++ti) {
      if (t && ti != *t) continue;
      for (std::size_t ki = 0; ki < num_cats; ++ki) {
        if (k && ki != *k) continue;
        if (ap[a][ti][ki]) values.push_back(*ap[a][ti][ki]);
      }
    }
    return mean_of(values);
  };
  const auto t50 = threshold_index(config.iou_thresholds, 0.5);
  const auto t75 = threshold_index(config.iou_thresholds, 0.75);
  auto fill = [&](MetricSet& m, std::optional<std::size_t> k) {
    m.ap = summarize(0, std::nullopt, k);
    m.ap50 = t50 ? summarize(0, t50, k) : std::nullopt;
    m.ap75 = t75 ? summarize(0, t75, k) : std::nullopt;
    m.ap_s = summarize(1, std::nullopt, k);
    m.ap_m = summarize(2, std::nullopt, k);
    m.ap_l = summarize(3, std::nullopt, k);
  };

  EvalReport report;
  fill(report, std::nullopt);
  for (std::size_t k = 0; k < num_cats; ++k) fill(report.per_category[categories[k]], k);

  double as_sum = 0.0;
  for (const auto& p : predictions) {
    for (const Contour& poly : p.segmentation) {
      try {
        as_sum += average_smoothness(poly, config.as_tolerance);
        ++report.as_count;
      } catch (const InvalidInput&) {
        ++report.as_skipped;
      }
    }
  }
  if (report.as_count > 0) report.as_mean = as_sum / static_cast<double>(report.as_count);
  return report;
}

}  // namespace runway::metrics
