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

#include "runway/synthetic.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <numbers>
#include <string>

#include "runway/error.hpp"
#include "runway/parallel.hpp"

namespace runway::synthetic {

namespace {

constexpr double kSampleSpacing = 3.0;
constexpr int kIdsPerScene = 16;

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {}

std::uint64_t Rng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller; std::normal_distribution is not reproducible across libraries.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SyntheticSceneSpec::validate() const {
  if (count < 1) throw InvalidInput("scene count must be >= 1");
  if (!(noise_sigma >= 0.0)) throw InvalidInput("noise sigma must be >= 0");
  if (width < 64 || height < 64) throw InvalidInput("frame too small to contain layout");
  if (!(runway_only_fraction >= 0.0 && runway_only_fraction <= 1.0)) {
    throw InvalidInput("runway_only_fraction must be in [0, 1]");
  }
}

const annotate::ProportionModel& canonical_layout() {
  static const annotate::ProportionModel layout = [] {
    auto rect = [](double u0, double v0, double u1, double v1) {
      return std::vector<Point2>{{u0, v0}, {u1, v0}, {u1, v1}, {u0, v1}};
    };
    annotate::ProportionModel m;
    m.entries.push_back({static_cast<int>(Category::kThresholdMarking),
                         {rect(0.08, 0.02, 0.92, 0.12)}});
    m.entries.push_back({static_cast<int>(Category::kAimingMarking),
                         {rect(0.22, 0.24, 0.40, 0.40)}});
    m.entries.push_back({static_cast<int>(Category::kAimingMarking),
                         {rect(0.60, 0.24, 0.78, 0.40)}});
    return m;
  }();
  return layout;
}

namespace {

// Landing-view runway: wide near end at the bottom, narrow far end above.
std::array<Point2, 4> random_runway(Rng& rng, int width, int height) {
  const double w = width;
  const double h = height;
  const double bottom = rng.uniform(0.82, 0.95) * h;
  const double top = rng.uniform(0.12, 0.30) * h;
  const double centre = rng.uniform(0.42, 0.58) * w;
  const double half_bottom = rng.uniform(0.12, 0.19) * w;
  const double half_top = half_bottom * rng.uniform(0.12, 0.30);
  const double far_centre = centre + rng.uniform(-0.06, 0.06) * w;
  const double tilt = rng.uniform(-0.03, 0.03) * h;
  return {Point2{centre - half_bottom, bottom + tilt}, Point2{centre + half_bottom, bottom - tilt},
          Point2{far_centre + half_top, top}, Point2{far_centre - half_top, top}};
}

// Dense boundary samples displaced along the outward normal.
std::vector<Point2> perturb(const std::vector<Point2>& polygon, double sigma, Rng& rng) {
  const std::size_t n = polygon.size();
  const double orientation = signed_area(polygon) > 0.0 ? 1.0 : -1.0;
  auto outward = [&](Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len = std::hypot(d.x, d.y);
    return Point2{orientation * d.y / len, -orientation * d.x / len};
  };
  std::vector<Point2> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = polygon[i];
    const Point2 b = polygon[(i + 1) % n];
    const Point2 normal = outward(a, b);
    const Point2 prev_normal = outward(polygon[(i + n - 1) % n], a);
    const int steps = std::max(1, static_cast<int>(std::ceil(distance(a, b) / kSampleSpacing)));
    for (int s = 0; s < steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      const Point2 p = a + t * (b - a);
      Point2 dir = normal;
      if (s == 0) {
        dir = normal + prev_normal;
        const double len = std::hypot(dir.x, dir.y);
        dir = len > 0.0 ? (1.0 / len) * dir : normal;
      }
      const double offset = sigma > 0.0 ? sigma * rng.normal() : 0.0;
      out.push_back(p + offset * dir);
    }
  }
  return out;
}

}  // namespace

SyntheticScene generate_scene(const SyntheticSceneSpec& spec, std::size_t index) {
  spec.validate();
  Rng rng(spec.seed * 0x100000001b3ULL + index * 0x9e3779b97f4a7c15ULL + 1);

  SyntheticScene scene;
  scene.image.id = static_cast<std::int64_t>(index) + 1;
  scene.image.file_name = "scene_" + std::to_string(index + 1) + ".png";
  scene.image.width = spec.width;
  scene.image.height = spec.height;
  scene.image.group_id = "synthetic";

  const annotate::CanonicalRect rect;
  scene.runway = random_runway(rng, spec.width, spec.height);
  const auto canonical = rect.corners();
  scene.canonical_to_image = annotate::homography_from_correspondences(canonical, scene.runway);

  const bool runway_only = rng.uniform() < spec.runway_only_fraction;
  annotate::ProportionModel model = canonical_layout();
  std::vector<InstanceAnnotation> instances;
  if (runway_only) {
    InstanceAnnotation runway;
    runway.category_id = static_cast<int>(Category::kRunway);
    runway.segmentation.push_back(Contour{{scene.runway.begin(), scene.runway.end()}, true});
    runway.area = polygon_area(runway.segmentation);
    instances.push_back(std::move(runway));
  } else {
    instances = annotate::propagate(scene.runway, model, rect);
  }

  const Box frame{0, 0, spec.width, spec.height};
  for (std::size_t k = 0; k < instances.size(); ++k) {
    InstanceAnnotation& clean = instances[k];
    clean.id = static_cast<std::int64_t>(index) * kIdsPerScene + static_cast<std::int64_t>(k) + 1;
    clean.image_id = scene.image.id;
    clean.group_id = scene.image.group_id;
    scene.clean.push_back(clean);

    const Contour noisy_polygon{perturb(clean.segmentation[0].points, spec.noise_sigma, rng), true};
    const Box window = box_intersection(polygon_bounds(noisy_polygon.points), frame);
    if (window.empty()) throw InvalidInput("frame too small to contain layout");
    BinaryMask mask = rasterize_polygons(std::span<const Contour>(&noisy_polygon, 1), window);

    InstanceAnnotation noisy;
    noisy.id = clean.id;
    noisy.image_id = clean.image_id;
    noisy.category_id = clean.category_id;
    noisy.score = std::round(rng.uniform(0.5, 1.0) * 1e6) / 1e6;
    noisy.group_id = clean.group_id;
    const auto components = find_components(mask);
    if (!components.empty()) {
      const Component* best = &components.front();
      for (const auto& c : components) {
        if (c.area > best->area) best = &c;
      }
      Contour border = to_pixel_centres(
          best->border, {static_cast<double>(window.x0), static_cast<double>(window.y0)});
      if (border.points.size() >= 3) {
        noisy.segmentation.push_back(std::move(border));
        noisy.area = polygon_area(noisy.segmentation);
        scene.noisy.push_back(std::move(noisy));
      }
    }
    scene.masks.push_back({clean.id, window, std::move(mask)});
  }
  return scene;
}

SyntheticCorpus generate_synthetic_corpus(const SyntheticSceneSpec& spec, bool keep_masks) {
  spec.validate();
  std::vector<SyntheticScene> scenes(static_cast<std::size_t>(spec.count));
  parallel_for(scenes.size(), [&](std::size_t i) {
    scenes[i] = generate_scene(spec, i);
    if (!keep_masks) scenes[i].masks.clear();
  });

  SyntheticCorpus corpus;
  corpus.clean.categories = default_categories();
  corpus.noisy.categories = default_categories();
  for (auto& scene : scenes) {
    corpus.clean.images.push_back(scene.image);
    corpus.noisy.images.push_back(scene.image);
    for (auto& a : scene.clean) corpus.clean.annotations.push_back(std::move(a));
    for (auto& a : scene.noisy) corpus.noisy.annotations.push_back(std::move(a));
    for (auto& m : scene.masks) corpus.masks.push_back(std::move(m));
  }
  return corpus;
}

}  // namespace runway::synthetic
