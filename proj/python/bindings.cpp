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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "runway/annotate.hpp"
#include "runway/cpcl.hpp"
#include "runway/error.hpp"
#include "runway/io.hpp"
#include "runway/metrics.hpp"
#include "runway/spm.hpp"
#include "runway/synthetic.hpp"

namespace py = pybind11;
using namespace runway;

namespace {

using Points = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Mask = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

std::vector<Point2> to_points(const Points& a) {
  if (a.ndim() != 2 || a.shape(1) != 2) throw InvalidInput("points must have shape (n, 2)");
  std::vector<Point2> out(static_cast<std::size_t>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = {r(i, 0), r(i, 1)};
  return out;
}

py::array_t<double> from_points(const std::vector<Point2>& pts) {
  py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    w(i, 0) = pts[i].x;
    w(i, 1) = pts[i].y;
  }
  return out;
}

BinaryMask to_mask(const Mask& a) {
  if (a.ndim() != 2) throw InvalidInput("mask must be 2-D");
  BinaryMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  auto r = a.unchecked<2>();
  for (py::ssize_t y = 0; y < a.shape(0); ++y) {
    for (py::ssize_t x = 0; x < a.shape(1); ++x) m.set(x, y, r(y, x) != 0);
  }
  return m;
}

py::array_t<std::uint8_t> from_mask(const BinaryMask& m) {
  py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(m.height()), static_cast<py::ssize_t>(m.width())});
  auto w = out.mutable_unchecked<2>();
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) w(y, x) = m.at(x, y) ? 1 : 0;
  }
  return out;
}

std::array<Point2, 4> to_quad(const Points& a) {
  const auto pts = to_points(a);
  if (pts.size() != 4) throw InvalidInput("expected 4 points");
  return {pts[0], pts[1], pts[2], pts[3]};
}

py::object optional(const std::optional<double>& v) {
  if (v) return py::float_(*v);
  return py::none();
}

py::dict metric_dict(const metrics::MetricSet& m) {
  py::dict d;
  d["ap"] = optional(m.ap);
  d["ap50"] = optional(m.ap50);
  d["ap75"] = optional(m.ap75);
  d["ap_s"] = optional(m.ap_s);
  d["ap_m"] = optional(m.ap_m);
  d["ap_l"] = optional(m.ap_l);
  return d;
}

InstanceAnnotation instance(int category_id, const std::vector<Points>& polygons) {
  InstanceAnnotation a;
  a.category_id = category_id;
  for (const auto& p : polygons) a.segmentation.push_back({to_points(p), true});
  a.area = polygon_area(a.segmentation);
  return a;
}

py::list instance_list(const std::vector<InstanceAnnotation>& anns) {
  py::list out;
  for (const auto& a : anns) {
    py::list polys;
    for (const auto& c : a.segmentation) polys.append(from_points(c.points));
    out.append(py::make_tuple(a.category_id, polys));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Runway segmentation toolkit core";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "smooth",
      [](const Mask& mask, int element_size, int open_repetitions, double area_gate,
         double iou_threshold) {
        spm::SpmConfig cfg;
        cfg.element_size = element_size;
        cfg.open_repetitions = open_repetitions;
        cfg.area_gate = area_gate;
        cfg.iou_threshold = iou_threshold;
        const spm::SmoothResult r = spm::smooth_instance(to_mask(mask), cfg);
        return py::make_tuple(from_points(r.polygon.points), spm::to_string(r.kind), r.fit_iou);
      },
      py::arg("mask"), py::arg("element_size") = 3, py::arg("open_repetitions") = 3,
      py::arg("area_gate") = 0.001, py::arg("iou_threshold") = 0.9,
      "Smooth one instance mask; returns (polygon, kind, fit_iou).");

  m.def(
      "trace_contours",
      [](const Mask& mask) {
        py::list out;
        for (const auto& c : trace_contours(to_mask(mask))) out.append(from_points(to_pixel_centres(c).points));
        return out;
      },
      py::arg("mask"), "Outer borders of the 8-connected components, in pixel-centre coordinates.");

  m.def(
      "rasterize",
      [](const Points& polygon, int width, int height) {
        return from_mask(rasterize_polygon({to_points(polygon), true}, width, height));
      },
      py::arg("polygon"), py::arg("width"), py::arg("height"));

  m.def(
      "simplify",
      [](const Points& points, double tolerance, bool closed) {
        return from_points(simplify_polyline(to_points(points), tolerance, closed));
      },
      py::arg("points"), py::arg("tolerance"), py::arg("closed") = true);

  m.def(
      "average_smoothness",
      [](const Points& polygon, double tolerance) {
        return metrics::average_smoothness({to_points(polygon), true}, tolerance);
      },
      py::arg("polygon"), py::arg("tolerance") = 1.0);

  m.def(
      "key_point_count",
      [](const Points& contour, double tolerance) { return cpcl::key_point_count(to_points(contour), tolerance); },
      py::arg("contour"), py::arg("tolerance") = 1.0);
  m.def("smooth_l1", &cpcl::smooth_l1, py::arg("delta"), py::arg("beta") = 1.0);
  m.def(
      "cpcl_loss",
      [](const Points& contour, std::size_t gt_corners, double tolerance, double beta) {
        return cpcl::cpcl_loss(to_points(contour), gt_corners, {tolerance, beta});
      },
      py::arg("contour"), py::arg("gt_corners"), py::arg("tolerance") = 1.0, py::arg("beta") = 1.0);

  m.def(
      "evaluate",
      [](const std::string& gt_json, const std::string& pred_json) {
        const DatasetManifest gt = io::parse_coco(gt_json, "<gt>");
        const auto preds = io::parse_predictions(pred_json, "<pred>");
        const metrics::EvalReport r = metrics::evaluate(gt, preds);
        py::dict d = metric_dict(r);
        d["as"] = optional(r.as_mean);
        d["as_count"] = r.as_count;
        py::dict per;
        for (const auto& [id, mset] : r.per_category) per[py::int_(id)] = metric_dict(mset);
        d["per_category"] = per;
        return d;
      },
      py::arg("gt_json"), py::arg("pred_json"), "COCO-style AP and AS from COCO JSON text.");

  m.def(
      "homography",
      [](const Points& src, const Points& dst) {
        const auto h = annotate::homography_from_correspondences(to_quad(src), to_quad(dst));
        py::array_t<double> out({3, 3});
        auto w = out.mutable_unchecked<2>();
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) w(r, c) = h.matrix()(r, c);
        }
        return out;
      },
      py::arg("src"), py::arg("dst"), "Four-point DLT; returns the 3x3 matrix.");

  m.def(
      "propagate",
      [](const std::vector<std::pair<int, std::vector<Points>>>& reference, const Points& runway) {
        std::vector<InstanceAnnotation> ref;
        for (const auto& [cat, polys] : reference) ref.push_back(instance(cat, polys));
        const auto model = annotate::derive_proportions(ref);
        return instance_list(annotate::propagate(to_points(runway), model));
      },
      py::arg("reference"), py::arg("runway"),
      "Derive proportions from [(category_id, [polygon, ...]), ...] and apply them to a runway quad.");

  m.def(
      "generate_corpus",
      [](std::uint64_t seed, int count, double noise, int width, int height) {
        synthetic::SyntheticSceneSpec spec;
        spec.seed = seed;
        spec.count = count;
        spec.noise_sigma = noise;
        spec.width = width;
        spec.height = height;
        const auto corpus = synthetic::generate_synthetic_corpus(spec, false);
        return py::make_tuple(io::format_coco(corpus.clean), io::format_coco(corpus.noisy));
      },
      py::arg("seed"), py::arg("count"), py::arg("noise") = 2.0, py::arg("width") = 1920,
      py::arg("height") = 1080, "Seeded synthetic scenes as (clean, noisy) COCO JSON text.");
}
