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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "runway/synthetic.hpp"

namespace oracle {

namespace {

bool get(const BinaryMask& m, int x, int y) { return m.contains(x, y) && m.at(x, y); }

}  // namespace

BinaryMask erode(const BinaryMask& m, int size) {
  const int r = size / 2;
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (int dy = -r; dy <= r && all; ++dy) {
        for (int dx = -r; dx <= r && all; ++dx) all = get(m, x + dx, y + dy);
      }
      out.set(x, y, all);
    }
  }
  return out;
}

BinaryMask dilate(const BinaryMask& m, int size) {
  const int r = size / 2;
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      for (int dy = -r; dy <= r && !any; ++dy) {
        for (int dx = -r; dx <= r && !any; ++dx) any = get(m, x + dx, y + dy);
      }
      out.set(x, y, any);
    }
  }
  return out;
}

BinaryMask open(const BinaryMask& m, int size, int repetitions) {
  BinaryMask cur = m;
  for (int i = 0; i < repetitions; ++i) cur = dilate(erode(cur, size), size);
  return cur;
}

bool point_in_polygon(const std::vector<Point2>& poly, Point2 p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double t = len == 0.0 ? 0.0
                                : ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) /
                                      (len * len);
    const double tc = std::clamp(t, 0.0, 1.0);
    const double qx = a.x + tc * (b.x - a.x);
    const double qy = a.y + tc * (b.y - a.y);
    if (std::hypot(p.x - qx, p.y - qy) <= 1e-9) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = poly[i];
    const Point2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

BinaryMask rasterize(const std::vector<Contour>& polygons, int width, int height) {
  BinaryMask out(width, height);
  for (const Contour& c : polygons) {
    double x0 = 1e18, x1 = -1e18, y0 = 1e18, y1 = -1e18;
    for (const Point2& p : c.points) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
    const int cx0 = std::max(0, static_cast<int>(std::floor(x0)) - 1);
    const int cx1 = std::min(width - 1, static_cast<int>(std::ceil(x1)) + 1);
    const int cy0 = std::max(0, static_cast<int>(std::floor(y0)) - 1);
    const int cy1 = std::min(height - 1, static_cast<int>(std::ceil(y1)) + 1);
    for (int y = cy0; y <= cy1; ++y) {
      for (int x = cx0; x <= cx1; ++x) {
        if (point_in_polygon(c.points, {x + 0.5, y + 0.5})) out.set(x, y);
      }
    }
  }
  return out;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  std::size_t inter = 0, uni = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      inter += a.at(x, y) && b.at(x, y);
      uni += a.at(x, y) || b.at(x, y);
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

double deviation(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
  return std::abs(dx * (p.y - a.y) - dy * (p.x - a.x)) / len;
}

void dp_recurse(const std::vector<Point2>& pts, const std::vector<std::size_t>& idx,
                std::size_t lo, std::size_t hi, double tol, std::vector<bool>& keep) {
  if (hi <= lo + 1) return;
  double best = -1.0;
  std::size_t at = lo;
  for (std::size_t k = lo + 1; k < hi; ++k) {
    const double d = deviation(pts[idx[k]], pts[idx[lo]], pts[idx[hi]]);
    if (d > best) {
      best = d;
      at = k;
    }
  }
  if (best <= tol) return;
  keep[idx[at]] = true;
  dp_recurse(pts, idx, lo, at, tol, keep);
  dp_recurse(pts, idx, at, hi, tol, keep);
}

}  // namespace

std::vector<std::size_t> douglas_peucker(const std::vector<Point2>& pts, double tol, bool closed) {
  const std::size_t n = pts.size();
  std::vector<bool> keep(n, false);
  if (!closed || n < 3) {
    keep.front() = keep.back() = true;
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < n; ++k) idx[k] = k;
    dp_recurse(pts, idx, 0, n - 1, tol, keep);
  } else {
    std::size_t bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y;
        const double d = dx * dx + dy * dy;
        if (d > best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    keep[bi] = keep[bj] = true;
    std::vector<std::size_t> first, second;
    for (std::size_t k = bi; k <= bj; ++k) first.push_back(k);
    for (std::size_t k = bj; k < n; ++k) second.push_back(k);
    for (std::size_t k = 0; k <= bi; ++k) second.push_back(k);
    dp_recurse(pts, first, 0, first.size() - 1, tol, keep);
    dp_recurse(pts, second, 0, second.size() - 1, tol, keep);
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (keep[k]) out.push_back(k);
  }
  return out;
}

double shoelace(const std::vector<Point2>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 a = pts[i], b = pts[(i + 1) % pts.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return std::abs(s) / 2.0;
}

double perimeter(const std::vector<Point2>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 a = pts[i], b = pts[(i + 1) % pts.size()];
    s += std::hypot(b.x - a.x, b.y - a.y);
  }
  return s;
}

double average_smoothness(const std::vector<Point2>& pts, double tol) {
  std::vector<Point2> refined;
  for (std::size_t k : douglas_peucker(pts, tol, true)) refined.push_back(pts[k]);
  return static_cast<double>(refined.size()) / std::log2(perimeter(refined));
}

std::array<Point2, 4> rectangle_corners(Point2 centre, double w, double h, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  std::array<Point2, 4> out;
  const double hx[4] = {-w / 2, w / 2, w / 2, -w / 2};
  const double hy[4] = {-h / 2, -h / 2, h / 2, h / 2};
  for (int k = 0; k < 4; ++k) {
    out[k] = {centre.x + c * hx[k] - s * hy[k], centre.y + s * hx[k] + c * hy[k]};
  }
  return out;
}

std::vector<Point2> rectangle_samples(Point2 centre, double w, double h, double angle,
                                      std::size_t count) {
  const auto corners = rectangle_corners(centre, w, h, angle);
  const double total = 2.0 * (w + h);
  std::vector<Point2> out;
  std::size_t used = 0;
  for (int e = 0; e < 4; ++e) {
    const Point2 a = corners[e], b = corners[(e + 1) % 4];
    const double len = (e % 2 == 0) ? w : h;
    const std::size_t share =
        e == 3 ? count - used
               : static_cast<std::size_t>(std::round(static_cast<double>(count) * len / total));
    used += share;
    for (std::size_t k = 0; k < share; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(share);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

Metrics evaluate(const runway::DatasetManifest& gt,
                 const std::vector<runway::InstanceAnnotation>& preds) {
  const double thresholds[10] = {0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
  const double inf = std::numeric_limits<double>::infinity();
  const double ranges[4][2] = {{0, inf}, {0, 1024}, {1024, 8464}, {8464, inf}};

  // Masks and pairwise IoU, computed once on the full frame.
  std::map<std::int64_t, const runway::ImageInfo*> images;
  for (const auto& img : gt.images) images[img.id] = &img;
  std::vector<BinaryMask> gmask, pmask;
  for (const auto& a : gt.annotations) {
    const auto* img = images.at(a.image_id);
    gmask.push_back(rasterize(a.segmentation, img->width, img->height));
  }
  for (const auto& p : preds) {
    const auto* img = images.at(p.image_id);
    pmask.push_back(rasterize(p.segmentation, img->width, img->height));
  }

  // ap_table[range][threshold] -> per-category values
  std::vector<std::vector<std::vector<double>>> table(4, std::vector<std::vector<double>>(10));
  std::vector<int> cats;
  for (const auto& c : gt.categories) cats.push_back(c.id);
  std::sort(cats.begin(), cats.end());

  for (int r = 0; r < 4; ++r) {
    auto in_range = [&](double area) { return area >= ranges[r][0] && area < ranges[r][1]; };
    for (int t = 0; t < 10; ++t) {
      const double thr = std::min(thresholds[t], 1.0 - 1e-10);
      for (int cat : cats) {
        std::size_t npos = 0;
        std::vector<std::pair<double, bool>> scored;
        for (const auto& img : gt.images) {
          std::vector<std::size_t> g_in, g_out, dets;
          for (std::size_t i = 0; i < gt.annotations.size(); ++i) {
            const auto& a = gt.annotations[i];
            if (a.image_id != img.id || a.category_id != cat) continue;
            (in_range(a.area) ? g_in : g_out).push_back(i);
          }
          npos += g_in.size();
          std::vector<std::size_t> gts = g_in;
          gts.insert(gts.end(), g_out.begin(), g_out.end());
          for (std::size_t d = 0; d < preds.size(); ++d) {
            if (preds[d].image_id == img.id && preds[d].category_id == cat) dets.push_back(d);
          }
          std::stable_sort(dets.begin(), dets.end(), [&](std::size_t a, std::size_t b) {
            return *preds[a].score > *preds[b].score;
          });
          std::vector<bool> used(gts.size(), false);
          for (std::size_t d : dets) {
            double best = thr;
            int match = -1;
            for (std::size_t k = 0; k < gts.size(); ++k) {
              if (used[k]) continue;
              const bool k_ignored = k >= g_in.size();
              if (match >= 0 && static_cast<std::size_t>(match) < g_in.size() && k_ignored) break;
              const double v = iou(pmask[d], gmask[gts[k]]);
              if (v < best) continue;
              best = v;
              match = static_cast<int>(k);
            }
            if (match >= 0) {
              used[match] = true;
              if (static_cast<std::size_t>(match) < g_in.size()) scored.push_back({*preds[d].score, true});
            } else if (in_range(preds[d].area)) {
              scored.push_back({*preds[d].score, false});
            }
          }
        }
        if (npos == 0) continue;
        std::stable_sort(scored.begin(), scored.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<double> prec, rec;
        double tp = 0, fp = 0;
        for (const auto& [s, hit] : scored) {
          (hit ? tp : fp) += 1;
          prec.push_back(tp / (tp + fp));
          rec.push_back(tp / static_cast<double>(npos));
        }
        double sum = 0.0;
        for (int k = 0; k <= 100; ++k) {
          const double level = k / 100.0;
          double best = 0.0;
          for (std::size_t i = 0; i < prec.size(); ++i) {
            if (rec[i] >= level) best = std::max(best, prec[i]);
          }
          sum += best;
        }
        table[r][t].push_back(sum / 101.0);
      }
    }
  }

  auto mean = [&](int r, int t_only) -> std::optional<double> {
    double s = 0.0;
    std::size_t n = 0;
    for (int t = 0; t < 10; ++t) {
      if (t_only >= 0 && t != t_only) continue;
      for (double v : table[r][t]) {
        s += v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return s / static_cast<double>(n);
  };
  Metrics m;
  m.ap = mean(0, -1);
  m.ap50 = mean(0, 0);
  m.ap75 = mean(0, 5);
  m.ap_s = mean(1, -1);
  m.ap_m = mean(2, -1);
  m.ap_l = mean(3, -1);

  double as_sum = 0.0;
  std::size_t as_n = 0;
  for (const auto& p : preds) {
    for (const auto& c : p.segmentation) {
      if (c.points.size() < 3) continue;
      std::vector<Point2> refined;
      for (std::size_t k : douglas_peucker(c.points, 1.0, true)) refined.push_back(c.points[k]);
      const double len = perimeter(refined);
      if (!(len > 1.0)) continue;
      as_sum += static_cast<double>(refined.size()) / std::log2(len);
      ++as_n;
    }
  }
  if (as_n > 0) m.as = as_sum / static_cast<double>(as_n);
  return m;
}

MicroDataset micro_dataset(std::uint64_t seed) {
  runway::synthetic::Rng rng(seed);
  MicroDataset out;
  out.gt.categories = runway::default_categories();
  const int images = 1 + static_cast<int>(rng.uniform() * 5);
  std::int64_t gt_id = 1, pred_id = 1;
  auto category = [&] { return 1 + static_cast<int>(rng.uniform() * 3); };
  auto quad = [&](Point2 c, double w, double h, double a) {
    const auto k = rectangle_corners(c, w, h, a);
    return Contour{{k.begin(), k.end()}, true};
  };
  auto score = [&] {
    const double s = rng.uniform();
    return rng.uniform() < 0.5 ? std::round(s * 10.0) / 10.0 : s;
  };
  for (int i = 0; i < images; ++i) {
    runway::ImageInfo img;
    img.id = i + 1;
    img.file_name = "micro_" + std::to_string(i + 1) + ".png";
    img.width = 160;
    img.height = 120;
    out.gt.images.push_back(img);
    const int count = static_cast<int>(rng.uniform() * 6);
    for (int g = 0; g < count; ++g) {
      runway::InstanceAnnotation a;
      a.id = gt_id++;
      a.image_id = img.id;
      a.category_id = category();
      // sizes straddle the 32^2 and 92^2 area buckets
      const double w = rng.uniform(4, 120), h = rng.uniform(4, 100);
      const Point2 c{rng.uniform(20, 140), rng.uniform(15, 105)};
      const double angle = rng.uniform() < 0.5 ? 0.0 : rng.uniform(-0.6, 0.6);
      a.segmentation = {quad(c, w, h, angle)};
      a.area = shoelace(a.segmentation[0].points);
      out.gt.annotations.push_back(a);

      const int copies = rng.uniform() < 0.8 ? (rng.uniform() < 0.2 ? 2 : 1) : 0;
      for (int k = 0; k < copies; ++k) {
        runway::InstanceAnnotation p;
        p.id = pred_id++;
        p.image_id = img.id;
        p.category_id = rng.uniform() < 0.9 ? a.category_id : category();
        const double jitter = rng.uniform(0, 0.35);
        p.segmentation = {quad({c.x + jitter * w * rng.uniform(-1, 1),
                                c.y + jitter * h * rng.uniform(-1, 1)},
                               w * (1 + jitter * rng.uniform(-1, 1)),
                               h * (1 + jitter * rng.uniform(-1, 1)), angle + rng.uniform(-0.1, 0.1))};
        p.area = shoelace(p.segmentation[0].points);
        p.score = score();
        out.preds.push_back(p);
      }
    }
    const int false_pos = static_cast<int>(rng.uniform() * 3);
    for (int k = 0; k < false_pos; ++k) {
      runway::InstanceAnnotation p;
      p.id = pred_id++;
      p.image_id = img.id;
      p.category_id = category();
      p.segmentation = {quad({rng.uniform(20, 140), rng.uniform(15, 105)}, rng.uniform(4, 80),
                             rng.uniform(4, 80), rng.uniform(-0.6, 0.6))};
      p.area = shoelace(p.segmentation[0].points);
      p.score = score();
      out.preds.push_back(p);
    }
  }
  // shuffle the prediction list so input order is not score order
  for (std::size_t i = out.preds.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(out.preds[i - 1], out.preds[j]);
  }
  return out;
}

}  // namespace oracle
