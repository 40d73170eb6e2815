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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "runway/annotate.hpp"
#include "runway/cpcl.hpp"
#include "runway/dataset.hpp"
#include "runway/error.hpp"
#include "runway/io.hpp"
#include "runway/metrics.hpp"
#include "runway/parallel.hpp"
#include "runway/spm.hpp"
#include "runway/synthetic.hpp"

namespace runway::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct ToolConfig {
  spm::SpmConfig spm;
  metrics::EvalConfig eval;
  cpcl::CpclConfig cpcl;
  annotate::CanonicalRect rect;
};

void reject_unknown(const json& section, const char* name,
                    std::initializer_list<const char*> known) {
  for (const auto& item : section.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return item.key() == k; }) ==
        known.end()) {
      throw InvalidInput(std::string("config: unknown key \"") + name + "." + item.key() + "\"");
    }
  }
}

template <typename T>
void read_key(const json& section, const char* key, T& into) {
  if (section.contains(key)) into = section.at(key).get<T>();
}

// Optional JSON file with "spm", "eval", "cpcl" and "rect" sections whose keys
// mirror the config structs.
ToolConfig load_config(const std::string& path) {
  ToolConfig cfg;
  if (path.empty()) return cfg;
  const std::string text = io::read_file(path);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  if (!root.is_object()) throw InvalidInput(path + ": config must be an object");
  reject_unknown(root, "", {"spm", "eval", "cpcl", "rect"});
  try {
    if (root.contains("spm")) {
      const json& s = root.at("spm");
      reject_unknown(s, "spm",
                     {"element_size", "open_repetitions", "area_gate", "iou_threshold",
                      "transversal_offsets", "tolerance_log_base"});
      read_key(s, "element_size", cfg.spm.element_size);
      read_key(s, "open_repetitions", cfg.spm.open_repetitions);
      read_key(s, "area_gate", cfg.spm.area_gate);
      read_key(s, "iou_threshold", cfg.spm.iou_threshold);
      read_key(s, "transversal_offsets", cfg.spm.transversal_offsets);
      read_key(s, "tolerance_log_base", cfg.spm.tolerance_log_base);
    }
    if (root.contains("eval")) {
      const json& s = root.at("eval");
      reject_unknown(s, "eval",
                     {"iou_thresholds", "small_max_area", "large_min_area", "as_tolerance"});
      read_key(s, "iou_thresholds", cfg.eval.iou_thresholds);
      read_key(s, "small_max_area", cfg.eval.small_max_area);
      read_key(s, "large_min_area", cfg.eval.large_min_area);
      read_key(s, "as_tolerance", cfg.eval.as_tolerance);
    }
    if (root.contains("cpcl")) {
      const json& s = root.at("cpcl");
      reject_unknown(s, "cpcl", {"dp_tolerance", "beta"});
      read_key(s, "dp_tolerance", cfg.cpcl.dp_tolerance);
      read_key(s, "beta", cfg.cpcl.beta);
    }
    if (root.contains("rect")) {
      const json& s = root.at("rect");
      reject_unknown(s, "rect", {"width", "length"});
      read_key(s, "width", cfg.rect.width);
      read_key(s, "length", cfg.rect.length);
    }
  } catch (const json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  cfg.spm.validate();
  cfg.eval.validate();
  cfg.cpcl.validate();
  cfg.rect.validate();
  return cfg;
}

std::string id_text(std::int64_t id) { return std::to_string(id); }

const ImageInfo& image_of(const DatasetManifest& m, const InstanceAnnotation& a) {
  const ImageInfo* img = m.find_image(a.image_id);
  if (!img) {
    throw InvalidInput("annotation " + id_text(a.id) + " references missing image id " +
                       id_text(a.image_id));
  }
  return *img;
}

// ---------------------------------------------------------------------------
// smooth

struct SmoothOptions {
  std::string pred;
  std::string out;
  std::string config;
};

int run_smooth(const SmoothOptions& opt, std::ostream& out) {
  const ToolConfig cfg = load_config(opt.config);
  DatasetManifest manifest = io::read_coco(opt.pred);

  std::vector<spm::SmoothKind> kinds(manifest.annotations.size());
  parallel_for(manifest.annotations.size(), [&](std::size_t i) {
    InstanceAnnotation& a = manifest.annotations[i];
    const ImageInfo& img = image_of(manifest, a);
    const Box frame{0, 0, img.width, img.height};
    Box window{};
    for (const Contour& c : a.segmentation) {
      const Box b = box_intersection(polygon_bounds(c.points), frame);
      window = window.empty() ? b : (b.empty() ? window : box_union(window, b));
    }
    if (window.empty()) throw InvalidInput("annotation " + id_text(a.id) + ": empty mask");
    BinaryMask mask(img.width, img.height);
    mask.paste(rasterize_polygons(a.segmentation, window), window.x0, window.y0);
    if (mask.empty()) throw InvalidInput("annotation " + id_text(a.id) + ": empty mask");

    spm::SmoothResult r = spm::smooth_instance(mask, cfg.spm);
    kinds[i] = r.kind;
    a.segmentation = {std::move(r.polygon)};
    a.area = polygon_area(a.segmentation);
  });

  io::write_coco(manifest, opt.out);

  std::map<spm::SmoothKind, std::size_t> counts;
  for (auto k : kinds) ++counts[k];
  out << "instances: " << kinds.size() << "\n";
  for (auto k : {spm::SmoothKind::kQuadrilateral, spm::SmoothKind::kDpFallback,
                 spm::SmoothKind::kPassthrough}) {
    out << spm::to_string(k) << ": " << counts[k] << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string gt;
  std::string pred;
  std::string config;
  std::string json_out;
};

std::string percent(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v * 100.0);
  return buf;
}

std::string plain(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

void table_row(std::ostream& out, const std::string& label, const metrics::MetricSet& m,
               const std::optional<double>& as) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-18s %7s %7s %7s %7s %7s %7s %7s\n", label.c_str(),
                percent(m.ap).c_str(), percent(m.ap50).c_str(), percent(m.ap75).c_str(),
                percent(m.ap_s).c_str(), percent(m.ap_m).c_str(), percent(m.ap_l).c_str(),
                plain(as).c_str());
  out << buf;
}

ordered_json metric_json(const metrics::MetricSet& m) {
  auto value = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json j;
  j["ap"] = value(m.ap);
  j["ap50"] = value(m.ap50);
  j["ap75"] = value(m.ap75);
  j["ap_s"] = value(m.ap_s);
  j["ap_m"] = value(m.ap_m);
  j["ap_l"] = value(m.ap_l);
  return j;
}

int run_eval(const EvalOptions& opt, std::ostream& out) {
  const ToolConfig cfg = load_config(opt.config);
  const DatasetManifest gt = io::read_coco(opt.gt);
  std::vector<InstanceAnnotation> preds = io::read_predictions(opt.pred);
  // a manifest with no scores at all is ground truth used as predictions
  if (std::none_of(preds.begin(), preds.end(), [](const InstanceAnnotation& a) { return a.score; })) {
    for (auto& a : preds) a.score = 1.0;
  }
  const metrics::EvalReport report = metrics::evaluate(gt, preds, cfg.eval);

  char header[256];
  std::snprintf(header, sizeof(header), "%-18s %7s %7s %7s %7s %7s %7s %7s\n", "category", "AP",
                "AP50", "AP75", "APS", "APM", "APL", "AS");
  out << header;
  table_row(out, "all", report, report.as_mean);
  for (const auto& [id, m] : report.per_category) {
    table_row(out, category_name(id), m, std::nullopt);
  }
  out << "AS over " << report.as_count << " polygons";
  if (report.as_skipped > 0) out << " (" << report.as_skipped << " degenerate skipped)";
  out << "\n";

  if (!opt.json_out.empty()) {
    ordered_json j = metric_json(report);
    j["as"] = report.as_mean ? ordered_json(*report.as_mean) : ordered_json(nullptr);
    j["as_count"] = report.as_count;
    j["as_skipped"] = report.as_skipped;
    ordered_json per = ordered_json::object();
    for (const auto& [id, m] : report.per_category) per[std::to_string(id)] = metric_json(m);
    j["per_category"] = std::move(per);
    io::write_file(opt.json_out, j.dump(2) + "\n");
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// cpcl

struct CpclOptions {
  std::string pred;
  std::string gt;
  std::string config;
};

struct CpclRow {
  std::optional<std::size_t> key_points;
  std::size_t gt_corners = 0;
  double loss = 0.0;
};

int run_cpcl(const CpclOptions& opt, std::ostream& out) {
  const ToolConfig cfg = load_config(opt.config);
  const DatasetManifest gt = io::read_coco(opt.gt);
  const std::vector<InstanceAnnotation> preds = io::read_predictions(opt.pred);

  std::map<std::pair<std::int64_t, int>, std::vector<const InstanceAnnotation*>> by_key;
  for (const auto& a : gt.annotations) by_key[{a.image_id, a.category_id}].push_back(&a);

  std::vector<CpclRow> rows(preds.size());
  parallel_for(preds.size(), [&](std::size_t i) {
    const InstanceAnnotation& p = preds[i];
    const ImageInfo& img = image_of(gt, p);
    const auto it = by_key.find({p.image_id, p.category_id});
    if (it == by_key.end()) return;
    const InstanceAnnotation* best = nullptr;
    double best_iou = 0.0;
    for (const InstanceAnnotation* g : it->second) {
      const double iou = metrics::annotation_iou(p, *g, img.width, img.height);
      if (iou > best_iou) {
        best_iou = iou;
        best = g;
      }
    }
    if (!best) return;
    const auto& contour = p.segmentation.front().points;
    const std::size_t corners = best->segmentation.front().points.size();
    try {
      rows[i].key_points = cpcl::key_point_count(contour, cfg.cpcl.dp_tolerance);
      rows[i].gt_corners = corners;
      rows[i].loss = cpcl::cpcl_loss(contour, corners, cfg.cpcl);
    } catch (const InvalidInput& e) {
      throw InvalidInput("prediction " + id_text(p.id) + ": " + e.what());
    }
  });

  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-10s %-10s %-9s %10s %10s %12s\n", "id", "image", "category",
                "key_points", "gt_corners", "loss");
  out << buf;
  double total = 0.0;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const InstanceAnnotation& p = preds[i];
    if (!rows[i].key_points) {
      std::snprintf(buf, sizeof(buf), "%-10lld %-10lld %-9d %10s %10s %12s\n",
                    static_cast<long long>(p.id), static_cast<long long>(p.image_id),
                    p.category_id, "-", "-", "unmatched");
    } else {
      std::snprintf(buf, sizeof(buf), "%-10lld %-10lld %-9d %10zu %10zu %12.6f\n",
                    static_cast<long long>(p.id), static_cast<long long>(p.image_id),
                    p.category_id, *rows[i].key_points, rows[i].gt_corners, rows[i].loss);
      total += rows[i].loss;
      ++matched;
    }
    out << buf;
  }
  if (matched == 0) {
    out << "mean - (no matched predictions)\n";
  } else {
    std::snprintf(buf, sizeof(buf), "mean %.6f over %zu matched of %zu\n",
                  total / static_cast<double>(matched), matched, preds.size());
    out << buf;
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// propagate

struct PropagateOptions {
  std::string ref;
  std::string group;
  std::string out;
  std::string group_id;
  std::string config;
};

struct LabelledImage {
  ImageInfo info;
  std::vector<InstanceAnnotation> annotations;
};

bool looks_like_coco(const fs::path& path) {
  const std::string text = io::read_file(path);
  try {
    const json root = json::parse(text);
    return root.is_object() && root.contains("images") && root.contains("annotations");
  } catch (const json::parse_error&) {
    return false;  // reported by the LabelMe reader with its own context
  }
}

std::vector<LabelledImage> load_images(const fs::path& path, std::vector<std::string>& warnings) {
  std::vector<LabelledImage> out;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    if (ec) throw IoError("cannot list " + path.string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto sub = load_images(f, warnings);
      for (auto& s : sub) out.push_back(std::move(s));
    }
    return out;
  }
  if (looks_like_coco(path)) {
    const DatasetManifest m = io::read_coco(path);
    for (const auto& img : m.images) {
      LabelledImage li{img, {}};
      for (const auto& a : m.annotations) {
        if (a.image_id == img.id) li.annotations.push_back(a);
      }
      out.push_back(std::move(li));
    }
    return out;
  }
  io::LabelMeImage lm = io::read_labelme(path);
  for (auto& w : lm.warnings) warnings.push_back(std::move(w));
  LabelledImage li;
  li.info.file_name = lm.file_name.empty() ? path.filename().string() : lm.file_name;
  li.info.width = lm.width;
  li.info.height = lm.height;
  li.annotations = std::move(lm.annotations);
  out.push_back(std::move(li));
  return out;
}

int run_propagate(const PropagateOptions& opt, std::ostream& out, std::ostream& err) {
  const ToolConfig cfg = load_config(opt.config);
  std::vector<std::string> warnings;
  const auto refs = load_images(opt.ref, warnings);
  if (refs.size() != 1) {
    throw InvalidInput(opt.ref + ": reference must hold exactly one image, found " +
                       std::to_string(refs.size()));
  }
  const annotate::ProportionModel model =
      annotate::derive_proportions(refs.front().annotations, cfg.rect);

  std::vector<LabelledImage> group = load_images(opt.group, warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  if (group.empty()) throw InvalidInput(opt.group + ": group holds no images");
  const bool renumber = std::all_of(group.begin(), group.end(),
                                    [](const LabelledImage& li) { return li.info.id == 0; });

  DatasetManifest result;
  result.categories = default_categories();
  std::vector<std::vector<InstanceAnnotation>> produced(group.size());
  std::vector<bool> skipped(group.size(), false);
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (renumber) group[i].info.id = static_cast<std::int64_t>(i) + 1;
    if (!opt.group_id.empty()) group[i].info.group_id = opt.group_id;
  }
  parallel_for(group.size(), [&](std::size_t i) {
    const LabelledImage& li = group[i];
    const InstanceAnnotation* runway = nullptr;
    for (const auto& a : li.annotations) {
      if (a.category_id != static_cast<int>(Category::kRunway)) continue;
      if (runway) {
        throw InvalidInput(li.info.file_name + ": more than one runway annotation");
      }
      runway = &a;
    }
    if (!runway) {
      skipped[i] = true;
      return;
    }
    try {
      produced[i] = annotate::propagate(runway->segmentation.front().points, model, cfg.rect);
    } catch (const InvalidInput& e) {
      throw InvalidInput(li.info.file_name + ": " + e.what());
    }
  });

  std::int64_t next_id = 1;
  std::size_t annotations = 0;
  std::size_t images = 0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (skipped[i]) {
      err << group[i].info.file_name << ": no runway annotation, skipped\n";
      continue;
    }
    result.images.push_back(group[i].info);
    ++images;
    for (auto& a : produced[i]) {
      a.id = next_id++;
      a.image_id = group[i].info.id;
      a.group_id = group[i].info.group_id;
      result.annotations.push_back(std::move(a));
      ++annotations;
    }
  }
  validate_manifest(result);
  io::write_coco(result, opt.out);
  out << "propagated " << annotations << " annotations over " << images << " images\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// gen-fixtures

struct FixtureOptions {
  std::uint64_t seed = 0;
  int count = 1;
  double noise = 2.0;
  std::string out;
  int width = 1920;
  int height = 1080;
  double runway_only = 0.0;
  bool masks = false;
};

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

int run_fixtures(const FixtureOptions& opt, std::ostream& out) {
  synthetic::SyntheticSceneSpec spec;
  spec.seed = opt.seed;
  spec.count = opt.count;
  spec.noise_sigma = opt.noise;
  spec.width = opt.width;
  spec.height = opt.height;
  spec.runway_only_fraction = opt.runway_only;
  spec.validate();

  const synthetic::SyntheticCorpus corpus = synthetic::generate_synthetic_corpus(spec, opt.masks);
  const fs::path dir(opt.out);
  make_dirs(dir);
  io::write_coco(corpus.clean, dir / "gt.json");
  io::write_coco(corpus.noisy, dir / "pred_noisy.json");
  if (opt.masks) {
    const fs::path mask_dir = dir / "masks";
    make_dirs(mask_dir);
    ordered_json index = ordered_json::array();
    for (const auto& patch : corpus.masks) {
      const std::string name = std::to_string(patch.annotation_id) + ".pgm";
      io::write_pgm(patch.mask, mask_dir / name);
      index.push_back({{"annotation_id", patch.annotation_id},
                       {"file", name},
                       {"x0", patch.window.x0},
                       {"y0", patch.window.y0},
                       {"width", patch.window.width()},
                       {"height", patch.window.height()}});
    }
    io::write_file(mask_dir / "index.json", index.dump(1) + "\n");
  }
  out << "scenes: " << corpus.clean.images.size() << "\n"
      << "clean instances: " << corpus.clean.annotations.size() << "\n"
      << "noisy instances: " << corpus.noisy.annotations.size() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Runway segmentation toolkit: smoothing, evaluation and annotation propagation",
               "runway"};
  app.require_subcommand(1);

  SmoothOptions smooth;
  auto* smooth_cmd = app.add_subcommand("smooth", "Apply SPM to every predicted instance");
  smooth_cmd->add_option("--pred", smooth.pred, "Predictions (COCO manifest)")->required();
  smooth_cmd->add_option("--out", smooth.out, "Output COCO manifest")->required();
  smooth_cmd->add_option("--config", smooth.config, "JSON config file");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "COCO-style AP and average smoothness");
  eval_cmd->add_option("--gt", eval.gt, "Ground truth (COCO manifest)")->required();
  eval_cmd->add_option("--pred", eval.pred, "Predictions (COCO manifest or results list)")
      ->required();
  eval_cmd->add_option("--config", eval.config, "JSON config file");
  eval_cmd->add_option("--json", eval.json_out, "Write the report as JSON");

  CpclOptions cpcl_opt;
  auto* cpcl_cmd = app.add_subcommand("cpcl", "Per-instance and mean contour point loss");
  cpcl_cmd->add_option("--pred", cpcl_opt.pred, "Contour predictions")->required();
  cpcl_cmd->add_option("--gt", cpcl_opt.gt, "Ground truth (COCO manifest)")->required();
  cpcl_cmd->add_option("--config", cpcl_opt.config, "JSON config file");

  PropagateOptions prop;
  auto* prop_cmd =
      app.add_subcommand("propagate", "Derive proportions from a reference and propagate them");
  prop_cmd->add_option("--ref", prop.ref, "Fully annotated reference (LabelMe or COCO)")
      ->required();
  prop_cmd->add_option("--group", prop.group, "Runway-only images (LabelMe dir/file or COCO)")
      ->required();
  prop_cmd->add_option("--out", prop.out, "Output COCO manifest")->required();
  prop_cmd->add_option("--group-id", prop.group_id, "Group id stamped on the output");
  prop_cmd->add_option("--config", prop.config, "JSON config file");

  FixtureOptions fix;
  auto* fix_cmd = app.add_subcommand("gen-fixtures", "Write a seeded synthetic corpus");
  fix_cmd->add_option("--seed", fix.seed, "Random seed")->required();
  fix_cmd->add_option("--count", fix.count, "Number of scenes")->required();
  fix_cmd->add_option("--noise", fix.noise, "Boundary noise sigma in pixels")
      ->capture_default_str();
  fix_cmd->add_option("--out", fix.out, "Output directory")->required();
  fix_cmd->add_option("--width", fix.width, "Frame width")->capture_default_str();
  fix_cmd->add_option("--height", fix.height, "Frame height")->capture_default_str();
  fix_cmd->add_option("--runway-only", fix.runway_only, "Fraction of runway-only scenes")
      ->capture_default_str();
  fix_cmd->add_flag("--masks", fix.masks, "Also write the noisy masks as PGM patches");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "runway: " << e.what() << "\n";
    const CLI::App* sub = nullptr;
    for (const auto* s : app.get_subcommands()) sub = s;
    err << (sub ? sub->help() : app.help());
    return kInvalid;
  }

  try {
    if (*smooth_cmd) return run_smooth(smooth, out);
    if (*eval_cmd) return run_eval(eval, out);
    if (*cpcl_cmd) return run_cpcl(cpcl_opt, out);
    if (*prop_cmd) return run_propagate(prop, out, err);
    if (*fix_cmd) return run_fixtures(fix, out);
  } catch (const IoError& e) {
    err << "runway: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "runway: " << e.what() << "\n";
    return kInvalid;
  }
  err << app.help();
  return kInvalid;
}

}  // namespace runway::cli
