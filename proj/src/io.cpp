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

#include "runway/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "runway/error.hpp"

namespace runway::io {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(std::string_view source, const std::string& where, const std::string& what) {
  throw InvalidInput(std::string(source) + ": " + where + ": " + what);
}

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string(source) + ": malformed JSON at byte " + std::to_string(e.byte) +
                       ": " + e.what());
  }
}

const json& member(const json& obj, const char* key, std::string_view source,
                   const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(source, where, std::string("missing \"") + key + "\"");
  return obj.at(key);
}

template <typename T>
T number(const json& obj, const char* key, std::string_view source, const std::string& where) {
  const json& v = member(obj, key, source, where);
  if (!v.is_number()) fail(source, where, std::string("\"") + key + "\" must be a number");
  return v.get<T>();
}

std::vector<Contour> parse_segmentation(const json& seg, std::string_view source,
                                        const std::string& where) {
  if (seg.is_object()) fail(source, where, "RLE segmentation is not supported; use polygons");
  if (!seg.is_array() || seg.empty()) fail(source, where, "segmentation must be a list of polygons");
  std::vector<Contour> out;
  for (const json& poly : seg) {
    if (!poly.is_array()) fail(source, where, "polygon must be a flat coordinate list");
    if (poly.size() % 2 != 0) fail(source, where, "polygon has an odd number of coordinates");
    if (poly.size() < 6) fail(source, where, "degenerate polygon");
    Contour c;
    for (std::size_t i = 0; i < poly.size(); i += 2) {
      if (!poly[i].is_number() || !poly[i + 1].is_number()) {
        fail(source, where, "polygon coordinates must be numbers");
      }
      c.points.push_back({poly[i].get<double>(), poly[i + 1].get<double>()});
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<std::string> optional_id(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const json& v = obj.at(key);
  return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

DatasetManifest parse_coco(std::string_view text, std::string_view source) {
  const json root = parse_json(text, source);
  if (!root.is_object()) fail(source, "root", "expected an object");
  for (const char* key : {"images", "annotations", "categories"}) {
    if (!root.contains(key) || !root.at(key).is_array()) {
      fail(source, "root", std::string("missing array \"") + key + "\"");
    }
  }

  DatasetManifest m;
  const json& images = root.at("images");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    const json& j = images[i];
    ImageInfo img;
    img.id = number<std::int64_t>(j, "id", source, where);
    img.width = number<int>(j, "width", source, where);
    img.height = number<int>(j, "height", source, where);
    if (j.contains("file_name") && j.at("file_name").is_string()) img.file_name = j.at("file_name");
    img.group_id = optional_id(j, "group_id");
    m.images.push_back(std::move(img));
  }
  const json& cats = root.at("categories");
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const std::string where = "categories[" + std::to_string(i) + "]";
    CategoryInfo c;
    c.id = number<int>(cats[i], "id", source, where);
    if (cats[i].contains("name") && cats[i].at("name").is_string()) c.name = cats[i].at("name");
    m.categories.push_back(std::move(c));
  }
  const json& anns = root.at("annotations");
  for (std::size_t i = 0; i < anns.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const json& j = anns[i];
    InstanceAnnotation a;
    a.id = number<std::int64_t>(j, "id", source, where);
    a.image_id = number<std::int64_t>(j, "image_id", source, where);
    a.category_id = number<int>(j, "category_id", source, where);
    a.segmentation = parse_segmentation(member(j, "segmentation", source, where), source, where);
    a.area = j.contains("area") && j.at("area").is_number() ? j.at("area").get<double>()
                                                            : polygon_area(a.segmentation);
    if (j.contains("score") && !j.at("score").is_null()) a.score = number<double>(j, "score", source, where);
    a.group_id = optional_id(j, "group_id");
    m.annotations.push_back(std::move(a));
  }

  try {
    validate_manifest(m);
  } catch (const InvalidInput& e) {
    throw InvalidInput(std::string(source) + ": " + e.what());
  }
  return m;
}

std::string format_coco(const DatasetManifest& manifest) {
  ordered_json root;
  root["images"] = ordered_json::array();
  for (const auto& img : manifest.images) {
    ordered_json j;
    j["id"] = img.id;
    j["file_name"] = img.file_name;
    j["width"] = img.width;
    j["height"] = img.height;
    if (img.group_id) j["group_id"] = *img.group_id;
    root["images"].push_back(std::move(j));
  }
  root["categories"] = ordered_json::array();
  for (const auto& c : manifest.categories) {
    root["categories"].push_back({{"id", c.id}, {"name", c.name}, {"supercategory", "runway"}});
  }
  root["annotations"] = ordered_json::array();
  for (const auto& a : manifest.annotations) {
    ordered_json j;
    j["id"] = a.id;
    j["image_id"] = a.image_id;
    j["category_id"] = a.category_id;
    ordered_json seg = ordered_json::array();
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const Contour& c : a.segmentation) {
      ordered_json flat = ordered_json::array();
      for (const Point2& p : c.points) {
        flat.push_back(p.x);
        flat.push_back(p.y);
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
      }
      seg.push_back(std::move(flat));
    }
    j["segmentation"] = std::move(seg);
    j["area"] = a.area;
    if (a.segmentation.empty()) {
      j["bbox"] = {0, 0, 0, 0};
    } else {
      j["bbox"] = {x0, y0, x1 - x0, y1 - y0};
    }
    j["iscrowd"] = 0;
    if (a.score) j["score"] = *a.score;
    if (a.group_id) j["group_id"] = *a.group_id;
    root["annotations"].push_back(std::move(j));
  }
  return root.dump(1) + "\n";
}

DatasetManifest read_coco(const std::filesystem::path& path) {
  return parse_coco(read_file(path), path.string());
}

std::vector<InstanceAnnotation> parse_predictions(std::string_view text, std::string_view source) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos || text[first] != '[') {
    return parse_coco(text, source).annotations;
  }
  const json root = parse_json(text, source);
  std::vector<InstanceAnnotation> out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string where = "[" + std::to_string(i) + "]";
    const json& j = root[i];
    InstanceAnnotation a;
    a.id = j.contains("id") ? number<std::int64_t>(j, "id", source, where)
                            : static_cast<std::int64_t>(i + 1);
    a.image_id = number<std::int64_t>(j, "image_id", source, where);
    a.category_id = number<int>(j, "category_id", source, where);
    a.segmentation = parse_segmentation(member(j, "segmentation", source, where), source, where);
    a.area = j.contains("area") && j.at("area").is_number() ? j.at("area").get<double>()
                                                            : polygon_area(a.segmentation);
    a.score = number<double>(j, "score", source, where);
    if (!(*a.score >= 0.0 && *a.score <= 1.0)) fail(source, where, "score outside [0, 1]");
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<InstanceAnnotation> read_predictions(const std::filesystem::path& path) {
  return parse_predictions(read_file(path), path.string());
}

void write_coco(const DatasetManifest& manifest, const std::filesystem::path& path) {
  write_file(path, format_coco(manifest));
}

LabelMap default_label_map() {
  return {{"runway", 1},          {"threshold", 2}, {"threshold_marking", 2},
          {"aiming", 3},          {"aiming_marking", 3}, {"aiming_point", 3}};
}

LabelMeImage parse_labelme(std::string_view text, const LabelMap& labels, std::string_view source) {
  const json root = parse_json(text, source);
  if (!root.is_object()) fail(source, "root", "expected an object");
  LabelMeImage out;
  out.width = number<int>(root, "imageWidth", source, "root");
  out.height = number<int>(root, "imageHeight", source, "root");
  if (root.contains("imagePath") && root.at("imagePath").is_string()) out.file_name = root.at("imagePath");
  const json& shapes = member(root, "shapes", source, "root");
  if (!shapes.is_array()) fail(source, "root", "\"shapes\" must be a list");

  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const std::string where = "shapes[" + std::to_string(i) + "]";
    const json& s = shapes[i];
    const json& label = member(s, "label", source, where);
    if (!label.is_string()) fail(source, where, "label must be a string");
    const std::string type =
        s.contains("shape_type") && s.at("shape_type").is_string() ? s.at("shape_type").get<std::string>()
                                                                   : "polygon";
    if (type != "polygon") {
      out.warnings.push_back(std::string(source) + ": " + where + ": skipped " + type + " shape");
      continue;
    }
    const auto it = labels.find(label.get<std::string>());
    if (it == labels.end()) fail(source, where, "unknown label \"" + label.get<std::string>() + "\"");
    const json& pts = member(s, "points", source, where);
    if (!pts.is_array()) fail(source, where, "points must be a list");
    if (pts.size() < 3) fail(source, where, "degenerate polygon");
    Contour c;
    for (const json& p : pts) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        fail(source, where, "points must be [x, y] pairs");
      }
      c.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    InstanceAnnotation a;
    a.id = static_cast<std::int64_t>(out.annotations.size() + 1);
    a.category_id = it->second;
    a.segmentation.push_back(std::move(c));
    a.area = polygon_area(a.segmentation);
    out.annotations.push_back(std::move(a));
  }
  return out;
}

LabelMeImage read_labelme(const std::filesystem::path& path, const LabelMap& labels) {
  return parse_labelme(read_file(path), labels, path.string());
}

std::string encode_pgm(const BinaryMask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) +
                    "\n255\n";
  out.reserve(out.size() + mask.data().size());
  for (std::uint8_t b : mask.data()) out.push_back(static_cast<char>(b ? 255 : 0));
  return out;
}

BinaryMask decode_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return std::string(bytes.substr(start, pos - start));
  };
  if (next_token() != "P5") throw InvalidInput("not a binary PGM (P5) file");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(next_token());
    h = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw InvalidInput("malformed PGM header");
  }
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) throw InvalidInput("unsupported PGM header");
  ++pos;  // single whitespace after maxval
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() < pos + n) throw InvalidInput("truncated PGM data");
  BinaryMask mask(w, h);
  auto data = mask.data();
  for (std::size_t i = 0; i < n; ++i) data[i] = bytes[pos + i] != 0 ? 1 : 0;
  return mask;
}

void write_pgm(const BinaryMask& mask, const std::filesystem::path& path) {
  write_file(path, encode_pgm(mask));
}

BinaryMask read_pgm(const std::filesystem::path& path) {
  try {
    return decode_pgm(read_file(path));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace runway::io
