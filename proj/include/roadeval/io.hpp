// Copyright 2026 The roadeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Parsers and serializers for the on-disk formats (all plain text, LF line
// endings, '.' decimal separator regardless of locale; format version v1).
//
// Label files - one object per line, whitespace separated:
//   category truncation occlusion alpha xmin ymin xmax ymax H W L x y z ry [score]
// 15 fields for ground truth, 16 (trailing score) for predictions. The
// location (x, y, z) is the bottom-face center in camera coordinates; parsing
// converts it to the cuboid center. A ground-truth record whose seven 3D
// fields (H W L x y z ry) all hold the sentinel -1000 is a 2D-only
// annotation. Prediction records must carry real 3D fields. Dimensions must
// be positive and every numeric field finite; truncation/occlusion must be
// 0..2 for ground truth (-1 also accepted for predictions). Unknown category
// tokens parse as unknown_movable and emit a warning record.
//
// Calibration files - "key:" sections, one per line:
//   P2: 12 reals                row-major 3x4 projection; left 3x3 is K
//   g: 4 reals                  ground plane alpha beta gamma d
//   size: 2 ints                image width height (default 1920 1080)
//   Tr_lidar_to_cam: 12 reals   optional row-major 3x4 rigid transform
//   gg_meta: 3 reals            optional gridded ground: cell_size ox oz
//   gg: i j a b g d             optional, one line per grid cell
//
// Report files - fixed-order line format, numbers at 6 significant digits;
// see serialize_report. Reports round-trip exactly from their canonical
// (once-serialized) form.
#ifndef ROADEVAL_IO_HPP_
#define ROADEVAL_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "roadeval/errors.hpp"
#include "roadeval/metrics.hpp"
#include "roadeval/types.hpp"
#include "roadeval/version.hpp"

namespace roadeval {

struct ParseWarning
{
  std::size_t line = 0;
  std::string message;
};

namespace io_detail {

/// Shortest decimal that parses back to the same double.
inline std::string fmt_double(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// 6 significant digits, locale-independent.
inline std::string fmt_g6(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

inline std::string fmt_int(long v) {return std::to_string(v);}

struct Token
{
  std::string_view text;
  std::size_t column = 0;  // 1-based byte offset in the line
};

inline std::vector<Token> tokenize(std::string_view line)
{
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {++i;}
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') {++i;}
    if (i > start) {
      tokens.push_back({line.substr(start, i - start), start + 1});
    }
  }
  return tokens;
}

/// Splits on '\n'; a trailing '\r' per line is tolerated and stripped.
inline std::vector<std::string_view> split_lines(std::string_view text)
{
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) {lines.push_back(text.substr(start));}
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  for (auto & line : lines) {
    if (!line.empty() && line.back() == '\r') {line.remove_suffix(1);}
  }
  return lines;
}

inline bool is_blank(std::string_view line)
{
  for (const char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') {return false;}
  }
  return true;
}

/// Full-token double parse; accepts "inf" when allow_inf is set, never NaN.
inline double parse_real(const Token & tok, std::size_t line_no, const char * field,
  bool allow_inf = false)
{
  double value = 0.0;
  const char * first = tok.text.data();
  const char * last = first + tok.text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError(line_no, tok.column, std::string("non-numeric ") + field);
  }
  if (std::isnan(value) || (!allow_inf && std::isinf(value))) {
    throw ParseError(line_no, tok.column, std::string("non-finite ") + field);
  }
  return value;
}

inline long parse_int(const Token & tok, std::size_t line_no, const char * field)
{
  long value = 0;
  const char * first = tok.text.data();
  const char * last = first + tok.text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw ParseError(line_no, tok.column, std::string("non-integer ") + field);
  }
  return value;
}

/// Occlusion/truncation: numeric, integral, and inside [lo, 2].
inline int parse_level(const Token & tok, std::size_t line_no, const char * field, int lo)
{
  const double v = parse_real(tok, line_no, field);
  const int level = static_cast<int>(v);
  if (static_cast<double>(level) != v || level < lo || level > 2) {
    throw ParseError(line_no, tok.column, std::string("out-of-range ") + field);
  }
  return level;
}

inline constexpr double kSentinel3D = -1000.0;

struct LabelFields
{
  Category category = Category::kUnknownMovable;
  bool category_known = true;
  int truncation = 0;
  int occlusion = 0;
  double alpha = 0.0;
  Box2D box2d;
  bool has_3d = false;
  Box3D box3d;
  double score = 0.0;
};

/// Parses the 15 shared fields (plus score when expect_score).
inline LabelFields parse_label_line(const std::vector<Token> & tokens, std::size_t line_no,
  bool expect_score)
{
  const std::size_t expected = expect_score ? 16 : 15;
  if (tokens.size() != expected) {
    throw ParseError(line_no, 1,
        "expected " + std::to_string(expected) + " fields, got " +
        std::to_string(tokens.size()));
  }
  LabelFields f;
  const auto category = category_from_string(tokens[0].text);
  f.category_known = category.has_value();
  f.category = category.value_or(Category::kUnknownMovable);
  f.truncation = parse_level(tokens[1], line_no, "truncation", expect_score ? -1 : 0);
  f.occlusion = parse_level(tokens[2], line_no, "occlusion", expect_score ? -1 : 0);
  f.alpha = parse_real(tokens[3], line_no, "alpha");
  f.box2d.xmin = parse_real(tokens[4], line_no, "box2d.xmin");
  f.box2d.ymin = parse_real(tokens[5], line_no, "box2d.ymin");
  f.box2d.xmax = parse_real(tokens[6], line_no, "box2d.xmax");
  f.box2d.ymax = parse_real(tokens[7], line_no, "box2d.ymax");

  double v3d[7];
  static constexpr const char * kNames[7] = {
    "height", "width", "length", "location.x", "location.y", "location.z", "rotation_y"};
  bool all_sentinel = true;
  for (int i = 0; i < 7; ++i) {
    v3d[i] = parse_real(tokens[8 + i], line_no, kNames[i]);
    all_sentinel = all_sentinel && v3d[i] == kSentinel3D;
  }
  if (all_sentinel) {
    f.has_3d = false;
    return f;
  }
  if (!(v3d[0] > 0.0) || !(v3d[1] > 0.0) || !(v3d[2] > 0.0)) {
    throw ParseError(line_no, tokens[8].column, "non-positive box dimension");
  }
  f.has_3d = true;
  f.box3d.height = v3d[0];
  f.box3d.width = v3d[1];
  f.box3d.length = v3d[2];
  // file stores the bottom-face center; convert to the cuboid center
  f.box3d.center = {v3d[3], v3d[4] - 0.5 * v3d[0], v3d[5]};
  f.box3d.yaw = normalize_angle(v3d[6]);
  return f;
}

}  // namespace io_detail

/// Parses a ground-truth label file. Unknown category tokens become
/// unknown_movable and are reported through `warnings` when given.
inline std::vector<Annotation> parse_annotations(std::string_view text,
  std::vector<ParseWarning> * warnings = nullptr)
{
  std::vector<Annotation> out;
  const auto lines = io_detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (io_detail::is_blank(lines[li])) {continue;}
    const auto tokens = io_detail::tokenize(lines[li]);
    const auto f = io_detail::parse_label_line(tokens, li + 1, false);
    if (!f.category_known && warnings) {
      warnings->push_back(
        {li + 1, "unknown category \"" + std::string(tokens[0].text) +
          "\" mapped to unknown_movable"});
    }
    Annotation a;
    a.category = f.category;
    a.truncation = f.truncation;
    a.occlusion = f.occlusion;
    a.alpha = f.alpha;
    a.box2d = f.box2d;
    if (f.has_3d) {a.box3d = f.box3d;}
    out.push_back(std::move(a));
  }
  return out;
}

/// Parses a prediction file (16 fields per line). 2D-only records are
/// malformed here: a 3D evaluation cannot use them.
inline std::vector<Detection> parse_detections(std::string_view text,
  std::vector<ParseWarning> * warnings = nullptr)
{
  std::vector<Detection> out;
  const auto lines = io_detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (io_detail::is_blank(lines[li])) {continue;}
    const auto tokens = io_detail::tokenize(lines[li]);
    const auto f = io_detail::parse_label_line(tokens, li + 1, true);
    if (!f.has_3d) {
      throw ParseError(li + 1, tokens[8].column, "prediction without 3D fields");
    }
    if (!f.category_known && warnings) {
      warnings->push_back(
        {li + 1, "unknown category \"" + std::string(tokens[0].text) +
          "\" mapped to unknown_movable"});
    }
    Detection d;
    d.category = f.category;
    d.alpha = f.alpha;
    d.box2d = f.box2d;
    d.box3d = f.box3d;
    d.score = io_detail::parse_real(tokens[15], li + 1, "score");
    out.push_back(std::move(d));
  }
  return out;
}

namespace io_detail {

inline void append_label_common(std::string & out, Category category, int truncation,
  int occlusion, double alpha, const Box2D & box2d)
{
  out += to_string(category);
  out += ' ';
  out += fmt_int(truncation);
  out += ' ';
  out += fmt_int(occlusion);
  out += ' ';
  out += fmt_double(alpha);
  for (const double v : {box2d.xmin, box2d.ymin, box2d.xmax, box2d.ymax}) {
    out += ' ';
    out += fmt_double(v);
  }
}

inline void append_box3d(std::string & out, const Box3D & box)
{
  const double bottom_y = box.center.y + 0.5 * box.height;
  for (const double v :
    {box.height, box.width, box.length, box.center.x, bottom_y, box.center.z, box.yaw}) {
    out += ' ';
    out += fmt_double(v);
  }
}

}  // namespace io_detail

inline std::string serialize_annotations(std::span<const Annotation> annotations)
{
  std::string out;
  for (const auto & a : annotations) {
    io_detail::append_label_common(out, a.category, a.truncation, a.occlusion, a.alpha, a.box2d);
    if (a.box3d) {
      io_detail::append_box3d(out, *a.box3d);
    } else {
      for (int i = 0; i < 7; ++i) {out += " -1000";}
    }
    out += '\n';
  }
  return out;
}

inline std::string serialize_detections(std::span<const Detection> detections)
{
  std::string out;
  for (const auto & d : detections) {
    io_detail::append_label_common(out, d.category, -1, -1,
      d.alpha, d.box2d.value_or(Box2D{}));
    io_detail::append_box3d(out, d.box3d);
    out += ' ';
    out += io_detail::fmt_double(d.score);
    out += '\n';
  }
  return out;
}

/// Everything a calibration file can carry.
struct CalibData
{
  CameraModel camera;
  GroundPlane plane;
  std::optional<RigidTransform> lidar_to_cam;
  std::optional<GriddedGround> gridded;  // fallback plane equals `plane`
};

inline CalibData parse_calib(std::string_view text)
{
  using io_detail::Token;
  bool have_p2 = false;
  bool have_g = false;
  bool have_gg_meta = false;
  double p2[12] = {};
  double g4[4] = {};
  int size_wh[2] = {1920, 1080};
  std::optional<RigidTransform> lidar_to_cam;
  GriddedGround gridded;
  bool have_gg_cell = false;

  const auto lines = io_detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (io_detail::is_blank(lines[li])) {continue;}
    const auto tokens = io_detail::tokenize(lines[li]);
    const std::size_t line_no = li + 1;
    const std::string_view key = tokens[0].text;
    const auto expect = [&](std::size_t n) {
        if (tokens.size() != n + 1) {
          throw ParseError(line_no, tokens[0].column,
              std::string(key) + " expects " + std::to_string(n) + " values");
        }
      };
    if (key == "P2:") {
      expect(12);
      for (int i = 0; i < 12; ++i) {
        p2[i] = io_detail::parse_real(tokens[i + 1], line_no, "P2 entry");
      }
      have_p2 = true;
    } else if (key == "g:") {
      expect(4);
      for (int i = 0; i < 4; ++i) {
        g4[i] = io_detail::parse_real(tokens[i + 1], line_no, "plane coefficient");
      }
      have_g = true;
    } else if (key == "size:") {
      expect(2);
      size_wh[0] = static_cast<int>(io_detail::parse_int(tokens[1], line_no, "width"));
      size_wh[1] = static_cast<int>(io_detail::parse_int(tokens[2], line_no, "height"));
    } else if (key == "Tr_lidar_to_cam:") {
      expect(12);
      RigidTransform tr;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          tr.rotation.m[r][c] =
            io_detail::parse_real(tokens[1 + r * 4 + c], line_no, "rotation entry");
        }
      }
      tr.translation = {
        io_detail::parse_real(tokens[4], line_no, "translation entry"),
        io_detail::parse_real(tokens[8], line_no, "translation entry"),
        io_detail::parse_real(tokens[12], line_no, "translation entry")};
      if (!tr.is_valid(1e-6)) {
        throw ParseError(line_no, tokens[1].column, "rotation is not orthonormal");
      }
      lidar_to_cam = tr;
    } else if (key == "gg_meta:") {
      expect(3);
      gridded.cell_size = io_detail::parse_real(tokens[1], line_no, "cell_size");
      gridded.origin_x = io_detail::parse_real(tokens[2], line_no, "origin");
      gridded.origin_z = io_detail::parse_real(tokens[3], line_no, "origin");
      if (!(gridded.cell_size > 0.0)) {
        throw ParseError(line_no, tokens[1].column, "cell_size must be positive");
      }
      have_gg_meta = true;
    } else if (key == "gg:") {
      expect(6);
      const int i = static_cast<int>(io_detail::parse_int(tokens[1], line_no, "cell index"));
      const int j = static_cast<int>(io_detail::parse_int(tokens[2], line_no, "cell index"));
      double coeff[4];
      for (int k = 0; k < 4; ++k) {
        coeff[k] = io_detail::parse_real(tokens[3 + k], line_no, "plane coefficient");
      }
      try {
        gridded.cells[{i, j}] =
          GroundPlane::from_coefficients(coeff[0], coeff[1], coeff[2], coeff[3]);
      } catch (const DegenerateInput &) {
        throw ParseError(line_no, tokens[3].column, "degenerate cell plane");
      }
      have_gg_cell = true;
    } else {
      throw ParseError(line_no, tokens[0].column,
          "unknown section \"" + std::string(key) + "\"");
    }
  }
  if (!have_p2) {throw MissingSection("P2");}
  if (!have_g) {throw MissingSection("g");}

  CalibData calib;
  calib.camera.fx = p2[0];
  calib.camera.cx = p2[2];
  calib.camera.fy = p2[5];
  calib.camera.cy = p2[6];
  calib.camera.width = size_wh[0];
  calib.camera.height = size_wh[1];
  try {
    calib.camera.validate();
  } catch (const ConfigError & e) {
    throw ParseError(1, 1, e.what());
  }
  try {
    calib.plane = GroundPlane::from_coefficients(g4[0], g4[1], g4[2], g4[3]);
  } catch (const DegenerateInput &) {
    throw ParseError(1, 1, "degenerate ground plane");
  }
  calib.lidar_to_cam = lidar_to_cam;
  if (have_gg_meta || have_gg_cell) {
    gridded.fallback = calib.plane;
    calib.gridded = gridded;
  }
  return calib;
}

inline std::string serialize_calib(const CalibData & calib)
{
  using io_detail::fmt_double;
  std::string out;
  out += "P2:";
  const double p2[12] = {
    calib.camera.fx, 0.0, calib.camera.cx, 0.0,
    0.0, calib.camera.fy, calib.camera.cy, 0.0,
    0.0, 0.0, 1.0, 0.0};
  for (const double v : p2) {
    out += ' ';
    out += fmt_double(v);
  }
  out += "\nsize: " + std::to_string(calib.camera.width) + ' ' +
    std::to_string(calib.camera.height);
  out += "\ng:";
  for (const double v : {calib.plane.alpha, calib.plane.beta, calib.plane.gamma,
      calib.plane.d}) {
    out += ' ';
    out += fmt_double(v);
  }
  out += '\n';
  if (calib.lidar_to_cam) {
    out += "Tr_lidar_to_cam:";
    const auto & tr = *calib.lidar_to_cam;
    const double t[3] = {tr.translation.x, tr.translation.y, tr.translation.z};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        out += ' ';
        out += fmt_double(tr.rotation.m[r][c]);
      }
      out += ' ';
      out += fmt_double(t[r]);
    }
    out += '\n';
  }
  if (calib.gridded) {
    const auto & gg = *calib.gridded;
    out += "gg_meta: " + fmt_double(gg.cell_size) + ' ' + fmt_double(gg.origin_x) + ' ' +
      fmt_double(gg.origin_z) + '\n';
    for (const auto & [index, plane] : gg.cells) {
      out += "gg: " + std::to_string(index.first) + ' ' + std::to_string(index.second);
      for (const double v : {plane.alpha, plane.beta, plane.gamma, plane.d}) {
        out += ' ';
        out += fmt_double(v);
      }
      out += '\n';
    }
  }
  return out;
}

/// Depth map file: "width height zmax" header, then one row per line,
/// invalid pixels written as "inf".
inline std::string serialize_depth_map(const DepthMap & map)
{
  std::string out;
  out += std::to_string(map.width) + ' ' + std::to_string(map.height) + ' ' +
    io_detail::fmt_double(map.z_max) + '\n';
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      if (x > 0) {out += ' ';}
      out += io_detail::fmt_double(map.at(x, y));
    }
    out += '\n';
  }
  return out;
}

inline DepthMap parse_depth_map(std::string_view text)
{
  const auto lines = io_detail::split_lines(text);
  if (lines.empty() || io_detail::is_blank(lines[0])) {
    throw ParseError(1, 1, "missing depth map header");
  }
  const auto header = io_detail::tokenize(lines[0]);
  if (header.size() != 3) {
    throw ParseError(1, 1, "depth map header expects width height zmax");
  }
  DepthMap map;
  map.width = static_cast<int>(io_detail::parse_int(header[0], 1, "width"));
  map.height = static_cast<int>(io_detail::parse_int(header[1], 1, "height"));
  map.z_max = io_detail::parse_real(header[2], 1, "zmax", true);
  if (map.width <= 0 || map.height <= 0) {
    throw ParseError(1, 1, "depth map size must be positive");
  }
  map.values.reserve(static_cast<std::size_t>(map.width) * map.height);
  for (int y = 0; y < map.height; ++y) {
    const std::size_t li = static_cast<std::size_t>(y) + 1;
    if (li >= lines.size()) {
      throw ParseError(li + 1, 1, "missing depth map row");
    }
    const auto tokens = io_detail::tokenize(lines[li]);
    if (static_cast<int>(tokens.size()) != map.width) {
      throw ParseError(li + 1, 1, "depth map row has wrong width");
    }
    for (const auto & tok : tokens) {
      map.values.push_back(io_detail::parse_real(tok, li + 1, "depth", true));
    }
  }
  return map;
}

namespace io_detail {

inline void append_config_block(std::string & out, const EvalConfig & cfg)
{
  out += "recall_positions " + std::to_string(cfg.recall_positions) + '\n';
  out += "omega1 " + fmt_g6(cfg.omega1) + '\n';
  out += "omega2 " + fmt_g6(cfg.omega2) + '\n';
  out += std::string("ags_normalizer ") + (cfg.ags_normalizer_uses_gt ? "gt" : "pred") + '\n';
  out += "ignore_overlap_2d " + fmt_g6(cfg.ignore_overlap_2d) + '\n';
  for (const auto & [category, thresholds] : cfg.iou_thresholds) {
    out += "thresholds ";
    out += to_string(category);
    for (const double t : thresholds) {
      out += ' ';
      out += fmt_g6(t);
    }
    out += '\n';
  }
  for (const auto & bucket : cfg.range_buckets) {
    out += "bucket " + bucket.label + ' ' + fmt_g6(bucket.zmin) + ' ' + fmt_g6(bucket.zmax) +
      '\n';
  }
}

/// Shared grammar for report config blocks and standalone eval-config files.
/// Returns defaults for keys that never appear.
inline EvalConfig parse_config_lines(const std::vector<std::string_view> & lines,
  std::size_t first_line_no)
{
  EvalConfig cfg = EvalConfig::defaults();
  bool saw_thresholds = false;
  bool saw_buckets = false;
  std::vector<std::pair<Category, std::vector<double>>> thresholds;
  std::vector<RangeBucket> buckets;

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line_no = first_line_no + li;
    std::string_view line = lines[li];
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {line = line.substr(0, hash);}
    if (is_blank(line)) {continue;}
    const auto tokens = tokenize(line);
    const std::string_view key = tokens[0].text;
    const auto expect = [&](std::size_t n) {
        if (tokens.size() != n + 1) {
          throw ParseError(line_no, tokens[0].column,
              std::string(key) + " expects " + std::to_string(n) + " values");
        }
      };
    if (key == "recall_positions") {
      expect(1);
      cfg.recall_positions = static_cast<int>(parse_int(tokens[1], line_no, key.data()));
    } else if (key == "omega1") {
      expect(1);
      cfg.omega1 = parse_real(tokens[1], line_no, "omega1");
    } else if (key == "omega2") {
      expect(1);
      cfg.omega2 = parse_real(tokens[1], line_no, "omega2");
    } else if (key == "ags_normalizer") {
      expect(1);
      if (tokens[1].text == "pred") {
        cfg.ags_normalizer_uses_gt = false;
      } else if (tokens[1].text == "gt") {
        cfg.ags_normalizer_uses_gt = true;
      } else {
        throw ParseError(line_no, tokens[1].column, "ags_normalizer must be pred or gt");
      }
    } else if (key == "ignore_overlap_2d") {
      expect(1);
      cfg.ignore_overlap_2d = parse_real(tokens[1], line_no, "ignore_overlap_2d");
    } else if (key == "thresholds") {
      if (tokens.size() < 3) {
        throw ParseError(line_no, tokens[0].column, "thresholds expects category and values");
      }
      const auto category = category_from_string(tokens[1].text);
      if (!category) {
        throw ParseError(line_no, tokens[1].column,
            "unknown category \"" + std::string(tokens[1].text) + "\"");
      }
      std::vector<double> values;
      for (std::size_t i = 2; i < tokens.size(); ++i) {
        values.push_back(parse_real(tokens[i], line_no, "IoU threshold"));
      }
      thresholds.emplace_back(*category, std::move(values));
      saw_thresholds = true;
    } else if (key == "bucket") {
      expect(3);
      RangeBucket b;
      b.label = std::string(tokens[1].text);
      b.zmin = parse_real(tokens[2], line_no, "bucket zmin", true);
      b.zmax = parse_real(tokens[3], line_no, "bucket zmax", true);
      buckets.push_back(std::move(b));
      saw_buckets = true;
    } else {
      throw ParseError(line_no, tokens[0].column,
          "unknown config key \"" + std::string(key) + "\"");
    }
  }
  if (saw_thresholds) {cfg.iou_thresholds = std::move(thresholds);}
  if (saw_buckets) {cfg.range_buckets = std::move(buckets);}
  try {
    cfg.validate();
  } catch (const ConfigError & e) {
    throw ParseError(first_line_no, 1, e.what());
  }
  return cfg;
}

}  // namespace io_detail

/// Standalone evaluation-config file: the report config-block grammar, with
/// '#' comments; omitted keys fall back to defaults.
inline EvalConfig parse_eval_config(std::string_view text)
{
  return io_detail::parse_config_lines(io_detail::split_lines(text), 1);
}

/// Fixed-order report document; see the format comment at the top of the
/// file. Cells appear in (category, threshold, bucket) report order; all
/// reals carry 6 significant digits.
inline std::string serialize_report(const MetricReport & report)
{
  using io_detail::fmt_g6;
  std::string out;
  out += std::string("roadeval_report ") + kFormatVersion + '\n';
  out += "devkit_version " + report.devkit_version + '\n';
  out += "operating_point " + report.operating_point_rule + '\n';
  out += "config_begin\n";
  io_detail::append_config_block(out, report.config);
  out += "config_end\n";
  for (const auto & cell : report.cells) {
    out += "cell_begin\n";
    out += "category ";
    out += to_string(cell.category);
    out += '\n';
    out += "iou " + fmt_g6(cell.iou_threshold) + '\n';
    out += "bucket " + cell.bucket_label + '\n';
    out += "counts " + std::to_string(cell.tp) + ' ' + std::to_string(cell.fp) + ' ' +
      std::to_string(cell.fn) + ' ' + std::to_string(cell.ignored) + '\n';
    out += "operating_score " + fmt_g6(cell.operating_score) + '\n';
    out += std::string("undefined ") + (cell.undefined ? "1" : "0") + '\n';
    out += "ap " + fmt_g6(cell.ap) + '\n';
    out += "acs " + fmt_g6(cell.acs) + '\n';
    out += "aos " + fmt_g6(cell.aos) + '\n';
    out += "aas " + fmt_g6(cell.aas) + '\n';
    out += "agd " + fmt_g6(cell.agd) + '\n';
    out += "ags " + fmt_g6(cell.ags) + '\n';
    out += "rope_score " + fmt_g6(cell.rope_score) + '\n';
    out += "cell_end\n";
  }
  out += "end\n";
  return out;
}

inline MetricReport parse_report(std::string_view text)
{
  const auto lines = io_detail::split_lines(text);
  std::size_t li = 0;
  const auto next_line = [&]() -> std::vector<io_detail::Token> {
      while (li < lines.size() && io_detail::is_blank(lines[li])) {++li;}
      if (li >= lines.size()) {
        throw ParseError(lines.size() + 1, 1, "unexpected end of report");
      }
      return io_detail::tokenize(lines[li++]);
    };
  const auto expect_key = [&](const std::vector<io_detail::Token> & tokens,
      std::string_view key, std::size_t values) {
      if (tokens.empty() || tokens[0].text != key || tokens.size() != values + 1) {
        throw ParseError(li, 1, "expected \"" + std::string(key) + "\" line");
      }
    };

  auto tokens = next_line();
  if (tokens.size() != 2 || tokens[0].text != "roadeval_report") {
    throw ParseError(li, 1, "not a roadeval report");
  }
  if (tokens[1].text != kFormatVersion) {
    throw ParseError(li, tokens[1].column,
        "unsupported format version \"" + std::string(tokens[1].text) + "\"");
  }
  MetricReport report;
  tokens = next_line();
  expect_key(tokens, "devkit_version", 1);
  report.devkit_version = std::string(tokens[1].text);
  tokens = next_line();
  expect_key(tokens, "operating_point", 1);
  report.operating_point_rule = std::string(tokens[1].text);

  tokens = next_line();
  expect_key(tokens, "config_begin", 0);
  std::vector<std::string_view> config_lines;
  const std::size_t config_first = li + 1;
  while (true) {
    if (li >= lines.size()) {
      throw ParseError(lines.size() + 1, 1, "unterminated config block");
    }
    if (!io_detail::is_blank(lines[li]) &&
      io_detail::tokenize(lines[li])[0].text == "config_end")
    {
      ++li;
      break;
    }
    config_lines.push_back(lines[li++]);
  }
  report.config = io_detail::parse_config_lines(config_lines, config_first);

  while (true) {
    tokens = next_line();
    if (tokens.size() == 1 && tokens[0].text == "end") {
      break;
    }
    if (tokens.size() != 1 || tokens[0].text != "cell_begin") {
      throw ParseError(li, 1, "expected \"cell_begin\" or \"end\"");
    }
    MetricCell cell;
    tokens = next_line();
    expect_key(tokens, "category", 1);
    const auto category = category_from_string(tokens[1].text);
    if (!category) {
      throw ParseError(li, tokens[1].column,
          "unknown category \"" + std::string(tokens[1].text) + "\"");
    }
    cell.category = *category;
    tokens = next_line();
    expect_key(tokens, "iou", 1);
    cell.iou_threshold = io_detail::parse_real(tokens[1], li, "iou");
    tokens = next_line();
    expect_key(tokens, "bucket", 1);
    cell.bucket_label = std::string(tokens[1].text);
    tokens = next_line();
    expect_key(tokens, "counts", 4);
    cell.tp = io_detail::parse_int(tokens[1], li, "tp");
    cell.fp = io_detail::parse_int(tokens[2], li, "fp");
    cell.fn = io_detail::parse_int(tokens[3], li, "fn");
    cell.ignored = io_detail::parse_int(tokens[4], li, "ignored");
    tokens = next_line();
    expect_key(tokens, "operating_score", 1);
    cell.operating_score = io_detail::parse_real(tokens[1], li, "operating_score");
    tokens = next_line();
    expect_key(tokens, "undefined", 1);
    if (tokens[1].text != "0" && tokens[1].text != "1") {
      throw ParseError(li, tokens[1].column, "undefined must be 0 or 1");
    }
    cell.undefined = tokens[1].text == "1";
    const auto read_metric = [&](std::string_view key) {
        const auto t = next_line();
        expect_key(t, key, 1);
        return io_detail::parse_real(t[1], li, key.data());
      };
    cell.ap = read_metric("ap");
    cell.acs = read_metric("acs");
    cell.aos = read_metric("aos");
    cell.aas = read_metric("aas");
    cell.agd = read_metric("agd");
    cell.ags = read_metric("ags");
    cell.rope_score = read_metric("rope_score");
    tokens = next_line();
    expect_key(tokens, "cell_end", 0);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

/// Reads a whole file; throws Error when the file cannot be read.
inline std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open \"" + path.string() + "\"");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path & path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write \"" + path.string() + "\"");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw Error("write failed for \"" + path.string() + "\"");
  }
}

namespace io_detail {

/// Sorted *.txt stems of a directory.
inline std::vector<std::filesystem::path> label_files(const std::filesystem::path & dir)
{
  if (!std::filesystem::is_directory(dir)) {
    throw Error("not a directory: \"" + dir.string() + "\"");
  }
  std::vector<std::filesystem::path> files;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

template<typename T>
[[noreturn]] void rethrow_with_file(const std::filesystem::path & file, const T & e)
{
  throw ParseError(e.line(), e.column(), "[" + file.string() + "] " + e.reason());
}

}  // namespace io_detail

/// Loads every *.txt in `dir` as a ground-truth frame keyed by file stem.
inline std::map<std::string, std::vector<Annotation>> load_annotation_dir(
  const std::filesystem::path & dir, std::vector<ParseWarning> * warnings = nullptr)
{
  std::map<std::string, std::vector<Annotation>> out;
  for (const auto & file : io_detail::label_files(dir)) {
    try {
      auto annotations = parse_annotations(read_file(file), warnings);
      const std::string frame_id = file.stem().string();
      for (auto & a : annotations) {a.frame_id = frame_id;}
      out.emplace(frame_id, std::move(annotations));
    } catch (const ParseError & e) {
      io_detail::rethrow_with_file(file, e);
    }
  }
  return out;
}

inline std::map<std::string, std::vector<Detection>> load_detection_dir(
  const std::filesystem::path & dir, std::vector<ParseWarning> * warnings = nullptr)
{
  std::map<std::string, std::vector<Detection>> out;
  for (const auto & file : io_detail::label_files(dir)) {
    try {
      auto detections = parse_detections(read_file(file), warnings);
      const std::string frame_id = file.stem().string();
      for (auto & d : detections) {d.frame_id = frame_id;}
      out.emplace(frame_id, std::move(detections));
    } catch (const ParseError & e) {
      io_detail::rethrow_with_file(file, e);
    }
  }
  return out;
}

inline std::map<std::string, CalibData> load_calib_dir(const std::filesystem::path & dir)
{
  std::map<std::string, CalibData> out;
  for (const auto & file : io_detail::label_files(dir)) {
    try {
      out.emplace(file.stem().string(), parse_calib(read_file(file)));
    } catch (const ParseError & e) {
      io_detail::rethrow_with_file(file, e);
    }
  }
  return out;
}

}  // namespace roadeval

#endif  // ROADEVAL_IO_HPP_
