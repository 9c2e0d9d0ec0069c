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
// Deterministic synthetic roadside scenes and detector-noise models.
//
// Scenes are pure functions of (config, seed): every frame derives its own
// random stream, and every object inside a frame derives a substream from its
// index, so insertion order or parallel generation cannot change a single
// draw. The generator samples a camera (height, pitch, focal length) per
// frame, derives the ground plane from height and pitch, and drops objects
// whose bottom-face center rests exactly on that plane. Boxes keep their
// vertical axis along the camera y axis, so with a pitched camera the four
// bottom corners straddle the plane by O(size * sin(pitch)); at pitch 0 the
// whole bottom face lies on it.
#ifndef ROADEVAL_SYNTH_HPP_
#define ROADEVAL_SYNTH_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "roadeval/errors.hpp"
#include "roadeval/geometry.hpp"
#include "roadeval/io.hpp"
#include "roadeval/rng.hpp"
#include "roadeval/types.hpp"

namespace roadeval {

/// Per-category box dimensions: mean and standard deviation for length,
/// height, width (dataset units, meters).
struct SizeStats
{
  double mean_l = 0.0;
  double mean_h = 0.0;
  double mean_w = 0.0;
  double std_l = 0.0;
  double std_h = 0.0;
  double std_w = 0.0;
};

/// Published per-category mean/std sizes used as generator defaults.
inline std::map<Category, SizeStats> default_size_stats()
{
  return {
    {Category::kCar, {4.247, 1.325, 1.706, 0.315, 0.258, 0.234}},
    {Category::kTruck, {7.122, 2.623, 1.706, 2.067, 0.628, 0.492}},
    {Category::kVan, {4.651, 1.750, 1.757, 0.429, 0.311, 0.268}},
    {Category::kBus, {10.575, 3.009, 2.533, 1.806, 0.404, 0.426}},
    {Category::kPedestrian, {0.478, 1.610, 0.501, 0.178, 0.160, 0.143}},
    {Category::kCyclist, {1.525, 1.382, 0.505, 0.264, 0.280, 0.217}},
    {Category::kTricyclist, {2.631, 1.539, 1.077, 0.497, 0.196, 0.292}},
    {Category::kMotorcyclist, {1.692, 1.418, 0.613, 0.276, 0.175, 0.211}},
  };
}

struct SceneConfig
{
  std::uint64_t seed = 1;
  int frames = 10;
  // camera ranges; placeholders exposed in config, not dataset-authoritative
  double height_min = 4.0;   // m
  double height_max = 8.0;
  double pitch_min = 5.0 * kPi / 180.0;  // radians, downward
  double pitch_max = 25.0 * kPi / 180.0;
  double focal_min = 2100.0;  // px
  double focal_max = 2800.0;
  int image_width = 1920;
  int image_height = 1080;
  double objects_per_frame_mean = 12.0;  // Poisson
  // depth distribution: normal(depth_mean, depth_sigma) truncated to range,
  // peaking in the 60-80 m band by default
  double depth_min = 10.0;
  double depth_max = 145.0;
  double depth_mean = 70.0;
  double depth_sigma = 30.0;
  std::vector<std::pair<Category, double>> category_weights = {
    {Category::kCar, 0.45}, {Category::kVan, 0.08}, {Category::kBus, 0.04},
    {Category::kTruck, 0.06}, {Category::kCyclist, 0.12}, {Category::kMotorcyclist, 0.08},
    {Category::kTricyclist, 0.03}, {Category::kPedestrian, 0.14}};
  std::map<Category, SizeStats> sizes = default_size_stats();

  void validate() const
  {
    if (frames <= 0) {throw ConfigError("frames must be positive");}
    if (!(height_min <= height_max) || !(height_min > 0.0)) {
      throw ConfigError("invalid camera height range");
    }
    if (!(pitch_min <= pitch_max) || pitch_min < 0.0 || pitch_max >= 0.5 * kPi) {
      throw ConfigError("invalid pitch range");
    }
    if (!(focal_min <= focal_max) || !(focal_min > 0.0)) {
      throw ConfigError("invalid focal range");
    }
    if (image_width < 16 || image_height < 16) {
      throw ConfigError("invalid image size");
    }
    if (objects_per_frame_mean < 0.0) {
      throw ConfigError("objects_per_frame_mean must be non-negative");
    }
    if (!(depth_min > 0.0) || !(depth_min <= depth_max)) {
      throw ConfigError("invalid depth range");
    }
    if (!(depth_sigma >= 0.0)) {
      throw ConfigError("depth_sigma must be non-negative");
    }
    if (category_weights.empty()) {
      throw ConfigError("category_weights must not be empty");
    }
    double total = 0.0;
    for (const auto & [category, weight] : category_weights) {
      if (weight < 0.0) {throw ConfigError("category weights must be non-negative");}
      if (sizes.find(category) == sizes.end()) {
        throw ConfigError(
            "no size stats for category " + std::string(to_string(category)));
      }
      total += weight;
    }
    if (std::abs(total - 1.0) > 1e-6) {
      throw ConfigError("category weights must sum to 1");
    }
    for (const auto & [category, s] : sizes) {
      if (!(s.mean_l > 0.0) || !(s.mean_h > 0.0) || !(s.mean_w > 0.0) || s.std_l < 0.0 ||
        s.std_h < 0.0 || s.std_w < 0.0)
      {
        throw ConfigError(
            "invalid size stats for category " + std::string(to_string(category)));
      }
    }
  }
};

/// Detector noise. All zeros reproduces the ground truth with score 1.
struct NoiseModel
{
  double center_sigma = 0.0;            // m, isotropic on the 3D center
  double center_sigma_per_meter = 0.0;  // extra m of sigma per m of depth
  double yaw_sigma = 0.0;               // radians
  double size_sigma = 0.0;              // relative
  double drop_probability = 0.0;        // per-object miss (FN)
  double clutter_rate = 0.0;            // Poisson FP count per frame

  void validate() const
  {
    if (center_sigma < 0.0 || center_sigma_per_meter < 0.0 || yaw_sigma < 0.0 ||
      size_sigma < 0.0)
    {
      throw ConfigError("noise sigmas must be non-negative");
    }
    if (drop_probability < 0.0 || drop_probability > 1.0) {
      throw ConfigError("drop_probability must lie in [0, 1]");
    }
    if (clutter_rate < 0.0) {
      throw ConfigError("clutter_rate must be non-negative");
    }
  }
};

/// One generated frame: annotations plus the calibration that produced them.
struct Frame
{
  std::string id;
  CalibData calib;
  std::vector<Annotation> annotations;
};

namespace synth_detail {

// purpose keys for per-frame substreams
inline constexpr std::uint64_t kStreamCamera = 0;
inline constexpr std::uint64_t kStreamCount = 1;
inline constexpr std::uint64_t kStreamObject = 2;
inline constexpr std::uint64_t kStreamClutter = 3;

inline double sample_in_range(Rng & rng, double mean, double sigma, double lo, double hi)
{
  if (sigma <= 0.0) {return std::clamp(mean, lo, hi);}
  for (int attempt = 0; attempt < 256; ++attempt) {
    const double v = rng.normal(mean, sigma);
    if (v >= lo && v <= hi) {return v;}
  }
  return 0.5 * (lo + hi);
}

inline std::string frame_name(int index)
{
  std::string s = std::to_string(index);
  return std::string(s.size() >= 6 ? 0 : 6 - s.size(), '0') + s;
}

/// Height of the plane (y solving the plane equation) above footprint (x, z).
inline double plane_y(const GroundPlane & g, double x, double z)
{
  return -(g.alpha * x + g.gamma * z + g.d) / g.beta;
}

/// Occlusion level from the largest 2D overlap fraction by a closer object:
/// 0 for none, 1 below half, 2 at or above half.
inline int occlusion_level(const Box2D & own, double own_z, std::span<const Annotation> others,
  std::span<const double> depths)
{
  const double area = own.area();
  if (!(area > 0.0)) {return 0;}
  double worst = 0.0;
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (depths[i] >= own_z) {continue;}
    const Box2D & b = others[i].box2d;
    const double w = std::min(own.xmax, b.xmax) - std::max(own.xmin, b.xmin);
    const double h = std::min(own.ymax, b.ymax) - std::max(own.ymin, b.ymin);
    if (w > 0.0 && h > 0.0) {worst = std::max(worst, w * h / area);}
  }
  if (worst <= 0.0) {return 0;}
  return worst < 0.5 ? 1 : 2;
}

/// 0 inside, 1 crossing a vertical image border (horizontal cut), 2 crossing
/// a horizontal border.
inline int truncation_level(const Box2D & box, int width, int height)
{
  if (box.ymin < 0.0 || box.ymax > height) {return 2;}
  if (box.xmin < 0.0 || box.xmax > width) {return 1;}
  return 0;
}

}  // namespace synth_detail

/// Generates `cfg.frames` frames. Deterministic for a fixed config.
inline std::vector<Frame> generate_scene(const SceneConfig & cfg)
{
  cfg.validate();
  std::vector<double> weights;
  std::vector<Category> weight_categories;
  for (const auto & [category, weight] : cfg.category_weights) {
    weight_categories.push_back(category);
    weights.push_back(weight);
  }

  const Rng root(cfg.seed);
  std::vector<Frame> frames(static_cast<std::size_t>(cfg.frames));
  for (int f = 0; f < cfg.frames; ++f) {
    Frame & frame = frames[static_cast<std::size_t>(f)];
    frame.id = synth_detail::frame_name(f);
    const Rng frame_rng = root.stream(static_cast<std::uint64_t>(f));

    Rng cam_rng = frame_rng.stream(synth_detail::kStreamCamera);
    const double height = cam_rng.uniform(cfg.height_min, cfg.height_max);
    const double pitch = cam_rng.uniform(cfg.pitch_min, cfg.pitch_max);
    const double focal = cam_rng.uniform(cfg.focal_min, cfg.focal_max);
    CameraModel cam;
    cam.fx = focal;
    cam.fy = focal;
    cam.width = cfg.image_width;
    cam.height = cfg.image_height;
    cam.cx = 0.5 * cfg.image_width + cam_rng.uniform(-20.0, 20.0);
    cam.cy = 0.5 * cfg.image_height + cam_rng.uniform(-20.0, 20.0);
    // ground plane of a camera at `height` pitched down by `pitch`:
    // cos(p)*y + sin(p)*z - h = 0 in camera coordinates
    const GroundPlane plane =
      GroundPlane::from_coefficients(0.0, std::cos(pitch), std::sin(pitch), -height);
    frame.calib = CalibData{cam, plane, std::nullopt, std::nullopt};

    Rng count_rng = frame_rng.stream(synth_detail::kStreamCount);
    const int count = count_rng.poisson(cfg.objects_per_frame_mean);

    std::vector<double> center_depths;
    for (int i = 0; i < count; ++i) {
      Rng obj = frame_rng.stream(synth_detail::kStreamObject).stream(
        static_cast<std::uint64_t>(i));
      const Category category = weight_categories[obj.weighted_index(weights)];
      const SizeStats & stats = cfg.sizes.at(category);
      Box3D box;
      box.length = obj.truncated_normal(stats.mean_l, stats.std_l, 0.1);
      box.height = obj.truncated_normal(stats.mean_h, stats.std_h, 0.1);
      box.width = obj.truncated_normal(stats.mean_w, stats.std_w, 0.1);
      box.yaw = normalize_angle(obj.uniform(-kPi, kPi));

      double z = synth_detail::sample_in_range(obj, cfg.depth_mean, cfg.depth_sigma,
          cfg.depth_min, cfg.depth_max);
      // keep every corner comfortably in front of the camera
      const double z_floor = 0.5 * (box.length + box.width) + 0.5;
      if (z < z_floor) {z = z_floor;}
      const double u_img = obj.uniform(0.05 * cfg.image_width, 0.95 * cfg.image_width);
      const double x = (u_img - cam.cx) / cam.fx * z;
      const double bottom_y = synth_detail::plane_y(plane, x, z);
      box.center = {x, bottom_y - 0.5 * box.height, z};

      Annotation a;
      a.frame_id = frame.id;
      a.category = category;
      a.alpha = normalize_angle(box.yaw - std::atan2(box.center.x, box.center.z));
      a.box2d = project_box_to_2d(cam, box);
      a.box3d = box;
      frame.annotations.push_back(std::move(a));
      center_depths.push_back(z);
    }

    for (std::size_t i = 0; i < frame.annotations.size(); ++i) {
      Annotation & a = frame.annotations[i];
      a.occlusion = synth_detail::occlusion_level(a.box2d, center_depths[i],
          frame.annotations, center_depths);
      a.truncation = synth_detail::truncation_level(a.box2d, cfg.image_width,
          cfg.image_height);
    }
  }
  return frames;
}

/// Applies the noise model to every annotated object; clutter detections are
/// sampled on the frame's ground plane inside the camera frustum. Output is
/// keyed by frame id and deterministic in (frames, noise, seed).
inline std::map<std::string, std::vector<Detection>> perturb(std::span<const Frame> frames,
  const NoiseModel & noise, std::uint64_t seed)
{
  noise.validate();
  std::map<std::string, std::vector<Detection>> out;
  const Rng root(seed);
  const auto car_stats = default_size_stats().at(Category::kCar);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const Frame & frame = frames[f];
    std::vector<Detection> dets;
    const Rng frame_rng = root.stream(static_cast<std::uint64_t>(f));
    for (std::size_t i = 0; i < frame.annotations.size(); ++i) {
      const Annotation & gt = frame.annotations[i];
      if (!gt.box3d) {continue;}
      Rng obj = frame_rng.stream(synth_detail::kStreamObject).stream(
        static_cast<std::uint64_t>(i));
      if (obj.uniform() < noise.drop_probability) {continue;}

      const Box3D & src = *gt.box3d;
      const double sigma_c = noise.center_sigma + noise.center_sigma_per_meter * src.center.z;
      Box3D box = src;
      const Vec3 offset{obj.normal(0.0, sigma_c), obj.normal(0.0, sigma_c),
        obj.normal(0.0, sigma_c)};
      box.center = src.center + offset;
      const double yaw_err = obj.normal(0.0, noise.yaw_sigma);
      box.yaw = normalize_angle(src.yaw + yaw_err);
      box.length = std::max(0.1, src.length * (1.0 + obj.normal(0.0, noise.size_sigma)));
      box.width = std::max(0.1, src.width * (1.0 + obj.normal(0.0, noise.size_sigma)));
      box.height = std::max(0.1, src.height * (1.0 + obj.normal(0.0, noise.size_sigma)));

      Detection d;
      d.frame_id = frame.id;
      d.category = gt.category;
      d.box3d = box;
      d.alpha = normalize_angle(box.yaw - std::atan2(box.center.x, box.center.z));
      try {
        d.box2d = project_box_to_2d(frame.calib.camera, box);
      } catch (const BoxBehindCamera &) {
        d.box2d = std::nullopt;
      }
      const double size_err = std::abs(box.length - src.length) +
        std::abs(box.width - src.width) + std::abs(box.height - src.height);
      d.score = std::exp(-(norm(offset) + 2.0 * std::abs(yaw_err) + size_err));
      dets.push_back(std::move(d));
    }

    Rng clutter_rng = frame_rng.stream(synth_detail::kStreamClutter);
    const int clutter = clutter_rng.poisson(noise.clutter_rate);
    for (int c = 0; c < clutter; ++c) {
      Rng obj = clutter_rng.stream(static_cast<std::uint64_t>(c));
      const CameraModel & cam = frame.calib.camera;
      Box3D box;
      box.length = obj.truncated_normal(car_stats.mean_l, car_stats.std_l, 0.1);
      box.height = obj.truncated_normal(car_stats.mean_h, car_stats.std_h, 0.1);
      box.width = obj.truncated_normal(car_stats.mean_w, car_stats.std_w, 0.1);
      box.yaw = normalize_angle(obj.uniform(-kPi, kPi));
      const double z = obj.uniform(10.0, 120.0);
      const double u_img = obj.uniform(0.05 * cam.width, 0.95 * cam.width);
      const double x = (u_img - cam.cx) / cam.fx * z;
      const double bottom_y = synth_detail::plane_y(frame.calib.plane, x, z);
      box.center = {x, bottom_y - 0.5 * box.height, z};

      Detection d;
      d.frame_id = frame.id;
      d.category = Category::kCar;
      d.box3d = box;
      d.alpha = normalize_angle(box.yaw - std::atan2(box.center.x, box.center.z));
      try {
        d.box2d = project_box_to_2d(cam, box);
      } catch (const BoxBehindCamera &) {
        d.box2d = std::nullopt;
      }
      d.score = obj.uniform(0.0, 0.3);
      dets.push_back(std::move(d));
    }
    out.emplace(frame.id, std::move(dets));
  }
  return out;
}

struct SceneStats
{
  long frames = 0;
  long objects_2d = 0;  // every annotation has a 2D box
  long objects_3d = 0;
  double mean_2d_per_frame = 0.0;
  double mean_3d_per_frame = 0.0;
  std::vector<long> depth_histogram;  // 10 m bins from 0; last bin is overflow
  std::array<long, 3> occlusion_counts = {0, 0, 0};
  std::array<long, 3> truncation_counts = {0, 0, 0};
  std::map<Category, long> category_counts;
};

inline constexpr double kDepthHistogramBin = 10.0;
inline constexpr int kDepthHistogramBins = 21;  // [0,10) ... [190,200), >=200

inline SceneStats scene_statistics(const std::map<std::string, std::vector<Annotation>> & frames)
{
  SceneStats stats;
  stats.frames = static_cast<long>(frames.size());
  stats.depth_histogram.assign(kDepthHistogramBins, 0);
  for (const auto & [frame_id, annotations] : frames) {
    for (const auto & a : annotations) {
      ++stats.objects_2d;
      ++stats.category_counts[a.category];
      if (a.occlusion >= 0 && a.occlusion <= 2) {
        ++stats.occlusion_counts[static_cast<std::size_t>(a.occlusion)];
      }
      if (a.truncation >= 0 && a.truncation <= 2) {
        ++stats.truncation_counts[static_cast<std::size_t>(a.truncation)];
      }
      if (!a.box3d) {continue;}
      ++stats.objects_3d;
      const double z = a.box3d->center.z;
      int bin = z >= 0.0 ? static_cast<int>(z / kDepthHistogramBin) : 0;
      bin = std::min(bin, kDepthHistogramBins - 1);
      ++stats.depth_histogram[static_cast<std::size_t>(bin)];
    }
  }
  if (stats.frames > 0) {
    stats.mean_2d_per_frame =
      static_cast<double>(stats.objects_2d) / static_cast<double>(stats.frames);
    stats.mean_3d_per_frame =
      static_cast<double>(stats.objects_3d) / static_cast<double>(stats.frames);
  }
  return stats;
}

inline SceneStats scene_statistics(std::span<const Frame> frames)
{
  std::map<std::string, std::vector<Annotation>> by_frame;
  for (const auto & frame : frames) {
    by_frame.emplace(frame.id, frame.annotations);
  }
  return scene_statistics(by_frame);
}

/// Scene + noise settings from one plain-text key-value file; '#' starts a
/// comment. Unknown keys are rejected. Omitted keys keep their defaults.
struct SynthConfig
{
  SceneConfig scene;
  NoiseModel noise;
  std::uint64_t noise_seed = 7;
};

inline SynthConfig parse_synth_config(std::string_view text)
{
  using io_detail::parse_int;
  using io_detail::parse_real;
  SynthConfig cfg;
  bool saw_weight = false;
  std::vector<std::pair<Category, double>> weights;

  const auto lines = io_detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    std::string_view line = lines[li];
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) {line = line.substr(0, hash);}
    if (io_detail::is_blank(line)) {continue;}
    const auto tokens = io_detail::tokenize(line);
    const std::string_view key = tokens[0].text;
    const auto expect = [&](std::size_t n) {
        if (tokens.size() != n + 1) {
          throw ParseError(line_no, tokens[0].column,
              std::string(key) + " expects " + std::to_string(n) + " values");
        }
      };
    const auto category_at = [&](std::size_t idx) {
        const auto c = category_from_string(tokens[idx].text);
        if (!c) {
          throw ParseError(line_no, tokens[idx].column,
              "unknown category \"" + std::string(tokens[idx].text) + "\"");
        }
        return *c;
      };
    if (key == "seed") {
      expect(1);
      cfg.scene.seed = static_cast<std::uint64_t>(parse_int(tokens[1], line_no, "seed"));
    } else if (key == "frames") {
      expect(1);
      cfg.scene.frames = static_cast<int>(parse_int(tokens[1], line_no, "frames"));
    } else if (key == "height") {
      expect(2);
      cfg.scene.height_min = parse_real(tokens[1], line_no, "height");
      cfg.scene.height_max = parse_real(tokens[2], line_no, "height");
    } else if (key == "pitch_deg") {
      expect(2);
      cfg.scene.pitch_min = parse_real(tokens[1], line_no, "pitch") * kPi / 180.0;
      cfg.scene.pitch_max = parse_real(tokens[2], line_no, "pitch") * kPi / 180.0;
    } else if (key == "focal") {
      expect(2);
      cfg.scene.focal_min = parse_real(tokens[1], line_no, "focal");
      cfg.scene.focal_max = parse_real(tokens[2], line_no, "focal");
    } else if (key == "image_size") {
      expect(2);
      cfg.scene.image_width = static_cast<int>(parse_int(tokens[1], line_no, "width"));
      cfg.scene.image_height = static_cast<int>(parse_int(tokens[2], line_no, "height"));
    } else if (key == "objects_per_frame") {
      expect(1);
      cfg.scene.objects_per_frame_mean = parse_real(tokens[1], line_no, "objects_per_frame");
    } else if (key == "depth") {
      expect(2);
      cfg.scene.depth_min = parse_real(tokens[1], line_no, "depth");
      cfg.scene.depth_max = parse_real(tokens[2], line_no, "depth");
    } else if (key == "depth_shape") {
      expect(2);
      cfg.scene.depth_mean = parse_real(tokens[1], line_no, "depth_shape");
      cfg.scene.depth_sigma = parse_real(tokens[2], line_no, "depth_shape");
    } else if (key == "weight") {
      expect(2);
      weights.emplace_back(category_at(1), parse_real(tokens[2], line_no, "weight"));
      saw_weight = true;
    } else if (key == "size") {
      expect(7);
      SizeStats s;
      s.mean_l = parse_real(tokens[2], line_no, "size");
      s.mean_h = parse_real(tokens[3], line_no, "size");
      s.mean_w = parse_real(tokens[4], line_no, "size");
      s.std_l = parse_real(tokens[5], line_no, "size");
      s.std_h = parse_real(tokens[6], line_no, "size");
      s.std_w = parse_real(tokens[7], line_no, "size");
      cfg.scene.sizes[category_at(1)] = s;
    } else if (key == "noise_center") {
      expect(1);
      cfg.noise.center_sigma = parse_real(tokens[1], line_no, "noise_center");
    } else if (key == "noise_center_per_meter") {
      expect(1);
      cfg.noise.center_sigma_per_meter =
        parse_real(tokens[1], line_no, "noise_center_per_meter");
    } else if (key == "noise_yaw") {
      expect(1);
      cfg.noise.yaw_sigma = parse_real(tokens[1], line_no, "noise_yaw");
    } else if (key == "noise_size") {
      expect(1);
      cfg.noise.size_sigma = parse_real(tokens[1], line_no, "noise_size");
    } else if (key == "noise_drop") {
      expect(1);
      cfg.noise.drop_probability = parse_real(tokens[1], line_no, "noise_drop");
    } else if (key == "noise_clutter") {
      expect(1);
      cfg.noise.clutter_rate = parse_real(tokens[1], line_no, "noise_clutter");
    } else if (key == "noise_seed") {
      expect(1);
      cfg.noise_seed = static_cast<std::uint64_t>(parse_int(tokens[1], line_no, "noise_seed"));
    } else {
      throw ParseError(line_no, tokens[0].column,
          "unknown config key \"" + std::string(key) + "\"");
    }
  }
  if (saw_weight) {cfg.scene.category_weights = std::move(weights);}
  try {
    cfg.scene.validate();
    cfg.noise.validate();
  } catch (const ConfigError & e) {
    throw ParseError(1, 1, e.what());
  }
  return cfg;
}

}  // namespace roadeval

#endif  // ROADEVAL_SYNTH_HPP_
