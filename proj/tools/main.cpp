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
// roadeval command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data error (malformed input,
// missing sections, failed self-test).

#include <clocale>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roadeval/geometry.hpp"
#include "roadeval/io.hpp"
#include "roadeval/metrics.hpp"
#include "roadeval/synth.hpp"
#include "roadeval/types.hpp"
#include "roadeval/version.hpp"

namespace fs = std::filesystem;
using namespace roadeval;

namespace {

std::string fixed2(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void print_warnings(const std::vector<ParseWarning> & warnings)
{
  for (const auto & w : warnings) {
    std::cerr << "warning: line " << w.line << ": " << w.message << "\n";
  }
}

int cmd_evaluate(const std::string & gt_dir, const std::string & pred_dir,
  const std::string & calib_dir, const std::string & config_file, const std::string & out_file,
  int threads)
{
  std::vector<ParseWarning> warnings;
  const auto gts = load_annotation_dir(gt_dir, &warnings);
  print_warnings(warnings);

  const auto calibs = load_calib_dir(calib_dir);
  std::map<std::string, GroundPlane> planes;
  for (const auto & [frame_id, calib] : calibs) {
    planes.emplace(frame_id, calib.plane);
  }

  if (!fs::is_directory(pred_dir)) {
    throw Error("not a directory: \"" + pred_dir + "\"");
  }
  std::map<std::string, std::vector<Detection>> dets;
  for (const auto & [frame_id, unused] : gts) {
    (void)unused;
    const fs::path pred_file = fs::path(pred_dir) / (frame_id + ".txt");
    if (!fs::exists(pred_file)) {
      continue;  // detector miss: evaluate() treats missing frames as empty
    }
    std::vector<ParseWarning> pred_warnings;
    std::vector<Detection> frame_dets;
    try {
      frame_dets = parse_detections(read_file(pred_file), &pred_warnings);
    } catch (const ParseError & e) {
      throw ParseError(e.line(), e.column(), "[" + pred_file.string() + "] " + e.reason());
    }
    print_warnings(pred_warnings);
    for (auto & d : frame_dets) {d.frame_id = frame_id;}
    dets.emplace(frame_id, std::move(frame_dets));
  }
  for (const auto & entry : fs::directory_iterator(pred_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt" &&
      gts.find(entry.path().stem().string()) == gts.end())
    {
      std::cerr << "warning: prediction file without ground-truth frame: "
                << entry.path().string() << "\n";
    }
  }

  EvalConfig cfg = EvalConfig::defaults();
  if (!config_file.empty()) {
    cfg = parse_eval_config(read_file(config_file));
  }

  const MetricReport report = evaluate(gts, dets, cfg, planes, threads);
  write_file(out_file, serialize_report(report));

  const std::string summary_bucket = report.config.range_buckets.front().label;
  std::printf("%-18s %-6s %8s %8s\n", "category", "iou", "ap", "rope");
  for (const auto & [category, thresholds] : report.config.iou_thresholds) {
    for (const double threshold : thresholds) {
      const MetricCell * cell = report.find(category, threshold, summary_bucket);
      if (cell == nullptr) {continue;}
      std::printf("%-18s %-6s %8s %8s\n", std::string(to_string(category)).c_str(),
        fixed2(threshold).c_str(), fixed2(cell->ap).c_str(), fixed2(cell->rope_score).c_str());
    }
  }
  std::printf("report written to %s\n", out_file.c_str());
  return 0;
}

int cmd_ground_depth(const std::string & calib_file, const std::string & gridded_file,
  const std::string & out_file, double z_max, int threads)
{
  const CalibData calib = parse_calib(read_file(calib_file));
  DepthMap map;
  if (!gridded_file.empty()) {
    const CalibData gridded_calib = parse_calib(read_file(gridded_file));
    if (!gridded_calib.gridded) {
      throw Error("no gg/gg_meta sections in \"" + gridded_file + "\"");
    }
    map = gridded_depth_map(calib.camera, *gridded_calib.gridded, z_max, threads);
  } else {
    map = ground_depth_map(calib.camera, calib.plane, z_max, threads);
  }
  write_file(out_file, serialize_depth_map(map));
  std::printf("depth map (%dx%d, zmax %s) written to %s\n", map.width, map.height,
    io_detail::fmt_double(z_max).c_str(), out_file.c_str());
  return 0;
}

int cmd_synth(const std::string & config_file, const std::string & out_dir)
{
  const SynthConfig cfg = parse_synth_config(read_file(config_file));
  const std::vector<Frame> frames = generate_scene(cfg.scene);
  const auto dets = perturb(frames, cfg.noise, cfg.noise_seed);

  const fs::path root(out_dir);
  fs::create_directories(root / "gt");
  fs::create_directories(root / "calib");
  fs::create_directories(root / "pred");
  for (const auto & frame : frames) {
    write_file(root / "gt" / (frame.id + ".txt"), serialize_annotations(frame.annotations));
    write_file(root / "calib" / (frame.id + ".txt"), serialize_calib(frame.calib));
    write_file(root / "pred" / (frame.id + ".txt"), serialize_detections(dets.at(frame.id)));
  }
  std::printf("wrote %zu frames under %s\n", frames.size(), out_dir.c_str());
  return 0;
}

int cmd_stats(const std::string & label_dir)
{
  std::vector<ParseWarning> warnings;
  const auto gts = load_annotation_dir(label_dir, &warnings);
  print_warnings(warnings);
  const SceneStats stats = scene_statistics(gts);

  std::printf("frames %ld\n", stats.frames);
  std::printf("objects_2d %ld\n", stats.objects_2d);
  std::printf("objects_3d %ld\n", stats.objects_3d);
  std::printf("mean_2d_per_frame %s\n", fixed2(stats.mean_2d_per_frame).c_str());
  std::printf("mean_3d_per_frame %s\n", fixed2(stats.mean_3d_per_frame).c_str());
  std::printf("depth_histogram_10m");
  for (const long count : stats.depth_histogram) {
    std::printf(" %ld", count);
  }
  std::printf("\n");
  std::printf("occlusion %ld %ld %ld\n", stats.occlusion_counts[0], stats.occlusion_counts[1],
    stats.occlusion_counts[2]);
  std::printf("truncation %ld %ld %ld\n", stats.truncation_counts[0],
    stats.truncation_counts[1], stats.truncation_counts[2]);
  for (const auto & [category, count] : stats.category_counts) {
    std::printf("category %s %ld\n", std::string(to_string(category)).c_str(), count);
  }
  return 0;
}

int cmd_self_test()
{
  int failures = 0;
  const auto check = [&](const char * name, bool ok) {
      std::printf("[%s] %s\n", ok ? " ok " : "FAIL", name);
      if (!ok) {++failures;}
    };
  const auto near = [](double a, double b, double tol) {return std::abs(a - b) <= tol;};

  {
    const bool ok = orientation_similarity(0.0) == 1.0 &&
      orientation_similarity(kPi / 4.0) == 0.5 &&
      orientation_similarity(kPi / 2.0) == 0.0 &&
      orientation_similarity(kPi) == 1.0;
    check("orientation similarity closed form", ok);
  }
  {
    Box3D a;
    a.center = {0, 0, 20};
    a.length = 4;
    a.width = 2;
    a.height = 1.5;
    Box3D shifted = a;
    shifted.center.x += 10.0;
    Box3D square = a;
    square.length = square.width = 1.0;
    Box3D offset = square;
    offset.center.x += 0.5;
    check("rotated IoU hand cases",
      rotated_iou_bev(a, a) == 1.0 && rotated_iou_bev(a, shifted) == 0.0 &&
      near(rotated_iou_bev(square, offset), 1.0 / 3.0, 1e-12));
  }
  {
    CameraModel cam{1000, 1000, 960, 540, 1920, 1080};
    const GroundPlane plane = GroundPlane::from_coefficients(0, 1, 0, -5);
    const DepthMap map = ground_depth_map(cam, plane, 200.0);
    const double expected = 5.0 * cam.fy / (800.0 - cam.cy);
    check("flat-ground depth closed form",
      near(map.at(960, 800), expected, 1e-9) && !DepthMap::is_valid(map.at(960, 540)));
  }
  {
    std::vector<Vec3> pts;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        pts.push_back({static_cast<double>(i), 5.0, 10.0 + j});
      }
    }
    const GroundPlane fit = fit_plane(pts);
    check("plane fit exact recovery",
      near(fit.alpha, 0, 1e-12) && near(fit.beta, -1, 1e-12) && near(fit.gamma, 0, 1e-12) &&
      near(fit.d, 5, 1e-12));
  }
  {
    Box3D cube;
    cube.center = {0, 0, 0};
    cube.length = cube.width = cube.height = 1.0;
    const auto corners = box_corners(cube);
    bool ok = true;
    for (const auto & c : corners) {
      ok = ok && near(std::abs(c.x), 0.5, 1e-12) && near(std::abs(c.y), 0.5, 1e-12) &&
        near(std::abs(c.z), 0.5, 1e-12);
    }
    check("unit cube corners", ok);
  }
  {
    SceneConfig cfg;
    cfg.seed = 11;
    cfg.frames = 3;
    cfg.objects_per_frame_mean = 5.0;
    const auto frames = generate_scene(cfg);
    bool ok = true;
    for (const auto & frame : frames) {
      const std::string text = serialize_annotations(frame.annotations);
      const auto reparsed = parse_annotations(text);
      ok = ok && reparsed.size() == frame.annotations.size();
      ok = ok && serialize_calib(parse_calib(serialize_calib(frame.calib))) ==
        serialize_calib(frame.calib);
    }
    check("label/calib round trip", ok);
  }
  {
    SceneConfig cfg;
    cfg.seed = 23;
    cfg.frames = 20;
    cfg.objects_per_frame_mean = 8.0;
    const auto frames = generate_scene(cfg);
    std::map<std::string, std::vector<Annotation>> gts;
    std::map<std::string, std::vector<Detection>> dets;
    std::map<std::string, GroundPlane> planes;
    for (const auto & frame : frames) {
      gts.emplace(frame.id, frame.annotations);
      dets.emplace(frame.id, as_detections(frame.annotations));
      planes.emplace(frame.id, frame.calib.plane);
    }
    const MetricReport report = evaluate(gts, dets, EvalConfig::defaults(), planes);
    bool ok = true;
    for (const auto & cell : report.cells) {
      if (cell.tp + cell.fn == 0) {continue;}
      ok = ok && near(cell.ap, 100.0, 1e-9) && near(cell.rope_score, 100.0, 1e-9) &&
        cell.fp == 0 && cell.fn == 0;
    }
    const std::string text = serialize_report(report);
    ok = ok && serialize_report(parse_report(text)) == text;
    check("identity evaluation and report round trip", ok);
  }
  {
    CameraModel cam{2200, 2200, 960, 540, 1920, 1080};
    const GroundPlane plane = GroundPlane::from_coefficients(0, std::cos(0.2), std::sin(0.2),
        -6.0);
    GriddedGround gg;
    gg.cell_size = 5.0;
    gg.fallback = plane;
    for (int i = -5; i <= 5; ++i) {
      for (int j = 0; j <= 30; ++j) {
        gg.cells[{i, j}] = plane;
      }
    }
    const DepthMap a = ground_depth_map(cam, plane, 200.0);
    const DepthMap b = gridded_depth_map(cam, gg, 200.0);
    check("uniform gridded map equals single plane", a.values == b.values);
  }

  if (failures > 0) {
    std::printf("%d check(s) failed\n", failures);
    return 2;
  }
  std::printf("all checks passed\n");
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  std::setlocale(LC_ALL, "C");
  CLI::App app{"roadside monocular 3D detection evaluation devkit"};
  app.require_subcommand(1);

  std::string gt_dir;
  std::string pred_dir;
  std::string calib_dir;
  std::string config_file;
  std::string out_file;
  int threads = 0;

  auto * evaluate_cmd = app.add_subcommand("evaluate", "score predictions against ground truth");
  evaluate_cmd->add_option("--gt", gt_dir, "ground-truth label directory")->required();
  evaluate_cmd->add_option("--pred", pred_dir, "prediction directory")->required();
  evaluate_cmd->add_option("--calib", calib_dir, "calibration directory")->required();
  evaluate_cmd->add_option("--config", config_file, "evaluation config file");
  evaluate_cmd->add_option("--out", out_file, "report output file")->required();
  evaluate_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string depth_calib;
  std::string depth_gridded;
  std::string depth_out;
  double z_max = 200.0;
  auto * depth_cmd = app.add_subcommand("ground-depth", "write a ground depth map");
  depth_cmd->add_option("--calib", depth_calib, "calibration file")->required();
  depth_cmd->add_option("--gridded", depth_gridded, "calibration file with gg sections");
  depth_cmd->add_option("--out", depth_out, "output file")->required();
  depth_cmd->add_option("--zmax", z_max, "maximum depth in meters");
  depth_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string synth_config;
  std::string synth_out;
  auto * synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset tree");
  synth_cmd->add_option("--config", synth_config, "scene config file")->required();
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  std::string stats_labels;
  auto * stats_cmd = app.add_subcommand("stats", "print statistics of a label tree");
  stats_cmd->add_option("--labels", stats_labels, "label directory")->required();

  auto * selftest_cmd = app.add_subcommand("self-test", "run the embedded sanity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (evaluate_cmd->parsed()) {
      return cmd_evaluate(gt_dir, pred_dir, calib_dir, config_file, out_file, threads);
    }
    if (depth_cmd->parsed()) {
      return cmd_ground_depth(depth_calib, depth_gridded, depth_out, z_max, threads);
    }
    if (synth_cmd->parsed()) {
      return cmd_synth(synth_config, synth_out);
    }
    if (stats_cmd->parsed()) {
      return cmd_stats(stats_labels);
    }
    if (selftest_cmd->parsed()) {
      return cmd_self_test();
    }
  } catch (const Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
