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

#include "roadeval/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "roadeval/rng.hpp"
#include "roadeval/synth.hpp"
#include "oracles.hpp"

using namespace roadeval;

namespace {

Box3D make_box(double x, double y, double z, double l, double w, double h, double yaw)
{
  Box3D b;
  b.center = {x, y, z};
  b.length = l;
  b.width = w;
  b.height = h;
  b.yaw = normalize_angle(yaw);
  return b;
}

Detection make_det(const Box3D & box, double score, const std::string & frame = "f0",
  Category category = Category::kCar)
{
  Detection d;
  d.frame_id = frame;
  d.category = category;
  d.box3d = box;
  d.score = score;
  return d;
}

Annotation make_gt(const Box3D & box, const std::string & frame = "f0",
  Category category = Category::kCar)
{
  Annotation a;
  a.frame_id = frame;
  a.category = category;
  a.box3d = box;
  return a;
}

Box3D rotate_about_origin(const Box3D & box, double phi, const Vec3 & shift)
{
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Box3D out = box;
  out.center = {
    c * box.center.x + s * box.center.z + shift.x,
    box.center.y + shift.y,
    -s * box.center.x + c * box.center.z + shift.z};
  out.yaw = normalize_angle(box.yaw + phi);
  return out;
}

MatchSet single_pair(const Box3D & pred, const Box3D & gt)
{
  MatchSet m;
  m.true_positives.emplace_back(make_det(pred, 1.0), make_gt(gt));
  return m;
}

}  // namespace

TEST(RotatedIouBev, HandCases)
{
  const Box3D a = make_box(2, 0, 30, 4, 2, 1.5, 0.7);
  EXPECT_DOUBLE_EQ(rotated_iou_bev(a, a), 1.0);

  Box3D far = a;
  far.center.x += a.length + far.length + 1.0;  // beyond any footprint reach
  EXPECT_DOUBLE_EQ(rotated_iou_bev(a, far), 0.0);

  const Box3D sq1 = make_box(0, 0, 10, 1, 1, 1, 0);
  const Box3D sq2 = make_box(0.5, 0, 10, 1, 1, 1, 0);
  EXPECT_NEAR(rotated_iou_bev(sq1, sq2), 1.0 / 3.0, 1e-12);
}

TEST(RotatedIouBev, MatchesMonteCarloOracle)
{
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Box3D a = oracles::random_box(rng);
    Box3D b = oracles::random_box(rng);
    // pull the second box near the first so overlaps actually happen
    b.center.x = a.center.x + rng.uniform(-3, 3);
    b.center.z = a.center.z + rng.uniform(-3, 3);
    const double exact = rotated_iou_bev(a, b);
    const double approx = oracles::mc_rotated_iou(a, b, 700, rng.next_u64());
    worst = std::max(worst, std::abs(exact - approx));
  }
  EXPECT_LT(worst, 2e-3);
}

TEST(RotatedIouBev, SymmetryAndRigidInvariance)
{
  Rng rng(103);
  for (int trial = 0; trial < 200; ++trial) {
    Box3D a = oracles::random_box(rng);
    Box3D b = oracles::random_box(rng);
    b.center.x = a.center.x + rng.uniform(-4, 4);
    b.center.z = a.center.z + rng.uniform(-4, 4);
    const double ab = rotated_iou_bev(a, b);
    const double ba = rotated_iou_bev(b, a);
    EXPECT_NEAR(ab, ba, 1e-9);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);

    const double phi = rng.uniform(-kPi, kPi);
    const Vec3 shift{rng.uniform(-20, 20), rng.uniform(-2, 2), rng.uniform(-20, 20)};
    const double moved = rotated_iou_bev(rotate_about_origin(a, phi, shift),
        rotate_about_origin(b, phi, shift));
    EXPECT_NEAR(ab, moved, 1e-9);

    const double volumetric = iou_3d(a, b);
    EXPECT_NEAR(volumetric, iou_3d(b, a), 1e-9);
    EXPECT_NEAR(volumetric,
      iou_3d(rotate_about_origin(a, phi, shift), rotate_about_origin(b, phi, shift)), 1e-9);
  }
}

TEST(Iou3d, HandCases)
{
  const Box3D a = make_box(1, 0, 25, 4, 2, 1.5, -0.3);
  EXPECT_DOUBLE_EQ(iou_3d(a, a), 1.0);

  Box3D lifted = a;
  lifted.center.y += a.height;  // vertical gap exactly (Ha + Hb) / 2
  EXPECT_DOUBLE_EQ(iou_3d(a, lifted), 0.0);

  const Box3D cube1 = make_box(0, 0, 10, 1, 1, 1, 0);
  const Box3D cube2 = make_box(0.5, 0, 10, 1, 1, 1, 0);
  EXPECT_NEAR(iou_3d(cube1, cube2), 1.0 / 3.0, 1e-12);
}

TEST(MatchFrame, TrivialCases)
{
  const Box3D box = make_box(0, 0, 30, 4, 2, 1.5, 0.2);
  {
    const std::vector<Detection> dets = {make_det(box, 0.9)};
    const std::vector<Annotation> gts = {make_gt(box)};
    const MatchSet m = match_frame(dets, gts, Category::kCar, 0.5);
    EXPECT_EQ(m.true_positives.size(), 1u);
    EXPECT_TRUE(m.false_positives.empty());
    EXPECT_TRUE(m.false_negatives.empty());
  }
  {
    const std::vector<Detection> dets;
    const std::vector<Annotation> gts = {make_gt(box)};
    const MatchSet m = match_frame(dets, gts, Category::kCar, 0.5);
    EXPECT_TRUE(m.true_positives.empty());
    EXPECT_EQ(m.false_negatives.size(), 1u);
  }
}

TEST(MatchFrame, FrameMismatchRejected)
{
  const Box3D box = make_box(0, 0, 30, 4, 2, 1.5, 0);
  const std::vector<Detection> dets = {make_det(box, 0.9, "frame_a")};
  const std::vector<Annotation> gts = {make_gt(box, "frame_b")};
  EXPECT_THROW(match_frame(dets, gts, Category::kCar, 0.5), FrameMismatch);
}

TEST(MatchFrame, IgnoreRegionsAbsorbUnmatchedDetections)
{
  const Box3D box = make_box(0, 0, 30, 4, 2, 1.5, 0);
  Annotation region;  // 2D-only annotation
  region.frame_id = "f0";
  region.category = Category::kCar;
  region.box2d = {100, 100, 200, 200};

  Detection overlapping = make_det(make_box(50, 0, 90, 4, 2, 1.5, 0), 0.8);
  overlapping.box2d = Box2D{105, 105, 205, 205};  // 2D IoU well above 0.5
  Detection elsewhere = make_det(make_box(-50, 0, 90, 4, 2, 1.5, 0), 0.7);
  elsewhere.box2d = Box2D{500, 500, 600, 600};
  Detection no_box2d = make_det(make_box(60, 0, 95, 4, 2, 1.5, 0), 0.6);

  const std::vector<Detection> dets = {overlapping, elsewhere, no_box2d};
  const std::vector<Annotation> gts = {make_gt(box), region};
  const MatchSet m = match_frame(dets, gts, Category::kCar, 0.5);
  EXPECT_EQ(m.true_positives.size(), 0u);
  EXPECT_EQ(m.ignored.size(), 1u);
  EXPECT_DOUBLE_EQ(m.ignored[0].score, 0.8);
  EXPECT_EQ(m.false_positives.size(), 2u);
  EXPECT_EQ(m.false_negatives.size(), 1u);  // the 3D ground truth stays unmatched
}

TEST(MatchFrame, DeterministicTieBreaks)
{
  const Box3D gt_box = make_box(0, 0, 30, 4, 2, 1.5, 0);
  // two identical detections with identical scores: input order decides
  const std::vector<Detection> dets = {make_det(gt_box, 0.5), make_det(gt_box, 0.5)};
  const std::vector<Annotation> gts = {make_gt(gt_box)};
  const MatchSet m = match_frame(dets, gts, Category::kCar, 0.5);
  ASSERT_EQ(m.true_positives.size(), 1u);
  EXPECT_EQ(m.false_positives.size(), 1u);

  // one detection equally overlapping two identical ground truths: the
  // earlier ground truth wins
  Annotation gt_a = make_gt(gt_box);
  Annotation gt_b = make_gt(gt_box);
  const MatchSet m2 = match_frame(std::vector<Detection>{make_det(gt_box, 0.9)},
      std::vector<Annotation>{gt_a, gt_b}, Category::kCar, 0.5);
  ASSERT_EQ(m2.true_positives.size(), 1u);
  EXPECT_EQ(m2.false_negatives.size(), 1u);
}

TEST(MatchFrame, AgreesWithBruteForceOracle)
{
  Rng rng(107);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Annotation> gts;
    for (int g = 0; g < 3; ++g) {
      gts.push_back(make_gt(oracles::random_box(rng)));
    }
    std::vector<Detection> dets;
    for (int d = 0; d < 5; ++d) {
      Box3D box = oracles::random_box(rng);
      if (d < 3 && rng.uniform() < 0.7) {  // often near a ground truth
        box = *gts[static_cast<std::size_t>(d)].box3d;
        box.center.x += rng.uniform(-1.5, 1.5);
        box.center.z += rng.uniform(-1.5, 1.5);
        box.yaw = normalize_angle(box.yaw + rng.uniform(-0.3, 0.3));
      }
      dets.push_back(make_det(box, rng.uniform(0.0, 1.0)));
    }
    const double threshold = 0.25;
    const MatchSet got = match_frame(dets, gts, Category::kCar, threshold);
    const auto expected = oracles::brute_greedy_match(dets, gts, Category::kCar, threshold,
        [](const Box3D & a, const Box3D & b) {return iou_3d(a, b);});

    ASSERT_EQ(got.true_positives.size(), expected.tp.size());
    // scores are continuous draws, so they identify detections uniquely
    std::set<double> got_tp_scores;
    for (const auto & [det, gt] : got.true_positives) {got_tp_scores.insert(det.score);}
    std::set<double> expected_tp_scores;
    for (const auto & [di, gi] : expected.tp) {expected_tp_scores.insert(dets[di].score);}
    EXPECT_EQ(got_tp_scores, expected_tp_scores);
    EXPECT_EQ(got.false_positives.size(), expected.fp.size());
    EXPECT_EQ(got.false_negatives.size(), expected.fn.size());
  }
}

TEST(ApR40, TrivialEnds)
{
  // every ground truth found by a perfect detection
  const PrCurve perfect = detail::build_pr_curve({0.9, 0.8, 0.7}, {}, 3);
  EXPECT_DOUBLE_EQ(ap_r40(perfect), 100.0);

  const PrCurve nothing = detail::build_pr_curve({}, {0.9, 0.8}, 3);
  EXPECT_DOUBLE_EQ(ap_r40(nothing), 0.0);

  const PrCurve no_gt = detail::build_pr_curve({}, {}, 0);
  EXPECT_DOUBLE_EQ(ap_r40(no_gt), 0.0);
}

TEST(ApR40, MatchesExhaustiveSweepOracle)
{
  Rng rng(109);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_tp = static_cast<int>(rng.next_u64() % 8);
    const int n_fp = static_cast<int>(rng.next_u64() % 8);
    const long n_gt = n_tp + static_cast<long>(rng.next_u64() % 10);
    std::vector<double> tp_scores;
    std::vector<double> fp_scores;
    for (int i = 0; i < n_tp; ++i) {tp_scores.push_back(rng.uniform(0.0, 1.0));}
    for (int i = 0; i < n_fp; ++i) {fp_scores.push_back(rng.uniform(0.0, 1.0));}
    if (rng.uniform() < 0.3 && !tp_scores.empty()) {
      fp_scores.push_back(tp_scores.front());  // exercise score ties
    }
    const PrCurve curve = detail::build_pr_curve(tp_scores, fp_scores, n_gt);
    const double expected = oracles::exhaustive_ap(tp_scores, fp_scores, n_gt, 40);
    EXPECT_NEAR(ap_r40(curve), expected, 1e-12);
  }
}

TEST(ApR40, InvariantUnderMonotoneScoreTransform)
{
  Rng rng(113);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> tp_scores;
    std::vector<double> fp_scores;
    for (int i = 0; i < 12; ++i) {tp_scores.push_back(rng.uniform(0.0, 1.0));}
    for (int i = 0; i < 9; ++i) {fp_scores.push_back(rng.uniform(0.0, 1.0));}
    const long n_gt = 15;
    const double base = ap_r40(detail::build_pr_curve(tp_scores, fp_scores, n_gt));
    const auto warp = [](double s) {return 0.2 + 0.5 * std::tanh(3.0 * s - 1.0);};
    std::vector<double> tp_warped;
    std::vector<double> fp_warped;
    for (const double s : tp_scores) {tp_warped.push_back(warp(s));}
    for (const double s : fp_scores) {fp_warped.push_back(warp(s));}
    const double warped = ap_r40(detail::build_pr_curve(tp_warped, fp_warped, n_gt));
    EXPECT_NEAR(base, warped, 1e-12);
  }
}

TEST(ApR40, LowScoreFalsePositiveNeverHelpsAndFewerMissesNeverHurt)
{
  Rng rng(127);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> tp_scores;
    std::vector<double> fp_scores;
    for (int i = 0; i < 10; ++i) {tp_scores.push_back(rng.uniform(0.3, 1.0));}
    for (int i = 0; i < 5; ++i) {fp_scores.push_back(rng.uniform(0.3, 1.0));}
    const long n_gt = 14;
    const double base = ap_r40(detail::build_pr_curve(tp_scores, fp_scores, n_gt));

    std::vector<double> with_low_fp = fp_scores;
    with_low_fp.push_back(0.1);  // below every true positive
    const double worse = ap_r40(detail::build_pr_curve(tp_scores, with_low_fp, n_gt));
    EXPECT_LE(worse, base + 1e-12);

    // removing a false negative shrinks the denominator
    const double better = ap_r40(detail::build_pr_curve(tp_scores, fp_scores, n_gt - 1));
    EXPECT_GE(better, base - 1e-12);
  }
}

TEST(OrientationSimilarity, ClosedFormAndSymmetries)
{
  EXPECT_EQ(orientation_similarity(0.0), 1.0);
  EXPECT_EQ(orientation_similarity(kPi / 4.0), 0.5);
  EXPECT_EQ(orientation_similarity(kPi / 2.0), 0.0);
  EXPECT_EQ(orientation_similarity(kPi), 1.0);
  EXPECT_EQ(orientation_similarity(-kPi / 2.0), 0.0);
  EXPECT_EQ(orientation_similarity(3.0 * kPi / 4.0), 0.5);

  Rng rng(131);
  for (int trial = 0; trial < 200; ++trial) {
    const double d = rng.uniform(-8, 8);
    const double v = orientation_similarity(d);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(orientation_similarity(-d), v);  // exact via |.|
    EXPECT_NEAR(orientation_similarity(d + kPi), v, 1e-12);
    EXPECT_NEAR(v, 0.5 * (1.0 + std::cos(2.0 * d)), 1e-12);
  }
  // half-turn shift is exact on dyadic multiples of pi
  for (const double d : {0.0, kPi / 4.0, kPi / 2.0, kPi, -kPi / 4.0}) {
    EXPECT_EQ(orientation_similarity(d + kPi), orientation_similarity(d));
  }
}

TEST(Aos, MatchSetAverageAndErrors)
{
  const Box3D gt = make_box(0, 0, 30, 4, 2, 1.5, 0.3);
  Box3D quarter = gt;
  quarter.yaw = normalize_angle(gt.yaw + kPi / 2.0);
  Box3D flipped = gt;
  flipped.yaw = normalize_angle(gt.yaw + kPi);

  EXPECT_DOUBLE_EQ(aos(single_pair(gt, gt)), 1.0);
  EXPECT_DOUBLE_EQ(aos(single_pair(quarter, gt)), 0.0);
  EXPECT_DOUBLE_EQ(aos(single_pair(flipped, gt)), 1.0);

  MatchSet empty;
  EXPECT_THROW(aos(empty), EmptyTruePositives);
  EXPECT_THROW(aas(empty), EmptyTruePositives);
  EXPECT_THROW(agd_ags(empty), EmptyTruePositives);
  EXPECT_THROW(acs(empty, GroundPlane{}), EmptyTruePositives);
}

TEST(Acs, ClampAndArithmetic)
{
  const GroundPlane plane = GroundPlane::from_coefficients(0, 1, 0, 0);
  const Box3D gt = make_box(30, 0, 40, 4, 2, 1.5, 0);  // ground center norm 50
  EXPECT_DOUBLE_EQ(acs(single_pair(gt, gt), plane), 1.0);

  Box3D near_pred = gt;
  near_pred.center.z += 5.0;  // 5 m error against a 50 m norm
  EXPECT_DOUBLE_EQ(acs(single_pair(near_pred, gt), plane), 0.9);

  Box3D far_pred = gt;
  far_pred.center.x += 60.0;  // error beyond the norm: clamped to zero
  EXPECT_DOUBLE_EQ(acs(single_pair(far_pred, gt), plane), 0.0);
}

TEST(Aas, ClampAndArithmetic)
{
  const Box3D gt = make_box(0, 0, 40, 4, 2, 1.5, 0.5);
  EXPECT_DOUBLE_EQ(aas(single_pair(gt, gt)), 1.0);

  Box3D doubled = gt;
  doubled.width = 2.0 * gt.width;  // area doubles: clamp to zero
  EXPECT_DOUBLE_EQ(aas(single_pair(doubled, gt)), 0.0);

  Box3D slimmer = gt;
  slimmer.width = 1.8;  // 4x2 vs 4x1.8 -> 1 - 0.8/8
  EXPECT_DOUBLE_EQ(aas(single_pair(slimmer, gt)), 0.9);
}

TEST(AgdAgs, TranslationFlipAndOracle)
{
  const Box3D gt = make_box(10, 1, 50, 4.2, 1.7, 1.4, 0.8);
  {
    const AgdAgs perfect = agd_ags(single_pair(gt, gt));
    EXPECT_DOUBLE_EQ(perfect.agd, 0.0);
    EXPECT_DOUBLE_EQ(perfect.ags, 1.0);
  }
  {
    Box3D shifted = gt;
    shifted.center.x += 1.0;
    const AgdAgs moved = agd_ags(single_pair(shifted, gt));
    EXPECT_NEAR(moved.agd, 1.0, 1e-12);
  }
  {
    Box3D flipped = gt;
    flipped.yaw = normalize_angle(gt.yaw + kPi);
    const AgdAgs half_turn = agd_ags(single_pair(flipped, gt));
    EXPECT_NEAR(half_turn.agd, 0.0, 1e-9);
    EXPECT_NEAR(half_turn.ags, 1.0, 1e-9);
  }

  Rng rng(137);
  for (int trial = 0; trial < 100; ++trial) {
    Box3D pred = gt;
    pred.center.x += rng.uniform(-2, 2);
    pred.center.z += rng.uniform(-2, 2);
    pred.yaw = normalize_angle(pred.yaw + rng.uniform(-kPi, kPi));
    pred.length *= rng.uniform(0.8, 1.2);
    pred.width *= rng.uniform(0.8, 1.2);
    const AgdAgs got = agd_ags(single_pair(pred, gt));

    // brute-force minimum over the four cyclic corner alignments
    const auto pc = ground_corners(pred);
    const auto gc = ground_corners(gt);
    double best = 1e300;
    for (int shift = 0; shift < 4; ++shift) {
      double sum = 0.0;
      for (int g = 0; g < 4; ++g) {
        sum += norm(gc[g] - pc[(g + shift) % 4]);
      }
      best = std::min(best, sum / 4.0);
    }
    EXPECT_NEAR(got.agd, best, 1e-12);
    const Vec3 pred_bottom{pred.center.x, pred.center.y + pred.height / 2, pred.center.z};
    EXPECT_NEAR(got.ags, 1.0 - std::min(1.0, best / norm(pred_bottom)), 1e-12);
  }
}

TEST(RopeScore, ClosedFormAndMonotonicity)
{
  EXPECT_DOUBLE_EQ(rope_score(100.0, 1, 1, 1, 1), 100.0);
  EXPECT_DOUBLE_EQ(rope_score(0.0, 0, 0, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(rope_score(50.0, 1, 1, 1, 1), 60.0);

  Rng rng(139);
  for (int trial = 0; trial < 100; ++trial) {
    const double ap = rng.uniform(0, 100);
    double s[4] = {rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1),
      rng.uniform(0, 1)};
    const double base = rope_score(ap, s[0], s[1], s[2], s[3]);
    EXPECT_GE(base, 0.0);
    EXPECT_LE(base, 100.0);
    EXPECT_LE(base, rope_score(std::min(100.0, ap + 5.0), s[0], s[1], s[2], s[3]) + 1e-12);
    for (int i = 0; i < 4; ++i) {
      double bumped[4] = {s[0], s[1], s[2], s[3]};
      bumped[i] = std::min(1.0, bumped[i] + 0.1);
      EXPECT_LE(base, rope_score(ap, bumped[0], bumped[1], bumped[2], bumped[3]) + 1e-12);
    }
  }
}

namespace {

struct TinyScene
{
  std::map<std::string, std::vector<Annotation>> gts;
  std::map<std::string, std::vector<Detection>> dets;
  std::map<std::string, GroundPlane> planes;
};

TinyScene make_noisy_scene(int frames, std::uint64_t seed)
{
  SceneConfig cfg;
  cfg.seed = seed;
  cfg.frames = frames;
  cfg.objects_per_frame_mean = 6.0;
  const auto generated = generate_scene(cfg);
  NoiseModel noise;
  noise.center_sigma = 0.25;
  noise.yaw_sigma = 0.1;
  noise.size_sigma = 0.05;
  noise.drop_probability = 0.1;
  noise.clutter_rate = 1.0;
  TinyScene scene;
  scene.dets = perturb(generated, noise, seed + 1);
  for (const auto & frame : generated) {
    scene.gts.emplace(frame.id, frame.annotations);
    scene.planes.emplace(frame.id, frame.calib.plane);
  }
  return scene;
}

}  // namespace

TEST(Evaluate, IdentityRunScoresPerfect)
{
  SceneConfig cfg;
  cfg.seed = 5;
  cfg.frames = 25;
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
  int populated = 0;
  for (const auto & cell : report.cells) {
    if (cell.tp + cell.fn == 0) {
      EXPECT_TRUE(cell.undefined);
      continue;
    }
    ++populated;
    EXPECT_NEAR(cell.ap, 100.0, 1e-9);
    EXPECT_NEAR(cell.acs, 1.0, 1e-9);
    EXPECT_NEAR(cell.aos, 1.0, 1e-9);
    EXPECT_NEAR(cell.aas, 1.0, 1e-9);
    EXPECT_NEAR(cell.ags, 1.0, 1e-9);
    EXPECT_NEAR(cell.agd, 0.0, 1e-9);
    EXPECT_NEAR(cell.rope_score, 100.0, 1e-9);
    EXPECT_EQ(cell.fp, 0);
    EXPECT_EQ(cell.fn, 0);
  }
  EXPECT_GT(populated, 0);
}

TEST(Evaluate, EmptyDetectionsScoreZero)
{
  SceneConfig cfg;
  cfg.seed = 6;
  cfg.frames = 5;
  cfg.objects_per_frame_mean = 5.0;
  const auto frames = generate_scene(cfg);
  std::map<std::string, std::vector<Annotation>> gts;
  std::map<std::string, GroundPlane> planes;
  for (const auto & frame : frames) {
    gts.emplace(frame.id, frame.annotations);
    planes.emplace(frame.id, frame.calib.plane);
  }
  const MetricReport report = evaluate(gts, {}, EvalConfig::defaults(), planes);
  for (const auto & cell : report.cells) {
    EXPECT_DOUBLE_EQ(cell.ap, 0.0);
    EXPECT_DOUBLE_EQ(cell.rope_score, 0.0);
    EXPECT_TRUE(cell.undefined);
    EXPECT_EQ(cell.tp, 0);
    EXPECT_EQ(cell.fp, 0);
  }
}

TEST(Evaluate, ErrorsOnInconsistentInputs)
{
  const Box3D box = make_box(0, 0, 30, 4, 2, 1.5, 0);
  std::map<std::string, std::vector<Annotation>> gts;
  gts.emplace("000000", std::vector<Annotation>{make_gt(box, "000000")});
  std::map<std::string, GroundPlane> planes;
  planes.emplace("000000", GroundPlane::from_coefficients(0, 1, 0, -5));

  std::map<std::string, std::vector<Detection>> stray;
  stray.emplace("000099", std::vector<Detection>{make_det(box, 0.5, "000099")});
  EXPECT_THROW(evaluate(gts, stray, EvalConfig::defaults(), planes), FrameMismatch);

  EXPECT_THROW(evaluate(gts, {}, EvalConfig::defaults(), {}), MissingPlane);
}

TEST(Evaluate, CountsAreAdditiveAcrossAPartition)
{
  const TinyScene scene = make_noisy_scene(30, 77);

  EvalConfig all_cfg = EvalConfig::defaults();
  all_cfg.range_buckets = {{"all", 0.0, std::numeric_limits<double>::infinity()}};
  EvalConfig split_cfg = all_cfg;
  split_cfg.range_buckets = {
    {"0-40", 0.0, 40.0}, {"40-80", 40.0, 80.0},
    {"80-up", 80.0, std::numeric_limits<double>::infinity()}};

  const MetricReport whole = evaluate(scene.gts, scene.dets, all_cfg, scene.planes);
  const MetricReport parts = evaluate(scene.gts, scene.dets, split_cfg, scene.planes);

  for (const auto & total_cell : whole.cells) {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    for (const auto & cell : parts.cells) {
      if (cell.category == total_cell.category &&
        cell.iou_threshold == total_cell.iou_threshold)
      {
        tp += cell.tp;
        fp += cell.fp;
        fn += cell.fn;
      }
    }
    EXPECT_EQ(tp, total_cell.tp);
    EXPECT_EQ(fp, total_cell.fp);
    EXPECT_EQ(fn, total_cell.fn);
  }
}

TEST(Evaluate, DeterministicForAnyThreadCount)
{
  const TinyScene scene = make_noisy_scene(20, 91);
  const MetricReport one = evaluate(scene.gts, scene.dets, EvalConfig::defaults(),
      scene.planes, 1);
  const MetricReport many = evaluate(scene.gts, scene.dets, EvalConfig::defaults(),
      scene.planes, 8);
  EXPECT_TRUE(one == many);
}

TEST(Evaluate, MatchesIndependentReferenceEvaluator)
{
  const TinyScene scene = make_noisy_scene(25, 303);
  EvalConfig cfg = EvalConfig::defaults();
  // trim to keep the brute-force reference affordable
  cfg.iou_thresholds = {
    {Category::kCar, {0.5}},
    {Category::kPedestrian, {0.25}},
    {Category::kCyclist, {0.25, 0.5}}};
  const MetricReport fast = evaluate(scene.gts, scene.dets, cfg, scene.planes);
  const MetricReport slow = oracles::ref_evaluate(scene.gts, scene.dets, cfg, scene.planes);
  ASSERT_EQ(fast.cells.size(), slow.cells.size());
  for (std::size_t i = 0; i < fast.cells.size(); ++i) {
    const MetricCell & a = fast.cells[i];
    const MetricCell & b = slow.cells[i];
    EXPECT_EQ(a.bucket_label, b.bucket_label);
    EXPECT_EQ(a.tp, b.tp) << a.bucket_label;
    EXPECT_EQ(a.fp, b.fp) << a.bucket_label;
    EXPECT_EQ(a.fn, b.fn) << a.bucket_label;
    EXPECT_EQ(a.ignored, b.ignored);
    EXPECT_EQ(a.undefined, b.undefined);
    EXPECT_NEAR(a.ap, b.ap, 1e-9);
    EXPECT_NEAR(a.acs, b.acs, 1e-9);
    EXPECT_NEAR(a.aos, b.aos, 1e-9);
    EXPECT_NEAR(a.aas, b.aas, 1e-9);
    EXPECT_NEAR(a.agd, b.agd, 1e-9);
    EXPECT_NEAR(a.ags, b.ags, 1e-9);
    EXPECT_NEAR(a.rope_score, b.rope_score, 1e-9);
    EXPECT_DOUBLE_EQ(a.operating_score, b.operating_score);
  }
}

TEST(EvalConfig, ValidationRejectsBadValues)
{
  EvalConfig cfg = EvalConfig::defaults();
  cfg.omega1 = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);

  cfg = EvalConfig::defaults();
  cfg.iou_thresholds[0].second = {1.5};
  EXPECT_THROW(cfg.validate(), ConfigError);

  cfg = EvalConfig::defaults();
  cfg.range_buckets.push_back({"bad", 30.0, 10.0});
  EXPECT_THROW(cfg.validate(), ConfigError);
}
