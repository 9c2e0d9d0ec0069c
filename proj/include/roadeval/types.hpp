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
// Core value types shared across the devkit.
//
// Coordinate conventions (camera frame, right-handed):
//   x -> right, y -> down, z -> forward (optical axis).
// The "vertical" axis is y; the BEV / ground footprint plane is (x, z).
// A camera mounted above the road therefore sees the ground at positive y.
#ifndef ROADEVAL_TYPES_HPP_
#define ROADEVAL_TYPES_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roadeval/errors.hpp"

namespace roadeval {

inline constexpr double kPi = 3.14159265358979323846;

/// Behind-camera threshold for projections, in meters.
inline constexpr double kBehindCameraEps = 1e-6;

struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3 & a, const Vec3 & b)
  {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Vec3 operator-(const Vec3 & a, const Vec3 & b)
  {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Vec3 operator*(double s, const Vec3 & v) {return {s * v.x, s * v.y, s * v.z};}
  friend Vec3 operator*(const Vec3 & v, double s) {return s * v;}
};

inline double dot(const Vec3 & a, const Vec3 & b) {return a.x * b.x + a.y * b.y + a.z * b.z;}

inline Vec3 cross(const Vec3 & a, const Vec3 & b)
{
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3 & v) {return std::sqrt(dot(v, v));}

/// Row-major 3x3 matrix. Only the handful of operations the devkit needs.
struct Mat3
{
  std::array<std::array<double, 3>, 3> m {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  static Mat3 identity() {return Mat3{};}

  Vec3 apply(const Vec3 & v) const
  {
    return {
      m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
      m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
      m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }

  Mat3 transposed() const
  {
    Mat3 t;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        t.m[r][c] = m[c][r];
      }
    }
    return t;
  }

  friend Mat3 operator*(const Mat3 & a, const Mat3 & b)
  {
    Mat3 out;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        out.m[r][c] = a.m[r][0] * b.m[0][c] + a.m[r][1] * b.m[1][c] + a.m[r][2] * b.m[2][c];
      }
    }
    return out;
  }

  double determinant() const
  {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
};

/// Rigid motion p' = R p + t.
struct RigidTransform
{
  Mat3 rotation;
  Vec3 translation;

  Vec3 apply(const Vec3 & p) const {return rotation.apply(p) + translation;}

  RigidTransform inverse() const
  {
    const Mat3 rt = rotation.transposed();
    const Vec3 t = rt.apply(translation);
    return {rt, {-t.x, -t.y, -t.z}};
  }

  /// Orthonormality and det(+1) within `tol`.
  bool is_valid(double tol = 1e-9) const
  {
    const Mat3 should_be_id = rotation.transposed() * rotation;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        const double want = r == c ? 1.0 : 0.0;
        if (std::abs(should_be_id.m[r][c] - want) > tol) {return false;}
      }
    }
    return std::abs(rotation.determinant() - 1.0) <= tol;
  }
};

/// Pinhole intrinsics plus image size. No distortion model.
struct CameraModel
{
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  /// Throws ConfigError on an invariant violation.
  void validate() const
  {
    if (!(fx > 0.0) || !(fy > 0.0)) {
      throw ConfigError("camera focal lengths must be positive");
    }
    if (width <= 0 || height <= 0) {
      throw ConfigError("camera image size must be positive");
    }
    if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) {
      throw ConfigError("camera principal point must lie inside the image");
    }
  }
};

struct Pixel
{
  double u = 0.0;
  double v = 0.0;
};

/// Axis-aligned image box in pixels.
struct Box2D
{
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const {return xmax - xmin;}
  double height() const {return ymax - ymin;}
  double area() const {return std::max(0.0, width()) * std::max(0.0, height());}
};

/// Normalizes an angle to (-pi, pi].
inline double normalize_angle(double theta)
{
  double r = std::fmod(theta, 2.0 * kPi);
  if (r <= -kPi) {r += 2.0 * kPi;}
  if (r > kPi) {r -= 2.0 * kPi;}
  return r;
}

/// 7-DOF cuboid in the camera frame.
///
/// `center` is the geometric center of the cuboid. `yaw` rotates the box
/// about the camera vertical (y) axis; at yaw 0 the length axis is +x.
/// The bottom face sits at center.y + height/2 (y points down).
struct Box3D
{
  Vec3 center;
  double length = 0.0;  // L, along heading
  double width = 0.0;   // W, lateral
  double height = 0.0;  // H, along the vertical axis
  double yaw = 0.0;     // radians in (-pi, pi]

  double footprint_area() const {return length * width;}
  double volume() const {return length * width * height;}

  void validate() const
  {
    if (!(length > 0.0) || !(width > 0.0) || !(height > 0.0)) {
      throw ConfigError("box dimensions must be positive");
    }
  }
};

/// Ground plane alpha*x + beta*y + gamma*z + d = 0 in camera coordinates.
///
/// Canonical form: (alpha,beta,gamma) unit-norm and d > 0, i.e. the normal
/// points toward the camera origin. For a camera at height h over flat
/// ground this is (0, -1, 0, h).
struct GroundPlane
{
  double alpha = 0.0;
  double beta = -1.0;
  double gamma = 0.0;
  double d = 1.0;

  Vec3 normal() const {return {alpha, beta, gamma};}

  double signed_distance(const Vec3 & p) const
  {
    return alpha * p.x + beta * p.y + gamma * p.z + d;
  }

  /// Builds the canonical (unit-norm, d > 0) plane from raw coefficients.
  /// If the plane passes through the camera origin (d == 0), the normal with
  /// negative y component (pointing up, toward the usual camera side) wins.
  /// Idempotent: already-canonical coefficients pass through bit-unchanged.
  static GroundPlane from_coefficients(double a, double b, double c, double dd)
  {
    const double n = std::sqrt(a * a + b * b + c * c);
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw DegenerateInput("plane normal has zero or non-finite length");
    }
    GroundPlane g{a, b, c, dd};
    if (std::abs(n - 1.0) > 1e-12) {
      g = GroundPlane{a / n, b / n, c / n, dd / n};
    }
    bool flip = g.d < 0.0;
    if (g.d == 0.0) {
      flip = g.beta > 0.0 || (g.beta == 0.0 && (g.alpha < 0.0 ||
        (g.alpha == 0.0 && g.gamma < 0.0)));
    }
    if (flip) {
      g = GroundPlane{-g.alpha, -g.beta, -g.gamma, -g.d};
    }
    return g;
  }
};

/// Piecewise-planar ground: one plane per cell of a square footprint grid.
///
/// A 3D point (x, y, z) falls into cell
///   i = floor((x - origin_x) / cell_size), j = floor((z - origin_z) / cell_size).
struct GriddedGround
{
  double cell_size = 5.0;
  double origin_x = 0.0;
  double origin_z = 0.0;
  std::map<std::pair<int, int>, GroundPlane> cells;
  GroundPlane fallback;

  std::pair<int, int> cell_index(double x, double z) const
  {
    return {
      static_cast<int>(std::floor((x - origin_x) / cell_size)),
      static_cast<int>(std::floor((z - origin_z) / cell_size))};
  }
};

/// Per-pixel ground depth in meters; kInvalid marks pixels whose viewing ray
/// never hits the ground within range.
struct DepthMap
{
  static constexpr double kInvalid = std::numeric_limits<double>::infinity();

  int width = 0;
  int height = 0;
  double z_max = 0.0;
  std::vector<double> values;  // row-major, width*height

  double at(int x, int y) const {return values[static_cast<std::size_t>(y) * width + x];}
  double & at(int x, int y) {return values[static_cast<std::size_t>(y) * width + x];}
  static bool is_valid(double v) {return std::isfinite(v);}
};

/// The 13 annotated object classes.
enum class Category : std::uint8_t
{
  kCar,
  kVan,
  kBus,
  kTruck,
  kCyclist,
  kMotorcyclist,
  kTricyclist,
  kBarrow,
  kPedestrian,
  kTrafficCone,
  kTrianglePlate,
  kUnknownMovable,
  kUnknownUnmovable,
};

inline constexpr std::size_t kCategoryCount = 13;

inline constexpr std::array<std::string_view, kCategoryCount> kCategoryNames = {
  "car", "van", "bus", "truck", "cyclist", "motorcyclist", "tricyclist", "barrow",
  "pedestrian", "traffic_cone", "triangle_plate", "unknown_movable", "unknown_unmovable"};

inline std::string_view to_string(Category c)
{
  return kCategoryNames[static_cast<std::size_t>(c)];
}

/// Exact token lookup; nullopt for anything unknown.
inline std::optional<Category> category_from_string(std::string_view token)
{
  for (std::size_t i = 0; i < kCategoryCount; ++i) {
    if (kCategoryNames[i] == token) {
      return static_cast<Category>(i);
    }
  }
  return std::nullopt;
}

inline bool is_motor_vehicle(Category c)
{
  return c == Category::kCar || c == Category::kVan || c == Category::kBus ||
         c == Category::kTruck;
}

/// Ground-truth object. 2D-complementary labels (objects the laser never
/// scanned) carry a 2D box only; box3d is then absent and the object acts as
/// an ignore region during matching.
struct Annotation
{
  std::string frame_id;
  Category category = Category::kUnknownMovable;
  int occlusion = 0;   // 0 none, 1 <50%, 2 >=50%
  int truncation = 0;  // 0 none, 1 horizontal, 2 vertical image-border cut
  double alpha = 0.0;  // observation angle, radians
  Box2D box2d;
  std::optional<Box3D> box3d;
};

/// Scored prediction. box2d is optional; detectors that emit none cannot be
/// matched against ignore regions.
struct Detection
{
  std::string frame_id;
  Category category = Category::kUnknownMovable;
  double alpha = 0.0;
  std::optional<Box2D> box2d;
  Box3D box3d;
  double score = 0.0;  // in [0, 1]
};

}  // namespace roadeval

#endif  // ROADEVAL_TYPES_HPP_
