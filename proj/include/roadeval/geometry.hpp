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
// 3D/2D geometric primitives: box corners, pinhole projection, total-least-
// squares plane fitting, ground depth maps, and rigid transform composition.
// Everything here is a pure function of its inputs.
#ifndef ROADEVAL_GEOMETRY_HPP_
#define ROADEVAL_GEOMETRY_HPP_

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "roadeval/errors.hpp"
#include "roadeval/parallel.hpp"
#include "roadeval/types.hpp"

namespace roadeval {

/// Returns the transform that applies `b` first, then `a`.
inline RigidTransform compose_transforms(const RigidTransform & a, const RigidTransform & b)
{
  return {a.rotation * b.rotation, a.rotation.apply(b.translation) + a.translation};
}

/// The eight cuboid corners in a fixed order:
///   0-3 bottom face (y = center.y + H/2), counterclockwise when viewed from
///       above (from -y looking down), starting at the (+L/2, +W/2) footprint
///       offset; 4-7 the top face, corner i+4 vertically above corner i.
///
/// Consumers index into this order (ground corners, vertex-distance metrics),
/// so it is part of the API contract.
inline std::array<Vec3, 8> box_corners(const Box3D & box)
{
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.length;
  const double hw = 0.5 * box.width;
  const double hh = 0.5 * box.height;
  // footprint offsets (along heading, lateral), counterclockwise in (x, z)
  constexpr std::array<std::pair<double, double>, 4> signs = {
    {{+1.0, +1.0}, {-1.0, +1.0}, {-1.0, -1.0}, {+1.0, -1.0}}};

  std::array<Vec3, 8> corners;
  for (std::size_t i = 0; i < 4; ++i) {
    const double dx = signs[i].first * hl;
    const double dz = signs[i].second * hw;
    const double x = box.center.x + c * dx + s * dz;
    const double z = box.center.z - s * dx + c * dz;
    corners[i] = {x, box.center.y + hh, z};
    corners[i + 4] = {x, box.center.y - hh, z};
  }
  return corners;
}

/// Bottom-face corners (indices 0-3 of box_corners).
inline std::array<Vec3, 4> ground_corners(const Box3D & box)
{
  const auto all = box_corners(box);
  return {all[0], all[1], all[2], all[3]};
}

/// Pinhole projection. Throws PointBehindCamera for z <= 1e-6 m.
inline Pixel project_point(const CameraModel & cam, const Vec3 & p)
{
  if (!(p.z > kBehindCameraEps)) {
    throw PointBehindCamera("point at z <= epsilon cannot be projected");
  }
  return {cam.fx * p.x / p.z + cam.cx, cam.fy * p.y / p.z + cam.cy};
}

/// Pixel + depth back to a camera-frame point.
inline Vec3 back_project(const CameraModel & cam, double u, double v, double z)
{
  return {(u - cam.cx) / cam.fx * z, (v - cam.cy) / cam.fy * z, z};
}

/// Amodal 2D box: tight bound of the eight projected corners, not clipped to
/// the image. Throws BoxBehindCamera if any corner lies behind the camera.
inline Box2D project_box_to_2d(const CameraModel & cam, const Box3D & box)
{
  const auto corners = box_corners(box);
  for (const auto & corner : corners) {
    if (!(corner.z > kBehindCameraEps)) {
      throw BoxBehindCamera("box corner at z <= epsilon cannot be projected");
    }
  }
  Box2D out;
  out.xmin = out.ymin = std::numeric_limits<double>::infinity();
  out.xmax = out.ymax = -std::numeric_limits<double>::infinity();
  for (const auto & corner : corners) {
    const Pixel px = project_point(cam, corner);
    out.xmin = std::min(out.xmin, px.u);
    out.xmax = std::max(out.xmax, px.u);
    out.ymin = std::min(out.ymin, px.v);
    out.ymax = std::max(out.ymax, px.v);
  }
  return out;
}

/// Orthogonal projection of the box center onto the plane.
inline Vec3 ground_center(const Box3D & box, const GroundPlane & plane)
{
  const double dist = plane.signed_distance(box.center);
  return box.center - dist * plane.normal();
}

/// Total-least-squares plane through the points: the normal is the smallest
/// singular direction of the centered point matrix. Result is canonical
/// (unit normal, d > 0). Throws DegenerateInput for < 3 points or a
/// collinear set (lateral RMS spread below 1e-9, relative to the major
/// spread with a 1 m floor).
inline GroundPlane fit_plane(std::span<const Vec3> points)
{
  if (points.size() < 3) {
    throw DegenerateInput("plane fit needs at least 3 points");
  }
  Vec3 centroid{0.0, 0.0, 0.0};
  for (const auto & p : points) {centroid = centroid + p;}
  const double inv_n = 1.0 / static_cast<double>(points.size());
  centroid = inv_n * centroid;

  Eigen::MatrixXd centered(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered(static_cast<Eigen::Index>(i), 0) = points[i].x - centroid.x;
    centered(static_cast<Eigen::Index>(i), 1) = points[i].y - centroid.y;
    centered(static_cast<Eigen::Index>(i), 2) = points[i].z - centroid.z;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::Vector3d sigma = svd.singularValues();  // descending
  const double rms = std::sqrt(inv_n);
  const double mid_spread = sigma[1] * rms;
  const double major_spread = sigma[0] * rms;
  if (mid_spread <= 1e-9 * std::max(1.0, major_spread)) {
    throw DegenerateInput("plane fit input is collinear");
  }
  const Eigen::Vector3d n = svd.matrixV().col(2);
  const double d = -(n.x() * centroid.x + n.y() * centroid.y + n.z() * centroid.z);
  return GroundPlane::from_coefficients(n.x(), n.y(), n.z(), d);
}

inline GroundPlane fit_plane(const std::vector<Vec3> & points)
{
  return fit_plane(std::span<const Vec3>(points));
}

/// Depth of the ray through pixel (u, v) at its intersection with the plane,
/// or +infinity when the ray is parallel to or diverges from the plane.
inline double ray_plane_depth(const CameraModel & cam, const GroundPlane & plane, double u,
  double v)
{
  const double rx = (u - cam.cx) / cam.fx;
  const double ry = (v - cam.cy) / cam.fy;
  const double denom = plane.alpha * rx + plane.beta * ry + plane.gamma;
  const double z = -plane.d / denom;
  return z > 0.0 && std::isfinite(z) ? z : DepthMap::kInvalid;
}

/// Ground depth map at image resolution: per pixel the depth Z at which the
/// viewing ray meets the plane, kept only if 0 < Z <= z_max. Pixels at or
/// above the horizon become kInvalid. Rows are computed independently, so any
/// thread count yields identical output.
inline DepthMap ground_depth_map(const CameraModel & cam, const GroundPlane & plane,
  double z_max, int threads = 1)
{
  DepthMap map;
  map.width = cam.width;
  map.height = cam.height;
  map.z_max = z_max;
  map.values.assign(static_cast<std::size_t>(cam.width) * cam.height, DepthMap::kInvalid);
  parallel_for(
    static_cast<std::size_t>(cam.height), threads,
    [&](std::size_t row) {
      const double v = static_cast<double>(row);
      for (int x = 0; x < cam.width; ++x) {
        const double z = ray_plane_depth(cam, plane, static_cast<double>(x), v);
        if (z <= z_max) {
          map.at(x, static_cast<int>(row)) = z;
        }
      }
    });
  return map;
}

/// Bins points into cell_size x cell_size footprint cells (grid anchored at
/// the origin) and fits a plane per cell with enough support; the fallback is
/// the plane fitted to all points. Throws DegenerateInput only when the
/// global fit does.
inline GriddedGround fit_gridded_ground(std::span<const Vec3> points, double cell_size,
  int min_points_per_cell)
{
  if (!(cell_size > 0.0)) {
    throw ConfigError("cell_size must be positive");
  }
  GriddedGround gg;
  gg.cell_size = cell_size;
  gg.fallback = fit_plane(points);

  std::map<std::pair<int, int>, std::vector<Vec3>> bins;
  for (const auto & p : points) {
    bins[gg.cell_index(p.x, p.z)].push_back(p);
  }
  for (const auto & [index, cell_points] : bins) {
    if (static_cast<int>(cell_points.size()) < min_points_per_cell) {
      continue;
    }
    try {
      gg.cells.emplace(index, fit_plane(cell_points));
    } catch (const DegenerateInput &) {
      // collinear cell content: leave the cell to the fallback plane
    }
  }
  return gg;
}

inline GriddedGround fit_gridded_ground(const std::vector<Vec3> & points, double cell_size,
  int min_points_per_cell)
{
  return fit_gridded_ground(std::span<const Vec3>(points), cell_size, min_points_per_cell);
}

/// Piecewise depth for one pixel: nearest cell-plane intersection whose
/// footprint lands inside its own cell, else the fallback plane. Reference
/// path scanning every cell; the map builder below takes a banded shortcut
/// that yields bit-identical values.
inline double gridded_ray_depth(const CameraModel & cam, const GriddedGround & gg, double u,
  double v)
{
  const double rx = (u - cam.cx) / cam.fx;
  double best = DepthMap::kInvalid;
  for (const auto & [index, plane] : gg.cells) {
    const double z = ray_plane_depth(cam, plane, u, v);
    if (z >= best) {
      continue;
    }
    if (gg.cell_index(rx * z, z) == index) {
      best = z;
    }
  }
  if (!DepthMap::is_valid(best)) {
    best = ray_plane_depth(cam, gg.fallback, u, v);
  }
  return best;
}

namespace geometry_detail {

/// Dense cell lookup over the populated index bounding box.
struct CellLookup
{
  int imin = 0;
  int imax = -1;
  int jmin = 0;
  int jmax = -1;
  std::vector<const GroundPlane *> planes;  // row-major over (i, j)

  explicit CellLookup(const GriddedGround & gg)
  {
    if (gg.cells.empty()) {return;}
    imin = jmin = std::numeric_limits<int>::max();
    imax = jmax = std::numeric_limits<int>::min();
    for (const auto & [index, plane] : gg.cells) {
      imin = std::min(imin, index.first);
      imax = std::max(imax, index.first);
      jmin = std::min(jmin, index.second);
      jmax = std::max(jmax, index.second);
    }
    planes.assign(
      static_cast<std::size_t>(imax - imin + 1) * (jmax - jmin + 1), nullptr);
    for (const auto & [index, plane] : gg.cells) {
      planes[at(index.first, index.second)] = &plane;
    }
  }

  std::size_t at(int i, int j) const
  {
    return static_cast<std::size_t>(i - imin) * (jmax - jmin + 1) +
           static_cast<std::size_t>(j - jmin);
  }

  const GroundPlane * find(int i, int j) const
  {
    if (i < imin || i > imax || j < jmin || j > jmax) {return nullptr;}
    return planes[at(i, j)];
  }
};

/// Same result as gridded_ray_depth: walk depth bands in ascending z, probe
/// only the cells the ray footprint can touch in each band, and stop at the
/// first (nearest) acceptance.
inline double gridded_ray_depth_banded(const CameraModel & cam, const GriddedGround & gg,
  const CellLookup & lookup, double u, double v)
{
  const double rx = (u - cam.cx) / cam.fx;
  for (int j = lookup.jmin; j <= lookup.jmax; ++j) {
    const double z0 = gg.origin_z + j * gg.cell_size;
    const double z1 = z0 + gg.cell_size;
    const double x0 = (rx * z0 - gg.origin_x) / gg.cell_size;
    const double x1 = (rx * z1 - gg.origin_x) / gg.cell_size;
    const int i0 = static_cast<int>(std::floor(std::min(x0, x1)));
    const int i1 = static_cast<int>(std::floor(std::max(x0, x1)));
    double best = DepthMap::kInvalid;
    for (int i = i0; i <= i1; ++i) {
      const GroundPlane * plane = lookup.find(i, j);
      if (plane == nullptr) {continue;}
      const double z = ray_plane_depth(cam, *plane, u, v);
      if (z < best && gg.cell_index(rx * z, z) == std::pair<int, int>{i, j}) {
        best = z;
      }
    }
    if (DepthMap::is_valid(best)) {return best;}  // bands ascend in z
  }
  return ray_plane_depth(cam, gg.fallback, u, v);
}

}  // namespace geometry_detail

/// Gridded counterpart of ground_depth_map, same validity rule.
inline DepthMap gridded_depth_map(const CameraModel & cam, const GriddedGround & gg,
  double z_max, int threads = 1)
{
  const geometry_detail::CellLookup lookup(gg);
  DepthMap map;
  map.width = cam.width;
  map.height = cam.height;
  map.z_max = z_max;
  map.values.assign(static_cast<std::size_t>(cam.width) * cam.height, DepthMap::kInvalid);
  parallel_for(
    static_cast<std::size_t>(cam.height), threads,
    [&](std::size_t row) {
      const double v = static_cast<double>(row);
      for (int x = 0; x < cam.width; ++x) {
        const double z = geometry_detail::gridded_ray_depth_banded(cam, gg, lookup,
            static_cast<double>(x), v);
        if (z <= z_max) {
          map.at(x, static_cast<int>(row)) = z;
        }
      }
    });
  return map;
}

}  // namespace roadeval

#endif  // ROADEVAL_GEOMETRY_HPP_
