#pragma once

#include <array>
#include <span>

#include "breptok/errors.hpp"

namespace breptok {

// Grid resolution: faces are sampled on a 32x32 parameter grid, edges on 32.
inline constexpr int kGridN = 32;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }
  double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
double squared_norm(const Vec3& v);
Vec3 normalized(const Vec3& v);
// Strict lexicographic order on (x, y, z); the canonicalization order.
bool lex_less(const Vec3& a, const Vec3& b);

struct Aabb {
  Vec3 min_corner;
  Vec3 max_corner;

  Vec3 extent() const { return max_corner - min_corner; }
  Vec3 center() const { return (min_corner + max_corner) * 0.5; }
  double max_extent() const;
  void expand(const Vec3& p);
  void expand(const Aabb& b);
};

// Uniformly sampled 3D points over a face's parameter rectangle, row-major in
// u (points[u * 32 + v]).  orientation_out is true when cross(d/du, d/dv)
// points out of the solid; producers without orientation data leave it true
// and set BRepGraph::orientation_known = false.
struct FaceGrid {
  std::array<Vec3, kGridN * kGridN> points{};
  bool orientation_out = true;

  Vec3& at(int u, int v) { return points[u * kGridN + v]; }
  const Vec3& at(int u, int v) const { return points[u * kGridN + v]; }
};

struct EdgeGrid {
  std::array<Vec3, kGridN> points{};
};

Aabb compute_aabb(std::span<const Vec3> points);
Aabb compute_aabb(const FaceGrid& g);
Aabb compute_aabb(const EdgeGrid& g);

// Affine map taking a box into [-1,1]^3: centered at the box midpoint and
// uniformly scaled by 2/max_extent, so the longest axis spans exactly [-1,1].
// Axes with extent below kDegenerateExtent collapse to 0 on apply and recover
// the box midpoint on invert.  all_degenerate() boxes produce a map whose
// invert() collapses everything to the midpoint (scale 0); callers that need
// a real solid must reject that case.
inline constexpr double kDegenerateExtent = 1e-12;

struct UnitCubeMap {
  Vec3 mid;
  double scale = 0.0;      // 2 / max extent, 0 when fully degenerate
  double inv_scale = 0.0;  // max extent / 2
  std::array<bool, 3> degenerate{true, true, true};

  bool all_degenerate() const { return degenerate[0] && degenerate[1] && degenerate[2]; }
  Vec3 apply(const Vec3& p) const;
  Vec3 invert(const Vec3& q) const;
};

UnitCubeMap unit_cube_map(const Aabb& box);

// A grid normalized into [-1,1]^3 with its original placement box and the
// flips applied to reach canonical UV orientation.
struct CanonicalFaceGrid {
  FaceGrid grid;
  Aabb box;  // placement of the original (pre-normalization) points
  bool u_flipped = false;
  bool v_flipped = false;
};

struct CanonicalEdgeGrid {
  EdgeGrid grid;
  Aabb box;
  bool flipped = false;
};

FaceGrid flip_grid(const FaceGrid& g, bool flip_u, bool flip_v);
EdgeGrid reverse_grid(const EdgeGrid& g);

struct UvFlips {
  FaceGrid grid;
  bool u_flipped = false;
  bool v_flipped = false;
};

struct EdgeFlip {
  EdgeGrid grid;
  bool flipped = false;
};

// Picks, among {identity, u-flip, v-flip, both}, the configuration placing
// the lexicographically smallest corner at grid index (0,0).  Exact corner
// ties compare the neighboring points (0,1) then (1,0), then the rest of the
// grid row-major; fully symmetric grids prefer fewer flips
// (identity < u-flip < v-flip < both).
UvFlips canonicalize_uv_origin(const FaceGrid& g);

// One reversal axis: keeps point[0] lexicographically <= point[31], breaking
// exact ties on interior points; palindromic edges stay unflipped.
EdgeFlip canonicalize_edge_direction(const EdgeGrid& g);

// box must equal compute_aabb(grid).  Throws DegenerateGeometry when every
// axis extent is below kDegenerateExtent.
CanonicalFaceGrid normalize_unit_cube(const FaceGrid& g, const Aabb& box);
CanonicalEdgeGrid normalize_unit_cube(const EdgeGrid& g, const Aabb& box);

// Flip to canonical UV orientation, then normalize.  The recorded box is the
// placement of the input grid (flips do not move points).
CanonicalFaceGrid canonical_face(const FaceGrid& g);
CanonicalEdgeGrid canonical_edge(const EdgeGrid& g);

// Maps a normalized grid back into the placement box.  Total: degenerate
// boxes collapse points onto the box midpoint.
FaceGrid denormalize(const FaceGrid& normalized, const Aabb& box);
EdgeGrid denormalize(const EdgeGrid& normalized, const Aabb& box);

}  // namespace breptok
