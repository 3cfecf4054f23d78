#include "breptok/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace breptok {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedGeometry: return "malformed-geometry";
    case ErrorKind::DegenerateGeometry: return "degenerate-geometry";
    case ErrorKind::ContractViolation: return "contract-violation";
    case ErrorKind::InvalidCode: return "invalid-code";
    case ErrorKind::UnreachableFaces: return "unreachable-faces";
    case ErrorKind::WindowCapacity: return "window-capacity";
    case ErrorKind::DanglingReference: return "dangling-reference";
    case ErrorKind::ModeViolation: return "mode-violation";
    case ErrorKind::GeneratorError: return "generator-error";
    case ErrorKind::FormatError: return "format-error";
  }
  return "unknown";
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double squared_norm(const Vec3& v) { return dot(v, v); }

double norm(const Vec3& v) { return std::sqrt(squared_norm(v)); }

Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  return n > 0.0 ? v * (1.0 / n) : Vec3{};
}

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

double Aabb::max_extent() const {
  Vec3 e = extent();
  return std::max({e.x, e.y, e.z});
}

void Aabb::expand(const Vec3& p) {
  for (int a = 0; a < 3; ++a) {
    min_corner[a] = std::min(min_corner[a], p[a]);
    max_corner[a] = std::max(max_corner[a], p[a]);
  }
}

void Aabb::expand(const Aabb& b) {
  expand(b.min_corner);
  expand(b.max_corner);
}

Aabb compute_aabb(std::span<const Vec3> points) {
  if (points.empty())
    throw BrepError(ErrorKind::MalformedGeometry, "empty point set has no bounding box");
  Aabb box{points[0], points[0]};
  for (const Vec3& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
      throw BrepError(ErrorKind::MalformedGeometry, "non-finite coordinate in point grid");
    box.expand(p);
  }
  return box;
}

Aabb compute_aabb(const FaceGrid& g) { return compute_aabb(std::span<const Vec3>(g.points)); }

Aabb compute_aabb(const EdgeGrid& g) { return compute_aabb(std::span<const Vec3>(g.points)); }

UnitCubeMap unit_cube_map(const Aabb& box) {
  UnitCubeMap map;
  map.mid = box.center();
  Vec3 e = box.extent();
  double m = 0.0;
  for (int a = 0; a < 3; ++a) {
    map.degenerate[a] = e[a] < kDegenerateExtent;
    m = std::max(m, e[a]);
  }
  if (!map.all_degenerate()) {
    map.scale = 2.0 / m;
    map.inv_scale = m / 2.0;
  }
  return map;
}

Vec3 UnitCubeMap::apply(const Vec3& p) const {
  Vec3 q;
  for (int a = 0; a < 3; ++a) q[a] = degenerate[a] ? 0.0 : (p[a] - mid[a]) * scale;
  return q;
}

Vec3 UnitCubeMap::invert(const Vec3& q) const {
  Vec3 p;
  for (int a = 0; a < 3; ++a) p[a] = degenerate[a] ? mid[a] : q[a] * inv_scale + mid[a];
  return p;
}

FaceGrid flip_grid(const FaceGrid& g, bool flip_u, bool flip_v) {
  FaceGrid out;
  out.orientation_out = g.orientation_out;
  for (int u = 0; u < kGridN; ++u)
    for (int v = 0; v < kGridN; ++v)
      out.at(u, v) = g.at(flip_u ? kGridN - 1 - u : u, flip_v ? kGridN - 1 - v : v);
  return out;
}

EdgeGrid reverse_grid(const EdgeGrid& g) {
  EdgeGrid out;
  for (int i = 0; i < kGridN; ++i) out.points[i] = g.points[kGridN - 1 - i];
  return out;
}

namespace {

// -1 / 0 / +1 three-way lexicographic point compare.
int cmp_point(const Vec3& a, const Vec3& b) {
  if (lex_less(a, b)) return -1;
  if (lex_less(b, a)) return 1;
  return 0;
}

struct FlipView {
  const FaceGrid* g;
  bool fu, fv;
  const Vec3& at(int u, int v) const {
    return g->at(fu ? kGridN - 1 - u : u, fv ? kGridN - 1 - v : v);
  }
};

// Compares two flip configurations of the same grid: corner (0,0) first, then
// the probe points (0,1) and (1,0), then the full grid row-major.  Total on
// distinct grids; equal only when the flipped grids are bit-identical.
int cmp_config(const FlipView& a, const FlipView& b) {
  if (int c = cmp_point(a.at(0, 0), b.at(0, 0))) return c;
  if (int c = cmp_point(a.at(0, 1), b.at(0, 1))) return c;
  if (int c = cmp_point(a.at(1, 0), b.at(1, 0))) return c;
  for (int u = 0; u < kGridN; ++u)
    for (int v = 0; v < kGridN; ++v)
      if (int c = cmp_point(a.at(u, v), b.at(u, v))) return c;
  return 0;
}

}  // namespace

UvFlips canonicalize_uv_origin(const FaceGrid& g) {
  // Preference order breaks full-symmetry ties: identity < u-flip < v-flip < both.
  const std::array<std::pair<bool, bool>, 4> configs{{{false, false}, {true, false}, {false, true}, {true, true}}};
  int best = 0;
  for (int i = 1; i < 4; ++i) {
    FlipView cand{&g, configs[i].first, configs[i].second};
    FlipView cur{&g, configs[best].first, configs[best].second};
    if (cmp_config(cand, cur) < 0) best = i;
  }
  return {flip_grid(g, configs[best].first, configs[best].second), configs[best].first,
          configs[best].second};
}

EdgeFlip canonicalize_edge_direction(const EdgeGrid& g) {
  // Forward vs reversed sequence, first difference wins; palindrome keeps forward.
  for (int i = 0; i < kGridN; ++i) {
    int c = cmp_point(g.points[i], g.points[kGridN - 1 - i]);
    if (c < 0) return {g, false};
    if (c > 0) return {reverse_grid(g), true};
  }
  return {g, false};
}

namespace {

template <typename Grid>
Grid map_points(const Grid& g, const UnitCubeMap& map, bool inverse) {
  Grid out = g;
  for (size_t i = 0; i < g.points.size(); ++i)
    out.points[i] = inverse ? map.invert(g.points[i]) : map.apply(g.points[i]);
  return out;
}

}  // namespace

CanonicalFaceGrid normalize_unit_cube(const FaceGrid& g, const Aabb& box) {
  UnitCubeMap map = unit_cube_map(box);
  if (map.all_degenerate())
    throw BrepError(ErrorKind::DegenerateGeometry, "grid has zero extent on every axis");
  return {map_points(g, map, false), box, false, false};
}

CanonicalEdgeGrid normalize_unit_cube(const EdgeGrid& g, const Aabb& box) {
  UnitCubeMap map = unit_cube_map(box);
  if (map.all_degenerate())
    throw BrepError(ErrorKind::DegenerateGeometry, "grid has zero extent on every axis");
  return {map_points(g, map, false), box, false};
}

CanonicalFaceGrid canonical_face(const FaceGrid& g) {
  Aabb box = compute_aabb(g);  // flips permute points, so the box is shared
  UvFlips flipped = canonicalize_uv_origin(g);
  CanonicalFaceGrid out = normalize_unit_cube(flipped.grid, box);
  out.u_flipped = flipped.u_flipped;
  out.v_flipped = flipped.v_flipped;
  return out;
}

CanonicalEdgeGrid canonical_edge(const EdgeGrid& g) {
  Aabb box = compute_aabb(g);
  EdgeFlip flipped = canonicalize_edge_direction(g);
  CanonicalEdgeGrid out = normalize_unit_cube(flipped.grid, box);
  out.flipped = flipped.flipped;
  return out;
}

FaceGrid denormalize(const FaceGrid& normalized, const Aabb& box) {
  return map_points(normalized, unit_cube_map(box), true);
}

EdgeGrid denormalize(const EdgeGrid& normalized, const Aabb& box) {
  return map_points(normalized, unit_cube_map(box), true);
}

}  // namespace breptok
