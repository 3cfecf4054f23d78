#include "breptok/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "breptok/validity.hpp"

namespace breptok {

namespace {

[[noreturn]] void gen_error(const std::string& what) {
  throw BrepError(ErrorKind::GeneratorError, what);
}

// Convex-combination lerp: exact at t=0 and t=1, which keeps grids that share
// a boundary bit-identical.
double lerp(double a, double b, double t) { return a * (1.0 - t) + b * t; }
Vec3 lerp3(const Vec3& a, const Vec3& b, double t) { return a * (1.0 - t) + b * t; }
double step(int i) { return static_cast<double>(i) / (kGridN - 1); }

EdgeGrid edge_fixed_u(const FaceGrid& g, int u) {
  EdgeGrid e;
  for (int i = 0; i < kGridN; ++i) e.points[i] = g.at(u, i);
  return e;
}

EdgeGrid edge_fixed_v(const FaceGrid& g, int v) {
  EdgeGrid e;
  for (int i = 0; i < kGridN; ++i) e.points[i] = g.at(i, v);
  return e;
}

void add_edge(BRepGraph& g, EdgeGrid grid, int fa, int fb) {
  BRepEdge e;
  e.grid = std::move(grid);
  e.face_a = std::min(fa, fb);
  e.face_b = std::max(fa, fb);
  g.edges.push_back(std::move(e));
}

constexpr double kPi = 3.14159265358979323846;

// Boundary stops of a cap rim: one per boundary grid interval.
constexpr int kRim = 4 * (kGridN - 1);

// Planar cap from a closed counterclockwise boundary ring (ring[kRim] must
// repeat ring[0]).  The four grid borders take one quarter-chain of the ring
// each, so rim geometry — boxes, corner points, gap distances — is inherited
// from the ring verbatim; interior points blend the borders transfinitely
// (an affine combination, hence coplanar with the ring).  Unlike a center
// fan, every axis of the result is close to bilinear-plus-arch in (u, v),
// which is what the latent codec can represent.
FaceGrid coons_cap(const std::array<Vec3, kRim + 1>& ring) {
  constexpr int q = kGridN - 1;
  FaceGrid g;
  for (int i = 0; i < kGridN; ++i) {
    g.at(i, 0) = ring[i];
    g.at(q, i) = ring[q + i];
    g.at(i, q) = ring[3 * q - i];
    g.at(0, i) = ring[4 * q - i];
  }
  for (int u = 1; u < q; ++u) {
    double s = step(u);
    for (int v = 1; v < q; ++v) {
      double t = step(v);
      g.at(u, v) = g.at(u, 0) * (1.0 - t) + g.at(u, q) * t + g.at(0, v) * (1.0 - s) +
                   g.at(q, v) * s -
                   (g.at(0, 0) * ((1.0 - s) * (1.0 - t)) + g.at(q, 0) * (s * (1.0 - t)) +
                    g.at(0, q) * ((1.0 - s) * t) + g.at(q, q) * (s * t));
    }
  }
  return g;
}

// ---------------------------------------------------------------- box

void build_box(BRepGraph& g, const Vec3& lo, const Vec3& hi) {
  // Face id = axis*2 + side; param u runs along axis (a+1)%3, v along (a+2)%3.
  for (int a = 0; a < 3; ++a)
    for (int side = 0; side < 2; ++side) {
      int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
      BRepFace face;
      double plane = side ? hi[a] : lo[a];
      for (int u = 0; u < kGridN; ++u)
        for (int v = 0; v < kGridN; ++v) {
          Vec3 p;
          p[a] = plane;
          p[b1] = lerp(lo[b1], hi[b1], step(u));
          p[b2] = lerp(lo[b2], hi[b2], step(v));
          face.grid.at(u, v) = p;
        }
      // Geometric normal e_b1 x e_b2 = +e_a; outward only on the max side.
      face.grid.orientation_out = side == 1;
      g.faces.push_back(std::move(face));
    }
  // Edge along axis a at the (s1, s2) extremes of the other two axes, shared
  // by faces (b1, s1) and (b2, s2); copied from the first one's boundary.
  for (int a = 0; a < 3; ++a)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        int b1 = (a + 1) % 3, b2 = (a + 2) % 3;
        int fa = b1 * 2 + s1, fb = b2 * 2 + s2;
        // On face (b1, s1): u runs along b2, v along a.
        add_edge(g, edge_fixed_u(g.faces[fa].grid, s2 * (kGridN - 1)), fa, fb);
      }
}

}  // namespace

BRepDocument gen_box(const Vec3& extents, const Vec3& center) {
  for (int i = 0; i < 3; ++i)
    if (!(extents[i] > 0.0)) gen_error("box extents must be positive");
  Vec3 half = extents * 0.5;
  BRepDocument doc;
  build_box(doc.graph, center - half, center + half);
  refresh_boxes(doc.graph);
  DocumentLabels labels;
  labels.complexity = classify_complexity(6);
  labels.hull_planes = {0, 1, 2, 3, 4, 5};
  doc.labels = std::move(labels);
  return doc;
}

// ---------------------------------------------------------------- cylinder

BRepDocument gen_cylinder(double radius, double height) {
  if (!(radius > 0.0) || !(height > 0.0)) gen_error("cylinder dimensions must be positive");
  if (height < 6.0 * radius)
    gen_error("cylinder needs height >= 6*radius to keep the disc-rim resampling "
              "error below the gap tolerance");

  BRepDocument doc;
  BRepGraph& g = doc.graph;
  g.faces.resize(4);

  // Discs: a blended cap over the rim circle.  The rim walk starts at
  // theta = pi so the disc box reaches -radius in x exactly, like the wall
  // seam (otherwise the bottom disc would lose the bottom-leftmost start-face
  // comparison to a wall by one coordinate bin), and its 124 stops include
  // every wall-edge angle theta = pi + pi*k/31, keeping rim gaps well under
  // tolerance.
  for (int top = 0; top < 2; ++top) {
    double z = top ? height : 0.0;
    std::array<Vec3, kRim + 1> ring;
    for (int k = 0; k < kRim; ++k) {
      double phi = kPi + 2.0 * kPi * k / kRim;
      ring[k] = {radius * std::cos(phi), radius * std::sin(phi), z};
    }
    ring[kRim] = ring[0];
    FaceGrid& grid = g.faces[top ? 3 : 0].grid;
    grid = coons_cap(ring);
    grid.orientation_out = top == 1;  // ccw rim: du x dv = +z
  }
  // Half-walls: u angular over half a turn, v along the axis.
  for (int half = 0; half < 2; ++half) {
    FaceGrid& grid = g.faces[half ? 2 : 1].grid;
    for (int u = 0; u < kGridN; ++u)
      for (int v = 0; v < kGridN; ++v) {
        double theta = (half ? 0.0 : kPi) + kPi * step(u);
        grid.at(u, v) = {radius * std::cos(theta), radius * std::sin(theta),
                         lerp(0.0, height, step(v))};
      }
    grid.orientation_out = true;  // angular x axial = outward radial
  }

  add_edge(g, edge_fixed_v(g.faces[1].grid, 0), 1, 0);           // bottom arc, lower half
  add_edge(g, edge_fixed_v(g.faces[2].grid, 0), 2, 0);           // bottom arc, upper half
  add_edge(g, edge_fixed_u(g.faces[1].grid, 0), 1, 2);           // seam at theta = pi
  add_edge(g, edge_fixed_u(g.faces[2].grid, 0), 1, 2);           // seam at theta = 0
  add_edge(g, edge_fixed_v(g.faces[1].grid, kGridN - 1), 1, 3);  // top arc, lower half
  add_edge(g, edge_fixed_v(g.faces[2].grid, kGridN - 1), 2, 3);  // top arc, upper half

  refresh_boxes(g);
  DocumentLabels labels;
  labels.complexity = classify_complexity(4);
  labels.hull_planes = {0, 3};
  doc.labels = std::move(labels);
  return doc;
}

// ---------------------------------------------------------------- prisms

namespace {

std::vector<Vec3> polygon_vertices(int n, double circumradius, double phase) {
  std::vector<Vec3> vtx(n);
  for (int j = 0; j < n; ++j) {
    double a = phase + 2.0 * kPi * j / n;
    vtx[j] = {circumradius * std::cos(a), circumradius * std::sin(a), 0.0};
  }
  return vtx;
}

// A side is labeled a hull plane only when it sits exactly on the polygon's
// bounding box; the phase is nudged until no side is in the gray zone where
// the detector's tolerance could disagree with the label.
struct SideHull {
  std::vector<char> on_hull;
  bool ambiguous = false;
};

SideHull classify_sides(const std::vector<Vec3>& vtx, double height) {
  int n = static_cast<int>(vtx.size());
  Vec3 lo = vtx[0], hi = vtx[0];
  for (const Vec3& p : vtx) {
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  double max_extent = std::max({hi[0] - lo[0], hi[1] - lo[1], height});
  double scale = 2.0 / max_extent;  // normalized units per model unit
  SideHull result;
  result.on_hull.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    const Vec3& a = vtx[j];
    const Vec3& b = vtx[(j + 1) % n];
    double best = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 2; ++axis)
      for (double plane : {lo[axis], hi[axis]})
        best = std::min(best,
                        std::max(std::abs(a[axis] - plane), std::abs(b[axis] - plane)) * scale);
    if (best <= 0.25 * kDefaultGapTol)
      result.on_hull[j] = 1;
    else if (best < 4.0 * kDefaultGapTol)
      result.ambiguous = true;
  }
  return result;
}

std::vector<Vec3> hull_safe_polygon(int n, double circumradius, double height, double phase,
                                    SideHull& hull) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Vec3> vtx = polygon_vertices(n, circumradius, phase);
    hull = classify_sides(vtx, height);
    if (!hull.ambiguous) return vtx;
    phase += 0.0137;
  }
  gen_error("could not find a hull-unambiguous polygon phase");
}

FaceGrid side_quad(const Vec3& a, const Vec3& b, double z0, double z1) {
  FaceGrid grid;
  for (int u = 0; u < kGridN; ++u)
    for (int v = 0; v < kGridN; ++v) {
      Vec3 p = lerp3(a, b, step(u));
      p[2] = lerp(z0, z1, step(v));
      grid.at(u, v) = p;
    }
  grid.orientation_out = true;  // ccw side direction x +z = outward
  return grid;
}

}  // namespace

BRepDocument gen_prism(int sides, double circumradius, double height, double phase) {
  if (sides < 3 || sides > 30) gen_error("whole-cap prism supports 3..30 sides");
  if (!(circumradius > 0.0) || !(height > 0.0)) gen_error("prism dimensions must be positive");
  const int n = sides;
  SideHull hull;
  std::vector<Vec3> vtx = hull_safe_polygon(n, circumradius, height, phase, hull);

  // Cap boundary ring: 124 rim stops distributed over the n sides so every
  // corner is a ring stop; extra stops subdivide sides collinearly, which
  // keeps the side edges (sampled independently from the side quads) exactly
  // on the cap boundary.
  std::array<Vec3, kRim + 1> ring;
  {
    int pos = 0;
    for (int j = 0; j < n; ++j) {
      int begin = (kRim * j) / n, end = (kRim * (j + 1)) / n;
      for (int t = begin; t < end; ++t)
        ring[pos++] = lerp3(vtx[j], vtx[(j + 1) % n],
                            static_cast<double>(t - begin) / (end - begin));
    }
    ring[kRim] = vtx[0];
  }

  BRepDocument doc;
  BRepGraph& g = doc.graph;
  for (int top = 0; top < 2; ++top) {
    BRepFace cap;
    double z = top ? height : 0.0;
    std::array<Vec3, kRim + 1> level = ring;
    for (Vec3& p : level) p.z = z;
    cap.grid = coons_cap(level);
    cap.grid.orientation_out = top == 1;  // ccw rim: du x dv = +z
    g.faces.push_back(std::move(cap));
  }
  for (int j = 0; j < n; ++j) {
    BRepFace side;
    side.grid = side_quad(vtx[j], vtx[(j + 1) % n], 0.0, height);
    g.faces.push_back(std::move(side));
  }

  for (int j = 0; j < n; ++j) add_edge(g, edge_fixed_v(g.faces[2 + j].grid, 0), 2 + j, 0);
  for (int j = 0; j < n; ++j)
    add_edge(g, edge_fixed_v(g.faces[2 + j].grid, kGridN - 1), 2 + j, 1);
  for (int j = 0; j < n; ++j)
    add_edge(g, edge_fixed_u(g.faces[2 + j].grid, 0), 2 + j, 2 + (j + n - 1) % n);

  refresh_boxes(g);
  DocumentLabels labels;
  labels.complexity = classify_complexity(n + 2);
  labels.hull_planes = {0, 1};
  for (int j = 0; j < n; ++j)
    if (hull.on_hull[j]) labels.hull_planes.push_back(2 + j);
  std::sort(labels.hull_planes.begin(), labels.hull_planes.end());
  doc.labels = std::move(labels);
  return doc;
}

BRepDocument gen_pie_prism(int sides, double circumradius, double height, double phase) {
  if (sides < 3 || sides > 33) gen_error("pie prism supports 3..33 sides");
  if (!(circumradius > 0.0) || !(height > 0.0)) gen_error("prism dimensions must be positive");
  const int n = sides;
  SideHull hull;
  std::vector<Vec3> vtx = hull_safe_polygon(n, circumradius, height, phase, hull);

  BRepDocument doc;
  BRepGraph& g = doc.graph;
  for (int j = 0; j < n; ++j) {
    BRepFace side;
    side.grid = side_quad(vtx[j], vtx[(j + 1) % n], 0.0, height);
    g.faces.push_back(std::move(side));
  }
  // Cap slices: u radial from the axis, v along the chord vtx_j -> vtx_j+1.
  for (int top = 0; top < 2; ++top) {
    double z = top ? height : 0.0;
    for (int j = 0; j < n; ++j) {
      BRepFace slice;
      for (int u = 0; u < kGridN; ++u)
        for (int v = 0; v < kGridN; ++v) {
          Vec3 chord = lerp3(vtx[j], vtx[(j + 1) % n], step(v));
          Vec3 p = lerp3({0, 0, 0}, chord, step(u));
          p[2] = z;
          slice.grid.at(u, v) = p;
        }
      slice.grid.orientation_out = top == 1;
      g.faces.push_back(std::move(slice));
    }
  }
  auto bottom_slice = [&](int j) { return n + j; };
  auto top_slice = [&](int j) { return 2 * n + j; };

  for (int j = 0; j < n; ++j)
    add_edge(g, edge_fixed_v(g.faces[j].grid, 0), j, bottom_slice(j));
  for (int j = 0; j < n; ++j)
    add_edge(g, edge_fixed_v(g.faces[bottom_slice(j)].grid, kGridN - 1), bottom_slice(j),
             bottom_slice((j + 1) % n));
  for (int j = 0; j < n; ++j)
    add_edge(g, edge_fixed_v(g.faces[j].grid, kGridN - 1), j, top_slice(j));
  for (int j = 0; j < n; ++j)
    add_edge(g, edge_fixed_v(g.faces[top_slice(j)].grid, kGridN - 1), top_slice(j),
             top_slice((j + 1) % n));
  for (int j = 0; j < n; ++j)
    add_edge(g, edge_fixed_u(g.faces[j].grid, 0), j, (j + n - 1) % n);

  refresh_boxes(g);
  DocumentLabels labels;
  labels.complexity = classify_complexity(3 * n);
  for (int j = 0; j < n; ++j)
    if (hull.on_hull[j]) labels.hull_planes.push_back(j);
  for (int j = 0; j < 2 * n; ++j) labels.hull_planes.push_back(n + j);
  std::sort(labels.hull_planes.begin(), labels.hull_planes.end());
  doc.labels = std::move(labels);
  return doc;
}

// ---------------------------------------------------------------- plate

BRepDocument gen_plate_with_holes(double width, double depth, double thickness,
                                  const std::vector<HoleSpec>& holes) {
  if (!(width > 0.0) || !(depth > 0.0) || !(thickness > 0.0))
    gen_error("plate dimensions must be positive");

  const double margin = 0.02 * std::min(width, depth);
  std::vector<double> reach(holes.size());
  for (size_t k = 0; k < holes.size(); ++k) {
    const HoleSpec& h = holes[k];
    if (!(h.radius > 0.0)) gen_error("hole radius must be positive");
    double tilt = h.tilt_deg * kPi / 180.0;
    if (std::abs(tilt) >= 0.45 * kPi) gen_error("hole tilt too steep");
    // Footprint: ellipse stretched by the tilt plus the lateral sweep of the
    // axis across the plate thickness.
    reach[k] = h.radius / std::cos(tilt) + 0.5 * thickness * std::abs(std::tan(tilt));
    if (std::abs(h.cx) + reach[k] > width / 2 - margin ||
        std::abs(h.cy) + reach[k] > depth / 2 - margin)
      gen_error("hole " + std::to_string(k) + " crosses the plate rim");
  }
  for (size_t a = 0; a < holes.size(); ++a)
    for (size_t b = a + 1; b < holes.size(); ++b) {
      double dx = holes[a].cx - holes[b].cx, dy = holes[a].cy - holes[b].cy;
      if (std::sqrt(dx * dx + dy * dy) < reach[a] + reach[b] + margin)
        gen_error("holes " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
    }

  BRepDocument doc;
  BRepGraph& g = doc.graph;
  build_box(g, {-width / 2, -depth / 2, 0.0}, {width / 2, depth / 2, thickness});
  DocumentLabels labels;
  labels.hull_planes = {0, 1, 2, 3, 4, 5};

  constexpr int kBottomFace = 4, kTopFace = 5;  // box ids: z axis, min/max side
  for (const HoleSpec& h : holes) {
    double tilt = h.tilt_deg * kPi / 180.0;
    int wall_a = static_cast<int>(g.faces.size());
    int wall_b = wall_a + 1;
    for (int half = 0; half < 2; ++half) {
      BRepFace wall;
      if (h.tilt_deg == 0.0) {
        for (int u = 0; u < kGridN; ++u)
          for (int v = 0; v < kGridN; ++v) {
            double theta = (half ? 0.0 : kPi) + kPi * step(u);
            wall.grid.at(u, v) = {h.cx + h.radius * std::cos(theta),
                                  h.cy + h.radius * std::sin(theta),
                                  lerp(0.0, thickness, step(v))};
          }
      } else {
        double az = h.tilt_azimuth_deg * kPi / 180.0;
        Vec3 d = {std::sin(tilt) * std::cos(az), std::sin(tilt) * std::sin(az), std::cos(tilt)};
        Vec3 e1 = normalized(cross({0.0, 0.0, 1.0}, d));
        Vec3 e2 = cross(d, e1);
        Vec3 c0 = {h.cx, h.cy, thickness / 2};
        for (int u = 0; u < kGridN; ++u) {
          double theta = (half ? 0.0 : kPi) + kPi * step(u);
          Vec3 p = c0 + (e1 * std::cos(theta) + e2 * std::sin(theta)) * h.radius;
          // Ruling through p along d, clipped to the z slab [0, thickness].
          double s0 = (0.0 - p[2]) / d[2];
          double s1 = (thickness - p[2]) / d[2];
          Vec3 q0 = p + d * s0, q1 = p + d * s1;
          for (int v = 0; v < kGridN; ++v) wall.grid.at(u, v) = lerp3(q0, q1, step(v));
        }
      }
      // Geometric normal points away from the hole axis; the material is
      // outside the cylinder, so outward-of-material is the opposite way.
      wall.grid.orientation_out = false;
      g.faces.push_back(std::move(wall));
    }
    add_edge(g, edge_fixed_v(g.faces[wall_a].grid, 0), wall_a, kBottomFace);
    add_edge(g, edge_fixed_v(g.faces[wall_b].grid, 0), wall_b, kBottomFace);
    add_edge(g, edge_fixed_u(g.faces[wall_a].grid, 0), wall_a, wall_b);
    add_edge(g, edge_fixed_u(g.faces[wall_b].grid, 0), wall_a, wall_b);
    add_edge(g, edge_fixed_v(g.faces[wall_a].grid, kGridN - 1), wall_a, kTopFace);
    add_edge(g, edge_fixed_v(g.faces[wall_b].grid, kGridN - 1), wall_b, kTopFace);
    if (h.tilt_deg == 0.0) {
      labels.bolt_holes.push_back(wall_a);
      labels.bolt_holes.push_back(wall_b);
    }
  }

  refresh_boxes(g);
  labels.complexity = classify_complexity(static_cast<int>(g.faces.size()));
  doc.labels = std::move(labels);
  return doc;
}

// ---------------------------------------------------------------- corpus

namespace {

double unit_draw(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

int draw_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

BRepDocument corpus_plate(std::mt19937_64& rng, int hole_count) {
  double width = 2.0 + 2.0 * unit_draw(rng);
  double depth = 2.0 + 2.0 * unit_draw(rng);
  double thickness = 0.2 + 0.3 * unit_draw(rng);
  int grid = 1;
  while (grid * grid < hole_count) ++grid;
  double cell_w = (width - 0.2) / grid, cell_d = (depth - 0.2) / grid;
  std::vector<HoleSpec> holes;
  for (int i = 0; i < hole_count; ++i) {
    int cx = i % grid, cy = i / grid;
    HoleSpec h;
    double jitter_x = (unit_draw(rng) - 0.5) * 0.2 * cell_w;
    double jitter_y = (unit_draw(rng) - 0.5) * 0.2 * cell_d;
    h.cx = -width / 2 + 0.1 + (cx + 0.5) * cell_w + jitter_x;
    h.cy = -depth / 2 + 0.1 + (cy + 0.5) * cell_d + jitter_y;
    h.radius = (0.10 + 0.10 * unit_draw(rng)) * std::min(cell_w, cell_d);
    holes.push_back(h);
  }
  return gen_plate_with_holes(width, depth, thickness, holes);
}

// Prism height is kept at or below the polygon width: the solid then
// normalizes by the polygon, and the hull/non-hull deviation levels of the
// sides stay far from the detector's tolerance for every n in range, so the
// phase search always succeeds.
double prism_height(std::mt19937_64& rng, int n, double circumradius) {
  return (0.3 + 0.7 * unit_draw(rng)) * 2.0 * circumradius * std::cos(kPi / n);
}

BRepDocument corpus_solid(int index, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1)));
  rng.discard(8);
  const int cls = index % 3;  // round-robin easy/medium/hard
  if (cls == 0) {
    switch (rng() % 4) {
      case 0: {
        Vec3 extents = {0.5 + 1.5 * unit_draw(rng), 0.5 + 1.5 * unit_draw(rng),
                        0.5 + 1.5 * unit_draw(rng)};
        Vec3 center = {unit_draw(rng) - 0.5, unit_draw(rng) - 0.5, unit_draw(rng) - 0.5};
        return gen_box(extents, center);
      }
      case 1: {
        double r = 0.2 + 0.3 * unit_draw(rng);
        return gen_cylinder(r, r * (6.2 + 3.8 * unit_draw(rng)));
      }
      case 2: {
        int n = draw_int(rng, 3, 22);
        double r = 0.5 + 0.5 * unit_draw(rng);
        return gen_prism(n, r, prism_height(rng, n, r));
      }
      default:
        return corpus_plate(rng, draw_int(rng, 1, 9));
    }
  }
  if (cls == 1) {
    switch (rng() % 3) {
      case 0: {
        int n = draw_int(rng, 23, 30);
        double r = 0.5 + 0.5 * unit_draw(rng);
        return gen_prism(n, r, prism_height(rng, n, r));
      }
      case 1: {
        int n = draw_int(rng, 13, 16);
        double r = 0.5 + 0.5 * unit_draw(rng);
        return gen_pie_prism(n, r, prism_height(rng, n, r));
      }
      default:
        return corpus_plate(rng, draw_int(rng, 10, 22));
    }
  }
  if (rng() % 2 == 0) {
    int n = draw_int(rng, 17, 33);
    double r = 0.5 + 0.5 * unit_draw(rng);
    return gen_pie_prism(n, r, prism_height(rng, n, r));
  }
  return corpus_plate(rng, draw_int(rng, 23, 47));
}

}  // namespace

std::vector<BRepDocument> generate_corpus(int count, std::uint64_t seed) {
  if (count < 0) gen_error("corpus count must be nonnegative");
  std::vector<BRepDocument> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(corpus_solid(i, seed));
  return out;
}

// ---------------------------------------------------------------- defects

BRepGraph with_missing_face(const BRepGraph& g, int face) {
  if (face < 0 || face >= static_cast<int>(g.faces.size()))
    throw BrepError(ErrorKind::ContractViolation, "face id out of range");
  BRepGraph out;
  out.orientation_known = g.orientation_known;
  out.faces.reserve(g.faces.size() - 1);
  for (int f = 0; f < static_cast<int>(g.faces.size()); ++f)
    if (f != face) out.faces.push_back(g.faces[f]);
  auto remap = [&](int f) {
    if (f == face) return kNoFace;
    return f > face && f != kNoFace ? f - 1 : f;
  };
  out.edges = g.edges;
  for (BRepEdge& e : out.edges) {
    e.face_a = remap(e.face_a);
    e.face_b = remap(e.face_b);
  }
  return out;
}

BRepGraph with_translated_face(const BRepGraph& g, int face, const Vec3& delta) {
  if (face < 0 || face >= static_cast<int>(g.faces.size()))
    throw BrepError(ErrorKind::ContractViolation, "face id out of range");
  BRepGraph out = g;
  for (Vec3& p : out.faces[face].grid.points) p = p + delta;
  out.faces[face].box = compute_aabb(out.faces[face].grid);
  return out;
}

BRepGraph with_dangling_edge(const BRepGraph& g, int edge) {
  if (edge < 0 || edge >= static_cast<int>(g.edges.size()))
    throw BrepError(ErrorKind::ContractViolation, "edge id out of range");
  BRepGraph out = g;
  BRepEdge extra = g.edges[edge];
  extra.face_b = kNoFace;
  out.edges.push_back(std::move(extra));
  return out;
}

BRepGraph induced_subgraph(const BRepGraph& g, const std::vector<int>& faces) {
  std::vector<int> selection = faces;
  std::sort(selection.begin(), selection.end());
  if (std::adjacent_find(selection.begin(), selection.end()) != selection.end())
    throw BrepError(ErrorKind::ContractViolation, "duplicate face selection");
  std::vector<int> remap(g.faces.size(), kNoFace);
  BRepGraph out;
  out.orientation_known = g.orientation_known;
  for (int f : selection) {
    if (f < 0 || f >= static_cast<int>(g.faces.size()))
      throw BrepError(ErrorKind::ContractViolation, "face selection out of range");
    remap[f] = static_cast<int>(out.faces.size());
    out.faces.push_back(g.faces[f]);
  }
  for (const BRepEdge& e : g.edges) {
    int a = e.face_a == kNoFace ? kNoFace : remap[e.face_a];
    int b = e.face_b == kNoFace ? kNoFace : remap[e.face_b];
    if (a == kNoFace && b == kNoFace) continue;
    BRepEdge kept = e;
    kept.face_a = a;
    kept.face_b = b;
    out.edges.push_back(std::move(kept));
  }
  return out;
}

}  // namespace breptok
