#include "breptok/validity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "breptok/parallel.hpp"

namespace breptok {

namespace {

// Normalized copy when the solid has extent; degenerate inputs are checked in
// their own coordinates rather than rejected.
BRepGraph normalized_or_raw(const BRepGraph& g) {
  if (g.faces.empty() && g.edges.empty()) return g;
  Aabb box = solid_aabb(g);
  if (unit_cube_map(box).all_degenerate()) return g;
  return map_to_unit_cube(g, box);
}

double point_segment_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double denom = dot(ab, ab);
  double t = denom > 0.0 ? std::clamp(dot(p - a, ab) / denom, 0.0, 1.0) : 0.0;
  Vec3 q = a + ab * t;
  return squared_norm(p - q);
}

// Closest-point distance to triangle abc (Ericson, Real-Time Collision
// Detection 5.1.5), squared.
double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return squared_norm(ap);
  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return squared_norm(bp);
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    double t = d1 / (d1 - d3);
    return squared_norm(ap - ab * t);
  }
  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return squared_norm(cp);
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    double t = d2 / (d2 - d6);
    return squared_norm(ap - ac * t);
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return squared_norm(p - (b + (c - b) * t));
  }
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return squared_norm(p - (a + ab * v + ac * w));
}

}  // namespace

double max_adjacent_step(const FaceGrid& grid) {
  double step_sq = 0.0;
  for (int u = 0; u < kGridN; ++u)
    for (int v = 0; v < kGridN; ++v) {
      if (u + 1 < kGridN)
        step_sq = std::max(step_sq, squared_norm(grid.at(u, v) - grid.at(u + 1, v)));
      if (v + 1 < kGridN)
        step_sq = std::max(step_sq, squared_norm(grid.at(u, v) - grid.at(u, v + 1)));
    }
  return std::sqrt(step_sq);
}

// h must equal max_adjacent_step(grid); hoisted so repeated queries against
// the same face pay for it once.
double point_to_face_distance(const Vec3& p, const FaceGrid& grid, double h) {
  // Every node is scanned, then only cells that can possibly contain the
  // nearest surface point are triangulated.  The screen is sound: the cell
  // holding the true nearest point has all four corners within (cell
  // diameter) of it, and the diameter is at most twice the largest adjacent
  // node step h, so every such corner scores <= d_node_min + 2h.  Window
  // heuristics around the best node alone are wrong here: warped grids
  // (radial fans, collapsed apex rows) put the nearest cell arbitrarily far
  // from the nearest node in index space.
  double node_sq[kGridN][kGridN];
  double best = std::numeric_limits<double>::infinity();
  for (int u = 0; u < kGridN; ++u)
    for (int v = 0; v < kGridN; ++v) {
      node_sq[u][v] = squared_norm(p - grid.at(u, v));
      best = std::min(best, node_sq[u][v]);
    }
  if (best == 0.0) return 0.0;

  const double keep = std::sqrt(best) + 2.0 * h + 1e-12;
  const double keep_sq = keep * keep;
  bool cell[kGridN - 1][kGridN - 1] = {};
  for (int u = 0; u < kGridN; ++u)
    for (int v = 0; v < kGridN; ++v) {
      if (node_sq[u][v] > keep_sq) continue;
      for (int cu = std::max(0, u - 1); cu <= std::min(kGridN - 2, u); ++cu)
        for (int cv = std::max(0, v - 1); cv <= std::min(kGridN - 2, v); ++cv)
          cell[cu][cv] = true;
    }
  // Each candidate cell splits into four triangles through the bilinear
  // center (the corner average).
  for (int u = 0; u < kGridN - 1; ++u)
    for (int v = 0; v < kGridN - 1; ++v) {
      if (!cell[u][v]) continue;
      const Vec3& c00 = grid.at(u, v);
      const Vec3& c01 = grid.at(u, v + 1);
      const Vec3& c10 = grid.at(u + 1, v);
      const Vec3& c11 = grid.at(u + 1, v + 1);
      Vec3 m = (c00 + c01 + c10 + c11) * 0.25;
      best = std::min(best, point_triangle_distance_sq(p, c00, c01, m));
      best = std::min(best, point_triangle_distance_sq(p, c01, c11, m));
      best = std::min(best, point_triangle_distance_sq(p, c11, c10, m));
      best = std::min(best, point_triangle_distance_sq(p, c10, c00, m));
    }
  return std::sqrt(best);
}

double point_to_face_distance(const Vec3& p, const FaceGrid& grid) {
  return point_to_face_distance(p, grid, max_adjacent_step(grid));
}

ValidityReport check_validity(const BRepGraph& g, double gap_tol) {
  ValidityReport report;
  BRepGraph n = normalized_or_raw(g);
  const int n_faces = static_cast<int>(n.faces.size());

  for (size_t e = 0; e < n.edges.size(); ++e) {
    const BRepEdge& edge = n.edges[e];
    int incident = 0;
    bool dangling = false;
    for (int f : {edge.face_a, edge.face_b}) {
      if (f == kNoFace)
        dangling = true;
      else if (f >= 0 && f < n_faces)
        ++incident;
    }
    if (incident != 2)
      report.edge_incidence_violations.push_back({static_cast<int>(e), incident});
    if (dangling) report.dangling_edges.push_back(static_cast<int>(e));
  }

  // Gap pass: every edge point must sit on each incident face's grid surface.
  struct PairGap {
    int edge, face;
    double max_gap;
  };
  std::vector<std::pair<int, int>> pairs;
  for (size_t e = 0; e < n.edges.size(); ++e)
    for (int f : {n.edges[e].face_a, n.edges[e].face_b})
      if (f >= 0 && f < n_faces) pairs.emplace_back(static_cast<int>(e), f);
  std::vector<double> face_step(n_faces);
  parallel_for(n_faces, [&](size_t f) { face_step[f] = max_adjacent_step(n.faces[f].grid); });
  std::vector<PairGap> gaps(pairs.size());
  parallel_for(pairs.size(), [&](size_t i) {
    auto [e, f] = pairs[i];
    double worst = 0.0;
    for (const Vec3& p : n.edges[e].grid.points)
      worst = std::max(worst, point_to_face_distance(p, n.faces[f].grid, face_step[f]));
    gaps[i] = {e, f, worst};
  });
  for (const PairGap& pg : gaps) {
    report.max_gap = std::max(report.max_gap, pg.max_gap);
    if (pg.max_gap > gap_tol)
      report.geometric_gap_violations.push_back({pg.edge, pg.face, pg.max_gap});
  }

  report.is_manifold_closed = report.edge_incidence_violations.empty() &&
                              report.geometric_gap_violations.empty() &&
                              report.dangling_edges.empty();
  return report;
}

std::string ValidityReport::summary() const {
  std::ostringstream os;
  os << (is_manifold_closed ? "valid: watertight by proxy checks" : "INVALID");
  os << "\n  incidence violations: " << edge_incidence_violations.size();
  for (const auto& v : edge_incidence_violations)
    os << "\n    edge " << v.edge << " has " << v.incident_faces << " incident face(s)";
  os << "\n  gap violations: " << geometric_gap_violations.size();
  for (const auto& v : geometric_gap_violations)
    os << "\n    edge " << v.edge << " vs face " << v.face << ": max gap " << v.max_gap;
  os << "\n  dangling edges: " << dangling_edges.size();
  for (int e : dangling_edges) os << "\n    edge " << e << " has an unassigned endpoint";
  os << "\n  worst gap: " << max_gap << "\n";
  return os.str();
}

namespace {

// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
// Returns eigenvalues ascending with matching column eigenvectors.
void jacobi_eigen(double a[3][3], double eval[3], double evec[3][3]) {
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off < 1e-300) break;
    for (int p = 0; p < 2; ++p)
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < 3; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
  int order[3] = {0, 1, 2};
  double d[3] = {a[0][0], a[1][1], a[2][2]};
  std::sort(order, order + 3, [&](int x, int y) { return d[x] < d[y]; });
  for (int i = 0; i < 3; ++i) {
    eval[i] = d[order[i]];
    for (int k = 0; k < 3; ++k) evec[k][i] = v[k][order[i]];
  }
}

}  // namespace

PlaneFit fit_plane(const FaceGrid& grid) {
  PlaneFit fit;
  Vec3 c{0, 0, 0};
  for (const Vec3& p : grid.points) c = c + p;
  c = c * (1.0 / static_cast<double>(grid.points.size()));
  double cov[3][3] = {};
  for (const Vec3& p : grid.points) {
    Vec3 d = p - c;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) cov[i][j] += d[i] * d[j];
  }
  double eval[3], evec[3][3];
  jacobi_eigen(cov, eval, evec);
  fit.centroid = c;
  fit.normal = normalized({evec[0][0], evec[1][0], evec[2][0]});
  for (const Vec3& p : grid.points)
    fit.max_deviation = std::max(fit.max_deviation, std::abs(dot(p - c, fit.normal)));
  return fit;
}

std::vector<int> detect_hull_planes(const BRepGraph& g, double tol) {
  std::vector<int> out;
  if (g.faces.empty()) return out;
  BRepGraph n = normalized_or_raw(g);
  Aabb box = solid_aabb(n);
  for (size_t f = 0; f < n.faces.size(); ++f) {
    const FaceGrid& grid = n.faces[f].grid;
    if (fit_plane(grid).max_deviation >= tol) continue;
    bool on_hull = false;
    for (int axis = 0; axis < 3 && !on_hull; ++axis)
      for (double plane : {box.min_corner[axis], box.max_corner[axis]}) {
        bool all_on = true;
        for (const Vec3& p : grid.points)
          if (std::abs(p[axis] - plane) > tol) {
            all_on = false;
            break;
          }
        if (all_on) {
          on_hull = true;
          break;
        }
      }
    if (on_hull) out.push_back(static_cast<int>(f));
  }
  return out;
}

namespace {

// Max deviation of the 32 points of one grid line from the segment joining
// its endpoints.
double line_straightness(const FaceGrid& g, int fixed, bool fixed_is_u) {
  const Vec3& a = fixed_is_u ? g.at(fixed, 0) : g.at(0, fixed);
  const Vec3& b = fixed_is_u ? g.at(fixed, kGridN - 1) : g.at(kGridN - 1, fixed);
  double worst = 0.0;
  for (int t = 0; t < kGridN; ++t) {
    const Vec3& p = fixed_is_u ? g.at(fixed, t) : g.at(t, fixed);
    worst = std::max(worst, std::sqrt(point_segment_distance_sq(p, a, b)));
  }
  return worst;
}

}  // namespace

CylinderFit fit_cylinder(const FaceGrid& grid, bool orientation_out, double tol) {
  CylinderFit fit;
  // Ruling direction: the grid direction whose 32 lines are all straight and
  // mutually parallel.  v-lines run along varying u (fixed v), u-lines along
  // varying v.
  for (int dir = 0; dir < 2; ++dir) {
    const bool ruling_fixed_is_u = dir == 1;  // dir 0: fixed v, vary u
    bool straight = true;
    Vec3 axis{0, 0, 0};
    for (int k = 0; k < kGridN && straight; ++k) {
      if (line_straightness(grid, k, ruling_fixed_is_u) > tol) straight = false;
    }
    if (!straight) continue;
    for (int k = 0; k < kGridN; ++k) {
      Vec3 d = ruling_fixed_is_u ? grid.at(k, kGridN - 1) - grid.at(k, 0)
                                 : grid.at(kGridN - 1, k) - grid.at(0, k);
      axis = axis + d;
    }
    double len = norm(axis);
    if (len < kDegenerateExtent) continue;
    axis = axis * (1.0 / len);
    bool parallel = true;
    for (int k = 0; k < kGridN && parallel; ++k) {
      Vec3 d = ruling_fixed_is_u ? grid.at(k, kGridN - 1) - grid.at(k, 0)
                                 : grid.at(kGridN - 1, k) - grid.at(0, k);
      double dl = norm(d);
      if (dl < kDegenerateExtent || norm(d * (1.0 / dl) - axis) > 1e-6) parallel = false;
    }
    if (!parallel) continue;

    // Orthonormal basis of the cross-section plane.
    Vec3 e1 = std::abs(axis[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    e1 = normalized(e1 - axis * dot(e1, axis));
    Vec3 e2 = cross(axis, e1);

    // Kasa circle fit on the projected points: minimize ||A [a b c]^T - y||
    // with rows (2x, 2y, 1), y = x^2 + y^2.
    double sxx = 0, sxy = 0, sx1 = 0, syy = 0, sy1 = 0, s11 = 0;
    double bx = 0, by = 0, b1 = 0;
    Vec3 origin = grid.at(0, 0);
    for (const Vec3& p : grid.points) {
      Vec3 d = p - origin;
      double x = dot(d, e1), y = dot(d, e2);
      double r2 = x * x + y * y;
      sxx += 4 * x * x;
      sxy += 4 * x * y;
      sx1 += 2 * x;
      syy += 4 * y * y;
      sy1 += 2 * y;
      s11 += 1;
      bx += 2 * x * r2;
      by += 2 * y * r2;
      b1 += r2;
    }
    // Solve the 3x3 normal equations by Gaussian elimination.
    double m[3][4] = {{sxx, sxy, sx1, bx}, {sxy, syy, sy1, by}, {sx1, sy1, s11, b1}};
    bool singular = false;
    for (int col = 0; col < 3 && !singular; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r)
        if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
      if (std::abs(m[piv][col]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(m[col], m[piv]);
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        double k = m[r][col] / m[col][col];
        for (int cc = col; cc < 4; ++cc) m[r][cc] -= k * m[col][cc];
      }
    }
    if (singular) continue;  // collinear cross-section: planar, not a cylinder
    double ca = m[0][3] / m[0][0], cb = m[1][3] / m[1][1], cc = m[2][3] / m[2][2];
    double radius2 = cc + ca * ca + cb * cb;
    if (radius2 <= 0.0) continue;
    double radius = std::sqrt(radius2);
    double worst = 0.0;
    for (const Vec3& p : grid.points) {
      Vec3 d = p - origin;
      double x = dot(d, e1) - ca, y = dot(d, e2) - cb;
      worst = std::max(worst, std::abs(std::sqrt(x * x + y * y) - radius));
    }
    if (worst > tol) continue;
    // Planes also pass straightness both ways but fail the circle residual
    // (collinear sections hit the singular branch above).

    fit.is_cylinder = true;
    fit.axis = axis;
    fit.center = origin + e1 * ca + e2 * cb;
    fit.radius = radius;

    // Concavity from the grid's geometric normal at an interior point.
    int mid = kGridN / 2;
    Vec3 du = grid.at(mid + 1, mid) - grid.at(mid - 1, mid);
    Vec3 dv = grid.at(mid, mid + 1) - grid.at(mid, mid - 1);
    Vec3 geom_n = cross(du, dv);
    double gl = norm(geom_n);
    if (gl >= kDegenerateExtent) {
      Vec3 outward = geom_n * ((orientation_out ? 1.0 : -1.0) / gl);
      const Vec3& q = grid.at(mid, mid);
      Vec3 radial = (q - fit.center) - fit.axis * dot(q - fit.center, fit.axis);
      fit.concave_toward_axis = dot(outward, radial) < 0.0;
    }
    return fit;
  }
  return fit;
}

BoltHoleReport detect_bolt_holes(const BRepGraph& g, double axis_tol_deg) {
  BoltHoleReport report;
  if (!g.orientation_known) {
    report.skipped_no_orientation = true;
    return report;
  }
  if (g.faces.empty()) return report;
  BRepGraph n = normalized_or_raw(g);
  // Residual tolerance for classifying exact analytic grids; loose enough for
  // double noise, far below any real feature size.
  constexpr double kFitTol = 1e-4;

  const int n_faces = static_cast<int>(n.faces.size());
  std::vector<PlaneFit> planes(n.faces.size());
  std::vector<char> planar(n.faces.size(), 0);
  for (size_t f = 0; f < n.faces.size(); ++f) {
    planes[f] = fit_plane(n.faces[f].grid);
    planar[f] = planes[f].max_deviation < kFitTol;
  }
  std::vector<std::vector<int>> adjacent(n.faces.size());
  for (const BRepEdge& e : n.edges) {
    if (e.face_a < 0 || e.face_a >= n_faces || e.face_b < 0 || e.face_b >= n_faces) continue;
    adjacent[e.face_a].push_back(e.face_b);
    adjacent[e.face_b].push_back(e.face_a);
  }
  const double cos_tol = std::cos(axis_tol_deg * std::acos(-1.0) / 180.0);
  for (size_t f = 0; f < n.faces.size(); ++f) {
    if (planar[f]) continue;
    CylinderFit fit = fit_cylinder(n.faces[f].grid, n.faces[f].grid.orientation_out, kFitTol);
    if (!fit.is_cylinder || !fit.concave_toward_axis) continue;
    bool axis_matches = false;
    for (int nb : adjacent[f]) {
      if (!planar[nb]) continue;
      if (std::abs(dot(fit.axis, planes[nb].normal)) >= cos_tol) {
        axis_matches = true;
        break;
      }
    }
    if (axis_matches) report.faces.push_back(static_cast<int>(f));
  }
  return report;
}

}  // namespace breptok
