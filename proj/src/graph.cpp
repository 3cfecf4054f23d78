#include "breptok/graph.hpp"

namespace breptok {

void refresh_boxes(BRepGraph& g) {
  for (BRepFace& f : g.faces) f.box = compute_aabb(f.grid);
  for (BRepEdge& e : g.edges) e.box = compute_aabb(e.grid);
}

Aabb solid_aabb(const BRepGraph& g) {
  if (g.faces.empty() && g.edges.empty())
    throw BrepError(ErrorKind::MalformedGeometry, "empty graph has no bounding box");
  bool first = true;
  Aabb box{};
  auto add = [&](const Aabb& b) {
    if (first) {
      box = b;
      first = false;
    } else {
      box.expand(b);
    }
  };
  for (const BRepFace& f : g.faces) add(compute_aabb(f.grid));
  for (const BRepEdge& e : g.edges) add(compute_aabb(e.grid));
  return box;
}

namespace {

Vec3 rotate_point(const Vec3& p, int axis, int turns) {
  // One quarter turn about an axis maps the other two coordinates (a,b) to
  // (-b,a); exact in floating point.
  Vec3 q = p;
  int a = (axis + 1) % 3, b = (axis + 2) % 3;
  for (int t = 0; t < turns; ++t) {
    double va = q[a], vb = q[b];
    q[a] = -vb;
    q[b] = va;
  }
  return q;
}

}  // namespace

BRepGraph rotate_quarter(const BRepGraph& g, int axis, int quarter_turns) {
  if (axis < 0 || axis > 2)
    throw BrepError(ErrorKind::ContractViolation, "rotate_quarter: axis must be 0, 1, or 2");
  int turns = ((quarter_turns % 4) + 4) % 4;
  BRepGraph out = g;
  for (BRepFace& f : out.faces)
    for (Vec3& p : f.grid.points) p = rotate_point(p, axis, turns);
  for (BRepEdge& e : out.edges)
    for (Vec3& p : e.grid.points) p = rotate_point(p, axis, turns);
  refresh_boxes(out);
  return out;
}

BRepGraph map_to_unit_cube(const BRepGraph& g, const Aabb& domain_box) {
  UnitCubeMap map = unit_cube_map(domain_box);
  if (map.all_degenerate())
    throw BrepError(ErrorKind::DegenerateGeometry, "domain box has no extent");
  BRepGraph out = g;
  for (BRepFace& f : out.faces)
    for (Vec3& p : f.grid.points) p = map.apply(p);
  for (BRepEdge& e : out.edges)
    for (Vec3& p : e.grid.points) p = map.apply(p);
  refresh_boxes(out);
  return out;
}

}  // namespace breptok
