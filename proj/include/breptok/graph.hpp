#pragma once

#include <vector>

#include "breptok/geometry.hpp"

namespace breptok {

// Marker for an edge endpoint that is not (yet) attached to a face.  Only
// autocomplete conditioning inputs may carry these.
inline constexpr int kNoFace = -1;

struct BRepFace {
  FaceGrid grid;
  Aabb box;
};

struct BRepEdge {
  EdgeGrid grid;
  Aabb box;
  int face_a = kNoFace;
  int face_b = kNoFace;

  bool unassigned() const { return face_a == kNoFace || face_b == kNoFace; }
  // The single known endpoint of a dangling edge.
  int known_face() const { return face_a == kNoFace ? face_b : face_a; }
};

// Face adjacency multigraph: faces are nodes, edges connect two faces.
// Parallel edges (two distinct edges joining the same face pair) are normal,
// e.g. the two seam edges of a split periodic surface.
struct BRepGraph {
  std::vector<BRepFace> faces;
  std::vector<BRepEdge> edges;
  // False when the producer had no orientation data; bolt-hole detection is
  // then skipped instead of guessing.
  bool orientation_known = true;
};

// Recomputes every per-primitive box from its grid.
void refresh_boxes(BRepGraph& g);

// Bounding box over every face and edge point of the solid.
Aabb solid_aabb(const BRepGraph& g);

// Training-style augmentation: rotate the whole solid by quarter_turns * 90
// degrees about the given axis (0=x, 1=y, 2=z).  Quarter turns permute and
// negate coordinates exactly, so grids stay bit-exact; boxes are recomputed.
BRepGraph rotate_quarter(const BRepGraph& g, int axis, int quarter_turns);

// Maps every point through unit_cube_map(domain_box) and recomputes the
// per-primitive boxes.  Topology and orientation flags are preserved.
// Throws DegenerateGeometry when domain_box has no usable extent.
BRepGraph map_to_unit_cube(const BRepGraph& g, const Aabb& domain_box);

}  // namespace breptok
