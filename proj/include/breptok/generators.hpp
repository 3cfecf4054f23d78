#pragma once

#include <cstdint>
#include <vector>

#include "breptok/document.hpp"

namespace breptok {

// Synthetic solids with exact analytic grids.  Every edge grid is copied
// verbatim from a face boundary row/column, so shared boundaries agree
// bit-for-bit and the solids pass the gap check by construction.  Labels
// carry construction ground truth (hull planes, bolt-hole walls, complexity).

// Axis-aligned box: 6 faces (ids axis*2+side, side 0=min), 12 edges.
BRepDocument gen_box(const Vec3& extents, const Vec3& center = {0, 0, 0});

// Seam-split cylinder, axis +z from z=0 to z=height: face 0 bottom disc,
// 1 half-wall theta in [pi,2pi], 2 half-wall theta in [0,pi], 3 top disc;
// edges: bottom arcs of 1 and 2, the two wall seams (parallel pair), top
// arcs.  Requires height >= 6*radius: the disc rim is sampled at a different
// angular rate than the wall arcs, and the taller aspect keeps that
// resampling error under the default gap tolerance.
BRepDocument gen_cylinder(double radius, double height);

// Regular n-gon prism, whole caps (sides <= 30): face 0 bottom cap, 1 top
// cap, 2..n+1 side quads; 3n edges.  The cap boundary ring allocates its 31
// intervals side-by-side so every polygon corner is a ring node and the ring
// equals the polygon exactly.  phase rotates the polygon; it is nudged
// deterministically until every side is unambiguously on or off the hull.
BRepDocument gen_prism(int sides, double circumradius, double height, double phase = 0.37);

// n-gon prism with pie-sliced caps (39..99 faces for sides 13..33): ids
// 0..n-1 side quads, n..2n-1 bottom slices, 2n..3n-1 top slices; 5n edges.
// Every face is an exact planar patch, so arbitrarily large face counts stay
// watertight at grid resolution.
BRepDocument gen_pie_prism(int sides, double circumradius, double height, double phase = 0.37);

struct HoleSpec {
  double cx = 0.0, cy = 0.0;  // axis position on the plate
  double radius = 0.1;
  double tilt_deg = 0.0;          // axis tilt from +z
  double tilt_azimuth_deg = 0.0;  // tilt direction in the xy plane
};

// Rectangular plate (width x depth x thickness, centered at the origin in x/y,
// z in [0, thickness]) with cylindrical through-holes.  Faces: 0..5 the box
// planes (top and bottom grids span the full rectangle; the holes live in the
// incidence structure, not as trims), then per hole two half-walls.  Edges:
// the 12 box edges, then per hole {bottom arc A, bottom arc B, seam A, seam B,
// top arc A, top arc B}.  Untilted holes are labeled bolt holes; tilted ones
// are not.  Overlapping holes or holes crossing the rim raise GeneratorError.
BRepDocument gen_plate_with_holes(double width, double depth, double thickness,
                                  const std::vector<HoleSpec>& holes);

// Deterministic labeled corpus stratified over Easy/Medium/Hard (round-robin)
// and shape families within each class.  Every solid is generated from
// seed+index only.
std::vector<BRepDocument> generate_corpus(int count, std::uint64_t seed);

// Defect injectors for validity testing.
// Removes the face and unassigns its edge endpoints (incidence count drops).
BRepGraph with_missing_face(const BRepGraph& g, int face);
// Translates one face's grid; its edges stay put, opening a gap.
BRepGraph with_translated_face(const BRepGraph& g, int face, const Vec3& delta);
// Duplicates an edge with one endpoint unassigned.
BRepGraph with_dangling_edge(const BRepGraph& g, int edge);

// Order-preserving induced subgraph on the selected faces: edges keep their
// relative order, endpoints outside the selection become unassigned.
// Duplicate or out-of-range selections raise ContractViolation.
BRepGraph induced_subgraph(const BRepGraph& g, const std::vector<int>& faces);

}  // namespace breptok
