#pragma once

#include <string>
#include <vector>

#include "breptok/graph.hpp"

namespace breptok {

// One coordinate bin in normalized units: geometric validity is judged at the
// same resolution the tokenizer can represent.
inline constexpr double kDefaultGapTol = 2.0 / 1024.0;

struct IncidenceViolation {
  int edge = -1;
  int incident_faces = 0;  // assigned, in-range endpoints (0, 1, or 2)
};

struct GapViolation {
  int edge = -1;
  int face = -1;
  double max_gap = 0.0;
};

// Kernel-free watertightness proxy.  All distances are measured after the
// solid is normalized into [-1,1]^3, so gap_tol is in normalized units.
struct ValidityReport {
  bool is_manifold_closed = false;
  std::vector<IncidenceViolation> edge_incidence_violations;
  std::vector<GapViolation> geometric_gap_violations;
  std::vector<int> dangling_edges;
  double max_gap = 0.0;  // worst edge-to-face distance seen, violating or not

  std::string summary() const;
};

// Checks that (a) every edge has exactly two in-range incident faces,
// (b) every edge point lies within gap_tol of each incident face's grid
// surface, (c) no edge endpoint is unassigned.  is_manifold_closed is true
// iff all three lists are empty.
ValidityReport check_validity(const BRepGraph& g, double gap_tol = kDefaultGapTol);

// Distance from a point to the surface spanned by a face grid: every cell
// whose corners could beat the nearest-node distance (screened by the
// largest adjacent node step) is split into four triangles through the
// bilinear center and measured exactly.  Exact at grid nodes; between nodes
// the error is bounded by the cell's deviation from its triangulation.
double point_to_face_distance(const Vec3& p, const FaceGrid& grid);

// The screening radius: largest 3D distance between parameter-adjacent grid
// nodes.  The overload taking it lets batch callers hoist the computation.
double max_adjacent_step(const FaceGrid& grid);
double point_to_face_distance(const Vec3& p, const FaceGrid& grid, double h);

// Best-fit plane through a point set (centroid + smallest covariance
// eigenvector, 3x3 Jacobi).  max_deviation is the largest |(p-c)·n|.
struct PlaneFit {
  Vec3 centroid;
  Vec3 normal;  // unit length
  double max_deviation = 0.0;
};
PlaneFit fit_plane(const FaceGrid& grid);

// Faces that are planar within tol and lie within tol of one of the six
// axis-aligned bounding-box planes of the whole solid.  Evaluated in
// solid-normalized coordinates; ids ascending.
std::vector<int> detect_hull_planes(const BRepGraph& g, double tol = kDefaultGapTol);

struct BoltHoleReport {
  std::vector<int> faces;  // ascending ids
  // Orientation flags were missing, so detection was skipped rather than
  // guessing concavity from winding.
  bool skipped_no_orientation = false;
};

// Concave cylindrical faces (straight parallel rulings in one grid direction,
// circular cross-section, outward normal pointing toward the axis) whose axis
// is within axis_tol_deg of the normal of at least one adjacent planar face.
BoltHoleReport detect_bolt_holes(const BRepGraph& g, double axis_tol_deg = 5.0);

// Cylinder-side classification shared by detection and tests.
struct CylinderFit {
  bool is_cylinder = false;
  Vec3 axis;    // unit ruling direction
  Vec3 center;  // a point on the axis
  double radius = 0.0;
  bool concave_toward_axis = false;  // outward normal points at the axis
};
CylinderFit fit_cylinder(const FaceGrid& grid, bool orientation_out, double tol);

}  // namespace breptok
