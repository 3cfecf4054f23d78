#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "breptok/graph.hpp"

namespace breptok {

using PointSet = std::vector<Vec3>;

// Area-weighted random surface sampling, deterministic given the seed (raw
// mt19937_64 draws mapped to [0,1) explicitly, so results are
// platform-independent).  The solid is normalized into [-1,1]^3 first.
// Throws DegenerateGeometry when the total surface area is zero.
PointSet sample_surface_points(const BRepGraph& g, int n = 2000, std::uint64_t seed = 0);

// Symmetric squared chamfer: mean_a min_b |a-b|^2 + mean_b min_a |a-b|^2.
double chamfer_distance(const PointSet& a, const PointSet& b);

struct DistributionMetrics {
  double cov = 0.0;  // % of ref sets that are some gen set's nearest neighbor
  double mmd = 0.0;  // mean over ref of min-over-gen chamfer, x 10^2
  double jsd = 0.0;  // Jensen-Shannon divergence of 32^3 occupancy, x 10^2
};

// Pairwise chamfer fan-out runs on worker threads; the report is identical
// regardless of thread count.  Nearest-neighbor ties resolve to the smallest
// index.  Throws ContractViolation when either list is empty.
DistributionMetrics compute_cov_mmd_jsd(const std::vector<PointSet>& gen,
                                        const std::vector<PointSet>& ref);

struct NoveltyMetrics {
  double novel = 0.0;   // % of gen hashes absent from train
  double unique = 0.0;  // % of gen hashes occurring once within gen
};

NoveltyMetrics novel_unique(const std::vector<BRepGraph>& gen,
                            const std::vector<BRepGraph>& train);

// Order-independent solid fingerprint: every face-grid coordinate quantized
// to 4 bits over [-1,1] (after solid normalization), per-face FNV-1a hashes
// sorted, combined with the face and edge counts.
std::uint64_t quantized_solid_hash(const BRepGraph& g);

// Aggregate report the CLI assembles from the pieces above plus validity.
struct MetricsReport {
  double cov = 0.0;
  double mmd = 0.0;
  double jsd = 0.0;
  double novel = -1.0;   // negative: not computed (no train set given)
  double unique = 0.0;
  double valid = 0.0;

  std::string to_text() const;
  std::string to_json() const;
};

}  // namespace breptok
