#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"

#include "breptok/generators.hpp"
#include "breptok/metrics.hpp"

using namespace breptok;

namespace {

BRepGraph square_faces(const std::vector<double>& side_lengths) {
  // Coplanar squares side by side; areas scale with side^2.
  BRepGraph g;
  double x0 = 0.0;
  for (double s : side_lengths) {
    BRepFace f;
    for (int u = 0; u < kGridN; ++u)
      for (int v = 0; v < kGridN; ++v)
        f.grid.at(u, v) = {x0 + s * u / 31.0, s * v / 31.0, 0.0};
    g.faces.push_back(f);
    x0 += s + 0.5;
  }
  refresh_boxes(g);
  return g;
}

// Chamfer oracle with the same accumulation order as the library: sum over a
// in order of min over b, averaged, plus the mirrored term.
double chamfer_oracle(const PointSet& a, const PointSet& b) {
  auto one_way = [](const PointSet& from, const PointSet& to) {
    double sum = 0.0;
    for (const Vec3& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec3& q : to) best = std::min(best, squared_norm(p - q));
      sum += best;
    }
    return sum / double(from.size());
  };
  return one_way(a, b) + one_way(b, a);
}

}  // namespace

TEST_CASE("surface samples land on the face and are seed-deterministic") {
  BRepGraph g = square_faces({1.0});
  PointSet pts = sample_surface_points(g, 4, 7);
  REQUIRE(pts.size() == 4);
  for (const Vec3& p : pts) {
    // Normalized solid: the square spans [-1,1]^2 at z = 0.
    CHECK(p.x >= -1.0);
    CHECK(p.x <= 1.0);
    CHECK(p.y >= -1.0);
    CHECK(p.y <= 1.0);
    CHECK(p.z == 0.0);
  }
  PointSet again = sample_surface_points(g, 4, 7);
  REQUIRE(again.size() == 4);
  for (size_t i = 0; i < 4; ++i) CHECK(pts[i] == again[i]);
  PointSet other = sample_surface_points(g, 4, 8);
  bool all_same = true;
  for (size_t i = 0; i < 4; ++i) all_same = all_same && (pts[i] == other[i]);
  CHECK_FALSE(all_same);
}

TEST_CASE("sampling weight follows face area") {
  // Two squares with side ratio 1 : sqrt(3) -> area ratio 1 : 3.
  BRepGraph g = square_faces({1.0, std::sqrt(3.0)});
  PointSet pts = sample_surface_points(g, 4000, 11);
  // After normalization the larger square occupies x > some split; count by
  // which half of the normalized x range each sample falls into.  The two
  // squares are disjoint in x, so classify by nearest face box.
  Aabb box0 = compute_aabb(g.faces[0].grid);
  Aabb box1 = compute_aabb(g.faces[1].grid);
  UnitCubeMap m = unit_cube_map(solid_aabb(g));
  double split = 0.5 * (m.apply(box0.max_corner).x + m.apply(box1.min_corner).x);
  int big = 0;
  for (const Vec3& p : pts) big += (p.x > split);
  CHECK(big >= 2900);
  CHECK(big <= 3100);
}

TEST_CASE("sampling a zero-area solid fails loudly") {
  BRepGraph g;
  BRepFace f;
  for (Vec3& p : f.grid.points) p = {0.5, 0.5, 0.5};
  g.faces.push_back(f);
  refresh_boxes(g);
  CHECK_THROWS_AS((void)sample_surface_points(g, 16, 0), BrepError);
}

TEST_CASE("chamfer distance matches the brute-force oracle exactly") {
  std::mt19937_64 rng(51);
  auto draw = [&]() { return (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  for (int trial = 0; trial < 5; ++trial) {
    PointSet a, b;
    for (int i = 0; i < 64; ++i) a.push_back({draw(), draw(), draw()});
    for (int i = 0; i < 48; ++i) b.push_back({draw(), draw(), draw()});
    CHECK(chamfer_distance(a, b) == chamfer_oracle(a, b));
    CHECK(chamfer_distance(a, a) == 0.0);
    CHECK(chamfer_distance(a, b) == chamfer_distance(b, a));
  }
}

TEST_CASE("identical generation and reference sets score perfectly") {
  std::vector<PointSet> sets;
  for (int k = 0; k < 5; ++k) {
    BRepGraph g = square_faces({1.0 + 0.2 * k});
    sets.push_back(sample_surface_points(g, 64, 100 + k));
  }
  DistributionMetrics m = compute_cov_mmd_jsd(sets, sets);
  CHECK(std::abs(m.cov - 100.0) < 1e-12);
  CHECK(std::abs(m.mmd) < 1e-12);
  CHECK(std::abs(m.jsd) < 1e-12);
}

TEST_CASE("nearest-neighbor ties resolve to the smallest reference index") {
  BRepGraph g = square_faces({1.0});
  PointSet s = sample_surface_points(g, 32, 3);
  std::vector<PointSet> gen{s, s};
  std::vector<PointSet> ref{s, s};
  // Both gen sets tie between the two identical refs and must pick ref 0, so
  // only half the reference pool is covered.
  DistributionMetrics m = compute_cov_mmd_jsd(gen, ref);
  CHECK(std::abs(m.cov - 50.0) < 1e-12);
  CHECK(std::abs(m.mmd) < 1e-12);
}

TEST_CASE("distribution shift shows up in the occupancy divergence") {
  std::vector<PointSet> gen, ref;
  for (int k = 0; k < 3; ++k) {
    gen.push_back(sample_surface_points(gen_box({1, 1, 1}).graph, 256, k));
    ref.push_back(sample_surface_points(gen_cylinder(0.4, 2.5).graph, 256, k));
  }
  DistributionMetrics m = compute_cov_mmd_jsd(gen, ref);
  CHECK(m.jsd > 0.0);
  CHECK(m.mmd > 0.0);
}

TEST_CASE("distribution metrics reject empty inputs") {
  std::vector<PointSet> some{PointSet{{0, 0, 0}}};
  CHECK_THROWS_AS((void)compute_cov_mmd_jsd({}, some), BrepError);
  CHECK_THROWS_AS((void)compute_cov_mmd_jsd(some, {}), BrepError);
}

TEST_CASE("novelty counts hashes absent from training") {
  BRepGraph box = gen_box({1, 2, 3}).graph;
  BRepGraph box_copy = box;
  BRepGraph cyl = gen_cylinder(0.5, 3.0).graph;
  BRepGraph prism = gen_prism(5, 0.8, 1.0).graph;
  std::vector<BRepGraph> gen{box, box_copy, cyl, prism};
  std::vector<BRepGraph> train{cyl};
  NoveltyMetrics m = novel_unique(gen, train);
  // box, box_copy, prism are novel (3/4); only cyl and prism hash once (2/4).
  CHECK(std::abs(m.novel - 75.0) < 1e-12);
  CHECK(std::abs(m.unique - 50.0) < 1e-12);
}

TEST_CASE("all-duplicate generations have zero uniqueness") {
  BRepGraph box = gen_box({1, 1, 2}).graph;
  std::vector<BRepGraph> gen{box, box, box};
  NoveltyMetrics m = novel_unique(gen, {});
  CHECK(m.unique == 0.0);
  CHECK(m.novel == 100.0);  // empty training set: everything is novel
}

TEST_CASE("the solid hash ignores face order and tiny jitter") {
  BRepGraph g = gen_box({2, 1, 1}).graph;
  std::uint64_t base = quantized_solid_hash(g);

  BRepGraph permuted = g;
  std::swap(permuted.faces[2], permuted.faces[5]);
  for (BRepEdge& e : permuted.edges) {
    auto remap = [](int f) { return f == 2 ? 5 : f == 5 ? 2 : f; };
    e.face_a = remap(e.face_a);
    e.face_b = remap(e.face_b);
  }
  CHECK(quantized_solid_hash(permuted) == base);

  BRepGraph jittered = g;
  // Interior point of face 0, off every 4-bit bin edge; the solid box is
  // pinned by other points, so normalization is unchanged.
  jittered.faces[0].grid.at(10, 15).y += 1e-6;
  refresh_boxes(jittered);
  CHECK(quantized_solid_hash(jittered) == base);

  BRepGraph moved = g;
  moved.faces[0].grid.at(10, 15).y += 0.3;
  refresh_boxes(moved);
  CHECK(quantized_solid_hash(moved) != base);
}

TEST_CASE("the solid hash separates the corpus families") {
  CHECK(quantized_solid_hash(gen_box({1, 1, 1}).graph) !=
        quantized_solid_hash(gen_cylinder(0.5, 3.0).graph));
  CHECK(quantized_solid_hash(gen_prism(5, 0.8, 1.0).graph) !=
        quantized_solid_hash(gen_prism(6, 0.8, 1.0).graph));
}

TEST_CASE("metrics report renders both text and json") {
  MetricsReport r;
  r.cov = 50.0;
  r.mmd = 1.25;
  r.jsd = 3.5;
  r.novel = 100.0;
  r.unique = 99.0;
  r.valid = 98.0;
  std::string text = r.to_text();
  CHECK(text.find("cov") != std::string::npos);
  std::string json = r.to_json();
  CHECK(json.find("\"cov\"") != std::string::npos);
  CHECK(json.find("\"valid\"") != std::string::npos);
}
