#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "doctest.h"

#include "breptok/generators.hpp"
#include "breptok/traversal.hpp"

using namespace breptok;

namespace {

// Test graphs only need faces distinguishable by their quantized boxes; a
// single off-grid point per face keeps construction cheap.
BRepGraph sparse_graph(const std::vector<Vec3>& face_anchors,
                       const std::vector<std::pair<int, int>>& edge_pairs) {
  BRepGraph g;
  for (const Vec3& a : face_anchors) {
    BRepFace f;
    for (int i = 0; i < kGridN * kGridN; ++i)
      f.grid.points[i] = a + Vec3{0.01, 0.01, 0.01} * (i / double(kGridN * kGridN));
    g.faces.push_back(f);
  }
  for (auto [a, b] : edge_pairs) {
    BRepEdge e;
    Vec3 pa = a >= 0 ? face_anchors[a] : Vec3{9, 9, 9};
    Vec3 pb = b >= 0 ? face_anchors[b] : Vec3{9, 9, 9};
    for (int i = 0; i < kGridN; ++i) {
      double t = i / 31.0;
      e.grid.points[i] = pa * (1.0 - t) + pb * t;
    }
    e.face_a = a;
    e.face_b = b;
    g.edges.push_back(e);
  }
  refresh_boxes(g);
  return g;
}

// Brute-force reference for the level structure alone: plain BFS over the
// face adjacency relation, levels as distance classes from the start set.
std::vector<std::set<int>> bfs_levels_oracle(const BRepGraph& g, const std::vector<int>& start) {
  std::vector<int> dist(g.faces.size(), -1);
  std::vector<int> frontier;
  for (int s : start) {
    dist[s] = 0;
    frontier.push_back(s);
  }
  std::vector<std::set<int>> levels;
  int d = 0;
  while (!frontier.empty()) {
    levels.emplace_back(frontier.begin(), frontier.end());
    std::vector<int> next;
    for (int f : frontier)
      for (const BRepEdge& e : g.edges) {
        if (e.unassigned()) continue;
        int other = e.face_a == f ? e.face_b : e.face_b == f ? e.face_a : kNoFace;
        if (other != kNoFace && dist[other] < 0) {
          dist[other] = d + 1;
          next.push_back(other);
        }
      }
    frontier = std::move(next);
    ++d;
  }
  return levels;
}

std::vector<std::vector<int>> level_faces_of(const TraversalPlan& plan) {
  std::vector<std::vector<int>> out;
  for (const auto& level : plan.levels) {
    std::vector<int> ids;
    for (const FaceEntry& fe : level) ids.push_back(fe.face);
    out.push_back(ids);
  }
  return out;
}

}  // namespace

TEST_CASE("a single face traverses as one level with no edges") {
  BRepGraph g = sparse_graph({{0, 0, 0}}, {});
  TraversalPlan plan = bft_levels(g, {pick_start_face(g)});
  REQUIRE(plan.levels.size() == 1);
  REQUIRE(plan.levels[0].size() == 1);
  CHECK(plan.levels[0][0].face == 0);
  CHECK(plan.levels[0][0].edges.empty());
  CHECK(plan.face_count() == 1);
  CHECK(plan.edge_entry_count() == 0);
}

TEST_CASE("box traversal has levels of size 1, 4, 1") {
  BRepGraph g = gen_box({2, 1, 1}).graph;
  TraversalPlan plan = bft_levels(g, {pick_start_face(g)});
  REQUIRE(plan.levels.size() == 3);
  CHECK(plan.levels[0].size() == 1);
  CHECK(plan.levels[1].size() == 4);
  CHECK(plan.levels[2].size() == 1);
  // Every edge appears exactly once, grouped under the later-visited face.
  CHECK(plan.edge_entry_count() == 12);
  CHECK(plan.levels[0][0].edges.empty());
  int mid_edges = 0;
  for (const FaceEntry& fe : plan.levels[1]) mid_edges += int(fe.edges.size());
  CHECK(mid_edges == 8);  // 4 up-edges + 4 ring edges within the level
  CHECK(plan.levels[2][0].edges.size() == 4);
}

TEST_CASE("levels match a brute-force breadth-first oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + int(rng() % 7);
    std::vector<Vec3> anchors;
    for (int i = 0; i < n; ++i)
      anchors.push_back({double(rng() % 97) / 7.0, double(rng() % 97) / 7.0,
                         double(rng() % 97) / 7.0});
    // Random spanning tree plus extra edges (parallel duplicates allowed).
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i < n; ++i) pairs.push_back({int(rng() % i), i});
    for (int k = int(rng() % 4); k > 0; --k) {
      int a = int(rng() % n), b = int(rng() % n);
      if (a != b) pairs.push_back({std::min(a, b), std::max(a, b)});
    }
    BRepGraph g = sparse_graph(anchors, pairs);
    int start = pick_start_face(g);
    TraversalPlan plan = bft_levels(g, {start});
    std::vector<std::set<int>> want = bfs_levels_oracle(g, {start});
    REQUIRE(plan.levels.size() == want.size());
    for (size_t l = 0; l < want.size(); ++l) {
      std::set<int> got;
      for (const FaceEntry& fe : plan.levels[l]) got.insert(fe.face);
      CHECK(got == want[l]);
    }
    // Each assigned edge appears exactly once across every entry.
    std::multiset<int> seen;
    for (const auto& level : plan.levels)
      for (const FaceEntry& fe : level)
        for (const EdgeEntry& ee : fe.edges) seen.insert(ee.edge);
    CHECK(seen.size() == g.edges.size());
    CHECK(std::set<int>(seen.begin(), seen.end()).size() == g.edges.size());
  }
}

TEST_CASE("start face is the bottom-leftmost quantized box") {
  // Oracle: argmin over (min z, min y, min x, max z, max y, max x) of the
  // quantized box, ties by id; anchors stay inside [-1,1] so bins differ.
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + int(rng() % 8);
    std::vector<Vec3> anchors;
    for (int i = 0; i < n; ++i)
      anchors.push_back({double(rng() % 33) / 16.0 - 1.0, double(rng() % 33) / 16.0 - 1.0,
                         double(rng() % 33) / 16.0 - 1.0});
    BRepGraph g = sparse_graph(anchors, {});
    auto zyx = [&](int f) {
      auto k = quantized_box_key(g.faces[f].box);  // (min xyz, max xyz)
      return std::array<int, 6>{k[2], k[1], k[0], k[5], k[4], k[3]};
    };
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (zyx(i) < zyx(best)) best = i;
    CHECK(pick_start_face(g) == best);
  }
}

TEST_CASE("within a level faces sort by quantized box ascending") {
  // Star: center at origin, leaves at distinct positions; all leaves are
  // level 1 and must appear sorted by their box keys (min x, then min y).
  std::vector<Vec3> anchors{
      {0, 0, 0}, {0.3, 0, 0}, {0.1, 0, 0}, {0.2, 0.5, 0}, {0.2, 0, 0}};
  std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  BRepGraph g = sparse_graph(anchors, pairs);
  TraversalPlan plan = bft_levels(g, {0});
  REQUIRE(plan.levels.size() == 2);
  std::vector<int> got;
  for (const FaceEntry& fe : plan.levels[1]) got.push_back(fe.face);
  CHECK(got == std::vector<int>{2, 4, 3, 1});
}

TEST_CASE("unreachable faces raise an error outside autocomplete") {
  BRepGraph g = sparse_graph({{0, 0, 0}, {1, 0, 0}, {5, 5, 5}}, {{0, 1}});
  CHECK_THROWS_AS((void)bft_levels(g, {0}), BrepError);
}

TEST_CASE("two connected faces put the edge under the later face with tag 0") {
  BRepGraph g = sparse_graph({{0, 0, 0}, {1, 0, 0}}, {{0, 1}});
  TraversalPlan plan = assign_window_tags(bft_levels(g, {0}));
  REQUIRE(plan.levels.size() == 2);
  const FaceEntry& f1 = plan.levels[1][0];
  REQUIRE(f1.edges.size() == 1);
  CHECK(f1.edges[0].other_face == 0);
  // Window at level 1 is [face 0, face 1]: the reference points at slot 0.
  CHECK(f1.edges[0].ref_tag == 0);
}

TEST_CASE("window tags resolve back to the original incidences") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + int(rng() % 7);
    std::vector<Vec3> anchors;
    for (int i = 0; i < n; ++i)
      anchors.push_back({double(rng() % 97) / 9.0, double(rng() % 97) / 9.0, 0.0});
    std::vector<std::pair<int, int>> pairs;
    for (int i = 1; i < n; ++i) pairs.push_back({int(rng() % i), i});
    if (n > 1) pairs.push_back(pairs.back());  // parallel edge
    BRepGraph g = sparse_graph(anchors, pairs);
    for (int stride : {1, 2}) {
      BftOptions opt;
      opt.window_stride = stride;
      TraversalPlan plan = assign_window_tags(bft_levels(g, {pick_start_face(g)}, opt));
      std::vector<EdgeIncidence> inc = resolve_tags(plan);
      REQUIRE(inc.size() == g.edges.size());
      std::multiset<std::pair<int, int>> want, got;
      for (const BRepEdge& e : g.edges)
        want.insert({std::min(e.face_a, e.face_b), std::max(e.face_a, e.face_b)});
      for (const EdgeIncidence& i : inc)
        got.insert({std::min(i.face_a, i.face_b), std::max(i.face_a, i.face_b)});
      CHECK(got == want);
    }
  }
}

TEST_CASE("windows concatenate the previous and current level at stride 1") {
  std::vector<std::vector<int>> level_faces{{4}, {1, 7}, {2, 3}, {5}};
  std::vector<std::vector<int>> w = build_windows(level_faces, 1);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == std::vector<int>{4});
  CHECK(w[1] == std::vector<int>{4, 1, 7});
  CHECK(w[2] == std::vector<int>{1, 7, 2, 3});
  CHECK(w[3] == std::vector<int>{2, 3, 5});
}

TEST_CASE("stride 2 windows retain the pre-reset level across pairs") {
  std::vector<std::vector<int>> level_faces{{4}, {1, 7}, {2, 3}, {5}, {6}};
  std::vector<std::vector<int>> w = build_windows(level_faces, 2);
  REQUIRE(w.size() == 5);
  // Pairs (0,1), (2,3), (4,...): each pair's window starts from the level
  // preceding it so cross-pair references stay resolvable.
  CHECK(w[0] == std::vector<int>{4});
  CHECK(w[1] == std::vector<int>{4, 1, 7});
  CHECK(w[2] == std::vector<int>{1, 7, 2, 3});
  CHECK(w[3] == std::vector<int>{1, 7, 2, 3, 5});
  CHECK(w[4] == std::vector<int>{5, 6});
}

TEST_CASE("window base matches the full window minus the current level") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    int n_levels = 1 + int(rng() % 6);
    std::vector<std::vector<int>> level_faces;
    int next_id = 0;
    for (int l = 0; l < n_levels; ++l) {
      std::vector<int> ids;
      for (int k = 1 + int(rng() % 3); k > 0; --k) ids.push_back(next_id++);
      level_faces.push_back(ids);
    }
    for (int stride : {1, 2}) {
      std::vector<std::vector<int>> w = build_windows(level_faces, stride);
      for (int l = 0; l < n_levels; ++l) {
        std::vector<int> base = window_base(level_faces, l, stride);
        std::vector<int> full = base;
        full.insert(full.end(), level_faces[l].begin(), level_faces[l].end());
        CHECK(full == w[l]);
      }
    }
  }
}

TEST_CASE("tags beyond the window raise a dangling reference error") {
  BRepGraph g = sparse_graph({{0, 0, 0}, {1, 0, 0}}, {{0, 1}});
  TraversalPlan plan = assign_window_tags(bft_levels(g, {0}));
  plan.levels[1][0].edges[0].ref_tag = 5;  // window only has 2 slots
  CHECK_THROWS_AS((void)resolve_tags(plan), BrepError);
}

TEST_CASE("unassigned entries resolve only when explicitly allowed") {
  // Both faces form the conditioning level; the dangling edge rides under its
  // known face as a T_u entry.
  BRepGraph g = sparse_graph({{0, 0, 0}, {1, 0, 0}}, {{0, 1}, {1, kNoFace}});
  BftOptions opt;
  opt.autocomplete = true;
  TraversalPlan plan = assign_window_tags(bft_levels(g, {0, 1}, opt));
  CHECK_THROWS_AS((void)resolve_tags(plan), BrepError);
  std::vector<EdgeIncidence> inc = resolve_tags(plan, true);
  REQUIRE(inc.size() == 2);
  int dangling = 0;
  for (const EdgeIncidence& i : inc) dangling += (i.face_b == kNoFace || i.face_a == kNoFace);
  CHECK(dangling == 1);
}

TEST_CASE("input edges with open endpoints are rejected outside autocomplete") {
  BRepGraph g = sparse_graph({{0, 0, 0}, {1, 0, 0}}, {{0, 1}, {1, kNoFace}});
  CHECK_THROWS_AS((void)bft_levels(g, {0}), BrepError);
}

TEST_CASE("edge entries within a face sort previous level first then by tag") {
  // Face 3 connects to 1 and 2 (level 1) and to 4 (same level 2).
  std::vector<Vec3> anchors{
      {0, 0, 0}, {0.4, 0, 0}, {0.8, 0, 0}, {0.4, 0.4, 0}, {0.8, 0.4, 0}};
  std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
  BRepGraph g = sparse_graph(anchors, pairs);
  TraversalPlan plan = assign_window_tags(bft_levels(g, {0}));
  std::vector<std::vector<int>> lf = level_faces_of(plan);
  REQUIRE(lf.size() == 3);
  CHECK(lf[0] == std::vector<int>{0});
  CHECK(lf[1] == std::vector<int>{1, 2});
  CHECK(lf[2] == std::vector<int>{3, 4});
  const FaceEntry& f3 = plan.levels[2][0];
  CHECK(f3.face == 3);
  REQUIRE(f3.edges.size() == 2);
  CHECK(f3.edges[0].other_face == 1);  // previous-level reference first
  CHECK(f3.edges[1].other_face == 2);
  const FaceEntry& f4 = plan.levels[2][1];
  REQUIRE(f4.edges.size() == 2);
  CHECK(f4.edges[0].other_face == 2);  // previous level
  CHECK(f4.edges[1].other_face == 3);  // then the same-level edge
  // Tags index the level-2 window [1, 2, 3, 4].
  CHECK(f3.edges[0].ref_tag == 0);
  CHECK(f3.edges[1].ref_tag == 1);
  CHECK(f4.edges[1].ref_tag == 2);
}

TEST_CASE("parallel edges under one face keep a deterministic order") {
  std::vector<Vec3> anchors{{0, 0, 0}, {1, 0, 0}};
  std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 1}, {0, 1}};
  BRepGraph g = sparse_graph(anchors, pairs);
  // Identical grids: the tie falls through to edge id.
  TraversalPlan plan = assign_window_tags(bft_levels(g, {0}));
  const FaceEntry& f1 = plan.levels[1][0];
  REQUIRE(f1.edges.size() == 3);
  CHECK(f1.edges[0].edge == 0);
  CHECK(f1.edges[1].edge == 1);
  CHECK(f1.edges[2].edge == 2);
}

TEST_CASE("window capacity overflows raise an error") {
  // 201 faces in one level blows the 200-slot window at tag assignment.
  std::vector<Vec3> anchors{{0, 0, 0}};
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= 201; ++i) {
    anchors.push_back({1.0 + i * 0.01, 0, 0});
    pairs.push_back({0, i});
  }
  BRepGraph g = sparse_graph(anchors, pairs);
  TraversalPlan plan = bft_levels(g, {0});
  REQUIRE(plan.levels.size() == 2);
  REQUIRE(plan.levels[1].size() == 201);
  CHECK_THROWS_AS((void)assign_window_tags(std::move(plan)), BrepError);
}
