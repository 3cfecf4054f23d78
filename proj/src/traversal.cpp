#include "breptok/traversal.hpp"

#include <algorithm>
#include <limits>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "breptok/vocabulary.hpp"

namespace breptok {

int TraversalPlan::face_count() const {
  int n = 0;
  for (const auto& level : levels) n += static_cast<int>(level.size());
  return n;
}

int TraversalPlan::edge_entry_count() const {
  int n = 0;
  for (const auto& level : levels)
    for (const FaceEntry& fe : level) n += static_cast<int>(fe.edges.size());
  return n;
}

std::array<int, 6> quantized_box_key(const Aabb& box) {
  return {quantize_coord(box.min_corner.x), quantize_coord(box.min_corner.y),
          quantize_coord(box.min_corner.z), quantize_coord(box.max_corner.x),
          quantize_coord(box.max_corner.y), quantize_coord(box.max_corner.z)};
}

int pick_start_face(const BRepGraph& g) {
  if (g.faces.empty()) throw BrepError(ErrorKind::ContractViolation, "empty graph has no start face");
  // Bottom-leftmost: z, then y, then x of the quantized min corner; exact
  // min-corner ties fall through to the max corner, then the face id.
  auto key = [&](int f) {
    const Aabb& b = g.faces[f].box;
    return std::tuple(quantize_coord(b.min_corner.z), quantize_coord(b.min_corner.y),
                      quantize_coord(b.min_corner.x), quantize_coord(b.max_corner.z),
                      quantize_coord(b.max_corner.y), quantize_coord(b.max_corner.x), f);
  };
  int best = 0;
  for (int f = 1; f < static_cast<int>(g.faces.size()); ++f)
    if (key(f) < key(best)) best = f;
  return best;
}

std::vector<int> window_base(const std::vector<std::vector<int>>& level_faces, int l, int stride) {
  if (stride != 1 && stride != 2)
    throw BrepError(ErrorKind::ContractViolation, "window stride must be 1 or 2");
  std::vector<int> base;
  if (stride == 1) {
    if (l >= 1) base = level_faces[l - 1];
  } else {
    // Tags reset on entering even levels; the window keeps every face since
    // the level before the reset, so references to l-1 stay resolvable.
    if (l % 2 == 1) {
      if (l >= 2) base = level_faces[l - 2];
      base.insert(base.end(), level_faces[l - 1].begin(), level_faces[l - 1].end());
    } else if (l >= 2) {
      base = level_faces[l - 1];
    }
  }
  return base;
}

std::vector<std::vector<int>> build_windows(const std::vector<std::vector<int>>& level_faces,
                                            int stride) {
  std::vector<std::vector<int>> windows(level_faces.size());
  for (size_t l = 0; l < level_faces.size(); ++l) {
    std::vector<int>& w = windows[l];
    w = window_base(level_faces, static_cast<int>(l), stride);
    w.insert(w.end(), level_faces[l].begin(), level_faces[l].end());
  }
  return windows;
}

TraversalPlan bft_levels(const BRepGraph& g, const std::vector<int>& start,
                         const BftOptions& options) {
  const int n_faces = static_cast<int>(g.faces.size());
  if (start.empty()) throw BrepError(ErrorKind::ContractViolation, "empty start set");
  for (int f : start)
    if (f < 0 || f >= n_faces)
      throw BrepError(ErrorKind::ContractViolation, "start face id out of range");

  // Adjacency over fully assigned edges; dangling edges only contribute T_u
  // entries and never drive the traversal.
  std::vector<std::vector<std::pair<int, int>>> adj(n_faces);  // (edge, other)
  std::vector<std::vector<int>> dangling(n_faces);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const BRepEdge& edge = g.edges[e];
    if (edge.unassigned()) {
      if (!options.autocomplete)
        throw BrepError(ErrorKind::ModeViolation,
                        "edge with unassigned endpoint outside autocomplete mode", {e});
      if (edge.known_face() == kNoFace)
        throw BrepError(ErrorKind::ContractViolation, "edge with no endpoints", {e});
      dangling[edge.known_face()].push_back(e);
      continue;
    }
    if (edge.face_a >= n_faces || edge.face_b >= n_faces)
      throw BrepError(ErrorKind::ContractViolation, "edge references missing face", {e});
    adj[edge.face_a].emplace_back(e, edge.face_b);
    if (edge.face_b != edge.face_a) adj[edge.face_b].emplace_back(e, edge.face_a);
  }

  auto face_key = [&](int f) {
    return std::pair(quantized_box_key(g.faces[f].box), f);
  };
  auto sort_level = [&](std::vector<int>& faces) {
    std::sort(faces.begin(), faces.end(),
              [&](int a, int b) { return face_key(a) < face_key(b); });
  };

  // Phase 1: levels and within-level order.
  std::vector<int> level_of(n_faces, -1), pos_of(n_faces, -1);
  std::vector<std::vector<int>> level_faces;
  std::vector<int> current = start;
  {
    std::unordered_set<int> dedup(start.begin(), start.end());
    if (dedup.size() != start.size())
      throw BrepError(ErrorKind::ContractViolation, "duplicate face in start set");
  }
  sort_level(current);
  while (!current.empty()) {
    int l = static_cast<int>(level_faces.size());
    for (size_t i = 0; i < current.size(); ++i) {
      level_of[current[i]] = l;
      pos_of[current[i]] = static_cast<int>(i);
    }
    level_faces.push_back(current);
    std::vector<int> next;
    for (int f : current)
      for (auto [e, o] : adj[f])
        if (level_of[o] < 0) {
          level_of[o] = std::numeric_limits<int>::max();  // queued marker
          next.push_back(o);
        }
    sort_level(next);
    current = std::move(next);
  }

  std::vector<int> orphans;
  for (int f = 0; f < n_faces; ++f)
    if (pos_of[f] < 0) orphans.push_back(f);
  if (!orphans.empty())
    throw BrepError(ErrorKind::UnreachableFaces,
                    std::to_string(orphans.size()) + " face(s) unreachable from the start set",
                    orphans);

  TraversalPlan plan;
  plan.window_stride = options.window_stride;
  plan.windows = build_windows(level_faces, options.window_stride);

  // Phase 2: face entries with edges grouped under the later-visited face.
  const auto& level0 = level_faces[0];
  std::unordered_set<int> level0_set(level0.begin(), level0.end());
  std::vector<char> emitted(g.edges.size(), 0);
  plan.levels.resize(level_faces.size());
  for (size_t l = 0; l < level_faces.size(); ++l) {
    std::unordered_map<int, int> window_pos;
    for (size_t i = 0; i < plan.windows[l].size(); ++i) window_pos[plan.windows[l][i]] = static_cast<int>(i);
    for (int f : level_faces[l]) {
      FaceEntry entry;
      entry.face = f;
      for (auto [e, o] : adj[f]) {
        if (emitted[e]) continue;
        bool other_earlier = level_of[o] < static_cast<int>(l) ||
                             (level_of[o] == static_cast<int>(l) && pos_of[o] <= pos_of[f]);
        if (other_earlier) {
          emitted[e] = 1;
          entry.edges.push_back({e, o, false, -1});
        } else if (l == 0 && options.autocomplete && !level0_set.count(o)) {
          // Emitted again, concretely, when its other face is visited.
          entry.edges.push_back({e, o, true, -1});
        }
      }
      if (l == 0 && options.autocomplete)
        for (int e : dangling[f]) entry.edges.push_back({e, kNoFace, true, -1});
      std::sort(entry.edges.begin(), entry.edges.end(), [&](const EdgeEntry& a, const EdgeEntry& b) {
        int ta = a.unassigned ? std::numeric_limits<int>::max() : window_pos.at(a.other_face);
        int tb = b.unassigned ? std::numeric_limits<int>::max() : window_pos.at(b.other_face);
        if (ta != tb) return ta < tb;
        auto ka = quantized_box_key(g.edges[a.edge].box);
        auto kb = quantized_box_key(g.edges[b.edge].box);
        if (ka != kb) return ka < kb;
        return a.edge < b.edge;
      });
      plan.levels[l].push_back(std::move(entry));
    }
  }
  return plan;
}

TraversalPlan assign_window_tags(TraversalPlan plan) {
  for (size_t l = 0; l < plan.levels.size(); ++l) {
    const std::vector<int>& window = plan.windows[l];
    if (static_cast<int>(window.size()) > kWindowCapacity)
      throw BrepError(ErrorKind::WindowCapacity,
                      "window at level " + std::to_string(l) + " holds " +
                          std::to_string(window.size()) + " faces (capacity " +
                          std::to_string(kWindowCapacity) + ")");
    std::unordered_map<int, int> window_pos;
    for (size_t i = 0; i < window.size(); ++i) window_pos[window[i]] = static_cast<int>(i);
    for (FaceEntry& fe : plan.levels[l])
      for (EdgeEntry& ee : fe.edges) {
        if (ee.unassigned) {
          ee.ref_tag = -1;
          continue;
        }
        auto it = window_pos.find(ee.other_face);
        if (it == window_pos.end())
          throw BrepError(ErrorKind::DanglingReference,
                          "referenced face not in the active window", {ee.edge});
        ee.ref_tag = it->second;
      }
  }
  return plan;
}

std::vector<EdgeIncidence> resolve_tags(const TraversalPlan& plan, bool allow_unassigned) {
  std::vector<EdgeIncidence> out;
  for (size_t l = 0; l < plan.levels.size(); ++l) {
    const std::vector<int>& window = plan.windows[l];
    for (const FaceEntry& fe : plan.levels[l])
      for (const EdgeEntry& ee : fe.edges) {
        if (ee.unassigned) {
          if (!allow_unassigned)
            throw BrepError(ErrorKind::ModeViolation, "T_u reference outside autocomplete mode",
                            {ee.edge});
          out.push_back({ee.edge, fe.face, kNoFace});
          continue;
        }
        if (ee.ref_tag < 0 || ee.ref_tag >= static_cast<int>(window.size()))
          throw BrepError(ErrorKind::DanglingReference,
                          "tag T" + std::to_string(ee.ref_tag) + " outside a window of " +
                              std::to_string(window.size()) + " faces",
                          {ee.edge});
        out.push_back({ee.edge, fe.face, window[ee.ref_tag]});
      }
  }
  return out;
}

}  // namespace breptok
