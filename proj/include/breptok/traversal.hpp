#pragma once

#include <vector>

#include "breptok/graph.hpp"

namespace breptok {

// One edge emission inside a face entry.  other_face is the referenced
// (earlier-visited) endpoint; unassigned entries are T_u emissions whose
// second endpoint is unknown at this point of the stream.  ref_tag is the
// window position filled in by assign_window_tags (-1 before that, and for
// unassigned entries).
struct EdgeEntry {
  int edge = -1;
  int other_face = kNoFace;
  bool unassigned = false;
  int ref_tag = -1;
};

struct FaceEntry {
  int face = -1;
  std::vector<EdgeEntry> edges;
};

// Breadth-first levels with deterministic within-level and within-face order,
// plus the reference window (ordered face ids) active at each level.
struct TraversalPlan {
  std::vector<std::vector<FaceEntry>> levels;
  std::vector<std::vector<int>> windows;
  int window_stride = 1;

  int face_count() const;
  int edge_entry_count() const;
};

inline constexpr int kWindowCapacity = 200;

// The bottom-leftmost face: lexicographically smallest quantized box key
// (min z, min y, min x, then max z, max y, max x), ties broken by face id.
int pick_start_face(const BRepGraph& g);

struct BftOptions {
  // 1: the window covers levels l-1 and l, tags reset every level.
  // 2: tags reset every other level; the window additionally retains the
  //    level preceding the reset so references stay resolvable.
  int window_stride = 1;
  // Autocomplete: edges leaving level 0 are additionally emitted under their
  // level-0 face as unassigned (T_u) entries, and input edges with an
  // unassigned endpoint become T_u entries instead of errors.
  bool autocomplete = false;
};

// Breadth-first traversal by levels from the start set.  Within a level,
// faces sort ascending lexicographic on the quantized box (min corner, then
// max corner, then face id).  Each edge is grouped under the later-visited of
// its faces; a face entry lists previous-level edges first, then same-level
// edges, both ascending by referenced-face window position, parallel ties by
// quantized edge box then edge id.  T_u entries come last.
// Throws UnreachableFaces when some face is not connected to the start set.
TraversalPlan bft_levels(const BRepGraph& g, const std::vector<int>& start,
                         const BftOptions& options = {});

// Fills every edge entry's ref_tag with the position of its referenced face
// in the window active at that level.  Throws WindowCapacity when a window
// holds more than 200 faces.
TraversalPlan assign_window_tags(TraversalPlan plan);

struct EdgeIncidence {
  int edge = -1;
  int face_a = kNoFace;  // the face whose entry carried the edge
  int face_b = kNoFace;  // resolved from the reference tag
};

// Reconstructs edge endpoints from tags: the implicit endpoint is the entry's
// face, the explicit one is the tag lookup in the level's window.  Throws
// DanglingReference for tags outside the window and ModeViolation for T_u
// entries unless allow_unassigned.
std::vector<EdgeIncidence> resolve_tags(const TraversalPlan& plan, bool allow_unassigned = false);

// Window face lists per level for a given stride; exposed for the decoder,
// which rebuilds them from parsed levels.
std::vector<std::vector<int>> build_windows(const std::vector<std::vector<int>>& level_faces,
                                            int stride);

// The earlier-level portion of level l's window (the full window is this
// followed by level l itself).  level_faces needs entries only for levels
// before l, so the decoder can call it before parsing level l.
std::vector<int> window_base(const std::vector<std::vector<int>>& level_faces, int l, int stride);

// Quantized-box sort key used for deterministic face and edge ordering.
std::array<int, 6> quantized_box_key(const Aabb& box);

}  // namespace breptok
