#pragma once

#include <optional>
#include <string>

#include "breptok/token_codec.hpp"

namespace breptok {

// Size guardrails: solids past these are refused unless the caller opts out.
// They bound worst-case window pressure (a level can hold at most every face)
// and keep tool runtime predictable on adversarial inputs.
inline constexpr int kMaxFaces = 100;
inline constexpr int kMaxEdges = 1000;

struct TokenizeOptions {
  std::optional<MetaClass> meta;  // emitted as a meta block when set
  int window_stride = 1;
  bool enforce_limits = true;
  int max_faces = kMaxFaces;
  int max_edges = kMaxEdges;
};

struct TokenizeResult {
  TokenStream tokens;
  TraversalPlan plan;    // tagged plan over the normalized graph
  BRepGraph normalized;  // the solid mapped into [-1,1]^3
  UnitCubeMap solid_map;
  EncodedCodes codes;
};

// Places the solid into [-1,1]^3 by its own bounding box.
BRepGraph normalize_solid(const BRepGraph& g);

// normalize -> traverse -> quantize -> serialize.  Throws BrepError:
// ContractViolation for empty graphs, unassigned edge endpoints, or solids
// over the guardrails; MalformedGeometry for non-finite coordinates;
// DegenerateGeometry for solids with no spatial extent.
TokenizeResult tokenize_graph(const BRepGraph& g, const TokenizeOptions& opts = {});

// Quantization bin half-width over [-1,1]: corner placement after a
// tokenize/detokenize roundtrip is off by at most this much.
inline constexpr double kPlacementTol = 1.0 / 1024.0;

struct RoundtripReport {
  bool topology_ok = false;   // same face count and edge endpoint multiset
  bool placement_ok = false;  // every box corner within kPlacementTol
  double max_placement_err = 0.0;  // normalized units
  int face_count = 0;
  int edge_count = 0;
  std::string message;  // first mismatch, empty when both checks hold

  bool ok() const { return topology_ok && placement_ok; }
};

// Tokenizes, decodes the stream back, and compares the reconstruction
// against the normalized input.
RoundtripReport roundtrip_graph(const BRepGraph& g, const TokenizeOptions& opts = {});

}  // namespace breptok
