#pragma once

#include <optional>
#include <string>

#include "breptok/fsq.hpp"
#include "breptok/traversal.hpp"
#include "breptok/vocabulary.hpp"

namespace breptok {

// Stream grammar (all decisions single-token lookahead):
//
//   stream     := SEQ_START meta? BREP_START level+ BREP_END SEQ_END
//   meta       := META_OPEN (EASY|MEDIUM|HARD|RANDOM) META_CLOSE
//   level      := face_block+ LEVEL_END
//   face_block := C^6 G_f^4 edge_block* FACE_END
//   edge_block := C^6 G_e^2 (T_k | T_u)
//
// C tokens quantize the primitive's box corners (x0,y0,z0,x1,y1,z1); G tokens
// are codebook indices; T_k references the k-th face of the level's window.

enum class MetaClass { Easy, Medium, Hard, Random };

// Easy < 25 faces, Medium 25..50, Hard > 50.
MetaClass classify_complexity(int face_count);
const char* meta_class_name(MetaClass m);
Token meta_class_token(MetaClass m);

struct EncodedCodes {
  std::vector<FaceLatent> faces;  // parallel to BRepGraph::faces
  std::vector<EdgeLatent> edges;  // parallel to BRepGraph::edges
};

// Latent codes for every primitive of a solid-space graph whose coordinates
// already live in [-1,1]^3 (each grid is canonicalized and normalized
// per-primitive before encoding).
EncodedCodes encode_latents(const BRepGraph& g, const LatentCodec& codec);

// Serializes a tagged plan.  g must be in solid-normalized coordinates; the
// plan must come from bft_levels + assign_window_tags over g.
TokenStream encode_stream(const BRepGraph& g, const TraversalPlan& plan,
                          std::optional<MetaClass> meta, const EncodedCodes& codes);

enum class DecodeMode { Unconditional, Autocomplete };

enum class ParseErrorKind {
  InvalidTokenId,
  UnexpectedToken,
  UnexpectedEnd,
  TrailingTokens,
  DanglingReference,
  ModeViolation,
};

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::UnexpectedToken;
  size_t position = 0;   // token index the error was detected at
  std::string expected;  // kinds the grammar allows here
  std::string message;

  std::string to_string() const;
};

struct DecodedFace {
  std::array<int, 6> box_bins{};
  std::array<int, kFaceCells> codes{};
  int level = 0;
  Aabb box;       // bin centers, corners swapped into min<=max if needed
  FaceGrid grid;  // codec reconstruction denormalized into box
};

struct DecodedEdge {
  std::array<int, 6> box_bins{};
  std::array<int, kEdgeCells> codes{};
  int level = 0;
  int face_a = kNoFace;  // the face whose block carried the edge
  int face_b = kNoFace;
  bool unassigned = false;
  Aabb box;
  EdgeGrid grid;
};

struct DecodedModel {
  std::vector<DecodedFace> faces;  // in stream (traversal) order
  std::vector<DecodedEdge> edges;
  std::optional<MetaClass> meta;
  std::vector<std::vector<int>> level_faces;  // face indices per level
};

struct DecodeResult {
  std::optional<DecodedModel> model;
  std::optional<ParseError> error;

  bool ok() const { return model.has_value(); }
};

// Single-pass total parser: any token sequence either decodes or produces a
// positioned ParseError; it never throws on stream content.
DecodeResult decode_stream(const TokenStream& tokens, DecodeMode mode,
                           const LatentCodec& codec = patch_codec(), int window_stride = 1);

BRepGraph to_graph(const DecodedModel& model);

struct ResolveReport {
  int unified = 0;
  std::vector<int> dangling_edges;  // decoded edge indices still unassigned
};

// Unifies each T_u edge with a later concrete re-emission that matches its
// quantized box and codebook tokens exactly; the duplicate emission is
// removed.  Unmatched T_u edges stay dangling and are reported.
ResolveReport resolve_unassigned(DecodedModel& model);

// Conditioning prefix: the user's partial graph becomes level 0 (box-sorted),
// edges between user faces carry concrete tags, edges with an unassigned
// endpoint carry T_u.  Coordinates are expressed relative to domain_box
// mapped onto [-1,1]^3.  The prefix ends right after level 0's LEVEL_END.
TokenStream encode_autocomplete_prefix(const BRepGraph& user, const Aabb& domain_box,
                                       const LatentCodec& codec = patch_codec());

// Full autocomplete-shaped stream over a complete solid: level 0 holds the
// given user faces (with T_u emissions for edges leaving the set), later
// levels re-emit those edges concretely.  This is the stream a well-behaved
// generator would produce from the prefix; used to exercise decode and
// resolve_unassigned.
TokenStream encode_autocomplete_stream(const BRepGraph& full, const std::vector<int>& user_faces,
                                       const Aabb& domain_box,
                                       const LatentCodec& codec = patch_codec());

// Grammar length: 2 + 3 (meta) + 1 + #levels + 11 * #faces + 9 * #edge
// emissions + 1.
size_t expected_stream_length(int levels, int faces, int edge_entries, bool meta);

}  // namespace breptok
