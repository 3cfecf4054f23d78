#include "breptok/token_codec.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace breptok {

MetaClass classify_complexity(int face_count) {
  if (face_count < 25) return MetaClass::Easy;
  if (face_count <= 50) return MetaClass::Medium;
  return MetaClass::Hard;
}

const char* meta_class_name(MetaClass m) {
  switch (m) {
    case MetaClass::Easy: return "easy";
    case MetaClass::Medium: return "medium";
    case MetaClass::Hard: return "hard";
    case MetaClass::Random: return "random";
  }
  return "?";
}

Token meta_class_token(MetaClass m) {
  switch (m) {
    case MetaClass::Easy: return kMetaEasy;
    case MetaClass::Medium: return kMetaMedium;
    case MetaClass::Hard: return kMetaHard;
    case MetaClass::Random: return kMetaRandom;
  }
  throw BrepError(ErrorKind::ContractViolation, "bad meta class");
}

EncodedCodes encode_latents(const BRepGraph& g, const LatentCodec& codec) {
  EncodedCodes out;
  out.faces.reserve(g.faces.size());
  out.edges.reserve(g.edges.size());
  for (const BRepFace& f : g.faces) out.faces.push_back(codec.encode_face(canonical_face(f.grid).grid));
  for (const BRepEdge& e : g.edges) out.edges.push_back(codec.encode_edge(canonical_edge(e.grid).grid));
  return out;
}

namespace {

void emit_box(TokenStream& s, const Aabb& box) {
  for (int i = 0; i < 3; ++i) s.push_back(static_cast<Token>(kCoordBase + quantize_coord(box.min_corner[i])));
  for (int i = 0; i < 3; ++i) s.push_back(static_cast<Token>(kCoordBase + quantize_coord(box.max_corner[i])));
}

void check_code(int c) {
  if (c < 0 || c >= kCodebookSize)
    throw BrepError(ErrorKind::ContractViolation, "codebook index out of range");
}

// Levels [0, level_limit) of the grammar body: face and edge blocks plus the
// LEVEL_END sentinels, no outer framing.
void emit_body(TokenStream& s, const BRepGraph& g, const TraversalPlan& plan,
               const EncodedCodes& codes, size_t level_limit) {
  if (codes.faces.size() != g.faces.size() || codes.edges.size() != g.edges.size())
    throw BrepError(ErrorKind::ContractViolation, "latent codes do not match the graph");
  for (size_t l = 0; l < level_limit; ++l) {
    const auto& level = plan.levels[l];
    if (level.empty()) throw BrepError(ErrorKind::ContractViolation, "empty traversal level");
    for (const FaceEntry& entry : level) {
      if (entry.face < 0 || entry.face >= static_cast<int>(g.faces.size()))
        throw BrepError(ErrorKind::ContractViolation, "plan references a face outside the graph");
      emit_box(s, g.faces[entry.face].box);
      for (int c : codes.faces[entry.face].codes) {
        check_code(c);
        s.push_back(static_cast<Token>(kFaceCodeBase + c));
      }
      for (const EdgeEntry& ee : entry.edges) {
        if (ee.edge < 0 || ee.edge >= static_cast<int>(g.edges.size()))
          throw BrepError(ErrorKind::ContractViolation, "plan references an edge outside the graph");
        emit_box(s, g.edges[ee.edge].box);
        for (int c : codes.edges[ee.edge].codes) {
          check_code(c);
          s.push_back(static_cast<Token>(kEdgeCodeBase + c));
        }
        if (ee.unassigned) {
          s.push_back(kRefUnassigned);
        } else {
          if (ee.ref_tag < 0 || ee.ref_tag >= kRefTagCount)
            throw BrepError(ErrorKind::ContractViolation,
                            "plan edge has no window tag; run assign_window_tags first");
          s.push_back(static_cast<Token>(kRefTagBase + ee.ref_tag));
        }
      }
      s.push_back(kFaceEnd);
    }
    s.push_back(kLevelEnd);
  }
}

}  // namespace

TokenStream encode_stream(const BRepGraph& g, const TraversalPlan& plan,
                          std::optional<MetaClass> meta, const EncodedCodes& codes) {
  if (plan.levels.empty())
    throw BrepError(ErrorKind::ContractViolation, "cannot encode an empty traversal plan");
  TokenStream s;
  s.reserve(expected_stream_length(static_cast<int>(plan.levels.size()), plan.face_count(),
                                   plan.edge_entry_count(), meta.has_value()));
  s.push_back(kSeqStart);
  if (meta) {
    s.push_back(kMetaOpen);
    s.push_back(meta_class_token(*meta));
    s.push_back(kMetaClose);
  }
  s.push_back(kBrepStart);
  emit_body(s, g, plan, codes, plan.levels.size());
  s.push_back(kBrepEnd);
  s.push_back(kSeqEnd);
  return s;
}

size_t expected_stream_length(int levels, int faces, int edge_entries, bool meta) {
  return 2 + (meta ? 3 : 0) + 2 + static_cast<size_t>(levels) + 11u * static_cast<size_t>(faces) +
         9u * static_cast<size_t>(edge_entries);
}

std::string ParseError::to_string() const {
  const char* k = "?";
  switch (kind) {
    case ParseErrorKind::InvalidTokenId: k = "invalid token id"; break;
    case ParseErrorKind::UnexpectedToken: k = "unexpected token"; break;
    case ParseErrorKind::UnexpectedEnd: k = "unexpected end of stream"; break;
    case ParseErrorKind::TrailingTokens: k = "trailing tokens"; break;
    case ParseErrorKind::DanglingReference: k = "dangling reference"; break;
    case ParseErrorKind::ModeViolation: k = "mode violation"; break;
  }
  std::ostringstream os;
  os << k << " at position " << position << ": " << message;
  if (!expected.empty()) os << " (expected " << expected << ")";
  return os.str();
}

namespace {

// Recursive-descent over the LL(1) grammar, made total: every branch either
// consumes tokens or sets error_ and unwinds via boolean returns.  No token is
// inspected twice, so runtime is linear in the stream length regardless of
// content.
class StreamParser {
 public:
  StreamParser(const TokenStream& toks, DecodeMode mode, const LatentCodec& codec, int stride)
      : toks_(toks), mode_(mode), codec_(codec), stride_(stride) {}

  DecodeResult run() {
    DecodeResult res;
    if (parse_stream()) {
      res.model = std::move(model_);
    } else {
      res.error = error_;
    }
    return res;
  }

 private:
  bool fail(ParseErrorKind kind, size_t position, std::string expected, std::string message) {
    error_ = ParseError{kind, position, std::move(expected), std::move(message)};
    return false;
  }

  // Kind of the next token; Invalid ids and end-of-stream become errors with
  // the caller's expectation string.
  bool peek(TokenKind& out, const std::string& expected) {
    if (pos_ >= toks_.size())
      return fail(ParseErrorKind::UnexpectedEnd, toks_.size(), expected,
                  "stream ended early");
    TokenKind k = classify_token(toks_[pos_]);
    if (k == TokenKind::Invalid)
      return fail(ParseErrorKind::InvalidTokenId, pos_, expected,
                  "token id " + std::to_string(toks_[pos_]) + " is outside the vocabulary");
    out = k;
    return true;
  }

  bool take(TokenKind want, Token& out) {
    std::string expected = token_kind_name(want);
    TokenKind k;
    if (!peek(k, expected)) return false;
    if (k != want)
      return fail(ParseErrorKind::UnexpectedToken, pos_, expected,
                  std::string("got ") + token_kind_name(k));
    out = toks_[pos_++];
    return true;
  }

  bool take(TokenKind want) {
    Token ignored;
    return take(want, ignored);
  }

  bool parse_stream() {
    if (!take(TokenKind::SeqStart)) return false;
    TokenKind k;
    if (!peek(k, "META_OPEN or BREP_START")) return false;
    if (k == TokenKind::MetaOpen) {
      ++pos_;
      Token cls;
      if (!take(TokenKind::MetaClass, cls)) return false;
      switch (cls) {
        case kMetaEasy: model_.meta = MetaClass::Easy; break;
        case kMetaMedium: model_.meta = MetaClass::Medium; break;
        case kMetaHard: model_.meta = MetaClass::Hard; break;
        default: model_.meta = MetaClass::Random; break;
      }
      if (!take(TokenKind::MetaClose)) return false;
    }
    if (!take(TokenKind::BrepStart)) return false;
    for (;;) {
      if (!parse_level()) return false;
      if (!peek(k, "coordinate bin or BREP_END")) return false;
      if (k == TokenKind::BrepEnd) {
        ++pos_;
        break;
      }
      if (k != TokenKind::Coord)
        return fail(ParseErrorKind::UnexpectedToken, pos_, "coordinate bin or BREP_END",
                    std::string("got ") + token_kind_name(k));
    }
    if (!take(TokenKind::SeqEnd)) return false;
    if (pos_ != toks_.size())
      return fail(ParseErrorKind::TrailingTokens, pos_, "end of stream",
                  std::to_string(toks_.size() - pos_) + " token(s) after SEQ_END");
    return true;
  }

  bool parse_level() {
    const int l = static_cast<int>(model_.level_faces.size());
    model_.level_faces.emplace_back();
    base_ = window_base(model_.level_faces, l, stride_);
    for (;;) {
      if (!parse_face_block(l)) return false;
      TokenKind k;
      if (!peek(k, "coordinate bin or LEVEL_END")) return false;
      if (k == TokenKind::LevelEnd) {
        ++pos_;
        return true;
      }
      if (k != TokenKind::Coord)
        return fail(ParseErrorKind::UnexpectedToken, pos_, "coordinate bin or LEVEL_END",
                    std::string("got ") + token_kind_name(k));
    }
  }

  bool read_box(std::array<int, 6>& bins, Aabb& box) {
    for (int i = 0; i < 6; ++i) {
      Token t;
      if (!take(TokenKind::Coord, t)) return false;
      bins[i] = static_cast<int>(t) - kCoordBase;
    }
    for (int i = 0; i < 3; ++i) {
      double lo = dequantize_coord(bins[i]);
      double hi = dequantize_coord(bins[i + 3]);
      if (lo > hi) std::swap(lo, hi);  // generated streams may invert corners
      box.min_corner[i] = lo;
      box.max_corner[i] = hi;
    }
    return true;
  }

  bool parse_face_block(int l) {
    DecodedFace face;
    face.level = l;
    if (!read_box(face.box_bins, face.box)) return false;
    for (int i = 0; i < kFaceCells; ++i) {
      Token t;
      if (!take(TokenKind::FaceCode, t)) return false;
      face.codes[i] = static_cast<int>(t) - kFaceCodeBase;
    }
    face.grid = denormalize(codec_.decode_face(face.codes), face.box);
    const int face_index = static_cast<int>(model_.faces.size());
    model_.faces.push_back(std::move(face));
    model_.level_faces[l].push_back(face_index);
    for (;;) {
      TokenKind k;
      if (!peek(k, "coordinate bin or FACE_END")) return false;
      if (k == TokenKind::FaceEnd) {
        ++pos_;
        return true;
      }
      if (k != TokenKind::Coord)
        return fail(ParseErrorKind::UnexpectedToken, pos_, "coordinate bin or FACE_END",
                    std::string("got ") + token_kind_name(k));
      if (!parse_edge_block(l, face_index)) return false;
    }
  }

  bool parse_edge_block(int l, int face_index) {
    DecodedEdge edge;
    edge.level = l;
    edge.face_a = face_index;
    if (!read_box(edge.box_bins, edge.box)) return false;
    for (int i = 0; i < kEdgeCells; ++i) {
      Token t;
      if (!take(TokenKind::EdgeCode, t)) return false;
      edge.codes[i] = static_cast<int>(t) - kEdgeCodeBase;
    }
    TokenKind k;
    if (!peek(k, "reference tag or T_u")) return false;
    if (k == TokenKind::RefTag) {
      const int tag = static_cast<int>(toks_[pos_]) - kRefTagBase;
      // The window holds the base faces plus every face of this level parsed
      // so far, including the block's own face (self-loops are legal).
      const size_t population = base_.size() + model_.level_faces[l].size();
      if (static_cast<size_t>(tag) >= population)
        return fail(ParseErrorKind::DanglingReference, pos_, "",
                    "tag T" + std::to_string(tag) + " is outside the window, which holds " +
                        std::to_string(population) + " face(s) here");
      ++pos_;
      edge.face_b = static_cast<size_t>(tag) < base_.size()
                        ? base_[tag]
                        : model_.level_faces[l][tag - base_.size()];
    } else if (k == TokenKind::RefUnassigned) {
      if (mode_ != DecodeMode::Autocomplete)
        return fail(ParseErrorKind::ModeViolation, pos_, "reference tag",
                    "T_u is only valid when decoding autocomplete streams");
      ++pos_;
      edge.unassigned = true;
    } else {
      return fail(ParseErrorKind::UnexpectedToken, pos_, "reference tag or T_u",
                  std::string("got ") + token_kind_name(k));
    }
    edge.grid = denormalize(codec_.decode_edge(edge.codes), edge.box);
    model_.edges.push_back(std::move(edge));
    return true;
  }

  const TokenStream& toks_;
  DecodeMode mode_;
  const LatentCodec& codec_;
  int stride_;
  size_t pos_ = 0;
  DecodedModel model_;
  std::vector<int> base_;  // earlier-level window faces for the current level
  ParseError error_;
};

}  // namespace

DecodeResult decode_stream(const TokenStream& tokens, DecodeMode mode, const LatentCodec& codec,
                           int window_stride) {
  if (window_stride != 1 && window_stride != 2)
    throw BrepError(ErrorKind::ContractViolation, "window stride must be 1 or 2");
  return StreamParser(tokens, mode, codec, window_stride).run();
}

BRepGraph to_graph(const DecodedModel& model) {
  BRepGraph g;
  g.faces.reserve(model.faces.size());
  g.edges.reserve(model.edges.size());
  for (const DecodedFace& f : model.faces) g.faces.push_back({f.grid, f.box});
  for (const DecodedEdge& e : model.edges) {
    BRepEdge edge;
    edge.grid = e.grid;
    edge.box = e.box;
    edge.face_a = e.face_a;
    edge.face_b = e.unassigned ? kNoFace : e.face_b;
    g.edges.push_back(edge);
  }
  g.orientation_known = false;  // orientation is not tokenized
  return g;
}

ResolveReport resolve_unassigned(DecodedModel& model) {
  ResolveReport report;
  const size_t n = model.edges.size();
  std::vector<char> consumed(n, 0);
  for (size_t i = 0; i < n; ++i) {
    DecodedEdge& tu = model.edges[i];
    if (!tu.unassigned || consumed[i]) continue;
    for (size_t j = 0; j < n; ++j) {
      const DecodedEdge& cand = model.edges[j];
      if (consumed[j] || cand.unassigned || cand.level <= tu.level) continue;
      if (cand.box_bins != tu.box_bins || cand.codes != tu.codes) continue;
      // The re-emission's carrying face is the endpoint the T_u entry was
      // missing; prefer whichever endpoint differs from the one we know.
      tu.face_b = cand.face_b == tu.face_a
                      ? cand.face_a
                      : (cand.face_a == tu.face_a ? cand.face_b : cand.face_a);
      tu.unassigned = false;
      consumed[j] = 1;
      ++report.unified;
      break;
    }
  }
  std::vector<DecodedEdge> kept;
  kept.reserve(n - static_cast<size_t>(report.unified));
  for (size_t j = 0; j < n; ++j)
    if (!consumed[j]) kept.push_back(std::move(model.edges[j]));
  model.edges = std::move(kept);
  for (size_t j = 0; j < model.edges.size(); ++j)
    if (model.edges[j].unassigned) report.dangling_edges.push_back(static_cast<int>(j));
  return report;
}

TokenStream encode_autocomplete_prefix(const BRepGraph& user, const Aabb& domain_box,
                                       const LatentCodec& codec) {
  if (user.faces.empty())
    throw BrepError(ErrorKind::ContractViolation, "autocomplete prefix needs at least one face");
  if (static_cast<int>(user.faces.size()) > kWindowCapacity)
    throw BrepError(ErrorKind::WindowCapacity,
                    "conditioning set exceeds the " + std::to_string(kWindowCapacity) +
                        "-face reference window");
  BRepGraph mapped = map_to_unit_cube(user, domain_box);
  std::vector<int> all(user.faces.size());
  std::iota(all.begin(), all.end(), 0);
  BftOptions options;
  options.autocomplete = true;
  TraversalPlan plan = assign_window_tags(bft_levels(mapped, all, options));
  EncodedCodes codes = encode_latents(mapped, codec);
  TokenStream s;
  s.push_back(kSeqStart);
  s.push_back(kBrepStart);
  emit_body(s, mapped, plan, codes, 1);
  return s;
}

TokenStream encode_autocomplete_stream(const BRepGraph& full, const std::vector<int>& user_faces,
                                       const Aabb& domain_box, const LatentCodec& codec) {
  BRepGraph mapped = map_to_unit_cube(full, domain_box);
  BftOptions options;
  options.autocomplete = true;
  TraversalPlan plan = assign_window_tags(bft_levels(mapped, user_faces, options));
  EncodedCodes codes = encode_latents(mapped, codec);
  return encode_stream(mapped, plan, std::nullopt, codes);
}

}  // namespace breptok
