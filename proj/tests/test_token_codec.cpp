#include <algorithm>
#include <vector>

#include "doctest.h"

#include "breptok/generators.hpp"
#include "breptok/token_codec.hpp"

using namespace breptok;

namespace {

TokenStream encode_whole(const BRepGraph& g, std::optional<MetaClass> meta,
                         int window_stride = 1) {
  BRepGraph n = map_to_unit_cube(g, solid_aabb(g));
  BftOptions opt;
  opt.window_stride = window_stride;
  TraversalPlan plan = assign_window_tags(bft_levels(n, {pick_start_face(n)}, opt));
  return encode_stream(n, plan, meta, encode_latents(n, patch_codec()));
}

BRepGraph floating_squares(int count) {
  // Disconnected planar faces, no edges; usable as a conditioning set.
  BRepGraph g;
  for (int k = 0; k < count; ++k) {
    BRepFace f;
    for (int u = 0; u < kGridN; ++u)
      for (int v = 0; v < kGridN; ++v)
        f.grid.at(u, v) = {u / 31.0, v / 31.0, 1.5 * k};
    g.faces.push_back(f);
  }
  refresh_boxes(g);
  return g;
}

std::vector<int> ref_tags_of(const TokenStream& s) {
  std::vector<int> tags;
  for (Token t : s)
    if (classify_token(t) == TokenKind::RefTag) tags.push_back(t - kRefTagBase);
  return tags;
}

size_t count_kind(const TokenStream& s, TokenKind k) {
  size_t n = 0;
  for (Token t : s) n += (classify_token(t) == k);
  return n;
}

}  // namespace

TEST_CASE("coordinate bins hit the documented anchor values") {
  CHECK(quantize_coord(-1.0) == 0);
  CHECK(quantize_coord(1.0) == 1023);
  CHECK(quantize_coord(0.0) == 512);
  CHECK(quantize_coord(-3.0) == 0);    // clamped
  CHECK(quantize_coord(3.0) == 1023);  // clamped
  CHECK(dequantize_coord(512) == doctest::Approx(1.0 / 1024.0).epsilon(1e-15));
  CHECK(dequantize_coord(0) == doctest::Approx(1.0 / 1024.0 - 1.0).epsilon(1e-15));
  CHECK(dequantize_coord(1023) == doctest::Approx(1.0 - 1.0 / 1024.0).epsilon(1e-15));
}

TEST_CASE("bin centers quantize back to their bin for all 1024 bins") {
  for (int bin = 0; bin < kCoordBins; ++bin)
    CHECK(quantize_coord(dequantize_coord(bin)) == bin);
}

TEST_CASE("token ids classify into the frozen ranges") {
  CHECK(kVocabularySize == 3237);
  CHECK(classify_token(0) == TokenKind::SeqStart);
  CHECK(classify_token(5) == TokenKind::FaceEnd);
  CHECK(classify_token(8) == TokenKind::MetaClass);
  CHECK(classify_token(12) == TokenKind::Coord);
  CHECK(classify_token(1035) == TokenKind::Coord);
  CHECK(classify_token(1036) == TokenKind::FaceCode);
  CHECK(classify_token(2035) == TokenKind::FaceCode);
  CHECK(classify_token(2036) == TokenKind::EdgeCode);
  CHECK(classify_token(3035) == TokenKind::EdgeCode);
  CHECK(classify_token(3036) == TokenKind::RefTag);
  CHECK(classify_token(3235) == TokenKind::RefTag);
  CHECK(classify_token(3236) == TokenKind::RefUnassigned);
  CHECK(classify_token(3237) == TokenKind::Invalid);
}

TEST_CASE("complexity classes split at 25 and 50 faces") {
  CHECK(classify_complexity(1) == MetaClass::Easy);
  CHECK(classify_complexity(24) == MetaClass::Easy);
  CHECK(classify_complexity(25) == MetaClass::Medium);
  CHECK(classify_complexity(50) == MetaClass::Medium);
  CHECK(classify_complexity(51) == MetaClass::Hard);
  CHECK(meta_class_token(MetaClass::Easy) == kMetaEasy);
  CHECK(meta_class_token(MetaClass::Random) == kMetaRandom);
}

TEST_CASE("stream length follows the grammar formula") {
  // Independent oracle: 1 start + 3 meta + 1 open + per level 1 end +
  // per face 6 coord + 4 code + 1 end + per edge 6 coord + 2 code + 1 tag +
  // 1 close + 1 end.
  auto oracle = [](int levels, int faces, int edges, bool meta) {
    return size_t(1 + (meta ? 3 : 0) + 1 + levels + faces * 11 + edges * 9 + 2);
  };
  for (int l = 1; l < 4; ++l)
    for (int f = 1; f < 5; ++f)
      for (int e = 0; e < 5; ++e)
        for (bool m : {false, true})
          CHECK(expected_stream_length(l, f, e, m) == oracle(l, f, e, m));
}

TEST_CASE("a lone face without metadata encodes to 16 tokens") {
  TokenStream s = encode_whole(floating_squares(1), std::nullopt);
  CHECK(s.size() == 16);
  CHECK(s.size() == expected_stream_length(1, 1, 0, false));
  CHECK(s.front() == kSeqStart);
  CHECK(s.back() == kSeqEnd);
}

TEST_CASE("the split cylinder with metadata encodes to 108 tokens") {
  BRepGraph g = gen_cylinder(0.5, 3.0).graph;
  TokenStream s = encode_whole(g, MetaClass::Easy);
  CHECK(s.size() == 108);
  CHECK(s.size() == expected_stream_length(3, 4, 6, true));
  // Reference tags in stream order: the wall facing -y lists its bottom rim
  // (T0); the +y wall lists its rim (T0) then the two seams back to the first
  // wall (T1, T1); the top disc lists one rim per wall (T0, T1).
  CHECK(ref_tags_of(s) == std::vector<int>{0, 0, 1, 1, 0, 1});
}

TEST_CASE("decode inverts encode on the split cylinder") {
  BRepGraph g = gen_cylinder(0.4, 2.5).graph;
  TokenStream s = encode_whole(g, MetaClass::Medium);
  DecodeResult r = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE(r.ok());
  const DecodedModel& m = *r.model;
  CHECK(m.meta == MetaClass::Medium);
  REQUIRE(m.level_faces.size() == 3);
  CHECK(m.level_faces[0].size() == 1);
  CHECK(m.level_faces[1].size() == 2);
  CHECK(m.level_faces[2].size() == 1);
  REQUIRE(m.faces.size() == 4);
  REQUIRE(m.edges.size() == 6);
  for (const DecodedEdge& e : m.edges) CHECK_FALSE(e.unassigned);
  // Stream order: face 0 = bottom disc (level 0), 1/2 = walls, 3 = top disc.
  CHECK(m.faces[0].level == 0);
  CHECK(m.faces[3].level == 2);
  // Decoded boxes sit on bin centers inside [-1,1].
  for (const DecodedFace& f : m.faces)
    for (int i = 0; i < 6; ++i) {
      CHECK(f.box_bins[i] >= 0);
      CHECK(f.box_bins[i] < kCoordBins);
    }
  BRepGraph back = to_graph(m);
  CHECK(back.faces.size() == 4);
  CHECK(back.edges.size() == 6);
  // Incidences up to the face permutation: compare degree multisets.
  std::vector<int> deg(4, 0);
  for (const BRepEdge& e : back.edges) {
    deg[e.face_a]++;
    deg[e.face_b]++;
  }
  std::sort(deg.begin(), deg.end());
  CHECK(deg == std::vector<int>{2, 2, 4, 4});  // discs 2, walls 4
}

TEST_CASE("decode reports a positioned error for a wrong-kind token") {
  TokenStream s = encode_whole(floating_squares(1), std::nullopt);
  // Token 2 opens the first face block with a coordinate; corrupt it.
  s[2] = kFaceEnd;
  DecodeResult r = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == ParseErrorKind::UnexpectedToken);
  CHECK(r.error->position == 2);
  CHECK_FALSE(r.error->expected.empty());
}

TEST_CASE("decode reports unexpected end on truncation") {
  // Connected multi-face stream with metadata: cuts land in every block kind.
  TokenStream s = encode_whole(gen_cylinder(0.4, 2.5).graph, MetaClass::Easy);
  for (size_t cut = 0; cut < s.size(); ++cut) {
    TokenStream t(s.begin(), s.begin() + cut);
    DecodeResult r = decode_stream(t, DecodeMode::Unconditional);
    REQUIRE_FALSE(r.ok());
    CHECK(r.error->kind == ParseErrorKind::UnexpectedEnd);
    CHECK(r.error->position == cut);
  }
}

TEST_CASE("decode reports trailing tokens after a complete stream") {
  TokenStream s = encode_whole(floating_squares(1), std::nullopt);
  s.push_back(kSeqStart);
  DecodeResult r = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == ParseErrorKind::TrailingTokens);
  CHECK(r.error->position == 16);
}

TEST_CASE("decode rejects ids outside the vocabulary") {
  TokenStream s = encode_whole(floating_squares(1), std::nullopt);
  s[5] = Token(kVocabularySize);
  DecodeResult r = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == ParseErrorKind::InvalidTokenId);
  CHECK(r.error->position == 5);
}

TEST_CASE("decode rejects an empty level") {
  TokenStream s{kSeqStart, kBrepStart, kLevelEnd, kBrepEnd, kSeqEnd};
  DecodeResult r = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == ParseErrorKind::UnexpectedToken);
  CHECK(r.error->position == 2);
}

TEST_CASE("unassigned references are a mode violation outside autocomplete") {
  BRepGraph g = floating_squares(2);
  BRepEdge e;
  for (int i = 0; i < kGridN; ++i) e.grid.points[i] = {i / 31.0, 0, 0.5};
  e.face_a = 0;
  e.face_b = kNoFace;
  g.edges.push_back(e);
  refresh_boxes(g);

  BRepGraph n = map_to_unit_cube(g, solid_aabb(g));
  BftOptions opt;
  opt.autocomplete = true;
  std::vector<int> all{0, 1};
  TraversalPlan plan = assign_window_tags(bft_levels(n, all, opt));
  TokenStream s = encode_stream(n, plan, std::nullopt, encode_latents(n, patch_codec()));
  CHECK(count_kind(s, TokenKind::RefUnassigned) == 1);

  DecodeResult strict = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE_FALSE(strict.ok());
  CHECK(strict.error->kind == ParseErrorKind::ModeViolation);

  DecodeResult loose = decode_stream(s, DecodeMode::Autocomplete);
  REQUIRE(loose.ok());
  REQUIRE(loose.model->edges.size() == 1);
  CHECK(loose.model->edges[0].unassigned);
}

TEST_CASE("reference tags beyond the window are dangling") {
  BRepGraph g = gen_box({1, 1, 1}).graph;
  TokenStream s = encode_whole(g, std::nullopt);
  // Rewrite the first reference tag to point past the live window.
  for (Token& t : s)
    if (classify_token(t) == TokenKind::RefTag) {
      t = Token(kRefTagBase + 199);
      break;
    }
  DecodeResult r = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->kind == ParseErrorKind::DanglingReference);
}

TEST_CASE("a conditioning prefix over plain faces has no unassigned marks") {
  BRepGraph g = floating_squares(4);
  Aabb domain = solid_aabb(g);
  TokenStream p = encode_autocomplete_prefix(g, domain);
  CHECK(p.size() == 2 + 4 * 11 + 1);
  CHECK(p.front() == kSeqStart);
  CHECK(p[1] == kBrepStart);
  CHECK(p.back() == kLevelEnd);
  CHECK(count_kind(p, TokenKind::RefUnassigned) == 0);
  CHECK(count_kind(p, TokenKind::FaceEnd) == 4);
}

TEST_CASE("bolt-hole rim edges to the absent top face carry unassigned marks") {
  BRepDocument plate = gen_plate_with_holes(2.0, 2.0, 0.4, {{0, 0, 0.3}});
  // Keep the bottom plane and the two hole walls; the top plane (owner of the
  // upper rim arcs) stays out of the conditioning set.
  BRepGraph user = induced_subgraph(plate.graph, {4, 6, 7});
  TokenStream p = encode_autocomplete_prefix(user, solid_aabb(plate.graph));
  // 4 rectangle edges of the bottom plane + 2 upper rim arcs lose an endpoint;
  // 2 lower rim arcs + 2 wall seams stay concrete.
  CHECK(count_kind(p, TokenKind::RefUnassigned) == 6);
  CHECK(count_kind(p, TokenKind::RefTag) == 4);
  CHECK(p.size() == 2 + 3 * 11 + 10 * 9 + 1);
}

TEST_CASE("a re-emitted unassigned edge unifies into one incidence") {
  BRepGraph g = floating_squares(2);
  BRepEdge e;
  for (int i = 0; i < kGridN; ++i) e.grid.points[i] = {0.5, 0.5, 1.5 * i / 31.0};
  e.face_a = 0;
  e.face_b = 1;
  g.edges.push_back(e);
  refresh_boxes(g);

  TokenStream s = encode_autocomplete_stream(g, {0}, solid_aabb(g));
  CHECK(count_kind(s, TokenKind::RefUnassigned) == 1);
  CHECK(count_kind(s, TokenKind::RefTag) == 1);

  DecodeResult r = decode_stream(s, DecodeMode::Autocomplete);
  REQUIRE(r.ok());
  REQUIRE(r.model->edges.size() == 2);
  ResolveReport report = resolve_unassigned(*r.model);
  CHECK(report.unified == 1);
  CHECK(report.dangling_edges.empty());
  REQUIRE(r.model->edges.size() == 1);
  CHECK_FALSE(r.model->edges[0].unassigned);
  CHECK(r.model->edges[0].face_a != r.model->edges[0].face_b);
}

TEST_CASE("unmatched unassigned edges stay dangling after resolution") {
  BRepGraph g = floating_squares(2);
  BRepEdge real;
  for (int i = 0; i < kGridN; ++i) real.grid.points[i] = {0.5, 0.5, 1.5 * i / 31.0};
  real.face_a = 0;
  real.face_b = 1;
  g.edges.push_back(real);
  BRepEdge open = real;
  for (int i = 0; i < kGridN; ++i) open.grid.points[i] = {0.25, 0.75, 0.4 * i / 31.0};
  open.face_b = kNoFace;
  g.edges.push_back(open);
  refresh_boxes(g);

  TokenStream s = encode_autocomplete_stream(g, {0}, solid_aabb(g));
  DecodeResult r = decode_stream(s, DecodeMode::Autocomplete);
  REQUIRE(r.ok());
  ResolveReport report = resolve_unassigned(*r.model);
  CHECK(report.unified == 1);
  CHECK(report.dangling_edges.size() == 1);
  REQUIRE(r.model->edges.size() == 2);
}

TEST_CASE("resolution is the identity when nothing is unassigned") {
  BRepGraph g = gen_box({1, 2, 3}).graph;
  TokenStream s = encode_whole(g, std::nullopt);
  DecodeResult r = decode_stream(s, DecodeMode::Unconditional);
  REQUIRE(r.ok());
  size_t before = r.model->edges.size();
  ResolveReport report = resolve_unassigned(*r.model);
  CHECK(report.unified == 0);
  CHECK(report.dangling_edges.empty());
  CHECK(r.model->edges.size() == before);
}

TEST_CASE("prefix tokens reappear verbatim at the head of the full stream") {
  BRepGraph g = floating_squares(2);
  BRepEdge e;
  for (int i = 0; i < kGridN; ++i) e.grid.points[i] = {0.5, 0.5, 1.5 * i / 31.0};
  e.face_a = 0;
  e.face_b = 1;
  g.edges.push_back(e);
  refresh_boxes(g);

  Aabb domain = solid_aabb(g);
  BRepGraph user = induced_subgraph(g, {0});
  TokenStream prefix = encode_autocomplete_prefix(user, domain);
  TokenStream full = encode_autocomplete_stream(g, {0}, domain);
  REQUIRE(full.size() > prefix.size());
  CHECK(std::equal(prefix.begin(), prefix.end(), full.begin()));
}
