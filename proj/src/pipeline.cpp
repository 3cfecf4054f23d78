#include "breptok/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace breptok {

namespace {

void check_finite(const BRepGraph& g) {
  auto bad = [](const Vec3& p) {
    return !std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z);
  };
  for (size_t f = 0; f < g.faces.size(); ++f)
    for (const Vec3& p : g.faces[f].grid.points)
      if (bad(p))
        throw BrepError(ErrorKind::MalformedGeometry,
                        "face " + std::to_string(f) + " has non-finite coordinates",
                        {static_cast<int>(f)});
  for (size_t e = 0; e < g.edges.size(); ++e)
    for (const Vec3& p : g.edges[e].grid.points)
      if (bad(p))
        throw BrepError(ErrorKind::MalformedGeometry,
                        "edge " + std::to_string(e) + " has non-finite coordinates",
                        {static_cast<int>(e)});
}

std::array<int, 6> quantize_box(const Aabb& box) {
  return {quantize_coord(box.min_corner.x), quantize_coord(box.min_corner.y),
          quantize_coord(box.min_corner.z), quantize_coord(box.max_corner.x),
          quantize_coord(box.max_corner.y), quantize_coord(box.max_corner.z)};
}

double corner_error(const Aabb& a, const Aabb& b) {
  double err = 0.0;
  for (int i = 0; i < 3; ++i) {
    err = std::max(err, std::abs(a.min_corner[i] - b.min_corner[i]));
    err = std::max(err, std::abs(a.max_corner[i] - b.max_corner[i]));
  }
  return err;
}

}  // namespace

BRepGraph normalize_solid(const BRepGraph& g) {
  if (g.faces.empty())
    throw BrepError(ErrorKind::ContractViolation, "cannot normalize a solid with no faces");
  return map_to_unit_cube(g, solid_aabb(g));
}

TokenizeResult tokenize_graph(const BRepGraph& g, const TokenizeOptions& opts) {
  if (g.faces.empty())
    throw BrepError(ErrorKind::ContractViolation, "cannot tokenize a solid with no faces");
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (g.edges[e].unassigned())
      throw BrepError(ErrorKind::ContractViolation,
                      "edge " + std::to_string(e) +
                          " has an unassigned endpoint; only autocomplete prefixes may",
                      {static_cast<int>(e)});
  if (opts.enforce_limits) {
    if (static_cast<int>(g.faces.size()) > opts.max_faces)
      throw BrepError(ErrorKind::ContractViolation,
                      "solid has " + std::to_string(g.faces.size()) + " faces, over the " +
                          std::to_string(opts.max_faces) + "-face guardrail");
    if (static_cast<int>(g.edges.size()) > opts.max_edges)
      throw BrepError(ErrorKind::ContractViolation,
                      "solid has " + std::to_string(g.edges.size()) + " edges, over the " +
                          std::to_string(opts.max_edges) + "-edge guardrail");
  }
  check_finite(g);

  TokenizeResult result;
  result.solid_map = unit_cube_map(solid_aabb(g));
  result.normalized = map_to_unit_cube(g, solid_aabb(g));

  BftOptions bft;
  bft.window_stride = opts.window_stride;
  result.plan = assign_window_tags(
      bft_levels(result.normalized, {pick_start_face(result.normalized)}, bft));
  result.codes = encode_latents(result.normalized, patch_codec());
  result.tokens = encode_stream(result.normalized, result.plan, opts.meta, result.codes);
  return result;
}

RoundtripReport roundtrip_graph(const BRepGraph& g, const TokenizeOptions& opts) {
  TokenizeResult enc = tokenize_graph(g, opts);
  DecodeResult dec =
      decode_stream(enc.tokens, DecodeMode::Unconditional, patch_codec(), opts.window_stride);

  RoundtripReport report;
  if (!dec.ok()) {
    report.message = "decode failed: " + dec.error->to_string();
    return report;
  }
  const DecodedModel& model = *dec.model;
  report.face_count = static_cast<int>(model.faces.size());
  report.edge_count = static_cast<int>(model.edges.size());
  if (model.faces.size() != g.faces.size() || model.edges.size() != g.edges.size()) {
    report.message = "primitive counts differ after roundtrip";
    return report;
  }

  // Stream position of every original face id.
  std::vector<int> pos(g.faces.size(), -1);
  {
    int i = 0;
    for (const auto& level : enc.plan.levels)
      for (const FaceEntry& entry : level) pos[entry.face] = i++;
  }

  // Faces correspond by stream order; their quantized boxes must agree.
  double max_err = 0.0;
  for (const auto& level : enc.plan.levels)
    for (const FaceEntry& entry : level) {
      const DecodedFace& got = model.faces[pos[entry.face]];
      const Aabb& want = enc.normalized.faces[entry.face].box;
      if (quantize_box(want) != got.box_bins) {
        report.message = "face box bins differ at stream face " + std::to_string(pos[entry.face]);
        return report;
      }
      max_err = std::max(max_err, corner_error(want, got.box));
    }

  // Edges compare as multisets of (endpoints in stream order, box bins,
  // codebook ids): parallel edges have no canonical pairing, so sort both
  // sides by the full key.
  using EdgeKey = std::tuple<int, int, std::array<int, 6>, std::array<int, kEdgeCells>>;
  std::vector<EdgeKey> want_edges, got_edges;
  want_edges.reserve(g.edges.size());
  got_edges.reserve(g.edges.size());
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const BRepEdge& edge = enc.normalized.edges[e];
    int a = pos[edge.face_a], b = pos[edge.face_b];
    want_edges.emplace_back(std::min(a, b), std::max(a, b), quantize_box(edge.box),
                            enc.codes.edges[e].codes);
  }
  for (const DecodedEdge& edge : model.edges) {
    if (edge.unassigned) {
      report.message = "decoded stream contains an unassigned edge";
      return report;
    }
    int a = edge.face_a, b = edge.face_b;
    got_edges.emplace_back(std::min(a, b), std::max(a, b), edge.box_bins, edge.codes);
  }
  std::vector<EdgeKey> want_sorted = want_edges, got_sorted = got_edges;
  std::sort(want_sorted.begin(), want_sorted.end());
  std::sort(got_sorted.begin(), got_sorted.end());
  if (want_sorted != got_sorted) {
    report.message = "edge endpoint/box/code multisets differ after roundtrip";
    return report;
  }
  report.topology_ok = true;

  // Edge placement error: bins match, so the decoded box is the bin-center
  // box of the original; measure against the original corners directly.
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const Aabb& want = enc.normalized.edges[e].box;
    const auto& bins = std::get<2>(want_edges[e]);
    Aabb got;
    got.min_corner = {dequantize_coord(bins[0]), dequantize_coord(bins[1]),
                      dequantize_coord(bins[2])};
    got.max_corner = {dequantize_coord(bins[3]), dequantize_coord(bins[4]),
                      dequantize_coord(bins[5])};
    max_err = std::max(max_err, corner_error(want, got));
  }

  report.max_placement_err = max_err;
  // Tiny absolute guard: the bound itself is attained exactly at bin edges,
  // where quantize/dequantize arithmetic may land an ulp past it.
  report.placement_ok = max_err <= kPlacementTol + 1e-12;
  if (!report.placement_ok)
    report.message = "placement error " + std::to_string(max_err) + " exceeds tolerance";
  return report;
}

}  // namespace breptok
