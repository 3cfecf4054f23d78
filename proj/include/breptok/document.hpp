#pragma once

#include <optional>
#include <string>
#include <vector>

#include "breptok/graph.hpp"
#include "breptok/token_codec.hpp"

namespace breptok {

// Constraint / complexity ground truth carried alongside a solid.
struct DocumentLabels {
  std::optional<MetaClass> complexity;
  std::vector<int> hull_planes;
  std::vector<int> bolt_holes;
};

// Interchange wrapper: a face-adjacency graph plus optional labels, stored as
// human-diffable JSON.  Layout (schema_version 1):
//
//   {
//     "schema_version": 1,
//     "orientation_known": true,
//     "faces": [{"box": [x0,y0,z0,x1,y1,z1], "orientation_out": true,
//                "points": [[x,y,z] * 1024 row-major u*32+v]}, ...],
//     "edges": [{"box": [...], "face_a": 0, "face_b": null for unassigned,
//                "points": [[x,y,z] * 32]}, ...],
//     "labels": {"complexity": "easy", "hull_planes": [...], "bolt_holes": [...]}
//   }
//
// "box" is derived data: written for inspection, recomputed from the points
// on load.  Loading validates index ranges and point counts and throws
// BrepError{FormatError} with the offending location.
struct BRepDocument {
  BRepGraph graph;
  std::optional<DocumentLabels> labels;
};

constexpr int kDocumentSchemaVersion = 1;

std::string document_to_json(const BRepDocument& doc);
BRepDocument document_from_json(const std::string& text);

void save_document(const std::string& path, const BRepDocument& doc);
BRepDocument load_document(const std::string& path);

}  // namespace breptok
