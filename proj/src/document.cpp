#include "breptok/document.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace breptok {

namespace {

using nlohmann::json;

json points_to_json(const Vec3* points, size_t count) {
  json arr = json::array();
  for (size_t i = 0; i < count; ++i)
    arr.push_back(json::array({points[i][0], points[i][1], points[i][2]}));
  return arr;
}

json box_to_json(const Aabb& box) {
  return json::array({box.min_corner[0], box.min_corner[1], box.min_corner[2],
                      box.max_corner[0], box.max_corner[1], box.max_corner[2]});
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw BrepError(ErrorKind::FormatError, where + ": " + what);
}

void read_points(const json& j, const std::string& where, Vec3* out, size_t count) {
  if (!j.is_array() || j.size() != count)
    bad(where, "\"points\" must be an array of " + std::to_string(count) + " [x,y,z] triples");
  for (size_t i = 0; i < count; ++i) {
    const json& p = j[i];
    if (!p.is_array() || p.size() != 3 || !p[0].is_number() || !p[1].is_number() ||
        !p[2].is_number())
      bad(where, "point " + std::to_string(i) + " is not an [x,y,z] triple");
    out[i] = Vec3{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()};
  }
}

int read_endpoint(const json& e, const char* key, const std::string& where, int n_faces) {
  if (!e.contains(key) || e[key].is_null()) return kNoFace;
  if (!e[key].is_number_integer()) bad(where, std::string(key) + " must be an integer or null");
  int v = e[key].get<int>();
  if (v < 0 || v >= n_faces) bad(where, std::string(key) + " out of face range");
  return v;
}

std::optional<MetaClass> parse_complexity(const std::string& s, const std::string& where) {
  if (s == "easy") return MetaClass::Easy;
  if (s == "medium") return MetaClass::Medium;
  if (s == "hard") return MetaClass::Hard;
  if (s == "random") return MetaClass::Random;
  bad(where, "unknown complexity \"" + s + "\"");
}

std::vector<int> read_id_list(const json& j, const std::string& where, int limit) {
  std::vector<int> out;
  if (!j.is_array()) bad(where, "must be an array of face ids");
  for (const json& v : j) {
    if (!v.is_number_integer()) bad(where, "face id must be an integer");
    int id = v.get<int>();
    if (id < 0 || id >= limit) bad(where, "face id out of range");
    out.push_back(id);
  }
  return out;
}

}  // namespace

std::string document_to_json(const BRepDocument& doc) {
  json j;
  j["schema_version"] = kDocumentSchemaVersion;
  j["orientation_known"] = doc.graph.orientation_known;
  json faces = json::array();
  for (const BRepFace& f : doc.graph.faces) {
    json jf;
    jf["box"] = box_to_json(f.box);
    jf["orientation_out"] = f.grid.orientation_out;
    jf["points"] = points_to_json(f.grid.points.data(), f.grid.points.size());
    faces.push_back(std::move(jf));
  }
  j["faces"] = std::move(faces);
  json edges = json::array();
  for (const BRepEdge& e : doc.graph.edges) {
    json je;
    je["box"] = box_to_json(e.box);
    je["face_a"] = e.face_a == kNoFace ? json() : json(e.face_a);
    je["face_b"] = e.face_b == kNoFace ? json() : json(e.face_b);
    je["points"] = points_to_json(e.grid.points.data(), e.grid.points.size());
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  if (doc.labels) {
    json jl;
    if (doc.labels->complexity) jl["complexity"] = meta_class_name(*doc.labels->complexity);
    jl["hull_planes"] = doc.labels->hull_planes;
    jl["bolt_holes"] = doc.labels->bolt_holes;
    j["labels"] = std::move(jl);
  }
  return j.dump(1);
}

namespace {

BRepDocument document_from_parsed(const json& j) {
  if (!j.is_object()) bad("document", "top level must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kDocumentSchemaVersion)
    bad("document", "schema_version must be " + std::to_string(kDocumentSchemaVersion));

  BRepDocument doc;
  doc.graph.orientation_known =
      j.value("orientation_known", true);
  if (!j.contains("faces") || !j["faces"].is_array()) bad("document", "missing \"faces\" array");
  if (!j.contains("edges") || !j["edges"].is_array()) bad("document", "missing \"edges\" array");

  size_t fi = 0;
  for (const json& jf : j["faces"]) {
    std::string where = "faces[" + std::to_string(fi++) + "]";
    if (!jf.is_object() || !jf.contains("points")) bad(where, "missing \"points\"");
    BRepFace face;
    face.grid.orientation_out = jf.value("orientation_out", true);
    read_points(jf["points"], where, face.grid.points.data(), face.grid.points.size());
    doc.graph.faces.push_back(std::move(face));
  }
  const int n_faces = static_cast<int>(doc.graph.faces.size());
  size_t ei = 0;
  for (const json& je : j["edges"]) {
    std::string where = "edges[" + std::to_string(ei++) + "]";
    if (!je.is_object() || !je.contains("points")) bad(where, "missing \"points\"");
    BRepEdge edge;
    edge.face_a = read_endpoint(je, "face_a", where, n_faces);
    edge.face_b = read_endpoint(je, "face_b", where, n_faces);
    read_points(je["points"], where, edge.grid.points.data(), edge.grid.points.size());
    doc.graph.edges.push_back(std::move(edge));
  }
  refresh_boxes(doc.graph);  // boxes are derived, never trusted from the file

  if (j.contains("labels")) {
    const json& jl = j["labels"];
    if (!jl.is_object()) bad("labels", "must be an object");
    DocumentLabels labels;
    if (jl.contains("complexity")) {
      if (!jl["complexity"].is_string()) bad("labels", "complexity must be a string");
      labels.complexity = parse_complexity(jl["complexity"].get<std::string>(), "labels");
    }
    if (jl.contains("hull_planes"))
      labels.hull_planes = read_id_list(jl["hull_planes"], "labels.hull_planes", n_faces);
    if (jl.contains("bolt_holes"))
      labels.bolt_holes = read_id_list(jl["bolt_holes"], "labels.bolt_holes", n_faces);
    doc.labels = std::move(labels);
  }
  return doc;
}

}  // namespace

BRepDocument document_from_json(const std::string& text) {
  // Any json type error surfaces as a positioned FormatError, not a raw
  // library exception.
  try {
    return document_from_parsed(json::parse(text));
  } catch (const json::exception& e) {
    throw BrepError(ErrorKind::FormatError, e.what());
  }
}

void save_document(const std::string& path, const BRepDocument& doc) {
  std::ofstream os(path);
  if (!os) throw BrepError(ErrorKind::FormatError, "cannot open for writing: " + path);
  os << document_to_json(doc) << "\n";
  os.flush();
  if (!os) throw BrepError(ErrorKind::FormatError, "write failed: " + path);
}

BRepDocument load_document(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw BrepError(ErrorKind::FormatError, "cannot open: " + path);
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return document_from_json(buffer.str());
}

}  // namespace breptok
