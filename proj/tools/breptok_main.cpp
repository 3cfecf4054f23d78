// breptok: compile B-Rep solids to token streams and back, check validity,
// detect constraints, and score generated sets.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "breptok/document.hpp"
#include "breptok/generators.hpp"
#include "breptok/metrics.hpp"
#include "breptok/pipeline.hpp"
#include "breptok/stream_io.hpp"
#include "breptok/validity.hpp"

namespace fs = std::filesystem;
using namespace breptok;

namespace {

std::optional<MetaClass> parse_meta(const std::string& name) {
  if (name == "easy") return MetaClass::Easy;
  if (name == "medium") return MetaClass::Medium;
  if (name == "hard") return MetaClass::Hard;
  if (name == "random") return MetaClass::Random;
  return std::nullopt;
}

Aabb box_from_values(const std::vector<double>& v) {
  Aabb box;
  box.min_corner = {v[0], v[1], v[2]};
  box.max_corner = {v[3], v[4], v[5]};
  return box;
}

std::vector<fs::path> json_files_in(const std::string& dir) {
  std::vector<fs::path> files;
  if (!fs::is_directory(dir))
    throw BrepError(ErrorKind::FormatError, dir + " is not a directory");
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw BrepError(ErrorKind::FormatError, "no .json documents in " + dir);
  return files;
}

struct TokenizeArgs {
  std::string input, output;
  std::string meta;
  int window_stride = 1;
  bool text = false;
  bool no_limits = false;
  int max_faces = kMaxFaces;
  int max_edges = kMaxEdges;
};

int run_tokenize(const TokenizeArgs& a) {
  BRepDocument doc = load_document(a.input);
  TokenizeOptions opts;
  if (!a.meta.empty()) opts.meta = parse_meta(a.meta);
  opts.window_stride = a.window_stride;
  opts.enforce_limits = !a.no_limits;
  opts.max_faces = a.max_faces;
  opts.max_edges = a.max_edges;
  TokenizeResult result = tokenize_graph(doc.graph, opts);
  save_tokens(a.output, result.tokens, a.text);
  std::cout << result.tokens.size() << " tokens (" << doc.graph.faces.size() << " faces, "
            << doc.graph.edges.size() << " edges, " << result.plan.levels.size()
            << " levels) -> " << a.output << "\n";
  return 0;
}

struct DetokenizeArgs {
  std::string input, output;
  std::string mode = "uncond";
  int window_stride = 1;
};

int run_detokenize(const DetokenizeArgs& a) {
  TokenStream tokens = load_tokens(a.input);
  DecodeMode mode = a.mode == "autocomplete" ? DecodeMode::Autocomplete : DecodeMode::Unconditional;
  DecodeResult dec = decode_stream(tokens, mode, patch_codec(), a.window_stride);
  if (!dec.ok()) {
    std::cerr << "parse error: " << dec.error->to_string() << "\n";
    return 2;
  }
  DecodedModel& model = *dec.model;
  if (mode == DecodeMode::Autocomplete) {
    ResolveReport resolved = resolve_unassigned(model);
    std::cout << "unified " << resolved.unified << " unassigned edge(s)";
    if (!resolved.dangling_edges.empty())
      std::cout << ", " << resolved.dangling_edges.size() << " left dangling";
    std::cout << "\n";
  }
  BRepDocument doc;
  doc.graph = to_graph(model);
  if (model.meta) {
    DocumentLabels labels;
    labels.complexity = model.meta;
    doc.labels = labels;
  }
  save_document(a.output, doc);
  std::cout << doc.graph.faces.size() << " faces, " << doc.graph.edges.size() << " edges -> "
            << a.output << "\n";
  return 0;
}

struct RoundtripArgs {
  std::string input;
  std::string meta;
  int window_stride = 1;
};

int run_roundtrip(const RoundtripArgs& a) {
  BRepDocument doc = load_document(a.input);
  TokenizeOptions opts;
  if (!a.meta.empty()) opts.meta = parse_meta(a.meta);
  opts.window_stride = a.window_stride;
  RoundtripReport report = roundtrip_graph(doc.graph, opts);
  if (report.ok()) {
    std::printf("roundtrip ok: %d faces, %d edges, max placement error %.3e (tol %.3e)\n",
                report.face_count, report.edge_count, report.max_placement_err, kPlacementTol);
    return 0;
  }
  std::cerr << "roundtrip failed: " << report.message << "\n";
  return 1;
}

struct ValidateArgs {
  std::string input;
  double gap_tol = kDefaultGapTol;
};

int run_validate(const ValidateArgs& a) {
  BRepDocument doc = load_document(a.input);
  ValidityReport report = check_validity(doc.graph, a.gap_tol);
  std::cout << report.summary();
  return report.is_manifold_closed ? 0 : 1;
}

struct DetectArgs {
  std::string input;
  double tol = kDefaultGapTol;
  double axis_tol_deg = 5.0;
  bool as_json = false;
  bool check_labels = false;
};

int run_detect(const DetectArgs& a) {
  BRepDocument doc = load_document(a.input);
  std::vector<int> hull = detect_hull_planes(doc.graph, a.tol);
  BoltHoleReport bolts = detect_bolt_holes(doc.graph, a.axis_tol_deg);
  if (a.as_json) {
    nlohmann::json out;
    out["hull_planes"] = hull;
    out["bolt_holes"] = bolts.faces;
    out["orientation_known"] = !bolts.skipped_no_orientation;
    std::cout << out.dump(1) << "\n";
  } else {
    std::cout << "hull planes (" << hull.size() << "):";
    for (int f : hull) std::cout << " " << f;
    std::cout << "\nbolt holes (" << bolts.faces.size() << "):";
    for (int f : bolts.faces) std::cout << " " << f;
    std::cout << "\n";
    if (bolts.skipped_no_orientation)
      std::cout << "warning: orientation unknown, bolt-hole detection skipped\n";
  }
  if (a.check_labels) {
    if (!doc.labels) {
      std::cerr << "error: --check-labels given but the document carries no labels\n";
      return 1;
    }
    std::vector<int> want_hull = doc.labels->hull_planes;
    std::vector<int> want_bolts = doc.labels->bolt_holes;
    std::sort(want_hull.begin(), want_hull.end());
    std::sort(want_bolts.begin(), want_bolts.end());
    if (hull != want_hull || bolts.faces != want_bolts) {
      std::cerr << "label mismatch: detected sets differ from document labels\n";
      return 1;
    }
    std::cout << "labels match\n";
  }
  return 0;
}

struct PrefixArgs {
  std::string input, output;
  std::vector<int> faces;
  std::vector<double> domain_box;
  bool text = false;
};

int run_prefix(const PrefixArgs& a) {
  BRepDocument doc = load_document(a.input);
  BRepGraph sub = induced_subgraph(doc.graph, a.faces);
  TokenStream tokens = encode_autocomplete_prefix(sub, box_from_values(a.domain_box));
  save_tokens(a.output, tokens, a.text);
  std::cout << tokens.size() << " prefix tokens (" << sub.faces.size() << " faces, "
            << sub.edges.size() << " edges) -> " << a.output << "\n";
  return 0;
}

struct MetricsArgs {
  std::string gen_dir, ref_dir, train_dir;
  std::uint64_t seed = 0;
  int points = 2000;
  bool as_json = false;
};

int run_metrics(const MetricsArgs& a) {
  auto load_dir = [](const std::string& dir) {
    std::vector<BRepGraph> graphs;
    for (const fs::path& p : json_files_in(dir)) graphs.push_back(load_document(p.string()).graph);
    return graphs;
  };
  std::vector<BRepGraph> gen = load_dir(a.gen_dir);
  std::vector<BRepGraph> ref = load_dir(a.ref_dir);

  MetricsReport report;
  int valid_count = 0;
  for (const BRepGraph& g : gen)
    if (check_validity(g).is_manifold_closed) ++valid_count;
  report.valid = 100.0 * valid_count / static_cast<double>(gen.size());

  // Per-solid sampling seeds are salted by position so sets are independent
  // but the whole run is reproducible from --seed.
  auto sample_all = [&](const std::vector<BRepGraph>& graphs, std::uint64_t salt) {
    std::vector<PointSet> sets;
    sets.reserve(graphs.size());
    for (size_t i = 0; i < graphs.size(); ++i)
      sets.push_back(
          sample_surface_points(graphs[i], a.points, a.seed ^ (salt * (i + 1) + salt)));
    return sets;
  };
  DistributionMetrics dist = compute_cov_mmd_jsd(sample_all(gen, 0x9E3779B97F4A7C15ull),
                                                 sample_all(ref, 0xC2B2AE3D27D4EB4Full));
  report.cov = dist.cov;
  report.mmd = dist.mmd;
  report.jsd = dist.jsd;
  if (!a.train_dir.empty()) {
    NoveltyMetrics nov = novel_unique(gen, load_dir(a.train_dir));
    report.novel = nov.novel;
    report.unique = nov.unique;
  }
  std::cout << (a.as_json ? report.to_json() : report.to_text());
  return 0;
}

int run_stats(const std::string& input) {
  TokenStream tokens = load_tokens(input);
  std::map<TokenKind, size_t> by_kind;
  for (Token t : tokens) ++by_kind[classify_token(t)];
  DecodeResult dec = decode_stream(tokens, DecodeMode::Autocomplete);
  if (!dec.ok()) {
    std::cerr << "parse error: " << dec.error->to_string() << "\n";
    return 2;
  }
  const DecodedModel& model = *dec.model;
  std::cout << "tokens: " << tokens.size() << "\n"
            << "faces: " << model.faces.size() << "\n"
            << "edges: " << model.edges.size() << "\n"
            << "levels: " << model.level_faces.size() << "\n"
            << "complexity: " << (model.meta ? meta_class_name(*model.meta) : "-") << "\n"
            << "counts:\n";
  for (const auto& [kind, count] : by_kind)
    std::cout << "  " << token_kind_name(kind) << ": " << count << "\n";
  return 0;
}

struct GenCorpusArgs {
  std::string out_dir;
  int count = 0;
  std::uint64_t seed = 0;
};

int run_gen_corpus(const GenCorpusArgs& a) {
  fs::create_directories(a.out_dir);
  std::vector<BRepDocument> corpus = generate_corpus(a.count, a.seed);
  for (size_t i = 0; i < corpus.size(); ++i) {
    ValidityReport validity = check_validity(corpus[i].graph);
    if (!validity.is_manifold_closed) {
      std::cerr << "generator invariant broken: solid " << i << " is invalid\n"
                << validity.summary();
      return 1;
    }
    char name[32];
    std::snprintf(name, sizeof name, "solid_%05zu.json", i);
    save_document((fs::path(a.out_dir) / name).string(), corpus[i]);
  }
  std::cout << "wrote " << corpus.size() << " solids to " << a.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "breptok: B-Rep solids <-> discrete token streams.\n"
      "Set BREPTOK_THREADS to cap worker threads (default: hardware concurrency)."};
  app.require_subcommand(1);
  app.set_version_flag("--version",
                       "breptok schema " + std::to_string(kDocumentSchemaVersion) +
                           ", vocabulary v" + std::to_string(kVocabularyVersion) +
                           ", stream format v" + std::to_string(kStreamFormatVersion));

  const std::vector<std::string> meta_names = {"easy", "medium", "hard", "random"};

  TokenizeArgs tok;
  CLI::App* tokenize = app.add_subcommand("tokenize", "Compile a B-Rep document to tokens");
  tokenize->add_option("input", tok.input, "B-Rep JSON document")->required();
  tokenize->add_option("-o,--output", tok.output, "Token stream (.abtk)")->required();
  tokenize->add_option("--meta", tok.meta, "Complexity meta block")
      ->check(CLI::IsMember(meta_names));
  tokenize->add_option("--window-stride", tok.window_stride, "Reference window stride")
      ->check(CLI::IsMember({1, 2}));
  tokenize->add_flag("--text", tok.text, "Write tokens as decimal text");
  tokenize->add_flag("--no-limits", tok.no_limits, "Disable the face/edge guardrails");
  tokenize->add_option("--max-faces", tok.max_faces, "Face guardrail (default 100)");
  tokenize->add_option("--max-edges", tok.max_edges, "Edge guardrail (default 1000)");

  DetokenizeArgs det;
  CLI::App* detokenize = app.add_subcommand("detokenize", "Decompile tokens to a B-Rep document");
  detokenize->add_option("input", det.input, "Token stream (.abtk or text)")->required();
  detokenize->add_option("-o,--output", det.output, "Output JSON document")->required();
  detokenize->add_option("--mode", det.mode, "Decode mode")
      ->check(CLI::IsMember({"uncond", "autocomplete"}));
  detokenize->add_option("--window-stride", det.window_stride, "Reference window stride")
      ->check(CLI::IsMember({1, 2}));

  RoundtripArgs rt;
  CLI::App* roundtrip = app.add_subcommand("roundtrip", "Tokenize, decode, and compare");
  roundtrip->add_option("input", rt.input, "B-Rep JSON document")->required();
  roundtrip->add_option("--meta", rt.meta, "Complexity meta block")
      ->check(CLI::IsMember(meta_names));
  roundtrip->add_option("--window-stride", rt.window_stride, "Reference window stride")
      ->check(CLI::IsMember({1, 2}));

  ValidateArgs val;
  CLI::App* validate = app.add_subcommand("validate", "Watertightness / validity proxy");
  validate->add_option("input", val.input, "B-Rep JSON document")->required();
  validate->add_option("--gap-tol", val.gap_tol, "Gap tolerance in normalized units");

  DetectArgs detect_args;
  CLI::App* detect = app.add_subcommand("detect-constraints", "Hull planes and bolt holes");
  detect->add_option("input", detect_args.input, "B-Rep JSON document")->required();
  detect->add_option("--tol", detect_args.tol, "Planarity tolerance in normalized units");
  detect->add_option("--axis-tol-deg", detect_args.axis_tol_deg, "Bolt-hole axis tolerance");
  detect->add_flag("--json", detect_args.as_json, "JSON output");
  detect->add_flag("--check-labels", detect_args.check_labels,
                   "Exit 1 unless detections equal the document labels");

  PrefixArgs prefix_args;
  CLI::App* prefix = app.add_subcommand("autocomplete-prefix", "Conditioning prefix from faces");
  prefix->add_option("input", prefix_args.input, "B-Rep JSON document")->required();
  prefix->add_option("--faces", prefix_args.faces, "Face ids to condition on")
      ->required()
      ->delimiter(',');
  prefix->add_option("--domain-box", prefix_args.domain_box,
                     "x0,y0,z0,x1,y1,z1 normalization box")
      ->required()
      ->delimiter(',')
      ->expected(6);
  prefix->add_option("-o,--output", prefix_args.output, "Prefix token stream")->required();
  prefix->add_flag("--text", prefix_args.text, "Write tokens as decimal text");

  MetricsArgs met;
  CLI::App* metrics = app.add_subcommand("metrics", "Distribution metrics for generated sets");
  metrics->add_option("--gen", met.gen_dir, "Directory of generated documents")->required();
  metrics->add_option("--ref", met.ref_dir, "Directory of reference documents")->required();
  metrics->add_option("--train", met.train_dir, "Training documents for novelty");
  metrics->add_option("--seed", met.seed, "Sampling seed");
  metrics->add_option("--points", met.points, "Surface samples per solid");
  metrics->add_flag("--json", met.as_json, "JSON output");

  std::string stats_input;
  CLI::App* stats = app.add_subcommand("stats", "Token stream statistics");
  stats->add_option("input", stats_input, "Token stream")->required();

  GenCorpusArgs gen;
  CLI::App* gen_corpus = app.add_subcommand("gen-corpus", "Labeled synthetic corpus");
  gen_corpus->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_corpus->add_option("--count", gen.count, "Number of solids")->required();
  gen_corpus->add_option("--seed", gen.seed, "Corpus seed");

  CLI::App* vocab = app.add_subcommand("vocab", "Print the token vocabulary table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;  // usage errors; --help/--version exit 0
  }

  try {
    if (tokenize->parsed()) return run_tokenize(tok);
    if (detokenize->parsed()) return run_detokenize(det);
    if (roundtrip->parsed()) return run_roundtrip(rt);
    if (validate->parsed()) return run_validate(val);
    if (detect->parsed()) return run_detect(detect_args);
    if (prefix->parsed()) return run_prefix(prefix_args);
    if (metrics->parsed()) return run_metrics(met);
    if (stats->parsed()) return run_stats(stats_input);
    if (gen_corpus->parsed()) return run_gen_corpus(gen);
    if (vocab->parsed()) {
      std::cout << vocabulary_manifest();
      return 0;
    }
  } catch (const BrepError& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::FormatError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
