#include "breptok/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "breptok/parallel.hpp"

namespace breptok {

namespace {

// Uniform [0,1) from raw engine output; std::uniform_real_distribution is
// implementation-defined, this is not.
double unit_draw(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

BRepGraph normalized_copy(const BRepGraph& g) {
  Aabb box = solid_aabb(g);
  if (unit_cube_map(box).all_degenerate())
    throw BrepError(ErrorKind::DegenerateGeometry, "solid has no extent");
  return map_to_unit_cube(g, box);
}

}  // namespace

PointSet sample_surface_points(const BRepGraph& g, int n, std::uint64_t seed) {
  if (g.faces.empty()) throw BrepError(ErrorKind::DegenerateGeometry, "no faces to sample");
  BRepGraph solid = normalized_copy(g);

  struct Cell {
    int face, u, v;
  };
  std::vector<Cell> cells;
  std::vector<double> cumulative;
  double total = 0.0;
  for (size_t f = 0; f < solid.faces.size(); ++f) {
    const FaceGrid& grid = solid.faces[f].grid;
    for (int u = 0; u + 1 < kGridN; ++u)
      for (int v = 0; v + 1 < kGridN; ++v) {
        const Vec3& c00 = grid.at(u, v);
        const Vec3& c01 = grid.at(u, v + 1);
        const Vec3& c10 = grid.at(u + 1, v);
        const Vec3& c11 = grid.at(u + 1, v + 1);
        double area = triangle_area(c00, c10, c11) + triangle_area(c00, c11, c01);
        if (area <= 0.0) continue;
        total += area;
        cells.push_back({static_cast<int>(f), u, v});
        cumulative.push_back(total);
      }
  }
  if (total <= 0.0) throw BrepError(ErrorKind::DegenerateGeometry, "zero surface area");

  std::mt19937_64 rng(seed);
  PointSet points;
  points.reserve(std::max(n, 0));
  for (int i = 0; i < n; ++i) {
    double r = unit_draw(rng) * total;
    size_t idx = std::lower_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin();
    if (idx >= cells.size()) idx = cells.size() - 1;
    const Cell& cell = cells[idx];
    const FaceGrid& grid = solid.faces[cell.face].grid;
    double a = unit_draw(rng), b = unit_draw(rng);
    const Vec3& c00 = grid.at(cell.u, cell.v);
    const Vec3& c01 = grid.at(cell.u, cell.v + 1);
    const Vec3& c10 = grid.at(cell.u + 1, cell.v);
    const Vec3& c11 = grid.at(cell.u + 1, cell.v + 1);
    Vec3 p = (c00 * (1 - b) + c01 * b) * (1 - a) + (c10 * (1 - b) + c11 * b) * a;
    points.push_back(p);
  }
  return points;
}

double chamfer_distance(const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty())
    throw BrepError(ErrorKind::ContractViolation, "chamfer of an empty point set");
  double sum_ab = 0.0;
  for (const Vec3& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& q : b) best = std::min(best, squared_norm(p - q));
    sum_ab += best;
  }
  double sum_ba = 0.0;
  for (const Vec3& q : b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& p : a) best = std::min(best, squared_norm(q - p));
    sum_ba += best;
  }
  return sum_ab / static_cast<double>(a.size()) + sum_ba / static_cast<double>(b.size());
}

namespace {

constexpr int kJsdRes = 32;

std::vector<double> occupancy_histogram(const std::vector<PointSet>& sets) {
  std::vector<double> hist(kJsdRes * kJsdRes * kJsdRes, 0.0);
  double count = 0.0;
  for (const PointSet& set : sets)
    for (const Vec3& p : set) {
      int idx[3];
      for (int i = 0; i < 3; ++i) {
        int b = static_cast<int>(std::floor((p[i] + 1.0) * 0.5 * kJsdRes));
        idx[i] = std::clamp(b, 0, kJsdRes - 1);
      }
      hist[(idx[0] * kJsdRes + idx[1]) * kJsdRes + idx[2]] += 1.0;
      count += 1.0;
    }
  if (count > 0.0)
    for (double& h : hist) h /= count;
  return hist;
}

// Natural-log Jensen-Shannon divergence between two normalized histograms.
double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) sum += 0.5 * p[i] * std::log(p[i] / m);
    if (q[i] > 0.0) sum += 0.5 * q[i] * std::log(q[i] / m);
  }
  return sum;
}

}  // namespace

DistributionMetrics compute_cov_mmd_jsd(const std::vector<PointSet>& gen,
                                        const std::vector<PointSet>& ref) {
  if (gen.empty() || ref.empty())
    throw BrepError(ErrorKind::ContractViolation, "metrics need nonempty gen and ref");
  const size_t ng = gen.size(), nr = ref.size();
  std::vector<double> cd(ng * nr);
  parallel_for(ng * nr, [&](size_t k) {
    cd[k] = chamfer_distance(gen[k / nr], ref[k % nr]);
  });

  std::vector<char> covered(nr, 0);
  for (size_t i = 0; i < ng; ++i) {
    size_t best = 0;
    for (size_t j = 1; j < nr; ++j)
      if (cd[i * nr + j] < cd[i * nr + best]) best = j;  // ties keep smallest j
    covered[best] = 1;
  }
  double cov = 0.0;
  for (char c : covered) cov += c;
  cov = cov / static_cast<double>(nr) * 100.0;

  double mmd = 0.0;
  for (size_t j = 0; j < nr; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ng; ++i) best = std::min(best, cd[i * nr + j]);
    mmd += best;
  }
  mmd /= static_cast<double>(nr);

  double divergence = jsd(occupancy_histogram(gen), occupancy_histogram(ref));
  return {cov, mmd * 100.0, divergence * 100.0};
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_byte(std::uint64_t& h, unsigned char b) {
  h ^= b;
  h *= kFnvPrime;
}

void fnv_u64(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) fnv_byte(h, static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

}  // namespace

std::uint64_t quantized_solid_hash(const BRepGraph& g) {
  BRepGraph solid = normalized_copy(g);
  std::vector<std::uint64_t> face_hashes;
  face_hashes.reserve(solid.faces.size());
  for (const BRepFace& f : solid.faces) {
    std::uint64_t h = kFnvOffset;
    for (const Vec3& p : f.grid.points)
      for (int i = 0; i < 3; ++i) {
        int nibble = std::clamp(static_cast<int>(std::floor((p[i] + 1.0) * 0.5 * 16.0)), 0, 15);
        fnv_byte(h, static_cast<unsigned char>(nibble));
      }
    face_hashes.push_back(h);
  }
  std::sort(face_hashes.begin(), face_hashes.end());  // face order must not matter
  std::uint64_t h = kFnvOffset;
  fnv_u64(h, solid.faces.size());
  fnv_u64(h, solid.edges.size());
  for (std::uint64_t fh : face_hashes) fnv_u64(h, fh);
  return h;
}

NoveltyMetrics novel_unique(const std::vector<BRepGraph>& gen,
                            const std::vector<BRepGraph>& train) {
  if (gen.empty()) throw BrepError(ErrorKind::ContractViolation, "novel_unique needs gen solids");
  std::vector<std::uint64_t> gen_hashes(gen.size());
  parallel_for(gen.size(), [&](size_t i) { gen_hashes[i] = quantized_solid_hash(gen[i]); });
  std::vector<std::uint64_t> train_hashes(train.size());
  parallel_for(train.size(), [&](size_t i) { train_hashes[i] = quantized_solid_hash(train[i]); });

  std::unordered_map<std::uint64_t, int> gen_counts;
  for (std::uint64_t h : gen_hashes) ++gen_counts[h];
  std::unordered_set<std::uint64_t> train_set(train_hashes.begin(), train_hashes.end());

  double unique = 0.0, novel = 0.0;
  for (std::uint64_t h : gen_hashes) {
    if (gen_counts[h] == 1) unique += 1.0;
    if (!train_set.count(h)) novel += 1.0;
  }
  const double n = static_cast<double>(gen.size());
  return {novel / n * 100.0, unique / n * 100.0};
}

std::string MetricsReport::to_text() const {
  std::ostringstream os;
  os << "cov:    " << cov << " %\n";
  os << "mmd:    " << mmd << " (x 10^2)\n";
  os << "jsd:    " << jsd << " (x 10^2)\n";
  if (novel >= 0.0) {
    os << "novel:  " << novel << " %\n";
    os << "unique: " << unique << " %\n";
  }
  os << "valid:  " << valid << " %\n";
  return os.str();
}

std::string MetricsReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"cov\": " << cov << ", \"mmd\": " << mmd << ", \"jsd\": " << jsd;
  if (novel >= 0.0) os << ", \"novel\": " << novel << ", \"unique\": " << unique;
  os << ", \"valid\": " << valid << "}";
  return os.str();
}

}  // namespace breptok
