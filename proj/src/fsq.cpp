#include "breptok/fsq.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace breptok {

const FsqLevels& FsqLevels::standard() {
  static const FsqLevels levels{{8, 5, 5, 5}};
  return levels;
}

int FsqLevels::codebook_size() const {
  int n = 1;
  for (int l : levels) n *= l;
  return n;
}

FsqResult fsq_quantize(std::span<const double> v, const FsqLevels& levels) {
  if (v.size() != levels.levels.size())
    throw BrepError(ErrorKind::ContractViolation, "fsq_quantize: dimension mismatch");
  FsqResult out;
  out.snapped.resize(v.size());
  int radix = 1;
  for (size_t i = 0; i < v.size(); ++i) {
    int l = levels.levels[i];
    double c = std::clamp(v[i], -1.0, 1.0);
    // std::round is half-away-from-zero, the tie rule the lattice requires.
    int k = static_cast<int>(std::round((c + 1.0) / 2.0 * (l - 1)));
    k = std::clamp(k, 0, l - 1);
    out.snapped[i] = 2.0 * k / (l - 1) - 1.0;
    out.index += k * radix;
    radix *= l;
  }
  return out;
}

std::vector<double> fsq_dequantize(int index, const FsqLevels& levels) {
  if (index < 0 || index >= levels.codebook_size())
    throw BrepError(ErrorKind::InvalidCode, "fsq_dequantize: index outside codebook");
  std::vector<double> v(levels.levels.size());
  for (size_t i = 0; i < levels.levels.size(); ++i) {
    int l = levels.levels[i];
    int k = index % l;
    index /= l;
    v[i] = 2.0 * k / (l - 1) - 1.0;
  }
  return v;
}

namespace {

// Discrete basis over the symmetric row parameter u' = (2u - 31)/31.  The
// five fit functions {1, u', v', u'v', w(u') - mean w} with w = 1 - u'^2 are
// mutually orthogonal under the grid sum (the negation u' -> -u' is exact in
// this form), so least-squares coefficients are plain scaled inner products.
struct BasisTables {
  std::array<double, kGridN> ub{};  // u'
  std::array<double, kGridN> wc{};  // w(u') centered to zero mean
  double s2 = 0.0;                  // sum of u'^2 over one row
  double wm = 0.0;                  // mean of w over one row
  double w2 = 0.0;                  // sum of wc^2 over one row

  BasisTables() {
    for (int i = 0; i < kGridN; ++i) {
      ub[i] = (2 * i - (kGridN - 1)) / static_cast<double>(kGridN - 1);
      s2 += ub[i] * ub[i];
    }
    wm = 1.0 - s2 / kGridN;
    for (int i = 0; i < kGridN; ++i) {
      wc[i] = (1.0 - ub[i] * ub[i]) - wm;
      w2 += wc[i] * wc[i];
    }
  }
};

const BasisTables& tables() {
  static const BasisTables t;
  return t;
}

// An arch coefficient rides in a pair of dim-3 slots as (s+, s-) with
// B = (s+ - s-)/2, so a code whose cells are all equal always means zero
// arch.  Quantizing B to quarter steps keeps both halves on the 5-level
// lattice: m0 - m1 = round(4B) with |m0|, |m1| <= 2.
std::pair<double, double> arch_slots(double e) {
  int k = static_cast<int>(std::round(4.0 * std::clamp(e, -1.0, 1.0)));
  int m0 = (k >= 0) ? (k + 1) / 2 : (k - 1) / 2;
  int m1 = m0 - k;
  return {0.5 * m0, 0.5 * m1};
}

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

// The exact lattice point fsq_quantize will select for dimension l.
double snap_to(double c, int l) {
  int k = static_cast<int>(std::round((std::clamp(c, -1.0, 1.0) + 1.0) / 2.0 * (l - 1)));
  k = std::clamp(k, 0, l - 1);
  return 2.0 * k / (l - 1) - 1.0;
}

Vec3 snap_corner(const Vec3& c, const FsqLevels& levels) {
  return {snap_to(c.x, levels.levels[0]), snap_to(c.y, levels.levels[1]),
          snap_to(c.z, levels.levels[2])};
}

constexpr double kSqrt3 = 1.7320508075688772;
// Pooling-codec cell anchors sit at the quadrant centers: u = 7.5 and
// u = 23.5, i.e. interpolation parameter s = (u - 7.5) / 16.
constexpr double kAnchor = (kGridN / 2 - 1) * 0.5;  // 7.5
constexpr double kCellSpan = kGridN / 2;            // 16

std::array<double, kLatentDim> cell_vector(std::span<const Vec3> pts) {
  Vec3 sum{};
  Aabb box{pts[0], pts[0]};
  for (const Vec3& p : pts) {
    sum = sum + p;
    box.expand(p);
  }
  double inv = 1.0 / static_cast<double>(pts.size());
  double diag = norm(box.extent()) / kSqrt3;
  std::array<double, kLatentDim> cell{sum.x * inv, sum.y * inv, sum.z * inv, diag};
  for (double& c : cell) c = std::clamp(c, -1.0, 1.0);
  return cell;
}

}  // namespace

FaceLatent PatchCodec::encode_face(const FaceGrid& canonical) const {
  const BasisTables& t = tables();
  // Per axis, project the grid onto the orthogonal fit basis.  The sums
  // factorize over the uniform grid: denominators are 1024, 32*s2, 32*s2,
  // s2^2 and 32*w2.
  Vec3 sf{}, sfu{}, sfv{}, sfuv{}, sfw{};
  for (int u = 0; u < kGridN; ++u) {
    double ub = t.ub[u], wc = t.wc[u];
    for (int v = 0; v < kGridN; ++v) {
      const Vec3& f = canonical.at(u, v);
      double vb = t.ub[v];
      sf = sf + f;
      sfu = sfu + f * ub;
      sfv = sfv + f * vb;
      sfuv = sfuv + f * (ub * vb);
      sfw = sfw + f * wc;
    }
  }
  double n = kGridN * kGridN;
  Vec3 a = sf * (1.0 / n);
  Vec3 b = sfu * (1.0 / (kGridN * t.s2));
  Vec3 c = sfv * (1.0 / (kGridN * t.s2));
  Vec3 d = sfuv * (1.0 / (t.s2 * t.s2));
  Vec3 e = sfw * (1.0 / (kGridN * t.w2));

  // Decode reconstructs bilinear(corners) + arch * (1 - u'^2).  The centered
  // bump keeps the corner fit clean (e * mean(w) folds into the constant
  // term); the corners are then snapped onto the decode lattice and the two
  // arch coefficients are refitted against that snapped bilinear with the raw
  // bump, so they absorb the projection of the corner snap error as well as
  // the curvature.  Arch slots serve x and y: in canonical frames every
  // corpus curve runs angularly along u while z stays ruled, so a z arch
  // would sit idle.
  Vec3 base = a - Vec3{clamp1(e.x), clamp1(e.y), 0.0} * t.wm;

  FaceLatent out;
  std::array<Vec3, kFaceCells> snapped;
  for (int cell = 0; cell < kFaceCells; ++cell) {
    double su = (cell & 2) ? 1.0 : -1.0;
    double sv = (cell & 1) ? 1.0 : -1.0;
    Vec3 corner = base + b * su + c * sv + d * (su * sv);
    out.cells[cell] = {clamp1(corner.x), clamp1(corner.y), clamp1(corner.z), 0.0};
    snapped[cell] = snap_corner(corner, levels());
  }
  double rx = 0.0, ry = 0.0, ww = 0.0;
  for (int u = 0; u < kGridN; ++u) {
    double s = u / double(kGridN - 1);
    double w = 1.0 - t.ub[u] * t.ub[u];
    ww += kGridN * w * w;
    for (int v = 0; v < kGridN; ++v) {
      double tt = v / double(kGridN - 1);
      const Vec3& f = canonical.at(u, v);
      for (int axis = 0; axis < 2; ++axis) {
        double c00 = snapped[0][axis], c01 = snapped[1][axis];
        double c10 = snapped[2][axis], c11 = snapped[3][axis];
        double bil =
            (1.0 - s) * ((1.0 - tt) * c00 + tt * c01) + s * ((1.0 - tt) * c10 + tt * c11);
        (axis == 0 ? rx : ry) += (f[axis] - bil) * w;
      }
    }
  }
  std::pair<double, double> py = arch_slots(ry / ww);
  std::pair<double, double> px = arch_slots(rx / ww);
  out.cells[0][3] = py.first;
  out.cells[1][3] = py.second;
  out.cells[2][3] = px.first;
  out.cells[3][3] = px.second;
  for (int cell = 0; cell < kFaceCells; ++cell)
    out.codes[cell] = fsq_quantize(out.cells[cell], levels()).index;
  return out;
}

FaceGrid PatchCodec::decode_face(const std::array<int, kFaceCells>& codes) const {
  const BasisTables& t = tables();
  std::array<std::vector<double>, kFaceCells> cell;
  for (int i = 0; i < kFaceCells; ++i) cell[i] = fsq_dequantize(codes[i], levels());
  double by = (cell[0][3] - cell[1][3]) / 2.0;
  double bx = (cell[2][3] - cell[3][3]) / 2.0;
  FaceGrid out;
  for (int u = 0; u < kGridN; ++u) {
    double s = u / double(kGridN - 1);
    double w = 1.0 - t.ub[u] * t.ub[u];
    for (int v = 0; v < kGridN; ++v) {
      double tt = v / double(kGridN - 1);
      for (int axis = 0; axis < 3; ++axis) {
        double c00 = cell[0][axis], c01 = cell[1][axis];
        double c10 = cell[2][axis], c11 = cell[3][axis];
        out.at(u, v)[axis] =
            (1.0 - s) * ((1.0 - tt) * c00 + tt * c01) + s * ((1.0 - tt) * c10 + tt * c11);
      }
      out.at(u, v).x += bx * w;
      out.at(u, v).y += by * w;
    }
  }
  return out;
}

EdgeLatent PatchCodec::encode_edge(const EdgeGrid& canonical) const {
  const BasisTables& t = tables();
  // 1D projection onto {1, u', w(u') - mean w}: the cells hold the fitted
  // endpoint positions; the single arch pair serves y, matching the face
  // convention.
  Vec3 sf{}, sfu{}, sfw{};
  for (int i = 0; i < kGridN; ++i) {
    const Vec3& f = canonical.points[i];
    sf = sf + f;
    sfu = sfu + f * t.ub[i];
    sfw = sfw + f * t.wc[i];
  }
  Vec3 a = sf * (1.0 / kGridN);
  Vec3 b = sfu * (1.0 / t.s2);
  Vec3 e = sfw * (1.0 / t.w2);
  Vec3 base = a - Vec3{0.0, clamp1(e.y), 0.0} * t.wm;

  EdgeLatent out;
  std::array<Vec3, kEdgeCells> snapped;
  for (int h = 0; h < kEdgeCells; ++h) {
    Vec3 endpoint = base + b * (h ? 1.0 : -1.0);
    out.cells[h] = {clamp1(endpoint.x), clamp1(endpoint.y), clamp1(endpoint.z), 0.0};
    snapped[h] = snap_corner(endpoint, levels());
  }
  // Refit the arch against the snapped endpoints with the raw bump, as for
  // faces, so it soaks up the endpoint snap error too.
  double ry = 0.0, ww = 0.0;
  for (int i = 0; i < kGridN; ++i) {
    double s = i / double(kGridN - 1);
    double w = 1.0 - t.ub[i] * t.ub[i];
    ww += w * w;
    double bil = (1.0 - s) * snapped[0].y + s * snapped[1].y;
    ry += (canonical.points[i].y - bil) * w;
  }
  std::pair<double, double> py = arch_slots(ry / ww);
  out.cells[0][3] = py.first;
  out.cells[1][3] = py.second;
  for (int h = 0; h < kEdgeCells; ++h)
    out.codes[h] = fsq_quantize(out.cells[h], levels()).index;
  return out;
}

EdgeGrid PatchCodec::decode_edge(const std::array<int, kEdgeCells>& codes) const {
  const BasisTables& t = tables();
  std::array<std::vector<double>, kEdgeCells> cell;
  for (int i = 0; i < kEdgeCells; ++i) cell[i] = fsq_dequantize(codes[i], levels());
  double by = (cell[0][3] - cell[1][3]) / 2.0;
  EdgeGrid out;
  for (int u = 0; u < kGridN; ++u) {
    double s = u / double(kGridN - 1);
    double w = 1.0 - t.ub[u] * t.ub[u];
    for (int axis = 0; axis < 3; ++axis)
      out.points[u][axis] = (1.0 - s) * cell[0][axis] + s * cell[1][axis];
    out.points[u].y += by * w;
  }
  return out;
}

const LatentCodec& patch_codec() {
  static const PatchCodec codec;
  return codec;
}

FaceLatent PoolingCodec::encode_face(const FaceGrid& canonical) const {
  FaceLatent out;
  std::array<Vec3, 16 * 16> quad;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      int n = 0;
      for (int u = 16 * a; u < 16 * a + 16; ++u)
        for (int v = 16 * b; v < 16 * b + 16; ++v) quad[n++] = canonical.at(u, v);
      int cell = a * 2 + b;
      out.cells[cell] = cell_vector(quad);
      out.codes[cell] = fsq_quantize(out.cells[cell], levels()).index;
    }
  return out;
}

FaceGrid PoolingCodec::decode_face(const std::array<int, kFaceCells>& codes) const {
  std::array<std::vector<double>, kFaceCells> cell;
  for (int i = 0; i < kFaceCells; ++i) cell[i] = fsq_dequantize(codes[i], levels());
  FaceGrid out;
  for (int u = 0; u < kGridN; ++u) {
    double s = (u - kAnchor) / kCellSpan;
    for (int v = 0; v < kGridN; ++v) {
      double t = (v - kAnchor) / kCellSpan;
      for (int axis = 0; axis < 3; ++axis) {
        double c00 = cell[0][axis], c01 = cell[1][axis];
        double c10 = cell[2][axis], c11 = cell[3][axis];
        out.at(u, v)[axis] =
            (1.0 - s) * ((1.0 - t) * c00 + t * c01) + s * ((1.0 - t) * c10 + t * c11);
      }
    }
  }
  return out;
}

EdgeLatent PoolingCodec::encode_edge(const EdgeGrid& canonical) const {
  EdgeLatent out;
  for (int h = 0; h < kEdgeCells; ++h) {
    std::span<const Vec3> half(canonical.points.data() + 16 * h, 16);
    Vec3 sum{};
    for (const Vec3& p : half) sum = sum + p;
    double chord = norm(half[15] - half[0]);
    std::array<double, kLatentDim> cell{sum.x / 16.0, sum.y / 16.0, sum.z / 16.0, chord};
    for (double& c : cell) c = std::clamp(c, -1.0, 1.0);
    out.cells[h] = cell;
    out.codes[h] = fsq_quantize(cell, levels()).index;
  }
  return out;
}

EdgeGrid PoolingCodec::decode_edge(const std::array<int, kEdgeCells>& codes) const {
  std::array<std::vector<double>, kEdgeCells> cell;
  for (int i = 0; i < kEdgeCells; ++i) cell[i] = fsq_dequantize(codes[i], levels());
  EdgeGrid out;
  for (int u = 0; u < kGridN; ++u) {
    double s = (u - kAnchor) / kCellSpan;
    for (int axis = 0; axis < 3; ++axis)
      out.points[u][axis] = (1.0 - s) * cell[0][axis] + s * cell[1][axis];
  }
  return out;
}

const LatentCodec& pooling_codec() {
  static const PoolingCodec codec;
  return codec;
}

}  // namespace breptok
