#pragma once

#include <span>
#include <vector>

#include "breptok/geometry.hpp"

namespace breptok {

// Finite scalar quantization: each latent dimension is rounded onto a fixed
// lattice of L_i levels over [-1,1]; the level tuple packs into a codebook
// index with dimension 0 least significant.
struct FsqLevels {
  std::vector<int> levels;

  // The shipped configuration: L = [8,5,5,5], codebook size 1000.
  static const FsqLevels& standard();
  int codebook_size() const;
};

struct FsqResult {
  int index = 0;
  std::vector<double> snapped;
};

// Per dimension i: clamp v into [-1,1], k_i = round-half-away-from-zero of
// (v+1)/2 * (L_i - 1) clamped to [0, L_i-1], snapped_i = 2 k_i / (L_i-1) - 1.
// Throws ContractViolation on dimension mismatch.
FsqResult fsq_quantize(std::span<const double> v, const FsqLevels& levels);

// Mixed-radix decomposition back onto the lattice.  Throws InvalidCode when
// index is outside [0, codebook_size).
std::vector<double> fsq_dequantize(int index, const FsqLevels& levels);

inline constexpr int kLatentDim = 4;
inline constexpr int kFaceCells = 4;  // 2x2 quadrants
inline constexpr int kEdgeCells = 2;  // 2 halves

// Pre-quantization cell vectors plus their codebook indices.  Face cells are
// row-major over the (u, v) corner they anchor: cell 2a+b holds the fitted
// grid corner (u, v) = (31a, 31b) in dims 0-2.  Edge cells hold the two
// fitted endpoints.  Dim 3 carries arch coefficients in antisymmetric slot
// pairs (see PatchCodec).
struct FaceLatent {
  std::array<std::array<double, kLatentDim>, kFaceCells> cells{};
  std::array<int, kFaceCells> codes{};
};

struct EdgeLatent {
  std::array<std::array<double, kLatentDim>, kEdgeCells> cells{};
  std::array<int, kEdgeCells> codes{};
};

// Pluggable latent geometry codec.  Inputs are canonical grids (normalized
// into [-1,1]^3, canonical UV orientation); decode returns grids in the same
// canonical space.  A learned autoencoder can be swapped in here without
// touching traversal or token layout.
class LatentCodec {
 public:
  virtual ~LatentCodec() = default;
  virtual FaceLatent encode_face(const FaceGrid& canonical) const = 0;
  virtual FaceGrid decode_face(const std::array<int, kFaceCells>& codes) const = 0;
  virtual EdgeLatent encode_edge(const EdgeGrid& canonical) const = 0;
  virtual EdgeGrid decode_edge(const std::array<int, kEdgeCells>& codes) const = 0;
  virtual const FsqLevels& levels() const = 0;
};

// Deterministic reference codec.  Faces: each axis of the grid is fitted by
// least squares with a bilinear patch plus an even arch along u (basis
// 1 - u'^2, u' = (2u-31)/31, for the x and y axes); cells store the fitted
// corner positions in dims 0-2 and the two arch coefficients in dim 3,
// encoded as antisymmetric slot pairs B = (s+ - s-)/2 across cells (0,1) for
// y and (2,3) for x.  Decode evaluates bilinear(corners) + arch * (1-u'^2).
// Consequences: an all-equal code decodes to a constant grid, affine grids
// round-trip up to lattice snap, and decode-encode-decode returns the first
// decode bit for bit (the fit is an orthogonal projection whose recovered
// coefficients are already on the lattice).  Edges mirror this in 1D with 2
// fitted endpoints and one arch pair on y.
class PatchCodec final : public LatentCodec {
 public:
  FaceLatent encode_face(const FaceGrid& canonical) const override;
  FaceGrid decode_face(const std::array<int, kFaceCells>& codes) const override;
  EdgeLatent encode_edge(const EdgeGrid& canonical) const override;
  EdgeGrid decode_edge(const std::array<int, kEdgeCells>& codes) const override;
  const FsqLevels& levels() const override { return FsqLevels::standard(); }
};

const LatentCodec& patch_codec();

// Simple pooling baseline kept for comparison and as a second exercise of the
// pluggable contract.  Faces: cells are the four 16x16 quadrant means in dims
// 0-2 plus the quadrant bounding-box diagonal / sqrt(3) in dim 3; decode
// interpolates the quadrant centers bilinearly (anchors u = 7.5 and 23.5, so
// the outer rows extrapolate).  Edges use the two half means and the half
// chord length.  Coarser than PatchCodec: means of a span-filling axis sit
// near +-0.52, so reconstructions shrink toward the center.
class PoolingCodec final : public LatentCodec {
 public:
  FaceLatent encode_face(const FaceGrid& canonical) const override;
  FaceGrid decode_face(const std::array<int, kFaceCells>& codes) const override;
  EdgeLatent encode_edge(const EdgeGrid& canonical) const override;
  EdgeGrid decode_edge(const std::array<int, kEdgeCells>& codes) const override;
  const FsqLevels& levels() const override { return FsqLevels::standard(); }
};

const LatentCodec& pooling_codec();

}  // namespace breptok
