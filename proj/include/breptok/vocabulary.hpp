#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace breptok {

// Discrete vocabulary, frozen for interchange stability.
//
//   id        kind
//   0..5      sentinels: SEQ_START, SEQ_END, BREP_START, BREP_END,
//             LEVEL_END, FACE_END
//   6..11     meta: META_OPEN, META_CLOSE, EASY, MEDIUM, HARD, RANDOM
//   12..1035  coordinate bins (1024 bins over [-1,1])
//   1036..2035 face latent codebook (FSQ, 1000 codes)
//   2036..3035 edge latent codebook (FSQ, 1000 codes)
//   3036..3235 reference tags T0..T199
//   3236      T_u (unassigned reference, autocomplete only)
//
// Total 3237 ids.  Face and edge codebooks are deliberately separate ranges
// so a code token in the wrong slot is a parse error, not silent damage.

using Token = std::uint16_t;
using TokenStream = std::vector<Token>;

inline constexpr Token kSeqStart = 0;
inline constexpr Token kSeqEnd = 1;
inline constexpr Token kBrepStart = 2;
inline constexpr Token kBrepEnd = 3;
inline constexpr Token kLevelEnd = 4;
inline constexpr Token kFaceEnd = 5;
inline constexpr Token kMetaOpen = 6;
inline constexpr Token kMetaClose = 7;
inline constexpr Token kMetaEasy = 8;
inline constexpr Token kMetaMedium = 9;
inline constexpr Token kMetaHard = 10;
inline constexpr Token kMetaRandom = 11;

inline constexpr int kCoordBins = 1024;
inline constexpr Token kCoordBase = 12;
inline constexpr int kCodebookSize = 1000;
inline constexpr Token kFaceCodeBase = kCoordBase + kCoordBins;       // 1036
inline constexpr Token kEdgeCodeBase = kFaceCodeBase + kCodebookSize; // 2036
inline constexpr int kRefTagCount = 200;
inline constexpr Token kRefTagBase = kEdgeCodeBase + kCodebookSize;   // 3036
inline constexpr Token kRefUnassigned = kRefTagBase + kRefTagCount;   // 3236
inline constexpr int kVocabularySize = kRefUnassigned + 1;            // 3237

inline constexpr int kSchemaVersion = 1;
inline constexpr int kVocabularyVersion = 1;
inline constexpr int kStreamFormatVersion = 1;

enum class TokenKind {
  SeqStart,
  SeqEnd,
  BrepStart,
  BrepEnd,
  LevelEnd,
  FaceEnd,
  MetaOpen,
  MetaClose,
  MetaClass,
  Coord,
  FaceCode,
  EdgeCode,
  RefTag,
  RefUnassigned,
  Invalid,  // id outside the vocabulary
};

TokenKind classify_token(Token id);
const char* token_kind_name(TokenKind kind);

// Coordinate binning over [-1,1]: bin = min(1023, floor((v+1)/2 * 1024)) after
// clamping; dequantization returns the bin center 2*(bin+0.5)/1024 - 1.
int quantize_coord(double v);
double dequantize_coord(int bin);

// Human-readable versioned id-range table.
std::string vocabulary_manifest();

}  // namespace breptok
