#include "breptok/vocabulary.hpp"

#include <cmath>
#include <sstream>

namespace breptok {

TokenKind classify_token(Token id) {
  switch (id) {
    case kSeqStart: return TokenKind::SeqStart;
    case kSeqEnd: return TokenKind::SeqEnd;
    case kBrepStart: return TokenKind::BrepStart;
    case kBrepEnd: return TokenKind::BrepEnd;
    case kLevelEnd: return TokenKind::LevelEnd;
    case kFaceEnd: return TokenKind::FaceEnd;
    case kMetaOpen: return TokenKind::MetaOpen;
    case kMetaClose: return TokenKind::MetaClose;
    default: break;
  }
  if (id >= kMetaEasy && id <= kMetaRandom) return TokenKind::MetaClass;
  if (id >= kCoordBase && id < kCoordBase + kCoordBins) return TokenKind::Coord;
  if (id >= kFaceCodeBase && id < kFaceCodeBase + kCodebookSize) return TokenKind::FaceCode;
  if (id >= kEdgeCodeBase && id < kEdgeCodeBase + kCodebookSize) return TokenKind::EdgeCode;
  if (id >= kRefTagBase && id < kRefTagBase + kRefTagCount) return TokenKind::RefTag;
  if (id == kRefUnassigned) return TokenKind::RefUnassigned;
  return TokenKind::Invalid;
}

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::SeqStart: return "SEQ_START";
    case TokenKind::SeqEnd: return "SEQ_END";
    case TokenKind::BrepStart: return "BREP_START";
    case TokenKind::BrepEnd: return "BREP_END";
    case TokenKind::LevelEnd: return "LEVEL_END";
    case TokenKind::FaceEnd: return "FACE_END";
    case TokenKind::MetaOpen: return "META_OPEN";
    case TokenKind::MetaClose: return "META_CLOSE";
    case TokenKind::MetaClass: return "meta-class";
    case TokenKind::Coord: return "coordinate bin";
    case TokenKind::FaceCode: return "face code";
    case TokenKind::EdgeCode: return "edge code";
    case TokenKind::RefTag: return "reference tag";
    case TokenKind::RefUnassigned: return "T_u";
    case TokenKind::Invalid: return "invalid id";
  }
  return "?";
}

int quantize_coord(double v) {
  // NaN-safe clamp: comparisons with NaN are false, which pins v to -1.
  if (!(v > -1.0)) v = -1.0;
  if (v > 1.0) v = 1.0;
  int bin = static_cast<int>(std::floor((v + 1.0) / 2.0 * kCoordBins));
  return bin >= kCoordBins ? kCoordBins - 1 : bin;
}

double dequantize_coord(int bin) { return 2.0 * (bin + 0.5) / kCoordBins - 1.0; }

std::string vocabulary_manifest() {
  std::ostringstream out;
  out << "token vocabulary v" << kVocabularyVersion << " (" << kVocabularySize << " ids)\n"
      << "id range     kind\n"
      << "0            SEQ_START\n"
      << "1            SEQ_END\n"
      << "2            BREP_START\n"
      << "3            BREP_END\n"
      << "4            LEVEL_END\n"
      << "5            FACE_END\n"
      << "6            META_OPEN\n"
      << "7            META_CLOSE\n"
      << "8..11        complexity class: EASY, MEDIUM, HARD, RANDOM\n"
      << "12..1035     coordinate bins, 1024 equal bins over [-1,1], bin-center decode\n"
      << "1036..2035   face latent codebook, FSQ levels [8,5,5,5], dim 0 least significant\n"
      << "2036..3035   edge latent codebook, same FSQ layout\n"
      << "3036..3235   reference tags T0..T199 into the two-level face window\n"
      << "3236         T_u, unassigned edge reference (autocomplete conditioning)\n";
  return out.str();
}

}  // namespace breptok
