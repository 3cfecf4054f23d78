#pragma once

#include <iosfwd>
#include <string>

#include "breptok/vocabulary.hpp"

namespace breptok {

// Binary token container, version 1:
//
//   bytes 0..3   magic "ABTK"
//   byte  4      format version (1)
//   bytes 5..8   token count, u32 little-endian
//   then         count token ids, u16 little-endian each
//
// The container carries raw ids; whether they form a valid stream is the
// parser's concern.  Read errors throw BrepError{FormatError} with the byte
// offset where the file went wrong.
void write_tokens_binary(std::ostream& os, const TokenStream& tokens);
TokenStream read_tokens_binary(std::istream& is);

// Text container: one decimal id per line.  Blank lines and lines whose first
// non-space character is '#' are ignored; ids must fit in [0, 65535].
void write_tokens_text(std::ostream& os, const TokenStream& tokens);
TokenStream read_tokens_text(std::istream& is);

// File helpers.  load_tokens sniffs the magic and accepts either container.
void save_tokens(const std::string& path, const TokenStream& tokens, bool text);
TokenStream load_tokens(const std::string& path);

}  // namespace breptok
