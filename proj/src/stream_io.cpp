#include "breptok/stream_io.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include "breptok/errors.hpp"

namespace breptok {

namespace {

constexpr char kMagic[4] = {'A', 'B', 'T', 'K'};
constexpr std::uint8_t kBinaryVersion = 1;

[[noreturn]] void format_error(const std::string& what, std::uint64_t offset) {
  std::ostringstream os;
  os << what << " (byte " << offset << ")";
  throw BrepError(ErrorKind::FormatError, os.str());
}

}  // namespace

void write_tokens_binary(std::ostream& os, const TokenStream& tokens) {
  if (tokens.size() > std::numeric_limits<std::uint32_t>::max())
    throw BrepError(ErrorKind::FormatError, "token count does not fit the 32-bit header field");
  os.write(kMagic, 4);
  os.put(static_cast<char>(kBinaryVersion));
  const auto count = static_cast<std::uint32_t>(tokens.size());
  char header[4];
  for (int i = 0; i < 4; ++i) header[i] = static_cast<char>((count >> (8 * i)) & 0xff);
  os.write(header, 4);
  for (Token t : tokens) {
    char b[2] = {static_cast<char>(t & 0xff), static_cast<char>((t >> 8) & 0xff)};
    os.write(b, 2);
  }
  if (!os) throw BrepError(ErrorKind::FormatError, "write failed");
}

TokenStream read_tokens_binary(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4)) format_error("file too short for the magic", 0);
  for (int i = 0; i < 4; ++i)
    if (magic[i] != kMagic[i]) format_error("bad magic, not a token container", static_cast<std::uint64_t>(i));
  int version = is.get();
  if (version == std::char_traits<char>::eof()) format_error("file ends before the version byte", 4);
  if (version != kBinaryVersion)
    format_error("unsupported container version " + std::to_string(version), 4);
  char header[4];
  if (!is.read(header, 4)) format_error("file ends inside the token count", 5);
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i)
    count |= static_cast<std::uint32_t>(static_cast<unsigned char>(header[i])) << (8 * i);
  TokenStream tokens;
  tokens.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    char b[2];
    if (!is.read(b, 2))
      format_error("file ends inside token " + std::to_string(i) + " of " + std::to_string(count),
                   9 + 2ull * i);
    tokens.push_back(static_cast<Token>(static_cast<unsigned char>(b[0]) |
                                        (static_cast<unsigned char>(b[1]) << 8)));
  }
  // Trailing bytes mean a corrupt count; surface it rather than ignore.
  if (is.peek() != std::char_traits<char>::eof())
    format_error("unexpected bytes after the last token", 9 + 2ull * count);
  return tokens;
}

void write_tokens_text(std::ostream& os, const TokenStream& tokens) {
  os << "# token stream, " << tokens.size() << " ids, vocabulary v" << kVocabularyVersion << "\n";
  for (Token t : tokens) os << t << "\n";
  if (!os) throw BrepError(ErrorKind::FormatError, "write failed");
}

TokenStream read_tokens_text(std::istream& is) {
  TokenStream tokens;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size() || line[i] == '#') continue;
    long value = 0;
    bool any_digit = false;
    size_t j = i;
    while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
      value = value * 10 + (line[j] - '0');
      any_digit = true;
      if (value > 65535) break;
      ++j;
    }
    while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (!any_digit || value > 65535 || (j < line.size() && line[j] != '#'))
      throw BrepError(ErrorKind::FormatError,
                      "line " + std::to_string(line_no) + ": expected a decimal id in [0, 65535]");
    tokens.push_back(static_cast<Token>(value));
  }
  return tokens;
}

void save_tokens(const std::string& path, const TokenStream& tokens, bool text) {
  std::ofstream os(path, text ? std::ios::out : (std::ios::out | std::ios::binary));
  if (!os) throw BrepError(ErrorKind::FormatError, "cannot open for writing: " + path);
  if (text)
    write_tokens_text(os, tokens);
  else
    write_tokens_binary(os, tokens);
  os.flush();
  if (!os) throw BrepError(ErrorKind::FormatError, "write failed: " + path);
}

TokenStream load_tokens(const std::string& path) {
  std::ifstream is(path, std::ios::in | std::ios::binary);
  if (!is) throw BrepError(ErrorKind::FormatError, "cannot open: " + path);
  char magic[4] = {0, 0, 0, 0};
  is.read(magic, 4);
  const bool binary = is.gcount() == 4 && magic[0] == kMagic[0] && magic[1] == kMagic[1] &&
                      magic[2] == kMagic[2] && magic[3] == kMagic[3];
  is.clear();
  is.seekg(0);
  if (binary) return read_tokens_binary(is);
  return read_tokens_text(is);
}

}  // namespace breptok
