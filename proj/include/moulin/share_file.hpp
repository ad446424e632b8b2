#pragma once

// Share files and byte-stream coding.
//
// Layout (all integers big-endian):
//   "MOUL" | u8 version | u32 n, k, d, s | u32 modulus | u32 node | u32 a_h |
//   u64 chunk count | chunks * alpha symbols of ceil(bits(modulus)/8) bytes.
// The plaintext is prefixed with its u64 length, zero-padded to a multiple of
// M and coded one byte per symbol, M symbols per chunk.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "moulin/moulin_code.hpp"

namespace moulin {

inline constexpr std::uint8_t share_format_version = 1;
inline constexpr std::uint32_t default_byte_modulus = 257;

struct ShareHeader {
  std::uint8_t version = share_format_version;
  std::uint32_t n = 0, k = 0, d = 0, s = 0;
  std::uint32_t modulus = 0;
  std::uint32_t node = 0;
  std::uint32_t star_scalar = 0;
  std::uint64_t chunks = 0;

  bool same_code(const ShareHeader& o) const noexcept {
    return version == o.version && n == o.n && k == o.k && d == o.d && s == o.s && modulus == o.modulus &&
           chunks == o.chunks;
  }
};

struct ShareFile {
  ShareHeader header;
  /// chunks x alpha symbols.
  std::vector<std::vector<Element>> chunks;

  friend bool operator==(const ShareFile& a, const ShareFile& b) {
    return a.header.same_code(b.header) && a.header.node == b.header.node &&
           a.header.star_scalar == b.header.star_scalar && a.chunks == b.chunks;
  }
};

std::size_t symbol_width(std::uint32_t modulus) noexcept;

void write_share(std::ostream& out, const ShareFile& share);
ShareFile read_share(std::istream& in);
void save_share(const std::string& path, const ShareFile& share);
ShareFile load_share(const std::string& path);

/// Vandermonde instance for byte coding; the modulus must be prime and at
/// least 257 and n.
CodeInstance byte_instance(int n, int k, int d, int s, std::uint32_t modulus = default_byte_modulus);
/// Instance described by a header, with its star scalar checked.
CodeInstance instance_for(const ShareHeader& header);

std::vector<ShareFile> encode_bytes(const CodeInstance& inst, std::span<const std::uint8_t> data);
/// Needs k shares with distinct nodes and matching headers.
std::vector<std::uint8_t> decode_shares(std::span<const ShareFile> shares);

struct FileRepair {
  std::vector<ShareFile> rebuilt;  // ascending node order
  std::vector<std::uint32_t> helpers;
  std::uint64_t symbols_per_helper_per_chunk = 0;
  std::uint64_t expected_per_chunk = 0;  // beta_c, or alpha for the fallback
  std::uint64_t symbols_per_helper = 0;  // over all chunks
  bool fallback = false;
};

/// Rebuilds the failed nodes from the first d helper shares (lowest index).
FileRepair repair_shares(std::span<const ShareFile> helpers, const std::vector<std::uint32_t>& failed);

}  // namespace moulin
