#include "moulin/share_file.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "moulin/code_params.hpp"
#include "moulin/errors.hpp"

namespace moulin {

namespace {

constexpr char magic[4] = {'M', 'O', 'U', 'L'};

void put_be(std::ostream& out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = width; i-- > 0;) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_be(std::istream& in, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw CodingError("share file truncated");
    v = (v << 8) | static_cast<std::uint8_t>(c);
  }
  return v;
}

std::uint32_t get_u32(std::istream& in) { return static_cast<std::uint32_t>(get_be(in, 4)); }

}  // namespace

std::size_t symbol_width(std::uint32_t modulus) noexcept {
  return (static_cast<std::size_t>(std::bit_width(modulus - 1)) + 7) / 8;
}

void write_share(std::ostream& out, const ShareFile& share) {
  const auto& h = share.header;
  out.write(magic, 4);
  out.put(static_cast<char>(h.version));
  for (auto v : {h.n, h.k, h.d, h.s, h.modulus, h.node, h.star_scalar}) put_be(out, v, 4);
  put_be(out, h.chunks, 8);
  const auto width = symbol_width(h.modulus);
  for (const auto& chunk : share.chunks)
    for (auto x : chunk) put_be(out, x, width);
  if (!out) throw CodingError("failed to write share");
}

ShareFile read_share(std::istream& in) {
  char m[4] = {};
  if (!in.read(m, 4) || !std::equal(m, m + 4, magic)) throw CodingError("not a share file (bad magic)");
  ShareFile out;
  auto& h = out.header;
  h.version = static_cast<std::uint8_t>(get_be(in, 1));
  if (h.version != share_format_version) throw CodingError("unsupported share format version");
  h.n = get_u32(in);
  h.k = get_u32(in);
  h.d = get_u32(in);
  h.s = get_u32(in);
  h.modulus = get_u32(in);
  h.node = get_u32(in);
  h.star_scalar = get_u32(in);
  h.chunks = get_be(in, 8);
  if (h.n > 4096 || h.k > 64 || h.d > 64 || h.s > 65) throw CodingError("share header parameters out of range");
  require_admissible(static_cast<int>(h.n), static_cast<int>(h.k), static_cast<int>(h.d), static_cast<int>(h.s));
  if (h.modulus < 2 || !is_prime(h.modulus)) throw CodingError("share header modulus is not prime");
  if (h.node >= h.n) throw CodingError("share header node index out of range");
  const auto alpha = closed_form_params(static_cast<int>(h.n), static_cast<int>(h.k), static_cast<int>(h.d),
                                        static_cast<int>(h.s))
                         .alpha;
  const auto width = symbol_width(h.modulus);
  for (std::uint64_t c = 0; c < h.chunks; ++c) {
    std::vector<Element> chunk(alpha);
    for (auto& x : chunk) {
      const auto v = get_be(in, width);
      if (v >= h.modulus) throw CodingError("share symbol outside the field");
      x = static_cast<Element>(v);
    }
    out.chunks.push_back(std::move(chunk));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw CodingError("trailing bytes after share payload");
  return out;
}

void save_share(const std::string& path, const ShareFile& share) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CodingError("cannot write " + path);
  write_share(out, share);
}

ShareFile load_share(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CodingError("cannot read " + path);
  try {
    return read_share(in);
  } catch (const std::exception& e) {
    throw CodingError(path + ": " + e.what());
  }
}

CodeInstance byte_instance(int n, int k, int d, int s, std::uint32_t modulus) {
  require_admissible(n, k, d, s);
  if (modulus < 257) throw FieldTooSmallError("byte coding needs a modulus of at least 257");
  if (!is_prime(modulus)) throw ParameterError("modulus " + std::to_string(modulus) + " is not prime");
  return build_vandermonde_instance(n, k, d, s, modulus);
}

CodeInstance instance_for(const ShareHeader& header) {
  auto inst = byte_instance(static_cast<int>(header.n), static_cast<int>(header.k), static_cast<int>(header.d),
                            static_cast<int>(header.s), header.modulus);
  if (inst.stars.star_scalars.at(header.node) != header.star_scalar)
    throw CodingError("star scalar in header does not match node " + std::to_string(header.node));
  return inst;
}

std::vector<ShareFile> encode_bytes(const CodeInstance& inst, std::span<const std::uint8_t> data) {
  const std::size_t m = inst.params.file_size;
  std::vector<Element> symbols;
  symbols.reserve(data.size() + 8 + m);
  for (std::size_t i = 8; i-- > 0;) symbols.push_back(static_cast<Element>((std::uint64_t{data.size()} >> (8 * i)) & 0xff));
  for (auto b : data) symbols.push_back(b);
  symbols.resize((symbols.size() + m - 1) / m * m, 0);
  const std::size_t chunks = symbols.size() / m;

  std::vector<ShareFile> out(static_cast<std::size_t>(inst.n()));
  for (std::size_t h = 0; h < out.size(); ++h) {
    auto& hd = out[h].header;
    hd.n = static_cast<std::uint32_t>(inst.n());
    hd.k = static_cast<std::uint32_t>(inst.k());
    hd.d = static_cast<std::uint32_t>(inst.d());
    hd.s = static_cast<std::uint32_t>(inst.s());
    hd.modulus = inst.field.modulus();
    hd.node = static_cast<std::uint32_t>(h);
    hd.star_scalar = inst.stars.star_scalars.at(h);
    hd.chunks = chunks;
  }
  for (std::size_t c = 0; c < chunks; ++c) {
    const auto phi = encode(inst, std::span(symbols).subspan(c * m, m));
    for (std::size_t h = 0; h < out.size(); ++h) out[h].chunks.push_back(extract_node(inst, phi, h).symbols);
  }
  return out;
}

std::vector<std::uint8_t> decode_shares(std::span<const ShareFile> shares) {
  if (shares.empty()) throw CodingError("no shares given");
  const auto& head = shares.front().header;
  std::set<std::uint32_t> nodes;
  for (const auto& sh : shares) {
    if (!sh.header.same_code(head)) throw CodingError("share headers do not match");
    if (!nodes.insert(sh.header.node).second) throw CodingError("node " + std::to_string(sh.header.node) + " given twice");
  }
  if (shares.size() < head.k)
    throw CodingError("decoding needs k = " + std::to_string(head.k) + " shares, got " + std::to_string(shares.size()));
  const auto inst = instance_for(head);
  for (const auto& sh : shares) instance_for(sh.header);

  std::vector<std::uint8_t> bytes;
  for (std::uint64_t c = 0; c < head.chunks; ++c) {
    std::vector<NodeContent> pick;
    for (std::size_t i = 0; i < head.k; ++i) pick.push_back({shares[i].header.node, shares[i].chunks[c]});
    for (auto x : decode_message(inst, download(inst, pick))) {
      if (x > 0xff) throw CodingError("decoded symbol is not a byte; shares are corrupt");
      bytes.push_back(static_cast<std::uint8_t>(x));
    }
  }
  if (bytes.size() < 8) throw CodingError("decoded stream lacks a length prefix");
  std::uint64_t len = 0;
  for (std::size_t i = 0; i < 8; ++i) len = (len << 8) | bytes[i];
  if (len > bytes.size() - 8) throw CodingError("length prefix exceeds decoded data; shares are corrupt");
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(len)};
}

FileRepair repair_shares(std::span<const ShareFile> helpers, const std::vector<std::uint32_t>& failed) {
  if (helpers.empty()) throw CodingError("no helper shares given");
  if (failed.empty()) throw CodingError("no failed nodes given");
  const auto& head = helpers.front().header;
  std::vector<const ShareFile*> sorted;
  for (const auto& sh : helpers) {
    if (!sh.header.same_code(head)) throw CodingError("share headers do not match");
    sorted.push_back(&sh);
  }
  std::ranges::sort(sorted, {}, [](const ShareFile* s) { return s->header.node; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i]->header.node == sorted[i - 1]->header.node)
      throw CodingError("node " + std::to_string(sorted[i]->header.node) + " given twice");

  auto fail_sorted = failed;
  std::ranges::sort(fail_sorted);
  if (std::ranges::adjacent_find(fail_sorted) != fail_sorted.end()) throw CodingError("failed node listed twice");
  for (auto f : fail_sorted) {
    if (f >= head.n) throw CodingError("node " + std::to_string(f) + " does not exist");
    for (const auto* sh : sorted)
      if (sh->header.node == f) throw CodingError("node " + std::to_string(f) + " is both failed and helping");
  }
  if (sorted.size() < head.d)
    throw CodingError("repair needs d = " + std::to_string(head.d) + " helpers, got " + std::to_string(sorted.size()));
  sorted.resize(head.d);

  const auto inst = instance_for(head);
  for (const auto* sh : sorted) instance_for(sh->header);

  FileRepair out;
  for (const auto* sh : sorted) out.helpers.push_back(sh->header.node);
  const std::vector<std::size_t> failing(fail_sorted.begin(), fail_sorted.end());
  out.fallback = failing.size() >= head.k;
  std::optional<RepairPlan> plan;
  if (!out.fallback) plan = plan_repair(inst, complement_chain(inst, failing));
  out.expected_per_chunk = out.fallback ? inst.params.alpha : inst.params.beta_for(static_cast<int>(failing.size()));

  for (auto f : fail_sorted) {
    ShareFile sf;
    sf.header = head;
    sf.header.node = f;
    sf.header.star_scalar = inst.stars.star_scalars.at(f);
    out.rebuilt.push_back(std::move(sf));
  }
  for (std::uint64_t c = 0; c < head.chunks; ++c) {
    std::vector<NodeContent> rebuilt;
    if (out.fallback) {
      std::vector<NodeContent> shares;
      for (const auto* sh : sorted) shares.push_back({sh->header.node, sh->chunks[c]});
      out.symbols_per_helper_per_chunk = inst.params.alpha;
      rebuilt = repair_by_download(inst, failing, shares);
    } else {
      std::vector<HelpMessage> msgs;
      for (const auto* sh : sorted) msgs.push_back(help_message(inst, *plan, {sh->header.node, sh->chunks[c]}));
      out.symbols_per_helper_per_chunk = msgs.front().symbols.size();
      rebuilt = repair(inst, *plan, msgs);
    }
    for (std::size_t i = 0; i < rebuilt.size(); ++i) out.rebuilt[i].chunks.push_back(std::move(rebuilt[i].symbols));
  }
  out.symbols_per_helper = out.symbols_per_helper_per_chunk * head.chunks;
  return out;
}

}  // namespace moulin
