#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pca/backend.hpp"
#include "pca/bitstream.hpp"
#include "pca/dictionary.hpp"
#include "pca/errors.hpp"
#include "pca/lexer.hpp"
#include "pca/normalizer.hpp"
#include "pca/term.hpp"

namespace pca {

inline constexpr char kMagic[4] = {'P', 'C', 'A', '0'};
inline constexpr uint8_t kVersion = 1;
/// magic + version + mode + backend (unwrapped) + N + NVAR + AMAX + TF + count.
inline constexpr size_t kFixedPrefixSize = 7;
inline constexpr size_t kCountsSize = 4 + 4 + 4 + 1 + 8;
inline constexpr size_t kHeaderSize = kFixedPrefixSize + kCountsSize;

struct Header {
  Mode mode = Mode::pca0;
  uint8_t backend_id = 0;
  uint32_t n_entries = 0;
  uint32_t nvar = 0;
  uint32_t amax = 0;
  bool tf = false;
  uint64_t index_count = 0;

  friend bool operator==(const Header&, const Header&) = default;
};

inline Header make_header(const Dictionary& dict, Mode mode, Backend backend,
                          uint64_t index_count) {
  Header h;
  h.mode = mode;
  h.backend_id = static_cast<uint8_t>(backend);
  h.n_entries = dict.size();
  h.nvar = dict.nvar();
  h.amax = dict.amax();
  h.tf = dict.has_postfix();
  h.index_count = index_count;
  return h;
}

namespace detail {

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
inline uint32_t get_u32(std::span<const uint8_t> b, size_t pos) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[pos + i];
  return v;
}
inline uint64_t get_u64(std::span<const uint8_t> b, size_t pos) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[pos + i];
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// STEP 1: prefix-order index stream

/// Flattens the term stream into dictionary indices: depth-first pre-order,
/// a compound contributing its (functor, arity) index before its arguments.
/// No parentheses, commas, or other structure survive; the stored arities
/// make the stream uniquely decodable.
inline std::vector<uint32_t> encode_term_stream(const NormalizedProgram& program,
                                                const Dictionary& dict,
                                                Mode mode = Mode::pca0) {
  std::vector<uint32_t> out;
  struct Walker {
    const Dictionary& dict;
    const NormalizedProgram& program;
    Mode mode;
    size_t clause = 0;
    std::vector<uint32_t>& out;

    void walk(const Term& t) {
      switch (t.kind()) {
        case TermKind::var:
          if (mode == Mode::pca0) {
            out.push_back(dict.index_of_var(t.var_ordinal()));
          } else {
            const std::string& name = program.var_names[clause][t.var_ordinal()];
            out.push_back(dict.index_of(name, 0));
          }
          return;
        case TermKind::atom:
          out.push_back(dict.index_of(atom_text(t.name()), 0));
          return;
        case TermKind::integer:
          out.push_back(dict.index_of(integer_text(t.int_value()), 0));
          return;
        case TermKind::real:
          out.push_back(dict.index_of(float_text(t.real_value()), 0));
          return;
        case TermKind::compound:
          out.push_back(
              dict.index_of(atom_text(t.name()), static_cast<uint32_t>(t.arity())));
          for (const Term& a : t.args()) walk(a);
          return;
      }
    }
  } walker{dict, program, mode, 0, out};
  for (size_t i = 0; i < program.terms.size(); ++i) {
    walker.clause = i;
    walker.walk(program.terms[i]);
  }
  return out;
}

namespace detail {

enum class EntityKind : uint8_t { variable, atom, integer, real };

struct Entity {
  EntityKind kind = EntityKind::atom;
  std::string text;  // atom text or variable name
  BigInt int_value;
  double float_value = 0.0;
  uint32_t arity = 0;
};

inline bool variable_shaped(const std::string& s) {
  if (s.empty() || !(is_upper(s[0]) || s[0] == '_')) return false;
  for (char c : s)
    if (!is_alnum(c)) return false;
  return true;
}

/// Re-reads one dictionary entry text back into the entity it denotes.
inline Entity decode_entity(const DictEntry& entry, bool is_variable) {
  Entity e;
  e.arity = entry.arity;
  if (is_variable) {
    if (!variable_shaped(entry.text))
      fail(ErrorCode::name_decode_error,
           "variable entry '" + entry.text + "' is not a variable name");
    e.kind = EntityKind::variable;
    e.text = entry.text;
    return e;
  }
  std::vector<Token> tokens;
  try {
    tokens = tokenize(entry.text);
  } catch (const Error&) {
    fail(ErrorCode::name_decode_error,
         "dictionary entry is not re-readable token text");
  }
  auto bad = [&]() -> Entity {
    fail(ErrorCode::name_decode_error,
         "dictionary entry '" + entry.text + "' is not a single entity");
  };
  if (tokens.empty()) return bad();
  const Token& t0 = tokens[0];
  if (tokens.size() == 1) {
    switch (t0.kind) {
      case TokenKind::name:
      case TokenKind::quoted:
        e.kind = EntityKind::atom;
        e.text = t0.text;
        break;
      case TokenKind::integer:
        e.kind = EntityKind::integer;
        e.int_value = t0.int_value;
        break;
      case TokenKind::real:
        e.kind = EntityKind::real;
        e.float_value = t0.float_value;
        break;
      case TokenKind::comma:
      case TokenKind::bar:
        e.kind = EntityKind::atom;
        e.text = t0.text;
        break;
      default:
        return bad();
    }
  } else if (tokens.size() == 2 && t0.kind == TokenKind::name && t0.text == "-" &&
             tokens[1].adjacent && tokens[1].kind == TokenKind::integer) {
    e.kind = EntityKind::integer;
    e.int_value = -tokens[1].int_value;
  } else if (tokens.size() == 2 && t0.kind == TokenKind::name && t0.text == "-" &&
             tokens[1].adjacent && tokens[1].kind == TokenKind::real) {
    e.kind = EntityKind::real;
    e.float_value = -tokens[1].float_value;
  } else if (tokens.size() == 2 && t0.kind == TokenKind::open_bracket &&
             tokens[1].kind == TokenKind::close_bracket) {
    e.kind = EntityKind::atom;
    e.text = "[]";
  } else if (tokens.size() == 2 && t0.kind == TokenKind::open_curly &&
             tokens[1].kind == TokenKind::close_curly) {
    e.kind = EntityKind::atom;
    e.text = "{}";
  } else {
    return bad();
  }
  if (e.arity > 0 && e.kind != EntityKind::atom)
    fail(ErrorCode::name_decode_error, "functor entry '" + entry.text +
                                           "' does not name an atom");
  return e;
}

}  // namespace detail

/// Arity-driven prefix decode, the inverse of encode_term_stream. Returns the
/// term stream plus the per-clause variable names seen in the dictionary.
struct DecodedStream {
  std::vector<Term> terms;
  std::vector<std::vector<std::string>> var_names;
};

inline DecodedStream decode_term_stream(std::span<const uint32_t> indices,
                                        const Dictionary& dict) {
  std::vector<detail::Entity> entities;
  entities.reserve(dict.size());
  for (uint32_t i = 0; i < dict.size(); ++i)
    entities.push_back(detail::decode_entity(dict.entry_at(i), i < dict.nvar()));

  DecodedStream out;
  size_t pos = 0;

  struct Decoder {
    std::span<const uint32_t> indices;
    const std::vector<detail::Entity>& entities;
    const Dictionary& dict;
    size_t& pos;
    std::unordered_map<uint32_t, uint32_t> clause_vars;
    std::vector<std::string>* names = nullptr;

    Term next() {
      if (pos >= indices.size())
        fail(ErrorCode::truncated_stream, "index stream ended inside a term");
      uint32_t idx = indices[pos++];
      if (idx >= entities.size())
        fail(ErrorCode::index_out_of_range,
             "index " + std::to_string(idx) + " out of range (N=" +
                 std::to_string(entities.size()) + ")");
      const detail::Entity& e = entities[idx];
      switch (e.kind) {
        case detail::EntityKind::variable: {
          auto it = clause_vars.find(idx);
          if (it != clause_vars.end()) return Term::var(it->second);
          uint32_t ord = static_cast<uint32_t>(clause_vars.size());
          clause_vars.emplace(idx, ord);
          names->push_back(e.text);
          return Term::var(ord);
        }
        case detail::EntityKind::integer:
          return Term::integer(e.int_value);
        case detail::EntityKind::real:
          return Term::real(e.float_value);
        case detail::EntityKind::atom: {
          if (e.arity == 0) return Term::atom(e.text);
          std::vector<Term> args;
          args.reserve(e.arity);
          for (uint32_t k = 0; k < e.arity; ++k) args.push_back(next());
          return Term::compound(e.text, std::move(args));
        }
      }
      fail(ErrorCode::name_decode_error, "unreachable entity kind");
    }
  } decoder{indices, entities, dict, pos, {}, nullptr};

  while (pos < indices.size()) {
    decoder.clause_vars.clear();
    out.var_names.emplace_back();
    decoder.names = &out.var_names.back();
    out.terms.push_back(decoder.next());
  }
  return out;
}

// ---------------------------------------------------------------------------
// STEP 3: split dictionary serialization (Parts N, A, T)

namespace detail {

inline std::vector<uint8_t> part_n_bytes(const Dictionary& dict, Mode mode) {
  std::vector<uint8_t> out;
  uint32_t first = mode == Mode::pca0 ? dict.nvar() : 0;
  for (uint32_t i = first; i < dict.size(); ++i) {
    const std::string& text = dict.entry_at(i).text;
    write_varint(out, text.size());
    out.insert(out.end(), text.begin(), text.end());
  }
  return out;
}

inline std::vector<uint8_t> part_a_bytes(const Dictionary& dict, uint32_t amax) {
  unsigned w = arity_width(amax);
  if (w == 0) return {};
  BitWriter bits;
  for (const DictEntry& e : dict.entries()) bits.write(e.arity, w);
  return bits.take();
}

inline std::vector<uint8_t> part_t_bytes(const Dictionary& dict, bool tf) {
  BitWriter bits;
  unsigned w = tf ? 2 : 1;
  for (const DictEntry& e : dict.entries())
    bits.write(static_cast<uint64_t>(e.fixity), w);
  return bits.take();
}

inline bool valid_utf8(const std::string& s) {
  size_t i = 0;
  while (i < s.size()) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    size_t len;
    uint32_t cp, min;
    if (b < 0x80) { i += 1; continue; }
    else if ((b & 0xE0) == 0xC0) { len = 2; cp = b & 0x1F; min = 0x80; }
    else if ((b & 0xF0) == 0xE0) { len = 3; cp = b & 0x0F; min = 0x800; }
    else if ((b & 0xF8) == 0xF0) { len = 4; cp = b & 0x07; min = 0x10000; }
    else return false;
    if (i + len > s.size()) return false;
    for (size_t k = 1; k < len; ++k) {
      unsigned char c = static_cast<unsigned char>(s[i + k]);
      if ((c & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (c & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

}  // namespace detail

/// Parts N, A and T in that order, each zero-padded to a byte boundary.
/// In the renaming mode the first NVAR names are regenerable and are omitted
/// from Part N.
inline std::vector<uint8_t> serialize_dictionary(const Dictionary& dict,
                                                 const Header& header) {
  if (header.n_entries != dict.size() || header.nvar != dict.nvar() ||
      header.amax != dict.amax() || header.tf != dict.has_postfix())
    fail(ErrorCode::header_mismatch, "header fields disagree with the dictionary");
  std::vector<uint8_t> out = detail::part_n_bytes(dict, header.mode);
  std::vector<uint8_t> a = detail::part_a_bytes(dict, header.amax);
  std::vector<uint8_t> t = detail::part_t_bytes(dict, header.tf);
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), t.begin(), t.end());
  return out;
}

/// Inverse of serialize_dictionary; consumes from `bytes[pos]` onward and
/// advances pos past Part T.
inline Dictionary deserialize_dictionary(std::span<const uint8_t> bytes, size_t& pos,
                                         const Header& header) {
  Dictionary dict;
  uint32_t n = header.n_entries;
  uint32_t nvar = header.nvar;
  if (nvar > n) fail(ErrorCode::header_mismatch, "NVAR exceeds N");

  // Part N
  std::vector<std::string> names(n);
  uint32_t first_stored = header.mode == Mode::pca0 ? nvar : 0;
  if (header.mode == Mode::pca0)
    for (uint32_t i = 0; i < nvar; ++i) names[i] = var_name(i);
  for (uint32_t i = first_stored; i < n; ++i) {
    uint64_t len = read_varint(bytes, pos);
    if (pos + len > bytes.size())
      fail(ErrorCode::truncated_dictionary, "name bytes end mid-entry");
    names[i].assign(reinterpret_cast<const char*>(bytes.data() + pos),
                    static_cast<size_t>(len));
    pos += static_cast<size_t>(len);
    if (!detail::valid_utf8(names[i]))
      fail(ErrorCode::name_decode_error, "dictionary name is not valid UTF-8");
  }

  // Part A
  std::vector<uint32_t> arities(n, 0);
  unsigned wa = arity_width(header.amax);
  if (wa > 0 && n > 0) {
    size_t nbytes = (static_cast<size_t>(n) * wa + 7) / 8;
    if (pos + nbytes > bytes.size())
      fail(ErrorCode::truncated_dictionary, "arity part ends early");
    BitReader r(bytes.subspan(pos, nbytes));
    for (uint32_t i = 0; i < n; ++i) arities[i] = static_cast<uint32_t>(r.read(wa));
    pos += nbytes;
  }

  // Part T
  unsigned wt = header.tf ? 2 : 1;
  if (n > 0) {
    size_t tbytes = (static_cast<size_t>(n) * wt + 7) / 8;
    if (pos + tbytes > bytes.size())
      fail(ErrorCode::truncated_dictionary, "fixity part ends early");
    BitReader r(bytes.subspan(pos, tbytes));
    for (uint32_t i = 0; i < n; ++i) {
      uint64_t code = r.read(wt);
      if (code > 2)
        fail(ErrorCode::fixity_out_of_range,
             "fixity code " + std::to_string(code) + " (only 0..2 are defined)");
      DictEntry e{std::move(names[i]), arities[i], static_cast<Fixity>(code)};
      dict.push_entry(std::move(e), i < nvar);
    }
    pos += tbytes;
  }

  // validate re-readability of every entry
  for (uint32_t i = 0; i < dict.size(); ++i)
    detail::decode_entity(dict.entry_at(i), i < dict.nvar());
  return dict;
}

// ---------------------------------------------------------------------------
// whole-container compress / decompress

/// Everything the encoder produces, before container assembly. `stats` and
/// the golden-format tests look at the individual pieces.
struct EncodedParts {
  Dictionary dict;
  Header header;
  std::vector<uint32_t> indices;
  std::vector<uint8_t> part_n, part_a, part_t, payload;
};

inline EncodedParts encode_parts(const NormalizedProgram& program, Mode mode,
                                 Backend backend) {
  EncodedParts parts;
  parts.dict = Dictionary::build(program, mode);
  parts.indices = encode_term_stream(program, parts.dict, mode);
  parts.header = make_header(parts.dict, mode, backend, parts.indices.size());
  parts.part_n = detail::part_n_bytes(parts.dict, mode);
  parts.part_a = detail::part_a_bytes(parts.dict, parts.header.amax);
  parts.part_t = detail::part_t_bytes(parts.dict, parts.header.tf);
  parts.payload = pack_indices(parts.indices, parts.header.n_entries);
  return parts;
}

inline std::vector<uint8_t> assemble_container(const EncodedParts& parts) {
  std::vector<uint8_t> body;
  detail::put_u32(body, parts.header.n_entries);
  detail::put_u32(body, parts.header.nvar);
  detail::put_u32(body, parts.header.amax);
  body.push_back(parts.header.tf ? 1 : 0);
  detail::put_u64(body, parts.header.index_count);
  body.insert(body.end(), parts.part_n.begin(), parts.part_n.end());
  body.insert(body.end(), parts.part_a.begin(), parts.part_a.end());
  body.insert(body.end(), parts.part_t.begin(), parts.part_t.end());
  body.insert(body.end(), parts.payload.begin(), parts.payload.end());

  std::vector<uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kVersion);
  out.push_back(static_cast<uint8_t>(parts.header.mode));
  out.push_back(parts.header.backend_id);
  std::vector<uint8_t> wrapped = wrap(body, static_cast<Backend>(parts.header.backend_id));
  out.insert(out.end(), wrapped.begin(), wrapped.end());
  return out;
}

inline std::vector<uint8_t> compress(const NormalizedProgram& program,
                                     Mode mode = Mode::pca0,
                                     Backend backend = Backend::none) {
  return assemble_container(encode_parts(program, mode, backend));
}

struct ContainerInfo {
  uint8_t version = 0;
  Mode mode = Mode::pca0;
  Backend backend = Backend::none;
};

inline ContainerInfo peek_container(std::span<const uint8_t> image) {
  if (image.size() < 4 || std::memcmp(image.data(), kMagic, 4) != 0)
    fail(ErrorCode::bad_magic, "not a PCA container (bad magic)");
  if (image.size() < kFixedPrefixSize)
    fail(ErrorCode::truncated_payload, "container shorter than its fixed prefix");
  ContainerInfo info;
  info.version = image[4];
  if (info.version != kVersion)
    fail(ErrorCode::unsupported_version,
         "container version " + std::to_string(info.version));
  uint8_t mode = image[5];
  if (mode != 0 && mode != 2)
    fail(ErrorCode::unknown_mode, "unknown mode byte " + std::to_string(mode));
  info.mode = static_cast<Mode>(mode);
  info.backend = backend_from_id(image[6]);
  return info;
}

inline NormalizedProgram decompress(std::span<const uint8_t> image) {
  ContainerInfo info = peek_container(image);
  std::vector<uint8_t> body = unwrap(image.subspan(kFixedPrefixSize), info.backend);
  if (body.size() < kCountsSize)
    fail(ErrorCode::truncated_payload, "container body shorter than its header");

  Header header;
  header.mode = info.mode;
  header.backend_id = static_cast<uint8_t>(info.backend);
  header.n_entries = detail::get_u32(body, 0);
  header.nvar = detail::get_u32(body, 4);
  header.amax = detail::get_u32(body, 8);
  if (body[12] > 1) fail(ErrorCode::header_mismatch, "TF flag is not 0 or 1");
  header.tf = body[12] == 1;
  header.index_count = detail::get_u64(body, 13);

  size_t pos = kCountsSize;
  Dictionary dict = deserialize_dictionary(body, pos, header);

  std::span<const uint8_t> payload(body.data() + pos, body.size() - pos);
  unsigned w = index_width(header.n_entries);
  size_t expected = header.n_entries == 0 && header.index_count == 0
                        ? 0
                        : (header.index_count * w + 7) / 8;
  if (payload.size() < expected)
    fail(ErrorCode::truncated_payload, "payload holds fewer bits than index_count needs");
  if (payload.size() > expected)
    fail(ErrorCode::trailing_garbage, "payload continues past the last index");
  std::vector<uint32_t> indices = unpack_indices(payload, header.n_entries,
                                                 header.index_count);
  {
    BitReader pad_check(payload);
    pad_check.read(0);
    for (uint64_t i = 0; i < header.index_count; ++i) pad_check.read(w);
    if (!pad_check.padding_is_zero())
      fail(ErrorCode::trailing_garbage, "payload padding bits are not zero");
  }

  DecodedStream decoded = decode_term_stream(indices, dict);

  NormalizedProgram program;
  program.terms = std::move(decoded.terms);
  program.var_names = std::move(decoded.var_names);
  program.ops = OpTable::standard();
  for (const Term& t : program.terms) replay_directive(program.ops, t);
  for (const Term& t : program.terms)
    program.max_vars = std::max(program.max_vars, distinct_var_count(t));
  return program;
}

}  // namespace pca
