#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pca/errors.hpp"

namespace pca {

/// Bits for one dictionary index: max(1, ceil(log2 N)). One bit even for a
/// single-entry dictionary, so the decoder never reads zero-width fields.
inline unsigned index_width(uint64_t n_entries) {
  if (n_entries <= 2) return 1;
  return static_cast<unsigned>(std::bit_width(n_entries - 1));
}

/// Bits for one arity: ceil(log2(AMAX+1)), so that AMAX itself fits. Zero
/// when every entry has arity 0 (the arity part vanishes).
inline unsigned arity_width(uint32_t amax) {
  return static_cast<unsigned>(std::bit_width(amax));
}

/// Append-only bit sink; bits go most-significant-first into each byte, and
/// the final partial byte is zero-padded.
class BitWriter {
 public:
  void write(uint64_t value, unsigned width) {
    for (unsigned i = width; i > 0; --i) put_bit((value >> (i - 1)) & 1u);
  }

  size_t bit_count() const { return bit_count_; }

  std::vector<uint8_t> take() { return std::move(bytes_); }
  const std::vector<uint8_t>& bytes() const { return bytes_; }

 private:
  void put_bit(uint64_t bit) {
    unsigned offset = bit_count_ % 8;
    if (offset == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<uint8_t>(0x80u >> offset);
    ++bit_count_;
  }

  std::vector<uint8_t> bytes_;
  size_t bit_count_ = 0;
};

/// Reads back fixed-width fields written by BitWriter.
class BitReader {
 public:
  explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint64_t read(unsigned width) {
    if (pos_ + width > bytes_.size() * 8)
      fail(ErrorCode::truncated_payload, "bit stream ends mid-field");
    uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) {
      size_t byte = pos_ >> 3;
      unsigned offset = pos_ & 7;
      v = (v << 1) | ((bytes_[byte] >> (7 - offset)) & 1u);
      ++pos_;
    }
    return v;
  }

  size_t bits_consumed() const { return pos_; }

  bool padding_is_zero() const {
    for (size_t p = pos_; p < bytes_.size() * 8; ++p) {
      if ((bytes_[p >> 3] >> (7 - (p & 7))) & 1u) return false;
    }
    return true;
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

/// Fixed-width packing of the index stream at index_width(N) bits per index.
inline std::vector<uint8_t> pack_indices(std::span<const uint32_t> indices,
                                         uint32_t n_entries) {
  unsigned w = index_width(n_entries);
  BitWriter out;
  for (uint32_t idx : indices) {
    if (idx >= n_entries)
      fail(ErrorCode::index_out_of_range,
           "index " + std::to_string(idx) + " not below N=" + std::to_string(n_entries));
    out.write(idx, w);
  }
  return out.take();
}

inline std::vector<uint32_t> unpack_indices(std::span<const uint8_t> bytes,
                                            uint32_t n_entries, uint64_t index_count) {
  unsigned w = index_width(n_entries);
  if (index_count * w > bytes.size() * 8)
    fail(ErrorCode::truncated_payload,
         "payload holds fewer than " + std::to_string(index_count) + " indices");
  BitReader in(bytes);
  std::vector<uint32_t> out;
  out.reserve(index_count);
  for (uint64_t i = 0; i < index_count; ++i)
    out.push_back(static_cast<uint32_t>(in.read(w)));
  return out;
}

/// Unsigned base-128 varint (LEB128), used for name lengths in Part N.
inline void write_varint(std::vector<uint8_t>& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

inline uint64_t read_varint(std::span<const uint8_t> bytes, size_t& pos) {
  uint64_t v = 0;
  unsigned shift = 0;
  for (;;) {
    if (pos >= bytes.size())
      fail(ErrorCode::truncated_dictionary, "varint ends mid-value");
    uint8_t b = bytes[pos++];
    if (shift >= 63 && (b & 0x7F) > 1)
      fail(ErrorCode::truncated_dictionary, "varint overflows 64 bits");
    v |= static_cast<uint64_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) return v;
    shift += 7;
  }
}

}  // namespace pca
