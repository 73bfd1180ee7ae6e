#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <zlib.h>

#include "pca/errors.hpp"

namespace pca {

/// Post-compression backends applied to the container body. The id is stored
/// in the header; everything else about the format is backend-agnostic.
enum class Backend : uint8_t {
  none = 0,     // identity
  deflate = 1,  // raw DEFLATE stream (RFC 1951, no zlib/gzip framing)
};

inline Backend backend_from_id(uint8_t id) {
  if (id > 1)
    fail(ErrorCode::unknown_backend, "unknown backend id " + std::to_string(id));
  return static_cast<Backend>(id);
}

namespace detail {

inline std::vector<uint8_t> raw_deflate(std::span<const uint8_t> data) {
  static const Bytef kEmpty[1] = {0};
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 9, Z_DEFAULT_STRATEGY) != Z_OK)
    fail(ErrorCode::corrupt_backend_stream, "deflate initialization failed");
  std::vector<uint8_t> out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = data.empty() ? const_cast<Bytef*>(kEmpty) : const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END)
    fail(ErrorCode::corrupt_backend_stream, "deflate did not finish");
  out.resize(out.size() - zs.avail_out);
  return out;
}

inline std::vector<uint8_t> raw_inflate(std::span<const uint8_t> data) {
  static const Bytef kEmpty[1] = {0};
  z_stream zs{};
  if (inflateInit2(&zs, -15) != Z_OK)
    fail(ErrorCode::corrupt_backend_stream, "inflate initialization failed");
  std::vector<uint8_t> out;
  std::vector<uint8_t> buf(1 << 16);
  zs.next_in = data.empty() ? const_cast<Bytef*>(kEmpty) : const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  int rc = Z_OK;
  do {
    zs.next_out = buf.data();
    zs.avail_out = static_cast<uInt>(buf.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      fail(ErrorCode::corrupt_backend_stream, "corrupt deflate stream");
    }
    out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
  } while (rc != Z_STREAM_END && (zs.avail_in > 0 || zs.avail_out == 0));
  inflateEnd(&zs);
  if (rc != Z_STREAM_END)
    fail(ErrorCode::corrupt_backend_stream, "deflate stream ended early");
  return out;
}

}  // namespace detail

inline std::vector<uint8_t> wrap(std::span<const uint8_t> body, Backend id) {
  switch (id) {
    case Backend::none:
      return {body.begin(), body.end()};
    case Backend::deflate:
      return detail::raw_deflate(body);
  }
  fail(ErrorCode::unknown_backend,
       "unknown backend id " + std::to_string(static_cast<unsigned>(id)));
}

inline std::vector<uint8_t> unwrap(std::span<const uint8_t> wrapped, Backend id) {
  switch (id) {
    case Backend::none:
      return {wrapped.begin(), wrapped.end()};
    case Backend::deflate:
      return detail::raw_inflate(wrapped);
  }
  fail(ErrorCode::unknown_backend,
       "unknown backend id " + std::to_string(static_cast<unsigned>(id)));
}

}  // namespace pca
