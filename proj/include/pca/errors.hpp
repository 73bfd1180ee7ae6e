#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pca {

enum class ErrorCode {
  // tokenizer
  unterminated_quoted_atom,
  unterminated_block_comment,
  invalid_escape,
  invalid_character,
  // reader
  operator_clash,
  unexpected_token,
  unbalanced_delimiter,
  bad_op_directive,
  // dictionary
  missing_entry,
  index_out_of_range,
  // codec
  truncated_stream,
  trailing_garbage,
  truncated_payload,
  header_mismatch,
  truncated_dictionary,
  name_decode_error,
  fixity_out_of_range,
  bad_magic,
  unsupported_version,
  unknown_mode,
  unknown_backend,
  corrupt_backend_stream,
  // cli / io
  io_error,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::unterminated_quoted_atom: return "UnterminatedQuotedAtom";
    case ErrorCode::unterminated_block_comment: return "UnterminatedBlockComment";
    case ErrorCode::invalid_escape: return "InvalidEscape";
    case ErrorCode::invalid_character: return "InvalidCharacter";
    case ErrorCode::operator_clash: return "OperatorClash";
    case ErrorCode::unexpected_token: return "UnexpectedToken";
    case ErrorCode::unbalanced_delimiter: return "UnbalancedDelimiter";
    case ErrorCode::bad_op_directive: return "BadOpDirective";
    case ErrorCode::missing_entry: return "MissingEntry";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::truncated_stream: return "TruncatedStream";
    case ErrorCode::trailing_garbage: return "TrailingGarbage";
    case ErrorCode::truncated_payload: return "TruncatedPayload";
    case ErrorCode::header_mismatch: return "HeaderMismatch";
    case ErrorCode::truncated_dictionary: return "TruncatedDictionary";
    case ErrorCode::name_decode_error: return "NameDecodeError";
    case ErrorCode::fixity_out_of_range: return "FixityOutOfRange";
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::unsupported_version: return "UnsupportedVersion";
    case ErrorCode::unknown_mode: return "UnknownMode";
    case ErrorCode::unknown_backend: return "UnknownBackend";
    case ErrorCode::corrupt_backend_stream: return "CorruptBackendStream";
    case ErrorCode::io_error: return "IoError";
  }
  return "Error";
}

/// Library-wide exception. Parse errors carry a 1-based source position;
/// container errors leave line/column at zero.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, uint32_t line = 0, uint32_t column = 0)
      : std::runtime_error(format(code, message, line, column)),
        code_(code),
        line_(line),
        column_(column) {}

  ErrorCode code() const { return code_; }
  uint32_t line() const { return line_; }
  uint32_t column() const { return column_; }

 private:
  static std::string format(ErrorCode code, const std::string& message, uint32_t line,
                            uint32_t column) {
    std::string out = error_code_name(code);
    out += ": ";
    out += message;
    if (line != 0) {
      out += " at line ";
      out += std::to_string(line);
      out += ", column ";
      out += std::to_string(column);
    }
    return out;
  }

  ErrorCode code_;
  uint32_t line_;
  uint32_t column_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message, uint32_t line = 0,
                              uint32_t column = 0) {
  throw Error(code, std::move(message), line, column);
}

}  // namespace pca
