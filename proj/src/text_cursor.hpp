#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sprefql/error.hpp"

namespace sprefql::detail {

/// Character cursor with 1-based line/column tracking.
class TextCursor {
 public:
  explicit TextCursor(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  std::string_view rest() const { return text_.substr(pos_); }
  std::size_t pos() const { return pos_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++column_;
    }
    return c;
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && !at_end(); ++i) get();
  }

  bool starts_with(std::string_view s) const { return rest().starts_with(s); }

  [[noreturn]] void fail(const std::string& message) const {
    throw SyntaxError(message, line_, column_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

inline bool is_pn_chars_base(char c) {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || u >= 0x80;
}

inline bool is_pn_chars(char c) {
  return is_pn_chars_base(c) || c == '_' || c == '-' || (c >= '0' && c <= '9');
}

/// Reads the body of a quoted string whose opening quote(s) were consumed.
/// Handles ECHAR and UCHAR escapes. `quote` is '"' or '\'', `long_form` for
/// triple-quoted strings.
inline std::string read_string_body(TextCursor& cur, char quote, bool long_form) {
  std::string out;
  for (;;) {
    if (cur.at_end()) cur.fail("unterminated string literal");
    char c = cur.peek();
    if (long_form) {
      if (c == quote && cur.peek(1) == quote && cur.peek(2) == quote) {
        cur.advance(3);
        return out;
      }
    } else {
      if (c == quote) {
        cur.get();
        return out;
      }
      if (c == '\n' || c == '\r') cur.fail("newline in short string literal");
    }
    if (c == '\\') {
      cur.get();
      char e = cur.at_end() ? '\0' : cur.get();
      switch (e) {
        case 't': out += '\t'; break;
        case 'b': out += '\b'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 'f': out += '\f'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        case 'u':
        case 'U': {
          const int digits = e == 'u' ? 4 : 8;
          std::uint32_t cp = 0;
          for (int i = 0; i < digits; ++i) {
            char h = cur.at_end() ? '\0' : cur.get();
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
            else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
            else cur.fail("bad unicode escape");
          }
          append_utf8(out, cp);
          break;
        }
        default: cur.fail(std::string("bad escape '\\") + e + "'");
      }
      continue;
    }
    out += cur.get();
  }
}

}  // namespace sprefql::detail
