#pragma once

#include <array>
#include <charconv>
#include <string>
#include <string_view>

#include "optisph/errors.hpp"

namespace optisph::detail {

/// Splits text into '\n'-terminated lines; every failure is a MalformedFile
/// error prefixed with `what`.
class LineReader {
 public:
  LineReader(std::string_view text, std::string what) : text_(text), what_(std::move(what)) {}

  [[noreturn]] void fail(const std::string& why) const { throw Error(Errc::MalformedFile, what_ + ": " + why); }

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) fail("missing trailing newline");
    line = text_.substr(pos_, nl - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = nl + 1;
    ++line_no_;
    return true;
  }

  std::string_view require(const char* what) {
    std::string_view line;
    if (!next(line)) fail(std::string("truncated, expected ") + what);
    return line;
  }

  /// `key <value>` -> value.
  std::string_view keyed(std::string_view line, std::string_view key) const {
    if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != ' ')
      fail("line " + std::to_string(line_no_) + ": expected '" + std::string(key) + " <value>'");
    return line.substr(key.size() + 1);
  }

  template <class T>
  T number(std::string_view s) const {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      fail("line " + std::to_string(line_no_) + ": bad number '" + std::string(s) + "'");
    return v;
  }

  /// Splits a line into exactly N space-separated fields.
  template <std::size_t N>
  std::array<std::string_view, N> fields(std::string_view line) const {
    std::array<std::string_view, N> out{};
    std::size_t i = 0;
    while (!line.empty()) {
      const auto sp = line.find(' ');
      const auto tok = line.substr(0, sp);
      if (!tok.empty()) {
        if (i == N) fail("line " + std::to_string(line_no_) + ": too many fields");
        out[i++] = tok;
      }
      if (sp == std::string_view::npos) break;
      line.remove_prefix(sp + 1);
    }
    if (i != N) fail("line " + std::to_string(line_no_) + ": expected " + std::to_string(N) + " fields");
    return out;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  std::string_view text_;
  std::string what_;
  std::size_t pos_ = 0;
  int line_no_ = 0;
};

}  // namespace optisph::detail
