#include "ccss/element.hpp"

#include <charconv>
#include <stdexcept>
#include <string_view>

namespace ccss {
namespace {

// Canonical decimal only: no '+', no leading zeros, no "-0".
std::optional<std::int64_t> canonical_integer(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::string_view digits = s[0] == '-' ? s.substr(1) : s;
  if (digits.empty() || (digits.size() > 1 && digits[0] == '0')) return std::nullopt;
  if (s[0] == '-' && digits == "0") return std::nullopt;
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

Element::Element(std::int64_t value) : encoding_(std::to_string(value)), integer_(value) {}

Element::Element(std::string_view encoding) : encoding_(encoding) {
  if (!is_valid_encoding(encoding)) {
    throw std::invalid_argument("invalid element encoding '" + encoding_ + "'");
  }
  integer_ = canonical_integer(encoding);
}

bool Element::is_valid_encoding(std::string_view encoding) noexcept {
  if (encoding.empty()) return false;
  int depth = 0;
  for (char c : encoding) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || u == 0x7f) return false;
    switch (c) {
      case '{': case '}': case '[': case ']': case '@': case '!':
        return false;
      case '(':
        ++depth;
        break;
      case ')':
        if (--depth < 0) return false;
        break;
      case ',':
        if (depth == 0) return false;
        break;
      default:
        break;
    }
  }
  return depth == 0;
}

std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept {
  if (a.integer_ && b.integer_) {
    if (auto c = *a.integer_ <=> *b.integer_; c != 0) return c;
    return a.encoding_ <=> b.encoding_;
  }
  if (a.integer_) return std::strong_ordering::less;
  if (b.integer_) return std::strong_ordering::greater;
  return a.encoding_ <=> b.encoding_;
}

}  // namespace ccss
