#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace ccss {

/// A member of a replicated set, identified by its canonical text encoding.
///
/// Two elements are equal iff their encodings are identical. The ordering is
/// only used for deterministic enumeration and rendering: integer encodings
/// sort numerically ahead of everything else, other encodings sort bytewise.
///
/// An encoding is a non-empty run of printable characters without whitespace
/// and without any of `{}[]@!`. Commas are allowed only inside balanced
/// parentheses, which is how tuple payloads such as `(a,7,1)` are carried.
class Element {
 public:
  Element(std::int64_t value);  // NOLINT(google-explicit-constructor)
  explicit Element(std::string_view encoding);

  [[nodiscard]] const std::string& encoding() const noexcept { return encoding_; }
  [[nodiscard]] std::optional<std::int64_t> as_integer() const noexcept { return integer_; }

  [[nodiscard]] static bool is_valid_encoding(std::string_view encoding) noexcept;

  friend bool operator==(const Element& a, const Element& b) noexcept {
    return a.encoding_ == b.encoding_;
  }
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept;

 private:
  std::string encoding_;
  std::optional<std::int64_t> integer_;
};

using ElementSet = std::set<Element>;

}  // namespace ccss
