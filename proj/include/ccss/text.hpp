#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccss/element.hpp"
#include "ccss/op.hpp"

// Canonical text: `+x` Insert, `-x` Delete, `!` Nop, sequences as `[+3,-3]`,
// sets as sorted `{1,2}`.

namespace ccss {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] std::string to_string(const Element& x);
[[nodiscard]] std::string to_string(const Op& op);
[[nodiscard]] std::string to_string(const OpSeq& s);
[[nodiscard]] std::string to_string(const ElementSet& d);

[[nodiscard]] Element parse_element(std::string_view text);
[[nodiscard]] Op parse_op(std::string_view text);
[[nodiscard]] OpSeq parse_seq(std::string_view text);
[[nodiscard]] ElementSet parse_set(std::string_view text);

/// Splits on commas that are not nested inside parentheses. An empty input
/// yields no fields.
[[nodiscard]] std::vector<std::string_view> split_top_level(std::string_view text, char sep = ',');

std::ostream& operator<<(std::ostream& os, const Element& x);
std::ostream& operator<<(std::ostream& os, const Op& op);
std::ostream& operator<<(std::ostream& os, const OpSeq& s);
std::ostream& operator<<(std::ostream& os, const ElementSet& d);

}  // namespace ccss
