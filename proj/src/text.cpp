#include "ccss/text.hpp"

#include <ostream>

namespace ccss {
namespace {

std::string_view strip_brackets(std::string_view text, char open, char close, const char* what) {
  if (text.size() < 2 || text.front() != open || text.back() != close) {
    throw ParseError(std::string("expected ") + what + " in " + open + "..." + close + ", got '" +
                     std::string(text) + "'");
  }
  return text.substr(1, text.size() - 2);
}

template <typename Range>
std::string join(const Range& items, char open, char close) {
  std::string out(1, open);
  bool first = true;
  for (const auto& item : items) {
    if (!first) out += ',';
    first = false;
    out += to_string(item);
  }
  out += close;
  return out;
}

}  // namespace

std::string to_string(const Element& x) { return x.encoding(); }

std::string to_string(const Op& op) {
  switch (op.kind()) {
    case OpKind::Insert:
      return "+" + op.element().encoding();
    case OpKind::Delete:
      return "-" + op.element().encoding();
    case OpKind::Nop:
      break;
  }
  return "!";
}

std::string to_string(const OpSeq& s) { return join(s, '[', ']'); }

std::string to_string(const ElementSet& d) { return join(d, '{', '}'); }

Element parse_element(std::string_view text) {
  if (!Element::is_valid_encoding(text)) {
    throw ParseError("invalid element '" + std::string(text) + "'");
  }
  return Element(text);
}

Op parse_op(std::string_view text) {
  if (text == "!") return Op::nop();
  if (text.size() >= 2 && text[0] == '+') return Op::insert(parse_element(text.substr(1)));
  if (text.size() >= 2 && text[0] == '-') return Op::remove(parse_element(text.substr(1)));
  throw ParseError("invalid operation '" + std::string(text) + "'");
}

OpSeq parse_seq(std::string_view text) {
  OpSeq out;
  for (auto field : split_top_level(strip_brackets(text, '[', ']', "sequence"))) {
    out.push_back(parse_op(field));
  }
  return out;
}

ElementSet parse_set(std::string_view text) {
  ElementSet out;
  for (auto field : split_top_level(strip_brackets(text, '{', '}', "set"))) {
    if (!out.insert(parse_element(field)).second) {
      throw ParseError("duplicate element '" + std::string(field) + "' in set");
    }
  }
  return out;
}

std::vector<std::string_view> split_top_level(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  if (text.empty()) return out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    } else if (text[i] == sep && depth == 0) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(text.substr(start));
  return out;
}

std::ostream& operator<<(std::ostream& os, const Element& x) { return os << to_string(x); }
std::ostream& operator<<(std::ostream& os, const Op& op) { return os << to_string(op); }
std::ostream& operator<<(std::ostream& os, const OpSeq& s) { return os << to_string(s); }
std::ostream& operator<<(std::ostream& os, const ElementSet& d) { return os << to_string(d); }

}  // namespace ccss
