#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccss/element.hpp"

namespace ccss {

enum class OpKind : std::uint8_t { Insert, Delete, Nop };

/// An effectful set operation: insert an absent element, delete a present
/// one, or do nothing.
class Op {
 public:
  static Op insert(Element x) { return Op(OpKind::Insert, std::move(x)); }
  static Op remove(Element x) { return Op(OpKind::Delete, std::move(x)); }
  static Op nop() { return Op(OpKind::Nop, std::nullopt); }

  [[nodiscard]] OpKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_nop() const noexcept { return kind_ == OpKind::Nop; }

  /// Element acted on. Throws std::logic_error for Nop.
  [[nodiscard]] const Element& element() const;

  friend bool operator==(const Op&, const Op&) = default;

 private:
  Op(OpKind kind, std::optional<Element> x) : kind_(kind), element_(std::move(x)) {}

  OpKind kind_;
  std::optional<Element> element_;
};

using OpSeq = std::vector<Op>;

/// Application of an operation whose precondition does not hold.
class InvalidOperation : public std::logic_error {
 public:
  InvalidOperation(const std::string& what, Op op, std::optional<std::size_t> index)
      : std::logic_error(what), op_(std::move(op)), index_(index) {}

  [[nodiscard]] const Op& op() const noexcept { return op_; }
  /// Position within the sequence being applied, when known.
  [[nodiscard]] std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  Op op_;
  std::optional<std::size_t> index_;
};

/// Insert of an element that is already present.
class InvalidInsert : public InvalidOperation {
 public:
  InvalidInsert(Op op, std::optional<std::size_t> index);
};

/// Delete of an element that is absent.
class InvalidDelete : public InvalidOperation {
 public:
  InvalidDelete(Op op, std::optional<std::size_t> index);
};

/// Two concurrent sequences acted on the same element with different kinds.
/// This cannot happen for valid normalized sequences over a common base, so it
/// signals a lost or reordered message somewhere upstream.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(Element x);

  [[nodiscard]] const Element& element() const noexcept { return element_; }

 private:
  Element element_;
};

}  // namespace ccss
