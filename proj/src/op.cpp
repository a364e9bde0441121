#include "ccss/op.hpp"

#include "ccss/text.hpp"

namespace ccss {
namespace {

std::string describe(const char* what, const Op& op, std::optional<std::size_t> index) {
  std::string msg = std::string(what) + " " + to_string(op);
  if (index) msg += " at index " + std::to_string(*index);
  return msg;
}

}  // namespace

const Element& Op::element() const {
  if (!element_) throw std::logic_error("Nop carries no element");
  return *element_;
}

InvalidInsert::InvalidInsert(Op op, std::optional<std::size_t> index)
    : InvalidOperation(describe("insert of present element:", op, index), op, index) {}

InvalidDelete::InvalidDelete(Op op, std::optional<std::size_t> index)
    : InvalidOperation(describe("delete of absent element:", op, index), op, index) {}

DivergenceError::DivergenceError(Element x)
    : std::runtime_error("concurrent sequences disagree on element " + to_string(x)),
      element_(std::move(x)) {}

}  // namespace ccss
