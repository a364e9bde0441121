#include "ccss/core.hpp"

#include <map>
#include <stdexcept>

namespace ccss {
namespace {

void apply_checked(ElementSet& d, const Op& op, std::optional<std::size_t> index) {
  switch (op.kind()) {
    case OpKind::Nop:
      return;
    case OpKind::Insert:
      if (!d.insert(op.element()).second) throw InvalidInsert(op, index);
      return;
    case OpKind::Delete:
      if (d.erase(op.element()) == 0) throw InvalidDelete(op, index);
      return;
  }
}

// Element -> kind of its single non-Nop occurrence in a normalized sequence.
std::map<Element, OpKind> kinds_by_element(std::span<const Op> s, const char* name) {
  std::map<Element, OpKind> kinds;
  for (const Op& op : s) {
    if (op.is_nop()) continue;
    if (!kinds.emplace(op.element(), op.kind()).second) {
      throw std::invalid_argument(std::string(name) + " is not normalized");
    }
  }
  return kinds;
}

// Nop out every operation of `target` repeated in `other`.
OpSeq drop_shared(std::span<const Op> other, std::span<const Op> target, const char* other_name,
                  const char* target_name) {
  auto kinds = kinds_by_element(other, other_name);
  (void)kinds_by_element(target, target_name);
  OpSeq out;
  out.reserve(target.size());
  for (const Op& op : target) {
    if (op.is_nop()) {
      out.push_back(op);
      continue;
    }
    auto it = kinds.find(op.element());
    if (it == kinds.end()) {
      out.push_back(op);
    } else if (it->second == op.kind()) {
      out.push_back(Op::nop());
    } else {
      throw DivergenceError(op.element());
    }
  }
  return out;
}

}  // namespace

bool is_valid(const ElementSet& d, const Op& op) {
  switch (op.kind()) {
    case OpKind::Nop:
      return true;
    case OpKind::Insert:
      return !d.contains(op.element());
    case OpKind::Delete:
      return d.contains(op.element());
  }
  return false;
}

void apply_in_place(ElementSet& d, const Op& op) { apply_checked(d, op, std::nullopt); }

ElementSet apply_op(ElementSet d, const Op& op) {
  apply_checked(d, op, std::nullopt);
  return d;
}

Op make_insert(const ElementSet& d, const Element& x) {
  return d.contains(x) ? Op::nop() : Op::insert(x);
}

Op make_delete(const ElementSet& d, const Element& x) {
  return d.contains(x) ? Op::remove(x) : Op::nop();
}

bool validate_seq(const ElementSet& d, std::span<const Op> s) {
  // Only membership of touched elements matters.
  std::map<Element, bool> present;
  for (const Op& op : s) {
    if (op.is_nop()) continue;
    auto [it, fresh] = present.try_emplace(op.element(), false);
    if (fresh) it->second = d.contains(op.element());
    bool want_present = op.kind() == OpKind::Delete;
    if (it->second != want_present) return false;
    it->second = !it->second;
  }
  return true;
}

ElementSet apply_seq(ElementSet d, std::span<const Op> s) {
  for (std::size_t i = 0; i < s.size(); ++i) apply_checked(d, s[i], i);
  return d;
}

std::vector<bool> normalization_mask(std::span<const Op> s) {
  std::map<Element, std::pair<std::size_t, std::size_t>> seen;  // count, last position
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].is_nop()) continue;
    auto& [count, last] = seen[s[i].element()];
    ++count;
    last = i;
  }
  std::vector<bool> keep(s.size(), false);
  for (const auto& [x, info] : seen) {
    if (info.first % 2 == 1) keep[info.second] = true;
  }
  return keep;
}

OpSeq normalize(std::span<const Op> s) {
  auto keep = normalization_mask(s);
  OpSeq out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(keep[i] ? s[i] : Op::nop());
  return out;
}

bool is_normalized(std::span<const Op> s) {
  ElementSet seen;
  for (const Op& op : s) {
    if (!op.is_nop() && !seen.insert(op.element()).second) return false;
  }
  return true;
}

OpSeq transform_remote(std::span<const Op> ps, std::span<const Op> qs) {
  return drop_shared(ps, qs, "local sequence", "remote sequence");
}

OpSeq transform_local(std::span<const Op> ps, std::span<const Op> qs) {
  return drop_shared(qs, ps, "remote sequence", "local sequence");
}

}  // namespace ccss
