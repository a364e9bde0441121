#include "ccss/conformance.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <iterator>

#include "ccss/text.hpp"

namespace ccss {
namespace {

bool op_less(const Op& a, const Op& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.is_nop()) return false;
  return a.element() < b.element();
}

bool seq_less(const OpSeq& a, const OpSeq& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), op_less);
}

template <typename F>
std::string outcome(F&& f) {
  try {
    return to_string(f());
  } catch (const std::exception& e) {
    return std::string("error(") + e.what() + ")";
  }
}

OpSeq concat(const OpSeq& a, const OpSeq& b) {
  OpSeq out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

Universe integer_universe(std::size_t size, ElementSet base) {
  Universe u{{}, std::move(base)};
  for (std::size_t i = 1; i <= size; ++i) u.elements.emplace_back(static_cast<std::int64_t>(i));
  return u;
}

ElementSet oracle_merge(const ElementSet& d, const OpSeq& ps, const OpSeq& qs) {
  ElementSet inserted;
  ElementSet deleted;
  for (const OpSeq* s : {&ps, &qs}) {
    for (const Op& op : *s) {
      if (op.kind() == OpKind::Insert) inserted.insert(op.element());
      if (op.kind() == OpKind::Delete) deleted.insert(op.element());
    }
  }
  for (const Element& x : inserted) {
    if (deleted.contains(x)) throw DivergenceError(x);
  }
  ElementSet out;
  std::set_difference(d.begin(), d.end(), deleted.begin(), deleted.end(), std::inserter(out, out.end()));
  out.insert(inserted.begin(), inserted.end());
  return out;
}

std::vector<OpSeq> enumerate_valid_seqs(const Universe& u, std::size_t max_len) {
  std::vector<OpSeq> out;
  OpSeq current;
  ElementSet state = u.base;
  // Each element admits exactly one valid operation in any state.
  std::function<void()> extend = [&] {
    out.push_back(current);
    if (current.size() == max_len) return;
    for (const Element& x : u.elements) {
      Op op = state.contains(x) ? Op::remove(x) : Op::insert(x);
      apply_in_place(state, op);
      current.push_back(op);
      extend();
      current.pop_back();
      apply_in_place(state, op.kind() == OpKind::Insert ? Op::remove(x) : Op::insert(x));
    }
  };
  extend();
  std::stable_sort(out.begin(), out.end(), seq_less);
  return out;
}

ConfluenceReport check_confluence(const Universe& u, std::size_t max_len, TransformFn transform) {
  ConfluenceReport report;
  std::vector<OpSeq> seqs;
  for (const OpSeq& s : enumerate_valid_seqs(u, max_len)) seqs.push_back(normalize(s));

  for (const OpSeq& ps : seqs) {
    for (const OpSeq& qs : seqs) {
      ++report.checked;
      const ElementSet& d = u.base;
      auto local_first = outcome([&] { return apply_seq(d, concat(ps, transform(ps, qs))); });
      auto partner_first = outcome([&] { return apply_seq(d, concat(qs, transform(qs, ps))); });
      auto rebased = outcome([&] { return apply_seq(d, concat(transform_local(ps, qs), qs)); });
      auto oracle = outcome([&] { return oracle_merge(d, ps, qs); });
      bool ok = local_first == oracle && partner_first == oracle && rebased == oracle && oracle.rfind("error", 0) != 0;
      if (!ok) report.failures.push_back(Counterexample{d, ps, qs, local_first, partner_first, rebased, oracle});
    }
  }
  return report;
}

ConfluenceReport check_confluence_all_bases(std::size_t size, std::size_t base_elements, std::size_t max_len,
                                            TransformFn transform) {
  base_elements = std::min(base_elements, size);
  ConfluenceReport total;
  for (std::size_t mask = 0; mask < (std::size_t{1} << base_elements); ++mask) {
    ElementSet base;
    for (std::size_t bit = 0; bit < base_elements; ++bit) {
      if (mask & (std::size_t{1} << bit)) base.insert(Element(static_cast<std::int64_t>(bit + 1)));
    }
    auto r = check_confluence(integer_universe(size, std::move(base)), max_len, transform);
    total.checked += r.checked;
    total.failures.insert(total.failures.end(), r.failures.begin(), r.failures.end());
  }
  return total;
}

std::string render_counterexample(const Counterexample& c) {
  return "base=" + to_string(c.base) + " ps=" + to_string(c.ps) + " qs=" + to_string(c.qs) +
         " local_first=" + c.local_first + " partner_first=" + c.partner_first + " rebased=" + c.rebased +
         " oracle=" + c.oracle;
}

OpSeq corrupted_transform_remote(std::span<const Op>, std::span<const Op> qs) {
  return OpSeq(qs.begin(), qs.end());
}

}  // namespace ccss
