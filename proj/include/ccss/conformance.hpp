#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccss/core.hpp"
#include "ccss/element.hpp"
#include "ccss/op.hpp"

namespace ccss {

/// A small test instance: the elements sequences may touch and the set they
/// start from.
struct Universe {
  std::vector<Element> elements;
  ElementSet base;
};

/// Universe over the integers 1..size with the given base.
[[nodiscard]] Universe integer_universe(std::size_t size, ElementSet base);

/// (d minus everything deleted in ps or qs) plus everything inserted in ps
/// or qs. Pure set arithmetic; throws DivergenceError if one element is both
/// inserted and deleted.
[[nodiscard]] ElementSet oracle_merge(const ElementSet& d, const OpSeq& ps, const OpSeq& qs);

/// Every valid sequence of length <= max_len over u.elements starting from
/// u.base, ordered by length, then position-wise by (kind, element).
[[nodiscard]] std::vector<OpSeq> enumerate_valid_seqs(const Universe& u, std::size_t max_len);

struct Counterexample {
  ElementSet base;
  OpSeq ps;
  OpSeq qs;
  std::string local_first;    // ps, then transform_remote(ps, qs)
  std::string partner_first;  // qs, then transform_remote(qs, ps)
  std::string rebased;        // transform_local(ps, qs), then qs
  std::string oracle;
};

struct ConfluenceReport {
  std::size_t checked = 0;
  std::vector<Counterexample> failures;
};

/// Checks every pair of enumerated sequences, after normalization, for
/// agreement between the three merge paths and oracle_merge.
[[nodiscard]] ConfluenceReport check_confluence(const Universe& u, std::size_t max_len,
                                                TransformFn transform = transform_remote);

/// check_confluence over the universe 1..size and every base drawn from
/// the first base_elements integers, accumulated.
[[nodiscard]] ConfluenceReport check_confluence_all_bases(std::size_t size, std::size_t base_elements,
                                                          std::size_t max_len,
                                                          TransformFn transform = transform_remote);

/// One line: base, ps, qs, the three path results and the oracle result.
[[nodiscard]] std::string render_counterexample(const Counterexample& c);

/// Deliberately wrong transform that never drops duplicated operations.
/// Used to show the checkers catch a broken synchronization rule.
[[nodiscard]] OpSeq corrupted_transform_remote(std::span<const Op> ps, std::span<const Op> qs);

}  // namespace ccss
