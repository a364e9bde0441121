#pragma once

#include <span>
#include <vector>

#include "ccss/element.hpp"
#include "ccss/op.hpp"

namespace ccss {

/// True for Nop, for Insert(x) with x absent and for Delete(x) with x present.
[[nodiscard]] bool is_valid(const ElementSet& d, const Op& op);

/// Applies `op` to `d` in place. Throws InvalidInsert / InvalidDelete.
void apply_in_place(ElementSet& d, const Op& op);

[[nodiscard]] ElementSet apply_op(ElementSet d, const Op& op);

/// Insert(x) if x is absent from `d`, Nop otherwise.
[[nodiscard]] Op make_insert(const ElementSet& d, const Element& x);

/// Delete(x) if x is present in `d`, Nop otherwise.
[[nodiscard]] Op make_delete(const ElementSet& d, const Element& x);

/// True iff every operation of `s` is valid at its point of application
/// when `s` is applied left to right from `d`.
[[nodiscard]] bool validate_seq(const ElementSet& d, std::span<const Op> s);

/// Left fold of apply_op. The thrown InvalidOperation carries the index of
/// the failing operation.
[[nodiscard]] ElementSet apply_seq(ElementSet d, std::span<const Op> s);

/// For each position of `s`, whether the operation there survives
/// normalization. Nops never survive. Per element, canceling pairs drop out
/// and an odd leftover survives at the last position the element occurs.
[[nodiscard]] std::vector<bool> normalization_mask(std::span<const Op> s);

/// Same length as `s`; canceling Insert/Delete pairs on one element become
/// Nop so that each element appears in at most one non-Nop operation.
/// `s` must be valid with respect to some base; that is not re-checked.
[[nodiscard]] OpSeq normalize(std::span<const Op> s);

[[nodiscard]] bool is_normalized(std::span<const Op> s);

/// qs' for applying remote `qs` after local `ps`: q_j becomes Nop when some
/// p_i performs the same operation. Throws DivergenceError when p_i and q_j
/// touch the same element with different kinds.
[[nodiscard]] OpSeq transform_remote(std::span<const Op> ps, std::span<const Op> qs);

/// ps' such that ps' followed by qs reaches the same set as ps followed by
/// transform_remote(ps, qs).
[[nodiscard]] OpSeq transform_local(std::span<const Op> ps, std::span<const Op> qs);

/// Signature shared by transform_remote and test doubles of it.
using TransformFn = OpSeq (*)(std::span<const Op>, std::span<const Op>);

}  // namespace ccss
