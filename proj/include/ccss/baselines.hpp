#pragma once

#include "ccss/element.hpp"
#include "ccss/peer.hpp"

// State-based reference CRDTs used for comparison.

namespace ccss {

/// Grow-only set: insertion is the only operation.
struct GSet {
  ElementSet members;

  friend bool operator==(const GSet&, const GSet&) = default;
};

[[nodiscard]] GSet gset_insert(GSet s, const Element& x);
[[nodiscard]] GSet gset_merge(const GSet& a, const GSet& b);

/// Two-phase set: added and removed G-Sets. Removal is permanent.
struct TwoPhaseSet {
  GSet added;
  GSet removed;

  friend bool operator==(const TwoPhaseSet&, const TwoPhaseSet&) = default;
};

[[nodiscard]] TwoPhaseSet twopset_apply(TwoPhaseSet s, Intent intent, const Element& x);
[[nodiscard]] TwoPhaseSet twopset_merge(const TwoPhaseSet& a, const TwoPhaseSet& b);
/// added \ removed
[[nodiscard]] ElementSet twopset_value(const TwoPhaseSet& s);

}  // namespace ccss
