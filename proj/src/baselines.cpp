#include "ccss/baselines.hpp"

#include <algorithm>
#include <iterator>

namespace ccss {

GSet gset_insert(GSet s, const Element& x) {
  s.members.insert(x);
  return s;
}

GSet gset_merge(const GSet& a, const GSet& b) {
  GSet out = a;
  out.members.insert(b.members.begin(), b.members.end());
  return out;
}

TwoPhaseSet twopset_apply(TwoPhaseSet s, Intent intent, const Element& x) {
  if (intent == Intent::Insert) {
    s.added = gset_insert(std::move(s.added), x);
  } else {
    s.removed = gset_insert(std::move(s.removed), x);
  }
  return s;
}

TwoPhaseSet twopset_merge(const TwoPhaseSet& a, const TwoPhaseSet& b) {
  return TwoPhaseSet{gset_merge(a.added, b.added), gset_merge(a.removed, b.removed)};
}

ElementSet twopset_value(const TwoPhaseSet& s) {
  ElementSet out;
  std::set_difference(s.added.members.begin(), s.added.members.end(), s.removed.members.begin(),
                      s.removed.members.end(), std::inserter(out, out.end()));
  return out;
}

}  // namespace ccss
