#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ccss/element.hpp"
#include "ccss/op.hpp"
#include "ccss/peer.hpp"

namespace ccss {

/// A value grouped under a key and stamped with a logical time, stored in
/// the replicated set as the element `(v,k,t)`.
struct Triple {
  std::string value;
  std::string key;
  std::uint64_t timestamp = 0;

  /// Throws std::invalid_argument if value or key cannot be embedded.
  [[nodiscard]] Element to_element() const;
  /// nullopt for elements that are not well-formed triples.
  [[nodiscard]] static std::optional<Triple> from_element(const Element& x);

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Inserts the triple through the check-first local update.
std::optional<Op> lww_insert(Peer& peer, std::string value, std::string key, std::uint64_t timestamp);

/// For every key held by several triples, keeps the one with the greatest
/// timestamp (equal timestamps: greatest value encoding) and deletes the rest
/// with ordinary local updates. Returns the deletes issued.
OpSeq lww_resolve(Peer& peer);

}  // namespace ccss
