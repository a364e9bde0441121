#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ccss/core.hpp"
#include "ccss/element.hpp"
#include "ccss/op.hpp"

namespace ccss {

/// Short printable peer name: letters, digits, '_' and '-'.
class PeerId {
 public:
  explicit PeerId(std::string_view token);

  [[nodiscard]] const std::string& str() const noexcept { return token_; }
  [[nodiscard]] static bool is_valid_token(std::string_view token) noexcept;

  friend auto operator<=>(const PeerId&, const PeerId&) = default;

 private:
  std::string token_;
};

/// Globally unique provenance of an operation: who issued it, and its
/// position in that peer's issue order (starting at 1).
struct OpTag {
  PeerId origin;
  std::uint64_t seq;

  friend auto operator<=>(const OpTag&, const OpTag&) = default;
};

struct LogEntry {
  Op op;  // never Nop
  OpTag tag;
  std::uint64_t local_rev;
  /// Neighbor this entry was received from; empty for local updates.
  std::optional<PeerId> via;
};

/// Per-link bookkeeping. Revision numbers on the local side refer to our
/// revision counter, on the remote side to the neighbor's.
struct NeighborState {
  PeerId neighbor;
  /// Our revision up to which the neighbor has handled our stream.
  std::uint64_t sent_watermark = 0;
  /// Our revision up to which entries went out in the current session.
  std::uint64_t sent_through = 0;
  /// Neighbor revision up to which we have handled its stream.
  std::uint64_t received_rev = 0;
  /// Highest origin_seq per origin the neighbor reported as handled.
  std::map<PeerId, std::uint64_t> acknowledged;
  /// Our entries whose effect the neighbor already holds through an
  /// identical concurrent operation of its own; never sent to it.
  std::set<OpTag> suppressed;
};

struct TaggedOp {
  Op op;
  OpTag tag;

  friend bool operator==(const TaggedOp&, const TaggedOp&) = default;
};

/// One sync transmission. `wm` is the receiver's revision the sender has
/// handled, `rev` the sender's revision covered by this payload.
struct SyncMessage {
  PeerId from;
  PeerId to;
  std::uint64_t wm = 0;
  std::uint64_t rev = 0;
  std::map<PeerId, std::uint64_t> ack;
  std::vector<TaggedOp> payload;

  friend bool operator==(const SyncMessage&, const SyncMessage&) = default;
};

class DuplicateNeighbor : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnknownNeighbor : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MisaddressedMessage : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Intent : std::uint8_t { Insert, Delete };

/// A replica: its set, revision counter, operation log and per-neighbor
/// watermarks. Single owner; calls on one Peer must be serialized.
class Peer {
 public:
  Peer(PeerId id, ElementSet initial, std::span<const PeerId> neighbors);

  [[nodiscard]] const PeerId& id() const noexcept { return id_; }
  [[nodiscard]] const ElementSet& data() const noexcept { return data_; }
  /// Count of non-Nop operations ever applied, local and remote.
  [[nodiscard]] std::uint64_t rev() const noexcept { return rev_; }
  [[nodiscard]] const std::deque<LogEntry>& log() const noexcept { return log_; }
  [[nodiscard]] const std::map<PeerId, NeighborState>& neighbors() const noexcept { return neighbors_; }
  [[nodiscard]] const NeighborState& neighbor(const PeerId& id) const;
  /// Highest origin_seq handled per origin, including our own.
  [[nodiscard]] const std::map<PeerId, std::uint64_t>& processed() const noexcept { return processed_; }

  /// Check-first update. Returns the applied operation, or nullopt when the
  /// intent already holds and nothing changed.
  std::optional<Op> local_update(Intent intent, const Element& x);

  /// Normalized log entries the neighbor has not been sent yet.
  SyncMessage prepare_sync(const PeerId& to);

  /// Watermarks only; used to re-establish what each side holds after a
  /// link comes back.
  [[nodiscard]] SyncMessage prepare_ack(const PeerId& to) const;

  /// Transforms the payload against our concurrent entries and applies the
  /// survivors. Returns the operations actually applied. Already-handled
  /// payload entries are skipped, so redelivery is harmless. On any
  /// exception the peer is left unchanged.
  OpSeq handle_sync(const SyncMessage& msg, TransformFn transform = transform_remote);

  /// Drops entries every neighbor has handled. Returns the number removed.
  std::size_t prune_log();

  /// Starts a new session on a link: everything the neighbor has not
  /// acknowledged becomes eligible for sending again.
  void reset_link(const PeerId& to);

 private:
  NeighborState& neighbor_mut(const PeerId& id);
  [[nodiscard]] bool sendable_to(const LogEntry& e, const NeighborState& nb) const;

  PeerId id_;
  ElementSet data_;
  std::uint64_t rev_ = 0;
  std::uint64_t next_seq_ = 1;
  std::deque<LogEntry> log_;
  std::map<PeerId, NeighborState> neighbors_;
  std::map<PeerId, std::uint64_t> processed_;
};

[[nodiscard]] Peer init_peer(PeerId id, ElementSet initial, const std::vector<PeerId>& neighbors);

/// `MSG from=P to=Q wm=<n> rev=<n> ack=<origin:seq,...> ops=[+3@Q:1,-2@Q:2]`
[[nodiscard]] std::string encode_message(const SyncMessage& msg);
/// Inverse of encode_message; throws ParseError.
[[nodiscard]] SyncMessage decode_message(std::string_view line);

}  // namespace ccss
