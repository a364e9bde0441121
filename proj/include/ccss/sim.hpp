#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ccss/core.hpp"
#include "ccss/element.hpp"
#include "ccss/peer.hpp"

// Deterministic discrete-event harness: peers joined by FIFO links that can
// be partitioned and healed, driven by an explicit event list.

namespace ccss {

struct Link {
  PeerId a;
  PeerId b;

  friend bool operator==(const Link&, const Link&) = default;
};

namespace event {
struct Update {
  PeerId peer;
  Intent intent;
  Element element;
};
struct Sync {
  PeerId from;
  PeerId to;
};
struct Partition {
  Link link;
};
struct Heal {
  Link link;
};
struct Resolve {
  PeerId peer;
};
struct Prune {
  PeerId peer;
};
struct Check {
  PeerId peer;
  ElementSet expected;
};
/// Rounds of syncs over every up link, both directions, until a round moves
/// no payload.
struct Quiesce {};
}  // namespace event

using Event = std::variant<event::Update, event::Sync, event::Partition, event::Heal, event::Resolve,
                           event::Prune, event::Check, event::Quiesce>;

struct Scenario {
  std::vector<std::pair<PeerId, ElementSet>> peers;
  std::vector<Link> links;
  std::vector<Event> events;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  /// 1-based source line, 0 when not parsed from text.
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses the line-oriented scenario format (`PEER P {1,2}`, `LINK P Q`,
/// `OP P insert 3`, `SYNC P Q`, `PARTITION P Q`, `HEAL P Q`, `RESOLVE P`,
/// `PRUNE P`, `CHECK P {1,3}`, `QUIESCE`, `#` comments).
[[nodiscard]] Scenario parse_scenario(std::string_view text);
[[nodiscard]] std::string format_scenario(const Scenario& s);

struct RunOptions {
  std::uint64_t seed = 0;
  /// Split each delivered payload into 2-3 consecutive messages at
  /// seed-chosen points, with a prune and an acknowledgment interleaved.
  bool segment_payloads = false;
  TransformFn transform = transform_remote;
  std::size_t max_quiesce_rounds = 64;
};

struct CheckOutcome {
  std::size_t event_index;  // 1-based
  PeerId peer;
  ElementSet expected;
  ElementSet actual;

  [[nodiscard]] bool passed() const { return expected == actual; }
};

struct RunCounters {
  std::size_t updates_applied = 0;
  std::size_t updates_no_effect = 0;
  std::size_t messages_sent = 0;
  std::size_t messages_delivered = 0;
  std::size_t messages_dropped = 0;
  std::size_t messages_split = 0;
  std::size_t payload_ops = 0;
  std::size_t remote_applied = 0;
  std::size_t resolve_deletes = 0;
  std::size_t pruned_entries = 0;
};

struct PeerSummary {
  ElementSet data;
  std::uint64_t rev = 0;
  std::size_t log_size = 0;
};

struct RunReport {
  std::uint64_t seed = 0;
  std::map<PeerId, PeerSummary> finals;
  std::vector<CheckOutcome> checks;
  RunCounters counters;
  bool cyclic = false;
  bool starved = false;
  std::optional<std::string> error;
  /// Every group of peers connected through up links holds one set, and no
  /// error occurred.
  bool converged = false;

  [[nodiscard]] bool checks_passed() const;
  /// Canonical text: one FINAL line per peer and a CONVERGED line, preceded
  /// by check outcomes, counters and warnings.
  [[nodiscard]] std::string to_text() const;
};

/// Executes the events in order. Protocol failures (divergence, invalid
/// operations) end the run and are recorded in the report; malformed
/// scenarios throw ScenarioError.
[[nodiscard]] RunReport run_scenario(const Scenario& s, const RunOptions& options = {});

/// Random tree of `peers` peers sharing a random initial subset of
/// 1..universe_size, each issuing ops_per_peer uniformly random intents.
/// After each op a sync fires with probability sync_density and a link
/// toggles with probability sync_density / 4. Ends by healing every link and
/// quiescing.
[[nodiscard]] Scenario random_workload(std::size_t peers, std::size_t universe_size, std::size_t ops_per_peer,
                                       double sync_density, std::uint64_t seed);

}  // namespace ccss
