#include "ccss/sim.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ccss/resolution.hpp"
#include "ccss/text.hpp"

namespace ccss {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using LinkKey = std::pair<PeerId, PeerId>;

LinkKey key_of(const PeerId& a, const PeerId& b) { return a < b ? LinkKey{a, b} : LinkKey{b, a}; }

struct ChannelState {
  bool up = true;
  // [0] carries lower-id -> higher-id traffic, [1] the reverse.
  std::deque<SyncMessage> in_flight[2];
};

// Uniform draw in [0, n).
std::size_t draw(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

class World {
 public:
  World(const Scenario& s, const RunOptions& options, RunReport& report)
      : options_(options), report_(report), rng_(options.seed) {
    std::map<PeerId, std::vector<PeerId>> adjacency;
    for (const auto& [id, initial] : s.peers) {
      if (!adjacency.emplace(id, std::vector<PeerId>{}).second) {
        throw ScenarioError(0, "peer " + id.str() + " declared twice");
      }
      order_.push_back(id);
    }
    if (order_.empty()) throw ScenarioError(0, "scenario declares no peers");
    for (const Link& l : s.links) {
      if (l.a == l.b) throw ScenarioError(0, "link " + l.a.str() + " " + l.b.str() + " is a self-loop");
      if (!adjacency.contains(l.a) || !adjacency.contains(l.b)) {
        throw ScenarioError(0, "link " + l.a.str() + " " + l.b.str() + " names an undeclared peer");
      }
      if (!channels_.emplace(key_of(l.a, l.b), ChannelState{}).second) {
        throw ScenarioError(0, "link " + l.a.str() + " " + l.b.str() + " declared twice");
      }
      links_.push_back(l);
      adjacency[l.a].push_back(l.b);
      adjacency[l.b].push_back(l.a);
    }
    for (const auto& [id, initial] : s.peers) peers_.emplace(id, init_peer(id, initial, adjacency[id]));

    DisjointSets components(order_.size());
    for (const Link& l : links_) {
      if (!components.unite(index_of(l.a), index_of(l.b))) report_.cyclic = true;
    }
  }

  void run(const std::vector<Event>& events) {
    for (std::size_t i = 0; i < events.size(); ++i) validate(events[i], i + 1);
    for (std::size_t i = 0; i < events.size(); ++i) {
      try {
        step(events[i], i + 1);
      } catch (const ScenarioError&) {
        throw;
      } catch (const std::exception& e) {
        report_.error = "event " + std::to_string(i + 1) + ": " + e.what();
        break;
      }
    }
    summarize();
  }

 private:
  std::size_t index_of(const PeerId& id) const {
    return static_cast<std::size_t>(std::find(order_.begin(), order_.end(), id) - order_.begin());
  }

  void require_peer(const PeerId& id, std::size_t index) const {
    if (!peers_.contains(id)) {
      throw ScenarioError(0, "event " + std::to_string(index) + ": unknown peer " + id.str());
    }
  }

  void require_link(const PeerId& a, const PeerId& b, std::size_t index) const {
    if (!channels_.contains(key_of(a, b))) {
      throw ScenarioError(0, "event " + std::to_string(index) + ": no link " + a.str() + " " + b.str());
    }
  }

  void validate(const Event& e, std::size_t index) const {
    std::visit(overloaded{
                   [&](const event::Update& u) { require_peer(u.peer, index); },
                   [&](const event::Sync& s) { require_link(s.from, s.to, index); },
                   [&](const event::Partition& p) { require_link(p.link.a, p.link.b, index); },
                   [&](const event::Heal& h) { require_link(h.link.a, h.link.b, index); },
                   [&](const event::Resolve& r) { require_peer(r.peer, index); },
                   [&](const event::Prune& p) { require_peer(p.peer, index); },
                   [&](const event::Check& c) { require_peer(c.peer, index); },
                   [&](const event::Quiesce&) {},
               },
               e);
  }

  Peer& peer(const PeerId& id) { return peers_.at(id); }

  void step(const Event& e, std::size_t index) {
    std::visit(overloaded{
                   [&](const event::Update& u) {
                     if (peer(u.peer).local_update(u.intent, u.element)) {
                       ++report_.counters.updates_applied;
                     } else {
                       ++report_.counters.updates_no_effect;
                     }
                   },
                   [&](const event::Sync& s) { sync(s.from, s.to); },
                   [&](const event::Partition& p) { partition(p.link); },
                   [&](const event::Heal& h) { heal(h.link); },
                   [&](const event::Resolve& r) {
                     report_.counters.resolve_deletes += lww_resolve(peer(r.peer)).size();
                   },
                   [&](const event::Prune& p) { report_.counters.pruned_entries += peer(p.peer).prune_log(); },
                   [&](const event::Check& c) {
                     report_.checks.push_back(CheckOutcome{index, c.peer, c.expected, peer(c.peer).data()});
                   },
                   [&](const event::Quiesce&) { quiesce(); },
               },
               e);
  }

  // Returns the number of payload operations transmitted.
  std::size_t sync(const PeerId& from, const PeerId& to) {
    ChannelState& ch = channels_.at(key_of(from, to));
    SyncMessage msg = peer(from).prepare_sync(to);
    std::size_t payload = msg.payload.size();
    ++report_.counters.messages_sent;
    report_.counters.payload_ops += payload;
    if (!ch.up) {
      ++report_.counters.messages_dropped;
      return payload;
    }
    auto& queue = ch.in_flight[from < to ? 0 : 1];
    queue.push_back(std::move(msg));
    while (!queue.empty()) {
      SyncMessage next = std::move(queue.front());
      queue.pop_front();
      deliver(next);
    }
    return payload;
  }

  void deliver(const SyncMessage& msg) {
    Peer& receiver = peer(msg.to);
    ++report_.counters.messages_delivered;
    if (!options_.segment_payloads || msg.payload.size() < 2) {
      report_.counters.remote_applied += receiver.handle_sync(msg, options_.transform).size();
      return;
    }
    ++report_.counters.messages_split;
    std::size_t n = msg.payload.size();
    std::size_t parts = std::min<std::size_t>(n, 2 + draw(rng_, 2));
    std::set<std::size_t> cuts;
    while (cuts.size() + 1 < parts) cuts.insert(1 + draw(rng_, n - 1));
    cuts.insert(n);

    std::size_t begin = 0;
    for (std::size_t end : cuts) {
      SyncMessage part = msg;
      part.payload.assign(msg.payload.begin() + static_cast<std::ptrdiff_t>(begin),
                          msg.payload.begin() + static_cast<std::ptrdiff_t>(end));
      bool last = end == n;
      // Only the final piece may claim the sender's full revision.
      if (!last) part.rev = receiver.neighbor(msg.from).received_rev;
      report_.counters.remote_applied += receiver.handle_sync(part, options_.transform).size();
      if (!last) {
        report_.counters.pruned_entries += receiver.prune_log();
        peer(msg.from).handle_sync(receiver.prepare_ack(msg.from), options_.transform);
      }
      begin = end;
    }
  }

  void partition(const Link& l) {
    ChannelState& ch = channels_.at(key_of(l.a, l.b));
    ch.up = false;
    for (auto& q : ch.in_flight) {
      report_.counters.messages_dropped += q.size();
      q.clear();
    }
  }

  void heal(const Link& l) {
    ChannelState& ch = channels_.at(key_of(l.a, l.b));
    if (ch.up) return;
    ch.up = true;
    // New session: rewind to what each side knows was handled, then swap
    // acknowledgments so the rewind does not resend anything delivered.
    peer(l.a).reset_link(l.b);
    peer(l.b).reset_link(l.a);
    peer(l.b).handle_sync(peer(l.a).prepare_ack(l.b), options_.transform);
    peer(l.a).handle_sync(peer(l.b).prepare_ack(l.a), options_.transform);
  }

  void quiesce() {
    for (std::size_t round = 0; round < options_.max_quiesce_rounds; ++round) {
      std::size_t moved = 0;
      for (const Link& l : links_) {
        if (!channels_.at(key_of(l.a, l.b)).up) continue;
        moved += sync(l.a, l.b);
        moved += sync(l.b, l.a);
      }
      if (moved == 0) return;
    }
    report_.starved = true;
  }

  void summarize() {
    for (const auto& [id, p] : peers_) report_.finals.emplace(id, PeerSummary{p.data(), p.rev(), p.log().size()});

    DisjointSets groups(order_.size());
    for (const Link& l : links_) {
      if (channels_.at(key_of(l.a, l.b)).up) groups.unite(index_of(l.a), index_of(l.b));
    }
    bool converged = !report_.error.has_value();
    std::map<std::size_t, const ElementSet*> representative;
    for (std::size_t i = 0; i < order_.size(); ++i) {
      const ElementSet& data = peers_.at(order_[i]).data();
      auto [it, fresh] = representative.emplace(groups.find(i), &data);
      if (!fresh && *it->second != data) converged = false;
    }
    report_.converged = converged;
  }

  const RunOptions& options_;
  RunReport& report_;
  std::mt19937_64 rng_;
  std::vector<PeerId> order_;
  std::vector<Link> links_;
  std::map<PeerId, Peer> peers_;
  std::map<LinkKey, ChannelState> channels_;
};

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

bool RunReport::checks_passed() const {
  return !error && std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.passed(); });
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "SEED " << seed << '\n';
  for (const CheckOutcome& c : checks) {
    out << "CHECK " << c.event_index << ' ' << c.peer.str() << ' ' << to_string(c.expected) << ' '
        << (c.passed() ? "pass" : "fail actual=" + to_string(c.actual)) << '\n';
  }
  if (error) out << "ERROR " << *error << '\n';
  const RunCounters& k = counters;
  out << "STATS updates=" << k.updates_applied << " noeffect=" << k.updates_no_effect
      << " messages=" << k.messages_sent << " delivered=" << k.messages_delivered
      << " dropped=" << k.messages_dropped << " split=" << k.messages_split << " payload=" << k.payload_ops
      << " applied=" << k.remote_applied << " resolved=" << k.resolve_deletes << " pruned=" << k.pruned_entries << '\n';
  for (const auto& [id, p] : finals) out << "PEER " << id.str() << " rev=" << p.rev << " log=" << p.log_size << '\n';
  for (const auto& [id, p] : finals) out << "FINAL " << id.str() << ' ' << to_string(p.data) << '\n';
  out << "CYCLIC " << (cyclic ? "true" : "false") << '\n';
  out << "STARVED " << (starved ? "true" : "false") << '\n';
  out << "CONVERGED " << (converged ? "true" : "false") << '\n';
  return out.str();
}

RunReport run_scenario(const Scenario& s, const RunOptions& options) {
  RunReport report;
  report.seed = options.seed;
  World world(s, options, report);
  world.run(s.events);
  return report;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::set<PeerId> declared;
  std::set<LinkKey> linked;
  std::size_t line_no = 0;
  std::size_t last_line = 0;

  auto peer_arg = [&](const std::string& tok) {
    if (!PeerId::is_valid_token(tok)) throw ScenarioError(line_no, "invalid peer id '" + tok + "'");
    PeerId id(tok);
    if (!declared.contains(id)) throw ScenarioError(line_no, "undeclared peer " + tok);
    return id;
  };
  auto link_args = [&](const std::string& a, const std::string& b) {
    Link l{peer_arg(a), peer_arg(b)};
    if (!linked.contains(key_of(l.a, l.b))) throw ScenarioError(line_no, "no link " + a + " " + b);
    return l;
  };
  auto set_arg = [&](const std::string& tok) {
    try {
      return parse_set(tok);
    } catch (const std::exception& e) {
      throw ScenarioError(line_no, e.what());
    }
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = tokenize(line);
    if (tok.empty()) continue;
    last_line = line_no;
    const std::string& cmd = tok[0];
    auto arity = [&](std::size_t n) {
      if (tok.size() != n + 1) {
        throw ScenarioError(line_no, cmd + " expects " + std::to_string(n) + " argument(s)");
      }
    };

    if (cmd == "PEER") {
      arity(2);
      if (!PeerId::is_valid_token(tok[1])) throw ScenarioError(line_no, "invalid peer id '" + tok[1] + "'");
      PeerId id(tok[1]);
      if (!declared.insert(id).second) throw ScenarioError(line_no, "peer " + tok[1] + " declared twice");
      s.peers.emplace_back(std::move(id), set_arg(tok[2]));
    } else if (cmd == "LINK") {
      arity(2);
      Link l{peer_arg(tok[1]), peer_arg(tok[2])};
      if (l.a == l.b) throw ScenarioError(line_no, "self-loop link");
      if (!linked.insert(key_of(l.a, l.b)).second) throw ScenarioError(line_no, "link declared twice");
      s.links.push_back(std::move(l));
    } else if (cmd == "OP") {
      arity(3);
      Intent intent;
      if (tok[2] == "insert") {
        intent = Intent::Insert;
      } else if (tok[2] == "delete") {
        intent = Intent::Delete;
      } else {
        throw ScenarioError(line_no, "OP intent must be insert or delete, got '" + tok[2] + "'");
      }
      if (!Element::is_valid_encoding(tok[3])) throw ScenarioError(line_no, "invalid element '" + tok[3] + "'");
      s.events.emplace_back(event::Update{peer_arg(tok[1]), intent, Element(tok[3])});
    } else if (cmd == "SYNC") {
      arity(2);
      Link l = link_args(tok[1], tok[2]);
      s.events.emplace_back(event::Sync{l.a, l.b});
    } else if (cmd == "PARTITION") {
      arity(2);
      s.events.emplace_back(event::Partition{link_args(tok[1], tok[2])});
    } else if (cmd == "HEAL") {
      arity(2);
      s.events.emplace_back(event::Heal{link_args(tok[1], tok[2])});
    } else if (cmd == "RESOLVE") {
      arity(1);
      s.events.emplace_back(event::Resolve{peer_arg(tok[1])});
    } else if (cmd == "PRUNE") {
      arity(1);
      s.events.emplace_back(event::Prune{peer_arg(tok[1])});
    } else if (cmd == "CHECK") {
      arity(2);
      s.events.emplace_back(event::Check{peer_arg(tok[1]), set_arg(tok[2])});
    } else if (cmd == "QUIESCE") {
      arity(0);
      s.events.emplace_back(event::Quiesce{});
    } else {
      throw ScenarioError(line_no, "unknown directive '" + cmd + "'");
    }
  }
  if (s.peers.empty()) throw ScenarioError(last_line ? last_line : 1, "scenario declares no peers");
  return s;
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  for (const auto& [id, initial] : s.peers) out << "PEER " << id.str() << ' ' << to_string(initial) << '\n';
  for (const Link& l : s.links) out << "LINK " << l.a.str() << ' ' << l.b.str() << '\n';
  for (const Event& e : s.events) {
    std::visit(overloaded{
                   [&](const event::Update& u) {
                     out << "OP " << u.peer.str() << (u.intent == Intent::Insert ? " insert " : " delete ")
                         << to_string(u.element) << '\n';
                   },
                   [&](const event::Sync& x) { out << "SYNC " << x.from.str() << ' ' << x.to.str() << '\n'; },
                   [&](const event::Partition& p) {
                     out << "PARTITION " << p.link.a.str() << ' ' << p.link.b.str() << '\n';
                   },
                   [&](const event::Heal& h) { out << "HEAL " << h.link.a.str() << ' ' << h.link.b.str() << '\n'; },
                   [&](const event::Resolve& r) { out << "RESOLVE " << r.peer.str() << '\n'; },
                   [&](const event::Prune& p) { out << "PRUNE " << p.peer.str() << '\n'; },
                   [&](const event::Check& c) {
                     out << "CHECK " << c.peer.str() << ' ' << to_string(c.expected) << '\n';
                   },
                   [&](const event::Quiesce&) { out << "QUIESCE\n"; },
               },
               e);
  }
  return out.str();
}

Scenario random_workload(std::size_t peers, std::size_t universe_size, std::size_t ops_per_peer,
                         double sync_density, std::uint64_t seed) {
  if (peers == 0 || universe_size == 0) throw std::invalid_argument("peers and universe size must be positive");
  if (!(sync_density >= 0.0 && sync_density <= 1.0)) throw std::invalid_argument("sync density must be in [0,1]");
  std::mt19937_64 rng(seed);
  Scenario s;

  std::vector<PeerId> ids;
  for (std::size_t i = 1; i <= peers; ++i) ids.emplace_back("P" + std::to_string(i));
  ElementSet initial;
  for (std::size_t x = 1; x <= universe_size; ++x) {
    if (chance(rng, 0.5)) initial.insert(Element(static_cast<std::int64_t>(x)));
  }
  for (const PeerId& id : ids) s.peers.emplace_back(id, initial);
  for (std::size_t i = 1; i < peers; ++i) s.links.push_back(Link{ids[draw(rng, i)], ids[i]});

  std::vector<std::size_t> issuers;
  for (std::size_t p = 0; p < peers; ++p) issuers.insert(issuers.end(), ops_per_peer, p);
  std::shuffle(issuers.begin(), issuers.end(), rng);

  std::vector<bool> down(s.links.size(), false);
  for (std::size_t p : issuers) {
    Intent intent = chance(rng, 0.5) ? Intent::Insert : Intent::Delete;
    Element x(static_cast<std::int64_t>(1 + draw(rng, universe_size)));
    s.events.emplace_back(event::Update{ids[p], intent, x});
    if (s.links.empty()) continue;
    if (chance(rng, sync_density)) {
      const Link& l = s.links[draw(rng, s.links.size())];
      if (chance(rng, 0.5)) {
        s.events.emplace_back(event::Sync{l.a, l.b});
      } else {
        s.events.emplace_back(event::Sync{l.b, l.a});
      }
    }
    if (chance(rng, sync_density / 4)) {
      std::size_t i = draw(rng, s.links.size());
      if (down[i]) {
        s.events.emplace_back(event::Heal{s.links[i]});
      } else {
        s.events.emplace_back(event::Partition{s.links[i]});
      }
      down[i] = !down[i];
    }
  }
  for (std::size_t i = 0; i < s.links.size(); ++i) {
    if (down[i]) s.events.emplace_back(event::Heal{s.links[i]});
  }
  s.events.emplace_back(event::Quiesce{});
  return s;
}

}  // namespace ccss
