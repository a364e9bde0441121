#include "ccss/peer.hpp"

#include <algorithm>
#include <charconv>

#include "ccss/text.hpp"

namespace ccss {
namespace {

std::uint64_t parse_u64(std::string_view text, const char* what) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size()) {
    throw ParseError(std::string("invalid ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

PeerId parse_peer(std::string_view text) {
  if (!PeerId::is_valid_token(text)) throw ParseError("invalid peer id '" + std::string(text) + "'");
  return PeerId(text);
}

// Consumes `key=` at the front of `rest` and returns the value up to the next
// space (or to the end for the last field).
std::string_view take_field(std::string_view& rest, std::string_view key, bool last) {
  std::string prefix = std::string(key) + "=";
  if (rest.substr(0, prefix.size()) != prefix) {
    throw ParseError("expected field '" + prefix + "' in message");
  }
  rest.remove_prefix(prefix.size());
  if (last) {
    auto value = rest;
    rest = {};
    return value;
  }
  auto space = rest.find(' ');
  if (space == std::string_view::npos) throw ParseError("truncated message after '" + prefix + "'");
  auto value = rest.substr(0, space);
  rest.remove_prefix(space + 1);
  return value;
}

std::pair<PeerId, std::uint64_t> parse_origin_seq(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw ParseError("expected origin:seq, got '" + std::string(text) + "'");
  return {parse_peer(text.substr(0, colon)), parse_u64(text.substr(colon + 1), "sequence number")};
}

}  // namespace

PeerId::PeerId(std::string_view token) : token_(token) {
  if (!is_valid_token(token)) throw std::invalid_argument("invalid peer id '" + token_ + "'");
}

bool PeerId::is_valid_token(std::string_view token) noexcept {
  return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

Peer::Peer(PeerId id, ElementSet initial, std::span<const PeerId> neighbors)
    : id_(std::move(id)), data_(std::move(initial)) {
  for (const PeerId& n : neighbors) {
    if (n == id_) throw DuplicateNeighbor("peer " + id_.str() + " cannot neighbor itself");
    if (!neighbors_.emplace(n, NeighborState{.neighbor = n,
                                                   .sent_watermark = 0,
                                                   .sent_through = 0,
                                                   .received_rev = 0,
                                                   .acknowledged = {},
                                                   .suppressed = {}}).second) {
      throw DuplicateNeighbor("neighbor " + n.str() + " listed twice for " + id_.str());
    }
  }
}

Peer init_peer(PeerId id, ElementSet initial, const std::vector<PeerId>& neighbors) {
  return Peer(std::move(id), std::move(initial), neighbors);
}

const NeighborState& Peer::neighbor(const PeerId& id) const {
  auto it = neighbors_.find(id);
  if (it == neighbors_.end()) throw UnknownNeighbor(id.str() + " is not a neighbor of " + id_.str());
  return it->second;
}

NeighborState& Peer::neighbor_mut(const PeerId& id) {
  return const_cast<NeighborState&>(std::as_const(*this).neighbor(id));
}

std::optional<Op> Peer::local_update(Intent intent, const Element& x) {
  Op op = intent == Intent::Insert ? make_insert(data_, x) : make_delete(data_, x);
  if (op.is_nop()) return std::nullopt;
  apply_in_place(data_, op);
  ++rev_;
  OpTag tag{id_, next_seq_++};
  processed_[id_] = tag.seq;
  log_.push_back(LogEntry{op, std::move(tag), rev_, std::nullopt});
  return op;
}

bool Peer::sendable_to(const LogEntry& e, const NeighborState& nb) const {
  if (e.via == nb.neighbor || e.tag.origin == nb.neighbor) return false;
  if (nb.suppressed.contains(e.tag)) return false;
  auto acked = nb.acknowledged.find(e.tag.origin);
  return acked == nb.acknowledged.end() || e.tag.seq > acked->second;
}

SyncMessage Peer::prepare_sync(const PeerId& to) {
  NeighborState& nb = neighbor_mut(to);
  std::vector<const LogEntry*> pending;
  OpSeq ops;
  for (const LogEntry& e : log_) {
    if (e.local_rev <= nb.sent_through || !sendable_to(e, nb)) continue;
    pending.push_back(&e);
    ops.push_back(e.op);
  }
  auto keep = normalization_mask(ops);

  SyncMessage msg{.from = id_, .to = to, .wm = nb.received_rev, .rev = rev_, .ack = processed_, .payload = {}};
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (keep[i]) msg.payload.push_back(TaggedOp{pending[i]->op, pending[i]->tag});
  }
  nb.sent_through = rev_;
  return msg;
}

SyncMessage Peer::prepare_ack(const PeerId& to) const {
  const NeighborState& nb = neighbor(to);
  return SyncMessage{.from = id_, .to = to, .wm = nb.received_rev, .rev = nb.sent_watermark, .ack = processed_,
                     .payload = {}};
}

OpSeq Peer::handle_sync(const SyncMessage& msg, TransformFn transform) {
  if (msg.to != id_) throw MisaddressedMessage("message for " + msg.to.str() + " delivered to " + id_.str());
  NeighborState& nb = neighbor_mut(msg.from);

  // Remote side: payload entries not handled before, normalized.
  auto seen = processed_;
  std::vector<const TaggedOp*> fresh;
  OpSeq incoming;
  for (const TaggedOp& t : msg.payload) {
    if (t.op.is_nop() || t.tag.origin == id_) continue;
    auto& last = seen[t.tag.origin];
    if (t.tag.seq <= last) continue;
    last = t.tag.seq;
    fresh.push_back(&t);
    incoming.push_back(t.op);
  }
  auto remote_keep = normalization_mask(incoming);
  std::vector<const TaggedOp*> remote;
  OpSeq qs;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (!remote_keep[i]) continue;
    remote.push_back(fresh[i]);
    qs.push_back(fresh[i]->op);
  }

  // Local side: our changes the sender had not seen when it sent.
  std::vector<OpTag> local_tags;
  OpSeq concurrent;
  for (const LogEntry& e : log_) {
    if (e.local_rev <= msg.wm || e.via == msg.from || e.tag.origin == msg.from) continue;
    if (nb.suppressed.contains(e.tag)) continue;
    local_tags.push_back(e.tag);
    concurrent.push_back(e.op);
  }
  auto local_keep = normalization_mask(concurrent);
  std::vector<OpTag> ps_tags;
  OpSeq ps;
  for (std::size_t i = 0; i < concurrent.size(); ++i) {
    if (!local_keep[i]) continue;
    ps_tags.push_back(local_tags[i]);
    ps.push_back(concurrent[i]);
  }

  OpSeq qs_prime = transform(ps, qs);
  OpSeq ps_prime = transform_local(ps, qs);
  ElementSet next = apply_seq(data_, qs_prime);

  // Commit; nothing below throws on valid state.
  data_ = std::move(next);
  OpSeq applied;
  for (std::size_t k = 0; k < qs_prime.size(); ++k) {
    if (qs_prime[k].is_nop()) continue;
    ++rev_;
    log_.push_back(LogEntry{qs_prime[k], remote[k]->tag, rev_, msg.from});
    applied.push_back(qs_prime[k]);
  }
  for (std::size_t k = 0; k < ps_prime.size(); ++k) {
    if (ps_prime[k].is_nop()) nb.suppressed.insert(ps_tags[k]);
  }
  processed_ = std::move(seen);
  nb.received_rev = std::max(nb.received_rev, msg.rev);
  nb.sent_watermark = std::max(nb.sent_watermark, msg.wm);
  nb.sent_through = std::max(nb.sent_through, nb.sent_watermark);
  for (const auto& [origin, seq] : msg.ack) {
    auto& known = nb.acknowledged[origin];
    known = std::max(known, seq);
  }
  return applied;
}

std::size_t Peer::prune_log() {
  // An entry is kept while some neighbor may still need it, either in a
  // payload or as a concurrent local op when its next message arrives.
  auto needed_by = [](const LogEntry& e, const NeighborState& nb) {
    return e.local_rev > nb.sent_watermark && e.via != nb.neighbor && e.tag.origin != nb.neighbor &&
           !nb.suppressed.contains(e.tag);
  };
  std::size_t before = log_.size();
  std::erase_if(log_, [&](const LogEntry& e) {
    bool needed = std::any_of(neighbors_.begin(), neighbors_.end(),
                              [&](const auto& kv) { return needed_by(e, kv.second); });
    if (!needed) {
      for (auto& [id, nb] : neighbors_) nb.suppressed.erase(e.tag);
    }
    return !needed;
  });
  return before - log_.size();
}

void Peer::reset_link(const PeerId& to) {
  NeighborState& nb = neighbor_mut(to);
  nb.sent_through = nb.sent_watermark;
}

std::string encode_message(const SyncMessage& msg) {
  std::string out = "MSG from=" + msg.from.str() + " to=" + msg.to.str() + " wm=" + std::to_string(msg.wm) +
                    " rev=" + std::to_string(msg.rev) + " ack=";
  bool first = true;
  for (const auto& [origin, seq] : msg.ack) {
    if (!first) out += ',';
    first = false;
    out += origin.str() + ":" + std::to_string(seq);
  }
  out += " ops=[";
  first = true;
  for (const TaggedOp& t : msg.payload) {
    if (!first) out += ',';
    first = false;
    out += to_string(t.op) + "@" + t.tag.origin.str() + ":" + std::to_string(t.tag.seq);
  }
  out += ']';
  return out;
}

SyncMessage decode_message(std::string_view line) {
  if (line.substr(0, 4) != "MSG ") throw ParseError("message must start with 'MSG '");
  std::string_view rest = line.substr(4);
  PeerId from = parse_peer(take_field(rest, "from", false));
  PeerId to = parse_peer(take_field(rest, "to", false));
  SyncMessage msg{.from = std::move(from), .to = std::move(to), .wm = 0, .rev = 0, .ack = {}, .payload = {}};
  msg.wm = parse_u64(take_field(rest, "wm", false), "wm");
  msg.rev = parse_u64(take_field(rest, "rev", false), "rev");
  for (auto item : split_top_level(take_field(rest, "ack", false))) {
    auto [origin, seq] = parse_origin_seq(item);
    if (!msg.ack.emplace(origin, seq).second) throw ParseError("duplicate ack origin " + origin.str());
  }
  std::string_view ops = take_field(rest, "ops", true);
  if (ops.size() < 2 || ops.front() != '[' || ops.back() != ']') throw ParseError("ops must be bracketed");
  for (auto item : split_top_level(ops.substr(1, ops.size() - 2))) {
    auto at = item.rfind('@');
    if (at == std::string_view::npos) throw ParseError("op without provenance '" + std::string(item) + "'");
    auto [origin, seq] = parse_origin_seq(item.substr(at + 1));
    msg.payload.push_back(TaggedOp{parse_op(item.substr(0, at)), OpTag{std::move(origin), seq}});
  }
  // Round trips must be exact; reject anything with a different rendering.
  if (encode_message(msg) != line) throw ParseError("message is not in canonical form");
  return msg;
}

}  // namespace ccss
