#include "ccss/resolution.hpp"

#include <charconv>
#include <map>
#include <stdexcept>
#include <vector>

#include "ccss/text.hpp"

namespace ccss {
namespace {

bool is_atom(std::string_view s) {
  return Element::is_valid_encoding(s) && s.find_first_of("(),") == std::string_view::npos;
}

}  // namespace

Element Triple::to_element() const {
  if (!is_atom(value) || !is_atom(key)) {
    throw std::invalid_argument("triple value and key must be plain tokens: (" + value + "," + key + ")");
  }
  return Element("(" + value + "," + key + "," + std::to_string(timestamp) + ")");
}

std::optional<Triple> Triple::from_element(const Element& x) {
  std::string_view enc = x.encoding();
  if (enc.size() < 2 || enc.front() != '(' || enc.back() != ')') return std::nullopt;
  auto fields = split_top_level(enc.substr(1, enc.size() - 2));
  if (fields.size() != 3 || !is_atom(fields[0]) || !is_atom(fields[1])) return std::nullopt;
  std::uint64_t t = 0;
  auto [end, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), t);
  if (fields[2].empty() || ec != std::errc{} || end != fields[2].data() + fields[2].size()) return std::nullopt;
  Triple out{std::string(fields[0]), std::string(fields[1]), t};
  // Reject non-canonical timestamps such as "01" so equality stays textual.
  if (out.to_element() != x) return std::nullopt;
  return out;
}

std::optional<Op> lww_insert(Peer& peer, std::string value, std::string key, std::uint64_t timestamp) {
  Triple t{std::move(value), std::move(key), timestamp};
  return peer.local_update(Intent::Insert, t.to_element());
}

OpSeq lww_resolve(Peer& peer) {
  std::map<std::string, std::vector<Triple>> by_key;
  for (const Element& x : peer.data()) {
    if (auto t = Triple::from_element(x)) by_key[t->key].push_back(std::move(*t));
  }
  OpSeq issued;
  for (const auto& [key, triples] : by_key) {
    if (triples.size() < 2) continue;
    const Triple* winner = &triples.front();
    for (const Triple& t : triples) {
      if (t.timestamp > winner->timestamp || (t.timestamp == winner->timestamp && t.value > winner->value)) {
        winner = &t;
      }
    }
    for (const Triple& t : triples) {
      if (&t == winner) continue;
      if (auto op = peer.local_update(Intent::Delete, t.to_element())) issued.push_back(*op);
    }
  }
  return issued;
}

}  // namespace ccss
