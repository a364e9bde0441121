#include "doctest.h"

#include <map>

#include "ccss/core.hpp"
#include "ccss/text.hpp"
#include "support/gen.hpp"

using namespace ccss;

namespace {

ElementSet S(const char* text) { return parse_set(text); }
OpSeq Q(const char* text) { return parse_seq(text); }

// Independent fold with no reuse of the library's apply code.
std::optional<ElementSet> fold(ElementSet d, const OpSeq& s) {
  for (const Op& op : s) {
    if (op.is_nop()) continue;
    bool present = d.contains(op.element());
    if (op.kind() == OpKind::Insert) {
      if (present) return std::nullopt;
      d.insert(op.element());
    } else {
      if (!present) return std::nullopt;
      d.erase(op.element());
    }
  }
  return d;
}

OpSeq concat(OpSeq a, const OpSeq& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

constexpr std::size_t kCases = 2000;

}  // namespace

TEST_CASE("is_valid") {
  CHECK_FALSE(is_valid(S("{1,2}"), Op::insert(2)));
  CHECK(is_valid(S("{1,2}"), Op::nop()));
  CHECK_FALSE(is_valid(S("{1,2}"), Op::remove(3)));
  CHECK(is_valid(S("{1,2}"), Op::remove(2)));
}

TEST_CASE("apply_op") {
  CHECK(apply_op(S("{1,2}"), Op::insert(3)) == S("{1,2,3}"));
  CHECK(apply_op(S("{1,2}"), Op::nop()) == S("{1,2}"));
  CHECK_THROWS_AS((void)apply_op(S("{1,2}"), Op::insert(2)), InvalidInsert);
  CHECK_THROWS_AS((void)apply_op(S("{1,2}"), Op::remove(5)), InvalidDelete);
}

TEST_CASE("check-first constructors") {
  CHECK(make_insert(S("{1,2}"), 3) == Op::insert(3));
  CHECK(make_insert(S("{1,2}"), 2) == Op::nop());
  CHECK(make_insert(S("{}"), 1) == Op::insert(1));
  CHECK(make_delete(S("{1,2}"), 2) == Op::remove(2));
  CHECK(make_delete(S("{1,2}"), 5) == Op::nop());
  CHECK(make_delete(S("{}"), 0) == Op::nop());
}

TEST_CASE("validate_seq and apply_seq") {
  CHECK(validate_seq(S("{1,2}"), Q("[+3,-3]")));
  CHECK_FALSE(validate_seq(S("{1,2}"), Q("[+3,+3]")));
  CHECK(validate_seq(S("{1,2}"), Q("[]")));
  CHECK(apply_seq(S("{1,2}"), Q("[-2,+3]")) == S("{1,3}"));
  CHECK(apply_seq(S("{1,2}"), Q("[+3,-3]")) == S("{1,2}"));
  CHECK(apply_seq(S("{1,2}"), Q("[!,!]")) == S("{1,2}"));
}

TEST_CASE("apply_seq reports the failing index") {
  try {
    (void)apply_seq(S("{1}"), Q("[+2,!,-3]"));
    FAIL("expected InvalidDelete");
  } catch (const InvalidDelete& e) {
    CHECK(e.index() == 2);
    CHECK(e.op() == Op::remove(3));
  }
}

TEST_CASE("normalize examples") {
  CHECK(normalize(Q("[+3,-3]")) == Q("[!,!]"));
  CHECK(normalize(Q("[-2,+3]")) == Q("[-2,+3]"));
  CHECK(normalize(Q("[+7,-7,+7]")) == Q("[!,!,+7]"));
  CHECK(normalize(Q("[]")).empty());
  CHECK(normalize(Q("[+1,+2,-1,-2,+1]")) == Q("[!,!,!,!,+1]"));
}

TEST_CASE("[+7,-7,+7] and its normal form agree from every base without 7") {
  OpSeq s = Q("[+7,-7,+7]");
  OpSeq n = normalize(s);
  for (unsigned mask = 0; mask < (1u << 9); ++mask) {
    if (mask & (1u << 6)) continue;
    ElementSet d;
    for (int x = 1; x <= 9; ++x) {
      if (mask & (1u << (x - 1))) d.insert(x);
    }
    auto a = fold(d, s);
    auto b = fold(d, n);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a == *b);
  }
}

TEST_CASE("transform examples") {
  CHECK(transform_remote(Q("[!,!]"), Q("[-2,+3]")) == Q("[-2,+3]"));
  CHECK(transform_remote(Q("[+5]"), Q("[+5]")) == Q("[!]"));
  CHECK(transform_remote(Q("[+4,-1]"), Q("[-1,+6]")) == Q("[!,+6]"));
  CHECK(transform_local(Q("[+5]"), Q("[+5]")) == Q("[!]"));
  CHECK(transform_local(Q("[-2,+3]"), Q("[!,!]")) == Q("[-2,+3]"));
  CHECK(transform_local(Q("[+4,-1]"), Q("[-1,+6]")) == Q("[+4,!]"));
  CHECK(transform_remote(Q("[]"), Q("[]")).empty());
}

TEST_CASE("transform example paths agree on {1,2}") {
  ElementSet d = S("{1,2}");
  OpSeq ps = Q("[+4,-1]");
  OpSeq qs = Q("[-1,+6]");
  auto local_first = fold(d, concat(ps, transform_remote(ps, qs)));
  auto rebased = fold(d, concat(transform_local(ps, qs), qs));
  REQUIRE(local_first);
  REQUIRE(rebased);
  CHECK(*local_first == S("{2,4,6}"));
  CHECK(*rebased == S("{2,4,6}"));
}

TEST_CASE("opposite kinds on one element diverge") {
  CHECK_THROWS_AS((void)transform_remote(Q("[+3]"), Q("[-3]")), DivergenceError);
  CHECK_THROWS_AS((void)transform_local(Q("[-3]"), Q("[+3]")), DivergenceError);
}

TEST_CASE("transform rejects unnormalized input") {
  CHECK_THROWS_AS((void)transform_remote(Q("[+3,-3]"), Q("[]")), std::invalid_argument);
  CHECK_THROWS_AS((void)transform_local(Q("[]"), Q("[+3,-3]")), std::invalid_argument);
}

// Properties over generated valid sequences.

TEST_CASE("property: cancellation") {
  gen::Rng rng(101);
  for (std::size_t i = 0; i < kCases; ++i) {
    ElementSet d = gen::subset(rng, 8);
    Element x = gen::element(rng, 8);
    OpSeq pair = d.contains(x) ? OpSeq{Op::remove(x), Op::insert(x)} : OpSeq{Op::insert(x), Op::remove(x)};
    REQUIRE(apply_seq(d, pair) == d);
  }
}

TEST_CASE("property: adjacent distinct-element ops commute") {
  gen::Rng rng(202);
  std::size_t swapped = 0;
  for (std::size_t i = 0; i < kCases; ++i) {
    ElementSet d = gen::subset(rng, 6);
    OpSeq s = gen::valid_seq(rng, d, 6, 2 + gen::below(rng, 8));
    std::size_t k = gen::below(rng, s.size() - 1);
    if (s[k].is_nop() || s[k + 1].is_nop() || s[k].element() == s[k + 1].element()) continue;
    OpSeq t = s;
    std::swap(t[k], t[k + 1]);
    REQUIRE(validate_seq(d, t));
    REQUIRE(apply_seq(d, t) == apply_seq(d, s));
    ++swapped;
  }
  CHECK(swapped >= 1000);
}

TEST_CASE("property: normalization is sound and idempotent, without duplicates") {
  gen::Rng rng(303);
  for (std::size_t i = 0; i < kCases; ++i) {
    ElementSet d = gen::subset(rng, 5);
    OpSeq s = gen::valid_seq(rng, d, 5, gen::below(rng, 12));
    OpSeq n = normalize(s);
    REQUIRE(n.size() == s.size());
    REQUIRE(fold(d, n) == fold(d, s));
    REQUIRE(normalize(n) == n);
    REQUIRE(is_normalized(n));
    std::map<Element, int> seen;
    for (const Op& op : n) {
      if (!op.is_nop()) ++seen[op.element()];
    }
    for (const auto& [x, count] : seen) REQUIRE(count == 1);
    // Every base where s is valid gives the same answer, not just d.
    ElementSet other = gen::subset(rng, 5);
    if (fold(other, s)) REQUIRE(fold(other, n) == fold(other, s));
  }
}

TEST_CASE("property: survivors sit at the last occurrence") {
  gen::Rng rng(404);
  for (std::size_t i = 0; i < kCases; ++i) {
    ElementSet d = gen::subset(rng, 4);
    OpSeq s = gen::valid_seq(rng, d, 4, gen::below(rng, 10));
    OpSeq n = normalize(s);
    std::map<Element, std::pair<int, std::size_t>> tally;  // count, last position
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].is_nop()) continue;
      auto& [count, last] = tally[s[k].element()];
      ++count;
      last = k;
    }
    for (std::size_t k = 0; k < n.size(); ++k) {
      if (n[k].is_nop()) continue;
      auto [count, last] = tally.at(n[k].element());
      REQUIRE(count % 2 == 1);
      REQUIRE(k == last);
      REQUIRE(n[k] == s[k]);
    }
  }
}

TEST_CASE("property: same element means same kind (exhaustive, small universes)") {
  // Brute force over all valid sequences of length <= 3 on up to 3 elements,
  // built here without the library's enumerator.
  std::size_t pairs = 0;
  for (int k = 1; k <= 3; ++k) {
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      ElementSet d;
      for (int x = 1; x <= k; ++x) {
        if (mask & (1u << (x - 1))) d.insert(x);
      }
      std::vector<OpSeq> all{{}};
      for (std::size_t len = 1; len <= 3; ++len) {
        std::vector<OpSeq> grown;
        for (const OpSeq& s : all) {
          if (s.size() + 1 != len) continue;
          ElementSet cur = *fold(d, s);
          for (int x = 1; x <= k; ++x) {
            OpSeq t = s;
            t.push_back(cur.contains(x) ? Op::remove(x) : Op::insert(x));
            grown.push_back(t);
          }
        }
        all.insert(all.end(), grown.begin(), grown.end());
      }
      for (const OpSeq& a : all) {
        OpSeq na = normalize(a);
        for (const OpSeq& b : all) {
          OpSeq nb = normalize(b);
          ++pairs;
          for (const Op& p : na) {
            for (const Op& q : nb) {
              if (p.is_nop() || q.is_nop() || p.element() != q.element()) continue;
              REQUIRE(p.kind() == q.kind());
            }
          }
        }
      }
    }
  }
  CHECK(pairs >= 1000);
}

TEST_CASE("property: the three merge paths agree") {
  gen::Rng rng(505);
  for (std::size_t i = 0; i < kCases; ++i) {
    ElementSet d = gen::subset(rng, 6);
    OpSeq ps = normalize(gen::valid_seq(rng, d, 6, gen::below(rng, 7)));
    OpSeq qs = normalize(gen::valid_seq(rng, d, 6, gen::below(rng, 7)));
    auto local_first = fold(d, concat(ps, transform_remote(ps, qs)));
    auto partner_first = fold(d, concat(qs, transform_remote(qs, ps)));
    auto rebased = fold(d, concat(transform_local(ps, qs), qs));
    REQUIRE(local_first);
    REQUIRE(partner_first);
    REQUIRE(rebased);
    REQUIRE(*local_first == *partner_first);
    REQUIRE(*local_first == *rebased);
  }
}

TEST_CASE("property: transformed ops may be applied in any interleaving") {
  gen::Rng rng(606);
  for (std::size_t i = 0; i < kCases; ++i) {
    ElementSet d = gen::subset(rng, 6);
    OpSeq ps = normalize(gen::valid_seq(rng, d, 6, gen::below(rng, 6)));
    OpSeq qs = normalize(gen::valid_seq(rng, d, 6, gen::below(rng, 6)));
    OpSeq qp = transform_remote(ps, qs);
    OpSeq shuffled = qp;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    ElementSet after_ps = *fold(d, ps);
    REQUIRE(fold(after_ps, shuffled) == fold(after_ps, qp));
  }
}
