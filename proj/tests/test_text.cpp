#include "doctest.h"

#include "ccss/text.hpp"
#include "support/gen.hpp"

using namespace ccss;

TEST_CASE("canonical rendering") {
  CHECK(to_string(Op::insert(3)) == "+3");
  CHECK(to_string(Op::remove(2)) == "-2");
  CHECK(to_string(Op::nop()) == "!");
  CHECK(to_string(OpSeq{Op::insert(3), Op::remove(3)}) == "[+3,-3]");
  CHECK(to_string(ElementSet{2, 1}) == "{1,2}");
  CHECK(to_string(ElementSet{}) == "{}");
  CHECK(to_string(OpSeq{}) == "[]");
}

TEST_CASE("integers sort numerically, before other encodings") {
  ElementSet d{10, 9, -1};
  d.insert(Element("apple"));
  d.insert(Element("(a,7,1)"));
  CHECK(to_string(d) == "{-1,9,10,(a,7,1),apple}");
}

TEST_CASE("element encodings") {
  CHECK(Element::is_valid_encoding("abc"));
  CHECK(Element::is_valid_encoding("(a,b,3)"));
  CHECK_FALSE(Element::is_valid_encoding(""));
  CHECK_FALSE(Element::is_valid_encoding("a,b"));
  CHECK_FALSE(Element::is_valid_encoding("a b"));
  CHECK_FALSE(Element::is_valid_encoding("x@y"));
  CHECK_FALSE(Element::is_valid_encoding("(a,b"));
  CHECK_FALSE(Element::is_valid_encoding("{1}"));
  CHECK_THROWS_AS(Element("!"), std::invalid_argument);
  CHECK(Element("42").as_integer() == 42);
  CHECK_FALSE(Element("042").as_integer());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS((void)parse_set("{1,1}"), ParseError);
  CHECK_THROWS_AS((void)parse_set("1,2"), ParseError);
  CHECK_THROWS_AS((void)parse_seq("[+1,,-2]"), ParseError);
  CHECK_THROWS_AS((void)parse_op("*3"), ParseError);
  CHECK_THROWS_AS((void)parse_op("!3"), ParseError);
}

TEST_CASE("sets with tuple elements split at top-level commas only") {
  ElementSet d = parse_set("{(a,7,1),(b,7,2)}");
  CHECK(d.size() == 2);
  CHECK(d.contains(Element("(b,7,2)")));
}

TEST_CASE("property: render then parse is the identity") {
  gen::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    ElementSet d = gen::subset(rng, 12);
    OpSeq s = gen::valid_seq(rng, d, 12, gen::below(rng, 10));
    CHECK(parse_set(to_string(d)) == d);
    CHECK(parse_seq(to_string(s)) == s);
    CHECK(to_string(parse_seq(to_string(s))) == to_string(s));
  }
}
