#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include <json.hpp>

#include "davlab/group.hpp"
#include "davlab/sequence.hpp"
#include "davlab/sequence_io.hpp"
#include "oracle_utils.hpp"

using davlab::Element;
using davlab::Group;
using davlab::Sequence;

TEST_CASE("terms render in canonical spelling") {
  Group g = Group::metacyclic({3, 7, 2});
  CHECK(davlab::term_to_text(g, g.identity()) == "1");
  CHECK(davlab::term_to_text(g, g.index_of(Element{1, 0})) == "x");
  CHECK(davlab::term_to_text(g, g.index_of(Element{0, 1})) == "y");
  CHECK(davlab::term_to_text(g, g.index_of(Element{2, 0})) == "x^2");
  CHECK(davlab::term_to_text(g, g.index_of(Element{0, 3})) == "y^3");
  CHECK(davlab::term_to_text(g, g.index_of(Element{1, 1})) == "x*y");
  CHECK(davlab::term_to_text(g, g.index_of(Element{2, 5})) == "x^2*y^5");
}

TEST_CASE("sequences render sorted with multiplicity suffixes") {
  Group g = Group::metacyclic({2, 3, 2});
  Sequence s;
  s.add(g.index_of(Element{1, 0}));
  s.add(g.index_of(Element{1, 1}));
  s.add(g.index_of(Element{1, 2}));
  CHECK(davlab::to_text(g, s) == "x x*y x*y^2");

  Sequence t = Sequence::repeated(g.index_of(Element{0, 1}), 2);
  t.add(g.index_of(Element{1, 1}));
  CHECK(davlab::to_text(g, t) == "y[^2] x*y");

  CHECK(davlab::to_text(g, Sequence{}).empty());
  CHECK(davlab::to_text(g, Sequence::repeated(g.identity(), 3)) == "1[^3]");
}

TEST_CASE("parsing accepts explicit exponents and reduces them modulo the orders") {
  Group g = Group::metacyclic({2, 3, 2});
  Sequence s = davlab::sequence_from_text(g, "x y^2[^4] x^1*y^3");
  CHECK(s.length() == 6);
  CHECK(s.multiplicity(g.index_of(Element{0, 2})) == 4);
  CHECK(s.multiplicity(g.index_of(Element{1, 0})) == 2);  // y^3 = 1, so x^1*y^3 = x
  CHECK(davlab::to_text(g, s) == "y^2[^4] x[^2]");

  CHECK(davlab::term_from_text(g, "x^2") == g.identity());
  CHECK(davlab::term_from_text(g, "x^3*y^4") == g.index_of(Element{1, 1}));
  CHECK(davlab::term_from_text(g, "xy") == g.index_of(Element{1, 1}));  // the * is optional
  CHECK(davlab::term_from_text(g, "1") == g.identity());
}

TEST_CASE("parsing tolerates arbitrary whitespace") {
  Group g = Group::metacyclic({2, 3, 2});
  Sequence a = davlab::sequence_from_text(g, "  x\t x*y \n x*y^2  ");
  Sequence b = davlab::sequence_from_text(g, "x x*y x*y^2");
  CHECK(a == b);
  CHECK(davlab::sequence_from_text(g, "").empty());
  CHECK(davlab::sequence_from_text(g, "   ").empty());
}

TEST_CASE("malformed text is rejected with a format error") {
  Group g = Group::metacyclic({2, 3, 2});
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "z"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "x^"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "y^a"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "x[2]"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "x[^]"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "x[^0]"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "x[^2"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "x*z"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "y*x"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_text(g, "1x"), davlab::FormatError);
  CHECK_THROWS_AS(davlab::term_from_text(g, ""), davlab::FormatError);
}

TEST_CASE("random sequences round-trip through text") {
  std::mt19937_64 rng(42);
  for (const Group& g : {Group::metacyclic({3, 7, 2}), Group::metacyclic({2, 4, 3}),
                         davlab::cyclic_group(9)}) {
    for (int trial = 0; trial < 100; ++trial) {
      Sequence s = oracle::pack(oracle::random_elements(rng, g, 10));
      std::string text = davlab::to_text(g, s);
      CHECK(davlab::sequence_from_text(g, text) == s);
    }
  }
}

TEST_CASE("sequences round-trip through JSON") {
  Group g = Group::metacyclic({2, 3, 2});
  Sequence s = davlab::sequence_from_text(g, "y[^2] x x*y^2");
  nlohmann::ordered_json j = davlab::sequence_to_json(g, s);
  CHECK(j["terms"].size() == 3);
  CHECK(j["terms"][0] == nlohmann::json({0, 1, 2}));
  CHECK(davlab::sequence_from_json(g, j) == s);

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    Sequence r = oracle::pack(oracle::random_elements(rng, g, 8));
    CHECK(davlab::sequence_from_json(g, davlab::sequence_to_json(g, r)) == r);
  }
}

TEST_CASE("malformed JSON is rejected with a format error") {
  Group g = Group::metacyclic({2, 3, 2});
  using nlohmann::json;
  CHECK_THROWS_AS(davlab::sequence_from_json(g, json::array()), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_json(g, json{{"other", 1}}), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_json(g, json{{"terms", {{1, 2}}}}), davlab::FormatError);
  CHECK_THROWS_AS(davlab::sequence_from_json(g, json{{"terms", {{1, 2, "x"}}}}),
                  davlab::FormatError);
}
