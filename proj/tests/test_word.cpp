#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pertalg/word.hpp"

#include <random>
#include <stdexcept>

using pertalg::Word;
using pertalg::normal_form;

TEST_CASE("empty word is the unit") {
  Word one{""};
  CHECK(one.degree() == 0);
  CHECK(one.x_count() == 0);
  CHECK_FALSE(one.odd());
  CHECK(one.str() == "1");
}

TEST_CASE("degree counts x minus s") {
  CHECK(Word{"s"}.degree() == -1);
  CHECK(Word{"t"}.degree() == 0);
  CHECK(Word{"x"}.degree() == 1);
  CHECK(Word{"sxt"}.degree() == 0);
  CHECK(Word{"xsx"}.degree() == 1);
  CHECK(Word{"sxsx"}.degree() == 0);
  CHECK(Word{"xx"}.degree() == 2);
  CHECK(Word{"sxt"}.x_count() == 1);
  CHECK(Word{"xsx"}.x_count() == 2);
}

TEST_CASE("parity tracks odd letters only") {
  CHECK(Word{"s"}.odd());
  CHECK(Word{"x"}.odd());
  CHECK_FALSE(Word{"t"}.odd());
  CHECK_FALSE(Word{"sx"}.odd());
  CHECK(Word{"xt"}.odd());
  CHECK_FALSE(Word{"sxt"}.odd());
  CHECK_FALSE(Word{"txs"}.odd());
  CHECK(Word{"xsx"}.odd());
}

TEST_CASE("normal form collapses tt and kills the other flat pairs") {
  CHECK(normal_form("tt").value() == Word{"t"});
  CHECK(normal_form("ttt").value() == Word{"t"});
  CHECK(normal_form("tttt").value() == Word{"t"});
  CHECK_FALSE(normal_form("ss").has_value());
  CHECK_FALSE(normal_form("st").has_value());
  CHECK_FALSE(normal_form("ts").has_value());
  CHECK_FALSE(normal_form("xssx").has_value());
  CHECK_FALSE(normal_form("xtsx").has_value());
  CHECK(normal_form("xttx").value() == Word{"xtx"});
  CHECK(normal_form("sxttxs").value() == Word{"sxtxs"});
  CHECK(normal_form("").value() == Word{""});
  CHECK(normal_form("sxtxsxt").value() == Word{"sxtxsxt"});
}

TEST_CASE("normal form rejects letters outside the alphabet") {
  CHECK_THROWS_AS(normal_form("a"), std::invalid_argument);
  CHECK_THROWS_AS(normal_form("sx t"), std::invalid_argument);
  CHECK_THROWS_AS(normal_form("sXt"), std::invalid_argument);
}

TEST_CASE("ordering is by length then lexicographic") {
  CHECK(Word{""} < Word{"s"});
  CHECK(Word{"s"} < Word{"t"});
  CHECK(Word{"t"} < Word{"x"});
  CHECK(Word{"x"} < Word{"sx"});
  CHECK(Word{"sx"} < Word{"xs"});
  CHECK(Word{"xt"} < Word{"sxt"});
  CHECK(Word{"sxt"} < Word{"txs"});
}

TEST_CASE("a word already in normal form passes through unchanged") {
  std::mt19937 rng(20260822);
  const char letters[] = {'s', 't', 'x'};
  int produced = 0;
  while (produced < 500) {
    std::string raw;
    int len = int(rng() % 9);
    for (int i = 0; i < len; ++i) raw.push_back(letters[rng() % 3]);
    auto nf = normal_form(raw);
    if (!nf) continue;
    auto again = normal_form(nf->letters);
    REQUIRE(again.has_value());
    CHECK(*again == *nf);
    ++produced;
  }
}
