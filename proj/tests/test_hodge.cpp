#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pertalg/complex.hpp"

#include "helpers.hpp"

using namespace pertalg;
using Mat = Matrix<Rat>;
using Map = GradedMap<Rat>;

/* Two generators a, b in degree 0 and one generator c in degree 1,
 * with d(a) = c.  Worked through by hand. */
static ChainComplex<Rat> two_one_complex() {
  GradedSpace sp;
  sp.basis[0] = {"a", "b"};
  sp.basis[1] = {"c"};
  Map d = Map::zero(sp, sp, 1);
  Mat d0(1, 2);
  d0.at(0, 0) = Rat(1);
  d.set_block(0, d0);
  return ChainComplex<Rat>::make(sp, d);
}

TEST_CASE("construction rejects bad differentials") {
  GradedSpace sp;
  sp.basis[0] = {"a"};
  sp.basis[1] = {"b"};
  sp.basis[2] = {"c"};
  Map d = Map::zero(sp, sp, 1);
  Mat one(1, 1);
  one.at(0, 0) = Rat(1);
  d.set_block(0, one);
  d.set_block(1, one);
  CHECK_THROWS_AS(ChainComplex<Rat>::make(sp, d), std::invalid_argument);
  Map flat = Map::zero(sp, sp, 0);
  CHECK_THROWS_AS(ChainComplex<Rat>::make(sp, flat), std::invalid_argument);
}

TEST_CASE("splitting of the two generator example, frozen by hand") {
  ChainComplex<Rat> c = two_one_complex();
  HodgeData<Rat> hd = build_hodge(c);

  // t kills a and c, keeps b
  Mat t0 = hd.t.block(0);
  CHECK(t0.at(0, 0) == Rat(0));
  CHECK(t0.at(1, 1) == Rat(1));
  CHECK(t0.at(0, 1) == Rat(0));
  CHECK(t0.at(1, 0) == Rat(0));
  CHECK(hd.t.block(1).is_zero());

  // s sends c back to a
  Mat s1 = hd.s.block(1);
  CHECK(s1.rows == 2);
  CHECK(s1.cols == 1);
  CHECK(s1.at(0, 0) == Rat(1));
  CHECK(s1.at(1, 0) == Rat(0));
  CHECK(hd.s.block(0).is_zero());

  CHECK(all_pass(verify_hodge(c, hd)));
}

TEST_CASE("zero differential makes everything harmonic") {
  GradedSpace sp;
  sp.basis[0] = {"a", "b"};
  sp.basis[2] = {"c"};
  Map d = Map::zero(sp, sp, 1);
  ChainComplex<Rat> c = ChainComplex<Rat>::make(sp, d);
  HodgeData<Rat> hd = build_hodge(c);
  CHECK(hd.t == Map::identity(sp));
  CHECK(hd.s.is_zero());
  CHECK(all_pass(verify_hodge(c, hd)));
}

TEST_CASE("homology dimensions of the worked example") {
  ChainComplex<Rat> c = two_one_complex();
  auto h = homology_dims(c);
  CHECK(h[0] == 1);
  CHECK(h[1] == 0);
}

TEST_CASE("verification reports a located witness on failure") {
  ChainComplex<Rat> c = two_one_complex();
  HodgeData<Rat> hd = build_hodge(c);
  hd.t.set_block(1, Mat::identity(1));  // breaks TS and the homotopy axiom
  auto reports = verify_hodge(c, hd);
  CHECK_FALSE(all_pass(reports));
  bool found = false;
  for (const auto& r : reports)
    if (!r.pass) {
      REQUIRE(r.witness.has_value());
      CHECK(r.witness->term.find("degree") != std::string::npos);
      CHECK(r.witness->term.find("entry") != std::string::npos);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("splitting axioms hold on random complexes") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    ChainComplex<Rat> c = testutil::random_complex(rng, 2 + int(rng() % 4), 4);
    HodgeData<Rat> hd = build_hodge(c);
    auto reports = verify_hodge(c, hd);
    for (const auto& r : reports) {
      INFO("axiom ", r.id, " on trial ", trial);
      CHECK(r.pass);
    }
    // the projector rank matches the homology dimension in every degree
    for (int n : c.space.degrees()) CHECK(rank(hd.t.block(n)) == homology_dim(c, n));
  }
}
