#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "pertalg/ainf_module.hpp"

using namespace pertalg;

namespace {

bool all_ok(const std::vector<IdentityReport>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return !rs.empty();
}

}  // namespace

TEST_CASE("admissible trees are counted and ordered by their compositions") {
  for (int i = 2; i <= 7; ++i) {
    auto trees = enumerate_admissible_trees(i);
    CHECK(trees.size() == size_t(1) << (i - 2));
    for (const auto& tr : trees) CHECK(tr.arity() == i);
  }
  auto two = enumerate_admissible_trees(2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].parts == std::vector<int>{1});
  auto three = enumerate_admissible_trees(3);
  REQUIRE(three.size() == 2);
  CHECK(three[0].parts == std::vector<int>{1, 1});
  CHECK(three[1].parts == std::vector<int>{2});
  CHECK_THROWS_AS(enumerate_admissible_trees(1), std::invalid_argument);
}

TEST_CASE("the smallest tree is projection, operation, projection") {
  AInfModuleStructure<Rat> unsus = convert_conventions(testutil::massey_self_module());
  HodgeData<Rat> hd = build_hodge(testutil::massey_complex());
  MultiOp<Rat> mp = tree_map(AdmissibleTree{{1}}, unsus, hd);

  auto ttbl = detail::column_table(hd.t);
  const MultiOp<Rat>* m2 = unsus.find_op(2);
  for (const auto& in : detail::mixed_tuples(unsus.algebra.space, unsus.module_space, 2)) {
    SparseVec<Rat> direct;
    for (const auto& [mid, c] : detail::table_apply(ttbl, in[1]).terms)
      direct += m2->apply({in[0], mid}).scaled(c);
    direct = detail::table_apply_vec(ttbl, direct);
    SparseVec<Rat> got = mp.apply(in);
    got += direct.scaled(Rat(-1));
    CHECK(got.is_zero());
  }

  const BasisId w{1, 2}, u{1, 0}, v{1, 1}, wu{2, 1};
  SparseVec<Rat> val = mp.apply({w, u});
  REQUIRE(val.terms.size() == 1);
  CHECK(val.terms.at(wu) == Rat(1));
  CHECK(mp.apply({u, v}).is_zero());
}

TEST_CASE("the three stage composite follows the displayed labeling") {
  // even generator degree: no crossing signs anywhere
  testutil::ChainFixture fx = testutil::chain_fixture(2);
  Tuple in{fx.a, fx.a, fx.a, fx.a, fx.a, fx.a, fx.x};
  MultiOp<Rat> mp = tree_map(AdmissibleTree{{3, 1, 2}}, fx.mod, fx.hd);
  SparseVec<Rat> val = mp.apply(in);
  REQUIRE(val.terms.size() == 1);
  CHECK(val.terms.at(fx.root) == Rat(30));

  // the same value by composing the three stages one after another
  auto ttbl = detail::column_table(fx.hd.t);
  auto stbl = detail::column_table(fx.hd.s);
  SparseVec<Rat> strand = detail::table_apply(ttbl, fx.x);
  SparseVec<Rat> next;
  for (const auto& [mid, c] : strand.terms)
    next += fx.mod.find_op(4)->apply({fx.a, fx.a, fx.a, mid}).scaled(c);
  strand = detail::table_apply_vec(stbl, next);
  next = {};
  for (const auto& [mid, c] : strand.terms)
    next += fx.mod.find_op(2)->apply({fx.a, mid}).scaled(c);
  strand = detail::table_apply_vec(stbl, next);
  next = {};
  for (const auto& [mid, c] : strand.terms)
    next += fx.mod.find_op(3)->apply({fx.a, fx.a, mid}).scaled(c);
  strand = detail::table_apply_vec(ttbl, next);
  REQUIRE(strand.terms.size() == 1);
  CHECK(strand.terms.at(fx.root) == Rat(30));

  // reversing the composition gives nothing on this input
  CHECK(tree_map(AdmissibleTree{{2, 1, 3}}, fx.mod, fx.hd).apply(in).is_zero());

  // the whole arity seven sum degenerates to the single surviving tree
  SparseVec<Rat> total;
  for (const auto& tr : enumerate_admissible_trees(7))
    total += tree_map(tr, fx.mod, fx.hd).apply(in);
  total += val.scaled(Rat(-1));
  CHECK(total.is_zero());

  // odd generator degree: the first stage crosses three odd inputs
  testutil::ChainFixture odd = testutil::chain_fixture(1);
  SparseVec<Rat> oval = tree_map(AdmissibleTree{{3, 1, 2}}, odd.mod, odd.hd)
                            .apply({odd.a, odd.a, odd.a, odd.a, odd.a, odd.a, odd.x});
  REQUIRE(oval.terms.size() == 1);
  CHECK(oval.terms.at(odd.root) == Rat(-30));
}

TEST_CASE("a tree with no operations to stand on vanishes") {
  testutil::ChainFixture fx = testutil::chain_fixture(2);
  for (auto& o : fx.mod.ops) o.entries.clear();
  for (const auto& tr : enumerate_admissible_trees(4))
    CHECK(tree_map(tr, fx.mod, fx.hd).is_zero());
}

TEST_CASE("module identities hold for the algebra acting on itself") {
  AInfModuleStructure<Rat> mm = testutil::massey_self_module();
  validate(mm);
  CHECK(all_ok(module_codifferential_check(mm, 4)));

  // convention conversion is involutive
  AInfModuleStructure<Rat> back = convert_conventions(convert_conventions(mm));
  for (int n = 1; n <= mm.cap; ++n)
    CHECK(back.find_op(n)->entries == mm.find_op(n)->entries);
}

TEST_CASE("an incompatible operation family is detected") {
  GradedSpace sp;
  sp.basis[1] = {"a"};
  AInfStructure<Rat> alg = AInfStructure<Rat>::make(sp, 1);
  GradedSpace msp;
  msp.basis[0] = {"x"};
  msp.basis[1] = {"y"};
  msp.basis[2] = {"z"};
  AInfModuleStructure<Rat> m = AInfModuleStructure<Rat>::make(alg, msp, 2);
  m.op(1).add({BasisId{1, 0}}, BasisId{2, 0}, Rat(1));
  m.op(2).add({BasisId{1, 0}, BasisId{0, 0}}, BasisId{1, 0}, Rat(1));
  validate(m);
  auto rs = module_codifferential_check(m);
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].pass);
  CHECK_FALSE(rs[1].pass);
  CHECK(rs[1].witness.has_value());
}

TEST_CASE("degree violations are rejected up front") {
  GradedSpace sp;
  sp.basis[1] = {"a"};
  AInfStructure<Rat> alg = AInfStructure<Rat>::make(sp, 1);
  GradedSpace msp;
  msp.basis[0] = {"x"};
  msp.basis[1] = {"y"};
  AInfModuleStructure<Rat> m = AInfModuleStructure<Rat>::make(alg, msp, 2);
  m.op(2).add({BasisId{1, 0}, BasisId{0, 0}}, BasisId{0, 0}, Rat(1));
  CHECK_THROWS_AS(validate(m), std::invalid_argument);
}

TEST_CASE("the fixture module splits over the harmonic generators") {
  AInfModuleStructure<Rat> mm = testutil::massey_self_module();
  HodgeData<Rat> hd = build_hodge(testutil::massey_complex());
  ModuleTransfer<Rat> tm = transfer_module(mm, hd, 4);
  CHECK(all_ok(tm.checks));

  CHECK(tm.tspace.dim(1) == 2);
  CHECK(tm.tspace.dim(2) == 1);
  CHECK(tm.minimal.find_op(1)->is_zero());

  // the surviving product pairs the third generator with the first one
  SparseVec<Rat> val = tm.minimal.find_op(2)->apply({BasisId{1, 2}, BasisId{1, 0}});
  REQUIRE(val.terms.size() == 1);
  CHECK(val.terms.at(BasisId{2, 0}) == Rat(1));
  CHECK(tm.minimal.find_op(2)->apply({BasisId{1, 0}, BasisId{1, 1}}).is_zero());

  // identity leading term and the kept differential
  REQUIRE(!tm.iso.empty());
  for (const auto& b : basis_ids(mm.module_space)) {
    SparseVec<Rat> one = tm.iso[0].apply({b});
    REQUIRE(one.terms.size() == 1);
    CHECK(one.terms.at(b) == Rat(1));
  }
  CHECK(tm.split.find_op(1)->entries == mm.find_op(1)->entries);

  // the pushed back operations only see the projected module input and
  // their outputs are fixed by the projection
  auto ttbl = detail::column_table(hd.t);
  for (int n = 2; n <= 4; ++n) {
    const MultiOp<Rat>* o = tm.split.find_op(n);
    for (const auto& in : detail::mixed_tuples(mm.algebra.space, mm.module_space, n)) {
      SparseVec<Rat> raw = o->apply(in);
      SparseVec<Rat> proj;
      Tuple head(in.begin(), in.end() - 1);
      for (const auto& [mid, c] : detail::table_apply(ttbl, in.back()).terms) {
        Tuple t = head;
        t.push_back(mid);
        proj += o->apply(t).scaled(c);
      }
      proj += raw.scaled(Rat(-1));
      CHECK(proj.is_zero());
      SparseVec<Rat> fixed = detail::table_apply_vec(ttbl, raw);
      fixed += raw.scaled(Rat(-1));
      CHECK(fixed.is_zero());
    }
  }
}

TEST_CASE("random modules transfer consistently along both routes") {
  std::mt19937 rng(7311);
  for (int trial = 0; trial < 6; ++trial) {
    AInfModuleStructure<Rat> mod = testutil::random_module(rng);
    validate(mod);
    CHECK(all_ok(module_codifferential_check(mod, 4)));
    HodgeData<Rat> hd = build_hodge(testutil::module_complex(mod));
    ModuleTransfer<Rat> tm = transfer_module(mod, hd, 4);
    CHECK(all_ok(tm.checks));
    CHECK(tm.minimal.find_op(1)->is_zero());
  }
}

TEST_CASE("a module with no higher operations splits into itself") {
  std::mt19937 rng(5150);
  AInfModuleStructure<Rat> mod = testutil::random_module(rng);
  mod.op(2).entries.clear();
  mod.op(3).entries.clear();
  HodgeData<Rat> hd = build_hodge(testutil::module_complex(mod));
  ModuleTransfer<Rat> tm = transfer_module(mod, hd, 4);
  CHECK(all_ok(tm.checks));
  for (int n = 1; n <= 4; ++n) CHECK(tm.minimal.find_op(n)->is_zero());
  CHECK(tm.split.find_op(1)->entries == mod.find_op(1)->entries);
  for (int n = 2; n <= 4; ++n) CHECK(tm.split.find_op(n)->is_zero());
  for (size_t k = 1; k < tm.iso.size(); ++k) CHECK(tm.iso[k].is_zero());
}

TEST_CASE("deep arities stay coherent on a small module") {
  std::mt19937 rng(424242);
  GradedSpace sp;
  sp.basis[1] = {"a"};
  sp.basis[2] = {"b"};
  AInfStructure<Rat> alg = AInfStructure<Rat>::make(sp, 2);
  alg.op(1).add({BasisId{1, 0}}, BasisId{2, 0}, Rat(long(rng() % 5) - 2));
  alg.op(2).add({BasisId{1, 0}, BasisId{1, 0}}, BasisId{2, 0}, Rat(long(rng() % 5) - 2));
  alg = convert_conventions(alg);
  GradedSpace msp;
  msp.basis[0] = {"x0", "x1"};
  msp.basis[1] = {"y0", "y1"};
  AInfModuleStructure<Rat> mod = AInfModuleStructure<Rat>::make(alg, msp, 3);
  for (int o = 0; o < 2; ++o) mod.op(1).add({BasisId{0, 0}}, BasisId{1, o}, Rat(long(rng() % 5) - 2));
  for (int i = 0; i < 2; ++i)
    for (int o = 0; o < 2; ++o) {
      mod.op(2).add({BasisId{1, 0}, BasisId{0, i}}, BasisId{1, o}, Rat(long(rng() % 5) - 2));
      mod.op(3).add({BasisId{1, 0}, BasisId{1, 0}, BasisId{0, i}}, BasisId{1, o},
                    Rat(long(rng() % 5) - 2));
    }
  validate(mod);
  HodgeData<Rat> hd = build_hodge(testutil::module_complex(mod));

  ModuleTransfer<Rat> deep = transfer_module(mod, hd, 7);
  CHECK(all_ok(deep.checks));
  CHECK(deep.checks.size() == 20);

  // lower arities are untouched by raising the cap
  ModuleTransfer<Rat> shallow = transfer_module(mod, hd, 4);
  for (int n = 1; n <= 4; ++n)
    CHECK(deep.minimal.find_op(n)->entries == shallow.minimal.find_op(n)->entries);
  for (int n = 1; n <= 4; ++n)
    CHECK(deep.split.find_op(n)->entries == shallow.split.find_op(n)->entries);
  for (size_t k = 0; k < 4; ++k) CHECK(deep.iso[k].entries == shallow.iso[k].entries);
}
