#pragma once

#include <random>

#include "pertalg/ainf.hpp"
#include "pertalg/ainf_module.hpp"
#include "pertalg/complex.hpp"

namespace testutil {

/* Random invertible matrix with small integer entries. */
inline pertalg::Matrix<pertalg::Rat> random_invertible(std::mt19937& rng, int n) {
  using namespace pertalg;
  for (;;) {
    Matrix<Rat> m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = Rat(long(rng() % 7) - 3);
    if (rank(m) == n) return m;
  }
}

/* Random cochain complex concentrated in degrees lo..hi: block shift maps in
 * a rank normal form, conjugated by random invertible changes of basis per
 * degree. */
inline pertalg::ChainComplex<pertalg::Rat> random_complex(std::mt19937& rng, int lo, int hi,
                                                          int maxdim) {
  using namespace pertalg;
  const int count = hi - lo + 1;
  GradedSpace sp;
  std::vector<int> dims(static_cast<size_t>(count));
  for (int n = 0; n < count; ++n) {
    dims[size_t(n)] = 1 + int(rng() % unsigned(maxdim));
    std::vector<std::string> labels;
    for (int i = 0; i < dims[size_t(n)]; ++i)
      labels.push_back("e" + std::to_string(lo + n) + "_" + std::to_string(i));
    sp.basis[lo + n] = labels;
  }

  // choose ranks r_n of d_n with r_{n-1} + r_n <= dim_n so d^2 = 0 fits
  std::vector<int> ranks(static_cast<size_t>(count), 0);
  for (int n = 0; n + 1 < count; ++n) {
    int used = n > 0 ? ranks[size_t(n) - 1] : 0;
    int room = std::min(dims[size_t(n)] - used, dims[size_t(n) + 1]);
    ranks[size_t(n)] = room > 0 ? int(rng() % unsigned(room + 1)) : 0;
  }

  GradedMap<Rat> d = GradedMap<Rat>::zero(sp, sp, 1);
  std::vector<Matrix<Rat>> p(static_cast<size_t>(count)), pinv(static_cast<size_t>(count));
  for (int n = 0; n < count; ++n) {
    p[size_t(n)] = random_invertible(rng, dims[size_t(n)]);
    pinv[size_t(n)] = *inverse(p[size_t(n)]);
  }
  for (int n = 0; n + 1 < count; ++n) {
    // normal form: send the last r_n source coordinates to the first
    // r_n target coordinates; the source tail is disjoint from the
    // target head used by d_{n+1}, which keeps d^2 = 0
    Matrix<Rat> nf(dims[size_t(n) + 1], dims[size_t(n)]);
    for (int k = 0; k < ranks[size_t(n)]; ++k)
      nf.at(k, dims[size_t(n)] - ranks[size_t(n)] + k) = Rat(1);
    d.set_block(lo + n, p[size_t(n) + 1] * nf * pinv[size_t(n)]);
  }
  return ChainComplex<Rat>::make(sp, d);
}

inline pertalg::ChainComplex<pertalg::Rat> random_complex(std::mt19937& rng, int degrees,
                                                          int maxdim) {
  return random_complex(rng, 0, degrees - 1, maxdim);
}

/* Random solution of the square-zero condition for d+x: conjugate d by a
 * random degree preserving change of basis and take the difference. */
inline pertalg::GradedMap<pertalg::Rat> random_mc(std::mt19937& rng,
                                                  const pertalg::ChainComplex<pertalg::Rat>& c) {
  using namespace pertalg;
  GradedMap<Rat> p = GradedMap<Rat>::zero(c.space, c.space, 0);
  GradedMap<Rat> pinv = GradedMap<Rat>::zero(c.space, c.space, 0);
  for (int n : c.space.degrees()) {
    Matrix<Rat> m = random_invertible(rng, c.space.dim(n));
    p.set_block(n, m);
    pinv.set_block(n, *inverse(m));
  }
  return p * c.d * pinv - c.d;
}

/* Three degree-one generators u, v, w and two degree-two products uv, wu,
 * with dw = uv. The only nonzero products are u*v = uv and w*u = wu. The
 * induced triple product on cohomology classes is the classical example of
 * a nonvanishing secondary operation. */
inline pertalg::GradedSpace massey_space() {
  pertalg::GradedSpace sp;
  sp.basis[1] = {"u", "v", "w"};
  sp.basis[2] = {"uv", "wu"};
  return sp;
}

inline pertalg::AInfStructure<pertalg::Rat> massey_unsuspended() {
  using namespace pertalg;
  AInfStructure<Rat> m = AInfStructure<Rat>::make(massey_space(), 2);
  const BasisId u{1, 0}, v{1, 1}, w{1, 2}, uv{2, 0}, wu{2, 1};
  m.op(1).add({w}, uv, Rat(1));
  m.op(2).add({u, v}, uv, Rat(1));
  m.op(2).add({w, u}, wu, Rat(1));
  return m;
}

inline pertalg::AInfStructure<pertalg::Rat> massey_b() {
  return pertalg::convert_conventions(massey_unsuspended());
}

inline pertalg::ChainComplex<pertalg::Rat> massey_complex() {
  using namespace pertalg;
  AInfStructure<Rat> m = massey_unsuspended();
  return ChainComplex<Rat>::make(m.space, map_from_op(m.space, *m.find_op(1), 1));
}

/* Direct expansion of the arity-3 transferred operation of a structure with
 * vanishing arity-3 part: resolve one inner product through the splitting
 * homotopy and multiply again. Written without the operator combinators so
 * it can catch sign mistakes in them. */
inline pertalg::SparseVec<pertalg::Rat> oracle3(const pertalg::AInfStructure<pertalg::Rat>& a,
                                                const pertalg::HodgeData<pertalg::Rat>& hd,
                                                const pertalg::BasisId& x,
                                                const pertalg::BasisId& y,
                                                const pertalg::BasisId& z) {
  using namespace pertalg;
  auto ttbl = detail::column_table(hd.t);
  auto stbl = detail::column_table(hd.s);
  const MultiOp<Rat>* b2 = a.find_op(2);
  auto prod = [&](const SparseVec<Rat>& l, const SparseVec<Rat>& r) {
    SparseVec<Rat> out;
    for (const auto& [bl, cl] : l.terms)
      for (const auto& [br, cr] : r.terms) out += b2->apply({bl, br}).scaled(cl * cr);
    return out;
  };
  auto tt = [&](const SparseVec<Rat>& v) { return detail::table_apply_vec(ttbl, v); };
  auto ss = [&](const SparseVec<Rat>& v) { return detail::table_apply_vec(stbl, v); };
  auto unit = [](const BasisId& b) {
    SparseVec<Rat> v;
    v.add(b, Rat(1));
    return v;
  };

  SparseVec<Rat> X = tt(unit(x)), Y = tt(unit(y)), Z = tt(unit(z));
  SparseVec<Rat> acc;
  // first factor pair resolved: the pair (b2(X,Y), Z)
  {
    SparseVec<Rat> left = prod(X, Y);
    int sl = x.deg + y.deg - 1;  // suspended degree of the product
    acc += prod(ss(left), Z);
    SparseVec<Rat> second = prod(tt(left), ss(Z));
    acc += (sl & 1) ? second.scaled(Rat(-1)) : second;
  }
  // second factor pair resolved: the pair (X, b2(Y,Z)), crossed by the
  // odd insertion
  {
    SparseVec<Rat> right = prod(Y, Z);
    SparseVec<Rat> inner = prod(ss(X), right);
    SparseVec<Rat> second = prod(tt(X), ss(right));
    if (sdeg(x) & 1) second = second.scaled(Rat(-1));
    inner += second;
    if (sdeg(x) & 1) inner = inner.scaled(Rat(-1));
    acc += inner;
  }
  return tt(acc).scaled(Rat(-1));
}

/* Random differential graded algebra concentrated in degrees 1 and 2: all
 * triple products land in degree 3 and vanish, so associativity and the
 * derivation rule hold for free, while the transferred structure is
 * generically nontrivial. Returned in the suspended convention. */
inline pertalg::AInfStructure<pertalg::Rat> random_dg_algebra(std::mt19937& rng) {
  using namespace pertalg;
  GradedSpace sp;
  int d1 = 1 + int(rng() % 4), d2 = 1 + int(rng() % 4);
  std::vector<std::string> l1, l2;
  for (int i = 0; i < d1; ++i) l1.push_back("a" + std::to_string(i));
  for (int i = 0; i < d2; ++i) l2.push_back("b" + std::to_string(i));
  sp.basis[1] = l1;
  sp.basis[2] = l2;
  AInfStructure<Rat> m = AInfStructure<Rat>::make(sp, 2);
  for (int i = 0; i < d1; ++i)
    for (int o = 0; o < d2; ++o) {
      Rat c(long(rng() % 5) - 2);
      if (c != 0) m.op(1).add({BasisId{1, i}}, BasisId{2, o}, c);
    }
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      for (int o = 0; o < d2; ++o) {
        Rat c(long(rng() % 5) - 2);
        if (c != 0) m.op(2).add({BasisId{1, i}, BasisId{1, j}}, BasisId{2, o}, c);
      }
  return convert_conventions(m);
}

/* The algebra acting on itself: module operations read off the algebra
 * operations verbatim, so every identity is inherited. */
inline pertalg::AInfModuleStructure<pertalg::Rat> massey_self_module() {
  using namespace pertalg;
  AInfStructure<Rat> b = massey_b();
  AInfModuleStructure<Rat> m = AInfModuleStructure<Rat>::make(b, massey_space(), 2);
  m.op(1) = *b.find_op(1);
  m.op(2) = *b.find_op(2);
  return m;
}

/* Random module over a random differential graded algebra. The module sits
 * in degrees 0 and 1, so every composite in the compatibility identities
 * lands outside the module and the random entries are unconstrained, while
 * the transferred operations are generically nonzero. Suspended convention. */
inline pertalg::AInfModuleStructure<pertalg::Rat> random_module(std::mt19937& rng) {
  using namespace pertalg;
  AInfStructure<Rat> alg = random_dg_algebra(rng);
  GradedSpace msp;
  int d0 = 1 + int(rng() % 3), d1 = 1 + int(rng() % 3);
  std::vector<std::string> l0, l1;
  for (int i = 0; i < d0; ++i) l0.push_back("x" + std::to_string(i));
  for (int i = 0; i < d1; ++i) l1.push_back("y" + std::to_string(i));
  msp.basis[0] = l0;
  msp.basis[1] = l1;
  int va = alg.space.dim(1);
  AInfModuleStructure<Rat> m = AInfModuleStructure<Rat>::make(alg, msp, 3);
  for (int i = 0; i < d0; ++i)
    for (int o = 0; o < d1; ++o) {
      Rat c(long(rng() % 5) - 2);
      if (c != 0) m.op(1).add({BasisId{0, i}}, BasisId{1, o}, c);
    }
  for (int a = 0; a < va; ++a)
    for (int i = 0; i < d0; ++i)
      for (int o = 0; o < d1; ++o) {
        Rat c(long(rng() % 5) - 2);
        if (c != 0) m.op(2).add({BasisId{1, a}, BasisId{0, i}}, BasisId{1, o}, c);
      }
  for (int a = 0; a < va; ++a)
    for (int b = 0; b < va; ++b)
      for (int i = 0; i < d0; ++i)
        for (int o = 0; o < d1; ++o) {
          Rat c(long(rng() % 5) - 2);
          if (c != 0) m.op(3).add({BasisId{1, a}, BasisId{1, b}, BasisId{0, i}}, BasisId{1, o}, c);
        }
  return m;
}

/* The module slot as a cochain complex of its own. */
inline pertalg::ChainComplex<pertalg::Rat> module_complex(
    const pertalg::AInfModuleStructure<pertalg::Rat>& m) {
  using namespace pertalg;
  return ChainComplex<Rat>::make(m.module_space,
                                 map_from_op(m.module_space, *m.find_op(1), 1));
}

/* Chain of module elements threaded so that exactly one tree survives on the
 * all-generator input; gdeg is the degree of the single algebra generator. */
struct ChainFixture {
  pertalg::AInfModuleStructure<pertalg::Rat> mod;  // plain convention, for tree evaluation
  pertalg::HodgeData<pertalg::Rat> hd;
  pertalg::BasisId a, x, root;
};

inline ChainFixture chain_fixture(int gdeg) {
  using namespace pertalg;
  GradedSpace sp;
  sp.basis[gdeg] = {"a"};
  AInfStructure<Rat> alg = AInfStructure<Rat>::make(sp, 1);

  // stages: m_4 lands in p, contracts to q, m_2 lands in r, contracts to
  // rr, m_3 lands in f; degrees follow the arity rule for each stage
  int dp = 3 * gdeg + 0 + 2 - 4;
  int dq = dp - 1;
  int dr = gdeg + dq + 2 - 2;
  int drr = dr - 1;
  int df = 2 * gdeg + drr + 2 - 3;
  GradedSpace msp;
  msp.basis[0].push_back("x");
  auto put = [&msp](int deg, const char* l) {
    msp.basis[deg].push_back(l);
    return BasisId{deg, int(msp.basis[deg].size()) - 1};
  };
  BasisId x{0, 0};
  BasisId p = put(dp, "p"), q = put(dq, "q"), r = put(dr, "r"), rr = put(drr, "rr"),
          f = put(df, "f");

  ChainFixture out;
  out.mod = AInfModuleStructure<Rat>::make(alg, msp, 4);
  out.mod.op(4).add({BasisId{gdeg, 0}, BasisId{gdeg, 0}, BasisId{gdeg, 0}, x}, p, Rat(2));
  out.mod.op(2).add({BasisId{gdeg, 0}, q}, r, Rat(3));
  out.mod.op(3).add({BasisId{gdeg, 0}, BasisId{gdeg, 0}, rr}, f, Rat(5));

  GradedMap<Rat> t = GradedMap<Rat>::zero(msp, msp, 0);
  GradedMap<Rat> s = GradedMap<Rat>::zero(msp, msp, -1);
  auto fix = [&t, &msp](const BasisId& b) {
    Matrix<Rat> blk = t.block(b.deg);
    blk.at(b.idx, b.idx) = Rat(1);
    t.set_block(b.deg, blk);
  };
  fix(x);
  fix(f);
  auto contract = [&s](const BasisId& from, const BasisId& to) {
    Matrix<Rat> blk = s.block(from.deg);
    blk.at(to.idx, from.idx) = Rat(1);
    s.set_block(from.deg, blk);
  };
  contract(p, q);
  contract(r, rr);
  out.hd = HodgeData<Rat>{t, s};
  out.a = BasisId{gdeg, 0};
  out.x = x;
  out.root = f;
  return out;
}

}  // namespace testutil
