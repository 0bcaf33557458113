#pragma once

#include <optional>

#include "pertalg/graded.hpp"
#include "pertalg/report.hpp"

namespace pertalg {

/* Cochain complex: d raises degree by one and squares to zero. */
template <class S>
struct ChainComplex {
  GradedSpace space;
  GradedMap<S> d;

  static ChainComplex make(GradedSpace sp, GradedMap<S> d) {
    if (!(d.src == sp) || !(d.dst == sp) || d.shift != 1)
      throw std::invalid_argument("differential must be a degree +1 endomorphism");
    GradedMap<S> dd = d.compose(d);
    if (!dd.is_zero()) throw std::invalid_argument("differential does not square to zero");
    ChainComplex c;
    c.space = std::move(sp);
    c.d = std::move(d);
    return c;
  }
};

/* Splitting data: a projector t of degree 0 and a homotopy s of degree -1
 * satisfying ss = st = ts = 0, tt = t and ds + sd = 1 - t. */
template <class S>
struct HodgeData {
  GradedMap<S> t;
  GradedMap<S> s;
};

template <class S>
int homology_dim(const ChainComplex<S>& c, int n) {
  int z = c.space.dim(n) - rank(c.d.block(n));
  int b = rank(c.d.block(n - 1));
  return z - b;
}

template <class S>
std::map<int, int> homology_dims(const ChainComplex<S>& c) {
  std::map<int, int> out;
  for (int n : c.space.degrees()) out[n] = homology_dim(c, n);
  return out;
}

/* Construct a splitting degree by degree.  In each degree the kernel of d
 * is split off first, a greedy standard basis complement C is chosen, the
 * image basis B = d(C) from one degree below extends to a basis of the
 * kernel with harmonic columns H picked greedily from the kernel basis,
 * and t, s are read off the change of basis P = [B | H | C]. */
template <class S>
HodgeData<S> build_hodge(const ChainComplex<S>& c) {
  HodgeData<S> hd;
  hd.t = GradedMap<S>::zero(c.space, c.space, 0);
  hd.s = GradedMap<S>::zero(c.space, c.space, -1);

  std::map<int, Matrix<S>> cmat;  // chosen complement columns per degree
  for (int n : c.space.degrees()) {
    int dim = c.space.dim(n);
    Matrix<S> dn = c.d.block(n);
    Matrix<S> z = kernel_basis(dn);

    Matrix<S> id = Matrix<S>::identity(dim);
    std::vector<int> cidx = extend_basis_greedy(z, id);
    Matrix<S> cm(dim, int(cidx.size()));
    for (int j = 0; j < int(cidx.size()); ++j) cm.set_column(j, id.column(cidx[size_t(j)]));
    cmat[n] = cm;

    Matrix<S> bm(dim, 0);
    auto prev = cmat.find(n - 1);
    if (prev != cmat.end() && prev->second.cols > 0)
      bm = c.d.block(n - 1) * prev->second;

    std::vector<int> hidx = extend_basis_greedy(bm, z);
    Matrix<S> hm(dim, int(hidx.size()));
    for (int j = 0; j < int(hidx.size()); ++j) hm.set_column(j, z.column(hidx[size_t(j)]));

    int nb = bm.cols, nh = hm.cols, nc = cm.cols;
    if (nb + nh + nc != dim)
      throw std::logic_error("splitting construction failed to produce a basis");
    Matrix<S> p(dim, dim);
    for (int j = 0; j < nb; ++j) p.set_column(j, bm.column(j));
    for (int j = 0; j < nh; ++j) p.set_column(nb + j, hm.column(j));
    for (int j = 0; j < nc; ++j) p.set_column(nb + nh + j, cm.column(j));
    auto pinv = inverse(p);
    if (!pinv) throw std::logic_error("splitting construction produced a singular basis");

    Matrix<S> eh(dim, dim);
    for (int j = 0; j < nh; ++j) eh.at(nb + j, nb + j) = FieldTraits<S>::one();
    hd.t.set_block(n, p * eh * *pinv);

    if (nb > 0) {
      // the image columns are d of the complement one degree below, in order
      Matrix<S> sel(prev->second.cols, dim);
      for (int j = 0; j < nb; ++j) sel.at(j, j) = FieldTraits<S>::one();
      hd.s.set_block(n, prev->second * sel * *pinv);
    }
  }
  return hd;
}

namespace detail {

template <class S>
std::optional<Witness> first_entry_witness(const GradedMap<S>& m) {
  for (const auto& [n, blk] : m.blocks)
    for (int i = 0; i < blk.rows; ++i)
      for (int j = 0; j < blk.cols; ++j)
        if (!FieldTraits<S>::is_zero(blk.at(i, j))) {
          Witness w;
          w.term = "degree " + std::to_string(n) + " entry (" + std::to_string(i) + "," +
                   std::to_string(j) + ")";
          w.coeff = FieldTraits<S>::str(blk.at(i, j));
          return w;
        }
  return std::nullopt;
}

template <class S>
IdentityReport check_map_zero(const std::string& id, const GradedMap<S>& m) {
  IdentityReport r;
  r.id = id;
  r.witness = first_entry_witness(m);
  r.pass = !r.witness.has_value();
  return r;
}

}  // namespace detail

/* The five splitting axioms against the given degree +1 differential,
 * each reported with a first offending entry. */
template <class S>
std::vector<IdentityReport> verify_hodge(const GradedMap<S>& d, const HodgeData<S>& hd) {
  std::vector<IdentityReport> out;
  const auto& t = hd.t;
  const auto& s = hd.s;
  GradedMap<S> id = GradedMap<S>::identity(d.src);
  out.push_back(detail::check_map_zero("S-SQUARE", s * s));
  out.push_back(detail::check_map_zero("HOMOTOPY", s * d + d * s - (id - t)));
  out.push_back(detail::check_map_zero("D-COMMUTE", d * t - t * d));
  out.push_back(detail::check_map_zero("T-IDEMPOTENT", t * t - t));
  {
    IdentityReport st = detail::check_map_zero("ANNIHILATION", s * t);
    if (st.pass) st = detail::check_map_zero("ANNIHILATION", t * s);
    out.push_back(st);
  }
  return out;
}

template <class S>
std::vector<IdentityReport> verify_hodge(const ChainComplex<S>& c, const HodgeData<S>& hd) {
  return verify_hodge(c.d, hd);
}

}  // namespace pertalg
