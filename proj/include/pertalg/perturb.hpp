#pragma once

#include <stdexcept>

#include "pertalg/complex.hpp"

namespace pertalg {

class PerturbationError : public std::runtime_error {
 public:
  explicit PerturbationError(const std::string& what) : std::runtime_error(what) {}
};

/* A validated degree +1 perturbation of the differential, together with
 * the cached exact inverses of 1+sx and 1+xs. */
template <class S>
struct Perturbation {
  GradedMap<S> x;
  GradedMap<S> alpha_V;
  GradedMap<S> beta_V;
};

template <class S>
Perturbation<S> make_perturbation(const ChainComplex<S>& c, const HodgeData<S>& hd,
                                  const GradedMap<S>& x) {
  if (!(x.src == c.space) || !(x.dst == c.space) || x.shift != 1)
    throw PerturbationError("perturbation must be a degree +1 endomorphism of the complex");

  GradedMap<S> dx = c.d + x;
  GradedMap<S> sq = dx * dx;
  if (auto w = detail::first_entry_witness(sq))
    throw PerturbationError("perturbed differential does not square to zero at " + w->term);

  Perturbation<S> p;
  p.x = x;
  p.alpha_V = GradedMap<S>::zero(c.space, c.space, 0);
  p.beta_V = GradedMap<S>::zero(c.space, c.space, 0);
  GradedMap<S> sx = hd.s * x;
  GradedMap<S> xs = x * hd.s;
  for (int n : c.space.degrees()) {
    Matrix<S> usx = Matrix<S>::identity(c.space.dim(n)) + sx.block(n);
    auto ai = inverse(usx);
    if (!ai)
      throw PerturbationError("1+sx is singular in degree " + std::to_string(n));
    p.alpha_V.set_block(n, *ai);
    Matrix<S> uxs = Matrix<S>::identity(c.space.dim(n)) + xs.block(n);
    auto bi = inverse(uxs);
    if (!bi)
      throw PerturbationError("1+xs is singular in degree " + std::to_string(n));
    p.beta_V.set_block(n, *bi);
  }
  return p;
}

/* Everything the linear transfer produces: the harmonic subspace with its
 * induced differential, the perturbed splitting, and the inverse pair of
 * chain isomorphisms connecting the two complexes. */
template <class S>
struct TransferredData {
  GradedSpace tspace;       // one generator per harmonic basis vector
  GradedMap<S> embed;       // tspace -> V, the chosen representatives
  GradedMap<S> xi_full;     // t x alpha t as an endomorphism of V
  GradedMap<S> xi_t;        // induced degree +1 differential on tspace
  HodgeData<S> hd_perturbed;  // (alpha s, alpha t beta), split for d+x
  GradedMap<S> incl;        // tspace -> V, chain map into (V, d+x)
  GradedMap<S> proj;        // V -> tspace, chain map out of (V, d+x)
  std::vector<IdentityReport> checks;
};

namespace detail {

/* Coordinates of f's columns in the column space of e: solves e y = f. */
template <class S>
Matrix<S> coords_in(const Matrix<S>& e, const Matrix<S>& f) {
  auto y = solve(e, f);
  if (!y) throw std::logic_error("vector unexpectedly outside the harmonic subspace");
  return *y;
}

inline IdentityReport check_dims_equal(const std::string& id, const std::map<int, int>& a,
                                       const std::map<int, int>& b) {
  IdentityReport r;
  r.id = id;
  r.pass = true;
  auto keys = a;
  for (const auto& [n, v] : b) keys.emplace(n, 0);
  for (const auto& [n, unused] : keys) {
    auto ita = a.find(n), itb = b.find(n);
    int va = ita == a.end() ? 0 : ita->second;
    int vb = itb == b.end() ? 0 : itb->second;
    if (va != vb) {
      r.pass = false;
      Witness w;
      w.term = "degree " + std::to_string(n);
      w.coeff = std::to_string(va) + " vs " + std::to_string(vb);
      r.witness = w;
      break;
    }
  }
  return r;
}

}  // namespace detail

template <class S>
TransferredData<S> transferred_structure(const ChainComplex<S>& c, const HodgeData<S>& hd,
                                         const Perturbation<S>& p) {
  TransferredData<S> out;

  // harmonic representatives: a column basis of the image of t per degree
  std::map<int, Matrix<S>> reps;
  for (int n : c.space.degrees()) {
    Matrix<S> tb = hd.t.block(n);
    std::vector<int> cols = extend_basis_greedy(Matrix<S>::zero(tb.rows, 0), tb);
    Matrix<S> e(tb.rows, int(cols.size()));
    std::vector<std::string> labels;
    for (int j = 0; j < int(cols.size()); ++j) {
      e.set_column(j, tb.column(cols[size_t(j)]));
      labels.push_back("h" + std::to_string(n) + "_" + std::to_string(j));
    }
    if (!labels.empty()) {
      out.tspace.basis[n] = labels;
      reps[n] = e;
    }
  }
  out.embed = GradedMap<S>::zero(out.tspace, c.space, 0);
  for (const auto& [n, e] : reps) out.embed.set_block(n, e);

  GradedMap<S> txat = hd.t * p.x * p.alpha_V * hd.t;
  out.xi_full = txat;

  // compress d + xi to the harmonic generators; d vanishes there, so this
  // is the compression of xi alone
  GradedMap<S> dxi = (c.d + txat) * out.embed;  // tspace -> V, shift +1
  out.xi_t = GradedMap<S>::zero(out.tspace, out.tspace, 1);
  for (int n : out.tspace.degrees()) {
    if (out.tspace.dim(n + 1) == 0) {
      if (!dxi.block(n).is_zero())
        throw std::logic_error("induced differential escapes the harmonic subspace");
      continue;
    }
    out.xi_t.set_block(n, detail::coords_in(reps.at(n + 1), dxi.block(n)));
  }

  out.hd_perturbed.s = p.alpha_V * hd.s;
  out.hd_perturbed.t = p.alpha_V * hd.t * p.beta_V;

  GradedMap<S> at = p.alpha_V * hd.t;
  GradedMap<S> tb = hd.t * p.beta_V;
  out.incl = at * out.embed;
  out.proj = GradedMap<S>::zero(c.space, out.tspace, 0);
  for (int n : c.space.degrees()) {
    if (out.tspace.dim(n) == 0) continue;
    out.proj.set_block(n, detail::coords_in(reps.at(n), tb.block(n)));
  }

  GradedMap<S> dx = c.d + p.x;

  auto add = [&](IdentityReport r) { out.checks.push_back(std::move(r)); };
  for (auto& r : verify_hodge(dx, out.hd_perturbed)) {
    r.id = "PERTURBED-" + r.id;
    add(std::move(r));
  }
  add(detail::check_map_zero("ISO-SECTION",
                             out.proj * out.incl - GradedMap<S>::identity(out.tspace)));
  add(detail::check_map_zero("ISO-IMAGE", out.incl * out.proj - out.hd_perturbed.t));
  add(detail::check_map_zero("ISO-CHAIN-IN", dx * out.incl - out.incl * out.xi_t));
  add(detail::check_map_zero("ISO-CHAIN-OUT", out.xi_t * out.proj - out.proj * dx));
  add(detail::check_map_zero("XI-SQUARE", out.xi_t * out.xi_t));

  ChainComplex<S> pert;  // d+x squares to zero by make_perturbation
  pert.space = c.space;
  pert.d = dx;
  ChainComplex<S> harm;
  harm.space = out.tspace;
  harm.d = out.xi_t;
  add(detail::check_dims_equal("HOMOLOGY-DIMS", homology_dims(pert), homology_dims(harm)));

  return out;
}

/* The invertible change of basis carrying d+x to d + t x alpha t. */
template <class S>
struct GaugeData {
  GradedMap<S> g;
  GradedMap<S> g_inv;
  std::vector<IdentityReport> checks;
};

template <class S>
GaugeData<S> gauge_conjugation(const ChainComplex<S>& c, const HodgeData<S>& hd,
                               const Perturbation<S>& p) {
  GaugeData<S> out;
  GradedMap<S> id = GradedMap<S>::identity(c.space);
  GradedMap<S> at = p.alpha_V * hd.t;
  out.g = (id + hd.t - at) * p.beta_V;
  // closed form of the inverse: (1+xs)(1 - t + alpha t)
  out.g_inv = (id + p.x * hd.s) * (id - hd.t + at);

  out.checks.push_back(detail::check_map_zero("GAUGE-INVERSE", out.g * out.g_inv - id));
  {
    IdentityReport r = detail::check_map_zero("GAUGE-INVERSE", out.g_inv * out.g - id);
    if (!r.pass && out.checks.back().pass) out.checks.back() = r;
  }
  GradedMap<S> lhs = out.g * (c.d + p.x) * out.g_inv;
  GradedMap<S> rhs = c.d + hd.t * p.x * p.alpha_V * hd.t;
  out.checks.push_back(detail::check_map_zero("GAUGE-CONJUGATION", lhs - rhs));
  return out;
}

}  // namespace pertalg
