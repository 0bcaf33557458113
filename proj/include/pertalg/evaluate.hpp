#pragma once

#include "pertalg/perturb.hpp"
#include "pertalg/series.hpp"

namespace pertalg {

class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/* Smallest k with m^k = 0, searched up to the given bound. */
template <class S>
std::optional<int> nilpotency_index(const GradedMap<S>& m, int bound) {
  GradedMap<S> acc = GradedMap<S>::identity(m.src);
  for (int k = 0; k <= bound; ++k) {
    if (acc.is_zero()) return k;
    acc = m * acc;
  }
  return std::nullopt;
}

/* Letters act as the splitting operators; a word acts by composing its
 * letters in reading order. */
template <class S>
GradedMap<S> evaluate_word(const ChainComplex<S>& c, const HodgeData<S>& hd,
                           const Perturbation<S>& p, const Word& w) {
  GradedMap<S> acc = GradedMap<S>::identity(c.space);
  for (char l : w.letters) {
    const GradedMap<S>& op = l == 's' ? hd.s : (l == 't' ? hd.t : p.x);
    acc = acc * op;
  }
  return acc;
}

/* Needs a homogeneous nonzero element: the result is a single graded map
 * whose shift is the element's degree. */
template <class S>
GradedMap<S> evaluate_element(const ChainComplex<S>& c, const HodgeData<S>& hd,
                              const Perturbation<S>& p, const AlgebraElement<S>& e) {
  auto deg = homogeneous_degree(e);
  if (!deg)
    throw EvaluationError(e.terms.empty()
                              ? "cannot evaluate the zero element: its degree is undefined"
                              : "cannot evaluate a non-homogeneous element");
  GradedMap<S> acc = GradedMap<S>::zero(c.space, c.space, *deg);
  for (const auto& [w, coeff] : e.terms) acc = acc + evaluate_word(c, hd, p, w).scaled(coeff);
  return acc;
}

/* A truncated expansion evaluates exactly when the dropped tail acts by
 * zero; we demand that both sx and xs be nilpotent with index at most
 * cap+1, which covers every closed-form constant. */
template <class S>
GradedMap<S> evaluate_series(const ChainComplex<S>& c, const HodgeData<S>& hd,
                             const Perturbation<S>& p, const TruncatedSeries<S>& u) {
  int bound = c.space.total_dim() + 1;
  auto ksx = nilpotency_index(hd.s * p.x, bound);
  auto kxs = nilpotency_index(p.x * hd.s, bound);
  if (!ksx || !kxs)
    throw EvaluationError("sx or xs is not nilpotent: series evaluation is unavailable");
  int k = std::max(*ksx, *kxs);
  if (u.cap < k - 1)
    throw EvaluationError("series truncated at level " + std::to_string(u.cap) +
                          " but the nilpotency index is " + std::to_string(k));

  std::optional<int> deg;
  for (const auto& comp : u.comp) {
    auto d = homogeneous_degree(comp);
    if (!d) {
      if (comp.terms.empty()) continue;
      throw EvaluationError("cannot evaluate a non-homogeneous element");
    }
    if (deg && *deg != *d) throw EvaluationError("cannot evaluate a non-homogeneous element");
    deg = d;
  }
  if (!deg) throw EvaluationError("cannot evaluate the zero element: its degree is undefined");

  GradedMap<S> acc = GradedMap<S>::zero(c.space, c.space, *deg);
  for (const auto& comp : u.comp)
    if (!comp.terms.empty()) acc = acc + evaluate_element(c, hd, p, comp);
  return acc;
}

}  // namespace pertalg
