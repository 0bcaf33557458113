#pragma once

#include <string>
#include <vector>

#include "pertalg/algebra.hpp"

namespace pertalg {

/* Truncated series in the localization: component n collects the words with
 * exactly n occurrences of x, kept up to the x-count cap. The series
 * constants alpha = (1+sx)^{-1}, beta = (1+xs)^{-1} and their relatives live
 * here. */
template <class S>
struct TruncatedSeries {
  int cap = 0;
  std::vector<AlgebraElement<S>> comp;  // size cap + 1

  TruncatedSeries() : comp(1) {}
  explicit TruncatedSeries(int c) : cap(c), comp(c + 1) {}

  static TruncatedSeries zero(int cap) { return TruncatedSeries(cap); }
  static TruncatedSeries unit(int cap) {
    TruncatedSeries r(cap);
    r.comp[0] = AlgebraElement<S>::unit();
    return r;
  }
  static TruncatedSeries from_element(const AlgebraElement<S>& e, int cap) {
    TruncatedSeries r(cap);
    for (const auto& [w, c] : e.terms) {
      int n = w.x_count();
      if (n <= cap) r.comp[n].add_term(w, c);
    }
    return r;
  }
  static TruncatedSeries from_letters(std::string_view ls, int cap) {
    return from_element(AlgebraElement<S>::from_letters(ls), cap);
  }

  bool is_zero() const {
    for (const auto& c : comp)
      if (!c.is_zero()) return false;
    return true;
  }

  TruncatedSeries truncated(int newcap) const {
    TruncatedSeries r(newcap);
    for (int n = 0; n <= std::min(newcap, cap); ++n) r.comp[n] = comp[n];
    return r;
  }

  void add_in(const AlgebraElement<S>& e) {
    for (const auto& [w, c] : e.terms) {
      int n = w.x_count();
      if (n <= cap) comp[n].add_term(w, c);
    }
  }

  TruncatedSeries& operator+=(const TruncatedSeries& o) {
    for (int n = 0; n <= std::min(cap, o.cap); ++n) comp[n] += o.comp[n];
    return *this;
  }
  TruncatedSeries& operator-=(const TruncatedSeries& o) {
    for (int n = 0; n <= std::min(cap, o.cap); ++n) comp[n] -= o.comp[n];
    return *this;
  }
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) {
    return a += b;
  }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) {
    return a -= b;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a) {
    TruncatedSeries r(a.cap);
    for (int n = 0; n <= a.cap; ++n) r.comp[n] = -a.comp[n];
    return r;
  }
  friend TruncatedSeries operator*(const S& c, const TruncatedSeries& a) {
    TruncatedSeries r(a.cap);
    for (int n = 0; n <= a.cap; ++n) r.comp[n] = c * a.comp[n];
    return r;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    int cap = std::min(a.cap, b.cap);
    TruncatedSeries r(cap);
    for (int i = 0; i <= cap; ++i)
      for (int j = 0; i + j <= cap; ++j) {
        if (i > a.cap || j > b.cap) continue;
        AlgebraElement<S> p = multiply(a.comp[i], b.comp[j]);
        // Products of normal words keep their total x-count.
        r.comp[i + j] += p;
      }
    return r;
  }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (a.cap != b.cap) return false;
    for (int n = 0; n <= a.cap; ++n)
      if (!(a.comp[n] == b.comp[n])) return false;
    return true;
  }

  std::string str() const {
    std::string out;
    for (int n = 0; n <= cap; ++n) {
      if (comp[n].is_zero()) continue;
      if (!out.empty()) out += " + ";
      out += comp[n].str();
    }
    return out.empty() ? "0" : out;
  }
};

template <class S>
TruncatedSeries<S> differential(const TruncatedSeries<S>& a) {
  TruncatedSeries<S> r(a.cap);
  for (int n = 0; n <= a.cap; ++n) r.add_in(differential(a.comp[n]));
  return r;
}

template <class S>
TruncatedSeries<S> apply_rho(const TruncatedSeries<S>& a) {
  TruncatedSeries<S> r(a.cap);
  for (int n = 0; n <= a.cap; ++n) r.comp[n] = apply_rho(a.comp[n]);
  return r;
}

/* d^x(a) = d(a) + xa - (-1)^{|a|} ax, per homogeneous term. */
template <class S>
AlgebraElement<S> twisted_differential(const AlgebraElement<S>& a) {
  AlgebraElement<S> r = differential(a);
  for (const auto& [w, c] : a.terms) {
    if (auto nf = normal_form("x" + w.letters)) r.add_term(*nf, c);
    if (auto nf = normal_form(w.letters + "x"))
      r.add_term(*nf, w.odd() ? c : -c);
  }
  return r;
}

template <class S>
TruncatedSeries<S> twisted_differential(const TruncatedSeries<S>& a) {
  TruncatedSeries<S> r(a.cap);
  for (int n = 0; n <= a.cap; ++n) r.add_in(twisted_differential(a.comp[n]));
  return r;
}

/* Closed forms of the standard constants. */
template <class S>
TruncatedSeries<S> series_constant(const std::string& name, int cap) {
  using AE = AlgebraElement<S>;
  const S one = FieldTraits<S>::one();
  TruncatedSeries<S> r(cap);
  auto alt_word = [&](int n, const std::string& stem, const std::string& head,
                      const std::string& tail, bool shift_sign) {
    // (-1)^n head stem^n tail, placed at its x-count.
    std::string w = head;
    for (int i = 0; i < n; ++i) w += stem;
    w += tail;
    auto nf = normal_form(w);
    if (!nf) return AE::zero();
    bool neg = (n + (shift_sign ? 1 : 0)) & 1;
    return AE::from_word(*nf, neg ? -one : one);
  };
  if (name == "alpha") {
    for (int n = 0; n <= cap; ++n) r.comp[n] = alt_word(n, "sx", "", "", false);
  } else if (name == "beta") {
    for (int n = 0; n <= cap; ++n) r.comp[n] = alt_word(n, "xs", "", "", false);
  } else if (name == "alpha_inv") {
    r.comp[0] = AE::unit();
    if (cap >= 1) r.comp[1] = AE::from_letters("sx");
  } else if (name == "beta_inv") {
    r.comp[0] = AE::unit();
    if (cap >= 1) r.comp[1] = AE::from_letters("xs");
  } else if (name == "xi") {
    // t x alpha t = sum_n (-1)^n t (xs)^n x t, x-count n + 1.
    for (int n = 1; n <= cap; ++n)
      r.comp[n] = alt_word(n - 1, "xs", "t", "xt", false);
  } else if (name == "k") {
    // 1 + t - alpha t.
    r.comp[0] = AE::unit();
    for (int n = 1; n <= cap; ++n) r.comp[n] = alt_word(n, "sx", "", "t", true);
  } else if (name == "g") {
    TruncatedSeries<S> k = series_constant<S>("k", cap);
    return k * series_constant<S>("beta", cap);
  } else if (name == "g_inv") {
    // beta^{-1} (1 - t + alpha t) = (1 + xs)(1 - t + alpha t).
    TruncatedSeries<S> m = TruncatedSeries<S>::unit(cap);
    m -= TruncatedSeries<S>::from_letters("t", cap);
    m += series_constant<S>("alpha", cap) *
         TruncatedSeries<S>::from_letters("t", cap);
    return series_constant<S>("beta_inv", cap) * m;
  } else {
    throw std::invalid_argument("unknown series constant '" + name + "'");
  }
  return r;
}

struct SeriesInversionError : std::domain_error {
  using std::domain_error::domain_error;
};

/* Invert a series whose x-free part a + b s + c t has a != 0 and a + c != 0;
 * those two conditions characterize the units of the x-free subalgebra. */
template <class S>
TruncatedSeries<S> invert_series(const TruncatedSeries<S>& u) {
  using AE = AlgebraElement<S>;
  const S one = FieldTraits<S>::one();
  S a = FieldTraits<S>::zero(), b = a, c = a;
  for (const auto& [w, co] : u.comp[0].terms) {
    if (w.letters.empty())
      a = co;
    else if (w.letters == "s")
      b = co;
    else
      c = co;
  }
  if (FieldTraits<S>::is_zero(a) || FieldTraits<S>::is_zero(a + c))
    throw SeriesInversionError("series not invertible: x-free part " +
                               u.comp[0].str());
  AE v0;
  v0.add_term(Word{}, one / a);
  v0.add_term(Word{"s"}, -(b / (a * a)));
  v0.add_term(Word{"t"}, -(c / (a * (a + c))));
  TruncatedSeries<S> v(u.cap);
  v.comp[0] = v0;
  for (int n = 1; n <= u.cap; ++n) {
    AE acc;
    for (int k = 1; k <= n; ++k) acc += multiply(u.comp[k], v.comp[n - k]);
    v.comp[n] = -multiply(v0, acc);
  }
  return v;
}

/* Automorphism phi: s -> alpha s, t -> alpha t beta, x -> -x, extended
 * multiplicatively; the result is truncated at the requested cap. */
template <class S>
TruncatedSeries<S> apply_phi(const AlgebraElement<S>& e, int cap) {
  TruncatedSeries<S> alpha = series_constant<S>("alpha", cap);
  TruncatedSeries<S> beta = series_constant<S>("beta", cap);
  TruncatedSeries<S> phi_s = alpha * TruncatedSeries<S>::from_letters("s", cap);
  TruncatedSeries<S> phi_t =
      alpha * TruncatedSeries<S>::from_letters("t", cap) * beta;
  TruncatedSeries<S> phi_x = -TruncatedSeries<S>::from_letters("x", cap);
  TruncatedSeries<S> r(cap);
  for (const auto& [w, c] : e.terms) {
    TruncatedSeries<S> acc = TruncatedSeries<S>::unit(cap);
    for (char l : w.letters)
      acc = acc * (l == 's' ? phi_s : l == 't' ? phi_t : phi_x);
    r += c * acc;
  }
  return r;
}

template <class S>
TruncatedSeries<S> apply_phi(const TruncatedSeries<S>& e, int cap) {
  TruncatedSeries<S> r(cap);
  for (int n = 0; n <= e.cap; ++n) r += apply_phi(e.comp[n], cap);
  return r;
}

/* Gauge action gamma . x = gamma x gamma^{-1} - d(gamma) gamma^{-1}.
 * The element acted on must be homogeneous of degree 1. */
template <class S>
TruncatedSeries<S> gauge_action(const TruncatedSeries<S>& gamma,
                                const TruncatedSeries<S>& x_elt) {
  for (const auto& c : x_elt.comp)
    for (const auto& [w, co] : c.terms) {
      (void)co;
      if (w.degree() != 1)
        throw std::invalid_argument(
            "gauge action requires a degree 1 element, got term " + w.str());
    }
  TruncatedSeries<S> gi = invert_series(gamma);
  return gamma * x_elt * gi - differential(gamma) * gi;
}

/* Tensor-square series, indexed by total x-count. */
template <class S>
struct TensorSeries {
  int cap = 0;
  std::vector<TensorSquareElement<S>> comp;

  explicit TensorSeries(int c = 0) : cap(c), comp(c + 1) {}

  bool is_zero() const {
    for (const auto& c : comp)
      if (!c.is_zero()) return false;
    return true;
  }

  TensorSeries& operator+=(const TensorSeries& o) {
    for (int n = 0; n <= std::min(cap, o.cap); ++n) comp[n] += o.comp[n];
    return *this;
  }
  TensorSeries& operator-=(const TensorSeries& o) {
    for (int n = 0; n <= std::min(cap, o.cap); ++n) comp[n] -= o.comp[n];
    return *this;
  }
  friend TensorSeries operator+(TensorSeries a, const TensorSeries& b) {
    return a += b;
  }
  friend TensorSeries operator-(TensorSeries a, const TensorSeries& b) {
    return a -= b;
  }
  friend bool operator==(const TensorSeries& a, const TensorSeries& b) {
    if (a.cap != b.cap) return false;
    for (int n = 0; n <= a.cap; ++n)
      if (!(a.comp[n] == b.comp[n])) return false;
    return true;
  }
};

/* Coproduct of a series; the coproduct of a word keeps its total x-count. */
template <class S>
TensorSeries<S> coproduct(const TruncatedSeries<S>& a) {
  TensorSeries<S> r(a.cap);
  for (int n = 0; n <= a.cap; ++n) r.comp[n] = coproduct(a.comp[n]);
  return r;
}

/* Outer product of two series as an element of the tensor-square series. */
template <class S>
TensorSeries<S> outer(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
  int cap = std::min(a.cap, b.cap);
  TensorSeries<S> r(cap);
  for (int i = 0; i <= cap; ++i)
    for (int j = 0; i + j <= cap; ++j) r.comp[i + j] += outer(a.comp[i], b.comp[j]);
  return r;
}

}  // namespace pertalg
