#pragma once

#include <functional>

#include "pertalg/report.hpp"
#include "pertalg/series.hpp"

namespace pertalg {

/* First nonzero term of a difference, in canonical order. */
template <class S>
std::optional<Witness> first_term(const TruncatedSeries<S>& diff) {
  for (int n = 0; n <= diff.cap; ++n) {
    if (diff.comp[n].is_zero()) continue;
    const auto& [w, c] = *diff.comp[n].terms.begin();
    return Witness{w.str(), FieldTraits<S>::str(c), n};
  }
  return std::nullopt;
}

template <class S>
std::optional<Witness> first_term(const TensorSeries<S>& diff) {
  for (int n = 0; n <= diff.cap; ++n) {
    if (diff.comp[n].is_zero()) continue;
    const auto& [k, c] = *diff.comp[n].terms.begin();
    return Witness{k.first.str() + "(x)" + k.second.str(),
                   FieldTraits<S>::str(c), n};
  }
  return std::nullopt;
}

/* The identity catalog. Every check compares two truncated series (or
 * tensor-square series) computed independently from the closed forms, the
 * rewriting engine, and the series operations; a report per identity. */
template <class S>
std::vector<IdentityReport> verify_catalog(int cap) {
  using TS = TruncatedSeries<S>;
  using AE = AlgebraElement<S>;
  const S one = FieldTraits<S>::one();

  TS alpha = series_constant<S>("alpha", cap);
  TS beta = series_constant<S>("beta", cap);
  TS alpha_inv = series_constant<S>("alpha_inv", cap);
  TS beta_inv = series_constant<S>("beta_inv", cap);
  TS xi = series_constant<S>("xi", cap);
  TS g = series_constant<S>("g", cap);
  TS g_inv = series_constant<S>("g_inv", cap);
  TS one_s = TS::unit(cap);
  TS s = TS::from_letters("s", cap);
  TS t = TS::from_letters("t", cap);
  TS x = TS::from_letters("x", cap);
  TS atb = alpha * t * beta;
  TS as = alpha * s;

  std::vector<IdentityReport> out;
  auto check = [&](const std::string& id, const auto& lhs, const auto& rhs) {
    auto w = first_term(lhs - rhs);
    out.push_back({id, !w.has_value(), cap, w});
  };

  // Interplay of alpha, beta with the generators.
  check("E1", as, s * beta);
  check("E2", x * alpha, beta * x);
  check("E3", s * alpha, s);
  check("E4", beta * s, s);
  check("E5", t * alpha, t);
  check("E6", beta * t, t);
  check("E7", beta * alpha, alpha + beta - one_s);

  // Differentials of the two inverses.
  check("D1", differential(alpha), (alpha * t - one_s) * x * alpha);
  check("D2", differential(beta), beta * x * (one_s - t * beta));

  // (1+xs)^{-1} = 1 - x (1+sx)^{-1} s: invertibility of 1+sx forces
  // invertibility of 1+xs, with the inverse in closed form.
  check("BERG", beta, one_s - x * alpha * s);

  // phi respects the defining relations and inverts alpha, beta.
  {
    // Six relation checks under one id; first failure wins.
    std::optional<Witness> w;
    auto sub = [&](const TS& lhs, const TS& rhs) {
      if (!w) w = first_term(lhs - rhs);
    };
    sub(as * as, TS::zero(cap));
    sub(as * atb, TS::zero(cap));
    sub(atb * as, TS::zero(cap));
    sub(atb * atb, atb);
    sub(alpha_inv * apply_phi(alpha_inv, cap), one_s);
    sub(apply_phi(beta_inv, cap) * beta_inv, one_s);
    out.push_back({"PHI-REL", !w.has_value(), cap, w});
  }

  // phi is an involution on the generators.
  {
    std::optional<Witness> w;
    auto sub = [&](const TS& lhs, const TS& rhs) {
      if (!w) w = first_term(lhs - rhs);
    };
    sub(apply_phi(as, cap), s);
    sub(apply_phi(atb, cap), t);
    sub(apply_phi(-x, cap), x);
    out.push_back({"PHI-INV", !w.has_value(), cap, w});
  }

  // Comodule shapes: alpha t, t beta, alpha t beta grouplike, alpha s skew.
  {
    std::optional<Witness> w;
    auto sub = [&](const TensorSeries<S>& lhs, const TensorSeries<S>& rhs) {
      if (!w) {
        TensorSeries<S> d = lhs;
        d -= rhs;
        w = first_term(d);
      }
    };
    TS at = alpha * t;
    TS tb = t * beta;
    sub(coproduct(at), outer(at, at));
    sub(coproduct(tb), outer(tb, tb));
    sub(coproduct(atb), outer(atb, atb));
    sub(coproduct(as), outer(as, one_s) + outer(atb, as));
    out.push_back({"PHI-COMOD", !w.has_value(), cap, w});
  }

  // phi intertwines d with the twisted differential, on the generators.
  {
    std::optional<Witness> w;
    auto sub = [&](const TS& lhs, const TS& rhs) {
      if (!w) w = first_term(lhs - rhs);
    };
    AE es = AE::from_letters("s");
    AE et = AE::from_letters("t");
    AE ex = AE::from_letters("x");
    sub(apply_phi(differential(es), cap), twisted_differential(as));
    sub(apply_phi(differential(et), cap), twisted_differential(atb));
    sub(apply_phi(differential(ex), cap), twisted_differential(-x));
    out.push_back({"HPL", !w.has_value(), cap, w});
  }

  // xi is a Maurer-Cartan element and is t-primitive.
  check("XI-MC", differential(xi) + xi * xi, TS::zero(cap));
  {
    TensorSeries<S> d = coproduct(xi);
    d -= outer(xi, t) + outer(t, xi);
    auto w = first_term(d);
    out.push_back({"XI-PRIM", !w.has_value(), cap, w});
  }

  // The gauge element and its closed-form inverse.
  {
    std::optional<Witness> w;
    auto sub = [&](const TS& lhs, const TS& rhs) {
      if (!w) w = first_term(lhs - rhs);
    };
    sub(g * g_inv, one_s);
    sub(g_inv * g, one_s);
    out.push_back({"G1", !w.has_value(), cap, w});
  }
  check("G2", atb * g * atb, atb);
  check("G3", t * g, t * beta);
  check("G4", g_inv * t, alpha * t);

  // Gauge action moves x to xi; the same via rho of g.
  check("GAUGE", gauge_action(g, x), xi);
  check("RHO-G", gauge_action(invert_series(apply_rho(g)), x), xi);

  // Conjugation: d^x(alpha (t a t) beta) = alpha (t (d(a) + [a, xi]) t) beta
  // for sample words a.
  {
    std::optional<Witness> w;
    std::string bad;
    for (const char* sample : {"1", "s", "t", "x", "xsx", "sxt"}) {
      std::string ls = std::string(sample) == "1" ? "" : sample;
      AE a = AE::from_letters(ls);
      TS sa = TS::from_element(a, cap);
      TS lhs = twisted_differential(alpha * (t * sa * t) * beta);
      TS bracket = sa * xi - (Word(ls).odd() ? -one : one) * (xi * sa);
      TS rhs =
          alpha * (t * (TS::from_element(differential(a), cap) + bracket) * t) *
          beta;
      if (!w) {
        w = first_term(lhs - rhs);
        if (w) bad = sample;
      }
    }
    if (w) w->term = "a=" + bad + ": " + w->term;
    out.push_back({"ISO", !w.has_value(), cap, w});
  }

  return out;
}

}  // namespace pertalg
