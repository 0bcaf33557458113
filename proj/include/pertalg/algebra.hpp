#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "pertalg/scalar.hpp"
#include "pertalg/word.hpp"

namespace pertalg {

/* Finite linear combination of normal words. Terms are kept in canonical
 * order (length-lex, s < t < x) with no explicit zero coefficients. */
template <class S>
struct AlgebraElement {
  std::map<Word, S> terms;

  AlgebraElement() = default;

  static AlgebraElement zero() { return {}; }
  static AlgebraElement unit() { return from_word(Word{}); }
  static AlgebraElement from_word(const Word& w, S c = FieldTraits<S>::one()) {
    AlgebraElement e;
    e.add_term(w, c);
    return e;
  }
  static AlgebraElement from_letters(std::string_view ls,
                                     S c = FieldTraits<S>::one()) {
    auto nf = normal_form(ls);
    if (!nf) return {};
    return from_word(*nf, c);
  }

  bool is_zero() const { return terms.empty(); }

  AlgebraElement& add_term(const Word& w, const S& c) {
    if (FieldTraits<S>::is_zero(c)) return *this;
    auto [it, inserted] = terms.emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (FieldTraits<S>::is_zero(it->second)) terms.erase(it);
    }
    return *this;
  }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    for (const auto& [w, c] : o.terms) add_term(w, c);
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    for (const auto& [w, c] : o.terms) add_term(w, -c);
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
    return a += b;
  }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
    return a -= b;
  }
  friend AlgebraElement operator-(const AlgebraElement& a) {
    AlgebraElement r;
    for (const auto& [w, c] : a.terms) r.terms.emplace(w, -c);
    return r;
  }
  friend AlgebraElement operator*(const S& c, const AlgebraElement& a) {
    AlgebraElement r;
    if (FieldTraits<S>::is_zero(c)) return r;
    for (const auto& [w, co] : a.terms) r.add_term(w, c * co);
    return r;
  }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.terms == b.terms;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms) {
      std::string cs = FieldTraits<S>::str(c);
      if (!first) os << " + ";
      os << cs << "*" << w.str();
      first = false;
    }
    return os.str();
  }
};

template <class S>
AlgebraElement<S> multiply(const AlgebraElement<S>& a,
                           const AlgebraElement<S>& b) {
  AlgebraElement<S> r;
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms)
      if (auto nf = normal_form(wa.letters + wb.letters))
        r.add_term(*nf, ca * cb);
  return r;
}

template <class S>
AlgebraElement<S> operator*(const AlgebraElement<S>& a,
                            const AlgebraElement<S>& b) {
  return multiply(a, b);
}

/* Degree +1 differential: d(s) = 1 - t, d(t) = 0, d(x) = -x^2, extended as a
 * derivation with the sign of the degree of the prefix. */
template <class S>
AlgebraElement<S> differential(const AlgebraElement<S>& a) {
  AlgebraElement<S> r;
  for (const auto& [w, c] : a.terms) {
    int prefix_deg = 0;
    for (size_t i = 0; i < w.letters.size(); ++i) {
      char l = w.letters[i];
      S sign = (prefix_deg & 1) ? -c : c;
      std::string pre = w.letters.substr(0, i);
      std::string post = w.letters.substr(i + 1);
      if (l == 's') {
        if (auto nf = normal_form(pre + post)) r.add_term(*nf, sign);
        if (auto nf = normal_form(pre + "t" + post)) r.add_term(*nf, -sign);
        prefix_deg -= 1;
      } else if (l == 'x') {
        if (auto nf = normal_form(pre + "xx" + post)) r.add_term(*nf, -sign);
        prefix_deg += 1;
      }
      // d(t) = 0 contributes nothing.
    }
  }
  return r;
}

/* Counit: 1 on the words 1 and t, 0 on every word containing s or x. */
template <class S>
S counit(const AlgebraElement<S>& a) {
  S r = FieldTraits<S>::zero();
  for (const auto& [w, c] : a.terms)
    if (w.letters.empty() || w.letters == "t") r += c;
  return r;
}

/* Anti-automorphism fixing s and t, sending x to -x. On a word the full
 * reversal carries the Koszul sign (-1)^{sum of degree products}, which only
 * depends on the number of odd letters. */
template <class S>
AlgebraElement<S> apply_rho(const AlgebraElement<S>& a) {
  AlgebraElement<S> r;
  for (const auto& [w, c] : a.terms) {
    int odd = 0;
    for (char l : w.letters) odd += (l != 't');
    int exp = (odd * (odd - 1) / 2 + w.x_count()) & 1;
    std::string rev(w.letters.rbegin(), w.letters.rend());
    if (auto nf = normal_form(rev)) r.add_term(*nf, exp ? -c : c);
  }
  return r;
}

/* Homogeneity helper: degree of a nonzero homogeneous element. */
template <class S>
std::optional<int> homogeneous_degree(const AlgebraElement<S>& a) {
  std::optional<int> deg;
  for (const auto& [w, c] : a.terms) {
    (void)c;
    if (!deg)
      deg = w.degree();
    else if (*deg != w.degree())
      return std::nullopt;
  }
  return deg;
}

/* Element of the tensor square, with the product
 * (a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd. */
template <class S>
struct TensorSquareElement {
  std::map<std::pair<Word, Word>, S> terms;

  static TensorSquareElement unit() {
    TensorSquareElement e;
    e.terms.emplace(std::make_pair(Word{}, Word{}), FieldTraits<S>::one());
    return e;
  }

  bool is_zero() const { return terms.empty(); }

  TensorSquareElement& add_term(const Word& l, const Word& r, const S& c) {
    if (FieldTraits<S>::is_zero(c)) return *this;
    auto key = std::make_pair(l, r);
    auto [it, inserted] = terms.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (FieldTraits<S>::is_zero(it->second)) terms.erase(it);
    }
    return *this;
  }

  TensorSquareElement& operator+=(const TensorSquareElement& o) {
    for (const auto& [k, c] : o.terms) add_term(k.first, k.second, c);
    return *this;
  }
  TensorSquareElement& operator-=(const TensorSquareElement& o) {
    for (const auto& [k, c] : o.terms) add_term(k.first, k.second, -c);
    return *this;
  }
  friend TensorSquareElement operator+(TensorSquareElement a,
                                       const TensorSquareElement& b) {
    return a += b;
  }
  friend TensorSquareElement operator-(TensorSquareElement a,
                                       const TensorSquareElement& b) {
    return a -= b;
  }
  friend bool operator==(const TensorSquareElement& a,
                         const TensorSquareElement& b) {
    return a.terms == b.terms;
  }

  std::string str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms) {
      if (!first) os << " + ";
      os << FieldTraits<S>::str(c) << "*" << k.first.str() << "(x)"
         << k.second.str();
      first = false;
    }
    return os.str();
  }
};

template <class S>
TensorSquareElement<S> multiply(const TensorSquareElement<S>& a,
                                const TensorSquareElement<S>& b) {
  TensorSquareElement<S> r;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      auto l = normal_form(ka.first.letters + kb.first.letters);
      if (!l) continue;
      auto rt = normal_form(ka.second.letters + kb.second.letters);
      if (!rt) continue;
      int sign = (ka.second.degree() * kb.first.degree()) & 1;
      S c = ca * cb;
      if (sign) c = -c;
      r.add_term(*l, *rt, c);
    }
  return r;
}

template <class S>
TensorSquareElement<S> operator*(const TensorSquareElement<S>& a,
                                 const TensorSquareElement<S>& b) {
  return multiply(a, b);
}

template <class S>
TensorSquareElement<S> outer(const AlgebraElement<S>& a,
                             const AlgebraElement<S>& b) {
  TensorSquareElement<S> r;
  for (const auto& [wa, ca] : a.terms)
    for (const auto& [wb, cb] : b.terms) r.add_term(wa, wb, ca * cb);
  return r;
}

/* Coproduct: Delta(s) = s (x) 1 + t (x) s, Delta(t) = t (x) t,
 * Delta(x) = x (x) 1 + 1 (x) x, extended multiplicatively. */
template <class S>
TensorSquareElement<S> coproduct(const AlgebraElement<S>& a) {
  TensorSquareElement<S> r;
  const S one = FieldTraits<S>::one();
  for (const auto& [w, c] : a.terms) {
    TensorSquareElement<S> acc = TensorSquareElement<S>::unit();
    for (char l : w.letters) {
      TensorSquareElement<S> dl;
      if (l == 's') {
        dl.add_term(Word{"s"}, Word{}, one);
        dl.add_term(Word{"t"}, Word{"s"}, one);
      } else if (l == 't') {
        dl.add_term(Word{"t"}, Word{"t"}, one);
      } else {
        dl.add_term(Word{"x"}, Word{}, one);
        dl.add_term(Word{}, Word{"x"}, one);
      }
      acc = multiply(acc, dl);
    }
    for (const auto& [k, cc] : acc.terms) r.add_term(k.first, k.second, c * cc);
  }
  return r;
}

/* Differential on the tensor square: d (x) 1 + 1 (x) d with the Koszul sign
 * on the left factor. Used to state that the coproduct is a chain map. */
template <class S>
TensorSquareElement<S> tensor_differential(const TensorSquareElement<S>& a) {
  TensorSquareElement<S> r;
  for (const auto& [k, c] : a.terms) {
    AlgebraElement<S> dl = differential(AlgebraElement<S>::from_word(k.first));
    for (const auto& [w, dc] : dl.terms) r.add_term(w, k.second, c * dc);
    AlgebraElement<S> dr = differential(AlgebraElement<S>::from_word(k.second));
    bool neg = k.first.odd();
    for (const auto& [w, dc] : dr.terms) {
      S p = c * dc;
      if (neg) p = -p;
      r.add_term(k.first, w, p);
    }
  }
  return r;
}

}  // namespace pertalg
