#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pertalg {

/* Monomial in the letters s, t, x subject to
 *   ss = st = ts = 0,  tt = t.
 * A word is normal when it contains no factor ss, st, ts, tt; the empty word
 * is the unit. Degrees: |s| = -1, |t| = 0, |x| = +1.
 * Words are ordered length first, then lexicographically with s < t < x
 * (plain char order). */
struct Word {
  std::string letters;

  Word() = default;
  explicit Word(std::string l) : letters(std::move(l)) {}

  int degree() const {
    int d = 0;
    for (char c : letters) d += c == 'x' ? 1 : (c == 's' ? -1 : 0);
    return d;
  }

  int x_count() const {
    int n = 0;
    for (char c : letters) n += c == 'x';
    return n;
  }

  bool odd() const { return degree() & 1; }

  std::string str() const { return letters.empty() ? "1" : letters; }

  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size())
      return a.letters.size() <=> b.letters.size();
    return a.letters.compare(b.letters) <=> 0;
  }
  friend bool operator==(const Word& a, const Word& b) = default;
};

inline bool is_letter(char c) { return c == 's' || c == 't' || c == 'x'; }

/* Reduce an arbitrary letter string; nullopt means the word is zero in the
 * algebra. A single scan suffices: rewriting only shortens runs of s,t
 * letters and never creates a new forbidden factor to the left. */
inline std::optional<Word> normal_form(std::string_view w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) {
    if (!is_letter(c))
      throw std::invalid_argument(std::string("invalid letter '") + c + "'");
    if (!out.empty() && out.back() != 'x' && c != 'x') {
      if (out.back() == 't' && c == 't') continue;
      return std::nullopt;
    }
    out.push_back(c);
  }
  return Word(std::move(out));
}

}  // namespace pertalg
