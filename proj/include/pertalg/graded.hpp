#pragma once

#include <map>
#include <string>
#include <vector>

#include "pertalg/matrix.hpp"

namespace pertalg {

/* Finite dimensional graded vector space: labelled basis per degree.
 * Degrees with no entry are zero. */
struct GradedSpace {
  std::map<int, std::vector<std::string>> basis;

  int dim(int n) const {
    auto it = basis.find(n);
    return it == basis.end() ? 0 : int(it->second.size());
  }

  int total_dim() const {
    int d = 0;
    for (const auto& [n, labels] : basis) d += int(labels.size());
    return d;
  }

  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& [n, labels] : basis)
      if (!labels.empty()) out.push_back(n);
    return out;
  }

  bool operator==(const GradedSpace& o) const { return basis == o.basis; }
};

/* Degree homogeneous linear map between graded spaces.  Blocks are keyed
 * by source degree; the block at n maps the degree n piece of src to the
 * degree n+shift piece of dst.  Missing blocks are zero. */
template <class S>
struct GradedMap {
  GradedSpace src;
  GradedSpace dst;
  int shift = 0;
  std::map<int, Matrix<S>> blocks;

  static GradedMap zero(const GradedSpace& src, const GradedSpace& dst, int shift) {
    GradedMap m;
    m.src = src;
    m.dst = dst;
    m.shift = shift;
    return m;
  }

  static GradedMap identity(const GradedSpace& sp) {
    GradedMap m = zero(sp, sp, 0);
    for (int n : sp.degrees()) m.blocks[n] = Matrix<S>::identity(sp.dim(n));
    return m;
  }

  Matrix<S> block(int n) const {
    auto it = blocks.find(n);
    if (it != blocks.end()) return it->second;
    return Matrix<S>::zero(dst.dim(n + shift), src.dim(n));
  }

  void set_block(int n, Matrix<S> m) {
    if (m.rows != dst.dim(n + shift) || m.cols != src.dim(n))
      throw std::invalid_argument("graded map block has the wrong shape");
    if (m.is_zero())
      blocks.erase(n);
    else
      blocks[n] = std::move(m);
  }

  /* this after inner. */
  GradedMap compose(const GradedMap& inner) const {
    if (!(inner.dst == src)) throw std::invalid_argument("graded map composition mismatch");
    GradedMap r = zero(inner.src, dst, shift + inner.shift);
    for (int n : inner.src.degrees()) {
      if (r.dst.dim(n + r.shift) == 0) continue;
      r.set_block(n, block(n + inner.shift) * inner.block(n));
    }
    return r;
  }

  GradedMap operator+(const GradedMap& o) const {
    if (!(src == o.src) || !(dst == o.dst) || shift != o.shift)
      throw std::invalid_argument("graded map addition mismatch");
    GradedMap r = zero(src, dst, shift);
    for (int n : src.degrees()) {
      if (dst.dim(n + shift) == 0) continue;
      r.set_block(n, block(n) + o.block(n));
    }
    return r;
  }

  GradedMap operator-(const GradedMap& o) const { return *this + o.scaled(S(-FieldTraits<S>::one())); }

  GradedMap scaled(const S& c) const {
    GradedMap r = zero(src, dst, shift);
    for (const auto& [n, m] : blocks) r.set_block(n, m.scaled(c));
    return r;
  }

  bool is_zero() const {
    for (const auto& [n, m] : blocks)
      if (!m.is_zero()) return false;
    return true;
  }

  bool operator==(const GradedMap& o) const {
    if (!(src == o.src) || !(dst == o.dst) || shift != o.shift) return false;
    for (int n : src.degrees())
      if (!(block(n) == o.block(n))) return false;
    return true;
  }
};

template <class S>
GradedMap<S> operator*(const GradedMap<S>& f, const GradedMap<S>& g) {
  return f.compose(g);
}

}  // namespace pertalg
