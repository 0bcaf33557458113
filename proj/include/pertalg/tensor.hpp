#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pertalg/graded.hpp"

namespace pertalg {

// A basis vector of a graded space, identified by degree and position.
// Operations on suspended spaces use the same ids; only the degree
// bookkeeping (sdeg = deg - 1) changes.
struct BasisId {
  int deg = 0;
  int idx = 0;

  auto operator<=>(const BasisId&) const = default;
};

using Tuple = std::vector<BasisId>;

inline int sdeg(const BasisId& b) { return b.deg - 1; }

// Suspended degree of a tuple (sum over entries).
inline int sdeg(const Tuple& t) {
  int d = 0;
  for (const auto& b : t) d += sdeg(b);
  return d;
}

inline std::string label_of(const GradedSpace& sp, const BasisId& b) {
  return sp.basis.at(b.deg).at(static_cast<size_t>(b.idx));
}

inline std::string tuple_str(const GradedSpace& sp, const Tuple& t) {
  std::string out = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) out += ",";
    out += label_of(sp, t[i]);
  }
  out += ")";
  return out;
}

// Sparse element of a graded space.
template <class S>
struct SparseVec {
  std::map<BasisId, S> terms;

  bool is_zero() const { return terms.empty(); }

  void add(const BasisId& b, const S& c) {
    if (c == S(0)) return;
    auto [it, fresh] = terms.emplace(b, c);
    if (!fresh) {
      it->second += c;
      if (it->second == S(0)) terms.erase(it);
    }
  }

  SparseVec& operator+=(const SparseVec& o) {
    for (const auto& [b, c] : o.terms) add(b, c);
    return *this;
  }

  SparseVec scaled(const S& c) const {
    SparseVec r;
    if (c == S(0)) return r;
    for (const auto& [b, v] : terms) r.terms.emplace(b, v * c);
    return r;
  }

  bool operator==(const SparseVec& o) const { return terms == o.terms; }
};

// Sparse element of the tensor coalgebra: a linear combination of basis
// tuples of varying length (length >= 1).
template <class S>
struct TensorVec {
  std::map<Tuple, S> terms;

  bool is_zero() const { return terms.empty(); }

  void add(const Tuple& t, const S& c) {
    if (c == S(0)) return;
    auto [it, fresh] = terms.emplace(t, c);
    if (!fresh) {
      it->second += c;
      if (it->second == S(0)) terms.erase(it);
    }
  }

  TensorVec& operator+=(const TensorVec& o) {
    for (const auto& [t, c] : o.terms) add(t, c);
    return *this;
  }

  TensorVec scaled(const S& c) const {
    TensorVec r;
    if (c == S(0)) return r;
    for (const auto& [t, v] : terms) r.terms.emplace(t, v * c);
    return r;
  }

  // Restriction to tuples of one fixed length.
  TensorVec component(size_t len) const {
    TensorVec r;
    for (const auto& [t, c] : terms)
      if (t.size() == len) r.terms.emplace(t, c);
    return r;
  }

  SparseVec<S> corank_one() const {
    SparseVec<S> r;
    for (const auto& [t, c] : terms)
      if (t.size() == 1) r.terms.emplace(t[0], c);
    return r;
  }

  bool operator==(const TensorVec& o) const { return terms == o.terms; }
};

// A multilinear operation of fixed arity, stored by its values on basis
// tuples. Missing tuples evaluate to zero.
template <class S>
struct MultiOp {
  int arity = 1;
  std::map<Tuple, SparseVec<S>> entries;

  bool is_zero() const { return entries.empty(); }

  void set(const Tuple& in, SparseVec<S> out) {
    if (static_cast<int>(in.size()) != arity)
      throw std::invalid_argument("operation applied to a tuple of the wrong length");
    if (out.is_zero())
      entries.erase(in);
    else
      entries.insert_or_assign(in, std::move(out));
  }

  void add(const Tuple& in, const BasisId& out, const S& c) {
    if (static_cast<int>(in.size()) != arity)
      throw std::invalid_argument("operation applied to a tuple of the wrong length");
    if (c == S(0)) return;
    auto& v = entries[in];
    v.add(out, c);
    if (v.is_zero()) entries.erase(in);
  }

  SparseVec<S> apply(const Tuple& in) const {
    if (static_cast<int>(in.size()) != arity)
      throw std::invalid_argument("operation applied to a tuple of the wrong length");
    auto it = entries.find(in);
    if (it == entries.end()) return {};
    return it->second;
  }

  MultiOp& operator+=(const MultiOp& o) {
    if (o.arity != arity) throw std::invalid_argument("arity mismatch in operation sum");
    for (const auto& [in, v] : o.entries) {
      auto& mine = entries[in];
      mine += v;
      if (mine.is_zero()) entries.erase(in);
    }
    return *this;
  }

  MultiOp scaled(const S& c) const {
    MultiOp r;
    r.arity = arity;
    if (c == S(0)) return r;
    for (const auto& [in, v] : entries) r.entries.emplace(in, v.scaled(c));
    return r;
  }

  bool operator==(const MultiOp& o) const { return arity == o.arity && entries == o.entries; }
};

// Enumerate the basis ids of a graded space in (degree, index) order.
inline std::vector<BasisId> basis_ids(const GradedSpace& sp) {
  std::vector<BasisId> out;
  for (const auto& [n, labels] : sp.basis)
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) out.push_back({n, i});
  return out;
}

// All basis tuples of a given length, in lexicographic order.
inline std::vector<Tuple> basis_tuples(const GradedSpace& sp, int len) {
  std::vector<Tuple> out;
  const auto ids = basis_ids(sp);
  if (len == 0) {
    out.push_back({});
    return out;
  }
  if (ids.empty()) return out;
  Tuple cur(static_cast<size_t>(len), ids.front());
  std::vector<size_t> pos(static_cast<size_t>(len), 0);
  for (;;) {
    out.push_back(cur);
    int k = len - 1;
    while (k >= 0) {
      if (++pos[static_cast<size_t>(k)] < ids.size()) {
        cur[static_cast<size_t>(k)] = ids[pos[static_cast<size_t>(k)]];
        break;
      }
      pos[static_cast<size_t>(k)] = 0;
      cur[static_cast<size_t>(k)] = ids.front();
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

// All ordered ways to write n as a sum of positive parts, in lexicographic
// order: (1,1,...,1) first, (n) last.
inline std::vector<std::vector<int>> compositions(int n) {
  if (n < 0) throw std::invalid_argument("compositions of a negative number");
  if (n == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int first = 1; first <= n; ++first)
    for (auto rest : compositions(n - first)) {
      rest.insert(rest.begin(), first);
      out.push_back(std::move(rest));
    }
  return out;
}

// Tensor product of elements, expanded into weighted tuples. Elements carry
// no crossing signs; signs belong to operator application.
template <class S>
TensorVec<S> expand_product(const std::vector<SparseVec<S>>& parts) {
  std::vector<std::pair<Tuple, S>> acc;
  acc.emplace_back(Tuple{}, S(1));
  for (const auto& part : parts) {
    std::vector<std::pair<Tuple, S>> next;
    for (const auto& [t, c] : acc)
      for (const auto& [b, v] : part.terms) {
        Tuple nt = t;
        nt.push_back(b);
        next.emplace_back(std::move(nt), c * v);
      }
    acc = std::move(next);
    if (acc.empty()) break;
  }
  TensorVec<S> out;
  for (auto& [t, c] : acc) out.add(t, c);
  return out;
}

// Apply f to entries [at, at+f.arity) of a tuple, leaving the rest alone.
// f has odd degree as a map of suspended spaces, so it picks up the sign
// of the suspended degrees it crosses. `parity` is the parity of f.
template <class S>
TensorVec<S> apply_at(const MultiOp<S>& f, int parity, const Tuple& in, size_t at) {
  TensorVec<S> out;
  if (at + static_cast<size_t>(f.arity) > in.size())
    throw std::invalid_argument("operation does not fit inside the tuple");
  Tuple mid(in.begin() + static_cast<long>(at),
            in.begin() + static_cast<long>(at + static_cast<size_t>(f.arity)));
  SparseVec<S> val = f.apply(mid);
  if (val.is_zero()) return out;
  int crossed = 0;
  for (size_t i = 0; i < at; ++i) crossed += sdeg(in[i]);
  const bool neg = (parity & 1) && (crossed & 1);
  for (const auto& [b, c] : val.terms) {
    Tuple t;
    t.reserve(in.size() - static_cast<size_t>(f.arity) + 1);
    t.insert(t.end(), in.begin(), in.begin() + static_cast<long>(at));
    t.push_back(b);
    t.insert(t.end(), in.begin() + static_cast<long>(at + static_cast<size_t>(f.arity)), in.end());
    S coeff = c;
    if (neg) coeff = -coeff;
    out.add(t, coeff);
  }
  return out;
}

}  // namespace pertalg
