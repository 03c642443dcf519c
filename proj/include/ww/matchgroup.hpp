#pragma once

// Perfect matchings of {0,...,2n-1}, coset types of S_2n with respect to the
// hyperoctahedral group H_n, and H_n itself. Positions 2k and 2k+1 form the
// k-th standard pair.

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ww/error.hpp"
#include "ww/rational.hpp"
#include "ww/symcomb.hpp"

namespace ww {

inline constexpr int kMaxMatchingDegree = 8;
inline constexpr int kMaxHyperoctahedralDegree = 5;

/// A perfect matching stored as its canonical sequence
/// (m(1), m(2), ..., m(2n)) with m(2k-1) < m(2k) and m(1) < m(3) < ...,
/// here 0-based. Read as one-line notation it is a coset representative of
/// S_2n / H_n.
class Matching {
 public:
  Matching() = default;

  explicit Matching(std::vector<std::pair<int, int>> pairs) {
    const int size = 2 * static_cast<int>(pairs.size());
    std::vector<char> seen(static_cast<size_t>(size), 0);
    for (auto& [a, b] : pairs) {
      if (a == b || a < 0 || b < 0 || a >= size || b >= size || seen[static_cast<size_t>(a)] ||
          seen[static_cast<size_t>(b)])
        throw InvalidArgument("pairs do not form a perfect matching");
      seen[static_cast<size_t>(a)] = seen[static_cast<size_t>(b)] = 1;
      if (a > b) std::swap(a, b);
    }
    std::sort(pairs.begin(), pairs.end());
    for (auto [a, b] : pairs) {
      seq_.push_back(a);
      seq_.push_back(b);
    }
  }

  /// From 1-based pairs, e.g. {{1,3},{2,7},{4,8},{5,6}}.
  static Matching from_one_based(const std::vector<std::pair<int, int>>& pairs) {
    std::vector<std::pair<int, int>> p(pairs);
    for (auto& [a, b] : p) {
      --a;
      --b;
    }
    return Matching(std::move(p));
  }

  int degree() const noexcept { return static_cast<int>(seq_.size()) / 2; }
  const std::vector<int>& sequence() const noexcept { return seq_; }

  std::pair<int, int> pair(int k) const {
    return {seq_[static_cast<size_t>(2 * k)], seq_[static_cast<size_t>(2 * k + 1)]};
  }

  /// The permutation i -> m(i).
  Permutation as_permutation() const { return Permutation::from_images(seq_); }

  /// Partner of each point.
  std::vector<int> partner() const {
    std::vector<int> p(seq_.size());
    for (size_t k = 0; k + 1 < seq_.size(); k += 2) {
      p[static_cast<size_t>(seq_[k])] = seq_[k + 1];
      p[static_cast<size_t>(seq_[k + 1])] = seq_[k];
    }
    return p;
  }

  bool operator==(const Matching&) const = default;
  auto operator<=>(const Matching&) const = default;

 private:
  std::vector<int> seq_;
};

/// "{{1,2},{3,4}}", 1-based.
inline std::string to_string(const Matching& m) {
  std::string s = "{";
  for (int k = 0; k < m.degree(); ++k) {
    auto [a, b] = m.pair(k);
    if (k) s += ",";
    s += "{" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "}";
  }
  return s + "}";
}

/// All (2n-1)!! perfect matchings of 2n points, lexicographic in the canonical sequence.
inline std::vector<Matching> enumerate_matchings(int n) {
  if (n < 1 || n > kMaxMatchingDegree)
    throw SizeLimitError("enumerate_matchings: n = " + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxMatchingDegree) + "]");
  std::vector<Matching> out;
  out.reserve(static_cast<size_t>(double_factorial_odd(n).convert_to<long>()));
  std::vector<char> used(static_cast<size_t>(2 * n), 0);
  std::vector<std::pair<int, int>> cur;
  auto rec = [&](auto&& self) -> void {
    auto first = std::find(used.begin(), used.end(), 0);
    if (first == used.end()) {
      out.emplace_back(cur);
      return;
    }
    const int a = static_cast<int>(first - used.begin());
    used[static_cast<size_t>(a)] = 1;
    for (int b = a + 1; b < 2 * n; ++b) {
      if (used[static_cast<size_t>(b)]) continue;
      used[static_cast<size_t>(b)] = 1;
      cur.emplace_back(a, b);
      self(self);
      cur.pop_back();
      used[static_cast<size_t>(b)] = 0;
    }
    used[static_cast<size_t>(a)] = 0;
  };
  rec(rec);
  return out;
}

namespace detail {

struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)), size(static_cast<size_t>(n), 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[static_cast<size_t>(a)] < size[static_cast<size_t>(b)]) std::swap(a, b);
    parent[static_cast<size_t>(b)] = a;
    size[static_cast<size_t>(a)] += size[static_cast<size_t>(b)];
  }
  std::vector<int> parent;
  std::vector<int> size;
};

}  // namespace detail

/// Coset type of g in S_2n: half the vertex counts of the connected components
/// of the graph with edges {2k, 2k+1} and {g(2k), g(2k+1)}, sorted.
inline Partition coset_type(const Permutation& g) {
  const int m = g.size();
  if (m % 2 != 0) throw InvalidArgument("coset_type: permutation acts on an odd number of points");
  detail::UnionFind uf(m);
  for (int k = 0; k < m; k += 2) {
    uf.unite(k, k + 1);
    uf.unite(g(k), g(k + 1));
  }
  std::vector<int> halves;
  for (int v = 0; v < m; ++v)
    if (uf.find(v) == v) halves.push_back(uf.size[static_cast<size_t>(v)] / 2);
  return Partition::from_unsorted(std::move(halves));
}

inline Partition coset_type(const Matching& m) { return coset_type(m.as_permutation()); }

/// kappa(g): number of connected components of G(g).
inline int kappa(const Permutation& g) { return coset_type(g).length(); }
inline int kappa(const Matching& m) { return coset_type(m).length(); }

inline bool is_in_hyperoctahedral(const Permutation& g) { return coset_type(g).is_all_ones(); }

/// All 2^n n! elements of H_n: permute the standard pairs, then flip any subset of them.
inline std::vector<Permutation> hyperoctahedral(int n) {
  if (n < 1 || n > kMaxHyperoctahedralDegree)
    throw SizeLimitError("hyperoctahedral: n = " + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxHyperoctahedralDegree) + "]");
  std::vector<Permutation> out;
  std::vector<int> block(static_cast<size_t>(n));
  std::iota(block.begin(), block.end(), 0);
  do {
    for (unsigned flips = 0; flips < (1u << n); ++flips) {
      std::vector<int> img(static_cast<size_t>(2 * n));
      for (int k = 0; k < n; ++k) {
        const int f = static_cast<int>((flips >> k) & 1u);
        img[static_cast<size_t>(2 * k)] = 2 * block[static_cast<size_t>(k)] + f;
        img[static_cast<size_t>(2 * k + 1)] = 2 * block[static_cast<size_t>(k)] + (1 - f);
      }
      out.push_back(Permutation::from_images(std::move(img)));
    }
  } while (std::next_permutation(block.begin(), block.end()));
  return out;
}

/// |H_n| = 2^n n!.
inline Integer hyperoctahedral_order(int n) {
  Integer p = factorial(n);
  for (int i = 0; i < n; ++i) p *= 2;
  return p;
}

/// |H_rho| = (2^n n!)^2 / (2^{l(rho)} z_rho).
inline Integer double_coset_size(const Partition& rho) {
  const Integer h = hyperoctahedral_order(rho.weight());
  Integer den = z_of(rho);
  for (int i = 0; i < rho.length(); ++i) den *= 2;
  return h * h / den;
}

/// A permutation of coset type rho: for each part r >= 2 on its block of r
/// standard pairs, the cyclic shift a_i -> a_{i+1 mod 2r} of the block's
/// points, which chains the r pairs into one component. Parts equal to 1
/// stay fixed, so (1^n) gives the identity.
inline Permutation coset_representative(const Partition& rho) {
  const int n = rho.weight();
  std::vector<int> img(static_cast<size_t>(2 * n));
  std::iota(img.begin(), img.end(), 0);
  int start = 0;
  for (int r : rho.parts()) {
    if (r >= 2) {
      for (int i = 0; i < 2 * r; ++i) img[static_cast<size_t>(start + i)] = start + (i + 1) % (2 * r);
    }
    start += 2 * r;
  }
  return Permutation::from_images(std::move(img));
}

}  // namespace ww
