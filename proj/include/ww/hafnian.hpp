#pragma once

// alpha-hafnians of symmetric 2n x 2n matrices by three independent routes:
// the defining matching sum, the row/column expansion recurrence, and the
// permutation sums over the cycle functionals P_c and Q_c. Also the
// alpha-permanent together with its embedding as an alpha-hafnian.
//
// All routines are generic in the matrix type: anything with rows(), cols()
// and operator()(i, j), e.g. ww::ExactMatrix or Eigen::MatrixXd.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "ww/error.hpp"
#include "ww/matchgroup.hpp"
#include "ww/matrix.hpp"
#include "ww/symcomb.hpp"

namespace ww {

inline constexpr int kMaxHafnianSize = 16;
inline constexpr int kMaxPermutationSumDegree = 7;

namespace detail {

template <class M>
int hafnian_degree(const M& a, int max_size) {
  if (a.rows() != a.cols() || a.rows() % 2 != 0 || a.rows() == 0)
    throw InvalidArgument("alpha-hafnian needs a nonempty square matrix of even size");
  if (a.rows() > max_size)
    throw SizeLimitError("alpha-hafnian: matrix size " + std::to_string(a.rows()) + " exceeds " +
                         std::to_string(max_size));
  if (!is_exactly_symmetric(a)) throw InvalidArgument("alpha-hafnian needs a symmetric matrix");
  return static_cast<int>(a.rows()) / 2;
}

template <class T>
std::vector<T> powers(const T& base, int count) {
  std::vector<T> p(static_cast<size_t>(count) + 1);
  p[0] = T(1);
  for (int i = 1; i <= count; ++i) p[static_cast<size_t>(i)] = p[static_cast<size_t>(i - 1)] * base;
  return p;
}

template <class T>
struct Mat2 {
  T a00{0}, a01{0}, a10{0}, a11{0};

  Mat2 operator*(const Mat2& o) const {
    return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11, a10 * o.a00 + a11 * o.a10,
            a10 * o.a01 + a11 * o.a11};
  }
  // Right multiplication by J = [[0,1],[1,0]] swaps columns.
  Mat2 times_j() const { return {a01, a00, a11, a10}; }
  T trace() const { return a00 + a11; }
};

/// The 2x2 block A[k, l] (0-based pair indices).
template <class M>
Mat2<scalar_of<M>> block(const M& a, int k, int l) {
  return {a(2 * k, 2 * l), a(2 * k, 2 * l + 1), a(2 * k + 1, 2 * l), a(2 * k + 1, 2 * l + 1)};
}

}  // namespace detail

/// hf_alpha(A) = sum over matchings m of alpha^{kappa(m)} prod_{{p,q} in m} A_pq.
template <class M>
scalar_of<M> hafnian_matching(const M& a, const scalar_of<M>& alpha) {
  using T = scalar_of<M>;
  const int n = detail::hafnian_degree(a, kMaxHafnianSize);
  const auto alpha_pow = detail::powers(alpha, n);
  T total = T(0);
  for (const Matching& m : enumerate_matchings(n)) {
    T term = alpha_pow[static_cast<size_t>(kappa(m))];
    for (int k = 0; k < n; ++k) {
      auto [p, q] = m.pair(k);
      term *= a(p, q);
    }
    total += term;
  }
  return total;
}

/// hf_alpha(A) by expanding along the last row/column:
///   hf(A) = sum_j A_{j,2n} hf(B^(j)) + alpha A_{2n-1,2n} hf(D),
/// where D drops the last two indices and B^(j) is D with its j-th index
/// replaced by index 2n-1. Submatrices are tracked as index sequences into A
/// and memoised for the duration of the call.
template <class M>
scalar_of<M> hafnian_expand(const M& a, const scalar_of<M>& alpha) {
  using T = scalar_of<M>;
  detail::hafnian_degree(a, kMaxHafnianSize);
  std::unordered_map<std::uint64_t, T> memo;

  auto pack = [](const std::vector<int>& seq) {
    std::uint64_t key = static_cast<std::uint64_t>(seq.size() / 2);
    for (int idx : seq) key = (key << 4) | static_cast<std::uint64_t>(idx);
    return key;
  };

  auto rec = [&](auto&& self, const std::vector<int>& seq) -> T {
    const size_t len = seq.size();
    if (len == 2) return alpha * a(seq[0], seq[1]);
    const bool cacheable = len < static_cast<size_t>(kMaxHafnianSize);
    std::uint64_t key = 0;
    if (cacheable) {
      key = pack(seq);
      if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    const int last = seq[len - 1];
    const int second_last = seq[len - 2];
    std::vector<int> sub(seq.begin(), seq.end() - 2);
    T total = alpha * a(second_last, last) * self(self, sub);
    for (size_t j = 0; j + 2 < len; ++j) {
      const T coeff = a(seq[j], last);
      if (coeff == T(0)) continue;
      std::vector<int> bj = sub;
      bj[j] = second_last;
      total += coeff * self(self, bj);
    }
    if (cacheable) memo.emplace(key, total);
    return total;
  };

  std::vector<int> all(static_cast<size_t>(a.rows()));
  std::iota(all.begin(), all.end(), 0);
  return rec(rec, all);
}

/// A cycle on {0,...,n-1} written in the direction of the permutation,
/// rotated so that its largest element comes last: (c_1, ..., c_r) stands
/// for c_r -> c_1 -> c_2 -> ... -> c_r.
inline std::vector<int> canonical_cycle(std::vector<int> c, int n) {
  if (c.empty()) throw InvalidArgument("empty cycle");
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (int x : c) {
    if (x < 0 || x >= n || seen[static_cast<size_t>(x)])
      throw InvalidArgument("invalid cycle: elements must be distinct and within range");
    seen[static_cast<size_t>(x)] = 1;
  }
  auto mx = std::max_element(c.begin(), c.end());
  std::rotate(c.begin(), mx + 1, c.end());
  return c;
}

/// The reversed cycle c^{-1}, in canonical form.
inline std::vector<int> inverse_cycle(const std::vector<int>& canonical) {
  std::vector<int> inv(canonical.rbegin() + 1, canonical.rend());
  inv.push_back(canonical.back());
  return inv;
}

template <class T>
struct CycleFunctionals {
  T p;      ///< P_c(A)
  T q;      ///< Q_c(A)
  T q_inv;  ///< Q_{c^{-1}}(A)
};

namespace detail {

// P_c(A) = tr(A[c_1,c_2] J A[c_2,c_3] J ... A[c_r,c_1] J).
template <class M>
scalar_of<M> cycle_p(const M& a, const std::vector<int>& c) {
  const size_t r = c.size();
  auto prod = block(a, c[0], c[1 % r]).times_j();
  for (size_t k = 1; k < r; ++k) prod = prod * block(a, c[k], c[(k + 1) % r]).times_j();
  return prod.trace();
}

// Q_c(A) = (A[c_r,c_1] J A[c_1,c_2] J ... J A[c_{r-1},c_r])_{odd row, even column}:
// the open chain from 2c_r-1 back to 2c_r through every other pair in order.
template <class M>
scalar_of<M> cycle_q(const M& a, const std::vector<int>& c) {
  const size_t r = c.size();
  if (r == 1) return a(2 * c[0], 2 * c[0] + 1);
  auto prod = block(a, c[r - 1], c[0]);
  for (size_t k = 0; k + 1 < r; ++k) prod = prod.times_j() * block(a, c[k], c[k + 1]);
  return prod.a01;
}

}  // namespace detail

/// P_c, Q_c and Q_{c^{-1}} for a cycle c on the pair indices of A.
template <class M>
CycleFunctionals<scalar_of<M>> cycle_functionals(const M& a, const std::vector<int>& cycle) {
  if (a.rows() != a.cols() || a.rows() % 2 != 0)
    throw InvalidArgument("cycle functionals need a square matrix of even size");
  const auto c = canonical_cycle(cycle, static_cast<int>(a.rows()) / 2);
  return {detail::cycle_p(a, c), detail::cycle_q(a, c), detail::cycle_q(a, inverse_cycle(c))};
}

enum class CycleVariant { P, Q };

/// hf_alpha(A) = sum_{pi in S_n} (alpha/2)^{nu(pi)} P_pi(A)
///             = sum_{pi in S_n} alpha^{nu(pi)} Q_pi(A).
template <class M>
scalar_of<M> hafnian_permsum(const M& a, const scalar_of<M>& alpha, CycleVariant variant) {
  using T = scalar_of<M>;
  const int n = detail::hafnian_degree(a, 2 * kMaxPermutationSumDegree);
  const T weight = variant == CycleVariant::P ? T(alpha / T(2)) : alpha;
  const auto weight_pow = detail::powers(weight, n);
  std::vector<int> images(static_cast<size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  T total = T(0);
  do {
    const auto cycles = Permutation::from_images(images).cycles();
    T term = weight_pow[cycles.size()];
    for (const auto& cyc : cycles) {
      const auto c = canonical_cycle(cyc, n);
      term *= variant == CycleVariant::P ? detail::cycle_p(a, c) : detail::cycle_q(a, c);
      if (term == T(0)) break;
    }
    total += term;
  } while (std::next_permutation(images.begin(), images.end()));
  return total;
}

/// per_alpha(M) = sum_{pi in S_n} alpha^{nu(pi)} prod_i M_{i, pi(i)}.
template <class M>
scalar_of<M> alpha_permanent(const M& m, const scalar_of<M>& alpha) {
  using T = scalar_of<M>;
  if (m.rows() != m.cols()) throw InvalidArgument("alpha-permanent needs a square matrix");
  const int n = static_cast<int>(m.rows());
  if (n > kMaxPermutationSumDegree)
    throw SizeLimitError("alpha-permanent: size " + std::to_string(n) + " exceeds " +
                         std::to_string(kMaxPermutationSumDegree));
  const auto alpha_pow = detail::powers(alpha, n);
  std::vector<int> images(static_cast<size_t>(n));
  std::iota(images.begin(), images.end(), 0);
  T total = T(0);
  do {
    T term = T(1);
    for (int i = 0; i < n && term != T(0); ++i) term *= m(i, images[static_cast<size_t>(i)]);
    if (term != T(0)) total += alpha_pow[static_cast<size_t>(Permutation::from_images(images).cycle_count())] * term;
  } while (std::next_permutation(images.begin(), images.end()));
  return total;
}

/// The 2n x 2n symmetric matrix B with B_{2i-1,2j} = B_{2j,2i-1} = M_ij and
/// zero odd-odd / even-even blocks, so that hf_alpha(B) = per_alpha(M).
template <class T>
DenseMatrix<T> embed_permanent(const DenseMatrix<T>& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("embedding needs a square matrix");
  const int n = m.rows();
  DenseMatrix<T> b(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      b(2 * i, 2 * j + 1) = m(i, j);
      b(2 * j + 1, 2 * i) = m(i, j);
    }
  return b;
}

}  // namespace ww
