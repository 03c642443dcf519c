#pragma once

// Partitions, permutations, symmetric group characters and the content
// polynomial C_lambda(z).

#include <algorithm>
#include <compare>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "ww/error.hpp"
#include "ww/rational.hpp"

namespace ww {

/// Weakly decreasing sequence of positive integers. The empty partition is
/// the unique partition of 0.
class Partition {
 public:
  Partition() = default;

  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 1) throw InvalidArgument("partition parts must be positive");
      if (i > 0 && parts_[i] > parts_[i - 1])
        throw InvalidArgument("partition parts must be weakly decreasing");
    }
  }

  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

  /// Sorts arbitrary positive parts into a partition.
  static Partition from_unsorted(std::vector<int> parts) {
    std::sort(parts.begin(), parts.end(), std::greater<>());
    return Partition(std::move(parts));
  }

  /// (part^count), e.g. repeated(1, 3) = (1,1,1).
  static Partition repeated(int part, int count) {
    return Partition(std::vector<int>(static_cast<size_t>(count), part));
  }

  const std::vector<int>& parts() const noexcept { return parts_; }
  int operator[](size_t i) const { return parts_[i]; }
  int length() const noexcept { return static_cast<int>(parts_.size()); }
  int weight() const noexcept { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  bool empty() const noexcept { return parts_.empty(); }

  int multiplicity(int r) const {
    return static_cast<int>(std::count(parts_.begin(), parts_.end(), r));
  }

  /// 2 lambda = (2 lambda_1, 2 lambda_2, ...).
  Partition doubled() const {
    std::vector<int> p = parts_;
    for (int& x : p) x *= 2;
    return Partition(std::move(p));
  }

  Partition conjugate() const {
    std::vector<int> c;
    if (!parts_.empty()) {
      c.assign(static_cast<size_t>(parts_.front()), 0);
      for (int row : parts_)
        for (int j = 0; j < row; ++j) ++c[static_cast<size_t>(j)];
    }
    return Partition(std::move(c));
  }

  bool is_all_ones() const {
    return std::all_of(parts_.begin(), parts_.end(), [](int x) { return x == 1; });
  }

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

/// "(2,1)"; the empty partition prints as "()".
inline std::string to_string(const Partition& p) {
  std::string s = "(";
  for (size_t i = 0; i < p.parts().size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

/// All partitions of n in reverse-lexicographic order: (n), (n-1,1), ..., (1^n).
inline std::vector<Partition> partitions_of(int n) {
  if (n < 0) throw InvalidArgument("partitions_of: n must be nonnegative");
  std::vector<Partition> out;
  std::vector<int> cur;
  // Largest-first recursion yields reverse-lex order directly.
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      cur.push_back(part);
      self(self, remaining - part, part);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

/// partitions_of(n), computed once per n and shared.
inline const std::vector<Partition>& partition_list(int n) {
  static std::shared_mutex mutex;
  static std::map<int, std::vector<Partition>> lists;
  {
    std::shared_lock lock(mutex);
    if (auto it = lists.find(n); it != lists.end()) return it->second;
  }
  auto parts = partitions_of(n);
  std::unique_lock lock(mutex);
  return lists.try_emplace(n, std::move(parts)).first->second;
}

/// Position of rho inside partitions_of(|rho|).
inline size_t partition_index(const Partition& rho) {
  const auto& all = partition_list(rho.weight());
  auto it = std::find(all.begin(), all.end(), rho);
  return static_cast<size_t>(it - all.begin());
}

/// Bijection of {0,...,m-1}. One-line notation at the API boundary is 1-based
/// to line up with the usual mathematical notation.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int m) {
    std::vector<int> img(static_cast<size_t>(m));
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img), Unchecked{});
  }

  /// images[i] = pi(i), 0-based.
  static Permutation from_images(std::vector<int> images) {
    std::vector<char> seen(images.size(), 0);
    for (int x : images) {
      if (x < 0 || x >= static_cast<int>(images.size()) || seen[static_cast<size_t>(x)])
        throw InvalidArgument("not a permutation");
      seen[static_cast<size_t>(x)] = 1;
    }
    return Permutation(std::move(images), Unchecked{});
  }

  /// One-line form (pi(1), ..., pi(m)), 1-based.
  static Permutation from_one_line(const std::vector<int>& one_based) {
    std::vector<int> img(one_based);
    for (int& x : img) --x;
    return from_images(std::move(img));
  }

  int size() const noexcept { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<size_t>(i)]; }
  const std::vector<int>& images() const noexcept { return images_; }

  std::vector<int> one_line() const {
    std::vector<int> v(images_);
    for (int& x : v) ++x;
    return v;
  }

  /// (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw InvalidArgument("composing permutations of different degree");
    std::vector<int> img(b.images_.size());
    for (size_t i = 0; i < img.size(); ++i) img[i] = a.images_[static_cast<size_t>(b.images_[i])];
    return Permutation(std::move(img), Unchecked{});
  }

  Permutation inverse() const {
    std::vector<int> img(images_.size());
    for (size_t i = 0; i < img.size(); ++i) img[static_cast<size_t>(images_[i])] = static_cast<int>(i);
    return Permutation(std::move(img), Unchecked{});
  }

  /// Cycles, each listed (c, pi(c), pi(pi(c)), ...) from its smallest element;
  /// cycles ordered by smallest element. Fixed points are 1-cycles.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(images_.size(), 0);
    for (size_t s = 0; s < images_.size(); ++s) {
      if (seen[s]) continue;
      std::vector<int> c;
      for (int x = static_cast<int>(s); !seen[static_cast<size_t>(x)]; x = images_[static_cast<size_t>(x)]) {
        seen[static_cast<size_t>(x)] = 1;
        c.push_back(x);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  /// nu(pi): number of cycles including fixed points.
  int cycle_count() const { return static_cast<int>(cycles().size()); }

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<int> images, Unchecked) : images_(std::move(images)) {}

  std::vector<int> images_;
};

inline Partition cycle_type(const Permutation& pi) {
  std::vector<int> lens;
  for (const auto& c : pi.cycles()) lens.push_back(static_cast<int>(c.size()));
  return Partition::from_unsorted(std::move(lens));
}

/// z_rho = prod_r r^{m_r} m_r!; n!/z_rho is the size of the class of type rho.
inline Integer z_of(const Partition& rho) {
  Integer z = 1;
  for (int r = 1; r <= (rho.empty() ? 0 : rho[0]); ++r) {
    int m = rho.multiplicity(r);
    for (int k = 0; k < m; ++k) z *= r;
    z *= factorial(m);
  }
  return z;
}

/// Number of standard Young tableaux of shape lambda (hook length formula).
inline Integer dim(const Partition& lambda) {
  Partition conj = lambda.conjugate();
  Integer hooks = 1;
  for (int i = 0; i < lambda.length(); ++i)
    for (int j = 0; j < lambda[static_cast<size_t>(i)]; ++j)
      hooks *= (lambda[static_cast<size_t>(i)] - j - 1) + (conj[static_cast<size_t>(j)] - i - 1) + 1;
  return factorial(lambda.weight()) / hooks;
}

/// f^{2 lambda}.
inline Integer dim_even(const Partition& lambda) { return dim(lambda.doubled()); }

namespace detail {

// Murnaghan-Nakayama on beta-sets. A rim hook of length r corresponds to
// sliding one bead from position b to b - r; the sign is (-1)^(beads passed).
class CharacterCache {
 public:
  Integer value(const std::vector<int>& shape, const std::vector<int>& classes) {
    if (classes.empty()) return shape.empty() ? Integer(1) : Integer(0);
    Key key{shape, classes};
    {
      std::shared_lock lock(mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    Integer result = compute(shape, classes);
    std::unique_lock lock(mutex_);
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  using Key = std::pair<std::vector<int>, std::vector<int>>;

  Integer compute(const std::vector<int>& shape, const std::vector<int>& classes) {
    const int r = classes.front();
    const std::vector<int> rest(classes.begin() + 1, classes.end());
    const int len = static_cast<int>(shape.size());
    std::vector<int> beta(shape.size());
    for (int i = 0; i < len; ++i) beta[static_cast<size_t>(i)] = shape[static_cast<size_t>(i)] + (len - 1 - i);

    Integer total = 0;
    for (int i = 0; i < len; ++i) {
      const int b = beta[static_cast<size_t>(i)];
      const int target = b - r;
      if (target < 0) continue;
      if (std::find(beta.begin(), beta.end(), target) != beta.end()) continue;
      int passed = 0;
      for (int x : beta)
        if (x > target && x < b) ++passed;
      std::vector<int> nb = beta;
      nb[static_cast<size_t>(i)] = target;
      std::sort(nb.begin(), nb.end(), std::greater<>());
      std::vector<int> next;
      for (int k = 0; k < len; ++k) {
        int part = nb[static_cast<size_t>(k)] - (len - 1 - k);
        if (part > 0) next.push_back(part);
      }
      Integer v = value(next, rest);
      if (passed % 2) total -= v;
      else total += v;
    }
    return total;
  }

  std::shared_mutex mutex_;
  std::map<Key, Integer> memo_;
};

inline CharacterCache& character_cache() {
  static CharacterCache cache;
  return cache;
}

}  // namespace detail

/// chi^lambda evaluated on the class of cycle type rho.
inline Integer character(const Partition& lambda, const Partition& rho) {
  if (lambda.weight() != rho.weight())
    throw InvalidArgument("character: |lambda| = " + std::to_string(lambda.weight()) +
                          " but |rho| = " + std::to_string(rho.weight()));
  return detail::character_cache().value(lambda.parts(), rho.parts());
}

/// C_lambda(z) = prod over boxes (i,j) of (z + 2j - i - 1), 1-based box coordinates.
template <class T>
T c_poly(const Partition& lambda, const T& z) {
  T out = T(1);
  for (int i = 1; i <= lambda.length(); ++i)
    for (int j = 1; j <= lambda[static_cast<size_t>(i - 1)]; ++j) out *= z + T(2 * j - i - 1);
  return out;
}

}  // namespace ww
