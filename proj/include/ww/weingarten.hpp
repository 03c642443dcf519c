#pragma once

// Zonal spherical functions of the Gelfand pair (S_2n, H_n), the orthogonal
// Weingarten function Wg^O and its deformation ~Wg, convolution of
// H_n-biinvariant functions, and zonal polynomials evaluated at power sums.

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ww/error.hpp"
#include "ww/matchgroup.hpp"
#include "ww/parallel.hpp"
#include "ww/rational.hpp"
#include "ww/symcomb.hpp"

namespace ww {

inline constexpr int kMaxZonalDegree = 5;
inline constexpr int kMaxFullConvolutionDegree = 3;

/// An H_n-biinvariant function on S_2n, stored by its value on each double
/// coset H_rho. values[i] belongs to partition_list(n)[i].
class BiinvariantFn {
 public:
  BiinvariantFn() = default;

  BiinvariantFn(int n, std::vector<Rational> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != partition_list(n).size())
      throw InvalidArgument("biinvariant function needs one value per partition of " + std::to_string(n));
  }

  template <class F>
  static BiinvariantFn from_coset_types(int n, F&& f) {
    std::vector<Rational> v;
    for (const Partition& rho : partition_list(n)) v.push_back(Rational(f(rho)));
    return BiinvariantFn(n, std::move(v));
  }

  int degree() const noexcept { return n_; }
  const std::vector<Rational>& values() const noexcept { return values_; }

  const Rational& at(const Partition& rho) const {
    if (rho.weight() != n_) throw InvalidArgument("coset type " + to_string(rho) + " has wrong weight");
    return values_[partition_index(rho)];
  }

  /// Value at an arbitrary g in S_2n.
  const Rational& operator()(const Permutation& g) const { return at(coset_type(g)); }

  bool operator==(const BiinvariantFn&) const = default;

 private:
  int n_ = 0;
  std::vector<Rational> values_;
};

inline BiinvariantFn operator*(const Rational& c, const BiinvariantFn& f) {
  std::vector<Rational> v = f.values();
  for (auto& x : v) x *= c;
  return BiinvariantFn(f.degree(), std::move(v));
}

inline BiinvariantFn operator+(const BiinvariantFn& a, const BiinvariantFn& b) {
  if (a.degree() != b.degree()) throw InvalidArgument("adding biinvariant functions of different degree");
  std::vector<Rational> v = a.values();
  for (size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
  return BiinvariantFn(a.degree(), std::move(v));
}

namespace detail {

inline void check_zonal_degree(int n) {
  if (n < 1 || n > kMaxZonalDegree)
    throw SizeLimitError("degree n = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxZonalDegree) +
                         "]");
}

/// omega[lambda][rho] for every pair of partitions of n.
struct ZonalTable {
  int n = 0;
  std::vector<std::vector<Rational>> omega;
};

/// omega^lambda(g) by the defining H_n-average of chi^{2 lambda}(g zeta):
/// tally the cycle types of g zeta once, then weight by character values.
inline std::vector<Rational> zonal_row_at(const Permutation& g, const std::vector<Permutation>& group) {
  const int n = g.size() / 2;
  std::map<Partition, long> tally;
  for (const Permutation& zeta : group) ++tally[cycle_type(g * zeta)];
  const Rational order(static_cast<long>(group.size()));
  std::vector<Rational> out;
  for (const Partition& lambda : partition_list(n)) {
    const Partition shape = lambda.doubled();
    Integer sum = 0;
    for (const auto& [type, count] : tally) sum += character(shape, type) * count;
    out.push_back(Rational(sum) / order);
  }
  return out;
}

inline std::shared_ptr<const ZonalTable> build_zonal_table(int n, unsigned threads) {
  const auto& parts = partition_list(n);
  const auto group = hyperoctahedral(n);
  std::vector<std::vector<Rational>> by_rho(parts.size());
  parallel_for(parts.size(), threads,
               [&](size_t r) { by_rho[r] = zonal_row_at(coset_representative(parts[r]), group); });
  auto table = std::make_shared<ZonalTable>();
  table->n = n;
  table->omega.assign(parts.size(), std::vector<Rational>(parts.size()));
  for (size_t r = 0; r < parts.size(); ++r)
    for (size_t l = 0; l < parts.size(); ++l) table->omega[l][r] = by_rho[r][l];
  return table;
}

// Compute-once, publish-immutable cache of zonal tables keyed by n.
inline std::shared_ptr<const ZonalTable> zonal_table(int n, unsigned threads = 0) {
  check_zonal_degree(n);
  static std::shared_mutex mutex;
  static std::map<int, std::shared_ptr<const ZonalTable>> tables;
  {
    std::shared_lock lock(mutex);
    if (auto it = tables.find(n); it != tables.end()) return it->second;
  }
  auto built = build_zonal_table(n, threads);
  std::unique_lock lock(mutex);
  return tables.try_emplace(n, std::move(built)).first->second;
}

inline void check_same_weight(const Partition& a, const Partition& b) {
  if (a.weight() != b.weight())
    throw InvalidArgument("weight mismatch: " + to_string(a) + " vs " + to_string(b));
}

}  // namespace detail

/// omega^lambda_rho: the zonal spherical function omega^lambda on the double coset H_rho.
inline Rational zonal_spherical(const Partition& lambda, const Partition& rho) {
  detail::check_same_weight(lambda, rho);
  const auto table = detail::zonal_table(lambda.weight());
  return table->omega[partition_index(lambda)][partition_index(rho)];
}

/// omega^lambda(g) from the defining sum at an arbitrary element g of S_2n,
/// without going through the cached table.
inline Rational zonal_spherical_at(const Partition& lambda, const Permutation& g) {
  if (g.size() != 2 * lambda.weight()) throw InvalidArgument("permutation degree must be 2|lambda|");
  detail::check_zonal_degree(lambda.weight());
  return detail::zonal_row_at(g, hyperoctahedral(lambda.weight()))[partition_index(lambda)];
}

/// omega^lambda as a biinvariant function.
inline BiinvariantFn zonal_function(const Partition& lambda) {
  const auto table = detail::zonal_table(lambda.weight());
  return BiinvariantFn(lambda.weight(), table->omega[partition_index(lambda)]);
}

/// Throws PoleError when C_lambda(z) = 0 for some lambda of weight n.
inline void check_no_pole(int n, const Rational& z, const std::string& what) {
  for (const Partition& lambda : partition_list(n))
    if (c_poly(lambda, z) == 0)
      throw PoleError(lambda.parts(), what + ": C_" + to_string(lambda) + "(" + to_string(z) + ") = 0");
}

/// Wg^O(rho; z) for every rho of weight n, aligned with partition_list(n).
///   Wg^O(g; z) = (2n-1)!!^{-1} sum_lambda f^{2 lambda} / C_lambda(z) omega^lambda(g)
inline std::vector<Rational> weingarten_values(int n, const Rational& z) {
  detail::check_zonal_degree(n);
  check_no_pole(n, z, "Weingarten function pole at z = " + to_string(z));
  const auto table = detail::zonal_table(n);
  const auto& parts = partition_list(n);
  std::vector<Rational> weights;
  for (const Partition& lambda : parts) weights.push_back(Rational(dim_even(lambda)) / c_poly(lambda, z));
  const Rational norm = Rational(1) / Rational(double_factorial_odd(n));
  std::vector<Rational> out(parts.size(), Rational(0));
  for (size_t r = 0; r < parts.size(); ++r) {
    for (size_t l = 0; l < parts.size(); ++l) out[r] += weights[l] * table->omega[l][r];
    out[r] *= norm;
  }
  return out;
}

inline Rational weingarten(const Partition& rho, const Rational& z) {
  return weingarten_values(rho.weight(), z)[partition_index(rho)];
}

/// Wg^O(rho; N) with the sum restricted to l(lambda) <= N. Defined for every
/// positive integer N and equal to weingarten(rho, N) once N >= |rho|.
inline std::vector<Rational> weingarten_truncated_values(int n, int big_n) {
  detail::check_zonal_degree(n);
  if (big_n < 1) throw InvalidArgument("truncated Weingarten function needs N >= 1");
  const auto table = detail::zonal_table(n);
  const auto& parts = partition_list(n);
  const Rational z(big_n);
  std::vector<Rational> out(parts.size(), Rational(0));
  for (size_t l = 0; l < parts.size(); ++l) {
    if (parts[l].length() > big_n) continue;
    const Rational w = Rational(dim_even(parts[l])) / c_poly(parts[l], z);
    for (size_t r = 0; r < parts.size(); ++r) out[r] += w * table->omega[l][r];
  }
  const Rational norm = Rational(1) / Rational(double_factorial_odd(n));
  for (auto& x : out) x *= norm;
  return out;
}

inline Rational weingarten_truncated(const Partition& rho, int big_n) {
  return weingarten_truncated_values(rho.weight(), big_n)[partition_index(rho)];
}

/// ~Wg(rho; gamma) = (-1)^n 2^n Wg^O(rho; -2 gamma), all rho of weight n.
inline std::vector<Rational> tilde_weingarten_values(int n, const Rational& gamma) {
  detail::check_zonal_degree(n);
  const Rational z = -2 * gamma;
  check_no_pole(n, z, "~Wg pole at gamma = " + to_string(gamma));
  auto out = weingarten_values(n, z);
  Rational scale = pow(Rational(-2), n);
  for (auto& x : out) x *= scale;
  return out;
}

inline Rational tilde_weingarten(const Partition& rho, const Rational& gamma) {
  return tilde_weingarten_values(rho.weight(), gamma)[partition_index(rho)];
}

/// Wg^O(.; z) as a biinvariant function.
inline BiinvariantFn weingarten_function(int n, const Rational& z) {
  return BiinvariantFn(n, weingarten_values(n, z));
}

/// G^O(g; z) = z^{kappa(g)}.
inline BiinvariantFn kappa_power_function(int n, const Rational& z) {
  return BiinvariantFn::from_coset_types(n, [&](const Partition& rho) { return pow(z, rho.length()); });
}

/// Unit of the Hecke algebra: (2^n n!)^{-1} on H_n, 0 elsewhere.
inline BiinvariantFn hecke_unit(int n) {
  const Rational v = Rational(1) / Rational(hyperoctahedral_order(n));
  return BiinvariantFn::from_coset_types(n, [&](const Partition& rho) { return rho.is_all_ones() ? v : Rational(0); });
}

enum class ConvolutionMethod {
  /// Sum over all of S_2n; n <= 3.
  Full,
  /// |H_n| sum over the (2n-1)!! matching representatives of S_2n / H_n.
  CosetReduced,
};

/// (f1 * f2)(g) = sum_{g' in S_2n} f1(g g'^{-1}) f2(g').
inline BiinvariantFn biinvariant_convolve(const BiinvariantFn& f1, const BiinvariantFn& f2,
                                          ConvolutionMethod method = ConvolutionMethod::CosetReduced) {
  if (f1.degree() != f2.degree())
    throw InvalidArgument("convolving biinvariant functions of degrees " + std::to_string(f1.degree()) + " and " +
                          std::to_string(f2.degree()));
  const int n = f1.degree();
  const auto& parts = partition_list(n);
  std::vector<Rational> out(parts.size(), Rational(0));

  if (method == ConvolutionMethod::Full) {
    if (n < 1 || n > kMaxFullConvolutionDegree)
      throw SizeLimitError("full S_2n convolution supports n <= " + std::to_string(kMaxFullConvolutionDegree));
    std::vector<Permutation> group;
    std::vector<int> img(static_cast<size_t>(2 * n));
    std::iota(img.begin(), img.end(), 0);
    do group.push_back(Permutation::from_images(img));
    while (std::next_permutation(img.begin(), img.end()));
    std::vector<size_t> f2_index;
    for (const auto& h : group) f2_index.push_back(partition_index(coset_type(h)));
    for (size_t r = 0; r < parts.size(); ++r) {
      const Permutation g = coset_representative(parts[r]);
      for (size_t k = 0; k < group.size(); ++k) {
        const Rational& b = f2.values()[f2_index[k]];
        if (b == 0) continue;
        out[r] += f1(g * group[k].inverse()) * b;
      }
    }
    return BiinvariantFn(n, std::move(out));
  }

  // Substituting g' = u^{-1} g and u = m h turns the S_2n sum into
  // |H_n| sum_m f1(m) f2(m^{-1} g).
  detail::check_zonal_degree(n);
  const auto matchings = enumerate_matchings(n);
  const Rational order(hyperoctahedral_order(n));
  for (size_t r = 0; r < parts.size(); ++r) {
    const Permutation g = coset_representative(parts[r]);
    for (const Matching& m : matchings) {
      const Permutation mp = m.as_permutation();
      const Rational& a = f1(mp);
      if (a == 0) continue;
      out[r] += a * f2(mp.inverse() * g);
    }
    out[r] *= order;
  }
  return BiinvariantFn(n, std::move(out));
}

namespace detail {

template <class T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) return q;
  else return static_cast<T>(to_double(q));
}

template <class T>
T power_sum_product(const Partition& rho, const std::vector<T>& power_sums) {
  T p = T(1);
  for (int r : rho.parts()) p *= power_sums[static_cast<size_t>(r - 1)];
  return p;
}

inline void check_power_sums(size_t have, int n) {
  if (have < static_cast<size_t>(n))
    throw InvalidArgument("zonal evaluation needs power sums p_1..p_" + std::to_string(n) + ", got " +
                          std::to_string(have));
}

}  // namespace detail

/// Coefficients of Z_lambda in the power-sum basis,
///   Z_lambda = 2^n n! sum_rho 2^{-l(rho)} z_rho^{-1} omega^lambda_rho p_rho,
/// aligned with partition_list(n).
inline std::vector<Rational> zonal_power_sum_coefficients(const Partition& lambda) {
  const int n = lambda.weight();
  const auto table = detail::zonal_table(n);
  const auto& parts = partition_list(n);
  const size_t l = partition_index(lambda);
  std::vector<Rational> c;
  for (size_t r = 0; r < parts.size(); ++r)
    c.push_back(Rational(hyperoctahedral_order(n)) / (pow(Rational(2), parts[r].length()) * Rational(z_of(parts[r]))) *
                table->omega[l][r]);
  return c;
}

/// Z_lambda evaluated at power sums: power_sums[r-1] = p_r for r = 1..|lambda|.
template <class T>
T zonal_eval(const Partition& lambda, const std::vector<T>& power_sums) {
  const int n = lambda.weight();
  detail::check_power_sums(power_sums.size(), n);
  const auto coeffs = zonal_power_sum_coefficients(lambda);
  const auto& parts = partition_list(n);
  T total = T(0);
  for (size_t r = 0; r < parts.size(); ++r)
    total += detail::from_rational<T>(coeffs[r]) * detail::power_sum_product(parts[r], power_sums);
  return total;
}

/// Inverse change of basis:
///   p_rho = 2^n n! / (2n)! sum_lambda f^{2 lambda} omega^lambda_rho Z_lambda,
/// with zonal_values aligned with partition_list(n); returns p_rho likewise aligned.
template <class T>
std::vector<T> power_sums_from_zonal(int n, const std::vector<T>& zonal_values) {
  if (zonal_values.size() != partition_list(n).size())
    throw InvalidArgument("need one zonal value per partition of " + std::to_string(n));
  const auto table = detail::zonal_table(n);
  const auto& parts = partition_list(n);
  const Rational norm = Rational(hyperoctahedral_order(n)) / Rational(factorial(2 * n));
  std::vector<T> out;
  for (size_t r = 0; r < parts.size(); ++r) {
    T total = T(0);
    for (size_t l = 0; l < parts.size(); ++l)
      total += detail::from_rational<T>(norm * Rational(dim_even(parts[l])) * table->omega[l][r]) * zonal_values[l];
    out.push_back(total);
  }
  return out;
}

}  // namespace ww
