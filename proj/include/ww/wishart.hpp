#pragma once

// Moments of a real Wishart matrix W ~ W_d(beta, sigma) and of its inverse.
//
// Convention: the mgf of W is det(I - theta sigma)^{-beta}, so E[W] = beta sigma
// and for integer 2 beta = p, W = X_1 X_1^t + ... + X_p X_p^t with
// X_i ~ N(0, sigma / 2). In textbook notation W_d(p, Sigma) this is
// p = 2 beta and Sigma = sigma / 2.
//
// Combinatorial coefficients are exact rationals; sigma-dependent products
// are doubles. All index arguments are 0-based.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ww/error.hpp"
#include "ww/hafnian.hpp"
#include "ww/matchgroup.hpp"
#include "ww/parallel.hpp"
#include "ww/rational.hpp"
#include "ww/symcomb.hpp"
#include "ww/weingarten.hpp"

namespace ww {

using MatrixF = Eigen::MatrixXd;

inline constexpr int kMaxMomentDegree = 8;
inline constexpr int kMaxTraceProductDegree = 7;
inline constexpr double kSymmetryTolerance = 1e-12;

namespace detail {

inline bool nearly_symmetric(const MatrixF& a, double tol = kSymmetryTolerance) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

inline void check_admissible_beta(const Rational& beta, int d) {
  const Rational edge = Rational(d - 1, 2);
  if (beta > edge) return;
  if (beta > 0 && is_integer(2 * beta)) return;
  throw DomainError("beta = " + to_string(beta) + " is not admissible for d = " + std::to_string(d) +
                    ": need beta in {1/2, 1, ..., " + to_string(edge) + "} or beta > " + to_string(edge));
}

}  // namespace detail

/// Validated (d, beta, sigma). sigma is symmetrized and factorized once;
/// failure of the Cholesky factorization means sigma is not positive definite.
class WishartParams {
 public:
  WishartParams(Rational beta, MatrixF sigma) : beta_(std::move(beta)), sigma_(std::move(sigma)) {
    if (sigma_.rows() == 0 || sigma_.rows() != sigma_.cols()) throw InvalidArgument("sigma must be a nonempty square matrix");
    if (!detail::nearly_symmetric(sigma_)) throw InvalidArgument("sigma is not symmetric");
    sigma_ = (sigma_ + sigma_.transpose()) / 2;
    d_ = static_cast<int>(sigma_.rows());
    detail::check_admissible_beta(beta_, d_);
    Eigen::LLT<MatrixF> llt(sigma_);
    if (llt.info() != Eigen::Success) throw DomainError("sigma is not positive definite");
    chol_ = llt.matrixL();
    sigma_inv_ = llt.solve(MatrixF::Identity(d_, d_));
    sigma_inv_ = (sigma_inv_ + sigma_inv_.transpose()) / 2;
  }

  int d() const noexcept { return d_; }
  const Rational& beta() const noexcept { return beta_; }
  double beta_f() const { return to_double(beta_); }
  /// gamma = beta - (d+1)/2.
  Rational gamma() const { return beta_ - Rational(d_ + 1, 2); }
  const MatrixF& sigma() const noexcept { return sigma_; }
  const MatrixF& sigma_inv() const noexcept { return sigma_inv_; }
  /// Lower Cholesky factor of sigma.
  const MatrixF& sigma_chol() const noexcept { return chol_; }

 private:
  Rational beta_;
  MatrixF sigma_;
  int d_ = 0;
  MatrixF chol_;
  MatrixF sigma_inv_;
};

/// How an inverse moment at (gamma, n) is justified.
enum class GammaRegime {
  /// gamma > n - 1.
  Standard,
  /// 0 < gamma <= n - 1 with no pole; the formula is continued to these points.
  Extended,
};

inline std::string to_string(GammaRegime r) { return r == GammaRegime::Standard ? "standard" : "extended"; }

/// Classifies gamma for an inverse moment of degree n. gamma <= 0 raises
/// DomainError; a vanishing C_lambda(-2 gamma) raises PoleError.
inline GammaRegime inverse_regime(const Rational& gamma, int n) {
  if (gamma <= 0)
    throw DomainError("inverse moments need gamma = beta - (d+1)/2 > 0, got gamma = " + to_string(gamma));
  check_no_pole(n, -2 * gamma, "inverse moment of degree " + std::to_string(n) + " has a pole at gamma = " + to_string(gamma));
  return gamma > n - 1 ? GammaRegime::Standard : GammaRegime::Extended;
}

namespace detail {

inline int even_degree(const std::vector<int>& indices, int d, const char* what) {
  if (indices.empty() || indices.size() % 2 != 0)
    throw InvalidArgument(std::string(what) + ": need a nonempty even number of indices");
  for (int k : indices)
    if (k < 0 || k >= d)
      throw InvalidArgument(std::string(what) + ": index " + std::to_string(k + 1) + " outside [1, " +
                            std::to_string(d) + "]");
  return static_cast<int>(indices.size()) / 2;
}

inline MatrixF index_restricted(const MatrixF& x, const std::vector<int>& k) {
  const auto m = static_cast<Eigen::Index>(k.size());
  MatrixF a(m, m);
  for (Eigen::Index p = 0; p < m; ++p)
    for (Eigen::Index q = 0; q < m; ++q) a(p, q) = x(k[static_cast<size_t>(p)], k[static_cast<size_t>(q)]);
  return a;
}

inline double matching_product(const MatrixF& x, const std::vector<int>& k, const Matching& m) {
  double prod = 1.0;
  for (int i = 0; i < m.degree(); ++i) {
    auto [p, q] = m.pair(i);
    prod *= x(k[static_cast<size_t>(p)], k[static_cast<size_t>(q)]);
  }
  return prod;
}

// Sum of term(i) for i < count, split into fixed blocks so the floating
// point result does not depend on the thread count.
template <class Term>
double ordered_sum(size_t count, Term&& term) {
  constexpr size_t kBlock = 64;
  const size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, default_threads(), [&](size_t b) {
    double s = 0.0;
    for (size_t i = b * kBlock; i < std::min(count, (b + 1) * kBlock); ++i) s += term(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

inline void check_matrix_list(const std::vector<MatrixF>& ms, int d, const char* what) {
  for (const auto& m : ms)
    if (m.rows() != d || m.cols() != d)
      throw InvalidArgument(std::string(what) + ": every matrix must be " + std::to_string(d) + " x " + std::to_string(d));
}

}  // namespace detail

/// E[W_{k1 k2} ... W_{k_{2n-1} k_{2n}}] = 2^{-n} hf_{2 beta}(sigma_{k_p k_q}).
inline double moment(const WishartParams& params, const std::vector<int>& indices) {
  const int n = detail::even_degree(indices, params.d(), "moment");
  if (n > kMaxMomentDegree) throw SizeLimitError("moment: degree n = " + std::to_string(n) + " exceeds 8");
  const MatrixF a = detail::index_restricted(params.sigma(), indices);
  return std::ldexp(hafnian_expand(a, 2 * params.beta_f()), -n);
}

/// The same moment as the explicit sum over matchings, 2^{-n} sum_m (2 beta)^{kappa(m)} prod sigma.
inline double moment_by_matchings(const WishartParams& params, const std::vector<int>& indices) {
  const int n = detail::even_degree(indices, params.d(), "moment");
  const auto matchings = enumerate_matchings(n);
  const Rational alpha = 2 * params.beta();
  std::vector<double> weight;
  for (int k = 0; k <= n; ++k) weight.push_back(to_double(pow(alpha, k)));
  const double total = detail::ordered_sum(matchings.size(), [&](size_t i) {
    return weight[static_cast<size_t>(kappa(matchings[i]))] * detail::matching_product(params.sigma(), indices, matchings[i]);
  });
  return std::ldexp(total, -n);
}

struct InverseMoment {
  double value;
  GammaRegime regime;
};

/// E[W^{k1 k2} ... W^{k_{2n-1} k_{2n}}] = sum_m ~Wg(m; gamma) prod sigma^{k_p k_q},
/// where W^{ij} is the (i, j) entry of W^{-1}.
inline InverseMoment inverse_moment_with_regime(const WishartParams& params, const std::vector<int>& indices) {
  const int n = detail::even_degree(indices, params.d(), "inverse moment");
  if (n > kMaxZonalDegree) throw SizeLimitError("inverse moment: degree n = " + std::to_string(n) + " exceeds 5");
  const Rational gamma = params.gamma();
  const GammaRegime regime = inverse_regime(gamma, n);
  std::vector<double> wg;
  for (const Rational& v : tilde_weingarten_values(n, gamma)) wg.push_back(to_double(v));
  const auto matchings = enumerate_matchings(n);
  const double value = detail::ordered_sum(matchings.size(), [&](size_t i) {
    return wg[partition_index(coset_type(matchings[i]))] *
           detail::matching_product(params.sigma_inv(), indices, matchings[i]);
  });
  return {value, regime};
}

inline double inverse_moment(const WishartParams& params, const std::vector<int>& indices) {
  return inverse_moment_with_regime(params, indices).value;
}

/// R_pi(x; m_1, ..., m_n) = prod over cycles (c_1 -> ... -> c_r) of tr(x m_{c_1} x m_{c_2} ... x m_{c_r}).
inline double r_functional(const MatrixF& x, const std::vector<MatrixF>& ms, const Permutation& pi) {
  if (pi.size() != static_cast<int>(ms.size())) throw InvalidArgument("R functional: permutation and matrix list differ in size");
  double prod = 1.0;
  for (const auto& c : pi.cycles()) {
    MatrixF acc = x * ms[static_cast<size_t>(c[0])];
    for (size_t k = 1; k < c.size(); ++k) acc = acc * x * ms[static_cast<size_t>(c[k])];
    prod *= acc.trace();
  }
  return prod;
}

/// T_g(x; m_1, ..., m_n) = sum_j prod_k (m_k)_{j_{2k}, j_{2k+1}} prod_k x_{j_{g(2k)}, j_{g(2k+1)}}
/// for symmetric x, evaluated as a product of traces over the cycles of the
/// graph joining 2k - 2k+1 (through m_k) and g(2k) - g(2k+1) (through x).
inline double t_functional(const MatrixF& x, const std::vector<MatrixF>& ms, const Permutation& g) {
  const int n = static_cast<int>(ms.size());
  if (g.size() != 2 * n) throw InvalidArgument("T functional: permutation must act on 2n points");
  std::vector<int> x_mate(static_cast<size_t>(2 * n));
  for (int k = 0; k < n; ++k) {
    x_mate[static_cast<size_t>(g(2 * k))] = g(2 * k + 1);
    x_mate[static_cast<size_t>(g(2 * k + 1))] = g(2 * k);
  }
  std::vector<char> seen(static_cast<size_t>(2 * n), 0);
  double prod = 1.0;
  for (int start = 0; start < 2 * n; ++start) {
    if (seen[static_cast<size_t>(start)]) continue;
    // Walk position p -> p^1 through m_{p/2} (transposed when entering at an
    // odd position), then p^1 -> x_mate(p^1) through x.
    MatrixF acc = MatrixF::Identity(x.rows(), x.cols());
    int p = start;
    do {
      const int k = p / 2;
      seen[static_cast<size_t>(p)] = seen[static_cast<size_t>(p ^ 1)] = 1;
      if (p % 2 == 0) acc = acc * ms[static_cast<size_t>(k)];
      else acc = acc * ms[static_cast<size_t>(k)].transpose();
      acc = acc * x;
      p = x_mate[static_cast<size_t>(p ^ 1)];
    } while (p != start);
    prod *= acc.trace();
  }
  return prod;
}

/// g = (prod over i with signs[i] < 0 of zeta_i) * pi~, where
/// pi~(2j) = 2 pi(j), pi~(2j+1) = 2j+1 and zeta_i swaps 2i and 2i+1.
/// Then R_pi(x; m_1^{e_1}, ..., m_n^{e_n}) = T_g(x; m_1, ..., m_n),
/// with m^{-1} meaning the transpose.
inline Permutation r_to_tg(const Permutation& pi, const std::vector<int>& signs) {
  const int n = pi.size();
  if (static_cast<int>(signs.size()) != n) throw InvalidArgument("r_to_tg: need one sign per matrix");
  std::vector<int> tilde(static_cast<size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    tilde[static_cast<size_t>(2 * j)] = 2 * pi(j);
    tilde[static_cast<size_t>(2 * j + 1)] = 2 * j + 1;
  }
  std::vector<int> flips(static_cast<size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    if (signs[static_cast<size_t>(i)] != 1 && signs[static_cast<size_t>(i)] != -1)
      throw InvalidArgument("r_to_tg: signs must be +1 or -1");
    const bool flip = signs[static_cast<size_t>(i)] < 0;
    flips[static_cast<size_t>(2 * i)] = flip ? 2 * i + 1 : 2 * i;
    flips[static_cast<size_t>(2 * i + 1)] = flip ? 2 * i : 2 * i + 1;
  }
  return Permutation::from_images(std::move(flips)) * Permutation::from_images(std::move(tilde));
}

/// E[tr(W s_1) ... tr(W s_n)] = sum_{pi in S_n} beta^{nu(pi)} R_pi(sigma; s_1, ..., s_n), s_i symmetric.
inline double trace_product_moment(const WishartParams& params, const std::vector<MatrixF>& s) {
  const int n = static_cast<int>(s.size());
  if (n < 1 || n > kMaxTraceProductDegree) throw SizeLimitError("trace product moment supports 1 <= n <= 7");
  detail::check_matrix_list(s, params.d(), "trace product moment");
  for (const auto& m : s)
    if (!detail::nearly_symmetric(m)) throw InvalidArgument("trace product moment needs symmetric matrices");
  std::vector<double> weight;
  for (int k = 0; k <= n; ++k) weight.push_back(to_double(pow(params.beta(), k)));
  std::vector<int> img(static_cast<size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  double total = 0.0;
  do {
    const auto pi = Permutation::from_images(img);
    total += weight[static_cast<size_t>(pi.cycle_count())] * r_functional(params.sigma(), s, pi);
  } while (std::next_permutation(img.begin(), img.end()));
  return total;
}

enum class MixedMomentRoute {
  /// Sum over the (2n-1)!! matchings.
  Matchings,
  /// Sum over all of S_2n, divided by 2^n n!; n <= 3.
  FullGroup,
};

/// E[T_g(W; m)] = 2^{-n} sum_{matchings s} (2 beta)^{kappa(g^{-1} s)} T_s(sigma; m), or for the
/// inverse E[T_g(W^{-1}; m)] = sum_s ~Wg(g^{-1} s; gamma) T_s(sigma^{-1}; m).
inline double mixed_trace_moment(const WishartParams& params, const Permutation& g, const std::vector<MatrixF>& ms,
                                 bool inverse, MixedMomentRoute route = MixedMomentRoute::Matchings) {
  const int n = static_cast<int>(ms.size());
  if (n < 1 || n > kMaxZonalDegree) throw SizeLimitError("mixed trace moment supports 1 <= n <= 5");
  if (g.size() != 2 * n) throw InvalidArgument("mixed trace moment: g must act on 2n points");
  detail::check_matrix_list(ms, params.d(), "mixed trace moment");

  std::vector<double> coeff;  // by coset type of g^{-1} s
  if (inverse) {
    inverse_regime(params.gamma(), n);
    for (const Rational& v : tilde_weingarten_values(n, params.gamma())) coeff.push_back(to_double(v));
  } else {
    const Rational alpha = 2 * params.beta();
    for (const Partition& rho : partition_list(n)) coeff.push_back(std::ldexp(to_double(pow(alpha, rho.length())), -n));
  }
  const MatrixF& x = inverse ? params.sigma_inv() : params.sigma();
  const Permutation g_inv = g.inverse();

  if (route == MixedMomentRoute::FullGroup) {
    if (n > kMaxFullConvolutionDegree) throw SizeLimitError("full-group mixed moment supports n <= 3");
    std::vector<int> img(static_cast<size_t>(2 * n));
    std::iota(img.begin(), img.end(), 0);
    double total = 0.0;
    do {
      const auto h = Permutation::from_images(img);
      total += coeff[partition_index(coset_type(g_inv * h))] * t_functional(x, ms, h);
    } while (std::next_permutation(img.begin(), img.end()));
    return total / to_double(Rational(hyperoctahedral_order(n)));
  }

  const auto matchings = enumerate_matchings(n);
  return detail::ordered_sum(matchings.size(), [&](size_t i) {
    const Permutation s = matchings[i].as_permutation();
    return coeff[partition_index(coset_type(g_inv * s))] * t_functional(x, ms, s);
  });
}

/// p_r = tr(x^r) for r = 1..n.
inline std::vector<double> power_sums(const MatrixF& x, int n) {
  std::vector<double> p;
  MatrixF pw = x;
  for (int r = 1; r <= n; ++r) {
    p.push_back(pw.trace());
    pw = pw * x;
  }
  return p;
}

/// p_rho(x) = prod_i tr(x^{rho_i}).
inline double power_sum_product(const MatrixF& x, const Partition& rho) {
  return detail::power_sum_product(rho, power_sums(x, rho.empty() ? 0 : rho[0]));
}

/// E[Z_lambda(W)] = 2^{-n} C_lambda(2 beta) Z_lambda(sigma), or
/// E[Z_lambda(W^{-1})] = (-1)^n 2^n C_lambda(-2 gamma)^{-1} Z_lambda(sigma^{-1}).
inline double invariant_moment(const WishartParams& params, const Partition& lambda, bool inverse) {
  const int n = lambda.weight();
  if (n < 1 || n > kMaxZonalDegree) throw SizeLimitError("invariant moment supports 1 <= |lambda| <= 5");
  Rational coeff;
  if (inverse) {
    inverse_regime(params.gamma(), n);
    coeff = pow(Rational(-2), n) / c_poly(lambda, Rational(-2 * params.gamma()));
  } else {
    coeff = c_poly(lambda, Rational(2 * params.beta())) / pow(Rational(2), n);
  }
  const MatrixF& x = inverse ? params.sigma_inv() : params.sigma();
  return to_double(coeff) * zonal_eval(lambda, power_sums(x, n));
}

/// Exact coefficients c_rho of E[p_mu(W^{+-1})] = sum_rho c_rho p_rho(sigma^{+-1}),
/// aligned with partition_list(|mu|). `param` is beta for the forward moment
/// and gamma for the inverse one.
inline std::vector<Rational> power_trace_coefficients(const Partition& mu, const Rational& param, bool inverse) {
  const int n = mu.weight();
  if (n < 1 || n > kMaxZonalDegree) throw SizeLimitError("power trace moment supports 1 <= |mu| <= 5");
  if (inverse) inverse_regime(param, n);
  const auto& parts = partition_list(n);
  const size_t mu_i = partition_index(mu);
  std::vector<Rational> inner(parts.size());  // by lambda
  for (size_t l = 0; l < parts.size(); ++l) {
    const Rational c = inverse ? pow(Rational(-2), n) / c_poly(parts[l], Rational(-2 * param))
                               : c_poly(parts[l], Rational(2 * param)) / pow(Rational(2), n);
    inner[l] = c * Rational(dim_even(parts[l])) * zonal_spherical(parts[l], parts[mu_i]);
  }
  const Rational h(hyperoctahedral_order(n));
  const Rational front = h * h / Rational(factorial(2 * n));
  std::vector<Rational> out;
  for (const Partition& rho : parts) {
    Rational s = 0;
    for (size_t l = 0; l < parts.size(); ++l) s += inner[l] * zonal_spherical(parts[l], rho);
    out.push_back(front / (pow(Rational(2), rho.length()) * Rational(z_of(rho))) * s);
  }
  return out;
}

namespace detail {

inline double contract(const std::vector<Rational>& coeffs, const std::vector<double>& p, int n) {
  const auto& parts = partition_list(n);
  double total = 0.0;
  for (size_t r = 0; r < parts.size(); ++r) total += to_double(coeffs[r]) * power_sum_product(parts[r], p);
  return total;
}

}  // namespace detail

/// E[p_mu(W^{+-1})] with p_mu(x) = prod_i tr(x^{mu_i}).
inline double power_trace_moment(const WishartParams& params, const Partition& mu, bool inverse) {
  const auto coeffs = power_trace_coefficients(mu, inverse ? params.gamma() : params.beta(), inverse);
  const int n = mu.weight();
  return detail::contract(coeffs, power_sums(inverse ? params.sigma_inv() : params.sigma(), n), n);
}

/// Exact coefficients of E[(tr W)^n] = sum_rho n!/z_rho beta^{l(rho)} p_rho(sigma), or of
/// E[(tr W^{-1})^n] = sum_rho 2^{n - l(rho)} n!/z_rho ~Wg(rho; gamma) p_rho(sigma^{-1}).
inline std::vector<Rational> trace_power_coefficients(int n, const Rational& param, bool inverse) {
  if (n < 1 || n > kMaxZonalDegree) throw SizeLimitError("trace power moment supports 1 <= n <= 5");
  std::vector<Rational> wg;
  if (inverse) {
    inverse_regime(param, n);
    wg = tilde_weingarten_values(n, param);
  }
  const auto& parts = partition_list(n);
  std::vector<Rational> out;
  for (size_t r = 0; r < parts.size(); ++r) {
    const Rational cls = Rational(factorial(n)) / Rational(z_of(parts[r]));
    const int len = parts[r].length();
    out.push_back(inverse ? pow(Rational(2), n - len) * cls * wg[r] : cls * pow(param, len));
  }
  return out;
}

/// E[(tr W)^n] or E[(tr W^{-1})^n].
inline double trace_power_moment(const WishartParams& params, int n, bool inverse) {
  const auto coeffs = trace_power_coefficients(n, inverse ? params.gamma() : params.beta(), inverse);
  return detail::contract(coeffs, power_sums(inverse ? params.sigma_inv() : params.sigma(), n), n);
}

/// log Gamma_d(a) = d(d-1)/4 log(pi) + sum_{j=1}^d log Gamma(a - (j-1)/2).
inline double log_multivariate_gamma(double a, int d) {
  double s = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= d; ++j) s += std::lgamma(a - 0.5 * (j - 1));
  return s;
}

/// log f(w) = -log Gamma_d(beta) - beta log det sigma + (beta - (d+1)/2) log det w - tr(sigma^{-1} w).
inline double log_density(const WishartParams& params, const MatrixF& w) {
  const int d = params.d();
  if (params.beta() <= Rational(d - 1, 2))
    throw DomainError("the density exists only for beta > (d-1)/2");
  if (w.rows() != d || w.cols() != d || !detail::nearly_symmetric(w))
    throw InvalidArgument("density: w must be a symmetric " + std::to_string(d) + " x " + std::to_string(d) + " matrix");
  Eigen::LLT<MatrixF> llt((w + w.transpose()) / 2);
  if (llt.info() != Eigen::Success) throw DomainError("density: w is not positive definite");
  const MatrixF lw = llt.matrixL();
  const double log_det_w = 2 * lw.diagonal().array().log().sum();
  const double log_det_s = 2 * params.sigma_chol().diagonal().array().log().sum();
  const double beta = params.beta_f();
  return -log_multivariate_gamma(beta, d) - beta * log_det_s + (beta - 0.5 * (d + 1)) * log_det_w -
         (params.sigma_inv() * w).trace();
}

inline double density(const WishartParams& params, const MatrixF& w) { return std::exp(log_density(params, w)); }

/// E[O_{i_1 j_1} ... O_{i_{2n} j_{2n}}] for Haar-distributed O in O(N):
///   sum_{m, m'} Wg^O(m^{-1} m'; N) delta_i(m) delta_j(m'),
/// with the truncated Weingarten function so that every N >= 1 is allowed.
/// Odd length gives 0.
inline Rational haar_moment(const std::vector<int>& i, const std::vector<int>& j, int big_n) {
  if (i.size() != j.size()) throw InvalidArgument("haar moment: index lists differ in length");
  if (big_n < 1) throw InvalidArgument("haar moment: N must be positive");
  for (const auto* list : {&i, &j})
    for (int k : *list)
      if (k < 0 || k >= big_n)
        throw InvalidArgument("haar moment: index " + std::to_string(k + 1) + " outside [1, " + std::to_string(big_n) + "]");
  if (i.empty()) return 1;
  if (i.size() % 2 != 0) return 0;
  const int n = static_cast<int>(i.size()) / 2;
  if (n > kMaxZonalDegree) throw SizeLimitError("haar moment supports n <= 5");
  const auto wg = weingarten_truncated_values(n, big_n);
  auto supported = [&](const std::vector<int>& idx) {
    std::vector<Permutation> out;
    for (const Matching& m : enumerate_matchings(n)) {
      bool ok = true;
      for (int k = 0; k < n && ok; ++k) {
        auto [p, q] = m.pair(k);
        ok = idx[static_cast<size_t>(p)] == idx[static_cast<size_t>(q)];
      }
      if (ok) out.push_back(m.as_permutation());
    }
    return out;
  };
  const auto left = supported(i);
  const auto right = supported(j);
  Rational total = 0;
  for (const auto& a : left) {
    const Permutation a_inv = a.inverse();
    for (const auto& b : right) total += wg[partition_index(coset_type(a_inv * b))];
  }
  return total;
}

}  // namespace ww
