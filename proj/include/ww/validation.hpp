#pragma once

// Self-check suites behind `ww validate`:
//   golden      closed-form low-degree values against the general formulas
//   identities  exact Hecke-algebra and hafnian identities
//   montecarlo  sample means against exact moments

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ww/hafnian.hpp"
#include "ww/montecarlo.hpp"
#include "ww/weingarten.hpp"
#include "ww/wishart.hpp"

namespace ww {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t f = 0;
    for (const auto& c : checks) f += c.pass ? 0 : 1;
    return f;
  }
};

namespace detail {

inline constexpr double kGoldenTolerance = 1e-10;

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline void add_numeric(SuiteReport& r, std::string name, double got, double expected, double tol = kGoldenTolerance) {
  const double err = relative_error(got, expected);
  r.checks.push_back({std::move(name), err <= tol,
                      "got " + std::to_string(got) + ", expected " + std::to_string(expected) + ", rel err " +
                          std::to_string(err)});
}

inline void add_exact(SuiteReport& r, std::string name, const Rational& got, const Rational& expected) {
  r.checks.push_back({std::move(name), got == expected, "got " + to_string(got) + ", expected " + to_string(expected)});
}

inline void add_flag(SuiteReport& r, std::string name, bool ok, std::string detail = {}) {
  r.checks.push_back({std::move(name), ok, std::move(detail)});
}

inline MatrixF random_spd(int d, Engine& e) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixF x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = g(e);
  MatrixF s = x * x.transpose() / d + 0.5 * MatrixF::Identity(d, d);
  return (s + s.transpose()) / 2;
}

inline MatrixF random_square(int d, Engine& e) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixF x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = g(e);
  return x;
}

inline Rational random_rational(Engine& e, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  return Rational(num(e), den(e));
}

// Rational avoiding every integer and half-integer.
inline Rational random_generic_point(Engine& e) {
  for (;;) {
    Rational z = random_rational(e, 60, 11);
    if (!is_integer(2 * z)) return z;
  }
}

}  // namespace detail

/// Closed-form low-degree values (degrees 1-4) replayed against the general
/// formulas, at d in {2, 3} with random positive definite sigma.
inline SuiteReport validate_golden(std::uint64_t seed = 1) {
  using detail::add_exact;
  using detail::add_numeric;
  SuiteReport r{"golden", {}};
  Engine e = make_engine({seed, 0xA11CE});

  for (int t = 0; t < 3; ++t) {
    const Rational z = detail::random_generic_point(e);
    const std::string at = " at z=" + to_string(z);
    add_exact(r, "Wg(1)" + at, weingarten(Partition({1}), z), 1 / z);
    add_exact(r, "Wg(2)" + at, weingarten(Partition({2}), z), -1 / (z * (z + 2) * (z - 1)));
    add_exact(r, "Wg(1,1)" + at, weingarten(Partition({1, 1}), z), (z + 1) / (z * (z + 2) * (z - 1)));
  }
  for (int t = 0; t < 3; ++t) {
    const Rational g = detail::random_generic_point(e);
    const std::string at = " at gamma=" + to_string(g);
    const Rational d2 = g * (g - 1) * (2 * g + 1);
    const Rational u3 = g * (g - 1) * (g - 2) * (g + 1) * (2 * g + 1);
    const Rational u4 = g * (g - 1) * (g - 2) * (g - 3) * (2 * g - 1) * (g + 1) * (2 * g + 1) * (2 * g + 3);
    add_exact(r, "~Wg(1,1)" + at, tilde_weingarten(Partition({1, 1}), g), (2 * g - 1) / d2);
    add_exact(r, "~Wg(2)" + at, tilde_weingarten(Partition({2}), g), 1 / d2);
    add_exact(r, "~Wg(3)" + at, tilde_weingarten(Partition({3}), g), 1 / u3);
    add_exact(r, "~Wg(2,1)" + at, tilde_weingarten(Partition({2, 1}), g), (g - 1) / u3);
    add_exact(r, "~Wg(1,1,1)" + at, tilde_weingarten(Partition({1, 1, 1}), g), (2 * g * g - 3 * g - 1) / u3);
    add_exact(r, "~Wg(4)" + at, tilde_weingarten(Partition({4}), g), (5 * g - 3) / u4);
    add_exact(r, "~Wg(3,1)" + at, tilde_weingarten(Partition({3, 1}), g), 4 * g * (g - 2) / u4);
    add_exact(r, "~Wg(2,2)" + at, tilde_weingarten(Partition({2, 2}), g), (2 * g * g - 5 * g + 9) / u4);
    add_exact(r, "~Wg(2,1,1)" + at, tilde_weingarten(Partition({2, 1, 1}), g),
              (4 * g * g * g - 12 * g * g + 3 * g + 3) / u4);
    add_exact(r, "~Wg(1,1,1,1)" + at, tilde_weingarten(Partition({1, 1, 1, 1}), g),
              (g + 1) * (2 * g - 3) * (4 * g * g - 12 * g + 1) / u4);
  }

  const Rational omega3[3][3] = {{1, 1, 1}, {Rational(-1, 4), Rational(1, 6), 1}, {Rational(1, 4), Rational(-1, 2), 1}};
  const auto& p3 = partition_list(3);
  for (size_t l = 0; l < 3; ++l)
    for (size_t c = 0; c < 3; ++c)
      add_exact(r, "omega^" + to_string(p3[l]) + "_" + to_string(p3[c]), zonal_spherical(p3[l], p3[c]), omega3[l][c]);
  add_exact(r, "f^(6)", Rational(dim_even(Partition({3}))), 1);
  add_exact(r, "f^(4,2)", Rational(dim_even(Partition({2, 1}))), 9);
  add_exact(r, "f^(2,2,2)", Rational(dim_even(Partition({1, 1, 1}))), 5);

  for (int d : {2, 3}) {
    const Rational beta = d == 2 ? Rational(47, 8) : Rational(29, 4);
    const WishartParams p(beta, detail::random_spd(d, e));
    const MatrixF& s = p.sigma();
    const MatrixF& si = p.sigma_inv();
    const double b = to_double(beta), g = to_double(p.gamma());
    const std::string sfx = " (d=" + std::to_string(d) + ")";
    const double den2 = g * (g - 1) * (2 * g + 1);
    const double u3 = g * (g - 1) * (g - 2) * (g + 1) * (2 * g + 1);
    const double u4 = u3 * (g - 3) * (2 * g - 1) * (2 * g + 3);

    add_numeric(r, "E[W_12]" + sfx, moment(p, {0, 1}), b * s(0, 1));
    add_numeric(r, "E[W^12]" + sfx, inverse_moment(p, {0, 1}), si(0, 1) / g);
    const std::vector<int> k = {0, 1, d - 1, 0};
    add_numeric(r, "E[W_k1k2 W_k3k4]" + sfx, moment(p, k),
                b * b * s(k[0], k[1]) * s(k[2], k[3]) + b / 2 * (s(k[0], k[2]) * s(k[1], k[3]) + s(k[0], k[3]) * s(k[1], k[2])));
    add_numeric(r, "E[W^k1k2 W^k3k4]" + sfx, inverse_moment(p, k),
                ((2 * g - 1) * si(k[0], k[1]) * si(k[2], k[3]) + si(k[0], k[2]) * si(k[1], k[3]) +
                 si(k[0], k[3]) * si(k[1], k[2])) / den2);

    const MatrixF w2 = (b * b + b / 2) * s * s + b / 2 * s.trace() * s;
    const MatrixF wm2 = (2 * g * si * si + si.trace() * si) / den2;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        double e2 = 0, em2 = 0;
        for (int c = 0; c < d; ++c) {
          e2 += moment(p, {i, c, c, j});
          em2 += inverse_moment(p, {i, c, c, j});
        }
        const std::string ij = "_" + std::to_string(i + 1) + std::to_string(j + 1);
        add_numeric(r, "E[W^2]" + ij + sfx, e2, w2(i, j));
        add_numeric(r, "E[W^-2]" + ij + sfx, em2, wm2(i, j));
      }

    const MatrixF m1 = detail::random_square(d, e), m2 = detail::random_square(d, e);
    const auto cyc = r_to_tg(Permutation::from_one_line({2, 1}), {1, 1});
    const auto id = r_to_tg(Permutation::identity(2), {1, 1});
    add_numeric(r, "E[tr(W m1 W m2)]" + sfx, mixed_trace_moment(p, cyc, {m1, m2}, false),
                b * b * (s * m1 * s * m2).trace() + b / 2 * (s * m1.transpose() * s * m2).trace() +
                    b / 2 * (s * m1).trace() * (s * m2).trace());
    add_numeric(r, "E[tr(W^-1 m1 W^-1 m2)]" + sfx, mixed_trace_moment(p, cyc, {m1, m2}, true),
                ((2 * g - 1) * (si * m1 * si * m2).trace() + (si * m1.transpose() * si * m2).trace() +
                 (si * m1).trace() * (si * m2).trace()) / den2);
    add_numeric(r, "E[tr(W m1) tr(W m2)]" + sfx, mixed_trace_moment(p, id, {m1, m2}, false),
                b * b * (s * m1).trace() * (s * m2).trace() + b / 2 * (s * m1 * s * m2).trace() +
                    b / 2 * (s * m1.transpose() * s * m2).trace());
    add_numeric(r, "E[tr(W^-1 m1) tr(W^-1 m2)]" + sfx, mixed_trace_moment(p, id, {m1, m2}, true),
                ((2 * g - 1) * (si * m1).trace() * (si * m2).trace() + (si * m1 * si * m2).trace() +
                 (si * m1.transpose() * si * m2).trace()) / den2);

    auto ps = [](const MatrixF& x, std::initializer_list<int> rho) { return power_sum_product(x, Partition(rho)); };
    const double a3 = ps(s, {3}), a21 = ps(s, {2, 1}), a111 = ps(s, {1, 1, 1});
    const double i3 = ps(si, {3}), i21 = ps(si, {2, 1}), i111 = ps(si, {1, 1, 1});
    add_numeric(r, "E[p_(3)(W)]" + sfx, power_trace_moment(p, Partition({3}), false),
                b / 2 * (2 * b * b + 3 * b + 2) * a3 + 0.75 * b * (2 * b + 1) * a21 + b / 4 * a111);
    add_numeric(r, "E[p_(2,1)(W)]" + sfx, power_trace_moment(p, Partition({2, 1}), false),
                b * (2 * b + 1) * a3 + b / 2 * (2 * b * b + b + 2) * a21 + b * b / 2 * a111);
    add_numeric(r, "E[p_(1,1,1)(W)]" + sfx, power_trace_moment(p, Partition({1, 1, 1}), false),
                2 * b * a3 + 3 * b * b * a21 + b * b * b * a111);
    add_numeric(r, "E[p_(3)(W^-1)]" + sfx, power_trace_moment(p, Partition({3}), true),
                (2 * g * g * i3 + 3 * g * i21 + i111) / u3);
    add_numeric(r, "E[p_(2,1)(W^-1)]" + sfx, power_trace_moment(p, Partition({2, 1}), true),
                (4 * g * i3 + 2 * (g * g - g + 1) * i21 + (g - 1) * i111) / u3);
    add_numeric(r, "E[p_(1,1,1)(W^-1)]" + sfx, power_trace_moment(p, Partition({1, 1, 1}), true),
                (8 * i3 + 6 * (g - 1) * i21 + (2 * g * g - 3 * g - 1) * i111) / u3);

    add_numeric(r, "E[(tr W)^4]" + sfx, trace_power_moment(p, 4, false),
                6 * b * ps(s, {4}) + 8 * b * b * ps(s, {3, 1}) + 3 * b * b * ps(s, {2, 2}) +
                    6 * b * b * b * ps(s, {2, 1, 1}) + b * b * b * b * ps(s, {1, 1, 1, 1}));
    add_numeric(r, "u4 E[(tr W^-1)^4]" + sfx, u4 * trace_power_moment(p, 4, true),
                48 * (5 * g - 3) * ps(si, {4}) + 128 * g * (g - 2) * ps(si, {3, 1}) +
                    12 * (2 * g * g - 5 * g + 9) * ps(si, {2, 2}) +
                    12 * (4 * g * g * g - 12 * g * g + 3 * g + 3) * ps(si, {2, 1, 1}) +
                    (g + 1) * (2 * g - 3) * (4 * g * g - 12 * g + 1) * ps(si, {1, 1, 1, 1}));
  }

  for (int big_n = 2; big_n <= 4; ++big_n) {
    const Rational nn(big_n);
    const std::string sfx = " (N=" + std::to_string(big_n) + ")";
    add_exact(r, "E[O_11^2]" + sfx, haar_moment({0, 0}, {0, 0}, big_n), 1 / nn);
    add_exact(r, "E[O_11 O_11 O_22 O_22]" + sfx, haar_moment({0, 0, 1, 1}, {0, 0, 1, 1}, big_n),
              (nn + 1) / (nn * (nn + 2) * (nn - 1)));
    add_exact(r, "E[O_11 O_12 O_21 O_22]" + sfx, haar_moment({0, 0, 1, 1}, {0, 1, 0, 1}, big_n),
              -1 / (nn * (nn + 2) * (nn - 1)));
  }
  return r;
}

/// Exact identities for every degree n <= max_n (max_n <= 4).
inline SuiteReport validate_identities(int max_n = 4, std::uint64_t seed = 1) {
  using detail::add_flag;
  if (max_n < 1 || max_n > 4) throw InvalidArgument("identity suite supports 1 <= n <= 4");
  SuiteReport r{"identities", {}};
  Engine e = make_engine({seed, 0x1DE});
  for (int n = 1; n <= max_n; ++n) {
    const std::string sfx = " (n=" + std::to_string(n) + ")";
    const auto method = n <= kMaxFullConvolutionDegree ? ConvolutionMethod::Full : ConvolutionMethod::CosetReduced;
    const std::string how = n <= kMaxFullConvolutionDegree ? "full" : "coset-reduced";
    const auto& parts = partition_list(n);

    Integer total = 0;
    for (const auto& rho : parts) total += double_coset_size(rho);
    add_flag(r, "sum |H_rho| = (2n)!" + sfx, total == factorial(2 * n), total.str());

    const Rational z = detail::random_generic_point(e);
    const Rational h(hyperoctahedral_order(n));
    add_flag(r, "G * Wg = (2^n n!)^2 unit, " + how + sfx,
             biinvariant_convolve(kappa_power_function(n, z), weingarten_function(n, z), method) == h * h * hecke_unit(n),
             "z=" + to_string(z));

    bool ortho = true;
    for (const auto& a : parts)
      for (const auto& b : parts) {
        const auto prod = biinvariant_convolve(zonal_function(a), zonal_function(b), method);
        const auto want = a == b ? Rational(factorial(2 * n)) / Rational(dim_even(a)) * zonal_function(a)
                                 : Rational(0) * zonal_function(a);
        ortho = ortho && prod == want;
      }
    add_flag(r, "omega orthogonality, " + how + sfx, ortho);

    const std::vector<Rational> all_z(static_cast<size_t>(n), z);
    bool forward = true;
    std::vector<Rational> c;
    for (const auto& lambda : parts) {
      forward = forward && zonal_eval(lambda, all_z) == c_poly(lambda, z);
      c.push_back(c_poly(lambda, z));
    }
    const auto back = power_sums_from_zonal(n, c);
    bool backward = true;
    for (size_t i = 0; i < parts.size(); ++i) backward = backward && back[i] == pow(z, parts[i].length());
    add_flag(r, "Z_lambda(z,z,...) = C_lambda(z)" + sfx, forward, "z=" + to_string(z));
    add_flag(r, "z^l(rho) from C_lambda(z)" + sfx, backward, "z=" + to_string(z));

    bool hf = true;
    for (int trial = 0; trial < 10; ++trial) {
      ExactMatrix a(2 * n, 2 * n);
      for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) a(i, j) = a(j, i) = detail::random_rational(e, 9, 7);
      const Rational alpha = detail::random_rational(e, 9, 7);
      const Rational ref = hafnian_matching(a, alpha);
      hf = hf && hafnian_expand(a, alpha) == ref && hafnian_permsum(a, alpha, CycleVariant::P) == ref &&
           hafnian_permsum(a, alpha, CycleVariant::Q) == ref;
    }
    add_flag(r, "four hafnian routes agree" + sfx, hf);

    ExactMatrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = detail::random_rational(e, 9, 7);
    const Rational alpha = detail::random_rational(e, 9, 7);
    add_flag(r, "per_alpha(M) = hf_alpha(embed(M))" + sfx, alpha_permanent(m, alpha) == hafnian_expand(embed_permanent(m), alpha));
  }
  return r;
}

struct MonteCarloCheck {
  SampleStats stats;
  bool pass;
};

struct MonteCarloReport {
  std::vector<MonteCarloCheck> checks;
  double max_abs_z = 0;
  std::size_t above_three = 0;
  /// Every |z| < 5 and at most 5% of checks above |z| = 3.
  bool pass = false;
};

/// The Monte Carlo comparison suite.
inline MonteCarloReport validate_montecarlo(std::size_t samples, std::uint64_t seed, unsigned threads = 0) {
  MonteCarloReport rep;
  std::vector<SampleStats> all;
  std::uint64_t stream = 0;
  auto run = [&](const std::vector<MomentDescriptor>& specs, const WishartParams& p, WishartSampler sampler) {
    for (auto& s : estimate(specs, p, samples, {seed, stream++}, {sampler, threads})) all.push_back(std::move(s));
  };

  Engine e = make_engine({seed, 0x5EED});
  const MatrixF s3 = detail::random_spd(3, e);
  std::vector<MomentDescriptor> means;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) means.push_back(entries_descriptor({i, j}, false));

  run(means, WishartParams(Rational(5, 2), s3), WishartSampler::Bartlett);
  run(means, WishartParams(Rational(3), s3), WishartSampler::OuterProducts);
  run({entries_descriptor({0, 1, 2, 2}, false), entries_descriptor({0, 0, 1, 1}, false),
       entries_descriptor({0, 1, 0, 1}, false), entries_descriptor({1, 2, 0, 2}, false), trace_power_descriptor(3, false)},
      WishartParams(Rational(5, 2), s3), WishartSampler::Automatic);
  run({entries_descriptor({0, 0}, true), entries_descriptor({0, 0, 1, 1}, true)},
      WishartParams(Rational(6), detail::random_spd(2, e)), WishartSampler::Automatic);

  const std::vector<HaarDescriptor> haar = {{{0, 0}, {0, 0}},
                                            {{0, 1}, {2, 2}},
                                            {{0, 0, 0, 0}, {0, 0, 0, 0}},
                                            {{0, 0, 1, 1}, {0, 0, 1, 1}},
                                            {{0, 0, 1, 1}, {0, 1, 0, 1}},
                                            {{0, 0, 1, 1}, {0, 0, 0, 0}}};
  for (auto& s : estimate_haar(haar, 3, samples, {seed, stream++}, threads)) all.push_back(std::move(s));

  bool all_below_five = true;
  for (auto& s : all) {
    const double z = std::abs(s.zscore);
    rep.max_abs_z = std::max(rep.max_abs_z, z);
    if (z > 3) ++rep.above_three;
    all_below_five = all_below_five && z < 5;
    rep.checks.push_back({s, z < 5});
  }
  rep.pass = all_below_five && static_cast<double>(rep.above_three) <= 0.05 * static_cast<double>(all.size());
  return rep;
}

}  // namespace ww
