// Acceptance run: one PASS/FAIL line per criterion, each with its runtime bound.
// Closed forms below are written out independently of the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ww/hafnian.hpp"
#include "ww/montecarlo.hpp"
#include "ww/weingarten.hpp"
#include "ww/wishart.hpp"

using namespace ww;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::mt19937_64& gen() {
  static std::mt19937_64 g(777);
  return g;
}

Rational random_rational(int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  return Rational(num(gen()), den(gen()));
}

// Nonzero rational whose denominator exceeds 2, so no integer or half-integer pole is hit.
Rational generic_rational() {
  for (;;) {
    std::uniform_int_distribution<int> num(-200, 200), den(3, 29);
    Rational q(num(gen()), den(gen()));
    if (q != 0 && !is_integer(2 * q)) return q;
  }
}

MatrixF random_spd(int d) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixF x(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = g(gen());
  MatrixF s = x * x.transpose() / d + 0.5 * MatrixF::Identity(d, d);
  return (s + s.transpose()) / 2;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

void for_each_tuple(int d, int len, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> k(static_cast<size_t>(len), 0);
  for (;;) {
    f(k);
    int p = len - 1;
    while (p >= 0 && ++k[static_cast<size_t>(p)] == d) k[static_cast<size_t>(p--)] = 0;
    if (p < 0) return;
  }
}

double ptr(const MatrixF& x, std::vector<int> rho) {
  double out = 1;
  for (int r : rho) {
    MatrixF m = MatrixF::Identity(x.rows(), x.cols());
    for (int t = 0; t < r; ++t) m = m * x;
    out *= m.trace();
  }
  return out;
}

// ---------------------------------------------------------------- 1

Outcome golden_weingarten() {
  Outcome o;
  for (int t = 0; t < 10; ++t) {
    const Rational z = generic_rational();
    const bool ok = weingarten(Partition({1}), z) == 1 / z &&
                    weingarten(Partition({2}), z) == -1 / (z * (z + 2) * (z - 1)) &&
                    weingarten(Partition({1, 1}), z) == (z + 1) / (z * (z + 2) * (z - 1));
    if (!ok) o = {false, "mismatch at z = " + to_string(z)};
  }
  if (o.pass) o.detail = "10 random z";
  return o;
}

// ---------------------------------------------------------------- 2

Outcome golden_tilde_weingarten() {
  Outcome o;
  for (int t = 0; t < 5; ++t) {
    Rational g = generic_rational();
    if (g < 0) g = -g;
    const Rational d2 = g * (g - 1) * (2 * g + 1);
    const Rational u3 = g * (g - 1) * (g - 2) * (g + 1) * (2 * g + 1);
    const Rational u4 = g * (g - 1) * (g - 2) * (g - 3) * (2 * g - 1) * (g + 1) * (2 * g + 1) * (2 * g + 3);
    const std::vector<std::pair<std::vector<int>, Rational>> want = {
        {{2}, 1 / d2},
        {{1, 1}, (2 * g - 1) / d2},
        {{3}, 1 / u3},
        {{2, 1}, (g - 1) / u3},
        {{1, 1, 1}, (2 * g * g - 3 * g - 1) / u3},
        {{4}, (5 * g - 3) / u4},
        {{3, 1}, 4 * g * (g - 2) / u4},
        {{2, 2}, (2 * g * g - 5 * g + 9) / u4},
        {{2, 1, 1}, (4 * g * g * g - 12 * g * g + 3 * g + 3) / u4},
        {{1, 1, 1, 1}, (g + 1) * (2 * g - 3) * (4 * g * g - 12 * g + 1) / u4}};
    for (const auto& [rho, v] : want)
      if (tilde_weingarten(Partition(rho), g) != v)
        o = {false, "~Wg" + to_string(Partition(rho)) + " at gamma = " + to_string(g)};
  }
  if (o.pass) o.detail = "n = 2, 3, 4 at 5 random gamma";
  return o;
}

// ---------------------------------------------------------------- 3

Outcome golden_moments() {
  double worst = 0;
  int checks = 0;
  auto check = [&](double got, double want) {
    worst = std::max(worst, rel(got, want));
    ++checks;
  };
  for (int d : {2, 3})
    for (int rep = 0; rep < 2; ++rep) {
      const Rational beta = d == 2 ? Rational(47, 8) : Rational(29, 4);
      const WishartParams p(beta, random_spd(d));
      const MatrixF& s = p.sigma();
      const MatrixF si = s.inverse();
      const double b = to_double(beta), g = b - (d + 1) / 2.0;
      const double d2 = g * (g - 1) * (2 * g + 1);
      const double u3 = g * (g - 1) * (g - 2) * (g + 1) * (2 * g + 1);
      const double u4 = u3 * (g - 3) * (2 * g - 1) * (2 * g + 3);

      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) check(moment(p, {i, j}), b * s(i, j));
      for_each_tuple(d, 4, [&](const std::vector<int>& k) {
        check(moment(p, k), b * b * s(k[0], k[1]) * s(k[2], k[3]) +
                                b / 2 * (s(k[0], k[2]) * s(k[1], k[3]) + s(k[0], k[3]) * s(k[1], k[2])));
      });

      const MatrixF w2 = (b * b + b / 2) * s * s + b / 2 * s.trace() * s;
      const MatrixF wm2 = (2 * g * si * si + si.trace() * si) / d2;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double e2 = 0, em2 = 0;
          for (int c = 0; c < d; ++c) {
            e2 += moment(p, {i, c, c, j});
            em2 += inverse_moment(p, {i, c, c, j});
          }
          check(e2, w2(i, j));
          check(em2, wm2(i, j));
        }

      // Entrywise assembly of p_mu(W^{+-1}) as a sum over cycle index tuples.
      auto assemble = [&](std::vector<int> mu, bool inverse) {
        int n = 0;
        for (int r : mu) n += r;
        double total = 0;
        for_each_tuple(d, n, [&](const std::vector<int>& a) {
          std::vector<int> idx;
          int start = 0;
          for (int r : mu) {
            for (int t = 0; t < r; ++t) {
              idx.push_back(a[static_cast<size_t>(start + t)]);
              idx.push_back(a[static_cast<size_t>(start + (t + 1) % r)]);
            }
            start += r;
          }
          total += inverse ? inverse_moment(p, idx) : moment(p, idx);
        });
        return total;
      };
      const double a3 = ptr(s, {3}), a21 = ptr(s, {2, 1}), a111 = ptr(s, {1, 1, 1});
      const double i3 = ptr(si, {3}), i21 = ptr(si, {2, 1}), i111 = ptr(si, {1, 1, 1});
      const std::vector<std::pair<std::vector<int>, double>> fwd = {
          {{3}, b / 2 * (2 * b * b + 3 * b + 2) * a3 + 0.75 * b * (2 * b + 1) * a21 + b / 4 * a111},
          {{2, 1}, b * (2 * b + 1) * a3 + b / 2 * (2 * b * b + b + 2) * a21 + b * b / 2 * a111},
          {{1, 1, 1}, 2 * b * a3 + 3 * b * b * a21 + b * b * b * a111}};
      const std::vector<std::pair<std::vector<int>, double>> inv = {
          {{3}, (2 * g * g * i3 + 3 * g * i21 + i111) / u3},
          {{2, 1}, (4 * g * i3 + 2 * (g * g - g + 1) * i21 + (g - 1) * i111) / u3},
          {{1, 1, 1}, (8 * i3 + 6 * (g - 1) * i21 + (2 * g * g - 3 * g - 1) * i111) / u3}};
      for (const auto& [mu, want] : fwd) {
        check(assemble(mu, false), want);
        check(power_trace_moment(p, Partition(mu), false), want);
      }
      for (const auto& [mu, want] : inv) {
        check(assemble(mu, true), want);
        check(power_trace_moment(p, Partition(mu), true), want);
      }

      const double tr4 = 6 * b * ptr(s, {4}) + 8 * b * b * ptr(s, {3, 1}) + 3 * b * b * ptr(s, {2, 2}) +
                         6 * b * b * b * ptr(s, {2, 1, 1}) + b * b * b * b * ptr(s, {1, 1, 1, 1});
      const double itr4 = 48 * (5 * g - 3) * ptr(si, {4}) + 128 * g * (g - 2) * ptr(si, {3, 1}) +
                          12 * (2 * g * g - 5 * g + 9) * ptr(si, {2, 2}) +
                          12 * (4 * g * g * g - 12 * g * g + 3 * g + 3) * ptr(si, {2, 1, 1}) +
                          (g + 1) * (2 * g - 3) * (4 * g * g - 12 * g + 1) * ptr(si, {1, 1, 1, 1});
      check(assemble({1, 1, 1, 1}, false), tr4);
      check(trace_power_moment(p, 4, false), tr4);
      check(u4 * assemble({1, 1, 1, 1}, true), itr4);
      check(u4 * trace_power_moment(p, 4, true), itr4);
    }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d comparisons, max rel err %.2e", checks, worst);
  return {worst <= 1e-10, buf};
}

// ---------------------------------------------------------------- 4

Outcome identity_suite() {
  for (int n = 1; n <= 4; ++n) {
    const auto method = n <= 3 ? ConvolutionMethod::Full : ConvolutionMethod::CosetReduced;
    const auto& parts = partition_list(n);
    const Rational h(hyperoctahedral_order(n));
    const Rational z = generic_rational();

    if (biinvariant_convolve(kappa_power_function(n, z), weingarten_function(n, z), method) != h * h * hecke_unit(n))
      return {false, "convolution identity fails at n = " + std::to_string(n)};
    for (const auto& a : parts)
      for (const auto& b : parts) {
        const auto prod = biinvariant_convolve(zonal_function(a), zonal_function(b), method);
        const auto want = a == b ? Rational(factorial(2 * n)) / Rational(dim_even(a)) * zonal_function(a)
                                 : Rational(0) * zonal_function(a);
        if (prod != want) return {false, "orthogonality fails at n = " + std::to_string(n)};
      }

    // Z_lambda at p_r = z for every r equals C_lambda(z), and back.
    const std::vector<Rational> ps(static_cast<size_t>(n), z);
    std::vector<Rational> c;
    for (const auto& lambda : parts) {
      if (zonal_eval(lambda, ps) != c_poly(lambda, z)) return {false, "Z_lambda(z) != C_lambda(z)"};
      c.push_back(c_poly(lambda, z));
    }
    const auto back = power_sums_from_zonal(n, c);
    for (size_t k = 0; k < parts.size(); ++k)
      if (back[k] != pow(z, parts[k].length())) return {false, "inverse specialization fails"};

    Integer total = 0;
    for (const auto& rho : parts) total += double_coset_size(rho);
    Integer fact = 1;
    for (int k = 2; k <= 2 * n; ++k) fact *= k;
    if (total != fact) return {false, "double coset sizes do not sum to (2n)!"};
  }
  return {true, "n <= 3 full, n = 4 coset-reduced"};
}

// ---------------------------------------------------------------- 5

Rational det3(const ExactMatrix& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Outcome hafnian_equivalence() {
  for (int size = 2; size <= 10; size += 2)
    for (int t = 0; t < 100; ++t) {
      ExactMatrix a(size, size);
      for (int i = 0; i < size; ++i)
        for (int j = i; j < size; ++j) a(i, j) = a(j, i) = random_rational(9, 7);
      const Rational alpha = random_rational(9, 7);
      const Rational ref = hafnian_matching(a, alpha);
      if (hafnian_expand(a, alpha) != ref || hafnian_permsum(a, alpha, CycleVariant::P) != ref ||
          hafnian_permsum(a, alpha, CycleVariant::Q) != ref)
        return {false, "routes disagree at size " + std::to_string(size)};
    }
  for (int t = 0; t < 100; ++t) {
    ExactMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = random_rational(9, 7);
    const Rational alpha = t % 4 == 0 ? Rational(-1) : random_rational(9, 7);
    if (alpha_permanent(m, alpha) != hafnian_expand(embed_permanent(m), alpha)) return {false, "embedding fails"};
    if (alpha_permanent(m, Rational(-1)) != -det3(m)) return {false, "per_{-1} != -det"};
  }
  return {true, "500 symmetric matrices, 100 permanents"};
}

// ---------------------------------------------------------------- 6

Outcome round_trip() {
  const MatrixF s = random_spd(3);
  const MatrixF si = s.inverse();
  double worst = 0;
  for (const Rational& gamma : {Rational(7, 2), Rational(5)}) {
    const WishartParams p(gamma + 2, s);
    for (int n = 1; n <= 3; ++n) {
      const auto matchings = enumerate_matchings(n);
      for_each_tuple(3, 2 * n, [&](const std::vector<int>& k) {
        double lhs = 1;
        for (int t = 0; t < n; ++t) lhs *= si(k[static_cast<size_t>(2 * t)], k[static_cast<size_t>(2 * t + 1)]);
        double rhs = 0;
        for (const Matching& m : matchings) {
          std::vector<int> seq;
          for (int v : m.sequence()) seq.push_back(k[static_cast<size_t>(v)]);
          rhs += to_double(pow(-2 * gamma, kappa(m))) * inverse_moment(p, seq);
        }
        rhs *= std::ldexp(n % 2 ? -1.0 : 1.0, -n);
        worst = std::max(worst, rel(rhs, lhs));
      });
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max rel err %.2e", worst);
  return {worst <= 1e-9, buf};
}

// ---------------------------------------------------------------- 7

Outcome monte_carlo() {
  constexpr std::size_t kSamples = 1000000;
  constexpr std::uint64_t kSeed = 2024;
  std::vector<double> zs;
  std::size_t rejected = 0;
  std::uint64_t stream = 0;
  auto run = [&](const std::vector<MomentDescriptor>& specs, const std::vector<double>& targets, const WishartParams& p,
                 WishartSampler sampler) {
    const auto st = estimate(specs, p, kSamples, {kSeed, stream++}, {sampler, 0});
    for (size_t k = 0; k < st.size(); ++k) {
      zs.push_back((st[k].mean - targets[k]) / st[k].std_error);
      rejected += st[k].rejected;
    }
  };

  const MatrixF s3 = random_spd(3);
  for (auto [beta, sampler] : {std::pair{Rational(5, 2), WishartSampler::Bartlett}, std::pair{Rational(3), WishartSampler::OuterProducts}}) {
    std::vector<MomentDescriptor> specs;
    std::vector<double> targets;
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        specs.push_back(entries_descriptor({i, j}, false));
        targets.push_back(to_double(beta) * s3(i, j));
      }
    run(specs, targets, WishartParams(beta, s3), sampler);
  }
  {
    const double b = 2.5;
    std::vector<MomentDescriptor> specs;
    std::vector<double> targets;
    for (const std::vector<int>& k : std::vector<std::vector<int>>{{0, 1, 2, 2}, {0, 0, 1, 1}, {0, 1, 0, 1}, {1, 2, 0, 2}}) {
      specs.push_back(entries_descriptor(k, false));
      targets.push_back(b * b * s3(k[0], k[1]) * s3(k[2], k[3]) +
                        b / 2 * (s3(k[0], k[2]) * s3(k[1], k[3]) + s3(k[0], k[3]) * s3(k[1], k[2])));
    }
    specs.push_back(trace_power_descriptor(3, false));
    targets.push_back(2 * b * ptr(s3, {3}) + 3 * b * b * ptr(s3, {2, 1}) + b * b * b * ptr(s3, {1, 1, 1}));
    run(specs, targets, WishartParams(Rational(5, 2), s3), WishartSampler::Automatic);
  }
  {
    const MatrixF s2 = random_spd(2);
    const MatrixF si = s2.inverse();
    const double g = 6 - 1.5;
    run({entries_descriptor({0, 0}, true), entries_descriptor({0, 0, 1, 1}, true)},
        {si(0, 0) / g, ((2 * g - 1) * si(0, 0) * si(1, 1) + 2 * si(0, 1) * si(0, 1)) / (g * (g - 1) * (2 * g + 1))},
        WishartParams(Rational(6), s2), WishartSampler::Automatic);
  }
  {
    const std::vector<HaarDescriptor> specs = {{{0, 0}, {0, 0}},         {{0, 1}, {2, 2}},
                                               {{0, 0, 0, 0}, {0, 0, 0, 0}}, {{0, 0, 1, 1}, {0, 0, 1, 1}},
                                               {{0, 0, 1, 1}, {0, 1, 0, 1}}, {{0, 0, 1, 1}, {0, 0, 0, 0}}};
    const std::vector<double> targets = {1.0 / 3, 0.0, 1.0 / 5, 4.0 / 30, -1.0 / 30, 2.0 / 30};
    const auto st = estimate_haar(specs, 3, kSamples, {kSeed, stream++});
    for (size_t k = 0; k < st.size(); ++k) zs.push_back((st[k].mean - targets[k]) / st[k].std_error);
  }

  double max_z = 0;
  std::size_t above3 = 0;
  for (double z : zs) {
    max_z = std::max(max_z, std::abs(z));
    above3 += std::abs(z) > 3 ? 1 : 0;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu checks at 1e6 samples, max |z| %.3f, %zu above 3, %zu rejected", zs.size(), max_z,
                above3, rejected);
  const bool ok = zs.size() >= 20 && max_z < 5 && static_cast<double>(above3) <= 0.05 * static_cast<double>(zs.size());
  return {ok, buf};
}

// ---------------------------------------------------------------- 8

Outcome combinatorial_constants() {
  const Rational omega[3][3] = {{1, 1, 1}, {Rational(-1, 4), Rational(1, 6), 1}, {Rational(1, 4), Rational(-1, 2), 1}};
  const auto& parts = partition_list(3);
  for (size_t l = 0; l < 3; ++l)
    for (size_t r = 0; r < 3; ++r)
      if (zonal_spherical(parts[l], parts[r]) != omega[l][r]) return {false, "omega entry " + std::to_string(l) + std::to_string(r)};
  if (dim_even(Partition({3})) != 1 || dim_even(Partition({2, 1})) != 9 || dim_even(Partition({1, 1, 1})) != 5)
    return {false, "f^{2 lambda}"};
  for (int t = 0; t < 10; ++t) {
    const Rational z = random_rational(50, 9);
    if (c_poly(Partition({3}), z) != z * (z + 2) * (z + 4) || c_poly(Partition({2, 1}), z) != z * (z + 2) * (z - 1) ||
        c_poly(Partition({1, 1, 1}), z) != z * (z - 1) * (z - 2))
      return {false, "C_lambda at z = " + to_string(z)};
  }
  return {true, "omega, f^(6), f^(4,2), f^(2,2,2), C_lambda"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "golden Weingarten values", 1, golden_weingarten},
      {2, "golden tilde-Weingarten tables", 30, golden_tilde_weingarten},
      {3, "golden low-degree moments", 60, golden_moments},
      {4, "exact identity suite", 120, identity_suite},
      {5, "hafnian equivalence", 60, hafnian_equivalence},
      {6, "inverse-moment round trip", 30, round_trip},
      {7, "Monte Carlo suite", 600, monte_carlo},
      {8, "degree-3 combinatorial constants", 1, combinatorial_constants},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("[%s] %d %-34s %8.3f s (limit %g s)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.limit_s,
                o.detail.c_str(), in_time ? "" : "  [over time limit]");
    std::fflush(stdout);
  }
  std::printf("%d/8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
