#pragma once

// Samplers for the Wishart and Haar-orthogonal ensembles, and a streaming
// estimator that compares sample means with the exact moment formulas.
//
// Samples are drawn in fixed-size chunks, each with its own generator seeded
// from (seed, stream, chunk). Chunk statistics are merged pairwise in chunk
// order, so results are bit-identical for any thread count.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ww/error.hpp"
#include "ww/parallel.hpp"
#include "ww/wishart.hpp"

namespace ww {

inline constexpr size_t kMonteCarloChunk = 8192;
inline constexpr size_t kMinSampleCount = 1000;
inline constexpr double kMaxConditionNumber = 1e12;

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

using Engine = std::mt19937_64;

/// Generator for one chunk of one stream.
inline Engine make_engine(const RngSpec& rng, std::uint64_t chunk = 0) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(rng.seed), hi(rng.seed), lo(rng.stream), hi(rng.stream), lo(chunk), hi(chunk)};
  return Engine(seq);
}

enum class WishartSampler {
  /// Bartlett when 2 beta > d - 1, otherwise the sum of outer products.
  Automatic,
  /// Lower-triangular factor with chi diagonal; needs 2 beta > d - 1.
  Bartlett,
  /// X_1 X_1^t + ... + X_p X_p^t with X_i ~ N(0, sigma / 2); needs 2 beta integer.
  OuterProducts,
};

inline std::string to_string(WishartSampler s) {
  switch (s) {
    case WishartSampler::Bartlett: return "bartlett";
    case WishartSampler::OuterProducts: return "outer-products";
    default: return "automatic";
  }
}

inline WishartSampler resolve_sampler(const WishartParams& params, WishartSampler s) {
  const Rational two_beta = 2 * params.beta();
  const bool bartlett_ok = two_beta > params.d() - 1;
  const bool integer_ok = is_integer(two_beta);
  if (s == WishartSampler::Automatic) return bartlett_ok ? WishartSampler::Bartlett : WishartSampler::OuterProducts;
  if (s == WishartSampler::Bartlett && !bartlett_ok) throw DomainError("Bartlett sampling needs 2 beta > d - 1");
  if (s == WishartSampler::OuterProducts && !integer_ok) throw DomainError("outer-product sampling needs 2 beta integer");
  return s;
}

/// One draw of W with E[W] = beta sigma.
inline MatrixF sample_wishart(const WishartParams& params, Engine& engine,
                              WishartSampler sampler = WishartSampler::Automatic) {
  const int d = params.d();
  const MatrixF l = params.sigma_chol() * std::sqrt(0.5);  // chol(sigma / 2)
  std::normal_distribution<double> normal(0.0, 1.0);
  if (resolve_sampler(params, sampler) == WishartSampler::Bartlett) {
    MatrixF a = MatrixF::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      // A_ii^2 ~ chi^2 with 2 beta - i degrees of freedom = 2 Gamma(beta - i/2).
      std::gamma_distribution<double> g(params.beta_f() - 0.5 * i, 1.0);
      a(i, i) = std::sqrt(2.0 * g(engine));
      for (int j = 0; j < i; ++j) a(i, j) = normal(engine);
    }
    const MatrixF la = l * a;
    MatrixF w = la * la.transpose();
    return (w + w.transpose()) / 2;
  }
  const int p = static_cast<int>(to_double(2 * params.beta()));
  MatrixF w = MatrixF::Zero(d, d);
  Eigen::VectorXd z(d);
  for (int k = 0; k < p; ++k) {
    for (int i = 0; i < d; ++i) z(i) = normal(engine);
    const Eigen::VectorXd x = l * z;
    w.noalias() += x * x.transpose();
  }
  return w;
}

inline MatrixF sample_wishart(const WishartParams& params, const RngSpec& rng,
                              WishartSampler sampler = WishartSampler::Automatic) {
  Engine e = make_engine(rng);
  return sample_wishart(params, e, sampler);
}

/// Haar-distributed orthogonal N x N matrix: QR of a Gaussian matrix with
/// the columns of Q rescaled by sign(R_ii).
inline MatrixF sample_haar_orthogonal(int big_n, Engine& engine) {
  if (big_n < 1) throw InvalidArgument("Haar sampling needs N >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixF g(big_n, big_n);
  for (int i = 0; i < big_n; ++i)
    for (int j = 0; j < big_n; ++j) g(i, j) = normal(engine);
  Eigen::HouseholderQR<MatrixF> qr(g);
  MatrixF q = qr.householderQ() * MatrixF::Identity(big_n, big_n);
  const MatrixF r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < big_n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

inline MatrixF sample_haar_orthogonal(int big_n, const RngSpec& rng) {
  Engine e = make_engine(rng);
  return sample_haar_orthogonal(big_n, e);
}

/// Streaming mean and variance (Welford); merge() combines two disjoint
/// sample sets.
struct RunningStats {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  static RunningStats merge(const RunningStats& a, const RunningStats& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    RunningStats out;
    out.count = a.count + b.count;
    const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
    const double delta = b.mean - a.mean;
    out.mean = a.mean + delta * nb / static_cast<double>(out.count);
    out.m2 = a.m2 + b.m2 + delta * delta * na * nb / static_cast<double>(out.count);
    return out;
  }

  /// Standard error of the mean from the sample standard deviation.
  double standard_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

struct SampleStats {
  std::string label;
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  /// (mean - target) / std_error; 0 when std_error is 0 and the mean is exact.
  double zscore = 0.0;
  std::size_t rejected = 0;
};

namespace detail {

inline SampleStats finish(std::string label, const RunningStats& s, double target, std::size_t rejected) {
  SampleStats out;
  out.label = std::move(label);
  out.count = s.count;
  out.mean = s.mean;
  out.std_error = s.standard_error();
  out.target = target;
  out.rejected = rejected;
  const double diff = s.mean - target;
  if (out.std_error > 0) out.zscore = diff / out.std_error;
  else out.zscore = diff == 0 ? 0.0 : std::copysign(INFINITY, diff);
  return out;
}

// Pairwise merge of chunk results in index order.
inline RunningStats merge_range(const std::vector<RunningStats>& v, size_t lo, size_t hi) {
  if (hi - lo == 1) return v[lo];
  const size_t mid = lo + (hi - lo) / 2;
  return RunningStats::merge(merge_range(v, lo, mid), merge_range(v, mid, hi));
}

inline void check_sample_count(std::size_t count) {
  if (count < kMinSampleCount)
    throw InvalidArgument("need at least " + std::to_string(kMinSampleCount) + " samples, got " + std::to_string(count));
}

}  // namespace detail

/// A scalar statistic of W (or W^{-1}) together with its exact expectation.
struct MomentDescriptor {
  std::string label;
  bool inverse = false;
  /// Degree in the entries of W^{+-1}; governs the inverse-moment guard.
  int degree = 1;
  std::function<double(const MatrixF&)> statistic;
  std::function<double(const WishartParams&)> target;
};

/// prod_t X_{k_{2t}, k_{2t+1}} with X = W or W^{-1}.
inline MomentDescriptor entries_descriptor(std::vector<int> indices, bool inverse) {
  MomentDescriptor d;
  std::string lbl = inverse ? "E[W^{" : "E[W_{";
  for (size_t i = 0; i < indices.size(); ++i) {
    if (i && i % 2 == 0) lbl += inverse ? "} W^{" : "} W_{";
    lbl += std::to_string(indices[i] + 1);
  }
  d.label = lbl + "}]";
  d.inverse = inverse;
  d.degree = static_cast<int>(indices.size()) / 2;
  d.statistic = [indices](const MatrixF& x) {
    double p = 1.0;
    for (size_t t = 0; t + 1 < indices.size(); t += 2) p *= x(indices[t], indices[t + 1]);
    return p;
  };
  d.target = [indices, inverse](const WishartParams& p) {
    return inverse ? inverse_moment(p, indices) : moment(p, indices);
  };
  return d;
}

/// (tr X)^n.
inline MomentDescriptor trace_power_descriptor(int n, bool inverse) {
  MomentDescriptor d;
  d.label = std::string(inverse ? "E[(tr W^-1)^" : "E[(tr W)^") + std::to_string(n) + "]";
  d.inverse = inverse;
  d.degree = n;
  d.statistic = [n](const MatrixF& x) { return std::pow(x.trace(), n); };
  d.target = [n, inverse](const WishartParams& p) { return trace_power_moment(p, n, inverse); };
  return d;
}

/// p_mu(X) = prod_i tr(X^{mu_i}).
inline MomentDescriptor power_sum_descriptor(Partition mu, bool inverse) {
  MomentDescriptor d;
  d.label = std::string(inverse ? "E[p_" : "E[p_") + to_string(mu) + (inverse ? "(W^-1)]" : "(W)]");
  d.inverse = inverse;
  d.degree = mu.weight();
  d.statistic = [mu](const MatrixF& x) { return power_sum_product(x, mu); };
  d.target = [mu, inverse](const WishartParams& p) { return power_trace_moment(p, mu, inverse); };
  return d;
}

/// prod_i tr(X s_i) for symmetric s_i.
inline MomentDescriptor trace_product_descriptor(std::vector<MatrixF> s, bool inverse) {
  MomentDescriptor d;
  d.label = std::string(inverse ? "E[prod tr(W^-1 s_i)]" : "E[prod tr(W s_i)]") + " n=" + std::to_string(s.size());
  d.inverse = inverse;
  d.degree = static_cast<int>(s.size());
  d.statistic = [s](const MatrixF& x) {
    double p = 1.0;
    for (const auto& m : s) p *= (x * m).trace();
    return p;
  };
  d.target = [s, inverse](const WishartParams& p) {
    if (!inverse) return trace_product_moment(p, s);
    const int n = static_cast<int>(s.size());
    return mixed_trace_moment(p, r_to_tg(Permutation::identity(n), std::vector<int>(static_cast<size_t>(n), 1)), s, true);
  };
  return d;
}

struct EstimateOptions {
  WishartSampler sampler = WishartSampler::Automatic;
  unsigned threads = 0;  ///< 0 selects default_threads()
};

/// Monte Carlo estimates of every descriptor from one stream of samples.
/// Inverse descriptors of degree n require gamma > n so that the sample
/// variance is finite; samples with condition number above 1e12 are skipped
/// for inverse descriptors and counted in `rejected`.
inline std::vector<SampleStats> estimate(const std::vector<MomentDescriptor>& specs, const WishartParams& params,
                                         std::size_t sample_count, const RngSpec& rng,
                                         const EstimateOptions& options = {}) {
  detail::check_sample_count(sample_count);
  bool any_inverse = false;
  for (const auto& s : specs) {
    if (!s.inverse) continue;
    any_inverse = true;
    if (params.gamma() <= s.degree)
      throw DomainError("Monte Carlo inverse moment of degree " + std::to_string(s.degree) +
                        " needs gamma > " + std::to_string(s.degree) + ", got gamma = " + to_string(params.gamma()));
  }
  const WishartSampler sampler = resolve_sampler(params, options.sampler);
  std::vector<double> targets;
  for (const auto& s : specs) targets.push_back(s.target(params));

  const size_t chunks = (sample_count + kMonteCarloChunk - 1) / kMonteCarloChunk;
  const size_t k = specs.size();
  std::vector<RunningStats> partial(chunks * k);
  std::vector<std::size_t> rejected(chunks, 0);
  parallel_for(chunks, options.threads ? options.threads : default_threads(), [&](size_t c) {
    Engine engine = make_engine(rng, c);
    const size_t begin = c * kMonteCarloChunk;
    const size_t end = std::min(sample_count, begin + kMonteCarloChunk);
    for (size_t i = begin; i < end; ++i) {
      const MatrixF w = sample_wishart(params, engine, sampler);
      MatrixF w_inv;
      bool inverse_ok = false;
      if (any_inverse) {
        Eigen::SelfAdjointEigenSolver<MatrixF> eig(w, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
        if (lo > 0 && hi / lo <= kMaxConditionNumber) {
          Eigen::LLT<MatrixF> llt(w);
          if (llt.info() == Eigen::Success) {
            w_inv = llt.solve(MatrixF::Identity(w.rows(), w.cols()));
            inverse_ok = true;
          }
        }
        if (!inverse_ok) ++rejected[c];
      }
      for (size_t s = 0; s < k; ++s) {
        if (specs[s].inverse) {
          if (inverse_ok) partial[c * k + s].add(specs[s].statistic(w_inv));
        } else {
          partial[c * k + s].add(specs[s].statistic(w));
        }
      }
    }
  });

  std::size_t total_rejected = 0;
  for (auto r : rejected) total_rejected += r;
  std::vector<SampleStats> out;
  for (size_t s = 0; s < k; ++s) {
    std::vector<RunningStats> column;
    for (size_t c = 0; c < chunks; ++c) column.push_back(partial[c * k + s]);
    out.push_back(detail::finish(specs[s].label, detail::merge_range(column, 0, chunks), targets[s],
                                 specs[s].inverse ? total_rejected : 0));
  }
  return out;
}

/// prod_t O_{i_t j_t} for Haar O in O(N), with the exact target.
struct HaarDescriptor {
  std::vector<int> i;
  std::vector<int> j;

  std::string label() const {
    std::string s = "E[";
    for (size_t t = 0; t < i.size(); ++t) s += "O_{" + std::to_string(i[t] + 1) + std::to_string(j[t] + 1) + "}";
    return s + "]";
  }
};

inline std::vector<SampleStats> estimate_haar(const std::vector<HaarDescriptor>& specs, int big_n,
                                              std::size_t sample_count, const RngSpec& rng, unsigned threads = 0) {
  detail::check_sample_count(sample_count);
  std::vector<double> targets;
  for (const auto& s : specs) targets.push_back(to_double(haar_moment(s.i, s.j, big_n)));
  const size_t chunks = (sample_count + kMonteCarloChunk - 1) / kMonteCarloChunk;
  const size_t k = specs.size();
  std::vector<RunningStats> partial(chunks * k);
  parallel_for(chunks, threads ? threads : default_threads(), [&](size_t c) {
    Engine engine = make_engine(rng, c);
    const size_t begin = c * kMonteCarloChunk;
    const size_t end = std::min(sample_count, begin + kMonteCarloChunk);
    for (size_t n = begin; n < end; ++n) {
      const MatrixF o = sample_haar_orthogonal(big_n, engine);
      for (size_t s = 0; s < k; ++s) {
        double p = 1.0;
        for (size_t t = 0; t < specs[s].i.size(); ++t) p *= o(specs[s].i[t], specs[s].j[t]);
        partial[c * k + s].add(p);
      }
    }
  });
  std::vector<SampleStats> out;
  for (size_t s = 0; s < k; ++s) {
    std::vector<RunningStats> column;
    for (size_t c = 0; c < chunks; ++c) column.push_back(partial[c * k + s]);
    out.push_back(detail::finish(specs[s].label(), detail::merge_range(column, 0, chunks), targets[s], 0));
  }
  return out;
}

}  // namespace ww
