#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rdfc/errors.hpp"
#include "rdfc/rng.hpp"

// Exact small-blocklength simulator of strong coordination: random
// codebooks, a likelihood encoder, the induced sequence-space joint, and
// total-variation distance to the i.i.d. target. Everything is enumerated
// exactly; no sampled TV estimates.

namespace rdfc::synth {

/// Decomposition P_U, P_{X|U}, P_{Y|U} defining one coordination scheme.
struct CoordinationScheme {
  std::vector<double> p_u;
  std::vector<std::vector<double>> p_x_given_u;  // [u][x]
  std::vector<std::vector<double>> p_y_given_u;  // [u][y]

  int u_size() const { return static_cast<int>(p_u.size()); }
  int x_size() const {
    return p_x_given_u.empty() ? 0 : static_cast<int>(p_x_given_u[0].size());
  }
  int y_size() const {
    return p_y_given_u.empty() ? 0 : static_cast<int>(p_y_given_u[0].size());
  }
};

namespace detail {

inline void check_distribution(const std::vector<double>& p,
                               const std::string& label) {
  if (p.empty()) throw std::domain_error(label + ": empty distribution");
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) throw std::domain_error(label + ": negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::domain_error(label + ": probabilities sum to " +
                            std::to_string(sum));
}

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log(v);
  return h;
}

}  // namespace detail

inline void validate(const CoordinationScheme& s) {
  detail::check_distribution(s.p_u, "scheme p_u");
  if (s.p_x_given_u.size() != s.p_u.size() ||
      s.p_y_given_u.size() != s.p_u.size())
    throw std::domain_error("scheme: one conditional row per u required");
  for (std::size_t u = 0; u < s.p_u.size(); ++u) {
    detail::check_distribution(s.p_x_given_u[u], "scheme p_x_given_u row");
    detail::check_distribution(s.p_y_given_u[u], "scheme p_y_given_u row");
    if (s.p_x_given_u[u].size() != s.p_x_given_u[0].size() ||
        s.p_y_given_u[u].size() != s.p_y_given_u[0].size())
      throw std::domain_error("scheme: ragged conditional matrix");
  }
}

/// Single-letter target Q(x, y) = sum_u P(u) P(x|u) P(y|u), row-major x*|Y|+y.
inline std::vector<double> induced_pair_pmf(const CoordinationScheme& s) {
  validate(s);
  const int nx = s.x_size(), ny = s.y_size();
  std::vector<double> q(static_cast<std::size_t>(nx) * ny, 0.0);
  for (std::size_t u = 0; u < s.p_u.size(); ++u) {
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        q[static_cast<std::size_t>(x) * ny + y] +=
            s.p_u[u] * s.p_x_given_u[u][static_cast<std::size_t>(x)] *
            s.p_y_given_u[u][static_cast<std::size_t>(y)];
      }
    }
  }
  return q;
}

/// X-marginal of the single-letter target.
inline std::vector<double> induced_x_pmf(const CoordinationScheme& s) {
  const int nx = s.x_size(), ny = s.y_size();
  const std::vector<double> q = induced_pair_pmf(s);
  std::vector<double> px(static_cast<std::size_t>(nx), 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      px[static_cast<std::size_t>(x)] += q[static_cast<std::size_t>(x) * ny + y];
  return px;
}

struct RateRegionCheck {
  bool ok_rate = false;  // R >= I(X;U)
  bool ok_sum = false;   // R + R0 >= I(X,Y;U)
  double i_xu = 0.0;
  double i_xyu = 0.0;
};

/// @brief Exact membership test of (R, R0) for this decomposition.
///
/// I(X;U) = H(X) - sum_u P(u) H(X|u) and, since X and Y are conditionally
/// independent given U, I(X,Y;U) = H(X,Y) - sum_u P(u) [H(X|u) + H(Y|u)].
inline RateRegionCheck rate_region_check(const CoordinationScheme& s,
                                         double rate, double rate0) {
  validate(s);
  RateRegionCheck r;
  const std::vector<double> q = induced_pair_pmf(s);
  double h_x_cond = 0.0, h_y_cond = 0.0;
  for (std::size_t u = 0; u < s.p_u.size(); ++u) {
    h_x_cond += s.p_u[u] * detail::entropy(s.p_x_given_u[u]);
    h_y_cond += s.p_u[u] * detail::entropy(s.p_y_given_u[u]);
  }
  r.i_xu = detail::entropy(induced_x_pmf(s)) - h_x_cond;
  r.i_xyu = detail::entropy(q) - h_x_cond - h_y_cond;
  r.ok_rate = rate >= r.i_xu;
  r.ok_sum = rate + rate0 >= r.i_xyu;
  return r;
}

/// Random codebook: m0 bins of m codewords, each a length-n sequence over U.
struct Codebook {
  int n = 0, m = 0, m0 = 0;
  std::vector<int> u;  // [(bin*m + codeword)*n + position]

  int symbol(int bin, int codeword, int pos) const {
    return u[(static_cast<std::size_t>(bin) * m + codeword) * n + pos];
  }
};

namespace detail {

inline constexpr std::size_t joint_support_cap = std::size_t{1} << 20;
inline constexpr std::size_t codebook_cap = std::size_t{1} << 26;

inline int draw_symbol(const std::vector<double>& p, double uniform) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (uniform < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

inline std::size_t int_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace detail

/// @brief Draw the codebook i.i.d. from P_U, deterministically from seed.
///
/// Symbols are drawn in (bin, codeword, position) order from a single
/// splitmix64 stream, so identical (scheme, n, m, m0, seed) always give an
/// identical codebook.
inline Codebook build_codebook(const CoordinationScheme& s, int n, int m,
                               int m0, std::uint64_t seed) {
  validate(s);
  if (n < 1 || m < 1 || m0 < 1)
    throw std::domain_error("build_codebook: n, m, m0 must be >= 1");
  const std::size_t total = static_cast<std::size_t>(m0) *
                            static_cast<std::size_t>(m) *
                            static_cast<std::size_t>(n);
  if (total > detail::codebook_cap)
    throw SizeError("build_codebook: codebook of " + std::to_string(total) +
                    " symbols exceeds the cap");
  Codebook cb;
  cb.n = n;
  cb.m = m;
  cb.m0 = m0;
  cb.u.resize(total);
  rng::SplitMix64 gen(seed);
  for (std::size_t i = 0; i < total; ++i)
    cb.u[i] = detail::draw_symbol(s.p_u, gen.next_double());
  return cb;
}

/// @brief Likelihood encoder: P(j | x^n, bin) over the bin's m codewords.
///
/// Proportional to prod_i P(x_i | u_{j,i}); if every codeword in the bin has
/// zero likelihood the encoder falls back to the uniform index, keeping it a
/// total function.
inline std::vector<double> likelihood_encoder_distribution(
    const std::vector<int>& x_seq, const Codebook& cb, int bin,
    const CoordinationScheme& s) {
  if (bin < 0 || bin >= cb.m0)
    throw std::domain_error("likelihood_encoder_distribution: bad bin");
  if (static_cast<int>(x_seq.size()) != cb.n)
    throw std::domain_error(
        "likelihood_encoder_distribution: sequence length mismatch");
  std::vector<double> w(static_cast<std::size_t>(cb.m), 0.0);
  double sum = 0.0;
  for (int j = 0; j < cb.m; ++j) {
    double lik = 1.0;
    for (int i = 0; i < cb.n; ++i) {
      lik *= s.p_x_given_u[static_cast<std::size_t>(cb.symbol(bin, j, i))]
                          [static_cast<std::size_t>(x_seq[static_cast<std::size_t>(i)])];
    }
    w[static_cast<std::size_t>(j)] = lik;
    sum += lik;
  }
  if (sum <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / cb.m);
    return w;
  }
  for (double& v : w) v /= sum;
  return w;
}

/// Distribution over (x^n, y^n) pairs, row-major with x^n as the outer
/// index; the first sequence symbol is the most significant digit.
struct SequenceJoint {
  int n = 0, nx = 0, ny = 0;
  std::size_t x_count = 0, y_count = 0;
  std::vector<double> p;  // [x_index * y_count + y_index]
};

namespace detail {

/// Per-codeword product table: out[seq_index] = prod_i cond[u_i][digit_i]
/// built by extending one digit at a time (most significant first).
inline void sequence_products(const std::vector<std::vector<double>>& cond,
                              const Codebook& cb, int bin, int codeword,
                              int alphabet, std::vector<double>& out,
                              std::vector<double>& scratch) {
  out.assign(1, 1.0);
  for (int i = 0; i < cb.n; ++i) {
    const std::vector<double>& row =
        cond[static_cast<std::size_t>(cb.symbol(bin, codeword, i))];
    scratch.assign(out.size() * static_cast<std::size_t>(alphabet), 0.0);
    for (std::size_t prefix = 0; prefix < out.size(); ++prefix)
      for (int a = 0; a < alphabet; ++a)
        scratch[prefix * static_cast<std::size_t>(alphabet) + a] =
            out[prefix] * row[static_cast<std::size_t>(a)];
    out.swap(scratch);
  }
}

}  // namespace detail

/// @brief Exact induced joint P(x^n, y^n) for one codebook.
///
/// P(x^n, y^n) = P_X^n(x^n) * (1/m0) sum_c sum_j PL(j | x^n, c)
///               * prod_i P_Y(y_i | u_{c,j,i}).
inline SequenceJoint induced_joint_exact(const Codebook& cb,
                                         const CoordinationScheme& s) {
  validate(s);
  SequenceJoint out;
  out.n = cb.n;
  out.nx = s.x_size();
  out.ny = s.y_size();
  out.x_count = detail::int_pow(static_cast<std::size_t>(out.nx), cb.n);
  out.y_count = detail::int_pow(static_cast<std::size_t>(out.ny), cb.n);
  if (out.x_count * out.y_count > detail::joint_support_cap)
    throw SizeError("induced_joint_exact: joint support " +
                    std::to_string(out.x_count * out.y_count) +
                    " exceeds the cap");
  out.p.assign(out.x_count * out.y_count, 0.0);

  // P_X^n as a digit product of the single-letter marginal.
  const std::vector<double> px1 = induced_x_pmf(s);
  std::vector<double> pxn(1, 1.0), scratch;
  for (int i = 0; i < cb.n; ++i) {
    scratch.assign(pxn.size() * static_cast<std::size_t>(out.nx), 0.0);
    for (std::size_t prefix = 0; prefix < pxn.size(); ++prefix)
      for (int a = 0; a < out.nx; ++a)
        scratch[prefix * static_cast<std::size_t>(out.nx) + a] =
            pxn[prefix] * px1[static_cast<std::size_t>(a)];
    pxn.swap(scratch);
  }

  std::vector<double> lik_x, prod_y, tmp;
  std::vector<std::vector<double>> bin_lik(static_cast<std::size_t>(cb.m));
  std::vector<std::vector<double>> bin_y(static_cast<std::size_t>(cb.m));
  const double bin_weight = 1.0 / cb.m0;
  for (int c = 0; c < cb.m0; ++c) {
    for (int j = 0; j < cb.m; ++j) {
      detail::sequence_products(s.p_x_given_u, cb, c, j, out.nx,
                                bin_lik[static_cast<std::size_t>(j)], tmp);
      detail::sequence_products(s.p_y_given_u, cb, c, j, out.ny,
                                bin_y[static_cast<std::size_t>(j)], tmp);
    }
    for (std::size_t x = 0; x < out.x_count; ++x) {
      double denom = 0.0;
      for (int j = 0; j < cb.m; ++j)
        denom += bin_lik[static_cast<std::size_t>(j)][x];
      double* row = out.p.data() + x * out.y_count;
      if (denom <= 0.0) {
        const double unif = bin_weight / cb.m;
        for (int j = 0; j < cb.m; ++j) {
          const double* yrow = bin_y[static_cast<std::size_t>(j)].data();
          for (std::size_t y = 0; y < out.y_count; ++y) row[y] += unif * yrow[y];
        }
      } else {
        for (int j = 0; j < cb.m; ++j) {
          const double w =
              bin_weight * bin_lik[static_cast<std::size_t>(j)][x] / denom;
          if (w == 0.0) continue;
          const double* yrow = bin_y[static_cast<std::size_t>(j)].data();
          for (std::size_t y = 0; y < out.y_count; ++y) row[y] += w * yrow[y];
        }
      }
    }
  }
  for (std::size_t x = 0; x < out.x_count; ++x) {
    const double px = pxn[x];
    double* row = out.p.data() + x * out.y_count;
    for (std::size_t y = 0; y < out.y_count; ++y) row[y] *= px;
  }
  return out;
}

/// i.i.d. product of the single-letter target over n symbols, same layout
/// as SequenceJoint.
inline SequenceJoint product_target(const CoordinationScheme& s, int n) {
  validate(s);
  SequenceJoint out;
  out.n = n;
  out.nx = s.x_size();
  out.ny = s.y_size();
  out.x_count = detail::int_pow(static_cast<std::size_t>(out.nx), n);
  out.y_count = detail::int_pow(static_cast<std::size_t>(out.ny), n);
  if (out.x_count * out.y_count > detail::joint_support_cap)
    throw SizeError("product_target: joint support exceeds the cap");
  const std::vector<double> q1 = induced_pair_pmf(s);
  out.p.assign(out.x_count * out.y_count, 0.0);
  for (std::size_t x = 0; x < out.x_count; ++x) {
    for (std::size_t y = 0; y < out.y_count; ++y) {
      double prod = 1.0;
      std::size_t xd = x, yd = y;
      for (int i = 0; i < n; ++i) {
        const std::size_t xi = xd % static_cast<std::size_t>(out.nx);
        const std::size_t yi = yd % static_cast<std::size_t>(out.ny);
        prod *= q1[xi * static_cast<std::size_t>(out.ny) + yi];
        xd /= static_cast<std::size_t>(out.nx);
        yd /= static_cast<std::size_t>(out.ny);
      }
      out.p[x * out.y_count + y] = prod;
    }
  }
  return out;
}

/// Half the L1 distance between two distributions on the same index set.
inline double tv_distance(const std::vector<double>& p,
                          const std::vector<double>& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("tv_distance: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

/// Marginal over the first coordinate pair (x_1, y_1), as an nx*ny vector.
inline std::vector<double> first_pair_marginal(const SequenceJoint& joint) {
  const std::size_t x_rest = joint.x_count / static_cast<std::size_t>(joint.nx);
  const std::size_t y_rest = joint.y_count / static_cast<std::size_t>(joint.ny);
  std::vector<double> m(
      static_cast<std::size_t>(joint.nx) * static_cast<std::size_t>(joint.ny),
      0.0);
  for (std::size_t x = 0; x < joint.x_count; ++x) {
    const std::size_t x1 = x / x_rest;  // most significant digit
    for (std::size_t y = 0; y < joint.y_count; ++y) {
      const std::size_t y1 = y / y_rest;
      m[x1 * static_cast<std::size_t>(joint.ny) + y1] +=
          joint.p[x * joint.y_count + y];
    }
  }
  return m;
}

/// X-sequence marginal of a SequenceJoint.
inline std::vector<double> x_marginal(const SequenceJoint& joint) {
  std::vector<double> m(joint.x_count, 0.0);
  for (std::size_t x = 0; x < joint.x_count; ++x) {
    const double* row = joint.p.data() + x * joint.y_count;
    for (std::size_t y = 0; y < joint.y_count; ++y) m[x] += row[y];
  }
  return m;
}

struct SynthesisConfig {
  CoordinationScheme scheme;
  int n = 1;
  double rate = 0.0;   // R, nats per symbol
  double rate0 = 0.0;  // R0, nats per symbol
  int trials = 1;
  std::uint64_t seed = 0;
};

struct CodebookSizes {
  int m = 1, m0 = 1;
};

/// M = ceil(e^{n R}), M0 = ceil(e^{n R0}).
inline CodebookSizes codebook_sizes(int n, double rate, double rate0) {
  if (n < 1) throw std::domain_error("codebook_sizes: n must be >= 1");
  if (rate < 0.0 || rate0 < 0.0)
    throw std::domain_error("codebook_sizes: rates must be >= 0");
  const double m = std::ceil(std::exp(n * rate));
  const double m0 = std::ceil(std::exp(n * rate0));
  if (m > 1e9 || m0 > 1e9)
    throw SizeError("codebook_sizes: codebook size overflows the cap");
  return {static_cast<int>(m), static_cast<int>(m0)};
}

struct SynthesisOutcome {
  std::vector<double> tv_per_trial;
  double median_tv = 0.0;
  double mean_tv = 0.0;
  int n = 0;
  double rate = 0.0;
  double rate0 = 0.0;
  int m = 0, m0 = 0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  if (v.size() % 2 == 1) return v[mid];
  return 0.5 * (v[mid - 1] + v[mid]);
}

/// One exact TV evaluation, with the structural checks that hold for every
/// valid run: the induced X-marginal equals P_X^n, and TV cannot grow under
/// marginalization to the first coordinate pair.
inline double one_trial_tv(const CoordinationScheme& s, int n, int m, int m0,
                           std::uint64_t trial_seed,
                           const SequenceJoint& target) {
  const Codebook cb = build_codebook(s, n, m, m0, trial_seed);
  const SequenceJoint induced = induced_joint_exact(cb, s);
  const double tv = tv_distance(induced.p, target.p);

  const std::vector<double> got_px = x_marginal(induced);
  const std::vector<double> want_px = x_marginal(target);
  for (std::size_t i = 0; i < got_px.size(); ++i) {
    if (std::abs(got_px[i] - want_px[i]) > 1e-12)
      throw std::runtime_error(
          "synthesis: induced X-marginal deviates from the source law");
  }
  const double tv_pair = tv_distance(first_pair_marginal(induced),
                                     first_pair_marginal(target));
  if (tv_pair > tv + 1e-12)
    throw std::runtime_error(
        "synthesis: marginal TV exceeds full-sequence TV");
  return tv;
}

}  // namespace detail

/// Fixed-size variant of the experiment; the codebook dimensions are given
/// directly instead of through rates.
inline SynthesisOutcome run_trials(const CoordinationScheme& scheme, int n,
                                   int m, int m0, int trials,
                                   std::uint64_t seed) {
  validate(scheme);
  if (trials < 1) throw std::domain_error("run_trials: trials must be >= 1");
  const SequenceJoint target = product_target(scheme, n);
  SynthesisOutcome out;
  out.n = n;
  out.m = m;
  out.m0 = m0;
  out.tv_per_trial.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed =
        rng::substream_seed(seed, static_cast<std::uint64_t>(t));
    out.tv_per_trial.push_back(
        detail::one_trial_tv(scheme, n, m, m0, trial_seed, target));
  }
  out.median_tv = detail::median_of(out.tv_per_trial);
  out.mean_tv = 0.0;
  for (double v : out.tv_per_trial) out.mean_tv += v;
  out.mean_tv /= static_cast<double>(trials);
  return out;
}

/// @brief Exact TV of the synthesized joint against the i.i.d. target,
/// over independently seeded codebooks.
inline SynthesisOutcome synthesis_experiment(const SynthesisConfig& cfg) {
  const CodebookSizes sizes = codebook_sizes(cfg.n, cfg.rate, cfg.rate0);
  SynthesisOutcome out = run_trials(cfg.scheme, cfg.n, sizes.m, sizes.m0,
                                    cfg.trials, cfg.seed);
  out.rate = cfg.rate;
  out.rate0 = cfg.rate0;
  return out;
}

}  // namespace rdfc::synth
