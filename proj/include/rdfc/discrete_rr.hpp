#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rdfc/errors.hpp"

// Discrete randomized-response side: the two-BSC mixture joint, its
// entropies and mutual information, the permutation-trace bound on common
// information, and an (epsilon, delta)-LDP audit of the induced channel.
// All quantities in nats.

namespace rdfc::discrete_rr {

/// Square joint pmf Q_{i,j} over (row symbol, column symbol).
struct JointPmf {
  int k = 0;
  std::vector<double> q;  // row-major, k*k entries

  double operator()(int i, int j) const {
    return q[static_cast<std::size_t>(i) * static_cast<std::size_t>(k) + j];
  }
};

inline void validate(const JointPmf& pmf) {
  if (pmf.k < 2) throw std::domain_error("JointPmf: k must be >= 2");
  if (pmf.q.size() != static_cast<std::size_t>(pmf.k) * pmf.k)
    throw std::domain_error("JointPmf: expected k*k entries");
  double sum = 0.0;
  for (double v : pmf.q) {
    if (v < 0.0) throw std::domain_error("JointPmf: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::domain_error("JointPmf: entries sum to " + std::to_string(sum));
}

inline JointPmf make_joint_pmf(int k, std::vector<double> q) {
  JointPmf pmf{k, std::move(q)};
  validate(pmf);
  return pmf;
}

/// 0*ln(0) = 0 convention.
inline double neg_p_log_p(double p) {
  return p > 0.0 ? -p * std::log(p) : 0.0;
}

inline double entropy_nats(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) h += neg_p_log_p(v);
  return h;
}

inline double binary_entropy(double p) {
  return neg_p_log_p(p) + neg_p_log_p(1.0 - p);
}

/// Mixture-of-two-BSCs parameters. p1/p3 drive the row (input) side with
/// weight d, p2/p4 the column (output) side with weight c.
struct BscMixtureParams {
  double p1 = 0.0, p2 = 0.0, p3 = 0.0, p4 = 0.0;
  double c = 0.0, d = 0.0;
};

inline void validate(const BscMixtureParams& params) {
  const double vals[6] = {params.p1, params.p2, params.p3,
                          params.p4, params.c,  params.d};
  for (double v : vals) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::domain_error("BscMixtureParams: values must lie in [0, 1]");
  }
}

/// @brief The 4x4 bit-pair joint produced by the shared-switch mixture.
///
/// A fair switch W selects between a channel pair and its bit-flipped twin.
/// Conditioned on W = 0 the two bit pairs are independent with
///   column side: (c(1-p2), (1-c)(1-p4), (1-c)p4, c*p2) over (00,01,10,11)
///   row side:    (d(1-p1), (1-d)(1-p3), (1-d)p3, d*p1)
/// and W = 1 gives the complemented (reversed) vectors, so
/// Q = (r q^T + rev(r) rev(q)^T) / 2. The output is invariant under
/// complementing all four bits. This row/column wiring is the one that
/// reproduces all reference operating points; see the mapping tests.
inline JointPmf bsc_mixture(const BscMixtureParams& params) {
  validate(params);
  const double c = params.c, d = params.d;
  const double col0[4] = {c * (1.0 - params.p2), (1.0 - c) * (1.0 - params.p4),
                          (1.0 - c) * params.p4, c * params.p2};
  const double row0[4] = {d * (1.0 - params.p1), (1.0 - d) * (1.0 - params.p3),
                          (1.0 - d) * params.p3, d * params.p1};
  std::vector<double> q(16, 0.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      q[static_cast<std::size_t>(i) * 4 + j] =
          0.5 * (row0[i] * col0[j] + row0[3 - i] * col0[3 - j]);
    }
  }
  return make_joint_pmf(4, std::move(q));
}

inline std::vector<double> row_marginal(const JointPmf& pmf) {
  std::vector<double> m(static_cast<std::size_t>(pmf.k), 0.0);
  for (int i = 0; i < pmf.k; ++i)
    for (int j = 0; j < pmf.k; ++j) m[static_cast<std::size_t>(i)] += pmf(i, j);
  return m;
}

inline std::vector<double> col_marginal(const JointPmf& pmf) {
  std::vector<double> m(static_cast<std::size_t>(pmf.k), 0.0);
  for (int i = 0; i < pmf.k; ++i)
    for (int j = 0; j < pmf.k; ++j) m[static_cast<std::size_t>(j)] += pmf(i, j);
  return m;
}

inline double joint_entropy(const JointPmf& pmf) {
  double h = 0.0;
  for (double v : pmf.q) h += neg_p_log_p(v);
  return h;
}

struct MarginalEntropies {
  double h_row = 0.0;  // H of the input symbol
  double h_col = 0.0;  // H of the output symbol
};

inline MarginalEntropies marginal_entropies(const JointPmf& pmf) {
  return {entropy_nats(row_marginal(pmf)), entropy_nats(col_marginal(pmf))};
}

inline double mutual_information_discrete(const JointPmf& pmf) {
  const MarginalEntropies m = marginal_entropies(pmf);
  return m.h_row + m.h_col - joint_entropy(pmf);
}

enum class MaxtraceMode { exhaustive, assignment };

struct MaxtraceResult {
  double value = 0.0;
  std::vector<int> perm;  // perm[row] = matched column
};

namespace detail {

inline constexpr int exhaustive_cap = 12;

/// Minimum-cost perfect matching on an n x n matrix, O(n^3) potentials
/// method with shortest augmenting paths.
inline std::vector<int> min_cost_assignment(const std::vector<double>& cost,
                                            int n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur =
            cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] -
            u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) {
    if (p[static_cast<std::size_t>(j)] != 0)
      perm[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] =
          j - 1;
  }
  return perm;
}

}  // namespace detail

/// @brief Maximum of sum_i Q_{i, pi(i)} over all permutations pi.
///
/// Exhaustive mode walks permutations in lexicographic order with a strict
/// improvement test, so ties resolve to the lexicographically smallest
/// achiever. Assignment mode solves the equivalent matching problem in
/// O(k^3) for larger alphabets (same value; tie-breaking is solver-defined).
inline MaxtraceResult maxtrace(const JointPmf& pmf,
                               MaxtraceMode mode = MaxtraceMode::exhaustive) {
  validate(pmf);
  const int k = pmf.k;
  if (mode == MaxtraceMode::exhaustive) {
    if (k > detail::exhaustive_cap) {
      throw SizeError("maxtrace: k = " + std::to_string(k) +
                      " exceeds the exhaustive cap " +
                      std::to_string(detail::exhaustive_cap) +
                      "; use MaxtraceMode::assignment");
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    MaxtraceResult best{-1.0, {}};
    do {
      double trace = 0.0;
      for (int i = 0; i < k; ++i) trace += pmf(i, perm[static_cast<std::size_t>(i)]);
      if (trace > best.value) {
        best.value = trace;
        best.perm = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<double> cost(pmf.q.size());
  for (std::size_t i = 0; i < pmf.q.size(); ++i) cost[i] = -pmf.q[i];
  MaxtraceResult r;
  r.perm = detail::min_cost_assignment(cost, k);
  for (int i = 0; i < k; ++i) r.value += pmf(i, r.perm[static_cast<std::size_t>(i)]);
  return r;
}

enum class FBranch { f1, f2 };

struct FValue {
  double value = 0.0;
  FBranch branch = FBranch::f2;
};

/// @brief Concave upper envelope f(x) used by the common-information bound.
///
/// For x in [x_k*, 1] (x_k* = (k^2-3k+3)/(k(k-1)), alpha = sqrt((kx-1)/(k-1))):
///   f1(x) = 2 ln k - (2/k) [ (1+(k-1)a) ln(1+(k-1)a) + (k-1)(1-a) ln(1-a) ]
/// and on [1/k, x_k*] the tangent continuation
///   f2(x) = 2 ln k - 2 (k-1) ln(k-1) / (k-2) * (x - 1/k).
/// The two branches agree at x_k*.
inline FValue witsenhausen_f(int k, double x) {
  if (k < 3) throw std::domain_error("witsenhausen_f: k must be >= 3");
  const double kd = static_cast<double>(k);
  const double lo = 1.0 / kd;
  if (x < lo - 1e-12 || x > 1.0 + 1e-12) {
    throw std::domain_error("witsenhausen_f: x = " + std::to_string(x) +
                            " outside [1/k, 1]");
  }
  x = std::clamp(x, lo, 1.0);
  const double x_star = (kd * kd - 3.0 * kd + 3.0) / (kd * (kd - 1.0));
  FValue r;
  if (x >= x_star) {
    double alpha = std::sqrt((kd * x - 1.0) / (kd - 1.0));
    if (alpha > 1.0) alpha = 1.0;
    const double one_minus = 1.0 - alpha;
    // (1 - a) ln(1 - a) -> 0 as a -> 1.
    const double tail =
        one_minus > 0.0 ? (kd - 1.0) * one_minus * std::log(one_minus) : 0.0;
    const double head =
        (1.0 + (kd - 1.0) * alpha) * std::log(1.0 + (kd - 1.0) * alpha);
    r.value = 2.0 * std::log(kd) - (2.0 / kd) * (head + tail);
    r.branch = FBranch::f1;
  } else {
    r.value = 2.0 * std::log(kd) -
              2.0 * (kd - 1.0) * std::log(kd - 1.0) / (kd - 2.0) * (x - lo);
    r.branch = FBranch::f2;
  }
  return r;
}

/// Common-information lower bound for one joint pmf.
struct WitsenhausenResult {
  double h_joint = 0.0;    // H(row, col)
  double maxtr = 0.0;      // maxtrace value
  double f_value = 0.0;    // f(maxtr)
  double raw_bound = 0.0;  // h_joint - f_value, may be negative
  double wci_lower = 0.0;  // max(0, raw_bound)
  FBranch branch = FBranch::f2;
};

/// @brief Lower bound C >= H(row, col) - f(maxtrace), clamped at zero.
///
/// The raw value is preserved for diagnostics; the common information is
/// nonnegative, so the clamp never discards a valid bound.
inline WitsenhausenResult wci_lower_bound_discrete(
    const JointPmf& pmf, MaxtraceMode mode = MaxtraceMode::exhaustive) {
  if (pmf.k < 3)
    throw std::domain_error("wci_lower_bound_discrete: k must be >= 3");
  WitsenhausenResult r;
  r.h_joint = joint_entropy(pmf);
  r.maxtr = maxtrace(pmf, mode).value;
  const FValue f = witsenhausen_f(pmf.k, r.maxtr);
  r.f_value = f.value;
  r.branch = f.branch;
  r.raw_bound = r.h_joint - r.f_value;
  r.wci_lower = r.raw_bound > 0.0 ? r.raw_bound : 0.0;
  return r;
}

/// @brief Tightest delta for which the row->column channel is
/// (epsilon, delta)-LDP.
///
/// delta*(eps) = max over ordered input pairs (x, x') of
/// sum_y max(0, P(y|x) - e^eps P(y|x')); the maximizing event is exactly
/// {y : P(y|x) > e^eps P(y|x')}.
inline double ldp_audit(const JointPmf& pmf, double epsilon) {
  validate(pmf);
  if (!(epsilon >= 0.0))
    throw std::domain_error("ldp_audit: epsilon must be >= 0");
  const std::vector<double> px = row_marginal(pmf);
  for (double v : px) {
    if (v <= 0.0)
      throw std::domain_error(
          "ldp_audit: zero row marginal, conditional undefined");
  }
  const int k = pmf.k;
  std::vector<double> channel(pmf.q.size());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      channel[static_cast<std::size_t>(i) * k + j] =
          pmf(i, j) / px[static_cast<std::size_t>(i)];
  const double e_eps = std::exp(epsilon);
  double worst = 0.0;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      double excess = 0.0;
      for (int y = 0; y < k; ++y) {
        const double diff = channel[static_cast<std::size_t>(a) * k + y] -
                            e_eps * channel[static_cast<std::size_t>(b) * k + y];
        if (diff > 0.0) excess += diff;
      }
      worst = std::max(worst, excess);
    }
  }
  return worst;
}

}  // namespace rdfc::discrete_rr
