#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rdfc/discrete_rr.hpp"
#include "rdfc/gaussian_ldp.hpp"
#include "rdfc/quadrature.hpp"
#include "rdfc/special_functions.hpp"

// Finite-blocklength side: information density, alpha-mutual information,
// the exponent optimizer rho*, and the blocklength-n privacy gap
// (Delta_n, delta_n).

namespace rdfc::fbl {

/// Finite-alphabet source given by a joint pmf; marginals cached.
struct DiscreteSource {
  discrete_rr::JointPmf joint;
  std::vector<double> p_row;
  std::vector<double> p_col;
};

inline DiscreteSource make_discrete_source(discrete_rr::JointPmf pmf) {
  discrete_rr::validate(pmf);
  DiscreteSource src;
  src.p_row = discrete_rr::row_marginal(pmf);
  src.p_col = discrete_rr::col_marginal(pmf);
  src.joint = std::move(pmf);
  return src;
}

/// Clipped-Gaussian-plus-noise source; densities evaluated by quadrature.
struct GaussianSource {
  gaussian_ldp::GaussianJoint joint;
  quad::QuadratureSpec inner{1e-8, 2000000, 12.0};
  quad::QuadratureSpec outer{1e-7, 2000000, 12.0};
};

inline GaussianSource make_gaussian_source(
    const gaussian_ldp::GaussianLdpConfig& cfg) {
  GaussianSource src;
  src.joint = gaussian_ldp::build_joint(cfg);
  return src;
}

using InfoDensitySource = std::variant<DiscreteSource, GaussianSource>;

/// ln of the joint-to-product density ratio at one point.
inline double info_density(const DiscreteSource& src, int x, int y) {
  const int k = src.joint.k;
  if (x < 0 || x >= k || y < 0 || y >= k)
    throw std::domain_error("info_density: symbol out of range");
  const double q = src.joint(x, y);
  const double px = src.p_row[static_cast<std::size_t>(x)];
  const double py = src.p_col[static_cast<std::size_t>(y)];
  if (q <= 0.0 || px <= 0.0 || py <= 0.0)
    throw std::domain_error("info_density: point outside the support");
  return std::log(q / (px * py));
}

inline double info_density(const GaussianSource& src, double x, double y) {
  const auto& j = src.joint;
  if (std::abs(x) > j.trunc.clip_c)
    throw std::domain_error("info_density: x outside the clip interval");
  const double sigma_z = std::sqrt(j.sigma_z_sq);
  const double p_cond = stats::std_normal_pdf((y - x) / sigma_z) / sigma_z;
  const double p_y = gaussian_ldp::output_pdf(j, y);
  if (p_cond <= 0.0 || p_y <= 0.0)
    throw std::domain_error("info_density: density underflow at (x, y)");
  return std::log(p_cond) - std::log(p_y);
}

inline double mutual_information(const InfoDensitySource& src) {
  if (const auto* d = std::get_if<DiscreteSource>(&src))
    return discrete_rr::mutual_information_discrete(d->joint);
  const auto& g = std::get<GaussianSource>(src);
  return gaussian_ldp::mutual_information(g.joint, g.outer);
}

/// @brief alpha-mutual information, alpha > 1 (nats).
///
/// I_alpha = alpha/(alpha-1) * ln sum_y [ sum_x P(x) P(y|x)^alpha ]^(1/alpha)
/// evaluated exactly for the discrete kind and by nested adaptive quadrature
/// (inner over the clip interval, outer over the output axis) for the
/// Gaussian kind. A QuadratureError from the inner integral signals that the
/// required moment diverges at this alpha.
inline double alpha_mutual_information(const InfoDensitySource& src,
                                       double alpha) {
  if (!(alpha > 1.0))
    throw std::domain_error("alpha_mutual_information: alpha must exceed 1");
  if (const auto* d = std::get_if<DiscreteSource>(&src)) {
    const int k = d->joint.k;
    double outer_sum = 0.0;
    for (int y = 0; y < k; ++y) {
      double inner = 0.0;
      for (int x = 0; x < k; ++x) {
        const double px = d->p_row[static_cast<std::size_t>(x)];
        if (px <= 0.0) continue;
        const double cond = d->joint(x, y) / px;
        inner += px * std::pow(cond, alpha);
      }
      outer_sum += std::pow(inner, 1.0 / alpha);
    }
    return alpha / (alpha - 1.0) * std::log(outer_sum);
  }
  const auto& g = std::get<GaussianSource>(src);
  const auto& j = g.joint;
  const double sigma_z = std::sqrt(j.sigma_z_sq);
  const double clip_c = j.trunc.clip_c;
  const double w = g.outer.half_width_in_sigmas * std::sqrt(j.sigma_y_sq);
  auto outer_integrand = [&](double y) {
    auto inner_integrand = [&](double x) {
      const double cond = stats::std_normal_pdf((y - x) / sigma_z) / sigma_z;
      return stats::trunc_gauss_pdf(j.trunc, x) * std::pow(cond, alpha);
    };
    const double inner =
        quad::integrate(inner_integrand, -clip_c, clip_c, g.inner);
    return std::pow(inner, 1.0 / alpha);
  };
  const double outer = quad::integrate(outer_integrand, -w, w, g.outer);
  return alpha / (alpha - 1.0) * std::log(outer);
}

struct RhoStarResult {
  double rho_star = 0.0;
  double exponent = 0.0;  // g(rho*) = rho* (R - I_{1/(1-rho*)})
  bool at_half = false;
};

namespace detail {

template <class G>
double golden_section_max(G& g, double lo, double hi, double tol) {
  constexpr double inv_phi = 0.61803398874989484820458683436564;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// @brief Maximizer of g(rho) = rho (R - I_{1/(1-rho)}) over (0, 1/2].
///
/// A 32-point coarse grid locates the basin, golden-section search refines
/// to 1e-6 in rho. The boundary branch is reported when the maximizer lands
/// within tolerance of 1/2. Throws if g is nonpositive on the whole grid,
/// which means the rate does not exceed the mutual information.
inline RhoStarResult rho_star(const InfoDensitySource& src, double rate_R) {
  auto g = [&](double rho) {
    return rho * (rate_R - alpha_mutual_information(src, 1.0 / (1.0 - rho)));
  };
  constexpr int grid_points = 32;
  double best_rho = 0.0, best_g = 0.0;
  int best_idx = -1;
  std::vector<double> gv(grid_points + 1, 0.0);
  for (int i = 1; i <= grid_points; ++i) {
    const double rho = 0.5 * i / grid_points;
    gv[static_cast<std::size_t>(i)] = g(rho);
    if (gv[static_cast<std::size_t>(i)] > best_g) {
      best_g = gv[static_cast<std::size_t>(i)];
      best_rho = rho;
      best_idx = i;
    }
  }
  double lo = 0.0, hi = 0.0;
  if (best_idx >= 0) {
    const double step = 0.5 / grid_points;
    lo = std::max(1e-9, best_rho - step);
    hi = std::min(0.5, best_rho + step);
  } else {
    // Rates barely above the mutual information leave g positive only below
    // the first linear grid point; sweep a geometric ladder toward zero
    // before concluding the rate is too small. The ladder stops near 1e-6:
    // below that, the 1/(alpha - 1) factor amplifies arithmetic noise in
    // I_alpha past the true gap and the sign of g is no longer trustworthy.
    for (double rho = 0.25 / grid_points; rho > 1e-6; rho *= 0.5) {
      const double val = g(rho);
      if (val > best_g) {
        best_g = val;
        best_rho = rho;
      }
    }
    if (best_g <= 0.0) {
      throw std::domain_error(
          "rho_star: objective nonpositive on the whole grid (rate does not "
          "exceed the mutual information)");
    }
    lo = 0.5 * best_rho;
    hi = std::min(0.5, 2.0 * best_rho);
  }
  double refined = detail::golden_section_max(g, lo, hi, 1e-6);
  double refined_g = g(refined);
  // Keep the better of grid point and refined point; evaluate the boundary
  // itself since golden section never lands exactly on it.
  if (gv[grid_points] >= refined_g) {
    refined = 0.5;
    refined_g = gv[grid_points];
  }
  RhoStarResult r;
  r.at_half = refined >= 0.5 - 1e-6;
  r.rho_star = r.at_half ? 0.5 : refined;
  r.exponent = r.at_half ? gv[grid_points] : refined_g;
  return r;
}

struct FblConfig {
  double rate_R = 0.0;  // nats per symbol
  int n = 1;            // blocklength
  double epsilon = 0.0; // target LDP epsilon
  double delta = 0.0;   // target LDP delta
  double slack_a = 2.0; // Markov slack factor, > 1
  double K = 1.0;       // undetermined constant, reported alongside exponent
};

inline void validate(const FblConfig& cfg) {
  if (cfg.n < 1) throw std::domain_error("FblConfig: n must be >= 1");
  if (!(cfg.slack_a > 1.0))
    throw std::domain_error("FblConfig: slack factor must exceed 1");
  if (!(cfg.K > 0.0)) throw std::domain_error("FblConfig: K must be positive");
  if (!(cfg.epsilon >= 0.0))
    throw std::domain_error("FblConfig: epsilon must be >= 0");
  if (!(cfg.delta >= 0.0 && cfg.delta < 1.0))
    throw std::domain_error("FblConfig: delta must lie in [0, 1)");
}

struct FblResult {
  double rho_star = 0.0;
  bool at_half = false;
  double exponent = 0.0;     // decay rate of Delta_n per symbol
  double delta_cap_n = 0.0;  // Delta_n
  double delta_n = 0.0;      // delta + 2 (e^eps + 1) a Delta_n
};

/// Delta_n and delta_n for a precomputed optimizer.
inline FblResult delta_n_bound(const RhoStarResult& rs, const FblConfig& cfg) {
  validate(cfg);
  FblResult r;
  r.rho_star = rs.rho_star;
  r.at_half = rs.at_half;
  r.exponent = rs.exponent;
  const double n = static_cast<double>(cfg.n);
  if (rs.at_half) {
    r.delta_cap_n = cfg.K * std::exp(-n * rs.exponent);
  } else {
    r.delta_cap_n = cfg.K * std::pow(n, -(1.0 - rs.rho_star) / 2.0) *
                    std::exp(-n * rs.exponent);
  }
  r.delta_n = cfg.delta +
              2.0 * (std::exp(cfg.epsilon) + 1.0) * cfg.slack_a * r.delta_cap_n;
  return r;
}

/// @brief Blocklength-n privacy bound.
///
/// Delta_n = K e^{-(n/2)(R - I_2)} on the boundary branch (rho* = 1/2),
/// otherwise K n^{-(1-rho*)/2} e^{-n rho* (R - I_{1/(1-rho*)})};
/// delta_n = delta + 2 (e^eps + 1) a Delta_n.
inline FblResult delta_n_bound(const InfoDensitySource& src,
                               const FblConfig& cfg) {
  validate(cfg);
  return delta_n_bound(rho_star(src, cfg.rate_R), cfg);
}

}  // namespace rdfc::fbl
