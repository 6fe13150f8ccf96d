#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Scalar statistics shared by every other component. All entropies and
// rates produced by this library are in nats.

namespace rdfc::stats {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double sqrt_two = 1.41421356237309504880168872420969808;
inline constexpr double inv_sqrt_two_pi = 0.39894228040143267793994605993438187;
// ln(2*pi*e) / 2, the differential entropy of a unit normal.
inline constexpr double half_ln_two_pi_e = 1.41893853320467274178032973640561764;

/// Standard normal density.
inline double std_normal_pdf(double a) {
  return inv_sqrt_two_pi * std::exp(-0.5 * a * a);
}

/// Standard normal CDF. Evaluated through erfc so the lower tail keeps
/// full relative precision.
inline double std_normal_cdf(double a) {
  return 0.5 * std::erfc(-a / sqrt_two);
}

/// Error function. Thin wrapper so callers stay inside one namespace.
inline double erf(double a) { return std::erf(a); }

/// @brief Truncation correction gamma(a) = a * pdf(a) / erf(a / sqrt(2)).
///
/// Appears in every truncated-normal moment below. Defined for a > 0;
/// tends to 1/2 as a -> 0+ and to 0 as a -> infinity.
inline double gamma_ratio(double a) {
  if (!(a > 0.0)) {
    throw std::domain_error("gamma_ratio: argument must be positive, got " +
                            std::to_string(a));
  }
  return a * std_normal_pdf(a) / std::erf(a / sqrt_two);
}

/// Moments of a centered normal with deviation sigma_x clipped to
/// [-clip_c, clip_c] by resampling (i.e. conditioned on the interval).
struct TruncGaussStats {
  double sigma_x = 0.0;       // deviation before clipping
  double clip_c = 0.0;        // clip half-width
  double beta = 0.0;          // clip_c / sigma_x
  double gamma_beta = 0.0;    // gamma_ratio(beta)
  double var_trunc = 0.0;     // variance after clipping
  double diff_entropy = 0.0;  // differential entropy after clipping, nats
};

/// @brief Statistics of the clipped source.
///
/// var = sigma_x^2 * (1 - 2*gamma(beta)) and
/// h = ln(sqrt(2*pi*e) * sigma_x * erf(beta/sqrt(2))) - gamma(beta).
inline TruncGaussStats trunc_gauss_stats(double sigma_x, double clip_c) {
  if (!(sigma_x > 0.0)) {
    throw std::domain_error("trunc_gauss_stats: sigma_x must be positive");
  }
  if (!(clip_c > 0.0)) {
    throw std::domain_error("trunc_gauss_stats: clip_c must be positive");
  }
  TruncGaussStats s;
  s.sigma_x = sigma_x;
  s.clip_c = clip_c;
  s.beta = clip_c / sigma_x;
  s.gamma_beta = gamma_ratio(s.beta);
  s.var_trunc = sigma_x * sigma_x * (1.0 - 2.0 * s.gamma_beta);
  s.diff_entropy =
      std::log(sigma_x * std::erf(s.beta / sqrt_two)) + half_ln_two_pi_e -
      s.gamma_beta;
  return s;
}

/// Density of the clipped source at x (zero outside [-clip_c, clip_c]).
inline double trunc_gauss_pdf(const TruncGaussStats& s, double x) {
  if (x < -s.clip_c || x > s.clip_c) return 0.0;
  const double z = x / s.sigma_x;
  return std_normal_pdf(z) / (s.sigma_x * std::erf(s.beta / sqrt_two));
}

}  // namespace rdfc::stats
