#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rdfc/quadrature.hpp"
#include "rdfc/rng.hpp"
#include "rdfc/special_functions.hpp"

using Catch::Approx;
namespace stats = rdfc::stats;
namespace quad = rdfc::quad;

namespace {

// Oracle: integrate the density directly instead of trusting erf.
double cdf_by_quadrature(double a) {
  const auto pdf = [](double t) { return stats::std_normal_pdf(t); };
  if (a >= 0.0) return 0.5 + quad::integrate(pdf, 0.0, a, 1e-12, 400000);
  return 0.5 - quad::integrate(pdf, a, 0.0, 1e-12, 400000);
}

double erf_by_quadrature(double a) {
  const double integral =
      quad::integrate([](double t) { return std::exp(-t * t); }, 0.0, a,
                      1e-13, 400000);
  return 2.0 / std::sqrt(stats::pi) * integral;
}

}  // namespace

TEST_CASE("std_normal_pdf point values") {
  CHECK(stats::std_normal_pdf(0.0) == Approx(0.3989422804).margin(1e-9));
  CHECK(stats::std_normal_pdf(1.0) == Approx(0.2419707245).margin(1e-9));
  CHECK(stats::std_normal_pdf(-1.0) == stats::std_normal_pdf(1.0));
}

TEST_CASE("std_normal_cdf against direct integration of the density") {
  CHECK(stats::std_normal_cdf(0.0) == 0.5);
  CHECK(stats::std_normal_cdf(10.0) == Approx(1.0).margin(1e-15));
  CHECK(stats::std_normal_cdf(1.43197) ==
        Approx(cdf_by_quadrature(1.43197)).margin(1e-11));
  CHECK(stats::std_normal_cdf(1.43197) == Approx(0.9239237964).margin(1e-9));
  CHECK(stats::std_normal_cdf(-2.5) ==
        Approx(cdf_by_quadrature(-2.5)).margin(1e-11));

  double prev = stats::std_normal_cdf(-8.0);
  for (double a = -7.75; a <= 8.0; a += 0.25) {
    const double cur = stats::std_normal_cdf(a);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("erf against the defining integral") {
  CHECK(stats::erf(0.0) == 0.0);
  CHECK(stats::erf(0.70711) == Approx(0.68269).margin(1e-4));
  CHECK(stats::erf(0.70711) == Approx(erf_by_quadrature(0.70711)).margin(1e-12));
  CHECK(stats::erf(2.3) == Approx(erf_by_quadrature(2.3)).margin(1e-12));
  for (double a : {0.1, 0.9, 1.7, 3.3}) {
    CHECK(stats::erf(-a) == -stats::erf(a));
  }
}

TEST_CASE("gamma_ratio point values and domain") {
  CHECK(stats::gamma_ratio(1.0) == Approx(0.35444).margin(1e-4));
  CHECK(stats::gamma_ratio(5.0) == Approx(7.43e-6).margin(1e-7));
  CHECK(stats::gamma_ratio(0.001) == Approx(0.5).margin(1e-4));
  CHECK_THROWS_AS(stats::gamma_ratio(0.0), std::domain_error);
  CHECK_THROWS_AS(stats::gamma_ratio(-1.0), std::domain_error);
}

TEST_CASE("gamma_ratio is positive, below one half, strictly decreasing") {
  double prev = stats::gamma_ratio(0.01);
  CHECK(prev > 0.0);
  CHECK(prev < 0.5);
  for (double a = 0.02; a <= 8.0; a += 0.01) {
    const double cur = stats::gamma_ratio(a);
    CHECK(cur > 0.0);
    CHECK(cur < 0.5);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("trunc_gauss_stats reference configurations") {
  SECTION("narrow source, unit clip") {
    const auto s = stats::trunc_gauss_stats(0.4938, 1.0);
    CHECK(s.beta == Approx(2.02511).margin(1e-5));
    CHECK(s.gamma_beta == Approx(0.10858).margin(1e-4));
    CHECK(s.var_trunc == Approx(0.19089).margin(2e-4));
  }
  SECTION("no-truncation limit") {
    const auto s = stats::trunc_gauss_stats(1.0, 100.0);
    CHECK(s.var_trunc == Approx(1.0).margin(1e-12));
    CHECK(s.diff_entropy == Approx(1.41894).margin(1e-5));
  }
  SECTION("beta from the narrowest reference source") {
    const auto s = stats::trunc_gauss_stats(0.3280, 1.0);
    CHECK(s.beta == Approx(3.04878).margin(1e-5));
    CHECK(s.var_trunc ==
          Approx(0.3280 * 0.3280 *
                 (1.0 - 2.0 * stats::gamma_ratio(s.beta))).margin(1e-15));
  }
  SECTION("domain errors") {
    CHECK_THROWS_AS(stats::trunc_gauss_stats(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(stats::trunc_gauss_stats(1.0, -2.0), std::domain_error);
  }
}

TEST_CASE("truncated variance ratio rises to one with beta") {
  double prev = 0.0;
  for (double beta = 0.5; beta <= 8.0; beta += 0.05) {
    const double ratio = 1.0 - 2.0 * stats::gamma_ratio(beta);
    CHECK(ratio > prev);
    prev = ratio;
  }
  CHECK(prev == Approx(1.0).margin(1e-10));
}

TEST_CASE("truncated variance matches rejection sampling") {
  const double sigma_x = 0.4938, clip_c = 1.0;
  const auto s = stats::trunc_gauss_stats(sigma_x, clip_c);
  rdfc::rng::SplitMix64 gen(20240817);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0, sum_q = 0.0;
  for (int i = 0; i < n;) {
    const double x = sigma_x * gen.next_normal();
    if (std::abs(x) > clip_c) continue;
    sum += x;
    sum_sq += x * x;
    sum_q += x * x * x * x;
    ++i;
  }
  const double mean = sum / n;
  const double var_hat = sum_sq / n - mean * mean;
  const double m4_hat = sum_q / n;
  const double se = std::sqrt((m4_hat - var_hat * var_hat) / n);
  CHECK(std::abs(var_hat - s.var_trunc) <= 3.0 * se);
}

TEST_CASE("truncated entropy matches direct quadrature") {
  rdfc::rng::SplitMix64 gen(7);
  for (int trial = 0; trial < 5; ++trial) {
    const double sigma_x = gen.next_uniform(0.2, 1.5);
    const double clip_c = gen.next_uniform(0.3, 2.5);
    const auto s = stats::trunc_gauss_stats(sigma_x, clip_c);
    const double h = quad::integrate(
        [&](double x) {
          const double p = stats::trunc_gauss_pdf(s, x);
          return p > 0.0 ? -p * std::log(p) : 0.0;
        },
        -clip_c, clip_c, 1e-9, 400000);
    CHECK(s.diff_entropy == Approx(h).margin(1e-6));
  }
}
