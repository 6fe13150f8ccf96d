#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

#include "rdfc/coord_synth.hpp"
#include "rdfc/errors.hpp"
#include "rdfc/rng.hpp"

using Catch::Approx;
namespace synth = rdfc::synth;

namespace {

synth::CoordinationScheme identity_bsc_scheme(double flip_x, double flip_y) {
  synth::CoordinationScheme s;
  s.p_u = {0.5, 0.5};
  s.p_x_given_u = {{1.0 - flip_x, flip_x}, {flip_x, 1.0 - flip_x}};
  s.p_y_given_u = {{1.0 - flip_y, flip_y}, {flip_y, 1.0 - flip_y}};
  return s;
}

synth::CoordinationScheme random_binary_scheme(rdfc::rng::SplitMix64& gen) {
  synth::CoordinationScheme s;
  const double w = gen.next_uniform(0.1, 0.9);
  s.p_u = {w, 1.0 - w};
  for (int u = 0; u < 2; ++u) {
    const double a = gen.next_uniform(0.05, 0.95);
    const double b = gen.next_uniform(0.05, 0.95);
    s.p_x_given_u.push_back({a, 1.0 - a});
    s.p_y_given_u.push_back({b, 1.0 - b});
  }
  return s;
}

double mi_of_pair(const std::vector<double>& q, int nx, int ny) {
  std::vector<double> px(static_cast<std::size_t>(nx), 0.0);
  std::vector<double> py(static_cast<std::size_t>(ny), 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      px[static_cast<std::size_t>(x)] += q[static_cast<std::size_t>(x) * ny + y];
      py[static_cast<std::size_t>(y)] += q[static_cast<std::size_t>(x) * ny + y];
    }
  double mi = 0.0;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const double v = q[static_cast<std::size_t>(x) * ny + y];
      if (v > 0.0)
        mi += v * std::log(v / (px[static_cast<std::size_t>(x)] *
                                py[static_cast<std::size_t>(y)]));
    }
  return mi;
}

}  // namespace

TEST_CASE("scheme validation") {
  auto s = identity_bsc_scheme(0.0, 0.1);
  CHECK_NOTHROW(synth::validate(s));

  auto bad_sum = s;
  bad_sum.p_x_given_u[0] = {0.6, 0.6};
  CHECK_THROWS_AS(synth::validate(bad_sum), std::domain_error);

  auto ragged = s;
  ragged.p_y_given_u[1] = {0.2, 0.3, 0.5};
  CHECK_THROWS_AS(synth::validate(ragged), std::domain_error);

  auto missing_row = s;
  missing_row.p_x_given_u.pop_back();
  CHECK_THROWS_AS(synth::validate(missing_row), std::domain_error);

  auto negative = s;
  negative.p_u = {1.5, -0.5};
  CHECK_THROWS_AS(synth::validate(negative), std::domain_error);
}

TEST_CASE("rate region check on the identity scheme") {
  const auto s = identity_bsc_scheme(0.0, 0.0);
  const auto r = synth::rate_region_check(s, 0.8, 0.0);
  CHECK(r.i_xu == Approx(std::log(2.0)).margin(1e-12));
  CHECK(r.i_xyu == Approx(std::log(2.0)).margin(1e-12));
  CHECK(r.ok_rate);
  CHECK(r.ok_sum);
  const auto tight = synth::rate_region_check(s, 0.5, 0.0);
  CHECK_FALSE(tight.ok_rate);
  CHECK_FALSE(tight.ok_sum);
}

TEST_CASE("rate region check with independent U") {
  synth::CoordinationScheme s;
  s.p_u = {0.5, 0.5};
  s.p_x_given_u = {{0.3, 0.7}, {0.3, 0.7}};
  s.p_y_given_u = {{0.6, 0.4}, {0.6, 0.4}};
  const auto r = synth::rate_region_check(s, 0.0, 0.0);
  CHECK(r.i_xu == Approx(0.0).margin(1e-12));
  CHECK(r.i_xyu == Approx(0.0).margin(1e-12));
  CHECK(r.ok_rate);
  CHECK(r.ok_sum);
}

TEST_CASE("I(X;U) dominates I(X;Y) of the induced pair") {
  rdfc::rng::SplitMix64 gen(61);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_binary_scheme(gen);
    const auto r = synth::rate_region_check(s, 0.0, 0.0);
    const double i_xy = mi_of_pair(synth::induced_pair_pmf(s), 2, 2);
    CHECK(r.i_xu >= i_xy - 1e-12);
    CHECK(r.i_xyu >= r.i_xu - 1e-12);
  }
}

TEST_CASE("codebook construction") {
  const auto s = identity_bsc_scheme(0.1, 0.2);
  SECTION("deterministic in the seed") {
    const auto a = synth::build_codebook(s, 4, 8, 2, 999);
    const auto b = synth::build_codebook(s, 4, 8, 2, 999);
    CHECK(a.u == b.u);
    const auto c = synth::build_codebook(s, 4, 8, 2, 1000);
    CHECK(a.u != c.u);
  }
  SECTION("single codeword shape") {
    const auto cb = synth::build_codebook(s, 3, 1, 1, 5);
    CHECK(cb.u.size() == 3);
    for (int i = 0; i < 3; ++i) {
      const int sym = cb.symbol(0, 0, i);
      CHECK(sym >= 0);
      CHECK(sym < 2);
    }
  }
  SECTION("symbol frequencies match P_U within 3 sigma") {
    synth::CoordinationScheme tri;
    tri.p_u = {0.2, 0.5, 0.3};
    tri.p_x_given_u = {{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
    tri.p_y_given_u = tri.p_x_given_u;
    const int draws = 10000;
    const auto cb = synth::build_codebook(tri, 1, draws, 1, 31337);
    std::vector<int> counts(3, 0);
    for (int v : cb.u) ++counts[static_cast<std::size_t>(v)];
    for (int i = 0; i < 3; ++i) {
      const double expect = draws * tri.p_u[static_cast<std::size_t>(i)];
      const double sigma = std::sqrt(
          draws * tri.p_u[static_cast<std::size_t>(i)] *
          (1.0 - tri.p_u[static_cast<std::size_t>(i)]));
      CHECK(std::abs(counts[static_cast<std::size_t>(i)] - expect) <=
            3.0 * sigma);
    }
  }
  SECTION("caps and domain") {
    CHECK_THROWS_AS(synth::build_codebook(s, 0, 1, 1, 1), std::domain_error);
    CHECK_THROWS_AS(synth::build_codebook(s, 1, (1 << 26) + 1, 1, 1),
                    rdfc::SizeError);
  }
}

TEST_CASE("likelihood encoder distribution") {
  synth::CoordinationScheme s;
  s.p_u = {0.4, 0.3, 0.3};
  s.p_x_given_u = {{0.2, 0.8}, {0.2, 0.8}, {0.1, 0.9}};
  s.p_y_given_u = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};

  synth::Codebook cb;
  cb.n = 1;
  cb.m = 3;
  cb.m0 = 1;
  cb.u = {0, 1, 2};

  SECTION("three codewords, plain normalization") {
    const auto w = synth::likelihood_encoder_distribution({0}, cb, 0, s);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == Approx(0.4).margin(1e-15));
    CHECK(w[1] == Approx(0.4).margin(1e-15));
    CHECK(w[2] == Approx(0.2).margin(1e-15));
  }
  SECTION("single codeword is a point mass") {
    synth::Codebook one;
    one.n = 1;
    one.m = 1;
    one.m0 = 1;
    one.u = {1};
    const auto w = synth::likelihood_encoder_distribution({1}, one, 0, s);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == 1.0);
  }
  SECTION("zero-likelihood codeword gets zero mass") {
    synth::CoordinationScheme det;
    det.p_u = {0.5, 0.5};
    det.p_x_given_u = {{1.0, 0.0}, {0.0, 1.0}};
    det.p_y_given_u = {{0.5, 0.5}, {0.5, 0.5}};
    synth::Codebook two;
    two.n = 1;
    two.m = 2;
    two.m0 = 1;
    two.u = {0, 1};
    const auto w = synth::likelihood_encoder_distribution({1}, two, 0, det);
    CHECK(w[0] == 0.0);
    CHECK(w[1] == 1.0);
  }
  SECTION("all-zero likelihood falls back to uniform") {
    synth::CoordinationScheme det;
    det.p_u = {0.5, 0.5};
    det.p_x_given_u = {{1.0, 0.0}, {1.0, 0.0}};
    det.p_y_given_u = {{0.5, 0.5}, {0.5, 0.5}};
    synth::Codebook two;
    two.n = 1;
    two.m = 2;
    two.m0 = 1;
    two.u = {0, 1};
    const auto w = synth::likelihood_encoder_distribution({1}, two, 0, det);
    CHECK(w[0] == Approx(0.5).margin(1e-15));
    CHECK(w[1] == Approx(0.5).margin(1e-15));
  }
  SECTION("argument errors") {
    CHECK_THROWS_AS(synth::likelihood_encoder_distribution({0}, cb, 1, s),
                    std::domain_error);
    CHECK_THROWS_AS(synth::likelihood_encoder_distribution({0, 1}, cb, 0, s),
                    std::domain_error);
  }
}

TEST_CASE("induced joint, degenerate single-codeword closed form") {
  synth::CoordinationScheme s;
  s.p_u = {0.5, 0.5};
  s.p_x_given_u = {{0.7, 0.3}, {0.7, 0.3}};  // X independent of U
  s.p_y_given_u = {{0.9, 0.1}, {0.2, 0.8}};
  const int n = 2;
  const auto cb = synth::build_codebook(s, n, 1, 1, 77);
  const auto induced = synth::induced_joint_exact(cb, s);
  const auto target = synth::product_target(s, n);

  // With M = M0 = 1 and X independent of U the X part cancels inside TV,
  // leaving the TV between the codeword-conditional and target Y products.
  std::vector<double> qy(4, 0.0), ty(4, 0.0);
  const std::vector<double> ybar = {0.5 * 0.9 + 0.5 * 0.2,
                                    0.5 * 0.1 + 0.5 * 0.8};
  for (int y1 = 0; y1 < 2; ++y1)
    for (int y2 = 0; y2 < 2; ++y2) {
      const auto& r1 = s.p_y_given_u[static_cast<std::size_t>(cb.symbol(0, 0, 0))];
      const auto& r2 = s.p_y_given_u[static_cast<std::size_t>(cb.symbol(0, 0, 1))];
      qy[static_cast<std::size_t>(y1 * 2 + y2)] =
          r1[static_cast<std::size_t>(y1)] * r2[static_cast<std::size_t>(y2)];
      ty[static_cast<std::size_t>(y1 * 2 + y2)] =
          ybar[static_cast<std::size_t>(y1)] * ybar[static_cast<std::size_t>(y2)];
    }
  const double closed = synth::tv_distance(qy, ty);
  CHECK(synth::tv_distance(induced.p, target.p) ==
        Approx(closed).margin(1e-14));
}

TEST_CASE("induced joint normalizes and matches the encoder composition") {
  rdfc::rng::SplitMix64 gen(88);
  for (int t = 0; t < 5; ++t) {
    const auto s = random_binary_scheme(gen);
    const int n = 2, m = 3, m0 = 2;
    const auto cb = synth::build_codebook(s, n, m, m0, gen.next_u64());
    const auto induced = synth::induced_joint_exact(cb, s);

    double mass = 0.0;
    for (double v : induced.p) {
      CHECK(v >= 0.0);
      mass += v;
    }
    CHECK(mass == Approx(1.0).margin(1e-10));

    // Longhand composition: P(x^n) (1/m0) sum_c sum_j PL(j|x,c) prod P(y|u).
    const auto px1 = synth::induced_x_pmf(s);
    for (std::size_t x = 0; x < induced.x_count; ++x) {
      const std::vector<int> xs = {static_cast<int>(x / 2),
                                   static_cast<int>(x % 2)};
      const double pxn = px1[static_cast<std::size_t>(xs[0])] *
                         px1[static_cast<std::size_t>(xs[1])];
      for (std::size_t y = 0; y < induced.y_count; ++y) {
        const int y1 = static_cast<int>(y / 2), y2 = static_cast<int>(y % 2);
        double acc = 0.0;
        for (int c = 0; c < m0; ++c) {
          const auto w = synth::likelihood_encoder_distribution(xs, cb, c, s);
          for (int j = 0; j < m; ++j) {
            const auto& r1 =
                s.p_y_given_u[static_cast<std::size_t>(cb.symbol(c, j, 0))];
            const auto& r2 =
                s.p_y_given_u[static_cast<std::size_t>(cb.symbol(c, j, 1))];
            acc += w[static_cast<std::size_t>(j)] *
                   r1[static_cast<std::size_t>(y1)] *
                   r2[static_cast<std::size_t>(y2)];
          }
        }
        const double want = pxn * acc / m0;
        CHECK(induced.p[x * induced.y_count + y] ==
              Approx(want).margin(1e-15));
      }
    }
  }
}

TEST_CASE("induced joint respects the support cap") {
  synth::CoordinationScheme wide;
  wide.p_u = {1.0};
  wide.p_x_given_u = {{0.25, 0.25, 0.25, 0.25}};
  wide.p_y_given_u = {{0.25, 0.25, 0.25, 0.25}};
  const auto cb = synth::build_codebook(wide, 6, 1, 1, 3);
  CHECK_THROWS_AS(synth::induced_joint_exact(cb, wide), rdfc::SizeError);
}

TEST_CASE("soft covering at high rate, n = 1") {
  const auto s = identity_bsc_scheme(0.1, 0.2);
  const auto cb = synth::build_codebook(s, 1, 4096, 1, 4242);
  const auto induced = synth::induced_joint_exact(cb, s);
  const auto target = synth::product_target(s, 1);
  CHECK(synth::tv_distance(induced.p, target.p) < 0.02);
}

TEST_CASE("tv distance basics") {
  CHECK(synth::tv_distance({0.5, 0.5}, {0.5, 0.5}) == 0.0);
  CHECK(synth::tv_distance({1.0, 0.0}, {0.0, 1.0}) == 1.0);
  CHECK(synth::tv_distance({0.7, 0.3}, {0.5, 0.5}) ==
        Approx(0.2).margin(1e-15));
  CHECK_THROWS_AS(synth::tv_distance({1.0}, {0.5, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("first pair marginal uses the leading digits") {
  synth::SequenceJoint j;
  j.n = 2;
  j.nx = 2;
  j.ny = 2;
  j.x_count = 4;
  j.y_count = 4;
  j.p.assign(16, 0.0);
  // point mass on x^2 = (0,1), y^2 = (1,0)
  j.p[1 * 4 + 2] = 1.0;
  const auto m = synth::first_pair_marginal(j);
  CHECK(m[0 * 2 + 1] == 1.0);
  CHECK(m[0] == 0.0);
  CHECK(m[2] == 0.0);
  CHECK(m[3] == 0.0);
}

TEST_CASE("codebook sizes from rates") {
  const auto sz = synth::codebook_sizes(2, 0.7, 0.0);
  CHECK(sz.m == 5);  // ceil(e^1.4)
  CHECK(sz.m0 == 1);
  const auto unit = synth::codebook_sizes(1, 0.0, 0.0);
  CHECK(unit.m == 1);
  CHECK(unit.m0 == 1);
  CHECK_THROWS_AS(synth::codebook_sizes(0, 0.1, 0.1), std::domain_error);
  CHECK_THROWS_AS(synth::codebook_sizes(1, -0.1, 0.0), std::domain_error);
  CHECK_THROWS_AS(synth::codebook_sizes(100, 0.3, 0.0), rdfc::SizeError);
}

TEST_CASE("independent receiver synthesizes a product target exactly") {
  synth::CoordinationScheme s;
  s.p_u = {0.5, 0.5};
  s.p_x_given_u = {{0.8, 0.2}, {0.3, 0.7}};
  s.p_y_given_u = {{0.6, 0.4}, {0.6, 0.4}};  // Y independent of U
  synth::SynthesisConfig cfg;
  cfg.scheme = s;
  cfg.n = 3;
  cfg.rate = 0.0;
  cfg.rate0 = 0.0;
  cfg.trials = 2;
  cfg.seed = 12;
  const auto out = synth::synthesis_experiment(cfg);
  CHECK(out.m == 1);
  CHECK(out.m0 == 1);
  for (double tv : out.tv_per_trial) CHECK(tv <= 1e-12);
}

TEST_CASE("experiments are bit-identical across reruns") {
  synth::SynthesisConfig cfg;
  cfg.scheme = identity_bsc_scheme(0.1, 0.2);
  cfg.n = 3;
  cfg.rate = 0.72;
  cfg.rate0 = 0.1;
  cfg.trials = 6;
  cfg.seed = 5150;
  const auto a = synth::synthesis_experiment(cfg);
  const auto b = synth::synthesis_experiment(cfg);
  REQUIRE(a.tv_per_trial.size() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(a.tv_per_trial[i] == b.tv_per_trial[i]);
  CHECK(a.median_tv == b.median_tv);
  CHECK(a.mean_tv == b.mean_tv);
  for (double tv : a.tv_per_trial) {
    CHECK(tv >= 0.0);
    CHECK(tv <= 1.0);
  }
}

TEST_CASE("median TV never increases with codebook size") {
  const auto s = identity_bsc_scheme(0.1, 0.2);
  // 51 trials so the median estimate is stable enough to expose the trend.
  double prev = 2.0;
  for (int m = 2; m <= 32; m *= 2) {
    const auto out = synth::run_trials(s, 2, m, 1, 51, 321);
    CHECK(out.median_tv <= prev + 1e-15);
    prev = out.median_tv;
  }
  CHECK_THROWS_AS(synth::run_trials(s, 2, 2, 1, 0, 321), std::domain_error);
}

TEST_CASE("deep-inside-region medians fall with blocklength") {
  synth::SynthesisConfig cfg;
  cfg.scheme = identity_bsc_scheme(0.1, 0.2);
  cfg.rate = 0.7181;
  cfg.rate0 = 0.0727;
  cfg.trials = 10;
  cfg.seed = 2468;

  const auto region =
      synth::rate_region_check(cfg.scheme, cfg.rate, cfg.rate0);
  CHECK(region.ok_rate);
  CHECK(region.ok_sum);
  CHECK(cfg.rate - region.i_xu >= 0.3);
  CHECK(cfg.rate + cfg.rate0 - region.i_xyu >= 0.3);

  cfg.n = 2;
  const double tv2 = synth::synthesis_experiment(cfg).median_tv;
  cfg.n = 4;
  const double tv4 = synth::synthesis_experiment(cfg).median_tv;
  CHECK(tv4 < tv2);

  synth::SynthesisConfig conv = cfg;
  conv.rate = 0.0;
  conv.rate0 = 0.0;
  for (int n = 1; n <= 4; ++n) {
    conv.n = n;
    CHECK(synth::synthesis_experiment(conv).median_tv >= 0.05);
  }
}
