#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "parasemi/counter_rng.hpp"
#include "parasemi/error.hpp"
#include "parasemi/parallel.hpp"
#include "parasemi/stochastic_sim.hpp"

using namespace parasemi;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::input;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

const HolderParams kH(1.0, 0.25, 1.0);

DiffusionOperator gain(Vec c, double alpha2 = 0.0, ProfileKind kind = ProfileKind::constant,
                       HolderParams h = kH) {
  return DiffusionOperator{kind, std::move(c), alpha2, h};
}

NoiseConfig noise(std::uint64_t seed, std::size_t paths, TimeGrid g, std::size_t threads = 0) {
  NoiseConfig c;
  c.seed = seed;
  c.n_paths = paths;
  c.grid = std::move(g);
  c.threads = threads;
  return c;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal variates are centred with unit variance") {
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = normal_at(42, i % 1000, i / 1000, 7, StreamTag::convolution);
    CHECK(std::isfinite(z));
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 4 / std::sqrt(n));
  CHECK(std::abs(s2 / n - 1) < 4 * std::sqrt(2.0 / n));
  CHECK(normal_at(1, 2, 3, 4, StreamTag::convolution) != normal_at(1, 2, 3, 4, StreamTag::initial));
}

TEST_CASE("worker count honours the environment cap") {
  CHECK(worker_count(3) == 3);
  setenv("PARASEMI_THREADS", "2", 1);
  CHECK(worker_count() == 2);
  unsetenv("PARASEMI_THREADS");
  CHECK(worker_count() >= 1);
  std::vector<int> hit(100, 0);
  parallel_chunks(100, 4, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) hit[i]++;
  });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS(parallel_chunks(10, 3, [](std::size_t, std::size_t) { throw std::runtime_error("x"); }));
}

TEST_CASE("zero gain gives zero paths, zero moments and zero residuals") {
  const SpectralOperator op({1.0, 2.0});
  const DiffusionOperator G = gain({0.0, 0.0}, -1.0);
  const NoiseConfig cfg = noise(1, 20, TimeGrid::uniform(1.0, 16));
  const ConvolutionEnsemble e = simulate_convolution(op, G, 0.0, cfg);
  for (double x : e.data()) CHECK(x == 0.0);
  const IsometryReport iso = ito_isometry_check(op, G, 1.0, cfg);
  CHECK(iso.mc_mean_square == 0.0);
  CHECK(iso.analytic == 0.0);
  const MomentProfile mp = convolution_moment_profile(e, op, G);
  CHECK(mp.ratio == 0.0);
  for (double m : mp.mc_mean_norm) CHECK(m == 0.0);
  const StrictIdentityReport sr = strict_identity_check(op, G, cfg);
  CHECK(sr.median_sup == 0.0);
}

TEST_CASE("paths start at zero and regime is enforced") {
  const SpectralOperator op({1.0});
  const NoiseConfig cfg = noise(3, 10, TimeGrid::uniform(1.0, 16));
  const ConvolutionEnsemble e = simulate_convolution(op, gain({1.0}), 0.0, cfg);
  for (std::size_t i = 0; i < 10; ++i) CHECK(e.value(i, 0)[0] == 0.0);
  CHECK(kind_of([&] { simulate_convolution(op, gain({1.0}), 0.5, cfg); }) == ErrorKind::regime);
  CHECK(kind_of([&] { strict_identity_check(op, gain({1.0}, -0.5), cfg); }) == ErrorKind::regime);
  CHECK(kind_of([&] { simulate_convolution(op, gain({1.0}), 0.0, noise(3, 10, TimeGrid::uniform(1.0, 16, 0.5))); }) ==
        ErrorKind::input);
}

TEST_CASE("analytic second moments") {
  CHECK(analytic_second_moment(SpectralOperator({1.0}), gain({1.0}), 1.0) ==
        doctest::Approx(0.432332358381693654).epsilon(1e-12));
  CHECK(analytic_second_moment(SpectralOperator({1.0, 4.0}), gain({1.0, 1.0}), 1.0) ==
        doctest::Approx(0.557290).epsilon(1e-6));
  CHECK(analytic_second_moment(SpectralOperator({1.0}), gain({1.0}), 50.0) == doctest::Approx(0.5).epsilon(1e-12));
  // quadrature route for a non-constant gain against a Simpson oracle
  const HolderParams h(0.8, 0.2, 1.0);
  const DiffusionOperator hg = gain({1.0}, 0.0, ProfileKind::power_plus_holder, h);
  const int n = 400000;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = static_cast<double>(i) / n;  // s = y^5 removes the s^{-0.4} singularity
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    const double sv = std::pow(y, 5.0);
    const double phi = i == 0 ? 0.0 : std::pow(sv, -0.2) + 1.0;
    s += w * 5 * std::pow(y, 4.0) * std::exp(-2 * (1 - sv)) * phi * phi;
  }
  CHECK(analytic_second_moment(SpectralOperator({1.0}), hg, 1.0) == doctest::Approx(s / (3.0 * n)).epsilon(1e-6));
  // monotone growth in t for constant gains
  double prev = 0.0;
  for (double t = 0.05; t < 5; t += 0.05) {
    const double m = analytic_second_moment(SpectralOperator({0.5, 3.0}), gain({1.0, 2.0}), t);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("fine-step Euler-Maruyama oracle for the OU variance") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> N;
  const int paths = 4000, steps = 1000;
  double s2 = 0.0;
  for (int i = 0; i < paths; ++i) {
    double x = 0.0;
    for (int j = 0; j < steps; ++j) x += -x / steps + std::sqrt(1.0 / steps) * N(rng);
    s2 += x * x;
  }
  const double em = s2 / paths, se = em * std::sqrt(2.0 / paths);
  CHECK(std::abs(em - analytic_second_moment(SpectralOperator({1.0}), gain({1.0}), 1.0)) < 4 * se);
}

TEST_CASE("isometry at long times reaches the stationary variance") {
  const IsometryReport r =
      ito_isometry_check(SpectralOperator({1.0}), gain({1.0}), 20.0, noise(5, 10000, TimeGrid::uniform(20.0, 8)));
  CHECK(r.analytic == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.z_score <= 3.0);
  const IsometryReport few =
      ito_isometry_check(SpectralOperator({1.0}), gain({1.0}), 1.0, noise(5, 50, TimeGrid::uniform(1.0, 8)));
  CHECK_FALSE(few.warning.empty());
}

TEST_CASE("determinism across thread counts") {
  const SpectralOperator op({1.0, 2.0, 5.0});
  const DiffusionOperator G = gain({1.0, 0.5, 0.2}, 0.0, ProfileKind::holder_power, HolderParams(0.9, 0.2, 1.0));
  const ConvolutionEnsemble a = simulate_convolution(op, G, 0.1, noise(9, 37, TimeGrid::graded(1.0, 32), 1));
  const ConvolutionEnsemble b = simulate_convolution(op, G, 0.1, noise(9, 37, TimeGrid::graded(1.0, 32), 4));
  setenv("PARASEMI_THREADS", "3", 1);
  const ConvolutionEnsemble c = simulate_convolution(op, G, 0.1, noise(9, 37, TimeGrid::graded(1.0, 32)));
  unsetenv("PARASEMI_THREADS");
  CHECK(a.data() == b.data());
  CHECK(a.data() == c.data());
  const ConvolutionEnsemble d = simulate_convolution(op, G, 0.1, noise(10, 37, TimeGrid::graded(1.0, 32), 1));
  CHECK(a.data() != d.data());
  // path i does not depend on how many paths are drawn
  const ConvolutionEnsemble e = simulate_convolution(op, G, 0.1, noise(9, 5, TimeGrid::graded(1.0, 32), 1));
  CHECK(e.path(4).data() == a.path(4).data());
}

TEST_CASE("fractional power commutes with sampling") {
  const Vec lam{1.0, 3.0, 8.0};
  const SpectralOperator op(lam);
  const double kappa = 0.3;
  const Vec c{1.0, 0.7, 0.4};
  Vec scaled(3);
  for (int k = 0; k < 3; ++k) scaled[k] = std::pow(lam[k], kappa) * c[k];
  const NoiseConfig cfg = noise(2, 25, TimeGrid::uniform(1.0, 32));
  const ConvolutionEnsemble a = simulate_convolution(op, gain(c), kappa, cfg);
  const ConvolutionEnsemble b = simulate_convolution(op, gain(scaled), 0.0, cfg);
  CHECK(a.data() == b.data());
  const ConvolutionEnsemble base = simulate_convolution(op, gain(c), 0.0, cfg);
  for (std::size_t i = 0; i < 25; ++i) {
    const PathSample p = frac_power_path(op, kappa, base.path(i));
    for (std::size_t q = 0; q < p.data().size(); ++q)
      CHECK(p.data()[q] == doctest::Approx(a.path(i).data()[q]).epsilon(1e-12));
  }
}

TEST_CASE("Gaussian marginals: skewness and kurtosis") {
  const SpectralOperator op({1.0, 10.0});
  const std::size_t M = 10000;
  const ConvolutionEnsemble e =
      simulate_convolution(op, gain({1.0, 1.0}), 0.0, noise(13, M, TimeGrid::uniform(1.0, 8)));
  for (std::size_t k = 0; k < 2; ++k) {
    double m = 0;
    for (std::size_t i = 0; i < M; ++i) m += e.value(i, 8)[k];
    m /= M;
    double m2 = 0, m3 = 0, m4 = 0;
    for (std::size_t i = 0; i < M; ++i) {
      const double d = e.value(i, 8)[k] - m;
      m2 += d * d;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
    m2 /= M, m3 /= M, m4 /= M;
    const double skew = m3 / std::pow(m2, 1.5), kurt = m4 / (m2 * m2) - 3.0;
    CHECK(std::abs(skew) / std::sqrt(6.0 / M) <= 4.0);
    CHECK(std::abs(kurt) / std::sqrt(24.0 / M) <= 4.0);
    CHECK(std::abs(m) / std::sqrt(m2 / M) <= 4.0);
  }
}

TEST_CASE("OU transition regression") {
  // E[x(t+h) | x(t)] = e^{-lambda h} x(t): least-squares slope within 3 SE
  const double lam = 2.0;
  const std::size_t M = 10000;
  const ConvolutionEnsemble e =
      simulate_convolution(SpectralOperator({lam}), gain({1.0}), 0.0, noise(17, M, TimeGrid::uniform(1.0, 16)));
  const std::size_t j = 8;
  const double h = 1.0 / 16;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const double x = e.value(i, j)[0], y = e.value(i, j + 1)[0];
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const double r = e.value(i, j + 1)[0] - slope * e.value(i, j)[0];
    rss += r * r;
  }
  const double se = std::sqrt(rss / (M - 1) / sxx);
  CHECK(std::abs(slope - std::exp(-lam * h)) <= 3 * se);
  // innovations are uncorrelated with the past value at lag 1
  double cov = 0;
  for (std::size_t i = 0; i < M; ++i) {
    const double innov = e.value(i, j + 1)[0] - std::exp(-lam * h) * e.value(i, j)[0];
    cov += innov * e.value(i, j - 1)[0];
  }
  CHECK(std::abs(cov / M) <= 4 * std::sqrt(rss / M * sxx / M / M));
}

TEST_CASE("moment profile scales linearly in the gain") {
  const SpectralOperator op({1.0, 2.0});
  const NoiseConfig cfg = noise(4, 500, TimeGrid::uniform(1.0, 32));
  const DiffusionOperator g1 = gain({1.0, 1.0}), g2 = gain({2.0, 2.0});
  const MomentProfile a = convolution_moment_profile(simulate_convolution(op, g1, 0.0, cfg), op, g1);
  const MomentProfile b = convolution_moment_profile(simulate_convolution(op, g2, 0.0, cfg), op, g2);
  for (std::size_t j = 0; j < a.mc_mean_norm.size(); ++j)
    CHECK(b.mc_mean_norm[j] == doctest::Approx(2 * a.mc_mean_norm[j]).epsilon(1e-12));
  CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-12));
  CHECK(std::isfinite(a.ratio));
  for (std::size_t j = 0; j < a.mc_mean_norm.size(); ++j) CHECK(a.mc_mean_norm[j] <= a.envelope[j] * 1.1 + 1e-12);
}

TEST_CASE("Holder exponent estimator") {
  const TimeGrid g = TimeGrid::uniform(1.0, 512);
  PathSample line(g, Vec{1.0, 1.0});
  for (std::size_t j = 0; j < g.size(); ++j) line.value(j)[0] = g[j], line.value(j)[1] = -2 * g[j];
  const ConvolutionEnsemble smooth = ConvolutionEnsemble::from_paths({line});
  CHECK(empirical_holder_exponent(smooth).gamma_hat == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(kind_of([&] { empirical_holder_exponent(smooth, {1, 2, 4}); }) == ErrorKind::input);
  // Brownian limit of a very slow mode
  const ConvolutionEnsemble bm =
      simulate_convolution(SpectralOperator({1e-9}), gain({1.0}), 0.0, noise(6, 4000, g));
  const HolderExponentReport r = empirical_holder_exponent(bm);
  CHECK(r.gamma_hat == doctest::Approx(0.5).epsilon(0.06));
  CHECK(r.band_lo <= r.gamma_hat);
  CHECK(r.band_hi >= r.gamma_hat);
}

TEST_CASE("strict identity residual vanishes at t = 0 and shrinks with the step") {
  const SpectralOperator op({1.0});
  const DiffusionOperator G = gain({1.0}, -1.0);
  const StrictIdentityReport a = strict_identity_check(op, G, noise(7, 400, TimeGrid::uniform(1.0, 64)));
  const StrictIdentityReport b = strict_identity_check(op, G, noise(7, 400, TimeGrid::uniform(1.0, 256)));
  CHECK(a.node_median.front() == 0.0);
  CHECK(b.median_sup < a.median_sup / 4);
}

TEST_CASE("full equation reduces to its parts") {
  const HolderParams h(0.9, 0.2, 1.0);
  const SpectralOperator op({1.0, 2.0});
  const TimeGrid g = TimeGrid::graded(1.0, 64);
  const NoiseConfig cfg = noise(8, 50, g);
  const DeterministicProblem det(op, 0.0, Forcing::closed(ProfileKind::holder_power, {1.0, 1.0}), {1.0, 0.5}, h);
  const StochasticSolution s0 = mild_solve_stochastic(det, gain({0.0, 0.0}, 0.0, ProfileKind::constant, h), 0.0, cfg);
  const SolutionPath d = mild_solve(det, g);
  for (std::size_t i = 0; i < 50; ++i) CHECK(s0.ensemble.path(i).data() == d.x.data());

  const DeterministicProblem quiet(op, 0.0, Forcing::zero(2), {0.0, 0.0}, h);
  const DiffusionOperator G = gain({1.0, 1.0}, 0.0, ProfileKind::constant, h);
  const StochasticSolution s1 = mild_solve_stochastic(quiet, G, 0.2, cfg);
  CHECK(s1.ensemble.data() == simulate_convolution(op, G, 0.2, cfg).data());
  CHECK(std::isfinite(s1.ratio_t49));
  CHECK(s1.mean_holder_norm <= s1.expected_path_holder_norm);
}

TEST_CASE("mean of the stationary stochastic problem") {
  const HolderParams h(0.9, 0.2, 1.0);
  const SpectralOperator op({1.0});
  const DeterministicProblem det(op, 0.0, Forcing::closed(ProfileKind::constant, {1.0}), {1.0}, h);
  const std::size_t M = 4000;
  const StochasticSolution s =
      mild_solve_stochastic(det, gain({1.0}, 0.0, ProfileKind::constant, h), 0.0, noise(12, M, TimeGrid::uniform(1.0, 16)));
  for (std::size_t j = 1; j < 17; ++j) {
    double m = 0, m2 = 0;
    for (std::size_t i = 0; i < M; ++i) m += s.ensemble.value(i, j)[0];
    m /= M;
    for (std::size_t i = 0; i < M; ++i) m2 += std::pow(s.ensemble.value(i, j)[0] - m, 2);
    CHECK(std::abs(m - 1.0) <= 3 * std::sqrt(m2 / (M - 1) / M));
  }
}

TEST_CASE("regime errors name the violated inequality") {
  const SpectralOperator op({1.0});
  const NoiseConfig cfg = noise(1, 2, TimeGrid::graded(1.0, 16));
  auto run = [&](HolderParams h, double a1, double a2, double kappa) {
    return message_of([&] {
      const DeterministicProblem det(op, a1, Forcing::zero(1), {0.0}, h);
      mild_solve_stochastic(det, gain({1.0}, a2, ProfileKind::constant, h), kappa, cfg);
    });
  };
  CHECK(run(HolderParams(0.8, 0.4, 1.0), 0, 0, 0).find("forcing regularity") != std::string::npos);
  CHECK(run(HolderParams(0.9, 0.2, 1.0), 0, 0.4, 0).find("noise regularity") != std::string::npos);
  CHECK(run(HolderParams(0.9, 0.2, 1.0), 0.8, 0, 0.3).find("kappa <= 1 - alpha1") != std::string::npos);
  CHECK(run(HolderParams(0.9, 0.2, 1.0), 0, -0.2, 0.75).find("kappa < 1/2 - alpha2") != std::string::npos);
}
