#include "doctest.h"

#include <cmath>
#include <random>

#include "parasemi/deterministic_mild.hpp"
#include "parasemi/error.hpp"
#include "parasemi/exponential_quadrature.hpp"

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

// Composite Simpson on a fine uniform grid in x for int_0^1 x^m e^{-z(1-x)} dx.
double simpson_moment(double z, double p) {
  const int n = 200000;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    s += w * std::pow(x, p) * std::exp(-z * (1 - x));
  }
  return s / (3.0 * n);
}

const HolderParams kH(0.8, 0.2, 1.0);

}  // namespace

TEST_CASE("exponential moments") {
  for (double z : {0.0, 1e-6, 0.3, 1.49, 1.51, 7.0, 300.0}) {
    const auto psi = exp_moments(z);
    for (int m = 0; m < 3; ++m) CHECK(psi[m] == doctest::Approx(simpson_moment(z, m)).epsilon(1e-9));
  }
  // the singular moment with p = -0.2 against a substitution x = y^5 (smooth integrand)
  for (double z : {0.0, 2.0, 39.0, 41.0, 500.0}) {
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double y = static_cast<double>(i) / n;
      const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
      s += w * 5.0 * std::pow(y, 3.0) * std::exp(-z * (1 - std::pow(y, 5.0)));
    }
    CHECK(singular_exp_moment(z, -0.2) == doctest::Approx(s / (3.0 * n)).epsilon(1e-8));
  }
  const auto c = quadratic_coefficients({0.0, 0.5, 2.0}, {1.0, 1.75, 7.0});
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(1.0));
  CHECK(c[2] == doctest::Approx(1.0));
}

TEST_CASE("closed-form scalar solutions") {
  const SpectralOperator one({1.0});
  const TimeGrid g = TimeGrid::graded(1.0, 64);
  const DeterministicProblem stat(one, 0.0, Forcing::closed(ProfileKind::constant, {1.0}), {1.0},
                                  HolderParams(1.0, 0.5, 1.0));
  const SolutionPath s = mild_solve(stat, g);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(s.x.value(j)[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(strict_residual(s, stat) <= s.quadrature_tol + 1e-15);

  const DeterministicProblem decay(one, 0.0, Forcing::zero(1), {1.0}, HolderParams(1.0, 0.5, 1.0));
  const SolutionPath d = mild_solve(decay, g);
  CHECK(d.x.value(64)[0] == doctest::Approx(0.367879441171442).epsilon(1e-14));
  CHECK(strict_residual(d, decay) <= d.quadrature_tol + 1e-15);

  // frozen adaptive-quadrature oracle: int_0^1 e^{-2(1-s)} s^{-0.2} ds
  const DeterministicProblem pw(SpectralOperator({2.0}), 0.0, Forcing::closed(ProfileKind::power, {1.0}),
                                {0.0}, kH);
  const SolutionPath p = mild_solve(pw, TimeGrid::graded(1.0, 1024));
  CHECK(std::abs(p.x.value(1024)[0] - 0.491045743440962082855783497125) <= 1e-6);
}

TEST_CASE("errors") {
  const SpectralOperator one({1.0});
  CHECK(kind_of([&] { DeterministicProblem(one, 1.0, Forcing::zero(1), {0.0}, kH); }) == ErrorKind::regime);
  CHECK(kind_of([&] { DeterministicProblem(one, 0.0, Forcing::zero(2), {0.0}, kH); }) == ErrorKind::shape);
  const DeterministicProblem p(one, 0.5, Forcing::closed(ProfileKind::holder_power, {1.0}), {0.0}, kH);
  const SolutionPath s = mild_solve(p, TimeGrid::graded(1.0, 32));
  CHECK(kind_of([&] { strict_residual(s, p); }) == ErrorKind::regime);
  CHECK(kind_of([&] { mild_solve(p, TimeGrid::uniform(1.0, 16, 0.1)); }) == ErrorKind::input);
  const DeterministicProblem osc(one, 0.0, Forcing::closed(ProfileKind::power, {1.0}), {0.0}, kH);
  CHECK(kind_of([&] { maximal_regularity_report(mild_solve(osc, TimeGrid::graded(1.0, 256)), osc); }) ==
        ErrorKind::precondition);
}

TEST_CASE("t1 estimate for the free decay") {
  const SpectralOperator one({1.0});
  const TimeGrid g = TimeGrid::graded(1.0, 256);
  const DeterministicProblem p(one, 0.0, Forcing::zero(1), {1.0}, HolderParams(1.0, 0.5, 1.0));
  const RegularityReport r = t1_estimate_check(mild_solve(p, g), p);
  // (1 + t) e^{-t} peaks at the first positive node
  CHECK(r.ratio_t1 == doctest::Approx((1.0 + g[1]) * std::exp(-g[1])).epsilon(1e-12));
  CHECK(r.ratio_t1 < 1.0);
  const DeterministicProblem p2(one, 0.0, Forcing::zero(1), {2.0}, HolderParams(1.0, 0.5, 1.0));
  CHECK(t1_estimate_check(mild_solve(p2, g), p2).ratio_t1 == doctest::Approx(r.ratio_t1).epsilon(1e-14));

  const DeterministicProblem zero(one, 0.0, Forcing::zero(1), {0.0}, HolderParams(1.0, 0.5, 1.0));
  const RegularityReport z = full_regularity_report(mild_solve(zero, g), zero);
  CHECK(z.ratio_t1 == 0.0);
  CHECK(*z.ratio_t24 == 0.0);
  CHECK(*z.ratio_t25 == 0.0);
}

TEST_CASE("exact derivative is consistent with the equation") {
  Vec lam{1.0, 4.0, 9.0};
  const DeterministicProblem p(SpectralOperator(lam), 0.0,
                               Forcing::closed(ProfileKind::holder_power, {1.0, 0.5, 0.25}), {1.0, 1.0, 1.0},
                               HolderParams(0.8, 0.1, 1.0));
  const TimeGrid g = TimeGrid::graded(1.0, 256);
  const SolutionPath s = mild_solve(p, g);
  const PathSample f = forcing_path(p, g);
  for (std::size_t j = 1; j < g.size(); ++j)
    for (std::size_t k = 0; k < 3; ++k)
      CHECK(s.dxdt.value(j)[k] == doctest::Approx(-lam[k] * s.x.value(j)[k] + f.value(j)[k]).epsilon(1e-12));
}

TEST_CASE("property: linearity and mode permutation") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Vec lam{0.5, 2.0, 3.0, 10.0};
  const SpectralOperator op(lam);
  const TimeGrid g = TimeGrid::graded(1.0, 128);
  const HolderParams h(0.8, 0.1, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vec x1(4), x2(4), c1(4), c2(4);
    for (int k = 0; k < 4; ++k) x1[k] = U(rng), x2[k] = U(rng), c1[k] = U(rng), c2[k] = U(rng);
    const double a = U(rng), b = U(rng);
    Vec xs(4), cs(4);
    for (int k = 0; k < 4; ++k) xs[k] = a * x1[k] + b * x2[k], cs[k] = a * c1[k] + b * c2[k];
    auto solve = [&](const Vec& x, const Vec& c) {
      return mild_solve(DeterministicProblem(op, 0.0, Forcing::closed(ProfileKind::holder_power, c), x, h), g).x;
    };
    const PathSample s1 = solve(x1, c1), s2 = solve(x2, c2), ss = solve(xs, cs);
    const PathSample comb = s1.linear_combination(a, s2, b);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < comb.data().size(); ++i) {
      err = std::max(err, std::abs(comb.data()[i] - ss.data()[i]));
      scale = std::max(scale, std::abs(ss.data()[i]));
    }
    CHECK(err <= 1e-10 * scale);
  }
  // eigenvalues must stay sorted, so permute within a repeated eigenvalue
  const SpectralOperator twin({2.0, 2.0});
  const DeterministicProblem t1(twin, 0.0, Forcing::closed(ProfileKind::holder_power, {1.0, 5.0}), {3.0, -1.0}, h);
  const DeterministicProblem t2(twin, 0.0, Forcing::closed(ProfileKind::holder_power, {5.0, 1.0}), {-1.0, 3.0}, h);
  const PathSample y1 = mild_solve(t1, g).x, y2 = mild_solve(t2, g).x;
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(y1.value(j)[0] == y2.value(j)[1]);
    CHECK(y1.value(j)[1] == y2.value(j)[0]);
  }
}

TEST_CASE("property: restart from an interior time reproduces the one-shot solve") {
  const SpectralOperator op({1.0, 3.0});
  const HolderParams h(1.0, 0.5, 1.0);
  const DeterministicProblem full(op, 0.0, Forcing::closed(ProfileKind::constant, {1.0, -2.0}), {0.5, 0.5}, h);
  const SolutionPath one = mild_solve(full, TimeGrid::uniform(1.0, 64));
  const SolutionPath first = mild_solve(
      DeterministicProblem(op, 0.0, Forcing::closed(ProfileKind::constant, {1.0, -2.0}), {0.5, 0.5},
                           HolderParams(1.0, 0.5, 0.5)),
      TimeGrid::uniform(0.5, 32));
  const Vec mid(first.x.value(32).begin(), first.x.value(32).end());
  const SolutionPath second = mild_solve(
      DeterministicProblem(op, 0.0, Forcing::closed(ProfileKind::constant, {1.0, -2.0}), mid,
                           HolderParams(1.0, 0.5, 0.5)),
      TimeGrid::uniform(0.5, 32));
  const double tol = 2 * std::max({one.quadrature_tol, first.quadrature_tol, second.quadrature_tol, 1e-15});
  for (std::size_t k = 0; k < 2; ++k)
    CHECK(std::abs(second.x.value(32)[k] - one.x.value(64)[k]) <= tol * 10 + 1e-14);

  // time-dependent forcing: sample the shifted forcing for the restart
  const HolderParams hp(0.8, 0.1, 2.0);
  const DeterministicProblem tv(op, 0.0, Forcing::closed(ProfileKind::holder_power, {1.0, 1.0}), {0.0, 0.0}, hp);
  const TimeGrid g = TimeGrid::graded_uniform(2.0, 1.0, 256, 256);
  const SolutionPath shot = mild_solve(tv, g);
  const std::size_t jm = g.find(1.0);
  REQUIRE(jm != TimeGrid::npos);
  const TimeGrid tail = TimeGrid::uniform(1.0, 256);
  PathSample shifted(tail, Vec{1.0, 1.0});
  for (std::size_t j = 0; j < tail.size(); ++j)
    for (std::size_t k = 0; k < 2; ++k)
      shifted.value(j)[k] = profile_value(ProfileKind::holder_power, 0.8, 0.1, 1.0 + tail[j]);
  const Vec x1(shot.x.value(jm).begin(), shot.x.value(jm).end());
  const SolutionPath rest =
      mild_solve(DeterministicProblem(op, 0.0, Forcing::from_samples(shifted), x1, HolderParams(1.0, 0.5, 1.0)), tail);
  const double tol2 = 2 * std::max({shot.quadrature_tol, rest.quadrature_tol, 1e-12});
  for (std::size_t k = 0; k < 2; ++k)
    CHECK(std::abs(rest.x.value(256)[k] - shot.x.value(g.size() - 1)[k]) <= tol2);
}

TEST_CASE("strict residual decays under refinement") {
  const DeterministicProblem p(SpectralOperator({2.0}), 0.0, Forcing::closed(ProfileKind::power, {1.0}), {0.0}, kH);
  double prev = INFINITY;
  for (std::size_t M : {64, 128, 256, 512}) {
    const double r = strict_residual(mild_solve(p, TimeGrid::graded(1.0, M)), p);
    CHECK(r <= prev / 2);
    prev = r;
  }
}
