#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "parasemi/error.hpp"
#include "parasemi/spectral_core.hpp"

using namespace parasemi;

namespace {

SpectralOperator ladder(int n) {
  Vec lam;
  for (int k = 1; k <= n; ++k) lam.push_back(k);
  return SpectralOperator(lam);
}

// e^{-x} by a long Taylor series, independent of std::exp.
double taylor_exp_neg(double x) {
  double term = 1.0, sum = 1.0;
  for (int n = 1; n < 60; ++n) {
    term *= -x / n;
    sum += term;
  }
  return sum;
}

Vec dyadic_grid(double lo, double hi) {
  Vec g;
  for (double t = lo; t <= hi * (1 + 1e-12); t *= 2) g.push_back(t);
  return g;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::input;
}

}  // namespace

TEST_CASE("operator construction validates its spectrum") {
  CHECK(kind_of([] { SpectralOperator({}); }) == ErrorKind::input);
  CHECK(kind_of([] { SpectralOperator({2.0, 1.0}); }) == ErrorKind::input);
  CHECK(kind_of([] { SpectralOperator({0.0, 1.0}); }) == ErrorKind::input);
  CHECK(kind_of([] { SpectralOperator({1.0}, {-1.0}); }) == ErrorKind::input);
  CHECK(kind_of([] { SpectralOperator({1.0, 2.0}, {1.0}); }) == ErrorKind::shape);
  const SpectralOperator op({1.0, 2.0});
  CHECK(op.weights() == Vec{1.0, 1.0});
  const SpectralOperator w({1.0, 2.0}, {4.0, 9.0});
  CHECK(w.norm(Vec{1.0, 1.0}) == doctest::Approx(std::sqrt(13.0)));
}

TEST_CASE("semigroup action") {
  const SpectralOperator one({1.0});
  CHECK(semigroup_apply(one, 0.0, 0.0, Vec{3.5})[0] == 3.5);
  CHECK(semigroup_apply(one, 1.0, 1.0, Vec{1.0})[0] == doctest::Approx(taylor_exp_neg(1.0)).epsilon(1e-14));
  CHECK(kind_of([&] { semigroup_apply(one, 0.0, 0.5, Vec{1.0}); }) == ErrorKind::singularity);
  CHECK(kind_of([&] { semigroup_apply(one, 1.0, 0.0, Vec{1.0, 2.0}); }) == ErrorKind::shape);

  // sup_t t ||A S(t)|| over a dyadic grid for lambda = 1..50, brute force
  const SpectralOperator op = ladder(50);
  double sup = 0.0;
  for (double t : dyadic_grid(1.0 / 1024, 64.0))
    for (int k = 1; k <= 50; ++k) sup = std::max(sup, t * k * taylor_exp_neg(k * t));
  const BoundProfile bp = semigroup_bound_profile(op, 1.0, dyadic_grid(1.0 / 1024, 64.0));
  double obs = 0.0;
  for (double v : bp.observed) obs = std::max(obs, v);
  CHECK(obs == doctest::Approx(sup).epsilon(1e-12));
  CHECK(obs == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("fractional powers") {
  CHECK(frac_power_apply(SpectralOperator({4.0}), 0.5, Vec{1.0})[0] == doctest::Approx(2.0));
  const SpectralOperator op = ladder(50);
  Vec v(50, 1.0);
  CHECK(frac_power_apply(op, 0.0, v) == v);
  double opnorm = 0.0;
  for (int k = 0; k < 50; ++k) {
    Vec e(50, 0.0);
    e[k] = 1.0;
    opnorm = std::max(opnorm, op.norm(frac_power_apply(op, -0.3, e)));
  }
  CHECK(opnorm == doctest::Approx(1.0));
}

TEST_CASE("resolvent") {
  const SpectralOperator one({1.0});
  CHECK(resolvent_apply(one, -1.0, Vec{1.0})[0].real() == doctest::Approx(-0.5));
  CHECK(1.0 * resolvent_norm(one, -1.0) == doctest::Approx(0.5));
  const SpectralOperator two({1.0, 2.0});
  CHECK(resolvent_norm(two, {0.0, 3.0}) == doctest::Approx(1.0 / std::sqrt(10.0)));
  CHECK(kind_of([&] { resolvent_apply(two, 2.0, Vec{1.0, 1.0}); }) == ErrorKind::spectrum_hit);
}

TEST_CASE("sector verification") {
  const SpectralOperator one({1.0});
  const SectorReport dense = verify_sectorial(one, std::numbers::pi / 4, 8192);
  CHECK(dense.m_estimate == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
  CHECK(dense.pass);
  const SectorReport axis = verify_sectorial(one, std::numbers::pi / 4, 64, SectorRays::negative_axis);
  CHECK(axis.m_estimate == doctest::Approx(1.0));
  CHECK(kind_of([&] { verify_sectorial(one, 2.0); }) == ErrorKind::input);
  CHECK(kind_of([&] { verify_sectorial(one, 0.5, 4); }) == ErrorKind::input);
}

TEST_CASE("certified smoothing bound") {
  CHECK(certified_smoothing_bound(0.0) == 1.0);
  CHECK(certified_smoothing_bound(1.0) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(certified_smoothing_bound(0.5) == doctest::Approx(0.428882).epsilon(1e-6));
  // brute-force scan of x^theta e^{-x} on (0, 20]
  for (double theta : {0.25, 0.5, 1.0, 2.0}) {
    double m = 0.0;
    for (int i = 1; i <= 200000; ++i) {
      const double x = 20.0 * i / 200000;
      m = std::max(m, std::pow(x, theta) * std::exp(-x));
    }
    CHECK(m == doctest::Approx(certified_smoothing_bound(theta)).epsilon(1e-8));
  }
}

TEST_CASE("theta = 0 profile follows the slowest mode") {
  const SpectralOperator op = ladder(5);
  const Vec g = dyadic_grid(0.01, 10.0);
  const BoundProfile bp = semigroup_bound_profile(op, 0.0, g);
  CHECK(bp.certified_bound == 1.0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(bp.observed[j] == doctest::Approx(std::exp(-g[j])));
    CHECK(bp.observed[j] <= 1.0);
  }
  CHECK(kind_of([&] { semigroup_bound_profile(op, 1.0, Vec{}); }) == ErrorKind::input);
}

TEST_CASE("Yosida approximation") {
  CHECK(yosida(SpectralOperator({1.0}), 1).eigenvalues()[0] == doctest::Approx(0.5));
  CHECK(yosida(SpectralOperator({100.0}), 1).eigenvalues()[0] == doctest::Approx(100.0 / 101.0));
  double prev = 0.0;
  for (std::int64_t n = 1; n <= (1 << 20); n *= 2) {
    const double l = yosida(SpectralOperator({1.0}), n).eigenvalues()[0];
    CHECK(l > prev);
    CHECK(l < std::min(1.0, static_cast<double>(n)));
    prev = l;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-5));

  const YosidaReport r = yosida_gap(SpectralOperator({1.0}), 10, 0.0, Vec{1.0});
  CHECK(r.gap == doctest::Approx(0.0350108803576906768).epsilon(1e-13));
  const YosidaReport inv = yosida_gap(SpectralOperator({2.0}), 2, 1.0, Vec{1.0});
  CHECK(inv.inv_gap == doctest::Approx(0.5));
}

TEST_CASE("property: semigroup law and commutation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(U(rng) * 40);
    Vec lam(n), v(n);
    for (auto& l : lam) l = 0.01 + 100.0 * U(rng);
    std::sort(lam.begin(), lam.end());
    for (auto& x : v) x = 2.0 * U(rng) - 1.0;
    const SpectralOperator op(lam);
    const double t = 2.0 * U(rng), s = 2.0 * U(rng), theta = 1.5 * U(rng);
    const Vec lhs = semigroup_apply(op, t + s, 0.0, v);
    const Vec rhs = semigroup_apply(op, t, 0.0, semigroup_apply(op, s, 0.0, v));
    for (int k = 0; k < n; ++k)
      CHECK(std::abs(lhs[k] - rhs[k]) <= 8 * std::numeric_limits<double>::epsilon() * std::abs(v[k]));
    const Vec a = frac_power_apply(op, theta, semigroup_apply(op, t + 0.01, 0.0, v));
    const Vec b = semigroup_apply(op, t + 0.01, theta, v);
    for (int k = 0; k < n; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-13));
    const Vec id = frac_power_apply(op, theta, frac_power_apply(op, -theta, v));
    for (int k = 0; k < n; ++k) CHECK(id[k] == doctest::Approx(v[k]).epsilon(1e-13));
  }
}

TEST_CASE("property: resolvent identity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const SpectralOperator op = ladder(30);
  for (int trial = 0; trial < 50; ++trial) {
    Vec v(30);
    for (auto& x : v) x = U(rng);
    const std::complex<double> z(-5.0 + 3 * U(rng), 10 * U(rng)), mu(-1.0 + U(rng), 10 * U(rng));
    const auto rz = resolvent_apply(op, z, v);
    const auto rm = resolvent_apply(op, mu, v);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 30; ++k) {
      const std::complex<double> rhs = (mu - z) * rz[k] / (mu - op.eigenvalues()[k]);
      num += std::norm(rz[k] - rm[k] - rhs);
      den += std::norm(rz[k] - rm[k]);
    }
    CHECK(std::sqrt(num / den) <= 1e-10);
  }
}

TEST_CASE("property: sector monotone as rays approach the spectrum") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vec lam(10);
    for (auto& l : lam) l = 0.1 + 50 * U(rng);
    std::sort(lam.begin(), lam.end());
    const SpectralOperator op(lam);
    double prev = 0.0;
    for (double ang : {1.4, 1.1, 0.8, 0.5, 0.2}) {
      const SectorReport r = verify_sectorial(op, ang);
      CHECK(r.m_estimate >= 1.0 - 1e-15);
      CHECK(r.m_estimate >= prev);
      prev = r.m_estimate;
    }
  }
}

TEST_CASE("property: Yosida gaps are monotone and vanish") {
  const SpectralOperator op = ladder(20);
  Vec grid;
  for (int j = 0; j < 64; ++j) grid.push_back(std::pow(10.0, -3.0 + 5.0 * j / 63.0));
  for (double nu : {0.0, 0.5, 1.0}) {
    double pg = INFINITY, pi = INFINITY, smooth = 0.0;
    YosidaReport last, before;
    for (int j = 0; j <= 16; ++j) {
      before = last;
      last = yosida_gap(op, std::int64_t{1} << j, nu, grid);
      CHECK(last.gap <= pg + 1e-12);
      CHECK(last.inv_gap <= pi + 1e-12);
      pg = last.gap;
      pi = last.inv_gap;
      smooth = std::max(smooth, last.uniform_smoothing);
    }
    // first-order rate: one more doubling halves the gap
    CHECK(before.gap / last.gap == doctest::Approx(2.0).epsilon(0.05));
    CHECK(smooth <= certified_smoothing_bound(nu) + 1e-12);
  }
}
