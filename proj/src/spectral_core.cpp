#include "parasemi/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "parasemi/error.hpp"

namespace parasemi {

SpectralOperator::SpectralOperator(Vec eigenvalues, Vec weights)
    : lambda_(std::move(eigenvalues)), w_(std::move(weights)) {
  if (lambda_.empty()) throw Error(ErrorKind::input, "operator needs at least one eigenvalue");
  if (w_.empty()) w_.assign(lambda_.size(), 1.0);
  if (w_.size() != lambda_.size())
    throw Error(ErrorKind::shape, "weights and eigenvalues differ in length");
  for (std::size_t k = 0; k < lambda_.size(); ++k) {
    if (!(lambda_[k] > 0.0) || !std::isfinite(lambda_[k]))
      throw Error(ErrorKind::input, "eigenvalue " + std::to_string(k) + " is not strictly positive");
    if (k > 0 && lambda_[k] < lambda_[k - 1])
      throw Error(ErrorKind::input, "eigenvalues must be sorted ascending");
    if (!(w_[k] > 0.0) || !std::isfinite(w_[k]))
      throw Error(ErrorKind::input, "weight " + std::to_string(k) + " is not strictly positive");
  }
}

double SpectralOperator::norm_squared(std::span<const double> v) const {
  check_shape(*this, v.size());
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += w_[k] * v[k] * v[k];
  return s;
}

double SpectralOperator::norm(std::span<const double> v) const {
  return std::sqrt(norm_squared(v));
}

void check_shape(const SpectralOperator& op, std::size_t n) {
  if (n != op.dim())
    throw Error(ErrorKind::shape, "vector length " + std::to_string(n) +
                                      " does not match operator dimension " +
                                      std::to_string(op.dim()));
}

Vec semigroup_apply(const SpectralOperator& op, double t, double theta,
                    std::span<const double> v) {
  check_shape(op, v.size());
  if (t < 0.0) throw Error(ErrorKind::input, "semigroup time must be non-negative");
  if (theta > 0.0 && t == 0.0)
    throw Error(ErrorKind::singularity, "A^theta S(0) is unbounded for theta > 0");
  if (theta < 0.0) throw Error(ErrorKind::input, "semigroup_apply expects theta >= 0");
  Vec out(v.begin(), v.end());
  if (t == 0.0 && theta == 0.0) return out;
  const auto& lam = op.eigenvalues();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double f = theta == 0.0 ? std::exp(-lam[k] * t)
                                  : std::exp(theta * std::log(lam[k]) - lam[k] * t);
    out[k] *= f;
  }
  return out;
}

Vec frac_power_apply(const SpectralOperator& op, double theta,
                     std::span<const double> v) {
  check_shape(op, v.size());
  Vec out(v.begin(), v.end());
  if (theta == 0.0) return out;
  const auto& lam = op.eigenvalues();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::pow(lam[k], theta);
  return out;
}

std::vector<std::complex<double>> resolvent_apply(const SpectralOperator& op,
                                                  std::complex<double> z,
                                                  std::span<const double> v) {
  check_shape(op, v.size());
  const auto& lam = op.eigenvalues();
  std::vector<std::complex<double>> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::complex<double> d = z - lam[k];
    if (d == 0.0) throw Error(ErrorKind::spectrum_hit, "resolvent evaluated on an eigenvalue");
    out[k] = v[k] / d;
  }
  return out;
}

double resolvent_norm(const SpectralOperator& op, std::complex<double> z) {
  double best = 0.0;
  for (double l : op.eigenvalues()) {
    const double d = std::abs(z - l);
    if (d == 0.0) throw Error(ErrorKind::spectrum_hit, "resolvent evaluated on an eigenvalue");
    best = std::max(best, 1.0 / d);
  }
  return best;
}

SectorReport verify_sectorial(const SpectralOperator& op, double angle,
                              std::size_t ray_samples, SectorRays rays) {
  if (!(angle > 0.0 && angle < std::numbers::pi / 2))
    throw Error(ErrorKind::input, "sector angle must lie in (0, pi/2)");
  if (ray_samples < 8) throw Error(ErrorKind::input, "need at least 8 samples per ray");

  const double lo = std::log(op.lambda_min() / 100.0);
  const double hi = std::log(op.lambda_max() * 100.0);
  std::vector<double> args{std::numbers::pi};
  if (rays == SectorRays::all) {
    args.push_back(angle);
    args.push_back(-angle);
  }

  SectorReport rep;
  rep.angle = angle;
  // The |z| -> infinity limit along every ray is 1; it belongs to the sup.
  double m = 1.0;
  for (double arg : args) {
    for (std::size_t i = 0; i < ray_samples; ++i) {
      const double r = std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                         static_cast<double>(ray_samples - 1));
      const std::complex<double> z = std::polar(r, arg);
      m = std::max(m, r * resolvent_norm(op, z));
      ++rep.samples_used;
    }
  }
  rep.m_estimate = m;
  rep.pass = std::isfinite(m);
  return rep;
}

double certified_smoothing_bound(double theta) {
  if (theta < 0.0) throw Error(ErrorKind::input, "theta must be non-negative");
  if (theta == 0.0) return 1.0;
  return std::pow(theta / std::numbers::e, theta);
}

BoundProfile semigroup_bound_profile(const SpectralOperator& op, double theta,
                                     std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorKind::input, "empty grid");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] > 0.0)) throw Error(ErrorKind::input, "grid nodes must be positive");
    if (j > 0 && !(grid[j] > grid[j - 1]))
      throw Error(ErrorKind::input, "grid must be strictly increasing");
  }
  BoundProfile p;
  p.theta = theta;
  p.grid.assign(grid.begin(), grid.end());
  p.certified_bound = certified_smoothing_bound(theta);
  p.observed.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double best = 0.0;
    for (double l : op.eigenvalues()) {
      const double x = l * grid[j];
      // t^theta lambda^theta e^{-lambda t} = x^theta e^{-x}
      const double v = theta == 0.0 ? std::exp(-x) : std::exp(theta * std::log(x) - x);
      best = std::max(best, v);
    }
    p.observed[j] = best;
    if (best > p.certified_bound + 1e-12) p.violation = true;
  }
  return p;
}

SpectralOperator yosida(const SpectralOperator& op, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::input, "Yosida index must be >= 1");
  const double nn = static_cast<double>(n);
  Vec lam = op.eigenvalues();
  for (double& l : lam) l = nn * l / (nn + l);
  return SpectralOperator(std::move(lam), op.weights());
}

YosidaReport yosida_gap(const SpectralOperator& op, std::int64_t n, double nu,
                        std::span<const double> grid) {
  for (double t : grid)
    if (!(t > 0.0)) throw Error(ErrorKind::input, "grid nodes must be positive");
  const SpectralOperator yn = yosida(op, n);
  const auto& lam = op.eigenvalues();
  const auto& lan = yn.eigenvalues();
  YosidaReport r;
  r.n = n;
  r.nu = nu;
  for (double t : grid) {
    for (std::size_t k = 0; k < lam.size(); ++k) {
      const double a = std::pow(lan[k], nu) * std::exp(-lan[k] * t);
      const double b = std::pow(lam[k], nu) * std::exp(-lam[k] * t);
      r.gap = std::max(r.gap, std::abs(a - b));
      r.uniform_smoothing = std::max(r.uniform_smoothing, std::pow(t, nu) * a);
    }
  }
  for (std::size_t k = 0; k < lam.size(); ++k) {
    r.inv_gap = std::max(r.inv_gap, std::abs(std::pow(lan[k], -nu) - std::pow(lam[k], -nu)));
    if (nu > 0.0) r.uniform_inverse = std::max(r.uniform_inverse, std::pow(lan[k], -nu));
  }
  return r;
}

}  // namespace parasemi
