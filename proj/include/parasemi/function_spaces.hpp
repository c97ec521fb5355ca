#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "parasemi/spectral_core.hpp"

namespace parasemi {

/// Exponent pair (beta, sigma) and horizon T, with 0 < sigma < beta <= 1.
struct HolderParams {
  double beta = 1.0;
  double sigma = 0.5;
  double T = 1.0;

  HolderParams() = default;
  HolderParams(double beta, double sigma, double T);
};

/// Strictly increasing time nodes, t_0 >= 0.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(Vec nodes, double grading = 1.0);

  /// t_j = T (j/M)^r, j = 0..M.
  static TimeGrid graded(double T, std::size_t M, double r = 2.0);
  /// t_j = t0 + (T - t0) j/M, j = 0..M.
  static TimeGrid uniform(double T, std::size_t M, double t0 = 0.0);
  /// Graded on [0, eps] with Mg intervals, then uniform on [eps, T] with Mu.
  static TimeGrid graded_uniform(double T, double eps, std::size_t Mg,
                                 std::size_t Mu, double r = 2.0);

  const Vec& nodes() const noexcept { return t_; }
  std::size_t size() const noexcept { return t_.size(); }
  std::size_t intervals() const noexcept { return t_.size() - 1; }
  double operator[](std::size_t j) const { return t_[j]; }
  double front() const { return t_.front(); }
  double back() const { return t_.back(); }
  double grading() const noexcept { return r_; }

  /// Index of node equal to t (relative tolerance 1e-12), or npos.
  std::size_t find(double t) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Vec t_;
  double r_ = 1.0;
};

/// A sampled path in the weighted sequence space: one coefficient vector per
/// node, stored row-major (node-major).
class PathSample {
 public:
  PathSample() = default;
  PathSample(TimeGrid grid, Vec weights);
  PathSample(TimeGrid grid, Vec weights, Vec data);

  const TimeGrid& grid() const noexcept { return grid_; }
  const Vec& weights() const noexcept { return w_; }
  std::size_t dim() const noexcept { return w_.size(); }
  std::size_t size() const noexcept { return grid_.size(); }

  std::span<const double> value(std::size_t j) const {
    return {data_.data() + j * dim(), dim()};
  }
  std::span<double> value(std::size_t j) { return {data_.data() + j * dim(), dim()}; }
  const Vec& data() const noexcept { return data_; }
  Vec& data() noexcept { return data_; }

  double norm_at(std::size_t j) const;
  double norm_of(std::span<const double> v) const;

  /// Multiplies mode k by d[k] at every node.
  PathSample apply_diagonal(std::span<const double> d) const;
  /// a*this + b*other on the same grid.
  PathSample linear_combination(double a, const PathSample& other, double b) const;

 private:
  TimeGrid grid_;
  Vec w_;
  Vec data_;
};

/// Same grid, weights and data as a sample of A^theta applied pointwise.
PathSample frac_power_path(const SpectralOperator& op, double theta, const PathSample& p);

enum class ProfileKind { constant, power, power_plus_holder, holder_power, oscillatory };

ProfileKind parse_profile_kind(const std::string& name);
const char* to_string(ProfileKind kind) noexcept;

/// Scalar time profile phi(t). Singular kinds store 0 at t = 0 (or the
/// finite limit when the exponent is zero).
double profile_value(ProfileKind kind, double beta, double sigma, double t);
/// Closed form of int_0^t phi(s) ds; oscillatory has none (input error).
double profile_antiderivative(ProfileKind kind, double beta, double sigma, double t);
/// True when phi(t) ~ t^{beta-1} is unbounded at 0.
bool profile_is_singular(ProfileKind kind, double beta, double sigma);
/// True for kinds with t^{1-beta} phi(t) bounded near 0 and a closed form integral.
bool profile_has_closed_form(ProfileKind kind) noexcept;

/// f(t) = phi(t) v on the grid.
PathSample make_test_function(ProfileKind kind, const HolderParams& params,
                              std::span<const double> v, const TimeGrid& grid,
                              std::span<const double> weights = {});

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v) noexcept;

struct MembershipReport {
  Verdict limit = Verdict::inconclusive;      // t^{1-beta} f(t) has a limit at 0
  Verdict vanishing = Verdict::inconclusive;  // w_f(t) -> 0
  Vec levels;        // dyadic tail levels tau_m
  Vec limit_tail;    // diameter of t^{1-beta} f over (0, tau_m]
  Vec modulus_tail;  // sup of w_f over (0, tau_m]
  double limit_slope = 0.0;
  double modulus_slope = 0.0;
  bool member() const { return limit == Verdict::pass && vanishing == Verdict::pass; }
};

struct HolderNormReport {
  double sup_term = 0.0;
  double seminorm = 0.0;
  double total = 0.0;
  Vec w_profile;
  bool limit_flag = false;      // limit at 0 detected
  bool vanishing_flag = false;  // w_f -> 0 detected
  MembershipReport membership;
};

struct MembershipOptions {
  double modulus_tol = 1e-2;  // relative to total
  double min_slope = 0.05;
  std::size_t min_band_nodes = 8;
  std::size_t min_levels = 3;
};

HolderNormReport weighted_holder_norm(const PathSample& path, const HolderParams& params,
                                      const MembershipOptions& opts = {});

MembershipReport membership_diagnostics(const PathSample& path, const HolderParams& params,
                                        const MembershipOptions& opts = {});

/// int_s^t (t-u)^{a-1} (u-s)^{b-1} du by tanh-sinh quadrature.
double beta_kernel_integral(double a, double b, double s, double t);
/// (t-s)^{a+b-1} B(b, a) via log-Gamma.
double beta_kernel_closed_form(double a, double b, double s, double t);

}  // namespace parasemi
