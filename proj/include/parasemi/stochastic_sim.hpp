#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parasemi/deterministic_mild.hpp"
#include "parasemi/function_spaces.hpp"
#include "parasemi/spectral_core.hpp"

namespace parasemi {

/// Diagonal noise gains: G(t) e_k = coeffs_k * phi(t) e_k, so that
/// ||G(t)||_HS^2 = sum_k w_k (coeffs_k phi(t))^2.
struct DiffusionOperator {
  ProfileKind kind = ProfileKind::constant;
  Vec coeffs;
  double alpha2 = 0.0;
  HolderParams params;

  bool is_zero() const;
  /// phi at the left end of step [t_j, t_{j+1}]; singular profiles use t_1/2 at t = 0.
  double frozen_profile(double tj, double tnext) const;
};

struct NoiseConfig {
  std::uint64_t seed = 0;
  std::size_t n_paths = 1;
  TimeGrid grid;
  std::vector<std::uint32_t> mode_keys;  // stream id per mode; empty = mode index
  std::size_t threads = 0;               // 0 = PARASEMI_THREADS / hardware
};

/// Monte-Carlo paths of A^kappa W_G, stored path-major then node-major.
class ConvolutionEnsemble {
 public:
  ConvolutionEnsemble() = default;
  ConvolutionEnsemble(double kappa, NoiseConfig config, Vec weights, Vec data);
  /// Builds a (degenerate) ensemble from explicit paths on a common grid.
  static ConvolutionEnsemble from_paths(const std::vector<PathSample>& paths, double kappa = 0.0);

  double kappa() const noexcept { return kappa_; }
  const NoiseConfig& config() const noexcept { return cfg_; }
  const TimeGrid& grid() const noexcept { return cfg_.grid; }
  const Vec& weights() const noexcept { return w_; }
  std::size_t dim() const noexcept { return w_.size(); }
  std::size_t n_paths() const noexcept { return cfg_.n_paths; }
  std::size_t n_nodes() const noexcept { return cfg_.grid.size(); }

  std::span<const double> value(std::size_t path, std::size_t node) const {
    return {data_.data() + (path * n_nodes() + node) * dim(), dim()};
  }
  PathSample path(std::size_t i) const;
  const Vec& data() const noexcept { return data_; }

  /// Ensemble mean of each coordinate at every node.
  PathSample mean_path() const;

 private:
  double kappa_ = 0.0;
  NoiseConfig cfg_;
  Vec w_;
  Vec data_;
};

/// Regime check kappa < 1/2 - alpha2; grid must start at 0.
ConvolutionEnsemble simulate_convolution(const SpectralOperator& op, const DiffusionOperator& G,
                                         double kappa, const NoiseConfig& config);

struct IsometryReport {
  double t = 0.0;
  double mc_mean_square = 0.0;
  double analytic = 0.0;
  double standard_error = 0.0;
  double z_score = 0.0;
  bool pass = false;
  std::string warning;
};

/// sum_k w_k int_0^t e^{-2 lam_k (t-s)} g_k(s)^2 ds (with A^kappa gains when kappa != 0).
double analytic_second_moment(const SpectralOperator& op, const DiffusionOperator& G, double t,
                              double kappa = 0.0);

/// Streams paths up to node t (which must be a grid node). When offset is
/// given, the MC estimate is of E||offset + W_G(t)||^2 and the analytic value
/// includes ||offset||^2.
IsometryReport ito_isometry_check(const SpectralOperator& op, const DiffusionOperator& G,
                                  double t, const NoiseConfig& config,
                                  std::span<const double> offset = {});

struct MomentProfile {
  Vec t;
  Vec mc_mean_norm;   // E||A^kappa W_G(t)||
  Vec envelope;       // sqrt(E||A^kappa W_G(t)||^2), analytic
  Vec shape;          // max{t^{beta-alpha2-kappa-1/2}, t^{beta-1/2}}
  double gain_norm = 0.0;  // ||A^{-alpha2} G||_F in the HS norm
  double ratio = 0.0;      // sup_t mc / (gain_norm * shape)
};

MomentProfile convolution_moment_profile(const ConvolutionEnsemble& ens,
                                         const SpectralOperator& op,
                                         const DiffusionOperator& G);

/// ||A^{-alpha2} G||_F on the grid, Hilbert-Schmidt norm in space.
double gain_holder_norm(const SpectralOperator& op, const DiffusionOperator& G,
                        const TimeGrid& grid);

struct HolderExponentReport {
  double gamma_hat = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
  double slope = 0.0;
  Vec lags;  // in time units
  Vec mean_square_increment;
};

/// Regresses log E||X(t+h) - X(t)||^2 on log h over the given lags (in steps
/// of the uniform sub-grid on [eps, T]); eps <= 0 means T/16.
HolderExponentReport empirical_holder_exponent(const ConvolutionEnsemble& ens,
                                               std::vector<std::size_t> lag_steps = {1, 2, 4, 8,
                                                                                     16, 32},
                                               double eps = 0.0);

struct StrictIdentityReport {
  Vec t;
  Vec node_median;   // median over paths of r(t_j)
  double median_sup = 0.0;  // median over paths of max_j r(t_j)
  double final_median = 0.0;
};

/// r(t_j) = ||W_G(t_j) + int_0^{t_j} A W_G ds - int_0^{t_j} G dW|| using the
/// same variates for the convolution and for the Ito integral. When a
/// deterministic residual path is given it is added to every path's residual.
StrictIdentityReport strict_identity_check(const SpectralOperator& op,
                                           const DiffusionOperator& G,
                                           const NoiseConfig& config,
                                           const PathSample* deterministic_residual = nullptr);

struct StochasticSolution {
  SolutionPath deterministic;
  ConvolutionEnsemble ensemble;  // samples of A^kappa X
  double kappa = 0.0;
  Vec t;
  Vec mc_mean_norm;  // E||A^kappa X(t)||
  Vec shape;         // C-free right-hand side
  double ratio_t49 = 0.0;
  double forcing_norm = 0.0;
  double gain_norm = 0.0;
  // The two readings of "E A^kappa X in F": the F-norm of the ensemble mean,
  // and the ensemble mean of per-path F-norms (over the first holder_paths paths).
  double mean_holder_norm = 0.0;
  double expected_path_holder_norm = 0.0;
  std::size_t holder_paths = 0;
  std::optional<StrictIdentityReport> strict;
};

/// Checks the exponent constraints (naming the violated one), then
/// combines the deterministic mild solution with the sampled convolution.
StochasticSolution mild_solve_stochastic(const DeterministicProblem& det,
                                         const DiffusionOperator& G, double kappa,
                                         const NoiseConfig& config);

void check_stochastic_regime(const DeterministicProblem& det, const DiffusionOperator& G,
                             double kappa);

}  // namespace parasemi
