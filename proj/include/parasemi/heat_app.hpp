#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parasemi/deterministic_mild.hpp"
#include "parasemi/stochastic_sim.hpp"

namespace parasemi {

/// Fourier modes {k in Z^d : |k|_inf <= K} of the 2pi-periodic d-torus,
/// ordered by |k|^2 and then lexicographically, with H^{-1} weights.
class TorusSpec {
 public:
  TorusSpec(int d, int K);

  int d() const noexcept { return d_; }
  int K() const noexcept { return K_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const std::vector<std::array<int, 3>>& modes() const noexcept { return modes_; }
  /// |k|^2 per mode.
  const std::vector<int>& norms2() const noexcept { return k2_; }
  /// w_k = (1 + |k|^2)^{-1}.
  Vec weights() const;
  /// Stable stream id of each mode, independent of K.
  std::vector<std::uint32_t> mode_keys() const;
  /// Index of mode k, or npos.
  std::size_t index_of(const std::array<int, 3>& k) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  int d_, K_;
  std::vector<std::array<int, 3>> modes_;
  std::vector<int> k2_;
};

std::uint32_t torus_mode_key(const std::array<int, 3>& k);

/// lambda_k = |k|^2 + a with H^{-1} weights.
SpectralOperator assemble_operator(const TorusSpec& torus, double a);

struct NoiseAssembly {
  Vec gains;                        // g_k = scale (1 + |k|^2)^{-q/2}
  double truncated_hs = 0.0;        // sum_k w_k g_k^2 over tracked modes
  std::optional<double> continuum_hs;  // closed form when available
  std::string warning;
};

/// Hilbert-Schmidt gate: the continuum sum converges iff 2(1 + q) > d.
NoiseAssembly assemble_noise(const TorusSpec& torus, double q, double scale);

/// Upper bound of sum_{|k|_inf > K} w_k g_k^2 / (2 lambda_k) over the full lattice.
double stationary_tail_bound(int d, int K, double a, double q, double scale);

/// sum_k w_k g_k^2 (1 - e^{-2 lambda_k t}) / (2 lambda_k) over tracked modes; t = inf for the stationary sum.
double heat_noise_second_moment(const TorusSpec& torus, double a, double q, double scale,
                                double t);

struct HeatProblem {
  int d = 1;
  int K = 8;
  double a = 1.0;
  // b(t, x) = forcing_amp * phi(t) * cos(forcing_mode * x_1)
  ProfileKind forcing_kind = ProfileKind::constant;
  double forcing_amp = 0.0;
  int forcing_mode = 0;
  // u0(x) = u0_amp * cos(u0_mode * x_1)
  double u0_amp = 0.0;
  int u0_mode = 0;
  double q = 0.0;
  double noise_scale = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 1.0;
  double sigma_holder = 0.25;
  double kappa = 0.0;
  double T = 1.0;
  std::size_t grid_M = 256;
  double grading_r = 2.0;
  std::size_t profile_paths = 500;  // paths kept in memory for path statistics
  double t_eval = 0.0;              // second-moment time; 0 means T
};

/// Modal coefficients of amp * cos(m x_1): amp at k = 0, amp/2 at k = (+-m, 0, 0).
Vec cosine_coefficients(const TorusSpec& torus, double amp, int m);

struct HeatReport {
  int case_id = 1;  // 1: deterministic, 2: stochastic
  std::size_t n_modes = 0;
  double lambda_min = 0.0, lambda_max = 0.0;
  SolutionPath solution;  // deterministic part on the graded grid
  std::optional<RegularityReport> regularity;
  // Case 2
  NoiseAssembly noise;
  std::optional<IsometryReport> second_moment;  // E||u(t_eval)||^2 vs analytic
  double stationary_sum = 0.0;                  // sum_k w_k g_k^2/(2 lambda_k)
  double stationary_z = 0.0;                    // |mc - stationary_sum| / SE
  double tail_bound = 0.0;
  std::optional<MomentProfile> moment;
  std::optional<HolderExponentReport> holder;
  std::optional<double> ratio_t49;
  std::optional<StrictIdentityReport> strict;
  std::vector<std::string> notes;
};

HeatReport run_heat_experiment(const HeatProblem& problem, const NoiseConfig& config);

}  // namespace parasemi
