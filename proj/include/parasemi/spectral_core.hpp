#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace parasemi {

using Vec = std::vector<double>;

/// Positive diagonal operator on a weighted sequence space.
/// Norm: ||v||^2 = sum_k w_k v_k^2. Because the operator is diagonal and the
/// weights are fixed, the induced operator norm of diag(d) is max_k |d_k|.
class SpectralOperator {
 public:
  /// Weights default to 1 when empty.
  explicit SpectralOperator(Vec eigenvalues, Vec weights = {});

  std::size_t dim() const noexcept { return lambda_.size(); }
  const Vec& eigenvalues() const noexcept { return lambda_; }
  const Vec& weights() const noexcept { return w_; }
  double lambda_min() const noexcept { return lambda_.front(); }
  double lambda_max() const noexcept { return lambda_.back(); }

  /// Weighted norm of a coefficient vector.
  double norm(std::span<const double> v) const;
  double norm_squared(std::span<const double> v) const;

 private:
  Vec lambda_;
  Vec w_;
};

void check_shape(const SpectralOperator& op, std::size_t n);

/// (A^theta e^{-tA} v)_k = lambda_k^theta e^{-lambda_k t} v_k.
Vec semigroup_apply(const SpectralOperator& op, double t, double theta,
                    std::span<const double> v);

/// (A^theta v)_k = lambda_k^theta v_k, any real theta.
Vec frac_power_apply(const SpectralOperator& op, double theta,
                     std::span<const double> v);

/// ((z - A)^{-1} v)_k = v_k / (z - lambda_k).
std::vector<std::complex<double>> resolvent_apply(
    const SpectralOperator& op, std::complex<double> z,
    std::span<const double> v);

/// ||(z - A)^{-1}||_op = max_k 1/|z - lambda_k|.
double resolvent_norm(const SpectralOperator& op, std::complex<double> z);

enum class SectorRays { all, negative_axis };

struct SectorReport {
  double angle = 0.0;
  double m_estimate = 0.0;
  std::size_t samples_used = 0;
  bool pass = false;
};

/// Samples |z| ||(z-A)^{-1}|| on the rays arg z = +-angle and arg z = pi,
/// with magnitudes log-spaced over [lambda_1/100, 100 lambda_N].
SectorReport verify_sectorial(const SpectralOperator& op, double angle,
                              std::size_t ray_samples = 64,
                              SectorRays rays = SectorRays::all);

/// (theta/e)^theta with 0^0 = 1: sharp sup of x^theta e^{-x} over x > 0.
double certified_smoothing_bound(double theta);

struct BoundProfile {
  double theta = 0.0;
  Vec grid;
  Vec observed;
  double certified_bound = 0.0;
  bool violation = false;
};

BoundProfile semigroup_bound_profile(const SpectralOperator& op, double theta,
                                     std::span<const double> grid);

/// Eigenvalues lambda n / (n + lambda), same weights.
SpectralOperator yosida(const SpectralOperator& op, std::int64_t n);

struct YosidaReport {
  std::int64_t n = 0;
  double nu = 0.0;
  double gap = 0.0;      // sup_j ||A_n^nu S_n(t_j) - A^nu S(t_j)||
  double inv_gap = 0.0;  // ||A_n^{-nu} - A^{-nu}||
  double uniform_smoothing = 0.0;  // sup_j t_j^nu ||A_n^nu S_n(t_j)||
  double uniform_inverse = 0.0;    // ||A_n^{-nu}|| for nu > 0, else 0
};

YosidaReport yosida_gap(const SpectralOperator& op, std::int64_t n, double nu,
                        std::span<const double> grid);

}  // namespace parasemi
