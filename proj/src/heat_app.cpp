#include "parasemi/heat_app.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parasemi/error.hpp"

namespace parasemi {

TorusSpec::TorusSpec(int d, int K) : d_(d), K_(K) {
  if (d < 1 || d > 3) throw Error(ErrorKind::input, "torus dimension must be 1, 2 or 3");
  if (K < 0 || K > 511) throw Error(ErrorKind::input, "frequency cutoff K must lie in [0, 511]");
  const int ky = d >= 2 ? K : 0, kz = d >= 3 ? K : 0;
  for (int a = -K; a <= K; ++a)
    for (int b = -ky; b <= ky; ++b)
      for (int c = -kz; c <= kz; ++c) modes_.push_back({a, b, c});
  auto n2 = [](const std::array<int, 3>& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; };
  std::stable_sort(modes_.begin(), modes_.end(), [&](const auto& x, const auto& y) {
    const int nx = n2(x), ny = n2(y);
    return nx != ny ? nx < ny : x < y;
  });
  k2_.reserve(modes_.size());
  for (const auto& k : modes_) k2_.push_back(n2(k));
}

Vec TorusSpec::weights() const {
  Vec w(k2_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (1.0 + k2_[i]);
  return w;
}

std::uint32_t torus_mode_key(const std::array<int, 3>& k) {
  // 10 bits per axis, offset 512; the key of a mode does not depend on K.
  return (static_cast<std::uint32_t>(k[0] + 512) << 20) |
         (static_cast<std::uint32_t>(k[1] + 512) << 10) | static_cast<std::uint32_t>(k[2] + 512);
}

std::vector<std::uint32_t> TorusSpec::mode_keys() const {
  std::vector<std::uint32_t> keys;
  keys.reserve(modes_.size());
  for (const auto& k : modes_) keys.push_back(torus_mode_key(k));
  return keys;
}

std::size_t TorusSpec::index_of(const std::array<int, 3>& k) const {
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (modes_[i] == k) return i;
  return npos;
}

SpectralOperator assemble_operator(const TorusSpec& torus, double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::input, "the reaction coefficient a must be positive");
  Vec lam(torus.size());
  for (std::size_t i = 0; i < lam.size(); ++i) lam[i] = torus.norms2()[i] + a;
  return SpectralOperator(std::move(lam), torus.weights());
}

NoiseAssembly assemble_noise(const TorusSpec& torus, double q, double scale) {
  if (q < 0.0) throw Error(ErrorKind::input, "noise decay exponent q must be >= 0");
  if (!(2.0 * (1.0 + q) > torus.d())) {
    std::ostringstream m;
    m << "Hilbert-Schmidt sum into H^{-1} diverges in the continuum: need 2(1 + q) > d, got q = "
      << q << ", d = " << torus.d();
    throw Error(ErrorKind::hs_divergence, m.str());
  }
  NoiseAssembly n;
  const Vec w = torus.weights();
  n.gains.resize(torus.size());
  for (std::size_t i = 0; i < n.gains.size(); ++i) {
    n.gains[i] = scale == 0.0 ? 0.0 : scale * std::pow(1.0 + torus.norms2()[i], -q / 2.0);
    n.truncated_hs += w[i] * n.gains[i] * n.gains[i];
  }
  const double pi = std::numbers::pi;
  if (torus.d() == 1 && q == 0.0) {
    n.continuum_hs = scale * scale * pi / std::tanh(pi);
  } else if (torus.d() == 1 && q == 1.0) {
    // sum_k (1 + k^2)^{-2} = (pi coth pi + pi^2 csch^2 pi) / 2
    const double sh = std::sinh(pi);
    n.continuum_hs = scale * scale * 0.5 * (pi / std::tanh(pi) + pi * pi / (sh * sh));
  }
  if (q == 0.0 && torus.d() == 1)
    n.warning = "space-time white noise: truncated sum approximates the continuum value";
  return n;
}

namespace {

// Lattice points with |k|_inf = n in dimension d.
double shell_count(int d, long n) {
  if (n == 0) return 1.0;
  return std::pow(2.0 * n + 1.0, d) - std::pow(2.0 * n - 1.0, d);
}

}  // namespace

double stationary_tail_bound(int d, int K, double a, double q, double scale) {
  if (d < 1 || d > 3) throw Error(ErrorKind::input, "torus dimension must be 1, 2 or 3");
  if (!(2.0 * (1.0 + q) > d)) return std::numeric_limits<double>::infinity();
  // On the shell |k|_inf = n every mode has n^2 <= |k|^2, so each term is at
  // most (1 + n^2)^{-1-q} / (2 (n^2 + a)); exact for d = 1.
  const long n_max = std::max<long>(4L * K, 100000L);
  double s = 0.0;
  for (long n = K + 1; n <= n_max; ++n) {
    const double n2 = static_cast<double>(n) * n;
    s += shell_count(d, n) * std::pow(1.0 + n2, -1.0 - q) / (2.0 * (n2 + a));
  }
  // Remainder: count <= 2d (3n)^{d-1} and the term <= n^{-4-2q}/2, so the
  // tail is at most d 3^{d-1} / (p - 1) N^{1-p} with p = 5 + 2q - d.
  const double p = 5.0 + 2.0 * q - d;
  s += d * std::pow(3.0, d - 1) * std::pow(static_cast<double>(n_max), 1.0 - p) / (p - 1.0);
  return scale * scale * s;
}

double heat_noise_second_moment(const TorusSpec& torus, double a, double q, double scale,
                                double t) {
  const NoiseAssembly n = assemble_noise(torus, q, scale);
  const Vec w = torus.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < torus.size(); ++i) {
    const double lam = torus.norms2()[i] + a;
    const double f = std::isinf(t) ? 1.0 : -std::expm1(-2.0 * lam * t);
    s += w[i] * n.gains[i] * n.gains[i] * f / (2.0 * lam);
  }
  return s;
}

Vec cosine_coefficients(const TorusSpec& torus, double amp, int m) {
  Vec c(torus.size(), 0.0);
  if (amp == 0.0) return c;
  if (m < 0) m = -m;
  if (m > torus.K()) throw Error(ErrorKind::input, "cosine mode exceeds the truncation K");
  if (m == 0) {
    c[torus.index_of({0, 0, 0})] = amp;
  } else {
    c[torus.index_of({m, 0, 0})] = amp / 2.0;
    c[torus.index_of({-m, 0, 0})] = amp / 2.0;
  }
  return c;
}

HeatReport run_heat_experiment(const HeatProblem& hp, const NoiseConfig& config) {
  const TorusSpec torus(hp.d, hp.K);
  const SpectralOperator op = assemble_operator(torus, hp.a);
  const HolderParams prm(hp.beta, hp.sigma_holder, hp.T);
  const double t_eval = hp.t_eval > 0.0 ? hp.t_eval : hp.T;
  if (t_eval > hp.T * (1.0 + 1e-12)) throw Error(ErrorKind::input, "t_eval exceeds T");

  HeatReport rep;
  rep.n_modes = op.dim();
  rep.lambda_min = op.lambda_min();
  rep.lambda_max = op.lambda_max();
  rep.case_id = hp.noise_scale == 0.0 ? 1 : 2;

  const DeterministicProblem det(op, hp.alpha1,
                                 Forcing::closed(hp.forcing_kind,
                                                 cosine_coefficients(torus, hp.forcing_amp,
                                                                     hp.forcing_mode)),
                                 cosine_coefficients(torus, hp.u0_amp, hp.u0_mode), prm);
  const TimeGrid grid = TimeGrid::graded(hp.T, hp.grid_M, hp.grading_r);

  if (rep.case_id == 1) {
    rep.solution = mild_solve(det, grid);
    RegularityReport r = t1_estimate_check(rep.solution, det);
    try {
      const RegularityReport m = maximal_regularity_report(rep.solution, det);
      r.c_norm = m.c_norm;
      r.ax_holder = m.ax_holder;
      r.dxdt_holder = m.dxdt_holder;
      r.rhs_t2 = m.rhs_t2;
      r.ratio_t24 = m.ratio_t24;
      r.ratio_t25 = m.ratio_t25;
      r.note = m.note;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::precondition) throw;
      rep.notes.push_back(std::string("maximal regularity skipped: ") + e.what());
    }
    rep.regularity = r;
    return rep;
  }

  // Case 2: stochastic.
  rep.noise = assemble_noise(torus, hp.q, hp.noise_scale);
  if (!rep.noise.warning.empty()) rep.notes.push_back(rep.noise.warning);
  const DiffusionOperator G{ProfileKind::constant, rep.noise.gains, hp.alpha2, prm};
  check_stochastic_regime(det, G, hp.kappa);
  rep.solution = mild_solve(det, grid);

  NoiseConfig base = config;
  base.mode_keys = torus.mode_keys();

  // Second moment at t_eval, streamed over all paths. Constant gains make
  // the exact OU step independent of the grid, so a coarse grid suffices.
  {
    const TimeGrid g_eval = TimeGrid::graded(t_eval, hp.grid_M, hp.grading_r);
    const SolutionPath xe = mild_solve(det, g_eval);
    auto xt = xe.x.value(g_eval.size() - 1);
    NoiseConfig c = base;
    c.grid = TimeGrid::uniform(t_eval, 8);
    rep.second_moment = ito_isometry_check(op, G, t_eval, c, xt);
    rep.stationary_sum = heat_noise_second_moment(torus, hp.a, hp.q, hp.noise_scale,
                                                  std::numeric_limits<double>::infinity());
    const double target = rep.stationary_sum + op.norm_squared(xt);
    rep.stationary_z = rep.second_moment->standard_error > 0.0
                           ? std::abs(rep.second_moment->mc_mean_square - target) /
                                 rep.second_moment->standard_error
                           : 0.0;
    rep.tail_bound = stationary_tail_bound(hp.d, hp.K, hp.a, hp.q, hp.noise_scale);
  }

  // Path statistics on the composite grid (uniform on [T/16, T]).
  {
    NoiseConfig c = base;
    c.n_paths = std::min(config.n_paths, hp.profile_paths);
    c.grid = TimeGrid::graded_uniform(hp.T, hp.T / 16.0, 32, hp.grid_M, hp.grading_r);
    const ConvolutionEnsemble W = simulate_convolution(op, G, hp.kappa, c);
    rep.moment = convolution_moment_profile(W, op, G);
    rep.holder = empirical_holder_exponent(W);
    const StochasticSolution s = mild_solve_stochastic(det, G, hp.kappa, c);
    rep.ratio_t49 = s.ratio_t49;
    rep.strict = s.strict;
  }
  return rep;
}

}  // namespace parasemi
