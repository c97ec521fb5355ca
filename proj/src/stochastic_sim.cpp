#include "parasemi/stochastic_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "parasemi/counter_rng.hpp"
#include "parasemi/error.hpp"
#include "parasemi/parallel.hpp"

namespace parasemi {

bool DiffusionOperator::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
}

double DiffusionOperator::frozen_profile(double tj, double tnext) const {
  const double t = (tj == 0.0 && profile_is_singular(kind, params.beta, params.sigma))
                       ? 0.5 * tnext
                       : tj;
  return profile_value(kind, params.beta, params.sigma, t);
}

// ---------------------------------------------------------------- ensemble

ConvolutionEnsemble::ConvolutionEnsemble(double kappa, NoiseConfig config, Vec weights, Vec data)
    : kappa_(kappa), cfg_(std::move(config)), w_(std::move(weights)), data_(std::move(data)) {
  if (data_.size() != cfg_.n_paths * cfg_.grid.size() * w_.size())
    throw Error(ErrorKind::shape, "ensemble data does not match paths x nodes x dim");
}

ConvolutionEnsemble ConvolutionEnsemble::from_paths(const std::vector<PathSample>& paths,
                                                    double kappa) {
  if (paths.empty()) throw Error(ErrorKind::input, "ensemble needs at least one path");
  NoiseConfig cfg;
  cfg.n_paths = paths.size();
  cfg.grid = paths.front().grid();
  Vec data;
  data.reserve(paths.size() * paths.front().data().size());
  for (const auto& p : paths) {
    if (p.grid().nodes() != cfg.grid.nodes() || p.dim() != paths.front().dim())
      throw Error(ErrorKind::shape, "ensemble paths must share grid and dimension");
    data.insert(data.end(), p.data().begin(), p.data().end());
  }
  return ConvolutionEnsemble(kappa, std::move(cfg), paths.front().weights(), std::move(data));
}

PathSample ConvolutionEnsemble::path(std::size_t i) const {
  const std::size_t stride = n_nodes() * dim();
  Vec d(data_.begin() + static_cast<std::ptrdiff_t>(i * stride),
        data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride));
  return PathSample(cfg_.grid, w_, std::move(d));
}

PathSample ConvolutionEnsemble::mean_path() const {
  PathSample m(cfg_.grid, w_);
  const std::size_t stride = n_nodes() * dim();
  for (std::size_t i = 0; i < n_paths(); ++i)
    for (std::size_t q = 0; q < stride; ++q) m.data()[q] += data_[i * stride + q];
  for (double& v : m.data()) v /= static_cast<double>(n_paths());
  return m;
}

// ---------------------------------------------------------------- kernel

namespace {

// Per-step, per-mode transition coefficients of the exact OU step with the
// gain frozen at the left endpoint.
struct StepTable {
  std::size_t steps = 0, dim = 0;
  Vec decay;  // e^{-lam dt}
  Vec amp;    // lam^kappa g_k(t_j*) sqrt((1 - e^{-2 lam dt}) / (2 lam))
  Vec bamp;   // g_k(t_j*) sqrt(dt), the Ito-integral step of the same variate
  std::vector<std::uint32_t> keys;
};

StepTable make_table(const SpectralOperator& op, const DiffusionOperator& G, double kappa,
                     const NoiseConfig& cfg) {
  const TimeGrid& g = cfg.grid;
  const auto& lam = op.eigenvalues();
  StepTable tb;
  tb.steps = g.intervals();
  tb.dim = op.dim();
  tb.decay.resize(tb.steps * tb.dim);
  tb.amp.resize(tb.steps * tb.dim);
  tb.bamp.resize(tb.steps * tb.dim);
  // a_k = lam_k^kappa c_k once, so A^kappa applied to the samples and
  // sampling with gains lam^kappa g agree bit for bit.
  Vec a(tb.dim);
  for (std::size_t k = 0; k < tb.dim; ++k)
    a[k] = (kappa == 0.0 ? 1.0 : std::pow(lam[k], kappa)) * G.coeffs[k];
  for (std::size_t j = 0; j < tb.steps; ++j) {
    const double dt = g[j + 1] - g[j];
    const double phi = G.frozen_profile(g[j], g[j + 1]);
    for (std::size_t k = 0; k < tb.dim; ++k) {
      const double sd = std::sqrt(-std::expm1(-2.0 * lam[k] * dt) / (2.0 * lam[k]));
      tb.decay[j * tb.dim + k] = std::exp(-lam[k] * dt);
      tb.amp[j * tb.dim + k] = (a[k] * phi) * sd;
      tb.bamp[j * tb.dim + k] = (G.coeffs[k] * phi) * std::sqrt(dt);
    }
  }
  tb.keys = cfg.mode_keys;
  if (tb.keys.empty()) {
    tb.keys.resize(tb.dim);
    for (std::size_t k = 0; k < tb.dim; ++k) tb.keys[k] = static_cast<std::uint32_t>(k);
  }
  if (tb.keys.size() != tb.dim) throw Error(ErrorKind::shape, "mode_keys length mismatch");
  return tb;
}

void check_config(const SpectralOperator& op, const DiffusionOperator& G, const NoiseConfig& cfg) {
  check_shape(op, G.coeffs.size());
  if (cfg.n_paths < 1) throw Error(ErrorKind::input, "n_paths must be >= 1");
  if (cfg.grid.size() < 2) throw Error(ErrorKind::input, "noise grid is empty");
  if (cfg.grid.front() != 0.0) throw Error(ErrorKind::input, "noise grid must start at t = 0");
  if (cfg.n_paths > std::numeric_limits<std::uint32_t>::max() ||
      cfg.grid.intervals() > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::input, "path or step count exceeds the 32-bit counter range");
}

// Advances one path; calls visit(j, x) after every node (j = 0 .. M).
template <class Visit>
void run_path(const StepTable& tb, std::uint64_t seed, std::uint32_t path, Vec& x, Visit&& visit) {
  std::fill(x.begin(), x.end(), 0.0);
  visit(std::size_t{0}, static_cast<const Vec&>(x), static_cast<const double*>(nullptr));
  Vec z(tb.dim);
  for (std::size_t j = 0; j < tb.steps; ++j) {
    const double* dec = tb.decay.data() + j * tb.dim;
    const double* amp = tb.amp.data() + j * tb.dim;
    for (std::size_t k = 0; k < tb.dim; ++k) {
      z[k] = normal_at(seed, static_cast<std::uint32_t>(j), path, tb.keys[k],
                       StreamTag::convolution);
      x[k] = dec[k] * x[k] + amp[k] * z[k];
    }
    visit(j + 1, static_cast<const Vec&>(x), static_cast<const double*>(z.data()));
  }
}

double median(Vec v) {
  if (v.empty()) return 0.0;
  const std::size_t n = v.size();
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2), v.end());
  const double hi = v[n / 2];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n / 2));
  return 0.5 * (lo + hi);
}

double weighted_norm(const Vec& w, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += w[k] * v[k] * v[k];
  return std::sqrt(s);
}

}  // namespace

ConvolutionEnsemble simulate_convolution(const SpectralOperator& op, const DiffusionOperator& G,
                                         double kappa, const NoiseConfig& config) {
  if (!(kappa < 0.5 - G.alpha2)) {
    std::ostringstream m;
    m << "kappa < 1/2 - alpha2 violated: kappa = " << kappa << ", alpha2 = " << G.alpha2;
    throw Error(ErrorKind::regime, m.str());
  }
  check_config(op, G, config);
  const StepTable tb = make_table(op, G, kappa, config);
  const std::size_t nodes = config.grid.size(), N = op.dim();
  Vec data(config.n_paths * nodes * N, 0.0);
  if (!G.is_zero()) {
    parallel_chunks(config.n_paths, worker_count(config.threads), [&](std::size_t b, std::size_t e) {
      Vec x(N);
      for (std::size_t i = b; i < e; ++i) {
        double* out = data.data() + i * nodes * N;
        run_path(tb, config.seed, static_cast<std::uint32_t>(i), x,
                 [&](std::size_t j, const Vec& v, const double*) {
                   std::copy(v.begin(), v.end(), out + j * N);
                 });
      }
    });
  }
  return ConvolutionEnsemble(kappa, config, op.weights(), std::move(data));
}

// ---------------------------------------------------------------- isometry

namespace {

// int_0^t e^{-2 lam (t-s)} phi(s)^2 ds
double gain_integral(double lam, const DiffusionOperator& G, double t) {
  if (t == 0.0) return 0.0;
  if (G.kind == ProfileKind::constant) return -std::expm1(-2.0 * lam * t) / (2.0 * lam);
  if (G.kind == ProfileKind::power || G.kind == ProfileKind::power_plus_holder ||
      G.kind == ProfileKind::oscillatory) {
    if (!(G.params.beta > 0.5))
      throw Error(ErrorKind::input, "squared gain is not integrable at 0 for beta <= 1/2");
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double s) {
    const double p = profile_value(G.kind, G.params.beta, G.params.sigma, s);
    return std::exp(-2.0 * lam * (t - s)) * p * p;
  };
  return ts.integrate(f, 0.0, t, 1e-12);
}

}  // namespace

double analytic_second_moment(const SpectralOperator& op, const DiffusionOperator& G, double t,
                              double kappa) {
  check_shape(op, G.coeffs.size());
  const auto& lam = op.eigenvalues();
  const auto& w = op.weights();
  double s = 0.0;
  for (std::size_t k = 0; k < lam.size(); ++k) {
    if (G.coeffs[k] == 0.0) continue;
    const double a = std::pow(lam[k], kappa) * G.coeffs[k];
    s += w[k] * a * a * gain_integral(lam[k], G, t);
  }
  return s;
}

IsometryReport ito_isometry_check(const SpectralOperator& op, const DiffusionOperator& G,
                                  double t, const NoiseConfig& config,
                                  std::span<const double> offset) {
  check_config(op, G, config);
  const std::size_t jt = config.grid.find(t);
  if (jt == TimeGrid::npos) throw Error(ErrorKind::input, "isometry time must be a grid node");
  if (!offset.empty()) check_shape(op, offset.size());

  IsometryReport r;
  r.t = t;
  const double off2 = offset.empty() ? 0.0 : op.norm_squared(offset);
  r.analytic = analytic_second_moment(op, G, t) + off2;
  if (config.n_paths < 100) r.warning = "fewer than 100 paths: standard error unreliable";

  // Truncate the grid at t so that the streamed paths stop there.
  NoiseConfig cut = config;
  cut.grid = TimeGrid(Vec(config.grid.nodes().begin(),
                          config.grid.nodes().begin() + static_cast<std::ptrdiff_t>(jt + 1)),
                      config.grid.grading());
  const StepTable tb = make_table(op, G, 0.0, cut);
  const auto& w = op.weights();
  Vec sq(config.n_paths, off2);
  if (!G.is_zero()) {
    parallel_chunks(config.n_paths, worker_count(config.threads), [&](std::size_t b, std::size_t e) {
      Vec x(op.dim());
      for (std::size_t i = b; i < e; ++i) {
        run_path(tb, config.seed, static_cast<std::uint32_t>(i), x,
                 [&](std::size_t j, const Vec& v, const double*) {
                   if (j != jt) return;
                   double s = 0.0;
                   for (std::size_t k = 0; k < v.size(); ++k) {
                     const double y = v[k] + (offset.empty() ? 0.0 : offset[k]);
                     s += w[k] * y * y;
                   }
                   sq[i] = s;
                 });
      }
    });
  }
  // Fixed-order reduction keeps the result independent of the thread count.
  const double n = static_cast<double>(config.n_paths);
  double mean = 0.0;
  for (double v : sq) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sq) var += (v - mean) * (v - mean);
  var = config.n_paths > 1 ? var / (n - 1.0) : 0.0;
  r.mc_mean_square = mean;
  r.standard_error = std::sqrt(var / n);
  const double diff = std::abs(mean - r.analytic);
  if (r.standard_error > 0.0)
    r.z_score = diff / r.standard_error;
  else
    r.z_score = diff <= 1e-12 * std::max(1.0, r.analytic) ? 0.0
                                                          : std::numeric_limits<double>::infinity();
  r.pass = r.z_score <= 3.0;
  return r;
}

// ---------------------------------------------------------------- moments

double gain_holder_norm(const SpectralOperator& op, const DiffusionOperator& G,
                        const TimeGrid& grid) {
  check_shape(op, G.coeffs.size());
  if (G.is_zero()) return 0.0;
  Vec c(op.dim());
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = std::pow(op.eigenvalues()[k], -G.alpha2) * G.coeffs[k];
  // ||G(t)||_HS^2 = sum_k w_k g_k^2: the same weighted norm as the state space.
  const PathSample p = make_test_function(G.kind, G.params, c, grid, op.weights());
  return weighted_holder_norm(p, G.params).total;
}

MomentProfile convolution_moment_profile(const ConvolutionEnsemble& ens,
                                         const SpectralOperator& op,
                                         const DiffusionOperator& G) {
  if (ens.n_paths() == 0) throw Error(ErrorKind::input, "empty ensemble");
  check_shape(op, ens.dim());
  const TimeGrid& g = ens.grid();
  const double b = G.params.beta, a2 = G.alpha2, kap = ens.kappa();
  MomentProfile m;
  m.gain_norm = gain_holder_norm(op, G, g);
  const auto& w = ens.weights();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g[j];
    if (t <= 0.0) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < ens.n_paths(); ++i) s += weighted_norm(w, ens.value(i, j));
    const double mc = s / static_cast<double>(ens.n_paths());
    const double shape = std::max(std::pow(t, b - a2 - kap - 0.5), std::pow(t, b - 0.5));
    m.t.push_back(t);
    m.mc_mean_norm.push_back(mc);
    m.envelope.push_back(std::sqrt(analytic_second_moment(op, G, t, kap)));
    m.shape.push_back(shape);
    const double den = m.gain_norm * shape;
    const double q = den > 0.0 ? mc / den : (mc == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    m.ratio = std::max(m.ratio, q);
  }
  return m;
}

// ---------------------------------------------------------------- Holder exponent

HolderExponentReport empirical_holder_exponent(const ConvolutionEnsemble& ens,
                                               std::vector<std::size_t> lag_steps, double eps) {
  if (lag_steps.size() < 4) throw Error(ErrorKind::input, "need at least 4 lags");
  const TimeGrid& g = ens.grid();
  const double T = g.back();
  if (eps <= 0.0) eps = T / 16.0;
  // First node at or after eps; the rest must be uniform.
  std::size_t j0 = 0;
  while (j0 < g.size() && g[j0] < eps * (1.0 - 1e-12)) ++j0;
  if (j0 + 1 >= g.size()) throw Error(ErrorKind::input, "no sub-grid on [eps, T]");
  const double h = g[j0 + 1] - g[j0];
  for (std::size_t j = j0 + 1; j < g.size(); ++j)
    if (std::abs((g[j] - g[j - 1]) - h) > 1e-9 * h)
      throw Error(ErrorKind::input, "grid is not uniform on [eps, T]");
  const std::size_t n_sub = g.size() - j0;

  std::sort(lag_steps.begin(), lag_steps.end());
  lag_steps.erase(std::unique(lag_steps.begin(), lag_steps.end()), lag_steps.end());
  HolderExponentReport r;
  const auto& w = ens.weights();
  for (std::size_t L : lag_steps) {
    if (L == 0 || L >= n_sub) throw Error(ErrorKind::input, "lag outside the uniform sub-grid");
    double s = 0.0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < ens.n_paths(); ++i) {
      for (std::size_t j = j0; j + L < g.size(); ++j) {
        auto a = ens.value(i, j + L);
        auto b = ens.value(i, j);
        double d2 = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
          const double d = a[k] - b[k];
          d2 += w[k] * d * d;
        }
        s += d2;
        ++cnt;
      }
    }
    r.lags.push_back(static_cast<double>(L) * h);
    r.mean_square_increment.push_back(s / static_cast<double>(cnt));
  }
  // Ordinary least squares of log MSI on log lag.
  const std::size_t n = r.lags.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(r.mean_square_increment[i] > 0.0))
      throw Error(ErrorKind::input, "zero increments: exponent undefined");
    sx += std::log(r.lags[i]);
    sy += std::log(r.mean_square_increment[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(r.lags[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(r.mean_square_increment[i]) - my);
  }
  r.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::log(r.mean_square_increment[i]) - (my + r.slope * (std::log(r.lags[i]) - mx));
    rss += e * e;
  }
  const double se = std::sqrt(rss / (static_cast<double>(n) - 2.0) / sxx);
  r.gamma_hat = r.slope / 2.0;
  r.band_lo = r.gamma_hat - 1.96 * se / 2.0;
  r.band_hi = r.gamma_hat + 1.96 * se / 2.0;
  return r;
}

// ---------------------------------------------------------------- strict identity

StrictIdentityReport strict_identity_check(const SpectralOperator& op,
                                           const DiffusionOperator& G,
                                           const NoiseConfig& config,
                                           const PathSample* det_residual) {
  if (!(G.alpha2 < -0.5)) {
    std::ostringstream m;
    m << "alpha2 < -1/2 violated: alpha2 = " << G.alpha2;
    throw Error(ErrorKind::regime, m.str());
  }
  check_config(op, G, config);
  const TimeGrid& g = config.grid;
  if (det_residual && (det_residual->grid().nodes() != g.nodes() || det_residual->dim() != op.dim()))
    throw Error(ErrorKind::shape, "deterministic residual must live on the noise grid");
  const StepTable tb = make_table(op, G, 0.0, config);
  const auto& lam = op.eigenvalues();
  const auto& w = op.weights();
  const std::size_t nodes = g.size(), N = op.dim();

  // r_i(t_j) for every path, node-major per path.
  Vec res(config.n_paths * nodes, 0.0);
  parallel_chunks(config.n_paths, worker_count(config.threads), [&](std::size_t b, std::size_t e) {
    Vec x(N), xprev(N), int_ax(N), ito(N), rv(N);
    for (std::size_t i = b; i < e; ++i) {
      std::fill(int_ax.begin(), int_ax.end(), 0.0);
      std::fill(ito.begin(), ito.end(), 0.0);
      double* out = res.data() + i * nodes;
      run_path(tb, config.seed, static_cast<std::uint32_t>(i), x,
               [&](std::size_t j, const Vec& v, const double* z) {
                 if (j > 0) {
                   const double dt = g[j] - g[j - 1];
                   const double* bamp = tb.bamp.data() + (j - 1) * N;
                   for (std::size_t k = 0; k < N; ++k) {
                     int_ax[k] += lam[k] * dt * 0.5 * (xprev[k] + v[k]);
                     ito[k] += bamp[k] * z[k];
                   }
                 }
                 for (std::size_t k = 0; k < N; ++k) {
                   rv[k] = v[k] + int_ax[k] - ito[k];
                   if (det_residual) rv[k] += det_residual->value(j)[k];
                 }
                 out[j] = weighted_norm(w, rv);
                 std::copy(v.begin(), v.end(), xprev.begin());
               });
    }
  });

  StrictIdentityReport r;
  r.t = g.nodes();
  r.node_median.resize(nodes);
  Vec col(config.n_paths), sup(config.n_paths, 0.0);
  for (std::size_t j = 0; j < nodes; ++j) {
    for (std::size_t i = 0; i < config.n_paths; ++i) {
      col[i] = res[i * nodes + j];
      sup[i] = std::max(sup[i], col[i]);
    }
    r.node_median[j] = median(col);
  }
  r.median_sup = median(sup);
  r.final_median = r.node_median.back();
  return r;
}

// ---------------------------------------------------------------- full equation

void check_stochastic_regime(const DeterministicProblem& det, const DiffusionOperator& G,
                             double kappa) {
  const double b = det.params.beta, s = det.params.sigma;
  auto fail = [](const std::string& what) { throw Error(ErrorKind::regime, what + " violated"); };
  if (!(s > 0.0 && s < b - 0.5)) fail("forcing regularity: 0 < sigma < beta - 1/2");
  if (!(b - 0.5 <= 0.5)) fail("forcing regularity: beta - 1/2 <= 1/2");
  if (!(G.alpha2 < 0.5 - s)) fail("noise regularity: alpha2 < 1/2 - sigma");
  if (!(kappa <= 1.0 - det.alpha1)) fail("kappa <= 1 - alpha1");
  if (!(kappa < 0.5 - G.alpha2)) fail("kappa < 1/2 - alpha2");
  if (G.params.beta != b || G.params.sigma != s || G.params.T != det.params.T)
    throw Error(ErrorKind::input, "forcing and diffusion must share (beta, sigma, T)");
}

StochasticSolution mild_solve_stochastic(const DeterministicProblem& det,
                                         const DiffusionOperator& G, double kappa,
                                         const NoiseConfig& config) {
  check_stochastic_regime(det, G, kappa);
  StochasticSolution out;
  out.kappa = kappa;
  out.deterministic = mild_solve(det, config.grid);
  const ConvolutionEnsemble W = simulate_convolution(det.op, G, kappa, config);

  // A^kappa X = A^kappa X_det + A^kappa W_G, path by path.
  const PathSample xd = frac_power_path(det.op, kappa, out.deterministic.x);
  const std::size_t stride = xd.data().size();
  Vec data(W.data().size());
  for (std::size_t i = 0; i < W.n_paths(); ++i)
    for (std::size_t q = 0; q < stride; ++q) data[i * stride + q] = xd.data()[q] + W.data()[i * stride + q];
  out.ensemble = ConvolutionEnsemble(kappa, config, det.op.weights(), std::move(data));

  const TimeGrid& g = config.grid;
  const double b = det.params.beta, a2 = G.alpha2;
  out.forcing_norm = weighted_holder_norm(scaled_forcing_path(det, g), det.params).total;
  out.gain_norm = gain_holder_norm(det.op, G, g);
  const double xin = det.op.norm(det.xi);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g[j];
    if (t <= 0.0) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < out.ensemble.n_paths(); ++i)
      s += weighted_norm(out.ensemble.weights(), out.ensemble.value(i, j));
    const double mc = s / static_cast<double>(out.ensemble.n_paths());
    const double shape = xin * std::pow(t, -kappa) + out.forcing_norm * std::pow(t, b - 1.0) +
                         out.gain_norm * std::max(std::pow(t, b - a2 - kappa - 0.5),
                                                  std::pow(t, b - 0.5));
    out.t.push_back(t);
    out.mc_mean_norm.push_back(mc);
    out.shape.push_back(shape);
    const double q = shape > 0.0 ? mc / shape : (mc == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    out.ratio_t49 = std::max(out.ratio_t49, q);
  }

  out.mean_holder_norm = weighted_holder_norm(out.ensemble.mean_path(), det.params).total;
  out.holder_paths = std::min<std::size_t>(out.ensemble.n_paths(), 64);
  for (std::size_t i = 0; i < out.holder_paths; ++i)
    out.expected_path_holder_norm += weighted_holder_norm(out.ensemble.path(i), det.params).total;
  out.expected_path_holder_norm /= static_cast<double>(out.holder_paths);

  if (det.alpha1 <= 0.0 && a2 < det.alpha1 - 0.5) {
    const PathSample rdet = strict_residual_path(out.deterministic, det);
    out.strict = strict_identity_check(det.op, G, config, &rdet);
  }
  return out;
}

}  // namespace parasemi
