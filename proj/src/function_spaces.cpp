#include "parasemi/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "parasemi/error.hpp"

namespace parasemi {

HolderParams::HolderParams(double b, double s, double t) : beta(b), sigma(s), T(t) {
  if (!(s > 0.0 && s < b && b <= 1.0))
    throw Error(ErrorKind::input, "Holder exponents need 0 < sigma < beta <= 1");
  if (!(t > 0.0)) throw Error(ErrorKind::input, "horizon T must be positive");
}

// ---------------------------------------------------------------- grids

TimeGrid::TimeGrid(Vec nodes, double grading) : t_(std::move(nodes)), r_(grading) {
  if (t_.size() < 2) throw Error(ErrorKind::input, "a time grid needs at least 2 nodes");
  if (!(t_.front() >= 0.0)) throw Error(ErrorKind::input, "time grid starts below 0");
  for (std::size_t j = 1; j < t_.size(); ++j)
    if (!(t_[j] > t_[j - 1])) throw Error(ErrorKind::input, "time grid must be strictly increasing");
}

TimeGrid TimeGrid::graded(double T, std::size_t M, double r) {
  if (M < 8) throw Error(ErrorKind::input, "graded grid needs M >= 8");
  if (!(r >= 1.0)) throw Error(ErrorKind::input, "grading exponent must be >= 1");
  if (!(T > 0.0)) throw Error(ErrorKind::input, "horizon T must be positive");
  Vec t(M + 1);
  for (std::size_t j = 0; j <= M; ++j)
    t[j] = T * std::pow(static_cast<double>(j) / static_cast<double>(M), r);
  t[M] = T;
  return TimeGrid(std::move(t), r);
}

TimeGrid TimeGrid::uniform(double T, std::size_t M, double t0) {
  if (M < 8) throw Error(ErrorKind::input, "uniform grid needs M >= 8");
  if (!(T > t0) || t0 < 0.0) throw Error(ErrorKind::input, "uniform grid needs 0 <= t0 < T");
  Vec t(M + 1);
  for (std::size_t j = 0; j <= M; ++j)
    t[j] = t0 + (T - t0) * static_cast<double>(j) / static_cast<double>(M);
  t[M] = T;
  return TimeGrid(std::move(t), 1.0);
}

TimeGrid TimeGrid::graded_uniform(double T, double eps, std::size_t Mg, std::size_t Mu,
                                  double r) {
  if (!(eps > 0.0 && eps < T)) throw Error(ErrorKind::input, "need 0 < eps < T");
  if (Mg < 1 || Mu < 1 || Mg + Mu < 8)
    throw Error(ErrorKind::input, "composite grid needs at least 8 intervals");
  Vec t;
  t.reserve(Mg + Mu + 1);
  for (std::size_t j = 0; j <= Mg; ++j)
    t.push_back(eps * std::pow(static_cast<double>(j) / static_cast<double>(Mg), r));
  t.back() = eps;
  for (std::size_t i = 1; i <= Mu; ++i)
    t.push_back(eps + (T - eps) * static_cast<double>(i) / static_cast<double>(Mu));
  t.back() = T;
  return TimeGrid(std::move(t), r);
}

std::size_t TimeGrid::find(double t) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), t * (1.0 - 1e-12) - 1e-300);
  for (; it != t_.end() && *it <= t * (1.0 + 1e-12) + 1e-300; ++it)
    if (std::abs(*it - t) <= 1e-12 * std::max(1.0, std::abs(t)))
      return static_cast<std::size_t>(it - t_.begin());
  return npos;
}

// ---------------------------------------------------------------- paths

PathSample::PathSample(TimeGrid grid, Vec weights)
    : grid_(std::move(grid)), w_(std::move(weights)) {
  data_.assign(grid_.size() * w_.size(), 0.0);
}

PathSample::PathSample(TimeGrid grid, Vec weights, Vec data)
    : grid_(std::move(grid)), w_(std::move(weights)), data_(std::move(data)) {
  if (data_.size() != grid_.size() * w_.size())
    throw Error(ErrorKind::shape, "path data does not match grid size times dimension");
}

double PathSample::norm_of(std::span<const double> v) const {
  double s = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) s += w_[k] * v[k] * v[k];
  return std::sqrt(s);
}

double PathSample::norm_at(std::size_t j) const { return norm_of(value(j)); }

PathSample PathSample::apply_diagonal(std::span<const double> d) const {
  if (d.size() != dim()) throw Error(ErrorKind::shape, "diagonal length mismatch");
  PathSample out(grid_, w_, data_);
  for (std::size_t j = 0; j < size(); ++j) {
    auto row = out.value(j);
    for (std::size_t k = 0; k < dim(); ++k) row[k] *= d[k];
  }
  return out;
}

PathSample PathSample::linear_combination(double a, const PathSample& other, double b) const {
  if (other.dim() != dim() || other.size() != size())
    throw Error(ErrorKind::shape, "paths differ in shape");
  Vec d(data_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a * data_[i] + b * other.data_[i];
  return PathSample(grid_, w_, std::move(d));
}

PathSample frac_power_path(const SpectralOperator& op, double theta, const PathSample& p) {
  check_shape(op, p.dim());
  Vec d(op.dim());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::pow(op.eigenvalues()[k], theta);
  return p.apply_diagonal(d);
}

// ---------------------------------------------------------------- norms

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

double diff_norm(const PathSample& p, std::span<const double> a, std::span<const double> b) {
  const auto& w = p.weights();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += w[k] * d * d;
  }
  return std::sqrt(s);
}

// Least-squares slope of log y against log x over entries with y > 0.
double loglog_slope(const Vec& x, const Vec& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = static_cast<double>(n) * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (static_cast<double>(n) * sxy - sx * sy) / den;
}

bool last_three_decreasing(const Vec& y) {
  const std::size_t n = y.size();
  return n >= 3 && y[n - 1] < y[n - 2] && y[n - 2] < y[n - 3];
}

struct PairScan {
  double sup_term = 0.0;
  double seminorm = 0.0;
  Vec w;     // w_f at each node
  Vec diam;  // max_{0 < t_i < t_j} ||g_j - g_i||, g = t^{1-beta} f
  double g_scale = 0.0;
};

PairScan scan_pairs(const PathSample& path, const HolderParams& prm) {
  const TimeGrid& g = path.grid();
  const std::size_t n = g.size();
  const double e_sup = 1.0 - prm.beta;
  const double e_w = 1.0 - prm.beta + prm.sigma;
  PairScan s;
  s.w.assign(n, 0.0);
  s.diam.assign(n, 0.0);

  // Weighted values g_j = t_j^{1-beta} f(t_j); at t = 0 the weight is 1
  // for beta = 1 and 0 otherwise.
  Vec gv(path.data().size());
  Vec wt(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = g[j];
    wt[j] = (t == 0.0) ? (e_sup == 0.0 ? 1.0 : 0.0) : std::pow(t, e_sup);
    auto f = path.value(j);
    for (std::size_t k = 0; k < f.size(); ++k) gv[j * f.size() + k] = wt[j] * f[k];
    const double nj = wt[j] * path.norm_at(j);
    s.sup_term = std::max(s.sup_term, nj);
    if (t > 0.0) s.g_scale = std::max(s.g_scale, nj);
  }

  const std::size_t N = path.dim();
  for (std::size_t j = 1; j < n; ++j) {
    const double tj = g[j];
    auto fj = path.value(j);
    std::span<const double> gj(gv.data() + j * N, N);
    double wj = 0.0, dj = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
      const double ti = g[i];
      if (ti == 0.0) continue;  // weight s^{1-beta+sigma} vanishes at s = 0
      const double q = std::pow(ti, e_w) * diff_norm(path, fj, path.value(i)) /
                       std::pow(tj - ti, prm.sigma);
      wj = std::max(wj, q);
      dj = std::max(dj, diff_norm(path, gj, std::span<const double>(gv.data() + i * N, N)));
    }
    s.w[j] = wj;
    s.diam[j] = dj;
    s.seminorm = std::max(s.seminorm, wj);
  }
  return s;
}

MembershipReport membership_from_scan(const PathSample& path, const HolderParams& prm,
                                      const PairScan& s, double total,
                                      const MembershipOptions& opts) {
  MembershipReport r;
  const TimeGrid& g = path.grid();
  const double T = prm.T;

  std::size_t below = 0;
  for (double t : g.nodes())
    if (t > 0.0 && t <= T / 4.0) ++below;
  if (below < 8) return r;

  for (int m = 2; m < 200; ++m) {
    const double tau = T / std::ldexp(1.0, m);
    std::size_t band = 0;
    double D = 0.0, W = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double t = g[j];
      if (t <= 0.0 || t > tau) continue;
      if (t > tau / 2.0) ++band;
      D = std::max(D, s.diam[j]);
      W = std::max(W, s.w[j]);
    }
    if (band < opts.min_band_nodes) break;
    r.levels.push_back(tau);
    r.limit_tail.push_back(D);
    r.modulus_tail.push_back(W);
  }
  if (r.levels.size() < opts.min_levels) return r;

  r.limit_slope = loglog_slope(r.levels, r.limit_tail);
  r.modulus_slope = loglog_slope(r.levels, r.modulus_tail);

  const double gscale = s.g_scale > 0.0 ? s.g_scale : 1.0;
  const double Dfin = r.limit_tail.back();
  if (Dfin <= 1e-12 * gscale ||
      (last_three_decreasing(r.limit_tail) && r.limit_slope >= opts.min_slope))
    r.limit = Verdict::pass;
  else
    r.limit = Verdict::fail;

  const double tscale = total > 0.0 ? total : 1.0;
  const double Wfin = r.modulus_tail.back();
  if (Wfin <= 1e-12 * tscale ||
      (last_three_decreasing(r.modulus_tail) &&
       (r.modulus_slope >= opts.min_slope || Wfin <= opts.modulus_tol * tscale)))
    r.vanishing = Verdict::pass;
  else
    r.vanishing = Verdict::fail;
  return r;
}

void check_path(const PathSample& path, const HolderParams& prm) {
  if (path.size() < 2) throw Error(ErrorKind::input, "need at least 2 nodes");
  if (path.grid().back() > prm.T * (1.0 + 1e-12))
    throw Error(ErrorKind::input, "path extends beyond the horizon T");
}

}  // namespace

HolderNormReport weighted_holder_norm(const PathSample& path, const HolderParams& params,
                                      const MembershipOptions& opts) {
  check_path(path, params);
  const PairScan s = scan_pairs(path, params);
  HolderNormReport r;
  r.sup_term = s.sup_term;
  r.seminorm = s.seminorm;
  r.total = s.sup_term + s.seminorm;
  r.w_profile = s.w;
  r.membership = membership_from_scan(path, params, s, r.total, opts);
  r.limit_flag = r.membership.limit == Verdict::pass;
  r.vanishing_flag = r.membership.vanishing == Verdict::pass;
  return r;
}

MembershipReport membership_diagnostics(const PathSample& path, const HolderParams& params,
                                        const MembershipOptions& opts) {
  return weighted_holder_norm(path, params, opts).membership;
}

// ---------------------------------------------------------------- Beta kernel

namespace {

void check_kernel_args(double a, double b, double s, double t) {
  if (!(s < t)) throw Error(ErrorKind::input, "beta kernel needs s < t");
  if (s < 0.0) throw Error(ErrorKind::input, "beta kernel needs s >= 0");
  if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0))
    throw Error(ErrorKind::unsupported_singularity, "kernel exponents must lie in (0, 1)");
}

}  // namespace

double beta_kernel_integral(double a, double b, double s, double t) {
  check_kernel_args(a, b, s, t);
  // u = s + (t - s) x maps the kernel onto x^{b-1} (1-x)^{a-1} on (0, 1).
  // Split at 1/2 and substitute y = x^b on the left, y = (1-x)^a on the right:
  // x^{b-1} dx = dy / b, so each half becomes a bounded integrand even when
  // an exponent sits close to 0.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double tol = std::numeric_limits<double>::epsilon() * 64.0;
  auto half = [&ts, tol](double p, double q) {
    // (1/p) * integral over (0, 2^{-p}) of (1 - y^{1/p})^{q-1} dy
    const double top = std::pow(0.5, p);
    auto g = [p, q](double y) { return std::pow(-std::expm1(std::log(y) / p), q - 1.0); };
    return ts.integrate(g, 0.0, top, tol) / p;
  };
  const double I = half(b, a) + half(a, b);
  return std::pow(t - s, a + b - 1.0) * I;
}

double beta_kernel_closed_form(double a, double b, double s, double t) {
  check_kernel_args(a, b, s, t);
  const double lB = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp((a + b - 1.0) * std::log(t - s) + lB);
}

}  // namespace parasemi
