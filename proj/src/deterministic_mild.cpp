#include "parasemi/deterministic_mild.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parasemi/error.hpp"
#include "parasemi/exponential_quadrature.hpp"

namespace parasemi {

Forcing Forcing::closed(ProfileKind kind, Vec coeffs) {
  Forcing f;
  f.type = Type::closed_form;
  f.kind = kind;
  f.coeffs = std::move(coeffs);
  return f;
}

Forcing Forcing::zero(std::size_t dim) { return closed(ProfileKind::constant, Vec(dim, 0.0)); }

Forcing Forcing::from_samples(PathSample s) {
  Forcing f;
  f.type = Type::sampled;
  f.sampled = std::move(s);
  return f;
}

DeterministicProblem::DeterministicProblem(SpectralOperator o, double a1, Forcing f, Vec x,
                                           HolderParams prm)
    : op(std::move(o)), alpha1(a1), forcing(std::move(f)), xi(std::move(x)), params(prm) {
  if (!(alpha1 < 1.0)) throw Error(ErrorKind::regime, "alpha1 < 1 is required");
  check_shape(op, xi.size());
  for (double v : xi)
    if (!std::isfinite(v)) throw Error(ErrorKind::input, "initial value is not finite");
  if (forcing.type == Forcing::Type::closed_form)
    check_shape(op, forcing.coeffs.size());
  else
    check_shape(op, forcing.sampled.dim());
}

namespace {

bool is_zero_forcing(const Forcing& f) {
  if (f.type != Forcing::Type::closed_form) return false;
  return std::all_of(f.coeffs.begin(), f.coeffs.end(), [](double c) { return c == 0.0; });
}

// Exponent p of the t^p singularity at 0 absorbed on the first interval.
std::optional<double> singular_exponent(const DeterministicProblem& p) {
  const double b = p.params.beta, s = p.params.sigma;
  if (p.forcing.type == Forcing::Type::sampled) {
    if (b < 1.0) return b - 1.0;
    return std::nullopt;
  }
  switch (p.forcing.kind) {
    case ProfileKind::constant: return std::nullopt;
    case ProfileKind::holder_power:
      if (b - 1.0 + s < 0.0) return b - 1.0 + s;
      return std::nullopt;
    case ProfileKind::power:
    case ProfileKind::power_plus_holder:
    case ProfileKind::oscillatory:
      if (b < 1.0) return b - 1.0;
      return std::nullopt;
  }
  return std::nullopt;
}

void check_grid(const TimeGrid& grid, const HolderParams& prm) {
  if (grid.front() != 0.0) throw Error(ErrorKind::input, "solve grid must start at t = 0");
  if (grid.back() > prm.T * (1.0 + 1e-12))
    throw Error(ErrorKind::input, "solve grid extends beyond T");
}

const PathSample& checked_samples(const DeterministicProblem& p, const TimeGrid& grid) {
  const PathSample& s = p.forcing.sampled;
  if (s.grid().nodes() != grid.nodes())
    throw Error(ErrorKind::input, "sampled forcing is not defined on the solve grid nodes");
  return s;
}

// Per-interval quantities for one mode: decay e^{-z}, exponential integral
// int e^{-lam(t_{j+1}-s)} F~(s) ds and plain integral int F~(s) ds, where F~
// is the local interpolant of F.
struct IntervalRule {
  Vec decay, iexp, iplain;
};

IntervalRule mode_rule(double lam, const TimeGrid& g, std::span<const double> f,
                       std::optional<double> p) {
  const std::size_t M = g.intervals();
  IntervalRule r;
  r.decay.resize(M);
  r.iexp.resize(M);
  r.iplain.resize(M);
  const std::size_t first_regular = p ? 1 : 0;
  for (std::size_t j = 0; j < M; ++j) {
    const double dt = g[j + 1] - g[j];
    const double z = lam * dt;
    r.decay[j] = std::exp(-z);
    if (j == 0 && p) {
      // F~(s) = F(t_1) (s/t_1)^p integrated exactly.
      r.iexp[j] = f[1] * dt * singular_exp_moment(z, *p);
      r.iplain[j] = f[1] * dt / (*p + 1.0);
      continue;
    }
    std::array<double, 3> c{};
    if (j + 2 <= M) {
      const std::array<double, 3> x{0.0, 1.0, (g[j + 2] - g[j]) / dt};
      c = quadratic_coefficients(x, {f[j], f[j + 1], f[j + 2]});
    } else if (j >= first_regular + 1) {
      const std::array<double, 3> x{(g[j - 1] - g[j]) / dt, 0.0, 1.0};
      c = quadratic_coefficients(x, {f[j - 1], f[j], f[j + 1]});
    } else {
      c = {f[j], f[j + 1] - f[j], 0.0};
    }
    const auto psi = exp_moments(z);
    r.iexp[j] = dt * (c[0] * psi[0] + c[1] * psi[1] + c[2] * psi[2]);
    r.iplain[j] = dt * (c[0] + c[1] / 2.0 + c[2] / 3.0);
  }
  return r;
}

// F values for mode k across the grid (strided gather).
Vec mode_forcing(const PathSample& F, std::size_t k) {
  Vec f(F.size());
  for (std::size_t j = 0; j < F.size(); ++j) f[j] = F.value(j)[k];
  return f;
}

PathSample solve_x(const DeterministicProblem& prob, const TimeGrid& grid, const PathSample& F) {
  const auto& lam = prob.op.eigenvalues();
  const std::optional<double> p = singular_exponent(prob);
  PathSample X(grid, prob.op.weights());
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const Vec f = mode_forcing(F, k);
    const IntervalRule r = mode_rule(lam[k], grid, f, p);
    double x = prob.xi[k];
    X.value(0)[k] = x;
    for (std::size_t j = 0; j < grid.intervals(); ++j) {
      x = r.decay[j] * x + r.iexp[j];
      X.value(j + 1)[k] = x;
    }
  }
  return X;
}

TimeGrid coarsen(const TimeGrid& g) {
  Vec t;
  for (std::size_t j = 0; j < g.size(); j += 2) t.push_back(g[j]);
  return TimeGrid(std::move(t), g.grading());
}

PathSample subsample(const PathSample& p, const TimeGrid& coarse) {
  PathSample out(coarse, p.weights());
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    auto src = p.value(2 * j);
    std::copy(src.begin(), src.end(), out.value(j).begin());
  }
  return out;
}

// Exact or rule-consistent int_0^{t_j} F ds, per node and mode.
PathSample integrated_forcing(const DeterministicProblem& prob, const TimeGrid& g,
                              const PathSample& F) {
  PathSample out(g, prob.op.weights());
  const auto& fc = prob.forcing;
  if (fc.type == Forcing::Type::closed_form && profile_has_closed_form(fc.kind)) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double a = g[j] == 0.0 ? 0.0
                                   : profile_antiderivative(fc.kind, prob.params.beta,
                                                            prob.params.sigma, g[j]);
      for (std::size_t k = 0; k < out.dim(); ++k) out.value(j)[k] = fc.coeffs[k] * a;
    }
    return out;
  }
  const auto& lam = prob.op.eigenvalues();
  const std::optional<double> p = singular_exponent(prob);
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const IntervalRule r = mode_rule(lam[k], g, mode_forcing(F, k), p);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.intervals(); ++j) {
      acc += r.iplain[j];
      out.value(j + 1)[k] = acc;
    }
  }
  return out;
}

double max_norm(const PathSample& p) {
  double m = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) m = std::max(m, p.norm_at(j));
  return m;
}

}  // namespace

PathSample forcing_path(const DeterministicProblem& p, const TimeGrid& grid) {
  const auto& lam = p.op.eigenvalues();
  if (p.forcing.type == Forcing::Type::sampled) {
    const PathSample& s = checked_samples(p, grid);
    Vec d(lam.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::pow(lam[k], p.alpha1);
    return s.apply_diagonal(d);
  }
  return make_test_function(p.forcing.kind, p.params, p.forcing.coeffs, grid, p.op.weights());
}

PathSample scaled_forcing_path(const DeterministicProblem& p, const TimeGrid& grid) {
  if (p.forcing.type == Forcing::Type::sampled) return checked_samples(p, grid);
  return frac_power_path(p.op, -p.alpha1, forcing_path(p, grid));
}

SolutionPath mild_solve(const DeterministicProblem& problem, const TimeGrid& grid,
                        const SolveOptions& opts) {
  check_grid(grid, problem.params);
  const PathSample F = forcing_path(problem, grid);
  for (double v : F.data())
    if (!std::isfinite(v)) throw Error(ErrorKind::input, "forcing is undefined at a grid node");

  SolutionPath sol;
  sol.x = solve_x(problem, grid, F);
  sol.ax_frac = frac_power_path(problem.op, 1.0 - problem.alpha1, sol.x);

  const auto& lam = problem.op.eigenvalues();
  if (problem.forcing.type == Forcing::Type::closed_form) {
    sol.dxdt = PathSample(grid, problem.op.weights());
    for (std::size_t j = 0; j < grid.size(); ++j)
      for (std::size_t k = 0; k < lam.size(); ++k)
        sol.dxdt.value(j)[k] = -lam[k] * sol.x.value(j)[k] + F.value(j)[k];
  } else {
    // Three-point nonuniform differences; one-sided at the ends.
    sol.dxdt = PathSample(grid, problem.op.weights());
    const std::size_t n = grid.size();
    for (std::size_t k = 0; k < lam.size(); ++k) {
      auto X = [&](std::size_t j) { return sol.x.value(j)[k]; };
      for (std::size_t j = 0; j < n; ++j) {
        double d;
        if (n == 2) {
          d = (X(1) - X(0)) / (grid[1] - grid[0]);
        } else if (j == 0) {
          const double h1 = grid[1] - grid[0], h2 = grid[2] - grid[1];
          d = -(2 * h1 + h2) / (h1 * (h1 + h2)) * X(0) + (h1 + h2) / (h1 * h2) * X(1) -
              h1 / (h2 * (h1 + h2)) * X(2);
        } else if (j == n - 1) {
          const double h1 = grid[j - 1] - grid[j - 2], h2 = grid[j] - grid[j - 1];
          d = h2 / (h1 * (h1 + h2)) * X(j - 2) - (h1 + h2) / (h1 * h2) * X(j - 1) +
              (2 * h2 + h1) / (h2 * (h1 + h2)) * X(j);
        } else {
          const double h1 = grid[j] - grid[j - 1], h2 = grid[j + 1] - grid[j];
          d = -h2 / (h1 * (h1 + h2)) * X(j - 1) + (h2 - h1) / (h1 * h2) * X(j) +
              h1 / (h2 * (h1 + h2)) * X(j + 1);
        }
        sol.dxdt.value(j)[k] = d;
      }
    }
  }

  // Error estimate: compare with the solve on every other node.
  const double eps = std::numeric_limits<double>::epsilon();
  const double xmax = max_norm(sol.x);
  const double fint = max_norm(integrated_forcing(problem, grid, F));
  const double M = static_cast<double>(grid.intervals());
  const double floor_tol = 16.0 * (M + 1.0) * eps *
                           (xmax * (1.0 + problem.op.lambda_max() * grid.back()) + fint);
  double est = 0.0;
  bool have_est = false;
  if (opts.estimate_error && grid.intervals() % 2 == 0 && grid.intervals() >= 4) {
    const TimeGrid coarse = coarsen(grid);
    const PathSample Xc = solve_x(problem, coarse, subsample(F, coarse));
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      auto a = sol.x.value(2 * j);
      auto b = Xc.value(j);
      Vec d(a.size());
      for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[k] - b[k];
      est = std::max(est, sol.x.norm_of(d));
    }
    have_est = true;
  }
  sol.quadrature_tol = std::max(est, floor_tol);
  const double scale = std::max(xmax + fint, std::numeric_limits<double>::min());
  // without the comparison only the round-off floor is known, so nothing is certified
  sol.tolerance_met = have_est && sol.quadrature_tol <= opts.rel_tol * scale;
  return sol;
}

double strict_residual(const SolutionPath& sol, const DeterministicProblem& problem) {
  return max_norm(strict_residual_path(sol, problem));
}

PathSample strict_residual_path(const SolutionPath& sol, const DeterministicProblem& problem) {
  if (problem.alpha1 > 0.0)
    throw Error(ErrorKind::regime,
                "strict residual needs alpha1 <= 0; mild solutions with alpha1 > 0 are not "
                "guaranteed to be strict");
  const TimeGrid& g = sol.x.grid();
  check_grid(g, problem.params);
  const PathSample F = forcing_path(problem, g);
  const PathSample intF = integrated_forcing(problem, g, F);
  const auto& lam = problem.op.eigenvalues();
  const std::optional<double> p = singular_exponent(problem);

  PathSample R(g, problem.op.weights());
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const IntervalRule r = mode_rule(lam[k], g, mode_forcing(F, k), p);
    double int_ax = 0.0;  // int_0^{t_j} lam X ds, exact for the interpolated forcing
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double xj = sol.x.value(j)[k];
      R.value(j)[k] = xj - problem.xi[k] + int_ax - intF.value(j)[k];
      if (j < g.intervals())
        int_ax += xj * (1.0 - r.decay[j]) + r.iplain[j] - r.iexp[j];
    }
  }
  return R;
}

namespace {

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double forcing_holder_norm(const DeterministicProblem& p, const TimeGrid& g,
                           MembershipReport* membership) {
  if (is_zero_forcing(p.forcing)) {
    if (membership) {
      membership->limit = Verdict::pass;
      membership->vanishing = Verdict::pass;
    }
    return 0.0;
  }
  const HolderNormReport r = weighted_holder_norm(scaled_forcing_path(p, g), p.params);
  if (membership) *membership = r.membership;
  return r.total;
}

}  // namespace

RegularityReport t1_estimate_check(const SolutionPath& sol, const DeterministicProblem& problem) {
  const TimeGrid& g = sol.x.grid();
  const double b = problem.params.beta, a1 = problem.alpha1;
  RegularityReport rep;
  rep.grid_M = g.intervals();
  rep.quadrature_tol = sol.quadrature_tol;
  rep.forcing_norm = forcing_holder_norm(problem, g, nullptr);
  const double xin = problem.op.norm(problem.xi);
  double r1 = 0.0, r13 = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double t = g[j];
    if (t <= 0.0) continue;
    const double lhs = sol.x.norm_at(j) + std::pow(t, 1.0 - a1) * sol.ax_frac.norm_at(j);
    const double rhs = xin + rep.forcing_norm * std::max(std::pow(t, b - a1), std::pow(t, b));
    rep.lhs_t1.push_back(lhs);
    rep.rhs_t1.push_back(rhs);
    r1 = std::max(r1, safe_ratio(lhs, rhs));
    r13 = std::max(r13, safe_ratio(t * sol.dxdt.norm_at(j), rhs));
  }
  rep.ratio_t1 = r1;
  if (a1 <= 0.0) rep.ratio_t13 = r13;
  return rep;
}

RegularityReport maximal_regularity_report(const SolutionPath& sol,
                                           const DeterministicProblem& problem) {
  const TimeGrid& g = sol.x.grid();
  const double b = problem.params.beta, a1 = problem.alpha1;
  RegularityReport rep;
  rep.grid_M = g.intervals();
  rep.quadrature_tol = sol.quadrature_tol;

  MembershipReport mem;
  rep.forcing_norm = forcing_holder_norm(problem, g, &mem);
  if (mem.limit == Verdict::fail || mem.vanishing == Verdict::fail)
    throw Error(ErrorKind::precondition,
                std::string("A^{-alpha1} F is not in the weighted Holder space: limit test ") +
                    to_string(mem.limit) + ", vanishing-modulus test " + to_string(mem.vanishing));
  if (mem.limit == Verdict::inconclusive || mem.vanishing == Verdict::inconclusive)
    rep.note = "forcing membership inconclusive on this grid";

  const PathSample xb = frac_power_path(problem.op, b - a1, sol.x);
  for (std::size_t j = 0; j < g.size(); ++j) rep.c_norm = std::max(rep.c_norm, xb.norm_at(j));
  rep.ax_holder = weighted_holder_norm(sol.ax_frac, problem.params).total;
  rep.rhs_t2 = problem.op.norm(frac_power_apply(problem.op, b - a1, problem.xi)) + rep.forcing_norm;
  rep.ratio_t24 = safe_ratio(rep.c_norm + rep.ax_holder, rep.rhs_t2);
  if (a1 <= 0.0) {
    const PathSample ad = frac_power_path(problem.op, -a1, sol.dxdt);
    rep.dxdt_holder = weighted_holder_norm(ad, problem.params).total;
    rep.ratio_t25 = safe_ratio(*rep.dxdt_holder, rep.rhs_t2);
  }
  return rep;
}

RegularityReport full_regularity_report(const SolutionPath& sol,
                                        const DeterministicProblem& problem) {
  RegularityReport a = t1_estimate_check(sol, problem);
  const RegularityReport b = maximal_regularity_report(sol, problem);
  a.c_norm = b.c_norm;
  a.ax_holder = b.ax_holder;
  a.dxdt_holder = b.dxdt_holder;
  a.rhs_t2 = b.rhs_t2;
  a.ratio_t24 = b.ratio_t24;
  a.ratio_t25 = b.ratio_t25;
  a.note = b.note;
  return a;
}

}  // namespace parasemi
