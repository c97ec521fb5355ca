#include "parasemi/cli.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "parasemi/deterministic_mild.hpp"
#include "parasemi/function_spaces.hpp"
#include "parasemi/heat_app.hpp"
#include "parasemi/io.hpp"
#include "parasemi/spectral_core.hpp"
#include "parasemi/stochastic_sim.hpp"

namespace parasemi {

namespace fs = std::filesystem;
using json = nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"verify-semigroup", "holder-norm",
                                              "solve-deterministic", "simulate-convolution",
                                              "solve-stochastic", "heat", "report"};
  return names;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::io: return 1;
    case ErrorKind::tolerance: return 3;
    default: return 2;
  }
}

namespace {

// ---------------------------------------------------------------- shared keys

const std::vector<std::string> kOperatorKeys{"eigenvalues", "weights", "dim", "eigen_kind",
                                             "eigen_scale", "eigen_shift"};
const std::vector<std::string> kHolderKeys{"beta", "sigma_holder", "T"};
const std::vector<std::string> kGridKeys{"grid_M", "grading_r"};
const std::vector<std::string> kNoiseKeys{"gain_kind", "gain_coeffs", "alpha2", "kappa", "seed",
                                          "n_paths", "threads", "grid_kind"};
const std::vector<std::string> kForcingKeys{"alpha1", "forcing_kind", "forcing_coeffs",
                                            "forcing_csv", "xi", "quad_rel_tol"};

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

SpectralOperator make_operator(Config& c) {
  Vec lam;
  if (c.has("eigenvalues")) {
    lam = c.get_vec("eigenvalues", {});
  } else {
    const long dim = c.get_int("dim", 50);
    if (dim < 1) throw Error(ErrorKind::input, "dim must be >= 1", "dim");
    const std::string kind = c.get_string("eigen_kind", "linear");
    const double scale = c.get_double("eigen_scale", 1.0);
    const double shift = c.get_double("eigen_shift", 0.0);
    for (long k = 1; k <= dim; ++k) {
      const double kk = static_cast<double>(k);
      if (kind == "linear")
        lam.push_back(scale * kk + shift);
      else if (kind == "square")
        lam.push_back(scale * kk * kk + shift);
      else
        throw Error(ErrorKind::parse, "eigen_kind must be linear or square", "eigen_kind");
    }
  }
  Vec w = c.get_vec("weights", {});
  return SpectralOperator(std::move(lam), std::move(w));
}

// Comma list; a single value is broadcast to the dimension.
Vec modal_vector(Config& c, const std::string& key, double def, std::size_t dim) {
  Vec v = c.get_vec(key, {def});
  if (v.size() == 1 && dim > 1) v.assign(dim, v[0]);
  if (v.size() != dim)
    throw Error(ErrorKind::shape, "key '" + key + "' has " + std::to_string(v.size()) +
                                      " entries, expected " + std::to_string(dim), key);
  return v;
}

HolderParams make_params(Config& c, double beta, double sigma) {
  return HolderParams(c.get_double("beta", beta), c.get_double("sigma_holder", sigma),
                      c.get_double("T", 1.0));
}

std::size_t positive_count(Config& c, const std::string& key, long def) {
  const long v = c.get_int(key, def);
  if (v < 1) throw Error(ErrorKind::input, "key '" + key + "' must be >= 1", key);
  return static_cast<std::size_t>(v);
}

TimeGrid make_grid(Config& c, double T, const std::string& default_kind) {
  const std::size_t M = positive_count(c, "grid_M", 256);
  const double r = c.get_double("grading_r", 2.0);
  const std::string kind = c.get_string("grid_kind", default_kind);
  if (kind == "graded") return TimeGrid::graded(T, M, r);
  if (kind == "uniform") return TimeGrid::uniform(T, M);
  if (kind == "composite") return TimeGrid::graded_uniform(T, T / 16.0, 32, M, r);
  throw Error(ErrorKind::parse, "grid_kind must be graded, uniform or composite", "grid_kind");
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

void write_json(const fs::path& file, const json& j) { write_text_file(file, j.dump(2) + "\n"); }

json vec_json(const Vec& v) { return json(v); }

// ---------------------------------------------------------------- subcommands

void run_verify_semigroup(Config& c, const fs::path& out) {
  c.restrict_to(concat({kOperatorKeys, {"theta", "grid_nodes", "t_min", "t_max", "sector_angle",
                                        "ray_samples", "yosida_nu", "yosida_levels"}}));
  const SpectralOperator op = make_operator(c);
  const double theta = c.get_double("theta", 1.0);
  const std::size_t n = positive_count(c, "grid_nodes", 512);
  const double tmin = c.get_double("t_min", 1e-4), tmax = c.get_double("t_max", 1e2);
  if (!(tmin > 0.0 && tmax > tmin)) throw Error(ErrorKind::input, "need 0 < t_min < t_max", "t_min");
  Vec grid(n);
  for (std::size_t j = 0; j < n; ++j)
    grid[j] = n == 1 ? tmin : tmin * std::pow(tmax / tmin, static_cast<double>(j) / (n - 1.0));
  const BoundProfile bp = semigroup_bound_profile(op, theta, grid);
  double max_obs = 0.0;
  for (double v : bp.observed) max_obs = std::max(max_obs, v);

  const SectorReport sr = verify_sectorial(op, c.get_double("sector_angle", 0.7853981633974483),
                                           positive_count(c, "ray_samples", 64));
  const double nu = c.get_double("yosida_nu", 0.5);
  const long levels = c.get_int("yosida_levels", 11);
  json yos = json::array();
  bool monotone = true;
  double prev_gap = INFINITY, prev_inv = INFINITY;
  for (long j = 0; j < levels; ++j) {
    const YosidaReport y = yosida_gap(op, std::int64_t{1} << j, nu, grid);
    monotone = monotone && y.gap <= prev_gap + 1e-12 && y.inv_gap <= prev_inv + 1e-12;
    prev_gap = y.gap;
    prev_inv = y.inv_gap;
    yos.push_back({{"n", y.n}, {"gap", y.gap}, {"inv_gap", y.inv_gap},
                   {"uniform_smoothing", y.uniform_smoothing}, {"uniform_inverse", y.uniform_inverse}});
  }
  json rep{{"theta", theta},
           {"certified_bound", bp.certified_bound},
           {"max_observed", max_obs},
           {"pass", !bp.violation},
           {"sector_angle", sr.angle},
           {"sector_m_estimate", sr.m_estimate},
           {"sector_samples", sr.samples_used},
           {"sector_pass", sr.pass},
           {"yosida_nu", nu},
           {"yosida", yos},
           {"yosida_monotone", monotone}};
  write_json(out / "semigroup.json", rep);
  std::string csv = "t,observed\n";
  for (std::size_t j = 0; j < n; ++j) csv += format_double(grid[j]) + "," + format_double(bp.observed[j]) + "\n";
  write_text_file(out / "bound_profile.csv", csv);
}

json holder_json(const HolderNormReport& r) {
  const MembershipReport& m = r.membership;
  return json{{"sup_term", r.sup_term},
              {"seminorm", r.seminorm},
              {"total", r.total},
              {"limit_verdict", to_string(m.limit)},
              {"vanishing_verdict", to_string(m.vanishing)},
              {"limit_slope", m.limit_slope},
              {"modulus_slope", m.modulus_slope},
              {"levels", vec_json(m.levels)},
              {"limit_tail", vec_json(m.limit_tail)},
              {"modulus_tail", vec_json(m.modulus_tail)}};
}

void run_holder_norm(Config& c, const fs::path& out) {
  c.restrict_to(concat({kHolderKeys, kGridKeys, {"kind", "v", "weights", "path_csv", "modulus_tol"}}));
  const HolderParams prm = make_params(c, 0.8, 0.2);
  const std::string csv_file = c.get_string("path_csv", "");
  MembershipOptions mo;
  mo.modulus_tol = c.get_double("modulus_tol", 1e-2);
  PathSample p;
  if (!csv_file.empty()) {
    p = path_from_csv(read_text_file(csv_file), c.get_vec("weights", {}));
  } else {
    const Vec v = c.get_vec("v", {1.0});
    Vec w = c.get_vec("weights", {});
    const TimeGrid g = TimeGrid::graded(prm.T, positive_count(c, "grid_M", 1024), c.get_double("grading_r", 2.0));
    p = make_test_function(parse_profile_kind(c.get_string("kind", "holder_power")), prm, v, g, w);
  }
  const HolderNormReport r = weighted_holder_norm(p, prm, mo);
  write_json(out / "holder.json", holder_json(r));
  write_text_file(out / "path.csv", path_to_csv(p));
  std::string csv = "t,w\n";
  for (std::size_t j = 0; j < p.size(); ++j)
    csv += format_double(p.grid()[j]) + "," + format_double(r.w_profile[j]) + "\n";
  write_text_file(out / "w_profile.csv", csv);
}

DeterministicProblem make_det_problem(Config& c, const SpectralOperator& op, const HolderParams& prm,
                                      const TimeGrid& grid) {
  const double a1 = c.get_double("alpha1", 0.0);
  const std::string csv_file = c.get_string("forcing_csv", "");
  Forcing f;
  if (!csv_file.empty()) {
    PathSample s = path_from_csv(read_text_file(csv_file), op.weights());
    if (s.grid().nodes() != grid.nodes())
      throw Error(ErrorKind::input, "forcing_csv nodes differ from the solve grid", "forcing_csv");
    f = Forcing::from_samples(std::move(s));
  } else {
    f = Forcing::closed(parse_profile_kind(c.get_string("forcing_kind", "holder_power")),
                        modal_vector(c, "forcing_coeffs", 1.0, op.dim()));
  }
  return DeterministicProblem(op, a1, std::move(f), modal_vector(c, "xi", 0.0, op.dim()), prm);
}

json regularity_json(const RegularityReport& r) {
  return json{{"ratio_t1", r.ratio_t1},
              {"ratio_t13", optional_number(r.ratio_t13)},
              {"ratio_t24", optional_number(r.ratio_t24)},
              {"ratio_t25", optional_number(r.ratio_t25)},
              {"grid_M", r.grid_M},
              {"quadrature_tol", r.quadrature_tol},
              {"forcing_norm", r.forcing_norm},
              {"c_norm", r.c_norm},
              {"ax_holder", r.ax_holder},
              {"dxdt_holder", optional_number(r.dxdt_holder)},
              {"rhs_t2", r.rhs_t2},
              {"note", r.note}};
}

void run_solve_deterministic(Config& c, const fs::path& out) {
  c.restrict_to(concat({kOperatorKeys, kHolderKeys, kGridKeys, kForcingKeys, {"grid_kind"}}));
  const SpectralOperator op = make_operator(c);
  const HolderParams prm = make_params(c, 0.8, 0.1);
  const TimeGrid grid = make_grid(c, prm.T, "graded");
  const DeterministicProblem prob = make_det_problem(c, op, prm, grid);
  SolveOptions so;
  so.rel_tol = c.get_double("quad_rel_tol", 1e-4);
  const SolutionPath sol = mild_solve(prob, grid, so);
  write_text_file(out / "x.csv", path_to_csv(sol.x));
  write_text_file(out / "ax_frac.csv", path_to_csv(sol.ax_frac));
  write_text_file(out / "dxdt.csv", path_to_csv(sol.dxdt));

  json rep = regularity_json(full_regularity_report(sol, prob));
  rep["tolerance_met"] = sol.tolerance_met;
  rep["strict_residual"] = prob.alpha1 <= 0.0 ? json(strict_residual(sol, prob)) : json(nullptr);
  write_json(out / "deterministic.json", rep);
  if (!sol.tolerance_met)
    throw Error(ErrorKind::tolerance, "quadrature tolerance " + format_double(sol.quadrature_tol) +
                                          " above the requested relative level");
}

DiffusionOperator make_gain(Config& c, const SpectralOperator& op, const HolderParams& prm) {
  DiffusionOperator G;
  G.kind = parse_profile_kind(c.get_string("gain_kind", "constant"));
  G.coeffs = modal_vector(c, "gain_coeffs", 1.0, op.dim());
  G.alpha2 = c.get_double("alpha2", 0.0);
  G.params = prm;
  return G;
}

NoiseConfig make_noise(Config& c, const TimeGrid& grid, std::optional<std::uint64_t> seed) {
  NoiseConfig n;
  n.seed = c.get_u64("seed", 0);
  if (seed) n.seed = *seed;
  n.n_paths = positive_count(c, "n_paths", 1000);
  n.threads = static_cast<std::size_t>(std::max(0L, c.get_int("threads", 0)));
  n.grid = grid;
  return n;
}

json moment_json(const MomentProfile& m) {
  return json{{"ratio_t43", m.ratio}, {"gain_norm", m.gain_norm}, {"t", vec_json(m.t)},
              {"mc_mean_norm", vec_json(m.mc_mean_norm)}, {"envelope", vec_json(m.envelope)},
              {"shape", vec_json(m.shape)}};
}

json isometry_json(const IsometryReport& r) {
  return json{{"t", r.t}, {"mc_mean_square", r.mc_mean_square}, {"analytic", r.analytic},
              {"standard_error", r.standard_error}, {"z_score", r.z_score}, {"pass", r.pass},
              {"warning", r.warning}};
}

json holder_exponent_json(const HolderExponentReport& h) {
  return json{{"gamma_hat", h.gamma_hat}, {"band_lo", h.band_lo}, {"band_hi", h.band_hi},
              {"slope", h.slope}, {"lags", vec_json(h.lags)},
              {"mean_square_increment", vec_json(h.mean_square_increment)}};
}

void run_simulate_convolution(Config& c, const fs::path& out, std::optional<std::uint64_t> seed) {
  c.restrict_to(concat({kOperatorKeys, kHolderKeys, kGridKeys, kNoiseKeys, {"csv_paths", "t_isometry"}}));
  const SpectralOperator op = make_operator(c);
  const HolderParams prm = make_params(c, 1.0, 0.25);
  const DiffusionOperator G = make_gain(c, op, prm);
  const double kappa = c.get_double("kappa", 0.0);
  const TimeGrid grid = make_grid(c, prm.T, "uniform");
  const NoiseConfig cfg = make_noise(c, grid, seed);
  const std::size_t csv_paths = std::min<std::size_t>(cfg.n_paths, static_cast<std::size_t>(std::max(0L, c.get_int("csv_paths", 16))));
  const double t_iso = c.get_double("t_isometry", prm.T);

  const ConvolutionEnsemble ens = simulate_convolution(op, G, kappa, cfg);
  json man{{"seed", cfg.seed}, {"n_paths", cfg.n_paths}, {"grid", grid.nodes()}, {"kappa", kappa},
           {"gain", {{"kind", to_string(G.kind)}, {"coeffs", G.coeffs}, {"alpha2", G.alpha2}}},
           {"csv_paths", csv_paths}};
  write_json(out / "ensemble_manifest.json", man);
  for (std::size_t i = 0; i < csv_paths; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "path_%05zu.csv", i);
    write_text_file(out / "paths" / name, path_to_csv(ens.path(i)));
  }
  write_json(out / "moment.json", moment_json(convolution_moment_profile(ens, op, G)));
  write_json(out / "isometry.json", isometry_json(ito_isometry_check(op, G, t_iso, cfg)));
  try {
    write_json(out / "holder_exponent.json", holder_exponent_json(empirical_holder_exponent(ens)));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::input) throw;
    write_json(out / "holder_exponent.json", json{{"skipped", e.what()}});
  }
}

void run_solve_stochastic(Config& c, const fs::path& out, std::optional<std::uint64_t> seed) {
  c.restrict_to(concat({kOperatorKeys, kHolderKeys, kGridKeys, kNoiseKeys, kForcingKeys}));
  const SpectralOperator op = make_operator(c);
  const HolderParams prm = make_params(c, 0.9, 0.2);
  const TimeGrid grid = make_grid(c, prm.T, "graded");
  const DeterministicProblem det = make_det_problem(c, op, prm, grid);
  const DiffusionOperator G = make_gain(c, op, prm);
  const double kappa = c.get_double("kappa", 0.0);
  const NoiseConfig cfg = make_noise(c, grid, seed);
  const StochasticSolution s = mild_solve_stochastic(det, G, kappa, cfg);
  write_text_file(out / "x_det.csv", path_to_csv(s.deterministic.x));
  write_text_file(out / "mean.csv", path_to_csv(s.ensemble.mean_path()));
  json rep{{"ratio_t49", s.ratio_t49},
           {"forcing_norm", s.forcing_norm},
           {"gain_norm", s.gain_norm},
           {"kappa", kappa},
           {"mean_holder_norm", s.mean_holder_norm},
           {"expected_path_holder_norm", s.expected_path_holder_norm},
           {"holder_paths", s.holder_paths},
           {"quadrature_tol", s.deterministic.quadrature_tol},
           {"t", vec_json(s.t)},
           {"mc_mean_norm", vec_json(s.mc_mean_norm)},
           {"shape", vec_json(s.shape)}};
  if (s.strict) {
    rep["strict_final_median"] = s.strict->final_median;
    rep["strict_median_sup"] = s.strict->median_sup;
  }
  write_json(out / "stochastic.json", rep);
}

void run_heat(Config& c, const fs::path& out, std::optional<std::uint64_t> seed) {
  c.restrict_to({"d", "K", "a", "beta", "sigma_holder", "alpha1", "alpha2", "kappa", "q",
                 "noise_scale", "T", "grid_M", "grading_r", "seed", "n_paths", "threads",
                 "forcing_kind", "forcing_amp", "forcing_mode", "u0_amp", "u0_mode",
                 "profile_paths", "t_eval"});
  HeatProblem hp;
  hp.d = static_cast<int>(c.get_int("d", 1));
  hp.K = static_cast<int>(c.get_int("K", 16));
  hp.a = c.get_double("a", 1.0);
  hp.beta = c.get_double("beta", 1.0);
  hp.sigma_holder = c.get_double("sigma_holder", 0.25);
  hp.alpha1 = c.get_double("alpha1", 0.0);
  hp.alpha2 = c.get_double("alpha2", 0.0);
  hp.kappa = c.get_double("kappa", 0.0);
  hp.q = c.get_double("q", 0.0);
  hp.noise_scale = c.get_double("noise_scale", 0.0);
  hp.T = c.get_double("T", 1.0);
  hp.grid_M = positive_count(c, "grid_M", 256);
  hp.grading_r = c.get_double("grading_r", 2.0);
  hp.forcing_kind = parse_profile_kind(c.get_string("forcing_kind", "constant"));
  hp.forcing_amp = c.get_double("forcing_amp", 0.0);
  hp.forcing_mode = static_cast<int>(c.get_int("forcing_mode", 0));
  hp.u0_amp = c.get_double("u0_amp", 0.0);
  hp.u0_mode = static_cast<int>(c.get_int("u0_mode", 0));
  hp.profile_paths = positive_count(c, "profile_paths", 500);
  hp.t_eval = c.get_double("t_eval", 0.0);
  NoiseConfig cfg = make_noise(c, TimeGrid(), seed);

  const HeatReport r = run_heat_experiment(hp, cfg);
  write_text_file(out / "solution.csv", path_to_csv(r.solution.x));
  json rep{{"case", r.case_id}, {"n_modes", r.n_modes}, {"lambda_min", r.lambda_min},
           {"lambda_max", r.lambda_max}, {"notes", r.notes}};
  if (r.regularity) rep["regularity"] = regularity_json(*r.regularity);
  if (r.case_id == 2) {
    rep["noise"] = {{"truncated_hs", r.noise.truncated_hs},
                    {"continuum_hs", optional_number(r.noise.continuum_hs)}};
    if (r.second_moment) rep["second_moment"] = isometry_json(*r.second_moment);
    rep["stationary_sum"] = r.stationary_sum;
    rep["stationary_z"] = r.stationary_z;
    rep["tail_bound"] = r.tail_bound;
    if (r.moment) rep["moment"] = moment_json(*r.moment);
    if (r.holder) rep["holder_exponent"] = holder_exponent_json(*r.holder);
    rep["ratio_t49"] = optional_number(r.ratio_t49);
    if (r.strict) rep["strict_final_median"] = r.strict->final_median;
  }
  write_json(out / "heat.json", rep);
}

// ---------------------------------------------------------------- report

bool finite_number(const json& j) { return j.is_number() && std::isfinite(j.get<double>()); }

json read_json(const fs::path& f) {
  try {
    return json::parse(read_text_file(f));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed JSON: ") + e.what(), f.string());
  }
}

void write_error(const fs::path& out, const std::string& sub, ErrorKind kind,
                 const std::string& message, const std::string& subject) {
  std::cerr << "error (" << to_string(kind) << "): " << message << "\n";
  if (out.empty()) return;
  json e{{"kind", to_string(kind)}, {"message", message}, {"subcommand", sub},
         {"exit_code", exit_code(kind)}};
  if (!subject.empty()) e["key"] = subject;
  try {
    write_json(out / "error.json", e);
  } catch (const Error&) {
    // nothing more can be reported
  }
}

}  // namespace

int report(const fs::path& dir) {
  try {
    if (!fs::exists(dir / "manifest.json"))
      throw Error(ErrorKind::io, "no manifest.json in " + dir.string(), "manifest.json");
    const json man = read_json(dir / "manifest.json");
    json values = json::object();
    json gates = json::object();
    auto load = [&](const char* name) -> std::optional<json> {
      if (!fs::exists(dir / name)) return std::nullopt;
      return read_json(dir / name);
    };
    if (auto j = load("semigroup.json")) {
      values["certified_bound"] = (*j)["certified_bound"];
      values["max_observed"] = (*j)["max_observed"];
      values["sector_m_estimate"] = (*j)["sector_m_estimate"];
      gates["semigroup_bound"] = (*j)["pass"];
      gates["sector_finite"] = (*j)["sector_pass"];
      gates["yosida_monotone"] = (*j)["yosida_monotone"];
    }
    if (auto j = load("holder.json")) {
      values["holder_total"] = (*j)["total"];
      values["limit_verdict"] = (*j)["limit_verdict"];
      values["vanishing_verdict"] = (*j)["vanishing_verdict"];
      gates["holder_norm_finite"] = finite_number((*j)["total"]);
    }
    auto det_gates = [&](const json& r, const std::string& prefix) {
      bool finite = finite_number(r["ratio_t1"]);
      for (const char* k : {"ratio_t1", "ratio_t13", "ratio_t24", "ratio_t25"}) {
        values[prefix + k] = r[k];
        if (!r[k].is_null()) finite = finite && finite_number(r[k]);
      }
      gates[prefix + "ratios_finite"] = finite;
    };
    if (auto j = load("deterministic.json")) {
      det_gates(*j, "");
      values["quadrature_tol"] = (*j)["quadrature_tol"];
      values["strict_residual"] = (*j)["strict_residual"];
      gates["quadrature_tolerance"] = (*j)["tolerance_met"];
    }
    if (auto j = load("isometry.json")) {
      values["isometry_z"] = (*j)["z_score"];
      gates["isometry"] = (*j)["pass"];
    }
    if (auto j = load("moment.json")) {
      values["ratio_t43"] = (*j)["ratio_t43"];
      gates["moment_ratio_finite"] = finite_number((*j)["ratio_t43"]);
    }
    if (auto j = load("holder_exponent.json"); j && j->contains("gamma_hat")) {
      values["gamma_hat"] = (*j)["gamma_hat"];
      gates["holder_exponent_finite"] = finite_number((*j)["gamma_hat"]);
    }
    if (auto j = load("stochastic.json")) {
      values["ratio_t49"] = (*j)["ratio_t49"];
      gates["ratio_t49_finite"] = finite_number((*j)["ratio_t49"]);
      if (j->contains("strict_final_median")) values["strict_final_median"] = (*j)["strict_final_median"];
    }
    if (auto j = load("heat.json")) {
      values["heat_case"] = (*j)["case"];
      if (j->contains("regularity")) det_gates((*j)["regularity"], "heat_");
      if (j->contains("second_moment")) {
        values["isometry_z"] = (*j)["second_moment"]["z_score"];
        values["stationary_z"] = (*j)["stationary_z"];
        gates["isometry"] = (*j)["second_moment"]["pass"];
      }
      if (j->contains("moment")) {
        values["ratio_t43"] = (*j)["moment"]["ratio_t43"];
        gates["moment_ratio_finite"] = finite_number((*j)["moment"]["ratio_t43"]);
      }
      if (j->contains("holder_exponent")) {
        values["gamma_hat"] = (*j)["holder_exponent"]["gamma_hat"];
        gates["holder_exponent_finite"] = finite_number((*j)["holder_exponent"]["gamma_hat"]);
      }
      if (j->contains("ratio_t49") && !(*j)["ratio_t49"].is_null()) {
        values["ratio_t49"] = (*j)["ratio_t49"];
        gates["ratio_t49_finite"] = finite_number((*j)["ratio_t49"]);
      }
    }
    bool all = true;
    for (auto& [k, v] : gates.items()) all = all && v.is_boolean() && v.get<bool>();
    const bool errored = fs::exists(dir / "error.json");
    json summary{{"subcommand", man.value("subcommand", "")},
                 {"values", values},
                 {"gates", gates},
                 {"run_error", errored},
                 {"all_pass", all && !errored}};
    write_json(dir / "summary.json", summary);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  }
}

int run(ExperimentConfig ec) {
  const std::string& sub = ec.subcommand;
  const fs::path& out = ec.output_dir;
  if (sub == "report") return report(out);
  Config& c = ec.params;
  if (ec.seed) c.set("seed", std::to_string(*ec.seed));
  int code = 0;
  try {
    if (out.empty()) throw Error(ErrorKind::io, "an output directory is required", "--out");
    std::error_code fec;
    fs::create_directories(out, fec);
    if (fec) throw Error(ErrorKind::io, "cannot create " + out.string(), out.string());
    fs::remove(out / "error.json", fec);
    if (sub == "verify-semigroup")
      run_verify_semigroup(c, out);
    else if (sub == "holder-norm")
      run_holder_norm(c, out);
    else if (sub == "solve-deterministic")
      run_solve_deterministic(c, out);
    else if (sub == "simulate-convolution")
      run_simulate_convolution(c, out, ec.seed);
    else if (sub == "solve-stochastic")
      run_solve_stochastic(c, out, ec.seed);
    else if (sub == "heat")
      run_heat(c, out, ec.seed);
    else
      throw Error(ErrorKind::parse, "unknown subcommand '" + sub + "'", sub);
  } catch (const Error& e) {
    write_error(out, sub, e.kind(), e.what(), e.subject());
    code = exit_code(e.kind());
  } catch (const std::exception& e) {
    write_error(out, sub, ErrorKind::input, e.what(), "");
    code = 2;
  }
  if (!out.empty() && fs::is_directory(out)) {
    json cfg = json::object();
    for (const auto& [k, v] : c.resolved()) cfg[k] = v;
    try {
      write_json(out / "manifest.json", json{{"subcommand", sub}, {"config", cfg}});
    } catch (const Error& e) {
      std::cerr << "error (io): " << e.what() << "\n";
      if (code == 0) code = 1;
    }
  }
  return code;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Spectral semigroup toolkit for linear parabolic evolution equations"};
  app.require_subcommand(1, 1);
  std::string config_file, out_dir;
  std::uint64_t seed = 0;
  for (const auto& name : subcommands()) {
    CLI::App* s = app.add_subcommand(name);
    if (name == "report") {
      s->add_option("--out", out_dir, "run directory to summarize")->required();
    } else {
      s->add_option("--config", config_file, "flat key = value file or manifest.json")->required();
      s->add_option("--out", out_dir, "output directory")->required();
      s->add_option("--seed", seed, "overrides the seed key");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  ExperimentConfig ec;
  ec.subcommand = app.get_subcommands().front()->get_name();
  ec.output_dir = out_dir;
  if (ec.subcommand != "report") {
    if (app.get_subcommands().front()->count("--seed")) ec.seed = seed;
    try {
      ec.params = Config::from_file(config_file);
    } catch (const Error& e) {
      std::error_code fec;
      fs::create_directories(ec.output_dir, fec);
      write_error(ec.output_dir, ec.subcommand, e.kind(), e.what(), e.subject());
      return exit_code(e.kind());
    }
  }
  return run(std::move(ec));
}

}  // namespace parasemi
