#pragma once

#include <optional>
#include <string>

#include "parasemi/function_spaces.hpp"
#include "parasemi/spectral_core.hpp"

namespace parasemi {

/// Modal forcing. Closed form: F_k(t) = coeffs_k * phi(t) describes F itself.
/// Sampled: values of A^{-alpha1} F on a grid that must match the solve grid.
struct Forcing {
  enum class Type { closed_form, sampled };
  Type type = Type::closed_form;
  ProfileKind kind = ProfileKind::constant;
  Vec coeffs;
  PathSample sampled;

  static Forcing closed(ProfileKind kind, Vec coeffs);
  static Forcing zero(std::size_t dim);
  static Forcing from_samples(PathSample a_minus_alpha1_F);
};

struct DeterministicProblem {
  SpectralOperator op;
  double alpha1 = 0.0;
  Forcing forcing;
  Vec xi;
  HolderParams params;

  DeterministicProblem(SpectralOperator op, double alpha1, Forcing forcing, Vec xi,
                       HolderParams params);
};

struct SolveOptions {
  double rel_tol = 1e-6;        // target for quadrature_tol relative to the solution scale
  bool estimate_error = true;   // run the half-resolution comparison
};

struct SolutionPath {
  PathSample x;         // X
  PathSample ax_frac;   // A^{1-alpha1} X
  PathSample dxdt;      // dX/dt
  double quadrature_tol = 0.0;
  bool tolerance_met = false;
};

/// Sampled F (not A^{-alpha1} F) on the grid; singular profiles store 0 at t = 0.
PathSample forcing_path(const DeterministicProblem& p, const TimeGrid& grid);
/// A^{-alpha1} F on the grid.
PathSample scaled_forcing_path(const DeterministicProblem& p, const TimeGrid& grid);

/// Exponential product integration per mode; grid must start at 0 and end at or before T.
SolutionPath mild_solve(const DeterministicProblem& problem, const TimeGrid& grid,
                        const SolveOptions& opts = {});

/// max_j ||X(t_j) - xi + int_0^{t_j} A X ds - int_0^{t_j} F ds||.
double strict_residual(const SolutionPath& sol, const DeterministicProblem& problem);
/// The signed residual vector at every node.
PathSample strict_residual_path(const SolutionPath& sol, const DeterministicProblem& problem);

struct RegularityReport {
  Vec lhs_t1, rhs_t1;
  double ratio_t1 = 0.0;
  std::optional<double> ratio_t13;  // only when alpha1 <= 0
  // maximal regularity
  double c_norm = 0.0;        // ||A^{beta-alpha1} X||_C
  double ax_holder = 0.0;     // ||A^{1-alpha1} X||_F
  std::optional<double> dxdt_holder;  // ||A^{-alpha1} dX/dt||_F, alpha1 <= 0
  double rhs_t2 = 0.0;        // ||A^{beta-alpha1} xi|| + ||A^{-alpha1} F||_F
  std::optional<double> ratio_t24;
  std::optional<double> ratio_t25;
  double forcing_norm = 0.0;  // ||A^{-alpha1} F||_F
  std::size_t grid_M = 0;
  double quadrature_tol = 0.0;
  std::string note;
};

/// Populates the t1 fields (and ratio_t13 when alpha1 <= 0).
RegularityReport t1_estimate_check(const SolutionPath& sol, const DeterministicProblem& problem);

/// Populates the maximal-regularity fields; throws precondition when the
/// sampled A^{-alpha1} F fails the membership diagnostics.
RegularityReport maximal_regularity_report(const SolutionPath& sol,
                                           const DeterministicProblem& problem);

/// Both reports merged.
RegularityReport full_regularity_report(const SolutionPath& sol,
                                        const DeterministicProblem& problem);

}  // namespace parasemi
