#include <cmath>

#include "parasemi/error.hpp"
#include "parasemi/function_spaces.hpp"

namespace parasemi {

ProfileKind parse_profile_kind(const std::string& name) {
  if (name == "constant") return ProfileKind::constant;
  if (name == "power") return ProfileKind::power;
  if (name == "power_plus_holder") return ProfileKind::power_plus_holder;
  if (name == "holder_power") return ProfileKind::holder_power;
  if (name == "oscillatory") return ProfileKind::oscillatory;
  throw Error(ErrorKind::parse, "unknown profile kind '" + name + "'");
}

const char* to_string(ProfileKind kind) noexcept {
  switch (kind) {
    case ProfileKind::constant: return "constant";
    case ProfileKind::power: return "power";
    case ProfileKind::power_plus_holder: return "power_plus_holder";
    case ProfileKind::holder_power: return "holder_power";
    case ProfileKind::oscillatory: return "oscillatory";
  }
  return "unknown";
}

namespace {

// t^p with the convention that 0^p is 1 for p = 0 and 0 otherwise (the
// singular case stores a placeholder that every weighted sum multiplies by 0).
double tpow(double t, double p) {
  if (t == 0.0) return p == 0.0 ? 1.0 : 0.0;
  return std::pow(t, p);
}

}  // namespace

double profile_value(ProfileKind kind, double beta, double sigma, double t) {
  if (t < 0.0) throw Error(ErrorKind::input, "profile evaluated at negative time");
  switch (kind) {
    case ProfileKind::constant: return 1.0;
    case ProfileKind::power: return tpow(t, beta - 1.0);
    case ProfileKind::holder_power: return tpow(t, beta - 1.0 + sigma);
    case ProfileKind::power_plus_holder:
      return tpow(t, beta - 1.0) + tpow(t, beta - 1.0 + sigma);
    case ProfileKind::oscillatory:
      return t == 0.0 ? 0.0 : std::sin(1.0 / t) * std::pow(t, beta - 1.0);
  }
  return 0.0;
}

double profile_antiderivative(ProfileKind kind, double beta, double sigma, double t) {
  switch (kind) {
    case ProfileKind::constant: return t;
    case ProfileKind::power: return std::pow(t, beta) / beta;
    case ProfileKind::holder_power: return std::pow(t, beta + sigma) / (beta + sigma);
    case ProfileKind::power_plus_holder:
      return std::pow(t, beta) / beta + std::pow(t, beta + sigma) / (beta + sigma);
    case ProfileKind::oscillatory: break;
  }
  throw Error(ErrorKind::input, "oscillatory profile has no closed-form antiderivative");
}

bool profile_is_singular(ProfileKind kind, double beta, double sigma) {
  switch (kind) {
    case ProfileKind::constant: return false;
    case ProfileKind::power:
    case ProfileKind::power_plus_holder: return beta < 1.0;
    case ProfileKind::holder_power: return beta - 1.0 + sigma < 0.0;
    case ProfileKind::oscillatory: return true;
  }
  return false;
}

bool profile_has_closed_form(ProfileKind kind) noexcept {
  return kind != ProfileKind::oscillatory;
}

PathSample make_test_function(ProfileKind kind, const HolderParams& params,
                              std::span<const double> v, const TimeGrid& grid,
                              std::span<const double> weights) {
  Vec w(weights.begin(), weights.end());
  if (w.empty()) w.assign(v.size(), 1.0);
  if (w.size() != v.size()) throw Error(ErrorKind::shape, "weights and vector differ in length");
  PathSample p(grid, std::move(w));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double phi = profile_value(kind, params.beta, params.sigma, grid[j]);
    auto row = p.value(j);
    for (std::size_t k = 0; k < v.size(); ++k) row[k] = phi * v[k];
  }
  return p;
}

}  // namespace parasemi
