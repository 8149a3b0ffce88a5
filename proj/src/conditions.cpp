#include "convpow/conditions.hpp"

#include <cmath>

#include "convpow/errors.hpp"
#include "convpow/laplace.hpp"
#include "convpow/saddle.hpp"

namespace convpow {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::A_ok: return "A_ok";
    case Regime::B_ok: return "B_ok";
    default: return "suspect";
  }
}

ConditionReport check_conditions(const MeasureSpec& spec, std::int64_t j, double t, double gamma, const ZGrid& grid,
                                 const Thresholds& thresholds) {
  if (!(gamma > 0) || !std::isfinite(gamma)) throw InvalidArgument("check_conditions: gamma must be positive");
  if (grid.points < 2 || !(grid.z_max_factor > 1)) throw InvalidArgument("check_conditions: bad z grid");
  const SaddleReport s = solve_kappa(spec, j, t);

  ConditionReport r;
  r.j = j;
  r.t = t;
  r.kappa = s.kappa;
  r.kappa_a = s.kappa_a;
  r.Tj_over_aj = s.T_j / s.a_j;
  r.gamma = gamma;
  r.z_max = gamma * grid.z_max_factor;
  r.arithmetic = spec.is_arithmetic();

  // |V-hat(kappa - i u)| = |V-hat(kappa + i u)| for a real measure
  double sup = 0.0;
  double z_sup = gamma;
  double prev = 0.0;
  double last = 0.0;
  for (int i = 0; i < grid.points; ++i) {
    const double z = gamma * std::pow(grid.z_max_factor, static_cast<double>(i) / (grid.points - 1));
    const double m = std::min(1.0, modulus_ratio(spec, s.kappa, -z / s.T_j));
    if (i == 0) r.first_scan_value = m;
    if (m > sup) {
      sup = m;
      z_sup = z;
    }
    prev = last;
    last = m;
  }
  if (z_sup == r.z_max && last > prev)
    throw ScanInconclusive("check_conditions: modulus ratio still rising at z_max");
  r.nonlattice_sup = sup;
  r.z_at_sup = z_sup;

  if (sup >= thresholds.nonlattice_sup) r.regime = Regime::suspect;
  else if (r.Tj_over_aj < thresholds.tj_over_aj) r.regime = Regime::A_ok;
  else if (!r.arithmetic) r.regime = Regime::B_ok;
  else r.regime = Regime::suspect;
  return r;
}

nlohmann::json to_json(const ConditionReport& r) {
  return {{"schema_version", 1},
          {"j", r.j},
          {"t", r.t},
          {"kappa", r.kappa},
          {"kappa_a", r.kappa_a},
          {"Tj_over_aj", r.Tj_over_aj},
          {"nonlattice_sup", r.nonlattice_sup},
          {"z_at_sup", r.z_at_sup},
          {"first_scan_value", r.first_scan_value},
          {"gamma", r.gamma},
          {"z_max", r.z_max},
          {"arithmetic", r.arithmetic},
          {"regime", to_string(r.regime)}};
}

LaguerreRates laguerre_case1_rates(std::int64_t j, double t) {
  const SaddleReport s = solve_kappa(Affine{1.0, 1.0}, j, t);
  const double jd = static_cast<double>(j);
  return {s.a_j / (t / std::sqrt(jd)), s.kappa_a / std::sqrt(jd), s.T_j / (7.0 * t / jd)};
}

}  // namespace convpow
