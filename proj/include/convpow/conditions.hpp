#ifndef CONVPOW_CONDITIONS_HPP
#define CONVPOW_CONDITIONS_HPP

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "convpow/measure.hpp"

namespace convpow {

enum class Regime { A_ok, B_ok, suspect };

std::string to_string(Regime r);

/// Log-spaced frequency scan z in [gamma, z_max_factor * gamma].
struct ZGrid {
  double z_max_factor = 1e3;
  int points = 200;
};

/// Classification thresholds; diagnostics, not mathematics.
struct Thresholds {
  double tj_over_aj = 0.2;
  double nonlattice_sup = 0.98;
};

struct ConditionReport {
  std::int64_t j;
  double t;
  double kappa;
  double kappa_a;
  double Tj_over_aj;
  double nonlattice_sup;  ///< max over the scan of |V-hat(kappa - i z/T_j)| / V-hat(kappa)
  double z_at_sup;
  double first_scan_value;  ///< modulus ratio at z = gamma
  double gamma;
  double z_max;
  bool arithmetic;
  Regime regime;
};

/// Throws ScanInconclusive when the modulus ratio is still rising at z_max.
ConditionReport check_conditions(const MeasureSpec& spec, std::int64_t j, double t, double gamma,
                                 const ZGrid& grid = {}, const Thresholds& thresholds = {});

nlohmann::json to_json(const ConditionReport& r);

/// Affine(1,1) with t >> j: a(j)/(t j^{-1/2}), kappa a(j)/sqrt(j), T_j/(7t/j); all tend to 1.
struct LaguerreRates {
  double a_j_ratio;
  double kappa_a_ratio;
  double Tj_ratio;
};

LaguerreRates laguerre_case1_rates(std::int64_t j, double t);

}  // namespace convpow

#endif
