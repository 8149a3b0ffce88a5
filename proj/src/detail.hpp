// Internal helpers shared by the measure, laplace and oracle translation units.
#ifndef CONVPOW_SRC_DETAIL_HPP
#define CONVPOW_SRC_DETAIL_HPP

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "convpow/measure.hpp"

namespace convpow::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolutely continuous measure given by its log-density, plus an atom at 0.
struct DensityModel {
  std::function<double(double)> log_density;  // -inf where the density vanishes
  double atom_at_zero = 0.0;
  double support_start = 0.0;
  double support_end = kInf;
};

/// Atoms at positions[k] with masses[k]; with `repeat` the last mass recurs every `span`.
struct AtomicModel {
  std::vector<double> positions;
  std::vector<double> masses;
  double span = 1.0;
  bool repeat = false;
};

std::optional<DensityModel> density_model(const MeasureSpec& spec);
std::optional<AtomicModel> atomic_model(const MeasureSpec& spec);

/// log of int_a^b exp(log_f(x)) dx, robust to huge or tiny integrands.
/// Uses adaptive Gauss-Kronrod, or tanh-sinh when log_f is singular at an endpoint.
double log_integral(const std::function<double(double)>& log_f, double a, double b, double rel_tol = 1e-10);

/// int_a^b f with adaptive Gauss-Kronrod (tanh-sinh if f is singular at an endpoint).
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-10);

/// log(x^p - y^p) for x > y >= 0, p > 0, without cancellation.
double log_pow_diff(double x, double y, double p);

}  // namespace convpow::detail

#endif
