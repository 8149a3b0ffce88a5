#ifndef CONVPOW_ASYMPTOTICS_HPP
#define CONVPOW_ASYMPTOTICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "convpow/conditions.hpp"
#include "convpow/errors.hpp"
#include "convpow/measure.hpp"
#include "convpow/saddle.hpp"
#include "convpow/series.hpp"

namespace convpow {

enum class Formula { ThmA, ThmB, CorLinGrowth_small_y, CorLinGrowth_y_c_j23, CorCLT, LinearExpansion };

std::string to_string(Formula f);
/// Accepts the names printed by to_string, case-insensitive. Throws InvalidArgument.
Formula formula_from_string(const std::string& name);

struct AsymptoticEstimate {
  double log_value;
  Formula formula;
  std::optional<SaddleReport> report;  ///< absent for the moment-based linear expansion
  std::optional<ConditionReport> diagnostics;
  std::vector<std::string> warnings;
  double y = 0.0;  ///< deviation t - alpha j for the linear-growth branches
  double c = 0.0;  ///< constant of the c j^{2/3} branch
};

/// log[ V-hat(kappa)^j e^{t kappa} / (kappa a(j) sqrt(2 pi)) ].
AsymptoticEstimate thm_a(const MeasureSpec& spec, std::int64_t j, double t);

/// log[ V-hat(kappa)^j e^{t kappa} / (kappa sqrt(2 pi sigma^2 j)) ] with sigma^2 = lambda''(kappa).
AsymptoticEstimate thm_b(const MeasureSpec& spec, std::int64_t j, double t);

struct LinGrowthBranch {
  enum Kind { small_y, c_j23 } kind = small_y;
  double c = 0.0;
};

/// t = alpha j + y(j), theta solves -lambda'(theta) = alpha. The c_j23 branch adds
/// -c^3 lambda'''(theta) / (6 sigma^6).
AsymptoticEstimate cor_lin_growth(const MeasureSpec& spec, double alpha,
                                  const std::function<double(std::int64_t)>& y_of_j, std::int64_t j,
                                  LinGrowthBranch branch = {});

struct CltResult {
  double t;
  double limit;
  AsymptoticEstimate estimate;
};

/// t from -lambda'(theta* - (log j - y)/(2 j theta* sigma^2)) = t/j; estimate is thm_b at that t.
CltResult cor_clt(const MeasureSpec& spec, double y, std::int64_t j);

template <class T>
struct BasicExpansionCoefficients {
  int p;
  std::vector<T> beta;   ///< beta_0 .. beta_{p-1}
  std::vector<T> delta;  ///< delta_1 .. delta_p
  std::vector<T> iota;   ///< iota_1 .. iota_p
};

using ExpansionCoefficients = BasicExpansionCoefficients<double>;

/// delta_k: coefficients of log(1 + u), u = sum_m beta_{m-1} (-1)^{m-1} s^m / (a (m-1)!).
/// iota_k: ell(s) = s (1 + w(s)) with -lambda'(ell(s)) = 1/s, w = sum iota_k s^k.
/// Exact when T is a rational type.
template <class T>
BasicExpansionCoefficients<T> expansion_series(const T& a, const std::vector<T>& beta, int p) {
  if (p < 1) throw InvalidArgument("expansion_coeffs: p must be >= 1");
  if (p > 5) throw UnsupportedOrder("expansion_coeffs: orders above 5 are not supported");
  if (static_cast<int>(beta.size()) < p) throw InvalidArgument("expansion_coeffs: need p beta values");
  const std::size_t n = static_cast<std::size_t>(p) + 1;

  std::vector<T> u(n, T(0));
  T fact(1);
  for (int m = 1; m <= p; ++m) {
    if (m > 1) fact *= T(m - 1);
    const T sign = (m % 2 == 1) ? T(1) : T(-1);
    u[m] = sign * beta[m - 1] / (a * fact);
  }
  const std::vector<T> delta_series = series::log1p(u);

  // 1/(1+w) = 1 + R(w),  R = sum_k k delta_k s^k (1+w)^{k-1}
  std::vector<T> w(n, T(0));
  for (int iter = 0; iter <= p; ++iter) {
    std::vector<T> one_w = w;
    one_w[0] += T(1);
    std::vector<T> r(n, T(0));
    for (int k = 1; k <= p; ++k) {
      std::vector<T> term = series::pow(one_w, k - 1);
      const T coef = T(k) * delta_series[k];
      // shift by s^k
      for (std::size_t i = n; i-- > static_cast<std::size_t>(k);) r[i] += coef * term[i - k];
    }
    r[0] += T(1);
    w = series::inv(r);
    w[0] -= T(1);
  }

  BasicExpansionCoefficients<T> out;
  out.p = p;
  out.beta.assign(beta.begin(), beta.begin() + p);
  out.delta.assign(delta_series.begin() + 1, delta_series.end());
  out.iota.assign(w.begin() + 1, w.end());
  return out;
}

ExpansionCoefficients expansion_coeffs(double a, const std::vector<double>& beta, int p);

/// j log t + j log a - log j! - sum_k (iota_k/k) j^{k+1}/t^k, with a warning when j^{p+2}/t^{p+1} > 0.1.
AsymptoticEstimate linear_expansion_estimate(double a, const ExpansionCoefficients& coeffs, std::int64_t j, double t);

/// Heuristic: ThmB when every t/j of the sweep lies within 10% of their geometric mean, else ThmA.
Formula auto_formula(std::span<const std::pair<std::int64_t, double>> schedule);

/// Re-evaluates the formula from the stored report on the linear LogNumber path.
/// Returns nullopt for estimates that carry no saddle report.
std::optional<double> recompute_log_value(const AsymptoticEstimate& e);

}  // namespace convpow

#endif
