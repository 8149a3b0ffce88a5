#ifndef CONVPOW_ORACLE_HPP
#define CONVPOW_ORACLE_HPP

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "convpow/log_number.hpp"
#include "convpow/measure.hpp"

namespace convpow {

/// Number of worker threads: CONVPOW_THREADS if set (>= 1), else hardware concurrency.
int thread_count();

/// Masses of the j-fold convolution of a grid measure, kept under an exponential tilt.
///
/// With tilt kappa the base atom at k carries e^{-kappa k h} m_k; since the tilt
/// is multiplicative, the j-fold product of tilted atoms is the tilted j-fold
/// measure, and
///
///   V^{*j}(kh) = sum_{i <= k} e^{+kappa i h} * tilted_mass[i].
///
/// Arrays stop at the base horizon K = base.max_index(); contributions to
/// index k only come from indices <= k, so every stored value is exact for
/// the discretized measure.
class ConvolutionTable {
 public:
  ConvolutionTable(GridMeasure base, std::int64_t power, double tilt, std::vector<LogNumber> tilted_mass);

  const GridMeasure& base() const { return base_; }
  std::int64_t power() const { return power_; }
  double tilt() const { return tilt_; }
  double step() const { return base_.step(); }
  std::int64_t horizon() const { return static_cast<std::int64_t>(tilted_.size()) - 1; }

  std::span<const LogNumber> tilted_mass() const { return tilted_; }
  /// Untilted V^{*j}(kh) for k = 0..horizon(), rebuilt from the tilted masses.
  std::span<const LogNumber> cumulative() const { return cumulative_; }

  /// Grid value V_h^{*j}(t) at k = floor(t/h). Throws HorizonTooSmall beyond the horizon.
  LogNumber value_at(double t) const;

  /// For a base produced by discretize(): V_h^{*j}(t) <= V^{*j}(t) <= V_h^{*j}(t + j h).
  std::pair<LogNumber, LogNumber> bracket(double t) const;

  /// Geometric mean of V_h^{*j}(t) and V_h^{*j}(t + (j-1) h). Each summand moves
  /// right by h/2 on average while the grid CDF at kh already holds the whole
  /// atom at kh (another h/2), so the net shift is (j-1) h/2; the midpoint
  /// removes it to first order. Exact for j = 1.
  LogNumber continuum_estimate(double t) const;

 private:
  GridMeasure base_;
  std::int64_t power_;
  double tilt_;
  std::vector<LogNumber> tilted_;
  std::vector<LogNumber> cumulative_;
};

/// j-fold convolution of gm under tilt kappa, by binary powering.
ConvolutionTable convolve_power(const GridMeasure& gm, std::int64_t j, double kappa);

/// Dense convolution of two mass arrays, truncated to indices <= horizon.
std::vector<LogNumber> convolve_masses(std::span<const LogNumber> a, std::span<const LogNumber> b,
                                       std::int64_t horizon);

/// Dense mass array (index 0..max_index) of a grid measure.
std::vector<LogNumber> dense_masses(const GridMeasure& gm);

/// (b Gamma(alpha+1))^j t^{j alpha} / Gamma(j alpha + 1).
LogNumber exact_power_law(double b, double alpha, std::int64_t j, double t);

/// (1/(j-1)!) int_0^{a t} y^{j-1} e^y dy.
LogNumber exact_shifted_exp(double a, std::int64_t j, double t);

/// L_j(-t) for t >= 0 by the three-term recurrence carried as ratios.
LogNumber laguerre_eval(std::int64_t j, double t);

/// Affine(a, b): V^{*j}(t) = b^j L_j(-a t / b).
LogNumber exact_affine(double a, double b, std::int64_t j, double t);

struct TiltMoments {
  double mean;
  double variance;
  double kappa;
  double expected_variance;  ///< j lambda''(kappa) when computed from a spec, else NaN
};

/// Mean and variance of the normalised j-fold convolution of gm tilted at kappa.
TiltMoments tilt_moments(const GridMeasure& gm, std::int64_t j, double kappa);

/// Discretizes spec on [0, 4t + 10 a(j)] with step h and tilts at kappa(j, t).
TiltMoments tilt_moments(const MeasureSpec& spec, std::int64_t j, double t, double h);

struct OracleValue {
  LogNumber estimate;
  LogNumber lower;
  LogNumber upper;
  bool exact_on_grid;  ///< atomic spec whose atoms sit on the grid: lower == upper == estimate
  double kappa;
};

/// Grid oracle at step h, tilted at kappa(j, t) when t/j is in range. Horizon defaults to t + (j+10) h.
OracleValue grid_oracle(const MeasureSpec& spec, std::int64_t j, double t, double h, double x_max = 0.0);

/// CSV with header "grid_x,log_V_star_j"; rows for grid points with positive value.
void write_csv(const ConvolutionTable& table, std::ostream& out);

}  // namespace convpow

#endif
