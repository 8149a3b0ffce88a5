#ifndef CONVPOW_RENEWAL_HPP
#define CONVPOW_RENEWAL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "convpow/asymptotics.hpp"
#include "convpow/measure.hpp"

namespace convpow {

/// Inter-arrival law xi given by raw moments E[xi], E[xi^2], ... and optionally by its distribution.
struct RenewalInput {
  std::vector<double> moments;
  std::optional<MeasureSpec> dist;
};

/// {"moments": [m1, m2, m3, m4], "dist": optional spec}. Throws InvalidSpec.
RenewalInput renewal_input_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RenewalInput& in);

/// Rejects moment vectors no positive law can have: m1 > 0 and the Hankel
/// determinants det[m_{i+k}] and det[m_{i+k+1}] up to order 2 nonnegative
/// (with m0 = 1). Throws InadmissibleMoments.
void check_admissible(const RenewalInput& in);

/// beta_0 .. beta_{p-1} for p <= 3; needs E[xi^{p+1}].
std::vector<double> renewal_betas(const RenewalInput& in, int p);

/// b1 = m2/(2m), b2 = -m3/(6m), b3 = (m4/m + 2 m2 m3/m^2 - m2^3/m^3)/24.
std::array<double, 3> renewal_b_coeffs(const RenewalInput& in);

/// log[ t^j/(m^j j!) exp(b1 j^2/t + b2 j^3/t^2 + b3 j^4/t^3) ], warning when j^5/t^4 > 0.1.
AsymptoticEstimate renewal_asymptotic(const RenewalInput& in, std::int64_t j, double t);

/// dU of the renewal function U = sum_{n>=0} P(xi_1 + ... + xi_n <= t) on the grid,
/// from u = delta_0 + f * u. Throws NotProbability when the grid mass of dist is off by > 1e-6.
GridMeasure build_renewal_grid(const MeasureSpec& dist, double h, double x_max);

/// max_k |u_k - delta_{k0} - sum_i f_i u_{k-i}| for a renewal grid and the discretized law.
double renewal_residual(const GridMeasure& dist_grid, const GridMeasure& renewal_grid);

/// Raw moments E[xi^k], k = 1..n, of the discretized law on [0, x_max].
std::vector<double> grid_moments(const MeasureSpec& dist, double h, double x_max, int n);

/// Throws InadmissibleMoments when a declared moment differs from the grid moment by more than 1%.
void check_dist_moments(const RenewalInput& in, double h, double x_max);

}  // namespace convpow

#endif
