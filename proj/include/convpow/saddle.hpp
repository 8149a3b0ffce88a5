#ifndef CONVPOW_SADDLE_HPP
#define CONVPOW_SADDLE_HPP

#include <cstdint>

#include "convpow/laplace.hpp"
#include "convpow/measure.hpp"

namespace convpow {

/// Admissible range (s_minus, s_plus) of t/j, i.e. the range of -lambda' over the domain.
struct RangeBounds {
  double s_minus;
  double s_plus;  ///< may be +inf
};

/// s_minus is the left end of the support; s_plus is the limit of -lambda' at
/// the lower end of the domain.
RangeBounds range_bounds(const MeasureSpec& spec);

struct SaddleReport {
  std::int64_t j;
  double t;
  double kappa;
  LaplaceEval eval;
  double a_j;      ///< sqrt(j lambda''(kappa))
  double T_j;      ///< |lambda'|^3/lambda'' + |V-hat'''|/(lambda'' V-hat)
  double kappa_a;  ///< kappa * a_j
};

/// Fills the report for a given kappa (no solving).
SaddleReport make_report(const MeasureSpec& spec, std::int64_t j, double t, double kappa);

/// Solves -lambda'(kappa) = t/j to 1e-12 relative in the slope.
/// Throws RatioOutOfRange unless s_minus < t/j < s_plus, SolverStall if no bracket is found.
SaddleReport solve_kappa(const MeasureSpec& spec, std::int64_t j, double t);

/// Solves -lambda'(theta) = alpha; same arithmetic as solve_kappa with t/j = alpha.
double solve_theta_for_slope(const MeasureSpec& spec, double alpha);

/// Root of lambda(theta) = theta lambda'(theta). Throws NoRoot when the scan sees no sign change.
double solve_theta_star(const MeasureSpec& spec);

}  // namespace convpow

#endif
