#ifndef CONVPOW_LAPLACE_HPP
#define CONVPOW_LAPLACE_HPP

#include <complex>

#include "convpow/log_number.hpp"
#include "convpow/measure.hpp"

namespace convpow {

/// Abscissa of convergence of V-hat: D = (s0, inf) or [s0, inf).
struct Domain {
  double s0;
  bool boundary_included;

  bool contains(double s) const { return s > s0 || (boundary_included && s == s0); }
};

Domain domain_of(const MeasureSpec& spec);

/// V-hat(s) and lambda = log V-hat with its first three derivatives.
///
/// lambda' is minus the mean, lambda'' the variance and lambda''' minus the
/// third central moment of the tilted law e^{-sx} dV(x) / V-hat(s).
struct LaplaceEval {
  double s;
  LogNumber Vhat;
  double lambda;
  double lambda1;
  double lambda2;
  double lambda3;
  /// |V-hat'''(s)| / V-hat(s), taken from a closed form or a direct third-moment sum.
  double third_moment_ratio;

  /// Same ratio rebuilt from lambda', lambda'', lambda''' (raw third moment of the tilted law).
  double third_moment_ratio_from_cumulants() const;
};

/// V-hat at a complex argument, kept as log-modulus and phase.
struct ComplexLaplaceEval {
  std::complex<double> s;
  double log_abs;
  double phase;

  std::complex<double> value() const { return std::polar(std::exp(log_abs), phase); }
};

/// Throws OutOfDomain when s is not in D. At an included boundary, moments
/// that diverge come back as +inf.
LaplaceEval laplace_at(const MeasureSpec& spec, double s);

/// Requires Re s in D (OutOfDomain otherwise).
ComplexLaplaceEval laplace_complex(const MeasureSpec& spec, std::complex<double> s);

/// |V-hat(sigma + i u)| / V-hat(sigma).
double modulus_ratio(const MeasureSpec& spec, double sigma, double u);

}  // namespace convpow

#endif
