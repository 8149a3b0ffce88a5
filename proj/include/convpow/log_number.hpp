#ifndef CONVPOW_LOG_NUMBER_HPP
#define CONVPOW_LOG_NUMBER_HPP

#include <cmath>
#include <iosfwd>
#include <limits>

namespace convpow {

/// Signed real stored as sign and natural log of the magnitude.
///
/// Convolution powers overflow double precision long before the asymptotic
/// regimes of interest, so every mass and every value of V^{*(j)} lives here.
class LogNumber {
 public:
  constexpr LogNumber() = default;

  static LogNumber zero() { return {}; }
  static LogNumber one() { return from_log(0.0); }
  static LogNumber from_log(double log_abs, int sign = 1);
  static LogNumber from_double(double x);

  int sign() const { return sign_; }
  double log_abs() const {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_abs_;
  }
  bool is_zero() const { return sign_ == 0; }
  double to_double() const;

  LogNumber operator-() const;
  LogNumber operator*(const LogNumber& o) const;
  LogNumber operator/(const LogNumber& o) const;
  LogNumber operator+(const LogNumber& o) const;
  LogNumber operator-(const LogNumber& o) const { return *this + (-o); }
  LogNumber& operator+=(const LogNumber& o) { return *this = *this + o; }
  LogNumber& operator*=(const LogNumber& o) { return *this = *this * o; }

  /// Magnitude raised to a real power; sign must be nonnegative.
  LogNumber pow(double p) const;
  /// Multiplies by e^{x}.
  LogNumber scaled_by_exp(double x) const;

  friend bool operator==(const LogNumber& a, const LogNumber& b) {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_abs_ == b.log_abs_);
  }

 private:
  int sign_ = 0;
  double log_abs_ = 0.0;
};

/// log(exp(a) + exp(b)) without overflow; either argument may be -inf.
double log_add_exp(double a, double b);

std::ostream& operator<<(std::ostream& os, const LogNumber& x);

}  // namespace convpow

#endif
