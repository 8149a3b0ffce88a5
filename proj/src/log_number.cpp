#include "convpow/log_number.hpp"

#include <cassert>
#include <ostream>
#include <stdexcept>

namespace convpow {

LogNumber LogNumber::from_log(double log_abs, int sign) {
  LogNumber r;
  if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
  if (std::isnan(log_abs)) throw std::domain_error("LogNumber: NaN magnitude");
  r.sign_ = sign > 0 ? 1 : -1;
  r.log_abs_ = log_abs;
  return r;
}

LogNumber LogNumber::from_double(double x) {
  if (std::isnan(x)) throw std::domain_error("LogNumber: NaN");
  if (x == 0.0) return {};
  return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

double LogNumber::to_double() const {
  if (sign_ == 0) return 0.0;
  return sign_ * std::exp(log_abs_);
}

LogNumber LogNumber::operator-() const {
  LogNumber r = *this;
  r.sign_ = -r.sign_;
  return r;
}

LogNumber LogNumber::operator*(const LogNumber& o) const {
  if (sign_ == 0 || o.sign_ == 0) return {};
  return from_log(log_abs_ + o.log_abs_, sign_ * o.sign_);
}

LogNumber LogNumber::operator/(const LogNumber& o) const {
  if (o.sign_ == 0) throw std::domain_error("LogNumber: division by zero");
  if (sign_ == 0) return {};
  return from_log(log_abs_ - o.log_abs_, sign_ * o.sign_);
}

LogNumber LogNumber::operator+(const LogNumber& o) const {
  if (sign_ == 0) return o;
  if (o.sign_ == 0) return *this;
  const bool this_larger = log_abs_ >= o.log_abs_;
  const LogNumber& hi = this_larger ? *this : o;
  const LogNumber& lo = this_larger ? o : *this;
  const double d = lo.log_abs_ - hi.log_abs_;
  if (hi.sign_ == lo.sign_) return from_log(hi.log_abs_ + std::log1p(std::exp(d)), hi.sign_);
  if (d == 0.0) return {};
  return from_log(hi.log_abs_ + std::log(-std::expm1(d)), hi.sign_);
}

LogNumber LogNumber::pow(double p) const {
  if (sign_ < 0) throw std::domain_error("LogNumber: pow of negative value");
  if (sign_ == 0) return p > 0 ? LogNumber{} : one();
  return from_log(log_abs_ * p);
}

LogNumber LogNumber::scaled_by_exp(double x) const {
  if (sign_ == 0) return {};
  return from_log(log_abs_ + x, sign_);
}

double log_add_exp(double a, double b) {
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  if (a == ninf) return b;
  if (b == ninf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

std::ostream& operator<<(std::ostream& os, const LogNumber& x) {
  if (x.is_zero()) return os << "0";
  return os << (x.sign() < 0 ? "-" : "") << "exp(" << x.log_abs() << ")";
}

}  // namespace convpow
