#ifndef CONVPOW_ERRORS_HPP
#define CONVPOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace convpow {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent measure description.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Bad argument to an operation (precondition violated).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Laplace transform evaluated outside its domain of convergence.
class OutOfDomain : public Error {
 public:
  OutOfDomain(double s, double boundary);
  double s;
  double boundary;
};

/// t/j (or a prescribed slope) lies outside (s_minus, s_plus).
class RatioOutOfRange : public Error {
 public:
  RatioOutOfRange(double ratio, double s_minus, double s_plus);
  double ratio;
  double s_minus;
  double s_plus;
};

class SolverStall : public Error {
 public:
  using Error::Error;
};

/// lambda(theta) = theta lambda'(theta) has no sign change on the scanned range.
class NoRoot : public Error {
 public:
  NoRoot(double scan_lo, double scan_hi);
  double scan_lo;
  double scan_hi;
};

class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// A convolution table was queried beyond the grid horizon it was built on.
class HorizonTooSmall : public Error {
 public:
  using Error::Error;
};

class MissingMoment : public Error {
 public:
  using Error::Error;
};

class InadmissibleMoments : public Error {
 public:
  using Error::Error;
};

class NotProbability : public Error {
 public:
  using Error::Error;
};

/// A frequency scan could not establish its supremum (modulus still rising at the end).
class ScanInconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace convpow

#endif
