#include "convpow/errors.hpp"

#include <sstream>

namespace convpow {

namespace {
std::string fmt(const char* head, std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  os.precision(17);
  os << head;
  const char* sep = ": ";
  for (const auto& [k, v] : kv) {
    os << sep << k << "=" << v;
    sep = ", ";
  }
  return os.str();
}
}  // namespace

OutOfDomain::OutOfDomain(double s_, double boundary_)
    : Error(fmt("OutOfDomain", {{"s", s_}, {"boundary", boundary_}})), s(s_), boundary(boundary_) {}

RatioOutOfRange::RatioOutOfRange(double ratio_, double s_minus_, double s_plus_)
    : Error(fmt("RatioOutOfRange", {{"ratio", ratio_}, {"s_minus", s_minus_}, {"s_plus", s_plus_}})),
      ratio(ratio_),
      s_minus(s_minus_),
      s_plus(s_plus_) {}

NoRoot::NoRoot(double lo, double hi)
    : Error(fmt("NoRoot: lambda(theta) - theta*lambda'(theta) has no sign change",
                {{"scan_lo", lo}, {"scan_hi", hi}})),
      scan_lo(lo),
      scan_hi(hi) {}

}  // namespace convpow
