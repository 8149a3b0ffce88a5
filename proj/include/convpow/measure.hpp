#ifndef CONVPOW_MEASURE_HPP
#define CONVPOW_MEASURE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "convpow/log_number.hpp"

namespace convpow {

/// V(x) = b x^alpha.
struct PowerLaw {
  double b;
  double alpha;
};

/// V(x) = a x + b (atom of mass b at the origin).
struct Affine {
  double a;
  double b;
};

/// V(x) = (log(x+1))^alpha.
struct LogPower {
  double alpha;
};

/// dV = x^{-1/2} e^{sqrt x} dx / 2, i.e. V(x) = e^{sqrt x} - 1.
struct SqrtExpDensity {};

/// V(x) = e^{a x} - 1.
struct ShiftedExp {
  double a;
};

/// V(x) = e^{a x} (unit atom at the origin).
struct Exp {
  double a;
};

/// dV = (x+1)^{-2-alpha} e^x dx. Transform domain is [1, inf) with the boundary included.
struct HeavyExpDensity {
  double alpha;
};

/// How an atomic measure continues past its last listed point.
enum class Tail {
  None,    ///< measure is exactly the listed atoms
  Repeat,  ///< last listed mass repeats on every later lattice point (V unbounded)
};

/// Atoms at offset + k*span with the listed masses.
struct Lattice {
  double span;
  double offset;
  std::vector<double> masses;
  Tail tail = Tail::None;
};

/// Absolutely continuous part with density f plus an optional atom at 0.
///
/// The abscissa of convergence of the transform cannot be inferred from a
/// callable, so it is declared here together with the support start.
struct Density {
  std::function<double(double)> f;
  double atom_at_zero = 0.0;
  double abscissa = 0.0;
  bool abscissa_included = false;
  double support_start = 0.0;
  double support_end = std::numeric_limits<double>::infinity();
};

/// Values of V at k*h (nondecreasing); V is the right-continuous step function through them.
struct Tabulated {
  double h;
  std::vector<double> values;
  Tail tail = Tail::None;
};

using MeasureVariant = std::variant<PowerLaw, Affine, LogPower, SqrtExpDensity, ShiftedExp, Exp,
                                    HeavyExpDensity, Lattice, Density, Tabulated>;

/// Immutable, validated description of a nondecreasing right-continuous V on [0, inf).
class MeasureSpec {
 public:
  /// Throws InvalidSpec when parameters are out of range.
  MeasureSpec(MeasureVariant v);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, MeasureVariant> &&
             std::is_constructible_v<MeasureVariant, T &&>)
  MeasureSpec(T&& v)  // NOLINT(google-explicit-constructor)
      : MeasureSpec(MeasureVariant(std::forward<T>(v))) {}

  const MeasureVariant& variant() const { return v_; }
  std::string family() const;
  /// Atomic on a lattice (Lattice and Tabulated); excluded from the nonarithmetic results.
  bool is_arithmetic() const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&v_);
  }

 private:
  MeasureVariant v_;
};

/// V(x); 0 for x < 0.
double eval_V(const MeasureSpec& spec, double x);

struct GridAtom {
  std::int64_t index;
  LogNumber mass;
};

/// Finite atomic measure on the grid {k h}, optionally exponentially tilted.
///
/// With tilt kappa the stored mass at k is e^{-kappa k h} times the untilted mass.
class GridMeasure {
 public:
  GridMeasure(double h, std::vector<GridAtom> atoms, double tilt = 0.0);

  double step() const { return h_; }
  double tilt() const { return tilt_; }
  std::span<const GridAtom> atoms() const { return atoms_; }
  std::int64_t max_index() const { return atoms_.empty() ? 0 : atoms_.back().index; }
  /// Mass at index k (zero when absent).
  LogNumber mass_at(std::int64_t k) const;
  LogNumber total_mass() const;

  /// Same measure re-expressed with absolute tilt kappa.
  GridMeasure tilted(double kappa) const;
  GridMeasure untilted() const { return tilted(0.0); }

 private:
  double h_;
  std::vector<GridAtom> atoms_;
  double tilt_;
};

/// Atom at k carries the mass of ((k-1)h, kh]; atom at 0 carries V(0).
///
/// Cells run up to floor(x_max/h). Throws InvalidArgument for h <= 0 or
/// x_max < h and InvalidSpec when a cell mass is not finite.
GridMeasure discretize(const MeasureSpec& spec, double h, double x_max);

/// Position of the smallest point of the support, inf{x > 0 : V(x) > 0}.
double support_start(const MeasureSpec& spec);

}  // namespace convpow

#endif
