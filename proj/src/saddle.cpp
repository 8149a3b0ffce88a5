#include "convpow/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "convpow/errors.hpp"

namespace convpow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlopeTol = 1e-12;

bool has_finite_mass(const MeasureSpec& spec) {
  if (const auto* l = spec.as<Lattice>()) return l->tail == Tail::None;
  if (const auto* t = spec.as<Tabulated>()) return t->tail == Tail::None;
  if (const auto* d = spec.as<Density>()) return std::isfinite(d->support_end);
  return false;
}

/// Root of the decreasing function f on (s0, inf) by bracketing in d = s - s0
/// and safeguarded Newton. `f_and_deriv` returns (f, f') with f' < 0.
template <class F>
double solve_decreasing(F&& f_and_deriv, double s0, bool s0_included, double tol, double floor_tol) {
  double s = std::max(s0 * (1 + 1e-6), 1.0);
  if (s <= s0) s = s0 + 1.0;
  auto [fs, dfs] = f_and_deriv(s);
  // lo has f > 0, hi has f < 0
  double lo = s0;
  double hi = kInf;
  double flo = kInf;
  double fhi = -kInf;
  if (fs == 0) return s;
  if (fs > 0) {
    lo = s;
    flo = fs;
    double d = s - s0;
    for (int i = 0; i < 2100 && hi == kInf; ++i) {
      d *= 2;
      const double x = s0 + d;
      if (!std::isfinite(x)) break;
      const double fx = f_and_deriv(x).first;
      if (fx > 0) {
        lo = x;
        flo = fx;
      } else {
        hi = x;
        fhi = fx;
      }
    }
    if (hi == kInf) throw SolverStall("saddle: could not bracket the root from above");
  } else {
    hi = s;
    fhi = fs;
    double d = s - s0;
    bool found = false;
    for (int i = 0; i < 2100; ++i) {
      d /= 2;
      const double x = s0 + d;
      if (!(x > s0)) break;
      const double fx = f_and_deriv(x).first;
      if (fx > 0) {
        lo = x;
        flo = fx;
        found = true;
        break;
      }
      hi = x;
      fhi = fx;
    }
    if (!found && s0_included) {
      const double fx = f_and_deriv(s0).first;
      if (fx >= 0) {
        if (fx == 0) return s0;
        lo = s0;
        flo = fx;
        found = true;
      }
    }
    if (!found) throw SolverStall("saddle: could not bracket the root near the domain boundary");
  }

  double best = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
  double fbest = std::min(std::fabs(flo), std::fabs(fhi));
  double x = best;
  auto [fx, dfx] = f_and_deriv(x);
  for (int it = 0; it < 300; ++it) {
    if (std::fabs(fx) <= tol) return x;
    double next = x - fx / dfx;
    if (!(next > lo && next < hi)) {
      // bisect, geometrically when the bracket spans decades away from s0
      const double dl = lo - s0;
      const double dh = hi - s0;
      next = (dl > 0 && dh / dl > 8) ? s0 + std::sqrt(dl * dh) : 0.5 * (lo + hi);
    }
    if (next == x || next <= lo || next >= hi) break;
    x = next;
    std::tie(fx, dfx) = f_and_deriv(x);
    if (fx > 0) lo = x;
    else hi = x;
    if (std::fabs(fx) < fbest) {
      fbest = std::fabs(fx);
      best = x;
    }
  }
  // floating-point floor of -lambda' reached: accept when the residual is still tiny
  if (fbest <= floor_tol) return best;
  throw SolverStall("saddle: Newton iteration did not converge");
}

double solve_slope(const MeasureSpec& spec, double r) {
  const auto rb = range_bounds(spec);
  if (!(r > rb.s_minus && r < rb.s_plus)) throw RatioOutOfRange(r, rb.s_minus, rb.s_plus);
  const Domain dom = domain_of(spec);
  auto fd = [&](double s) {
    const auto e = laplace_at(spec, s);
    return std::pair<double, double>{-e.lambda1 - r, -e.lambda2};
  };
  return solve_decreasing(fd, dom.s0, dom.boundary_included, kSlopeTol * r, 1e-8 * r);
}

}  // namespace

RangeBounds range_bounds(const MeasureSpec& spec) {
  const double s_minus = support_start(spec);
  if (const auto* m = spec.as<HeavyExpDensity>()) return {s_minus, 1.0 / m->alpha};
  const Domain dom = domain_of(spec);
  if (dom.boundary_included) return {s_minus, -laplace_at(spec, dom.s0).lambda1};
  // a finite measure with transform defined near 0: -lambda'(0+) is its mean
  if (dom.s0 == 0 && has_finite_mass(spec)) return {s_minus, -laplace_at(spec, 1e-300).lambda1};
  return {s_minus, kInf};
}

SaddleReport make_report(const MeasureSpec& spec, std::int64_t j, double t, double kappa) {
  SaddleReport r;
  r.j = j;
  r.t = t;
  r.kappa = kappa;
  r.eval = laplace_at(spec, kappa);
  const double l1 = std::fabs(r.eval.lambda1);
  r.a_j = std::sqrt(static_cast<double>(j) * r.eval.lambda2);
  r.T_j = l1 * l1 * l1 / r.eval.lambda2 + r.eval.third_moment_ratio / r.eval.lambda2;
  r.kappa_a = kappa * r.a_j;
  return r;
}

SaddleReport solve_kappa(const MeasureSpec& spec, std::int64_t j, double t) {
  if (j < 1) throw InvalidArgument("solve_kappa: j must be >= 1");
  if (!(t > 0) || !std::isfinite(t)) throw InvalidArgument("solve_kappa: t must be positive and finite");
  const double r = t / static_cast<double>(j);
  return make_report(spec, j, t, solve_slope(spec, r));
}

double solve_theta_for_slope(const MeasureSpec& spec, double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw InvalidArgument("solve_theta_for_slope: slope must be positive");
  return solve_slope(spec, alpha);
}

double solve_theta_star(const MeasureSpec& spec) {
  const Domain dom = domain_of(spec);
  const double scale = std::max(dom.s0, 1.0);
  auto g = [&](double th) {
    const auto e = laplace_at(spec, th);
    return std::pair<double, double>{e.lambda - th * e.lambda1, -th * e.lambda2};
  };
  // g' = -theta lambda'' < 0: scan upward for the first + to - change
  const int n = 240;
  double prev_th = 0;
  double prev_g = 0;
  bool have_prev = false;
  const double scan_lo = dom.boundary_included ? dom.s0 : dom.s0 + 1e-10 * scale;
  const double scan_hi = dom.s0 + 1e12 * scale;
  for (int i = 0; i <= n; ++i) {
    const double th = (i == 0) ? scan_lo : dom.s0 + scale * std::pow(10.0, -10.0 + 22.0 * i / n);
    double gv;
    try {
      gv = g(th).first;
    } catch (const Error&) {
      continue;
    }
    if (!std::isfinite(gv)) continue;
    if (have_prev && prev_g > 0 && gv <= 0) {
      if (gv == 0) return th;
      // Newton-bisection inside [prev_th, th]
      double lo = prev_th;
      double hi = th;
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 400; ++it) {
        auto [gx, dgx] = g(x);
        const double lam = laplace_at(spec, x).lambda;
        if (std::fabs(gx) <= 1e-12 * std::max(1.0, std::fabs(lam))) return x;
        if (gx > 0) lo = x;
        else hi = x;
        double next = x - gx / dgx;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) return x;
        x = next;
      }
      return x;
    }
    prev_th = th;
    prev_g = gv;
    have_prev = true;
  }
  throw NoRoot(scan_lo, scan_hi);
}

}  // namespace convpow
