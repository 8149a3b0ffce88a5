#include "convpow/laplace.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "convpow/errors.hpp"
#include "detail.hpp"

namespace convpow {

using detail::kInf;

namespace {

constexpr double kQuadTol = 1e-13;

/// Mean, central moments and raw third moment of the tilted law, plus log of the normaliser.
struct TiltedMoments {
  double log_mass;
  double mean;
  double var;
  double c3;
  double raw3;
};

LaplaceEval from_moments(double s, const TiltedMoments& m) {
  LaplaceEval e;
  e.s = s;
  e.Vhat = LogNumber::from_log(m.log_mass);
  e.lambda = m.log_mass;
  e.lambda1 = -m.mean;
  e.lambda2 = m.var;
  e.lambda3 = -m.c3;
  e.third_moment_ratio = m.raw3;
  return e;
}

// ---------------------------------------------------------------- densities

double integrate_half_line(const std::function<double(double)>& f, double a) {
  static thread_local boost::math::quadrature::exp_sinh<double> es(12);
  return es.integrate(f, a, kInf, kQuadTol);
}

double integrate_segment(const std::function<double(double)>& f, double a, double b) {
  if (!(b > a)) return 0.0;
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
  return ts.integrate(f, a, b, kQuadTol);
}

/// Location and value of the maximum of g over [lo, hi], ignoring non-finite samples.
std::pair<double, double> locate_peak(const std::function<double(double)>& g, double lo, double hi) {
  const double span_hi = std::isfinite(hi) ? hi : lo + 1e14;
  double best_x = lo;
  double best_g = -kInf;
  std::vector<double> xs;
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    // log-spaced offsets from lo, plus the right end
    const double off = (span_hi - lo) * std::pow(10.0, -16.0 + 16.0 * i / n);
    xs.push_back(lo + off);
  }
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double v = g(xs[i]);
    if (std::isfinite(v) && v > best_g) {
      best_g = v;
      best_x = xs[i];
      best_i = i;
    }
  }
  if (best_g == -kInf) return {lo, -kInf};
  // golden-section refinement between neighbours
  double a = best_i > 0 ? xs[best_i - 1] : lo;
  double b = best_i + 1 < xs.size() ? xs[best_i + 1] : best_x;
  const double r = (std::sqrt(5.0) - 1) / 2;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::fabs(b)); ++it) {
    if (gc > gd || !std::isfinite(gd)) {
      b = d;
      d = c;
      gd = gc;
      c = b - r * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + r * (b - a);
      gd = g(d);
    }
  }
  const double xm = (a + b) / 2;
  const double gm = g(xm);
  if (std::isfinite(gm) && gm > best_g) return {xm, gm};
  return {best_x, best_g};
}

TiltedMoments density_moments(const detail::DensityModel& d, double s) {
  const double lo = d.support_start;
  const double hi = d.support_end;
  auto g = [&](double x) { return d.log_density(x) - s * x; };
  auto [x_peak, g_peak] = locate_peak(g, lo, hi);
  if (g_peak == -kInf) g_peak = 0.0;
  // Integrate weight(x) * exp(g(x) - g_peak) over the support, split at the peak.
  auto integral = [&](auto&& weight) {
    std::function<double(double)> f = [&](double x) {
      const double e = std::exp(g(x) - g_peak);
      // Non-finite values only arise where a user density overflows double far in the tail.
      if (!(e > 0) || !std::isfinite(e)) return 0.0;
      return weight(x) * e;
    };
    double total = 0.0;
    if (x_peak > lo) total += integrate_segment(f, lo, x_peak);
    if (std::isfinite(hi)) total += integrate_segment(f, x_peak, hi);
    else total += integrate_half_line(f, x_peak);
    return total;
  };
  const double atom = d.atom_at_zero > 0 ? d.atom_at_zero * std::exp(-g_peak) : 0.0;
  const double m0 = atom + integral([](double) { return 1.0; });
  if (!(m0 > 0) || !std::isfinite(m0)) throw Error("laplace: transform integral did not converge");
  const double mean = integral([](double x) { return x; }) / m0;
  const double var = (atom * mean * mean + integral([&](double x) { return (x - mean) * (x - mean); })) / m0;
  const double c3 =
      (-atom * mean * mean * mean + integral([&](double x) { return (x - mean) * (x - mean) * (x - mean); })) / m0;
  const double raw3 = integral([](double x) { return x * x * x; }) / m0;
  return {g_peak + std::log(m0), mean, var, c3, raw3};
}

/// int_0^inf x^k (1+x)^{-2-alpha} dx = B(k+1, 1+alpha-k), infinite when k >= 1+alpha.
double heavy_boundary_moment(double alpha, int k) {
  if (k >= 1 + alpha) return kInf;
  return boost::math::beta(k + 1.0, 1.0 + alpha - k);
}

TiltedMoments heavy_boundary_moments(double alpha) {
  const double m0 = heavy_boundary_moment(alpha, 0);
  const double mean = heavy_boundary_moment(alpha, 1) / m0;
  const double r2 = heavy_boundary_moment(alpha, 2) / m0;
  const double r3 = heavy_boundary_moment(alpha, 3) / m0;
  const double var = std::isfinite(r2) ? r2 - mean * mean : kInf;
  const double c3 = std::isfinite(r3) ? r3 - 3 * mean * r2 + 2 * mean * mean * mean : kInf;
  return {std::log(m0), mean, var, c3, r3};
}

// ------------------------------------------------------------------ lattices

/// sum_{i>=1} i^r q^i for r = 0..3; `omq` is 1 - q supplied without cancellation.
double poly_geom(int r, double q, double omq) {
  switch (r) {
    case 0: return q / omq;
    case 1: return q / (omq * omq);
    case 2: return q * (1 + q) / (omq * omq * omq);
    default: return q * (1 + 4 * q + q * q) / (omq * omq * omq * omq);
  }
}

TiltedMoments atomic_moments(const detail::AtomicModel& a, double s) {
  std::size_t first = 0;
  while (a.masses[first] <= 0) ++first;
  const double x_ref = a.positions[first];
  std::vector<double> w(a.positions.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = a.masses[k] * std::exp(-s * (a.positions[k] - x_ref));

  const double c = a.positions.back();
  const double tail_weight = a.repeat ? a.masses.back() * std::exp(-s * (c - x_ref)) : 0.0;
  const double q = std::exp(-s * a.span);
  const double omq = -std::expm1(-s * a.span);

  // sum over the repeated tail of (x - center)^p, x = c + i*span, i >= 1
  auto tail_poly = [&](int p, double center) {
    if (!a.repeat) return 0.0;
    const double cp = c - center;
    double sum = 0.0;
    double binom = 1.0;
    for (int r = 0; r <= p; ++r) {
      sum += binom * std::pow(cp, p - r) * std::pow(a.span, r) * poly_geom(r, q, omq);
      binom = binom * (p - r) / (r + 1);
    }
    return tail_weight * sum;
  };
  auto finite_poly = [&](int p, double center) {
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) sum += w[k] * std::pow(a.positions[k] - center, p);
    return sum;
  };

  const double s0 = finite_poly(0, 0) + tail_poly(0, 0);
  const double mean = (finite_poly(1, 0) + tail_poly(1, 0)) / s0;
  const double var = (finite_poly(2, mean) + tail_poly(2, mean)) / s0;
  const double c3 = (finite_poly(3, mean) + tail_poly(3, mean)) / s0;
  const double raw3 = (finite_poly(3, 0) + tail_poly(3, 0)) / s0;
  return {std::log(s0) - s * x_ref, mean, var, c3, raw3};
}

std::complex<double> atomic_complex(const detail::AtomicModel& a, std::complex<double> s, double& log_scale) {
  std::size_t first = 0;
  while (a.masses[first] <= 0) ++first;
  const double x_ref = a.positions[first];
  log_scale = -s.real() * x_ref;
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < a.positions.size(); ++k)
    sum += a.masses[k] * std::exp(-s * (a.positions[k] - x_ref));
  if (a.repeat) {
    const double c = a.positions.back();
    const std::complex<double> q = std::exp(-s * a.span);
    sum += a.masses.back() * std::exp(-s * (c - x_ref)) * q / (1.0 - q);
  }
  return sum;
}

// -------------------------------------------------------- complex densities

std::complex<double> density_complex(const detail::DensityModel& d, double sigma, double u, double& log_scale) {
  const double lo = d.support_start;
  const double hi = d.support_end;
  auto g = [&](double x) { return d.log_density(x) - sigma * x; };
  auto [x_peak, g_peak] = locate_peak(g, lo, hi);
  if (g_peak == -kInf) g_peak = 0.0;
  log_scale = g_peak;
  auto f = [&](double y) {
    const double e = std::exp(g(lo + y) - g_peak);
    return e > 0 && std::isfinite(e) ? e : 0.0;
  };
  std::complex<double> integral;
  if (u == 0.0) {
    double total = 0.0;
    if (x_peak > lo) total += integrate_segment(f, 0.0, x_peak - lo);
    total += std::isfinite(hi) ? integrate_segment(f, x_peak - lo, hi - lo) : integrate_half_line(f, x_peak - lo);
    integral = total;
  } else if (std::isfinite(hi)) {
    // bounded support: composite Gauss-Kronrod, panels no longer than half a period
    const double len = hi - lo;
    const auto panels = static_cast<long>(std::min(2e5, std::max(16.0, std::ceil(len * std::fabs(u) / M_PI))));
    double re = 0.0;
    double im = 0.0;
    for (long p = 0; p < panels; ++p) {
      const double a = len * p / panels;
      const double b = len * (p + 1) / panels;
      re += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
          [&](double y) { return f(y) * std::cos(u * y); }, a, b, 8, 1e-12);
      im += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
          [&](double y) { return -f(y) * std::sin(u * y); }, a, b, 8, 1e-12);
    }
    integral = {re, im};
  } else {
    static thread_local boost::math::quadrature::ooura_fourier_cos<double> oc(1e-12);
    static thread_local boost::math::quadrature::ooura_fourier_sin<double> os(1e-12);
    const double w = std::fabs(u);
    const double re = oc.integrate(f, w).first;
    const double im = -os.integrate(f, w).first * (u < 0 ? -1.0 : 1.0);
    integral = {re, im};
  }
  // shift back: e^{-i u lo}
  integral *= std::exp(std::complex<double>(0.0, -u * lo));
  if (d.atom_at_zero > 0) integral += d.atom_at_zero * std::exp(-g_peak);
  return integral;
}

}  // namespace

double LaplaceEval::third_moment_ratio_from_cumulants() const {
  const double mean = -lambda1;
  return -lambda3 + 3 * mean * lambda2 + mean * mean * mean;
}

Domain domain_of(const MeasureSpec& spec) {
  if (const auto* m = spec.as<ShiftedExp>()) return {m->a, false};
  if (const auto* m = spec.as<Exp>()) return {m->a, false};
  if (spec.as<HeavyExpDensity>()) return {1.0, true};
  if (const auto* m = spec.as<Density>()) return {m->abscissa, m->abscissa_included};
  return {0.0, false};
}

LaplaceEval laplace_at(const MeasureSpec& spec, double s) {
  const Domain dom = domain_of(spec);
  if (!std::isfinite(s) || !dom.contains(s)) throw OutOfDomain(s, dom.s0);

  if (const auto* m = spec.as<PowerLaw>()) {
    const double a = m->alpha;
    const double lambda = std::log(m->b) + std::lgamma(a + 1) - a * std::log(s);
    return {s, LogNumber::from_log(lambda), lambda, -a / s, a / (s * s), -2 * a / (s * s * s),
            a * (a + 1) * (a + 2) / (s * s * s)};
  }
  if (const auto* m = spec.as<Affine>()) {
    const double a = m->a;
    const double b = m->b;
    const double u = b * s + a;
    const double lambda = std::log(u) - std::log(s);
    const double vhat = b + a / s;
    return {s,
            LogNumber::from_log(lambda),
            lambda,
            b / u - 1 / s,
            1 / (s * s) - b * b / (u * u),
            2 * b * b * b / (u * u * u) - 2 / (s * s * s),
            6 * a / (s * s * s * s) / vhat};
  }
  if (const auto* m = spec.as<ShiftedExp>()) {
    const double d = s - m->a;
    const double lambda = std::log(m->a) - std::log(d);
    return {s, LogNumber::from_log(lambda), lambda, -1 / d, 1 / (d * d), -2 / (d * d * d), 6 / (d * d * d)};
  }
  if (const auto* m = spec.as<Exp>()) {
    const double d = s - m->a;
    const double lambda = std::log(s) - std::log(d);
    // V-hat''' = -6a/d^4, V-hat = s/d
    return {s,
            LogNumber::from_log(lambda),
            lambda,
            1 / s - 1 / d,
            1 / (d * d) - 1 / (s * s),
            2 / (s * s * s) - 2 / (d * d * d),
            6 * m->a / (d * d * d * s)};
  }
  if (const auto* m = spec.as<HeavyExpDensity>(); m && s == 1.0) return from_moments(s, heavy_boundary_moments(m->alpha));
  if (auto a = detail::atomic_model(spec)) return from_moments(s, atomic_moments(*a, s));
  return from_moments(s, density_moments(*detail::density_model(spec), s));
}

ComplexLaplaceEval laplace_complex(const MeasureSpec& spec, std::complex<double> s) {
  const Domain dom = domain_of(spec);
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) || !dom.contains(s.real()))
    throw OutOfDomain(s.real(), dom.s0);

  auto from_log = [&](std::complex<double> lv) { return ComplexLaplaceEval{s, lv.real(), std::arg(std::exp(std::complex<double>(0, lv.imag())))}; };
  auto from_value = [&](std::complex<double> v, double log_scale) {
    return ComplexLaplaceEval{s, log_scale + std::log(std::abs(v)), std::arg(v)};
  };

  if (const auto* m = spec.as<PowerLaw>())
    return from_log(std::log(m->b) + std::lgamma(m->alpha + 1) - m->alpha * std::log(s));
  if (const auto* m = spec.as<Affine>()) return from_value(m->b + m->a / s, 0.0);
  if (const auto* m = spec.as<ShiftedExp>()) return from_value(m->a / (s - m->a), 0.0);
  if (const auto* m = spec.as<Exp>()) return from_value(s / (s - m->a), 0.0);
  double log_scale = 0.0;
  if (auto a = detail::atomic_model(spec)) {
    const auto v = atomic_complex(*a, s, log_scale);
    return from_value(v, log_scale);
  }
  const auto v = density_complex(*detail::density_model(spec), s.real(), s.imag(), log_scale);
  return from_value(v, log_scale);
}

double modulus_ratio(const MeasureSpec& spec, double sigma, double u) {
  // closed forms keep the ratio exact for the scan in the condition checks
  if (const auto* m = spec.as<PowerLaw>()) return std::pow(1 + (u / sigma) * (u / sigma), -m->alpha / 2);
  const double num = laplace_complex(spec, {sigma, u}).log_abs;
  const double den = laplace_at(spec, sigma).lambda;
  return std::exp(num - den);
}

}  // namespace convpow
