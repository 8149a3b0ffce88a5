#include "convpow/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "convpow/errors.hpp"
#include "convpow/laplace.hpp"
#include "convpow/saddle.hpp"
#include "detail.hpp"

namespace convpow {

namespace {

/// Linear-scale copy of a mass array: value[i] = exp(log_scale) * v[i], max(v) = 1.
struct Scaled {
  double log_scale = 0.0;
  std::vector<double> v;
};

Scaled to_scaled(std::span<const LogNumber> m) {
  Scaled s;
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& x : m)
    if (!x.is_zero()) top = std::max(top, x.log_abs());
  s.log_scale = std::isfinite(top) ? top : 0.0;
  s.v.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) s.v[i] = m[i].is_zero() ? 0.0 : std::exp(m[i].log_abs() - s.log_scale);
  return s;
}

std::vector<LogNumber> from_scaled(const Scaled& s) {
  std::vector<LogNumber> out(s.v.size());
  for (std::size_t i = 0; i < s.v.size(); ++i)
    out[i] = s.v[i] > 0 ? LogNumber::from_log(std::log(s.v[i]) + s.log_scale) : LogNumber::zero();
  return out;
}

__attribute__((target_clones("avx2", "default"))) double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
#pragma omp simd reduction(+ : acc)
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

Scaled product(const Scaled& a, const Scaled& b, std::int64_t horizon) {
  const auto na = static_cast<std::int64_t>(a.v.size());
  const auto nb = static_cast<std::int64_t>(b.v.size());
  Scaled out;
  if (na == 0 || nb == 0) return out;
  const std::int64_t n = std::min(horizon + 1, na + nb - 1);
  out.v.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> br(b.v.rbegin(), b.v.rend());

  // output k uses a[i] * b[k - i] = a[i] * br[nb - 1 - k + i]
  auto work = [&](std::int64_t first, std::int64_t stride) {
    for (std::int64_t k = first; k < n; k += stride) {
      const std::int64_t i0 = std::max<std::int64_t>(0, k - nb + 1);
      const std::int64_t i1 = std::min(k, na - 1);
      if (i1 < i0) continue;
      out.v[k] = dot(a.v.data() + i0, br.data() + (nb - 1 - k + i0), static_cast<std::size_t>(i1 - i0 + 1));
    }
  };
  const int threads = static_cast<int>(std::min<std::int64_t>(thread_count(), std::max<std::int64_t>(1, n / 2048)));
  if (threads <= 1) {
    work(0, 1);
  } else {
    // interleaved rows balance the triangular cost
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
    for (auto& th : pool) th.join();
  }

  const double top = *std::max_element(out.v.begin(), out.v.end());
  out.log_scale = a.log_scale + b.log_scale;
  if (top > 0) {
    for (auto& x : out.v) x /= top;
    out.log_scale += std::log(top);
  }
  return out;
}

bool atoms_on_grid(const MeasureSpec& spec, double h) {
  const auto a = detail::atomic_model(spec);
  if (!a) return false;
  auto on = [h](double x) {
    const double k = std::round(x / h);
    return std::fabs(x - k * h) <= 1e-9 * std::max(1.0, std::fabs(x));
  };
  for (std::size_t k = 0; k < a->positions.size(); ++k)
    if (a->masses[k] > 0 && !on(a->positions[k])) return false;
  return !a->repeat || on(a->span);
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("CONVPOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 1024L));
    return 1;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

ConvolutionTable::ConvolutionTable(GridMeasure base, std::int64_t power, double tilt, std::vector<LogNumber> tilted_mass)
    : base_(std::move(base)), power_(power), tilt_(tilt), tilted_(std::move(tilted_mass)) {
  cumulative_.resize(tilted_.size());
  LogNumber run;
  const double kh = tilt_ * base_.step();
  for (std::size_t i = 0; i < tilted_.size(); ++i) {
    if (!tilted_[i].is_zero()) run += tilted_[i].scaled_by_exp(kh * static_cast<double>(i));
    cumulative_[i] = run;
  }
}

LogNumber ConvolutionTable::value_at(double t) const {
  if (t < 0) return LogNumber::zero();
  const double kf = std::floor(t / step() + 1e-9);
  if (kf > static_cast<double>(horizon()))
    throw HorizonTooSmall("convolution table: t = " + std::to_string(t) + " lies beyond the grid horizon " +
                          std::to_string(static_cast<double>(horizon()) * step()));
  return cumulative_[static_cast<std::size_t>(kf)];
}

std::pair<LogNumber, LogNumber> ConvolutionTable::bracket(double t) const {
  return {value_at(t), value_at(t + static_cast<double>(power_) * step())};
}

LogNumber ConvolutionTable::continuum_estimate(double t) const {
  const LogNumber lo = value_at(t);
  const LogNumber hi = value_at(t + static_cast<double>(power_ - 1) * step());
  if (lo.is_zero()) return LogNumber::zero();
  return LogNumber::from_log(0.5 * (lo.log_abs() + hi.log_abs()));
}

std::vector<LogNumber> dense_masses(const GridMeasure& gm) {
  std::vector<LogNumber> out(static_cast<std::size_t>(gm.max_index()) + 1);
  for (const auto& a : gm.atoms()) out[static_cast<std::size_t>(a.index)] = a.mass;
  return out;
}

std::vector<LogNumber> convolve_masses(std::span<const LogNumber> a, std::span<const LogNumber> b,
                                       std::int64_t horizon) {
  return from_scaled(product(to_scaled(a), to_scaled(b), horizon));
}

ConvolutionTable convolve_power(const GridMeasure& gm, std::int64_t j, double kappa) {
  if (j < 1) throw InvalidArgument("convolve_power: j must be >= 1");
  if (!(kappa >= 0) || !std::isfinite(kappa)) throw InvalidArgument("convolve_power: tilt must be >= 0");
  const GridMeasure tilted = gm.tilted(kappa);
  const std::int64_t horizon = gm.max_index();
  Scaled base = to_scaled(dense_masses(tilted));
  Scaled acc;
  bool have = false;
  for (std::int64_t e = j;;) {
    if (e & 1) {
      acc = have ? product(acc, base, horizon) : base;
      have = true;
    }
    e >>= 1;
    if (e == 0) break;
    base = product(base, base, horizon);
  }
  std::vector<LogNumber> masses = from_scaled(acc);
  masses.resize(static_cast<std::size_t>(horizon) + 1);
  return ConvolutionTable(gm.untilted(), j, kappa, std::move(masses));
}

LogNumber exact_power_law(double b, double alpha, std::int64_t j, double t) {
  if (!(b > 0) || !(alpha > 0) || j < 1) throw InvalidArgument("exact_power_law: need b, alpha > 0 and j >= 1");
  if (!(t > 0)) return LogNumber::zero();
  const double jd = static_cast<double>(j);
  return LogNumber::from_log(jd * (std::log(b) + std::lgamma(alpha + 1)) + jd * alpha * std::log(t) -
                             std::lgamma(jd * alpha + 1));
}

LogNumber exact_shifted_exp(double a, std::int64_t j, double t) {
  if (!(a > 0) || j < 1) throw InvalidArgument("exact_shifted_exp: need a > 0 and j >= 1");
  const double x = a * t;
  if (!(x > 0)) return LogNumber::zero();
  const double n = static_cast<double>(j - 1);
  const double lx = std::log(x);
  if (x > 2 * (n + 1) && x > 30) {
    // e^x sum_{k=0}^{n} (-1)^k x^{n-k}/(n-k)! - (-1)^n; terms shrink by (n-k)/x < 1/2
    LogNumber s;
    for (std::int64_t k = 0; k <= j - 1; ++k) {
      const double m = n - static_cast<double>(k);
      s += LogNumber::from_log(m * lx - std::lgamma(m + 1), k % 2 == 0 ? 1 : -1);
    }
    return s.scaled_by_exp(x) - LogNumber::from_log(0.0, (j - 1) % 2 == 0 ? 1 : -1);
  }
  // sum_{m>=0} x^{n+1+m} / (m! (n+1+m)) / n!, all terms positive
  LogNumber s;
  double peak = -std::numeric_limits<double>::infinity();
  for (double m = 0;; m += 1) {
    const double lt = (n + 1 + m) * lx - std::lgamma(m + 1) - std::log(n + 1 + m) - std::lgamma(n + 1);
    s += LogNumber::from_log(lt);
    peak = std::max(peak, lt);
    if (m > x && lt < peak - 40) break;
  }
  return s;
}

LogNumber laguerre_eval(std::int64_t j, double t) {
  if (j < 0 || !(t >= 0)) throw InvalidArgument("laguerre_eval: need j >= 0 and t >= 0");
  if (j == 0) return LogNumber::one();
  // rho_k = L_k / L_{k-1};  (k+1) L_{k+1} = (2k+1+t) L_k - k L_{k-1}
  double rho = 1.0 + t;
  double log_l = std::log(rho);
  for (std::int64_t k = 1; k < j; ++k) {
    const double kd = static_cast<double>(k);
    rho = ((2 * kd + 1 + t) - kd / rho) / (kd + 1);
    log_l += std::log(rho);
  }
  return LogNumber::from_log(log_l);
}

LogNumber exact_affine(double a, double b, std::int64_t j, double t) {
  if (!(a > 0) || !(b > 0)) throw InvalidArgument("exact_affine: need a, b > 0");
  if (t < 0) return LogNumber::zero();
  return laguerre_eval(j, a * t / b).scaled_by_exp(static_cast<double>(j) * std::log(b));
}

TiltMoments tilt_moments(const GridMeasure& gm, std::int64_t j, double kappa) {
  const ConvolutionTable table = convolve_power(gm, j, kappa);
  const Scaled p = to_scaled(table.tilted_mass());
  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    m0 += p.v[i];
    m1 += p.v[i] * static_cast<double>(i);
  }
  if (!(m0 > 0)) throw InvalidArgument("tilt_moments: measure has no mass on the grid");
  const double mean_idx = m1 / m0;
  double c2 = 0.0;
  for (std::size_t i = 0; i < p.v.size(); ++i) {
    const double d = static_cast<double>(i) - mean_idx;
    c2 += p.v[i] * d * d;
  }
  const double h = gm.step();
  return {mean_idx * h, c2 / m0 * h * h, kappa, std::numeric_limits<double>::quiet_NaN()};
}

TiltMoments tilt_moments(const MeasureSpec& spec, std::int64_t j, double t, double h) {
  const SaddleReport r = solve_kappa(spec, j, t);
  const GridMeasure gm = discretize(spec, h, 4 * t + 10 * r.a_j);
  TiltMoments m = tilt_moments(gm, j, r.kappa);
  m.expected_variance = static_cast<double>(j) * r.eval.lambda2;
  return m;
}

OracleValue grid_oracle(const MeasureSpec& spec, std::int64_t j, double t, double h, double x_max) {
  if (j < 1) throw InvalidArgument("grid_oracle: j must be >= 1");
  if (!(h > 0)) throw InvalidArgument("grid_oracle: h must be positive");
  double kappa = 0.0;
  try {
    const SaddleReport r = solve_kappa(spec, j, t);
    kappa = r.kappa;
  } catch (const RatioOutOfRange&) {
    // outside the saddle range the untilted grid is still a valid oracle
  }
  const double jd = static_cast<double>(j);
  // truncation is exact, so the horizon only has to reach the upper bracket end
  if (x_max <= 0) x_max = t + (jd + 10) * h;
  const ConvolutionTable table = convolve_power(discretize(spec, h, x_max), j, kappa);
  OracleValue out;
  out.kappa = kappa;
  out.exact_on_grid = atoms_on_grid(spec, h);
  if (out.exact_on_grid) {
    out.estimate = out.lower = out.upper = table.value_at(t);
  } else {
    std::tie(out.lower, out.upper) = table.bracket(t);
    out.estimate = table.continuum_estimate(t);
  }
  return out;
}

void write_csv(const ConvolutionTable& table, std::ostream& out) {
  out << "# schema_version=1\n";
  out << "grid_x,log_V_star_j\n";
  char buf[96];
  const auto cum = table.cumulative();
  for (std::size_t k = 0; k < cum.size(); ++k) {
    if (cum[k].is_zero()) continue;
    std::snprintf(buf, sizeof buf, "%.12e,%.12e\n", static_cast<double>(k) * table.step(), cum[k].log_abs());
    out << buf;
  }
}

}  // namespace convpow
