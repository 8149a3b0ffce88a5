#include "convpow/asymptotics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace convpow {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

/// Shared by thm_b and the linear-growth corollary so that y = 0 reproduces thm_b exactly.
double gaussian_form(double j_lambda_plus_tk, double theta, double sigma2, double j, double y) {
  return j_lambda_plus_tk - y * y / (2.0 * sigma2 * j) - std::log(theta) - 0.5 * std::log(2.0 * std::numbers::pi * sigma2 * j);
}

double exponent(const SaddleReport& r) { return static_cast<double>(r.j) * r.eval.lambda + r.t * r.kappa; }

}  // namespace

std::string to_string(Formula f) {
  switch (f) {
    case Formula::ThmA: return "ThmA";
    case Formula::ThmB: return "ThmB";
    case Formula::CorLinGrowth_small_y: return "CorLinGrowth_small_y";
    case Formula::CorLinGrowth_y_c_j23: return "CorLinGrowth_y_c_j23";
    case Formula::CorCLT: return "CorCLT";
    default: return "LinearExpansion";
  }
}

Formula formula_from_string(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
  for (Formula f : {Formula::ThmA, Formula::ThmB, Formula::CorLinGrowth_small_y, Formula::CorLinGrowth_y_c_j23,
                    Formula::CorCLT, Formula::LinearExpansion}) {
    std::string s = to_string(f);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == n) return f;
  }
  throw InvalidArgument("unknown formula '" + name + "'");
}

AsymptoticEstimate thm_a(const MeasureSpec& spec, std::int64_t j, double t) {
  const SaddleReport r = solve_kappa(spec, j, t);
  AsymptoticEstimate e;
  e.formula = Formula::ThmA;
  e.log_value = exponent(r) - std::log(r.kappa) - std::log(r.a_j) - 0.5 * kLog2Pi;
  e.report = r;
  return e;
}

AsymptoticEstimate thm_b(const MeasureSpec& spec, std::int64_t j, double t) {
  const SaddleReport r = solve_kappa(spec, j, t);
  AsymptoticEstimate e;
  e.formula = Formula::ThmB;
  e.log_value = gaussian_form(exponent(r), r.kappa, r.eval.lambda2, static_cast<double>(j), 0.0);
  e.report = r;
  return e;
}

AsymptoticEstimate cor_lin_growth(const MeasureSpec& spec, double alpha,
                                  const std::function<double(std::int64_t)>& y_of_j, std::int64_t j,
                                  LinGrowthBranch branch) {
  if (j < 1) throw InvalidArgument("cor_lin_growth: j must be >= 1");
  const double theta = solve_theta_for_slope(spec, alpha);
  const double y = y_of_j(j);
  const double t = alpha * static_cast<double>(j) + y;
  if (!(t > 0)) throw InvalidArgument("cor_lin_growth: alpha j + y(j) must be positive");
  const SaddleReport r = make_report(spec, j, t, theta);
  const double sigma2 = r.eval.lambda2;

  AsymptoticEstimate e;
  e.report = r;
  e.y = y;
  e.log_value = gaussian_form(exponent(r), theta, sigma2, static_cast<double>(j), y);
  if (branch.kind == LinGrowthBranch::c_j23) {
    e.formula = Formula::CorLinGrowth_y_c_j23;
    e.c = branch.c;
    e.log_value += -branch.c * branch.c * branch.c * r.eval.lambda3 / (6.0 * sigma2 * sigma2 * sigma2);
  } else {
    e.formula = Formula::CorLinGrowth_small_y;
  }
  return e;
}

CltResult cor_clt(const MeasureSpec& spec, double y, std::int64_t j) {
  if (j < 2) throw InvalidArgument("cor_clt: j must be >= 2");
  const double theta_star = solve_theta_star(spec);
  const auto at_star = laplace_at(spec, theta_star);
  const double sigma2 = at_star.lambda2;
  const double jd = static_cast<double>(j);
  const double shifted = theta_star - (std::log(jd) - y) / (2.0 * jd * theta_star * sigma2);
  if (!domain_of(spec).contains(shifted)) {
    const auto rb = range_bounds(spec);
    throw RatioOutOfRange(std::numeric_limits<double>::infinity(), rb.s_minus, rb.s_plus);
  }
  const double t = jd * -laplace_at(spec, shifted).lambda1;
  CltResult out{t, std::exp(-0.5 * std::log(2.0 * std::numbers::pi * sigma2) - std::log(theta_star) - y / 2.0),
                thm_b(spec, j, t)};
  out.estimate.formula = Formula::CorCLT;
  return out;
}

ExpansionCoefficients expansion_coeffs(double a, const std::vector<double>& beta, int p) {
  if (!(a > 0)) throw InvalidArgument("expansion_coeffs: a must be positive");
  return expansion_series<double>(a, beta, p);
}

AsymptoticEstimate linear_expansion_estimate(double a, const ExpansionCoefficients& coeffs, std::int64_t j, double t) {
  if (j < 1 || !(t > 0) || !(a > 0)) throw InvalidArgument("linear_expansion_estimate: need j >= 1, t > 0, a > 0");
  const double jd = static_cast<double>(j);
  double v = jd * std::log(t) + jd * std::log(a) - std::lgamma(jd + 1.0);
  for (int k = 1; k <= coeffs.p; ++k)
    v -= coeffs.iota[k - 1] / k * std::exp((k + 1) * std::log(jd) - k * std::log(t));
  AsymptoticEstimate e;
  e.formula = Formula::LinearExpansion;
  e.log_value = v;
  const double regime = std::exp((coeffs.p + 2) * std::log(jd) - (coeffs.p + 1) * std::log(t));
  if (regime > 0.1)
    e.warnings.push_back("j^(p+2)/t^(p+1) = " + std::to_string(regime) + " > 0.1: outside the expansion's regime");
  return e;
}

Formula auto_formula(std::span<const std::pair<std::int64_t, double>> schedule) {
  if (schedule.empty()) return Formula::ThmA;
  double log_sum = 0.0;
  for (const auto& [j, t] : schedule) log_sum += std::log(t / static_cast<double>(j));
  const double center = std::exp(log_sum / static_cast<double>(schedule.size()));
  for (const auto& [j, t] : schedule)
    if (std::fabs(t / static_cast<double>(j) / center - 1.0) > 0.1) return Formula::ThmA;
  return Formula::ThmB;
}

std::optional<double> recompute_log_value(const AsymptoticEstimate& e) {
  if (!e.report) return std::nullopt;
  const SaddleReport& r = *e.report;
  const double jd = static_cast<double>(r.j);
  // V-hat^j e^{t kappa}
  LogNumber v = r.eval.Vhat.pow(jd) * LogNumber::from_log(r.t * r.kappa);
  const double two_pi = 2.0 * std::numbers::pi;
  switch (e.formula) {
    case Formula::ThmA:
      v = v / LogNumber::from_double(r.kappa * r.a_j * std::sqrt(two_pi));
      break;
    case Formula::ThmB:
    case Formula::CorCLT:
    case Formula::CorLinGrowth_small_y:
    case Formula::CorLinGrowth_y_c_j23: {
      const double s2 = r.eval.lambda2;
      v = v / LogNumber::from_double(r.kappa * std::sqrt(two_pi * s2 * jd));
      v = v * LogNumber::from_log(-e.y * e.y / (2.0 * s2 * jd));
      if (e.formula == Formula::CorLinGrowth_y_c_j23)
        v = v * LogNumber::from_log(-e.c * e.c * e.c * r.eval.lambda3 / (6.0 * s2 * s2 * s2));
      break;
    }
    default:
      return std::nullopt;
  }
  return v.log_abs();
}

}  // namespace convpow
