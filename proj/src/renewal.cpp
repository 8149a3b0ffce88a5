#include "convpow/renewal.hpp"

#include <cmath>
#include <string>

#include "convpow/errors.hpp"
#include "convpow/spec_json.hpp"

namespace convpow {

namespace {

double moment(const RenewalInput& in, int k) {
  if (static_cast<int>(in.moments.size()) < k)
    throw MissingMoment("renewal: E[xi^" + std::to_string(k) + "] is required");
  return in.moments[k - 1];
}

std::vector<double> dense_linear(const GridMeasure& gm) {
  std::vector<double> f(static_cast<std::size_t>(gm.max_index()) + 1, 0.0);
  for (const auto& a : gm.atoms()) f[static_cast<std::size_t>(a.index)] = a.mass.to_double();
  return f;
}

}  // namespace

RenewalInput renewal_input_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("moments") || !j.at("moments").is_array())
    throw InvalidSpec("renewal input must be an object with a 'moments' array");
  RenewalInput in;
  for (const auto& v : j.at("moments")) {
    if (!v.is_number()) throw InvalidSpec("renewal moments must be numbers");
    in.moments.push_back(v.get<double>());
  }
  if (j.contains("dist") && !j.at("dist").is_null()) in.dist = spec_from_json(j.at("dist"));
  return in;
}

nlohmann::json to_json(const RenewalInput& in) {
  nlohmann::json j;
  j["moments"] = in.moments;
  if (in.dist) j["dist"] = spec_to_json(*in.dist);
  return j;
}

void check_admissible(const RenewalInput& in) {
  const auto& m = in.moments;
  if (m.empty()) throw MissingMoment("renewal: E[xi] is required");
  for (double v : m)
    if (!std::isfinite(v)) throw InadmissibleMoments("renewal: moments must be finite");
  if (!(m[0] > 0)) throw InadmissibleMoments("renewal: E[xi] must be positive");
  // relative slack for exactly degenerate laws such as xi = const
  auto nonneg = [](double det, double scale) { return det >= -1e-12 * scale; };
  if (m.size() >= 2 && !nonneg(m[1] - m[0] * m[0], m[1]))
    throw InadmissibleMoments("renewal: E[xi^2] < E[xi]^2");
  if (m.size() >= 3 && !nonneg(m[0] * m[2] - m[1] * m[1], m[1] * m[1]))
    throw InadmissibleMoments("renewal: E[xi] E[xi^3] < E[xi^2]^2");
  if (m.size() >= 4) {
    const double det = m[1] * m[3] + 2 * m[0] * m[1] * m[2] - m[1] * m[1] * m[1] - m[0] * m[0] * m[3] - m[2] * m[2];
    if (!nonneg(det, m[1] * m[3] + m[2] * m[2])) throw InadmissibleMoments("renewal: order-2 Hankel determinant < 0");
  }
}

std::vector<double> renewal_betas(const RenewalInput& in, int p) {
  if (p < 1) throw InvalidArgument("renewal_betas: p must be >= 1");
  if (p > 3) throw UnsupportedOrder("renewal_betas: only p <= 3 is available");
  check_admissible(in);
  const double m = moment(in, 1);
  const double m2 = moment(in, 2);
  std::vector<double> b{m2 / (2 * m * m)};
  if (p >= 2) {
    const double m3 = moment(in, 3);
    b.push_back(m3 / (6 * m * m) - m2 * m2 / (4 * m * m * m));
  }
  if (p >= 3) {
    const double m3 = moment(in, 3);
    const double m4 = moment(in, 4);
    b.push_back(m4 / (12 * m * m) - m3 * m2 / (3 * m * m * m) + m2 * m2 * m2 / (4 * m * m * m * m));
  }
  return b;
}

std::array<double, 3> renewal_b_coeffs(const RenewalInput& in) {
  check_admissible(in);
  const double m = moment(in, 1);
  const double m2 = moment(in, 2);
  const double m3 = moment(in, 3);
  const double m4 = moment(in, 4);
  return {m2 / (2 * m), -m3 / (6 * m), (m4 / m + 2 * m2 * m3 / (m * m) - m2 * m2 * m2 / (m * m * m)) / 24.0};
}

AsymptoticEstimate renewal_asymptotic(const RenewalInput& in, std::int64_t j, double t) {
  if (j < 1 || !(t > 0)) throw InvalidArgument("renewal_asymptotic: need j >= 1 and t > 0");
  const auto b = renewal_b_coeffs(in);
  const double m = in.moments[0];
  const double jd = static_cast<double>(j);
  const double x = jd / t;
  AsymptoticEstimate e;
  e.formula = Formula::LinearExpansion;
  e.log_value = jd * std::log(t) - jd * std::log(m) - std::lgamma(jd + 1) + jd * x * (b[0] + x * (b[1] + x * b[2]));
  const double regime = std::exp(5 * std::log(jd) - 4 * std::log(t));
  if (regime > 0.1) e.warnings.push_back("j^5/t^4 = " + std::to_string(regime) + " > 0.1: outside the expansion's regime");
  return e;
}

GridMeasure build_renewal_grid(const MeasureSpec& dist, double h, double x_max) {
  const GridMeasure fg = discretize(dist, h, x_max);
  const std::vector<double> f = dense_linear(fg);
  double total = 0.0;
  for (double v : f) total += v;
  if (std::fabs(total - 1.0) > 1e-6)
    throw NotProbability("renewal: grid mass of the inter-arrival law is " + std::to_string(total) + ", not 1");
  if (!(f[0] < 1.0)) throw NotProbability("renewal: inter-arrival law is concentrated at 0");

  const std::size_t n = f.size();
  std::vector<double> u(n, 0.0);
  const double denom = 1.0 - f[0];
  u[0] = 1.0 / denom;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) acc += f[i] * u[k - i];
    u[k] = acc / denom;
  }
  std::vector<GridAtom> atoms;
  atoms.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    if (u[k] > 0) atoms.push_back({static_cast<std::int64_t>(k), LogNumber::from_double(u[k])});
  return GridMeasure(h, std::move(atoms));
}

double renewal_residual(const GridMeasure& dist_grid, const GridMeasure& renewal_grid) {
  const std::vector<double> f = dense_linear(dist_grid);
  const std::vector<double> u = dense_linear(renewal_grid);
  const std::size_t n = std::min(f.size(), u.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double acc = k == 0 ? 1.0 : 0.0;
    for (std::size_t i = 0; i <= k; ++i) acc += f[i] * u[k - i];
    worst = std::max(worst, std::fabs(u[k] - acc));
  }
  return worst;
}

std::vector<double> grid_moments(const MeasureSpec& dist, double h, double x_max, int n) {
  const GridMeasure g = discretize(dist, h, x_max);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (const auto& a : g.atoms()) {
    const double x = static_cast<double>(a.index) * h;
    const double w = a.mass.to_double();
    double p = 1.0;
    for (int k = 0; k < n; ++k) {
      p *= x;
      out[static_cast<std::size_t>(k)] += w * p;
    }
  }
  return out;
}

void check_dist_moments(const RenewalInput& in, double h, double x_max) {
  if (!in.dist) return;
  const int n = static_cast<int>(in.moments.size());
  const auto gm = grid_moments(*in.dist, h, x_max, n);
  for (int k = 0; k < n; ++k) {
    const double declared = in.moments[static_cast<std::size_t>(k)];
    if (std::fabs(gm[static_cast<std::size_t>(k)] - declared) > 0.01 * std::fabs(declared))
      throw InadmissibleMoments("renewal: declared E[xi^" + std::to_string(k + 1) + "] = " + std::to_string(declared) +
                                " but the distribution gives " + std::to_string(gm[static_cast<std::size_t>(k)]));
  }
}

}  // namespace convpow
