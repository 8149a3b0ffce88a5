// One PASS/FAIL line per criterion. Usage: convpow_acceptance [--criterion N]
#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "convpow/asymptotics.hpp"
#include "convpow/conditions.hpp"
#include "convpow/errors.hpp"
#include "convpow/laplace.hpp"
#include "convpow/oracle.hpp"
#include "convpow/renewal.hpp"
#include "convpow/saddle.hpp"

using namespace convpow;
using rational = boost::multiprecision::cpp_rational;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---- 1: closed-form saddle points
Outcome c1() {
  Outcome o;
  const std::vector<double> js{1, 7, 40, 300, 5000};
  const std::vector<double> ts{0.5, 3, 25, 400, 9e4};
  struct Case {
    MeasureSpec spec;
    std::function<double(double, double)> kappa;
  };
  const double alpha = 1.7, b = 0.6, a = 1.3, aa = 0.8, bb = 2.5;
  std::vector<Case> cases{
      {PowerLaw{b, alpha}, [&](double j, double t) { return alpha * j / t; }},
      {Affine{aa, bb},
       [&](double j, double t) { return (std::sqrt(aa * aa + 4 * aa * bb * j / t) - aa) / (2 * bb); }},
      {ShiftedExp{a}, [&](double j, double t) { return a + j / t; }},
      {Exp{a}, [&](double j, double t) { return (a + std::sqrt(a * a + 4 * a * j / t)) / 2; }},
  };
  double worst = 0.0;
  for (const auto& c : cases)
    for (double j : js)
      for (double t : ts) {
        const auto r = solve_kappa(c.spec, static_cast<std::int64_t>(j), t);
        worst = std::max(worst, rel(r.kappa, c.kappa(j, t)));
      }
  o.require(worst < 1e-10, fmt("worst rel err %.3e", worst));
  o.detail = (o.pass ? fmt("worst rel err %.3e", worst) : o.detail);
  return o;
}

// ---- 2: Thm (a) vs incomplete gamma, ShiftedExp(1)
Outcome c2() {
  Outcome o;
  const MeasureSpec spec = ShiftedExp{1.0};
  std::vector<double> gaps;
  std::string line;
  for (std::int64_t j : {10, 20, 40, 80}) {
    const double t = static_cast<double>(j * j);
    const double r = std::exp(thm_a(spec, j, t).log_value - exact_shifted_exp(1.0, j, t).log_abs());
    gaps.push_back(std::abs(r - 1));
    line += fmt(" j=%g:%.6f", static_cast<double>(j), r);
  }
  o.require(gaps.back() < 0.03, fmt("|ratio-1|=%.3e at j=80", gaps.back()));
  for (std::size_t i = 1; i < gaps.size(); ++i)
    o.require(gaps[i] < gaps[i - 1], fmt("|ratio-1| not decreasing at step %g (%.3e -> %.3e)", double(i), gaps[i - 1], gaps[i]));
  o.detail += (o.detail.empty() ? "" : " |") + line;
  return o;
}

// ---- 3: Laguerre cases I and II
Outcome c3() {
  Outcome o;
  const MeasureSpec spec = Affine{1.0, 1.0};
  std::vector<double> gaps;
  for (std::int64_t j : {10, 20, 40, 80, 160}) {
    const double t = static_cast<double>(j * j);
    const double r = std::exp(thm_a(spec, j, t).log_value - laguerre_eval(j, t).log_abs());
    gaps.push_back(std::abs(r - 1));
  }
  o.require(gaps.back() < 0.02, fmt("case I |ratio-1|=%.3e at j=160", gaps.back()));
  o.require(gaps.back() < gaps.front(), "case I ratio not approaching 1");

  const std::int64_t j = 500;
  const double c = 2.0, t = c * j;
  const auto est = thm_b(spec, j, t);
  const double r2 = std::exp(est.log_value - laguerre_eval(j, t).log_abs());
  o.require(std::abs(r2 - 1) < 0.05, fmt("case II ratio %.6f", r2));

  // prefactor: V^{*j}(t) / (G(kappa)^j (2 pi t)^{-1/2}),  G(s) = V-hat(s) e^{c s}
  const auto& rep = *est.report;
  const double logG = rep.eval.lambda + c * rep.kappa;
  const double pref = std::exp(est.log_value - j * logG + 0.5 * std::log(2 * std::numbers::pi * t));
  const double phi = (std::sqrt(1 + 4 / c) - 1) / 2;
  const double want = std::pow(c * c + 4 * c, -0.25) / phi;
  o.require(rel(pref, want) < 0.01, fmt("case II constant %.6f vs %.6f", pref, want));
  o.detail += (o.detail.empty() ? "" : " |") + fmt(" caseI j=160 gap %.3e, caseII ratio %.6f, const rel %.2e", gaps.back(), r2, rel(pref, want));
  return o;
}

// ---- 4: Perron
Outcome c4() {
  Outcome o;
  const double t = 5.0;
  std::string line;
  double last = 0;
  for (std::int64_t j : {500, 2000, 8000}) {
    const double jd = static_cast<double>(j);
    const double log_perron = -t / 2 + 2 * std::sqrt(t * jd) -
                              std::log(2 * std::pow(std::numbers::pi * std::numbers::pi * t * jd, 0.25));
    const double r = std::exp(log_perron - laguerre_eval(j, t).log_abs());
    line += fmt(" j=%g:%.6f", jd, r);
    last = r;
  }
  o.require(std::abs(last - 1) < 0.03, fmt("|ratio-1|=%.3e at j=8000", std::abs(last - 1)));
  o.detail += (o.detail.empty() ? "" : " |") + line;
  return o;
}

// ---- 5: grid oracle vs exact, semigroup, tilt invariance
double max_log_gap(std::span<const LogNumber> a, std::span<const LogNumber> b, std::size_t n) {
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k].is_zero() && b[k].is_zero()) continue;
    if (a[k].is_zero() || b[k].is_zero()) return INFINITY;
    worst = std::max(worst, std::abs(std::expm1(a[k].log_abs() - b[k].log_abs())));
  }
  return worst;
}

Outcome c5() {
  Outcome o;
  const double h = 1e-3;
  double worst = 0.0;
  for (int fam = 0; fam < 2; ++fam) {
    const MeasureSpec spec = fam == 0 ? MeasureSpec(PowerLaw{2.0, 0.5}) : MeasureSpec(ShiftedExp{1.0});
    for (std::int64_t j = 1; j <= 6; ++j)
      for (double t : {1.0, 4.0, 10.0}) {
        const auto ov = grid_oracle(spec, j, t, h);
        const LogNumber ex = fam == 0 ? exact_power_law(2.0, 0.5, j, t) : exact_shifted_exp(1.0, j, t);
        worst = std::max(worst, std::abs(std::expm1(ov.estimate.log_abs() - ex.log_abs())));
      }
  }
  o.require(worst < 5e-3, fmt("oracle worst rel err %.3e", worst));

  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_int_distribution<int> jd(1, 5);
  double semi = 0.0, tilt = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<GridAtom> atoms;
    for (std::int64_t k = 0; k < 60; ++k)
      if (u01(rng) < 0.7) atoms.push_back({k, LogNumber::from_double(0.1 + u01(rng))});
    const GridMeasure gm(0.05, atoms);
    const std::int64_t j1 = jd(rng), j2 = jd(rng);
    const auto whole = convolve_power(gm, j1 + j2, 0.0);
    const auto a = convolve_power(gm, j1, 0.0);
    const auto b = convolve_power(gm, j2, 0.0);
    const auto prod = convolve_masses(a.tilted_mass(), b.tilted_mass(), whole.horizon());
    semi = std::max(semi, max_log_gap(whole.tilted_mass(), prod, prod.size()));

    const double kappa = 4.0 * u01(rng);
    const auto tilted = convolve_power(gm, j1 + j2, kappa);
    tilt = std::max(tilt, max_log_gap(whole.cumulative(), tilted.cumulative(), whole.cumulative().size()));
  }
  o.require(semi < 1e-8, fmt("semigroup gap %.3e", semi));
  o.require(tilt < 1e-8, fmt("tilt gap %.3e", tilt));
  o.detail += (o.detail.empty() ? "" : " |") + fmt(" oracle %.2e, semigroup %.2e, tilt %.2e", worst, semi, tilt);
  return o;
}

// ---- 6: tilted moments
Outcome c6() {
  Outcome o;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> fam(0, 3);
  std::uniform_int_distribution<int> jd(2, 5);
  std::uniform_real_distribution<double> td(2.0, 6.0);
  std::string line;
  for (int i = 0; i < 5; ++i) {
    const int f = fam(rng);
    const MeasureSpec spec = f == 0   ? MeasureSpec(Affine{1.0, 1.0})
                             : f == 1 ? MeasureSpec(PowerLaw{1.0, 1.5})
                             : f == 2 ? MeasureSpec(ShiftedExp{1.0})
                                      : MeasureSpec(Exp{0.5});
    const std::int64_t j = jd(rng);
    const double t = td(rng);
    const auto m = tilt_moments(spec, j, t, 1e-3);
    const double em = rel(m.mean, t), ev = rel(m.variance, m.expected_variance);
    o.require(em < 5e-3, spec.family() + fmt(" mean rel %.3e", em));
    o.require(ev < 1e-2, spec.family() + fmt(" variance rel %.3e", ev));
    line += " " + spec.family() + fmt("(j=%g,t=%.2f):", double(j), t) + fmt("%.1e/%.1e", em, ev);
  }
  o.detail += (o.detail.empty() ? "" : " |") + line;
  return o;
}

// ---- 7: coefficient chain
Outcome c7() {
  Outcome o;
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  bool exact = true;
  for (int trial = 0; trial < 25; ++trial) {
    rational a(den(rng) + 1, den(rng));
    std::vector<rational> beta{rational(num(rng), den(rng)), rational(num(rng), den(rng)), rational(num(rng), den(rng))};
    const auto c = expansion_series<rational>(a, beta, 3);
    const auto& d = c.delta;
    const auto& i = c.iota;
    exact = exact && d[0] == beta[0] / a;
    exact = exact && d[1] == -beta[1] / a - beta[0] * beta[0] / (2 * a * a);
    exact = exact && d[2] == beta[2] / (2 * a) + beta[0] * beta[1] / (a * a) + beta[0] * beta[0] * beta[0] / (3 * a * a * a);
    exact = exact && i[0] == -d[0];
    exact = exact && i[1] == d[0] * d[0] - 2 * d[1];
    exact = exact && i[2] == -d[0] * d[0] * d[0] + 6 * d[0] * d[1] - 3 * d[2];
  }
  {
    const auto c = expansion_series<rational>(rational(1), {rational(1), rational(0), rational(0)}, 3);
    exact = exact && c.delta == std::vector<rational>{1, rational(-1, 2), rational(1, 3)};
    exact = exact && c.iota == std::vector<rational>{-1, 2, -5};
  }
  o.require(exact, "symbolic delta/iota identities");

  std::uniform_real_distribution<double> u(0.2, 3.0);
  double chain = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    // mixture of two gamma laws
    const double w = u(rng) / 3.2, k1 = u(rng), s1 = u(rng), k2 = u(rng), s2 = u(rng);
    std::vector<double> m(4);
    for (int n = 1; n <= 4; ++n) {
      double g1 = 1, g2 = 1;
      for (int r = 0; r < n; ++r) {
        g1 *= (k1 + r) * s1;
        g2 *= (k2 + r) * s2;
      }
      m[n - 1] = w * g1 + (1 - w) * g2;
    }
    const RenewalInput in{m, {}};
    const auto b = renewal_b_coeffs(in);
    const auto c = expansion_coeffs(1.0 / m[0], renewal_betas(in, 3), 3);
    for (int k = 0; k < 3; ++k) chain = std::max(chain, std::abs(b[k] + c.iota[k] / (k + 1)) / std::max(1.0, std::abs(b[k])));
  }
  o.require(chain < 1e-12, fmt("b-chain gap %.3e", chain));

  const RenewalInput expo{{1.0, 2.0, 6.0, 24.0}, {}};
  const auto beta = renewal_betas(expo, 3);
  const double affine_gap = std::max({std::abs(beta[0] - 1.0), std::abs(beta[1]), std::abs(beta[2])});
  o.require(affine_gap < 1e-12, fmt("exponential betas differ from Affine(1,1) by %.3e", affine_gap));
  const double prep = linear_expansion_estimate(1.0, expansion_coeffs(1.0, beta, 1), 50, 5000.0).log_value;
  const double r = std::exp(prep - laguerre_eval(50, 5000.0).log_abs());
  o.require(std::abs(r - 1) < 0.02, fmt("prep/laguerre %.6f", r));
  o.detail += (o.detail.empty() ? "" : " |") + fmt(" chain %.2e, prep ratio %.6f", chain, r);
  return o;
}

// ---- 8: conditions
Outcome c8() {
  Outcome o;
  const auto rates = laguerre_case1_rates(10000, 1e7);
  for (double r : {rates.a_j_ratio, rates.kappa_a_ratio, rates.Tj_ratio})
    o.require(std::abs(r - 1) < 0.02, fmt("case I rate %.6f", r));

  const double alpha = 2.0, gamma = 1.0;
  const auto pl = check_conditions(PowerLaw{1.0, alpha}, 10, 10.0, gamma);
  const double want = std::pow(1 + gamma * gamma, -alpha / 2);
  o.require(std::abs(pl.first_scan_value - want) < 1e-6,
            fmt("PowerLaw first scan value %.9f vs %.9f", pl.first_scan_value, want));

  const auto c3 = check_conditions(Affine{1.0, 1.0}, 10000, 100.0, 1.0);
  o.require(c3.regime == Regime::suspect, "case III regime " + to_string(c3.regime));
  o.detail += (o.detail.empty() ? "" : " |") +
              fmt(" rates %.5f %.5f %.5f", rates.a_j_ratio, rates.kappa_a_ratio, rates.Tj_ratio) +
              ", case III " + to_string(c3.regime);
  return o;
}

// ---- 9: CLT corollary
Outcome c9() {
  Outcome o;
  std::string line;
  for (int fam = 0; fam < 2; ++fam) {
    const MeasureSpec spec = fam == 0 ? MeasureSpec(ShiftedExp{1.0}) : MeasureSpec(Affine{1.0, 1.0});
    for (double y : {-2.0, 0.0, 2.0}) {
      try {
        std::vector<double> gaps;
        for (std::int64_t j : {10000, 100000, 1000000}) {
          const auto r = cor_clt(spec, y, j);
          gaps.push_back(std::abs(std::exp(r.estimate.log_value) - r.limit) / r.limit);
        }
        o.require(gaps[2] < 0.05, spec.family() + fmt(" y=%g gap %.3e at j=1e6", y, gaps[2]));
        o.require(gaps[1] < gaps[0] && gaps[2] < gaps[1], spec.family() + fmt(" y=%g gaps not decreasing", y));
        line += " " + spec.family() + fmt("(y=%g):%.1e", y, gaps[2]);
      } catch (const Error& e) {
        o.require(false, spec.family() + fmt(" y=%g: ", y) + e.what());
      }
    }
  }
  o.detail += (o.detail.empty() ? "" : " |") + line;
  return o;
}

// ---- 10: range of -lambda'
Outcome c10() {
  Outcome o;
  const MeasureSpec lat = Lattice{1.0, 2.0, {1.0, 0.5, 0.25}};
  const double v = -laplace_at(lat, 80.0).lambda1;
  o.require(std::abs(v - 2.0) < 1e-3, fmt("lattice -lambda'(80) = %.9f", v));
  const MeasureSpec pl = PowerLaw{1.0, 1.5};
  double prev = INFINITY;
  bool down = true;
  for (double s : {10.0, 100.0, 1000.0}) {
    const double m = -laplace_at(pl, s).lambda1;
    down = down && m < prev && m > 0;
    prev = m;
  }
  o.require(down && prev < 1e-2, fmt("PowerLaw -lambda'(1000) = %.3e", prev));
  o.detail += (o.detail.empty() ? "" : " |") + fmt(" lattice %.9f, power law %.3e", v, prev);
  return o;
}

struct Criterion {
  Outcome (*run)();
  double budget_s;
};

const Criterion kCriteria[] = {{c1, 1}, {c2, 1}, {c3, 5}, {c4, 5}, {c5, 60},
                               {c6, 30}, {c7, 5}, {c8, 5}, {c9, 1}, {c10, 1}};

bool run_one(int n) {
  const auto& c = kCriteria[n - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < c.budget_s, fmt("runtime %.2fs over %.0fs budget", secs, c.budget_s));
  std::printf("criterion %d: %s (%.2fs)%s\n", n, o.pass ? "PASS" : "FAIL", secs,
              o.detail.empty() ? "" : (" " + o.detail).c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  if (only < 0 || only > 10) {
    std::fprintf(stderr, "criterion must be 1..10\n");
    return 2;
  }
  bool ok = true;
  for (int n = 1; n <= 10; ++n)
    if (only == 0 || only == n) ok = run_one(n) && ok;
  return ok ? 0 : 1;
}
