#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "convpow/asymptotics.hpp"
#include "convpow/errors.hpp"
#include "convpow/oracle.hpp"

using namespace convpow;
using rational = boost::multiprecision::cpp_rational;

TEST_CASE("asymptotics: thm_a assembled from the saddle report") {
  const auto e = thm_a(Affine{1, 1}, 10, 100.0);
  const auto& r = *e.report;
  const double want = 10 * r.eval.lambda + 100.0 * r.kappa - std::log(r.kappa * r.a_j * std::sqrt(2 * std::numbers::pi));
  CHECK(e.log_value == doctest::Approx(want).epsilon(1e-14));
  CHECK(e.formula == Formula::ThmA);
  CHECK(recompute_log_value(e).value() == doctest::Approx(e.log_value).epsilon(1e-12));
}

TEST_CASE("asymptotics: thm_a and thm_b against exact values") {
  // incomplete gamma, j = 40, t = 1600 (mpmath)
  const double exact = 1781.07673995451173;
  CHECK(exact_shifted_exp(1.0, 40, 1600.0).log_abs() == doctest::Approx(exact).epsilon(1e-12));
  CHECK(std::abs(thm_a(ShiftedExp{1}, 40, 1600.0).log_value - exact) < 0.01);
  CHECK(std::abs(thm_b(Affine{1, 1}, 500, 1000.0).log_value - laguerre_eval(500, 1000.0).log_abs()) < 0.01);
}

TEST_CASE("asymptotics: linear growth at y = 0 is thm_b") {
  const MeasureSpec spec = ShiftedExp{1.0};
  const double alpha = 2.0;
  for (std::int64_t j : {10, 1000, 100000}) {
    const auto lg = cor_lin_growth(spec, alpha, [](std::int64_t) { return 0.0; }, j);
    CHECK(lg.log_value == thm_b(spec, j, alpha * j).log_value);
  }
  const auto base = cor_lin_growth(spec, alpha, [](std::int64_t) { return 0.0; }, 1000);
  const auto c = cor_lin_growth(spec, alpha, [](std::int64_t j) { return 0.5 * std::cbrt(double(j * j)); }, 1000,
                                {LinGrowthBranch::c_j23, 0.5});
  CHECK(c.formula == Formula::CorLinGrowth_y_c_j23);
  CHECK(c.log_value != base.log_value);
}

TEST_CASE("asymptotics: clt corollary moves toward its limit") {
  const auto a = cor_clt(ShiftedExp{1.0}, 0.0, 10000);
  const auto b = cor_clt(ShiftedExp{1.0}, 0.0, 1000000);
  const double ga = std::abs(std::exp(a.estimate.log_value) - a.limit);
  const double gb = std::abs(std::exp(b.estimate.log_value) - b.limit);
  CHECK(gb < ga);
  CHECK(b.estimate.formula == Formula::CorCLT);
}

TEST_CASE("asymptotics: delta/iota series, exact rational fixtures") {
  const auto aff = expansion_series<rational>(rational(1), {rational(1), rational(0), rational(0)}, 3);
  CHECK(aff.delta == std::vector<rational>{1, rational(-1, 2), rational(1, 3)});
  CHECK(aff.iota == std::vector<rational>{-1, 2, -5});

  std::mt19937 rng(9);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 9);
  for (int i = 0; i < 50; ++i) {
    const rational a(den(rng), den(rng));
    const std::vector<rational> b{rational(num(rng), den(rng)), rational(num(rng), den(rng)),
                                  rational(num(rng), den(rng))};
    const auto c = expansion_series<rational>(a, b, 3);
    const auto& d = c.delta;
    CHECK(d[0] == b[0] / a);
    CHECK(d[1] == -b[1] / a - b[0] * b[0] / (2 * a * a));
    CHECK(d[2] == b[2] / (2 * a) + b[0] * b[1] / (a * a) + b[0] * b[0] * b[0] / (3 * a * a * a));
    CHECK(c.iota[0] == -d[0]);
    CHECK(c.iota[1] == d[0] * d[0] - 2 * d[1]);
    CHECK(c.iota[2] == -d[0] * d[0] * d[0] + 6 * d[0] * d[1] - 3 * d[2]);
  }
}

TEST_CASE("asymptotics: series reversion, iota solves the slope equation") {
  // Affine(1,1): -lambda'(s) = 1/(s(1+s)); ell(x) = x(1+w(x)) must give -lambda'(ell) = 1/x
  const auto c = expansion_coeffs(1.0, {1.0, 0.0, 0.0, 0.0, 0.0}, 5);
  const double x = 1e-3;
  double w = 0, xp = 1;
  for (double io : c.iota) w += io * (xp *= x);
  const double ell = x * (1 + w);
  CHECK(1.0 / (ell * (1 + ell)) == doctest::Approx(1.0 / x).epsilon(1e-10));
}

TEST_CASE("asymptotics: expansion arguments") {
  CHECK_THROWS_AS(expansion_coeffs(1.0, {1, 0, 0, 0, 0, 0}, 6), UnsupportedOrder);
  CHECK_THROWS_AS(expansion_coeffs(1.0, {1}, 2), InvalidArgument);
  CHECK_THROWS_AS(expansion_coeffs(1.0, {1}, 0), InvalidArgument);
  const auto e = linear_expansion_estimate(1.0, expansion_coeffs(1.0, {1.0}, 1), 50, 100.0);
  CHECK_FALSE(e.warnings.empty());
  CHECK_FALSE(recompute_log_value(e).has_value());
  const auto q = linear_expansion_estimate(1.0, expansion_coeffs(1.0, {1.0, 0, 0}, 3), 50, 5000.0);
  CHECK(q.warnings.empty());
  CHECK(std::abs(q.log_value - laguerre_eval(50, 5000.0).log_abs()) < 1e-3);
}

TEST_CASE("asymptotics: formula names and auto choice") {
  for (Formula f : {Formula::ThmA, Formula::ThmB, Formula::CorLinGrowth_small_y, Formula::CorLinGrowth_y_c_j23,
                    Formula::CorCLT, Formula::LinearExpansion})
    CHECK(formula_from_string(to_string(f)) == f);
  CHECK(formula_from_string("thma") == Formula::ThmA);
  CHECK_THROWS_AS(formula_from_string("ThmC"), InvalidArgument);
  const std::vector<std::pair<std::int64_t, double>> lin{{10, 20}, {100, 201}, {1000, 1990}};
  const std::vector<std::pair<std::int64_t, double>> sq{{10, 100}, {100, 10000}};
  CHECK(auto_formula(lin) == Formula::ThmB);
  CHECK(auto_formula(sq) == Formula::ThmA);
}
