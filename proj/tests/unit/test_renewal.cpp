#include <doctest.h>

#include <cmath>
#include <random>

#include "convpow/asymptotics.hpp"
#include "convpow/errors.hpp"
#include "convpow/oracle.hpp"
#include "convpow/renewal.hpp"

using namespace convpow;

TEST_CASE("renewal: b coefficients by formula") {
  const RenewalInput in{{2.0, 6.0, 30.0, 200.0}, {}};
  const auto b = renewal_b_coeffs(in);
  CHECK(b[0] == doctest::Approx(6.0 / 4.0));
  CHECK(b[1] == doctest::Approx(-30.0 / 12.0));
  CHECK(b[2] == doctest::Approx((100.0 + 2 * 6 * 30 / 4.0 - 216 / 8.0) / 24));
}

TEST_CASE("renewal: property, b_k = -iota_k / k with a = 1/m") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    // gamma law with shape k and scale s
    const double k = u(rng), s = u(rng);
    std::vector<double> m;
    double g = 1;
    for (int n = 0; n < 4; ++n) m.push_back(g *= (k + n) * s);
    const RenewalInput in{m, {}};
    const auto b = renewal_b_coeffs(in);
    const auto c = expansion_coeffs(1.0 / m[0], renewal_betas(in, 3), 3);
    for (int i = 0; i < 3; ++i) CHECK(b[i] == doctest::Approx(-c.iota[i] / (i + 1)).epsilon(1e-12));
  }
}

TEST_CASE("renewal: moment checks") {
  CHECK_THROWS_AS(check_admissible({{1.0, 0.5}, {}}), InadmissibleMoments);
  CHECK_THROWS_AS(check_admissible({{-1.0}, {}}), InadmissibleMoments);
  CHECK_NOTHROW(check_admissible({{1.0, 2.0, 6.0, 24.0}, {}}));
  CHECK_THROWS_AS(renewal_betas({{1.0, 2.0}, {}}, 3), MissingMoment);
  CHECK_THROWS_AS(renewal_betas({{1.0, 2.0, 6.0, 24.0, 120.0}, {}}, 4), UnsupportedOrder);
  CHECK_THROWS_AS(renewal_input_from_json(nlohmann::json::parse("[1,2]")), InvalidSpec);
  const auto in = renewal_input_from_json(nlohmann::json::parse(R"({"moments":[1,2,6,24]})"));
  CHECK(to_json(in).at("moments").size() == 4);
}

TEST_CASE("renewal: exponential law gives U(t) = 1 + t") {
  const RenewalInput expo{{1.0, 2.0, 6.0, 24.0}, {}};
  const auto e = renewal_asymptotic(expo, 50, 5000.0);
  CHECK(std::abs(e.log_value - exact_affine(1, 1, 50, 5000.0).log_abs()) < 1e-3);
  CHECK(e.warnings.empty());
  CHECK_FALSE(renewal_asymptotic(expo, 50, 60.0).warnings.empty());
}

TEST_CASE("renewal: grid renewal function") {
  const MeasureSpec unit = Lattice{1.0, 1.0, {1.0}};
  const auto ug = build_renewal_grid(unit, 1.0, 20.0);
  for (std::int64_t k = 0; k <= 20; ++k) CHECK(ug.mass_at(k).to_double() == doctest::Approx(1.0));
  CHECK(renewal_residual(discretize(unit, 1.0, 20.0), ug) < 1e-12);

  const MeasureSpec expo = Density{[](double x) { return std::exp(-x); }};
  const auto eg = build_renewal_grid(expo, 1e-2, 20.0);
  // cells put their mass at the right end, so the grid law has mean 1 + h/2
  CHECK(eg.total_mass().to_double() == doctest::Approx(1 + 20.0 / 1.005).epsilon(2e-3));
  const auto gm = grid_moments(expo, 1e-3, 40.0, 2);
  CHECK(gm[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(gm[1] == doctest::Approx(2.0).epsilon(1e-3));
  CHECK_NOTHROW(check_dist_moments({{1.0, 2.0}, expo}, 1e-3, 40.0));
  CHECK_THROWS_AS(check_dist_moments({{1.5, 2.0}, expo}, 1e-3, 40.0), InadmissibleMoments);
  CHECK_THROWS_AS(build_renewal_grid(Affine{1, 1}, 0.1, 5.0), NotProbability);
}
