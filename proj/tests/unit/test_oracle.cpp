#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "convpow/errors.hpp"
#include "convpow/laplace.hpp"
#include "convpow/oracle.hpp"

using namespace convpow;

TEST_CASE("oracle: incomplete gamma against quadrature references") {
  CHECK(exact_shifted_exp(2.0, 5, 3.0).to_double() == doctest::Approx(12505.2925982747888).epsilon(1e-12));
  CHECK(exact_shifted_exp(1.0, 3, 100.0).log_abs() == doctest::Approx(108.497194544909547).epsilon(1e-13));
  CHECK(exact_shifted_exp(1.0, 1, 2.0).to_double() == doctest::Approx(std::expm1(2.0)));
  // both sides of the series / alternating switch
  const struct {
    std::int64_t j;
    double t, want;
  } pts[] = {{5, 29.99, 40.28655043821412552},  {5, 30.01, 40.309299924351541561}, {20, 41.99, 73.282823476958594623},
             {20, 42.01, 73.312022846678640856}, {20, 29.99, 54.767693519193246842}, {20, 30.01, 54.800625289581017208},
             {3, 200.0, 209.89348772045779453},  {60, 61.0, 118.32698767125030102}};
  for (const auto& p : pts) {
    CAPTURE(p.j);
    CAPTURE(p.t);
    CHECK(exact_shifted_exp(1.0, p.j, p.t).log_abs() == doctest::Approx(p.want).epsilon(1e-13));
  }
}

TEST_CASE("oracle: Laguerre and power law references") {
  CHECK(laguerre_eval(50, 5000.0).log_abs() == doctest::Approx(277.877022325593619).epsilon(1e-13));
  CHECK(laguerre_eval(10, 3.5).log_abs() == doctest::Approx(8.36680308315813110).epsilon(1e-13));
  CHECK(laguerre_eval(200, 1.0).log_abs() == doctest::Approx(25.2389697256107432).epsilon(1e-13));
  CHECK(laguerre_eval(0, 7.0).to_double() == doctest::Approx(1.0));
  CHECK(laguerre_eval(1, 7.0).to_double() == doctest::Approx(8.0));
  CHECK(exact_power_law(2.0, 0.5, 3, 1.0).log_abs() == doctest::Approx(1.43241195830118110).epsilon(1e-13));
  CHECK(exact_affine(1.0, 1.0, 30, 12.0).log_abs() == laguerre_eval(30, 12.0).log_abs());
  // Affine(2, 3), j = 2: V*V(t) = b^2 + 2ab t + a^2 t^2 / 2
  CHECK(exact_affine(2.0, 3.0, 2, 1.5).to_double() == doctest::Approx(9 + 18 + 4.5));
}

TEST_CASE("oracle: atomic specs are exact on the grid") {
  const MeasureSpec coin = Lattice{1.0, 0.0, {1.0, 1.0}};
  const auto ov = grid_oracle(coin, 5, 2.0, 1.0);
  CHECK(ov.exact_on_grid);
  CHECK(ov.estimate.to_double() == doctest::Approx(16.0));
  CHECK(ov.lower.to_double() == doctest::Approx(16.0));
  const auto aff = grid_oracle(Affine{1.0, 1.0}, 2, 2.0, 1.0, 4.0);
  CHECK_FALSE(aff.exact_on_grid);
}

TEST_CASE("oracle: bracket encloses the exact value") {
  for (std::int64_t j : {1, 3, 6})
    for (double t : {0.7, 3.0}) {
      const auto ov = grid_oracle(PowerLaw{1.0, 1.5}, j, t, 1e-2);
      const double ex = exact_power_law(1.0, 1.5, j, t).log_abs();
      CHECK(ov.lower.log_abs() <= ex + 1e-12);
      CHECK(ov.upper.log_abs() >= ex);
      CHECK(std::abs(ov.estimate.log_abs() - ex) < 0.01);
    }
}

namespace {

GridMeasure random_grid(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GridAtom> atoms;
  for (std::int64_t k = 0; k < 40; ++k)
    if (u(rng) < 0.6) atoms.push_back({k, LogNumber::from_double(0.01 + 5 * u(rng))});
  if (atoms.empty()) atoms.push_back({0, LogNumber::one()});
  return GridMeasure(0.1, atoms);
}

}  // namespace

TEST_CASE("oracle: property, semigroup V^{*(m+n)} = V^{*m} * V^{*n}") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> jd(1, 6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto gm = random_grid(rng);
    const int m = jd(rng), n = jd(rng);
    const auto whole = convolve_power(gm, m + n, 0.0);
    const auto prod =
        convolve_masses(convolve_power(gm, m, 0.0).tilted_mass(), convolve_power(gm, n, 0.0).tilted_mass(), whole.horizon());
    REQUIRE(prod.size() == whole.tilted_mass().size());
    for (std::size_t k = 0; k < prod.size(); ++k) {
      if (prod[k].is_zero()) {
        CHECK(whole.tilted_mass()[k].is_zero());
        continue;
      }
      CHECK(std::abs(whole.tilted_mass()[k].log_abs() - prod[k].log_abs()) < 1e-10);
    }
  }
}

TEST_CASE("oracle: property, tilting does not change V^{*j}") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> kd(0.0, 8.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto gm = random_grid(rng);
    const auto plain = convolve_power(gm, 7, 0.0);
    const auto tilted = convolve_power(gm, 7, kd(rng));
    for (std::size_t k = 0; k < plain.cumulative().size(); ++k) {
      if (plain.cumulative()[k].is_zero()) continue;
      CHECK(std::abs(plain.cumulative()[k].log_abs() - tilted.cumulative()[k].log_abs()) < 1e-10);
    }
  }
}

TEST_CASE("oracle: property, lattice powers match binomial sums") {
  std::mt19937 rng(29);
  std::uniform_int_distribution<int> jd(1, 40);
  const auto gm = discretize(Lattice{1.0, 0.0, {1.0, 1.0}}, 1.0, 100.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int j = jd(rng);
    const auto tab = convolve_power(gm, j, 0.7);
    double acc = 0, c = 1;
    for (int k = 0; k <= std::min<int>(j, static_cast<int>(tab.horizon())); ++k) {
      acc += c;
      CHECK(tab.cumulative()[k].to_double() == doctest::Approx(acc).epsilon(1e-11));
      c = c * (j - k) / (k + 1);
    }
  }
}

TEST_CASE("oracle: horizon and csv") {
  const auto tab = convolve_power(discretize(Affine{1, 1}, 0.5, 5.0), 3, 0.0);
  CHECK(tab.horizon() == 10);
  CHECK_THROWS_AS(tab.value_at(6.0), HorizonTooSmall);
  std::ostringstream os;
  write_csv(tab, os);
  const std::string s = os.str();
  CHECK(s.rfind("# schema_version=1\ngrid_x,log_V_star_j\n", 0) == 0);
}

TEST_CASE("oracle: tilted moments of a grid law") {
  const auto tm = tilt_moments(Affine{1.0, 1.0}, 3, 4.0, 1e-3);
  CHECK(tm.mean == doctest::Approx(4.0).epsilon(5e-3));
  CHECK(tm.variance == doctest::Approx(tm.expected_variance).epsilon(1e-2));
}

TEST_CASE("oracle: thread count from the environment") {
  setenv("CONVPOW_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("CONVPOW_THREADS", "zero", 1);
  CHECK(thread_count() == 1);
  unsetenv("CONVPOW_THREADS");
  CHECK(thread_count() >= 1);
}
