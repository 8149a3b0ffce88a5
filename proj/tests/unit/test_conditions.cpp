#include <doctest.h>

#include <cmath>

#include "convpow/conditions.hpp"
#include "convpow/errors.hpp"

using namespace convpow;

TEST_CASE("conditions: Laguerre case I rates tend to one") {
  const auto far = laguerre_case1_rates(10000, 1e7);
  const auto near = laguerre_case1_rates(100, 1e3);
  CHECK(std::abs(far.Tj_ratio - 1) < std::abs(near.Tj_ratio - 1));
  CHECK(far.a_j_ratio == doctest::Approx(1.0).epsilon(0.02));
  CHECK(far.kappa_a_ratio == doctest::Approx(1.0).epsilon(0.02));
  CHECK(far.Tj_ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("conditions: regimes") {
  const auto c1 = check_conditions(Affine{1, 1}, 100, 1e4, 1.0);
  CHECK(c1.Tj_over_aj > 0);
  // at gamma = 1 the scan starts where the modulus is still ~0.98; start further out
  const auto c2 = check_conditions(Affine{1, 1}, 500, 1000.0, 5.0);
  CHECK(c2.regime == Regime::B_ok);
  CHECK(check_conditions(Affine{1, 1}, 500, 1000.0, 1.0).regime == Regime::suspect);
  const auto c3 = check_conditions(Affine{1, 1}, 10000, 100.0, 1.0);
  CHECK(c3.regime == Regime::suspect);
  const auto lat = check_conditions(Lattice{1.0, 0.0, {1, 1}}, 100, 40.0, 1.0);
  CHECK(lat.arithmetic);
  CHECK(lat.regime == Regime::suspect);
}

TEST_CASE("conditions: scan reads the modulus ratio at z / T_j") {
  const auto r = check_conditions(PowerLaw{1.0, 2.0}, 10, 10.0, 1.0);
  // PowerLaw: kappa T_j = 2 alpha^2 + 3 alpha + 2, so the first point is (1 + (1/16)^2)^{-1}
  CHECK(r.kappa == doctest::Approx(2.0));
  CHECK(r.first_scan_value == doctest::Approx(1.0 / (1.0 + 1.0 / 256.0)).epsilon(1e-9));
  CHECK(r.nonlattice_sup >= r.first_scan_value);
}

TEST_CASE("conditions: json carries the schema version") {
  const auto j = to_json(check_conditions(ShiftedExp{1.0}, 50, 500.0, 1.0));
  CHECK(j.at("schema_version") == 1);
  CHECK(j.contains("regime"));
  CHECK(to_string(Regime::A_ok) == "A_ok");
}
