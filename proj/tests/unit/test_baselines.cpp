#include <doctest.h>

#include <cmath>

#include "catqfi/baselines.hpp"

using namespace catqfi;

TEST_SUITE("baselines") {

TEST_CASE("NOON") {
  for (int k = 1; k <= 6; ++k) CHECK(noon_qfi(k, 1.0).f_q == double(k * k));
  const double f = noon_qfi(4, 0.9).f_q;
  CHECK(f < 16.0);
  CHECK(f == doctest::Approx(16.0 * std::pow(0.9, 4)).epsilon(1e-9));
  CHECK_THROWS_AS(noon_qfi(0, 1.0), Error);
}

TEST_CASE("TMSV") {
  const double r1 = tmsv_r_for_nav(1.0);
  CHECK(tmsv_nav(r1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tmsv_qfi(r1, 1.0).f_q == doctest::Approx(8.0).epsilon(1e-10));
  CHECK(tmsv_qfi(tmsv_r_for_nav(4.0), 1.0).f_q == doctest::Approx(80.0).epsilon(1e-10));
  CHECK(tmsv_qfi(1e-4, 1.0).f_q < 1e-6);
  const double lossy = tmsv_qfi(r1, 0.9).f_q;
  CHECK(lossy < 8.0);
  CHECK(lossy > 0.9);
  CHECK(tmsv_n_max(r1, 0.9) == 40);
  CHECK_THROWS_AS(tmsv_n_max(std::asinh(std::sqrt(12.0)), 0.9), Error);
}

TEST_CASE("SQL") {
  CHECK(sql_bound(1.0) == 1.0);
  CHECK(sql_bound(4.0) == 0.5);
  CHECK(sql_bound(2.0) == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK_THROWS_AS(sql_bound(0.0), Error);
}

TEST_CASE("names") {
  CHECK(baseline_from_string("tmsv") == BaselineKind::tmsv);
  CHECK(std::string(to_string(BaselineKind::noon)) == "noon");
  CHECK_THROWS_AS(baseline_from_string("coherent"), Error);
}

}
