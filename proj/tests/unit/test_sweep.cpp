#include <doctest.h>

#include <cmath>

#include "catqfi/sweep.hpp"

using namespace catqfi;

TEST_SUITE("sweep") {

TEST_CASE("energy inversion") {
  // Eight components keep the energy near zero up to alpha ~ 1: the first
  // occupied level above vacuum is n = 8.
  const double a0 = alpha_for_nav(8, 0, 1e-6);
  CHECK(a0 < 1.0);
  CHECK(std::abs(nav_of_alpha(8, 0, a0) - 1e-6) < kNavTolerance);
  for (double t : {0.1, 0.7, 2.0}) {
    const double a = alpha_for_nav(1, 0, t);
    const double n2 = 1.0 / (2.0 * (1.0 + std::exp(-a * a)));
    CHECK(std::abs(n2 * a * a - t) < 1e-9);
  }
  CHECK(std::abs(nav_of_alpha(8, 2, alpha_for_nav(8, 2, 1.2)) - 1.2) < kNavTolerance);
  CHECK(alpha_for_nav(8, 0, 1.0) == doctest::Approx(1.891629372).epsilon(1e-8));
  try {
    alpha_for_nav(8, 2, 1.0);
    FAIL("N_av = k/2 is unreachable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  CHECK_THROWS_AS(alpha_for_nav(8, 0, 1e6), Error);
}

TEST_CASE("request validation") {
  CurveRequest r;
  r.d_list = {8};
  CHECK_THROWS_AS(r.validate(), Error);  // empty k list
  r.k_list = {0};
  CHECK_NOTHROW(r.validate());
  r.eta = 0;
  CHECK_THROWS_AS(r.validate(), Error);
  r.eta = 1;
  r.points = 1;
  CHECK_THROWS_AS(r.validate(), Error);
}

TEST_CASE("lossless curve") {
  CurveRequest r;
  r.d_list = {8};
  r.k_list = {0, 1, 2, 3};
  r.points = 40;
  r.baselines = {BaselineKind::noon};
  const auto rows = trace_curve(r);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK_FALSE(row_less(rows[i], rows[i - 1]));
  int unreachable = 0;
  for (const auto& row : rows) {
    if (row.d == 0) {
      CHECK(row.method == "noon");
      CHECK(row.f_q == double(row.k * row.k));
      continue;
    }
    if (!row.ok()) {
      CHECK(row.method == "domain_error");
      CHECK(std::isnan(row.f_q));
      CHECK(row.n_av <= 0.5 * row.k);
      ++unreachable;
      continue;
    }
    CHECK(row.method == "pure_eq5");
    CHECK(row.f_q >= row.k * row.k);
    CHECK(std::abs(nav_of_alpha(8, row.k, row.alpha) - row.n_av) < kNavTolerance);
  }
  CHECK(unreachable > 0);
}

TEST_CASE("more components help on most of the k = 0 curve") {
  CurveRequest r;
  r.d_list = {2, 4, 8, 16};
  r.k_list = {0};
  r.points = 40;
  const auto rows = trace_curve(r);
  int better = 0, total = 0;
  for (std::size_t i = 0; i + r.points < rows.size(); ++i) {
    ++total;
    better += rows[i + r.points].f_q > rows[i].f_q;
  }
  CHECK(better > total / 2);
}

TEST_CASE("crossovers") {
  CurveRequest r;
  r.d_list = {8};
  r.k_list = {0, 1};
  r.eta = 0.9;
  r.points = 40;
  const auto lossy = trace_curve(r);
  const auto c = find_crossover(lossy, 0, 1);
  REQUIRE(c.has_value());
  CHECK(std::abs(*c - 1.503859) < 1e-4);
  CHECK_FALSE(find_crossover(lossy, 0, 0).has_value());

  // Without loss k = 1 still overtakes k = 0 at d = 8, near N_av = 2.25.
  r.eta = 1.0;
  const auto c0 = find_crossover(trace_curve(r), 0, 1);
  REQUIRE(c0.has_value());
  CHECK(*c0 > 2.2);
  CHECK(*c0 < 2.3);
}

TEST_CASE("optimal probe") {
  const auto p = optimal_probe(1.0, 1.0, 8, 3);
  CHECK(p.k == 0);
  CHECK(p.f_q == doctest::Approx(qfi_pure(CatSpec(p.d, p.k, p.alpha)).f_q).epsilon(1e-12));
  CHECK(optimal_probe(0.4, 0.9, 8, 3).k == 0);
  CHECK(optimal_probe(3.0, 0.9, 8, 3).k != 0);
  CHECK_THROWS_AS(optimal_probe(1.0, 1.0, 17, 3), Error);
}

}
