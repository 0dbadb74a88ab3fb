#include <doctest.h>

#include <cmath>

#include "catqfi/qfi.hpp"

using namespace catqfi;

TEST_SUITE("loss") {

TEST_CASE("single-mode exact form") {
  const CatSpec spec(4, 1, 1.5);
  const auto pure = projector(cat_to_fock(spec));
  CHECK(trace_distance(lossy_cat_exact(spec, 1.0), pure) < 1e-12);

  const auto oracle = loss_channel(pure, 0.9, 0);
  CHECK(trace_distance(lossy_cat_exact(spec, 0.9), oracle) < 1e-10);

  const CatSpec coh(1, 0, cplx(0.7, 0.2));
  const auto c = coherent_vector(cplx(0.7, 0.2) * std::sqrt(0.6), 40);
  CHECK(fidelity(c, lossy_cat_exact(coh, 0.6)) > 1 - 1e-12);
}

TEST_CASE("weak-loss form") {
  const CatSpec spec(4, 1, 1.0);
  CHECK(trace_distance(lossy_cat_weak(spec, 1.0), projector(cat_to_fock(spec))) < 1e-12);
  CHECK(trace_distance(lossy_cat_weak(spec, 0.95), lossy_cat_exact(spec, 0.95)) <= 5e-3);
  CHECK_THROWS_AS(weak_loss_weights(CatSpec(4, 1, 2.0), 0.7), Error);

  // k-1 share at eta = 0.9, d = 8 as alpha grows
  double prev = 0;
  for (double a = 0.2; a < 3.1; a += 0.2) {
    const double f = weak_loss_weights(CatSpec(8, 1, a), 0.9).lowered_fraction();
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("two-mode forms") {
  const CatSpec spec(8, 0, 1.0);
  const auto lp = lossy_probe(spec, 0.9, 0.3);
  CHECK(trace_distance(lp.paper_form, lp.oracle_form) < 1e-9);
  CHECK(std::abs(lp.paper_form.trace() - 1.0) < 1e-10);
  CHECK(std::abs(lp.oracle_form.trace() - 1.0) < 1e-10);
  REQUIRE(lp.weak_available);
  CHECK(std::abs(lp.weak_form.trace() - 1.0) < 1e-10);

  const auto w = lossy_probe(CatSpec(4, 1, 1.0), 0.95, 0.0);
  CHECK(trace_distance(w.weak_form, w.oracle_form) < 5e-3);

  // eta = 1: the phase-shifted pure probe
  const auto p = build_probe(spec);
  const auto l1 = lossy_probe(spec, 1.0, 0.4);
  CHECK(fidelity(apply_phase_shift(p.vec, 0.4, 1), l1.oracle_form) > 1 - 1e-12);
  CHECK(fidelity(apply_phase_shift(p.vec, 0.4, 1), l1.paper_form) > 1 - 1e-12);
}

TEST_CASE("closed-form spectrum") {
  const auto s1 = paper_spectrum(CatSpec(8, 1, 1.0), 1.0, 0.2, 30);
  CHECK(std::abs(s1.lambda[0] - 1.0) < 1e-10);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(s1.lambda[i]) < 1e-10);

  const auto s2 = paper_spectrum(CatSpec(8, 1, 1.2), 0.9, 0.0, 30);
  CHECK(std::abs(s2.lambda[0] + s2.lambda[1] + s2.lambda[2] + s2.lambda[3] - 1.0) < 1e-12);

  const CatSpec spec(8, 2, 1.0);
  const auto s3 = paper_spectrum(spec, 0.9, 0.3, 30);
  CHECK(s3.orthogonality_residue < 1e-10);
  CHECK(trace_distance(reconstruct(s3), lossy_probe_paper_weak(spec, 0.9, 0.3, 30)) < 1e-6);
}

TEST_CASE("second closed-form eigenvalue is negative under loss") {
  // Its coefficient (1 - x - e^{-x})/2 is below zero for every x > 0.
  const auto s = paper_spectrum(CatSpec(8, 1, 1.0), 0.9, 0.0, 30);
  CHECK(s.lambda[1] == doctest::Approx(-2.39e-3).epsilon(1e-2));
  CHECK(s.min_lambda < 0);
}

TEST_CASE("transmission validation") {
  CHECK_THROWS_AS(require_transmission(0.0), Error);
  CHECK_THROWS_AS(require_transmission(1.5), Error);
  CHECK_THROWS_AS(require_transmission(std::nan("")), Error);
  CHECK_NOTHROW(require_transmission(1.0));
}

}
