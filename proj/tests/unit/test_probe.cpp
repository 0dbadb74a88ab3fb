#include <doctest.h>

#include <cmath>
#include <numeric>

#include "catqfi/baselines.hpp"
#include "catqfi/genscheme.hpp"

using namespace catqfi;

namespace {
double nb(FockIndex s) { return s.b; }
double nb2(FockIndex s) { return double(s.b) * s.b; }
}  // namespace

TEST_SUITE("probe") {

TEST_CASE("normalization constant") {
  CHECK(probe_norm(CatSpec(2, 1, 1.0)) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (int d : {2, 4, 8}) {
    const CatSpec spec(d, 0, 0.9);
    const double v = vacuum_overlap_sq(spec);
    CHECK(probe_norm(spec) == doctest::Approx(1.0 / std::sqrt(2.0 * (1.0 + v))).epsilon(1e-14));
    CHECK(std::abs(build_probe(spec).vec.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("small amplitude approaches the NOON state") {
  for (int k : {1, 2, 3}) {
    const auto p = build_probe(CatSpec(8, k, 1e-3));
    const auto noon = noon_vector(k);
    CHECK(fidelity(p.vec, noon) > 1 - 1e-5);
  }
}

TEST_CASE("d = 1 is the entangled coherent state") {
  const CatSpec spec(1, 0, 1.0);
  const auto p = build_probe(spec);
  const auto ec = entangled_coherent(1.0, p.vec.n_max());
  CHECK(fidelity(p.vec, ec) > 1 - 1e-12);
  CHECK(std::abs(p.n_av - expectation(ec, nb)) < 1e-12);
  const double n2 = 0.5 / (1.0 + std::exp(-1.0));
  CHECK(std::abs(probe_moments(spec).mean_nb - n2) < 1e-12);
}

TEST_CASE("double-sum moments agree with the Fock probe") {
  const CatSpec spec(2, 0, 1.0);
  const auto m = probe_moments(spec);
  const auto p = build_probe(spec);
  CHECK(std::abs(m.mean_nb - expectation(p.vec, nb)) < 1e-10 * m.mean_nb);
  CHECK(std::abs(m.mean_nb2 - expectation(p.vec, nb2)) < 1e-10 * m.mean_nb2);
  CHECK(m.imag_residue < 1e-20);
  CHECK(probe_moments(CatSpec(8, 3, 1e-3)).mean_nb == doctest::Approx(1.5).epsilon(1e-5));
}

TEST_CASE("swap symmetry") {
  const auto p = build_probe(CatSpec(4, 1, 1.4));
  CHECK((swap_modes(p.vec).amps - p.vec.amps).norm() < 1e-15);
}

TEST_CASE("phase-averaged mixture") {
  const auto pa1 = phase_averaged(CatSpec(1, 0, 1.0));
  for (std::size_t i = 0; i < pa1.photons.size() && i < 10; ++i) {
    const int n = pa1.photons[i];
    CHECK(pa1.weights[i] == doctest::Approx(std::exp(-1.0) / std::tgamma(n + 1.0)).epsilon(1e-12));
  }

  const auto pa2 = phase_averaged(CatSpec(2, 0, 1.0));
  REQUIRE(pa2.photons.size() > 2);
  CHECK(pa2.photons[0] == 0);
  CHECK(pa2.photons[1] == 2);
  CHECK(pa2.weights[0] / pa2.weights[1] == doctest::Approx(2.0).epsilon(1e-13));

  const auto pa3 = phase_averaged(CatSpec(8, 3, 2.0));
  CHECK(std::accumulate(pa3.weights.begin(), pa3.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto mw = pa3.mixture_weights();
  CHECK(std::accumulate(mw.begin(), mw.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));

  // The mixture is the dephased probe: same diagonal as the pure state.
  const CatSpec spec(4, 0, 1.2);
  const auto rho = phase_averaged(spec).density();
  const auto p = build_probe(spec, rho.n_max());
  CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
  CHECK(std::abs(expectation(rho, nb) - expectation(p.vec, nb)) < 1e-10);
  CHECK(std::abs(expectation(rho, nb2) - expectation(p.vec, nb2)) < 1e-10);
}

}
