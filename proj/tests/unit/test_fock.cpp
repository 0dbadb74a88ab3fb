#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "catqfi/loss.hpp"

using namespace catqfi;

TEST_SUITE("fock") {

TEST_CASE("coherent amplitudes") {
  const auto vac = coherent_vector(0.0, 10);
  CHECK(std::abs(vac.amps[0] - 1.0) < 1e-15);
  CHECK(vac.amps.tail(10).norm() == 0.0);

  const auto c = coherent_vector(1.0, 40);
  CHECK(std::abs(c.amps[0].real() - 0.6065306597126334) < 1e-15);
  CHECK(std::abs(c.amps[1].real() - 0.6065306597126334) < 1e-15);
  CHECK(std::abs(c.norm() - 1.0) < 1e-12);

  const auto i2 = coherent_vector(cplx(0, 2), 60);
  CHECK(std::abs(expectation(i2, [](FockIndex s) { return double(s.a); }) - 4.0) < 1e-12);
}

TEST_CASE("cutoff rule keeps the tail small and refuses oversized states") {
  for (double x : {0.01, 1.0, 9.0, 50.0}) CHECK(poisson_tail(x, required_n_max(x)) < kTailTolerance);
  CHECK_THROWS_AS(required_n_max(400.0), Error);
  CHECK_THROWS_AS(coherent_vector(3.0, 5), Error);
}

TEST_CASE("phase shift rotates coherent states") {
  const auto a = coherent_vector(1.2, 50);
  CHECK((apply_phase_shift(a, 0.0, 0).amps - a.amps).norm() < 1e-15);
  CHECK(fidelity(apply_phase_shift(a, 0.7, 0), coherent_vector(std::polar(1.2, 0.7), 50)) > 1 - 1e-12);
  CHECK(fidelity(apply_phase_shift(a, std::numbers::pi, 0), coherent_vector(-1.2, 50)) > 1 - 1e-12);
}

TEST_CASE("beamsplitter") {
  const int n = 40;
  const double s = 1.0 / std::numbers::sqrt2;
  const auto vac = tensor(coherent_vector(0.0, n), coherent_vector(0.0, n));
  CHECK(fidelity(beamsplitter_50_50(vac), vac) > 1 - 1e-14);

  // Coherent pairs map to ((a1 + a2)/sqrt2, (a1 - a2)/sqrt2).
  const auto in = tensor(coherent_vector(1.0, n), coherent_vector(0.5, n));
  const auto out = beamsplitter_50_50(in);
  CHECK(fidelity(out, tensor(coherent_vector(1.5 * s, n), coherent_vector(0.5 * s, n))) > 1 - 1e-12);
  // Applying it twice gives back the input.
  CHECK(fidelity(beamsplitter_50_50(out), in) > 1 - 1e-12);
  CHECK(std::abs(out.norm() - 1.0) < 1e-12);
}

TEST_CASE("cross-Kerr phase") {
  const auto v = number_state({1, 1}, 3);
  const auto w = cross_kerr_unitary(v, 2);
  CHECK(std::abs(w.amp({1, 1}) + 1.0) < 1e-15);

  const auto zero_sector = tensor(number_state(0, 40), coherent_vector(1.0, 40));
  for (int d : {2, 3, 5}) CHECK((cross_kerr_unitary(zero_sector, d).amps - zero_sector.amps).norm() < 1e-15);
}

TEST_CASE("loss channel") {
  const auto a = coherent_vector(cplx(1.0, 0.4), 40);
  const auto rho = projector(a);
  const auto same = loss_channel(rho, 1.0, 0);
  CHECK((same.entries - rho.entries).cwiseAbs().maxCoeff() < 1e-14);

  const auto out = loss_channel(rho, 0.8, 0);
  CHECK(fidelity(coherent_vector(cplx(1.0, 0.4) * std::sqrt(0.8), 40), out) > 1 - 1e-10);
  CHECK(std::abs(out.trace() - 1.0) < 1e-12);
  CHECK_THROWS_AS(loss_channel(rho, 0.0, 0), Error);
  CHECK_THROWS_AS(loss_channel(rho, 1.1, 0), Error);
}

TEST_CASE("Kraus loss on an even cat matches the closed double sum") {
  const CatSpec spec(2, 0, 1.0);
  const auto rho = loss_channel(projector(cat_to_fock(spec)), 0.9, 0);
  const auto exact = lossy_cat_exact(spec, 0.9);
  CHECK(trace_distance(rho, exact) < 1e-10);
}

TEST_CASE("hermitian eigendecomposition") {
  const auto basis = FockBasis::full(1, 4);
  FockMatrix id{basis, Eigen::MatrixXcd::Identity(5, 5)};
  const auto e1 = hermitian_eig(id);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(e1.eigenvalues[i] - 1.0) < 1e-15);

  FockMatrix x{FockBasis::full(1, 1), Eigen::MatrixXcd::Zero(2, 2)};
  x.entries(0, 1) = x.entries(1, 0) = 1.0;
  const auto e2 = hermitian_eig(x);
  CHECK(std::abs(e2.eigenvalues[0] - 1.0) < 1e-15);
  CHECK(std::abs(e2.eigenvalues[1] + 1.0) < 1e-15);

  std::mt19937_64 gen(3);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) m(i, j) = cplx(g(gen), g(gen));
  m = (m + m.adjoint()).eval();
  const auto e3 = hermitian_eig({FockBasis::full(1, 19), m});
  CHECK((e3.reconstruct() - m).cwiseAbs().maxCoeff() < 1e-9);
  for (int i = 1; i < 20; ++i) CHECK(e3.eigenvalues[i - 1] >= e3.eigenvalues[i]);

  Eigen::MatrixXcd bad = m;
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(hermitian_eig({FockBasis::full(1, 19), bad}), Error);
}

TEST_CASE("fidelity, trace distance, partial trace") {
  const auto a = coherent_vector(0.9, 40);
  const auto vac = coherent_vector(0.0, 40);
  CHECK(std::abs(fidelity(a, a) - 1.0) < 1e-14);
  CHECK(std::abs(fidelity(vac, a) - std::exp(-0.81)) < 1e-14);
  // The mixed-state route goes through a matrix square root of a rank-one
  // projector and loses about half the digits.
  CHECK(std::abs(fidelity(projector(a), projector(vac)) - std::exp(-0.81)) < 1e-8);
  CHECK(trace_distance(projector(a), projector(a)) < 1e-12);
  CHECK(std::abs(trace_distance(projector(a), projector(vac)) - std::sqrt(1 - std::exp(-0.81))) < 1e-9);

  const auto basis = FockBasis::full(2, 30);
  const auto c = coherent_vector(1.0, 30);
  FockVector ec{basis, place_in_mode(c, 0, basis).amps + place_in_mode(c, 1, basis).amps};
  const auto reduced = partial_trace(projector(ec.normalized()), 0);
  CHECK(std::abs(reduced.trace() - 1.0) < 1e-12);
}

TEST_CASE("operations across different bases embed into the union") {
  const auto small = coherent_vector(0.3, 20);
  const auto big = coherent_vector(0.3, 40);
  CHECK(std::abs(fidelity(small, big) - 1.0) < 1e-12);
}

}
