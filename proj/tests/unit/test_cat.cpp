#include <doctest.h>

#include <cmath>
#include <numbers>

#include "catqfi/cat.hpp"

using namespace catqfi;

TEST_SUITE("cat") {

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(CatSpec(0, 0, 1.0), Error);
  CHECK_THROWS_AS(CatSpec(4, 4, 1.0), Error);
  CHECK_THROWS_AS(CatSpec(4, -1, 1.0), Error);
  try {
    CatSpec(4, 1, 0.0);
    FAIL("alpha = 0 with k != 0 must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
  CHECK_NOTHROW(CatSpec(4, 0, 0.0));
}

TEST_CASE("normalization M") {
  for (double a : {0.3, 1.0, 2.5}) CHECK(std::abs(norm_M(CatSpec(1, 0, a)) - 1.0) < 1e-14);
  for (int d : {2, 4, 8}) CHECK(std::abs(norm_M(CatSpec(d, 0, 0.0)) - d * d) < 1e-12);
  CHECK(std::abs(norm_M(CatSpec(2, 0, 1.0)) - 2.0 * (1.0 + std::exp(-2.0))) < 1e-12);
  CHECK(std::abs(norm_M_double_sum(CatSpec(2, 0, 1.0)) - 2.270670566473225) < 1e-12);
  // sum_k M_k = d^2
  for (int d : {3, 8}) {
    double s = 0;
    for (int k = 0; k < d; ++k) s += norm_M(CatSpec(d, k, 1.3));
    CHECK(std::abs(s - d * d) < 1e-11);
  }
}

TEST_CASE("moments of the two-component cats") {
  const auto c = cat_moments(CatSpec(1, 0, 1.0));
  CHECK(std::abs(c.g2 - 1.0) < 1e-13);

  const auto even = cat_moments(CatSpec(2, 0, 1.0));
  CHECK(std::abs(even.mean_n - std::tanh(1.0)) < 1e-12);
  CHECK(std::abs(even.g2 - std::pow(1.0 / std::tanh(1.0), 2)) < 1e-12);

  const auto odd = cat_moments(CatSpec(2, 1, 1.0));
  CHECK(std::abs(odd.mean_n - 1.0 / std::tanh(1.0)) < 1e-12);
  CHECK(std::abs(odd.g2 - std::pow(std::tanh(1.0), 2)) < 1e-12);
  CHECK(odd.mandel_q < 0);
  CHECK(even.mandel_q > 0);
}

TEST_CASE("moments agree with the Fock realization") {
  for (int d : {3, 8, 16}) {
    for (int k : {0, 2}) {
      const CatSpec spec(d, k, 1.7);
      const auto v = cat_to_fock(spec);
      const double n1 = expectation(v, [](FockIndex s) { return double(s.a); });
      const double n2 = expectation(v, [](FockIndex s) { return double(s.a) * s.a; });
      const auto m = cat_moments(spec);
      CHECK(std::abs(m.mean_n - n1) <= 1e-12 * n1);
      CHECK(std::abs(m.mean_n2 - n2) <= 1e-12 * n2);
    }
  }
}

TEST_CASE("number-state fidelity") {
  for (double a : {0.2, 1.0, 2.0}) CHECK(std::abs(fidelity_to_number_state(CatSpec(1, 0, a)) - std::exp(-a * a)) < 1e-14);
  CHECK(fidelity_to_number_state(CatSpec(4, 0, 1e-4)) > 1 - 1e-8);

  const CatSpec spec(16, 2, 1.0);
  const auto v = cat_from_coherent_sum(spec, required_n_max(1.0));
  CHECK(std::abs(fidelity_to_number_state(spec) - std::norm(v.amps[2])) < 1e-12);
}

TEST_CASE("sectors are orthonormal and sparse") {
  const int n = required_n_max(2.25);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) {
      const cplx o = cat_to_fock(CatSpec(4, k, 1.5), n).amps.dot(cat_to_fock(CatSpec(4, j, 1.5), n).amps);
      CHECK(std::abs(o - (k == j ? 1.0 : 0.0)) < 1e-12);
    }
  const auto even = cat_to_fock(CatSpec(2, 0, 1.0));
  for (int i = 1; i <= even.n_max(); i += 2) CHECK(std::abs(even.amps[i]) == 0.0);
}

TEST_CASE("closed-form amplitudes match the coherent superposition") {
  for (int d : {2, 5, 8}) {
    const CatSpec spec(d, 1, cplx(1.1, 0.6));
    const int n = required_n_max(spec.x());
    CHECK(fidelity(cat_to_fock(spec, n), cat_from_coherent_sum(spec, n)) > 1 - 1e-12);
  }
}

TEST_CASE("coherent states rebuilt from the sectors") {
  // |alpha omega^q> = sum_k omega^{kq} sqrt(M_k)/d |C_k>
  const int d = 6, q = 2;
  const cplx alpha(0.8, 0.3);
  const int n = required_n_max(std::norm(alpha));
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(n + 1);
  for (int k = 0; k < d; ++k) {
    const CatSpec spec(d, k, alpha);
    sum += std::polar(1.0, 2 * std::numbers::pi * k * q / d) * std::sqrt(norm_M(spec)) / double(d) * cat_to_fock(spec, n).amps;
  }
  const auto target = coherent_vector(alpha * std::polar(1.0, 2 * std::numbers::pi * q / d), n);
  CHECK(std::norm(target.amps.dot(sum)) > 1 - 1e-12);
}

TEST_CASE("truncation is refused when the sector tail is too heavy") {
  CHECK_THROWS_AS(cat_to_fock(CatSpec(2, 0, 3.0), 10), Error);
}

}
