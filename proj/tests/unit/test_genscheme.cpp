#include <doctest.h>

#include <cmath>
#include <numeric>

#include "catqfi/genscheme.hpp"

using namespace catqfi;

TEST_SUITE("genscheme") {

TEST_CASE("coupler stage") {
  for (double a : {1.0, 2.0}) {
    const auto psi = bs_stage(a);
    CHECK(fidelity(psi, entangled_coherent(a, psi.n_max())) > 1 - 1e-10);
  }
  const auto vac = bs_stage(0.0);
  CHECK(std::norm(vac.amp({0, 0})) > 1 - 1e-14);
  CHECK(bs_stage(2.0).n_max() > bs_stage(1.0).n_max());
}

TEST_CASE("modulator branches") {
  const int d = 4;
  const auto cpm = cpm_stage(1.0, 6.0, d);
  CHECK(cpm.warnings.empty());
  const auto b = branch_overlaps(cpm.state, 1.0, 6.0, d);
  double total = 0;
  for (int k = 0; k < d; ++k) {
    const double m = norm_M(CatSpec(d, k, 1.0));
    CHECK(std::abs(b[k] - std::sqrt(m) / d) < 1e-10);
    total += std::norm(b[k]);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(cpm_stage(1.0, 3.0, 4).warnings.empty());
  // Neighbouring ancilla branches at d = 2, beta = 4: |<beta|-beta>| = e^{-2 beta^2}
  CHECK(leakage_bound(4.0, 2, 0) == doctest::Approx(std::exp(-32.0)).epsilon(1e-12));
}

TEST_CASE("sector POVM resolves the identity") {
  const int n = 30;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  for (int k = 0; k < 5; ++k) sum += sector_povm(5, k, n);
  CHECK((sum - Eigen::MatrixXcd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("heterodyne conditioning") {
  const int d = 4;
  const auto cpm = cpm_stage(1.0, 6.0, d);
  const auto rep = heterodyne_condition(cpm.state, 1.0, 6.0, d, 10000, 7);
  CHECK(rep.probability_sum == doctest::Approx(1.0).epsilon(1e-9));
  long shots = 0;
  for (const auto& o : rep.outcomes) {
    CHECK(std::abs(o.probability - norm_M(CatSpec(d, o.k1, 1.0)) / 16.0) < 1e-6);
    CHECK(o.conditional_fidelity > 0.999);
    CHECK_FALSE(o.leakage_flagged);
    shots += o.count;
  }
  CHECK(shots == 10000);
  CHECK(rep.frequencies_ok);
  const auto again = heterodyne_condition(cpm.state, 1.0, 6.0, d, 10000, 7);
  for (int k = 0; k < d; ++k) CHECK(again.outcomes[k].count == rep.outcomes[k].count);
  CHECK_THROWS_AS(heterodyne_condition(cpm.state, 1.0, 6.0, d, 0, 7), Error);
}

TEST_CASE("sampling is per shot") {
  const std::vector<double> p = {0.2, 0.5, 0.3};
  const auto a = sample_counts(p, 5000, 11);
  const auto b = sample_counts(p, 5000, 11);
  CHECK(a == b);
  CHECK(std::accumulate(a.begin(), a.end(), 0L) == 5000);
  CHECK(within_three_sigma(a, p, 5000));
  CHECK(sample_counts(p, 5000, 12) != a);
}

TEST_CASE("both arms") {
  GenConfig cfg;
  cfg.d = 2;
  cfg.alpha = 1.0;
  cfg.beta = 4.0;
  cfg.seed = 7;
  const auto rep = end_to_end(cfg);
  REQUIRE(rep.outcomes.size() == 4);
  CHECK(rep.probability_sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.bs_fidelity > 1 - 1e-10);
  CHECK(rep.frequencies_ok);
  // (0,0): both arms even, the entangled even cat.
  CHECK(rep.outcomes[0].conditional_fidelity > 0.99);
  // (1,0): arm 1 held the cat and arm 2 the vacuum, a product state with
  // fidelity 1/2 to the entangled odd cat.
  CHECK(rep.outcomes[2].conditional_fidelity == doctest::Approx(0.5).epsilon(1e-6));
  // (1,1) needs both arms to hold photons and only happens through leakage.
  CHECK(rep.outcomes[3].probability < 1e-8);

  GenConfig bad = cfg;
  bad.shots = 0;
  CHECK_THROWS_AS(end_to_end(bad), Error);
}

TEST_CASE("vacuum arm keeps its ancilla") {
  const int n = required_n_max(16.0);
  const auto in = tensor(number_state(0, n), coherent_vector(4.0, n));
  CHECK(fidelity(cross_kerr_unitary(in, 3), in) > 1 - 1e-14);
}

}
