#pragma once

// Conditional preparation of N (|C_{d,k}>|0> + |0>|C_{d,k}>): a 50:50 coupler
// turns a two-component cat and a coherent state into |alpha>|0> + |0>|alpha>,
// then each arm meets a cross-phase modulator e^{2 pi i n1 n2/d} with an
// ancilla |beta> whose heterodyne phase sector heralds k.

#include <cstdint>
#include <string>
#include <vector>

#include "catqfi/cat.hpp"

namespace catqfi {

// (|alpha/sqrt2> + |-alpha/sqrt2>) x |alpha/sqrt2> -> coupler -> pi shift on
// mode 2, normalized. Cutoff from the truncation rule at |alpha|.
FockVector bs_stage(cplx alpha);

// Normalized |alpha>|0> + |0>|alpha> at the given cutoff.
FockVector entangled_coherent(cplx alpha, int n_max);

struct CpmResult {
  FockVector state;  // mode 0: signal, mode 1: ancilla
  std::vector<std::string> warnings;
};

// e^{2 pi i n1 n2/d} |alpha>|beta>; cutoff max(rule(|alpha|), rule(beta)).
CpmResult cpm_stage(cplx alpha, double beta, int d);

// <C_{d,k}(alpha)| <beta omega^k| state> for k = 0..d-1.
std::vector<cplx> branch_overlaps(const FockVector& state, cplx alpha, double beta, int d);

// Heterodyne POVM element for the phase sector centred on 2 pi k/d.
Eigen::MatrixXcd sector_povm(int d, int k, int n_max);

// sum_{j != k} e^{-|beta (omega^j - omega^k)|^2 / 2}
double leakage_bound(double beta, int d, int k);

inline constexpr double kLeakageFlag = 1e-3;

// Outcome indices drawn with the given probabilities. Shot i uses its own
// generator seeded from (seed, i), so counts do not depend on evaluation
// order.
std::vector<long> sample_counts(const std::vector<double>& probabilities, long shots, std::uint64_t seed);

// |count - shots p| <= 3 sqrt(shots p (1 - p)) for every outcome.
bool within_three_sigma(const std::vector<long>& counts, const std::vector<double>& probabilities, long shots);

struct GenOutcome {
  int k1 = 0;  // heralded sector, arm 1 (single-arm reports use k1 only)
  int k2 = 0;  // arm 2
  int target_k = 0;
  double probability = 0;
  double predicted = 0;  // M_{d,k}(alpha)/d^2 for single-arm conditioning
  double conditional_fidelity = 0;  // NaN when probability < 1e-12
  double leakage = 0;
  bool leakage_flagged = false;
  long count = 0;
};

struct HeterodyneReport {
  std::vector<GenOutcome> outcomes;
  double probability_sum = 0;
  bool frequencies_ok = false;
};

// Single arm: conditions the signal of a cpm_stage state on the ancilla sector.
HeterodyneReport heterodyne_condition(const FockVector& state, cplx alpha, double beta, int d,
                                      long shots, std::uint64_t seed);

struct GenConfig {
  int d = 2;
  cplx alpha = 1.0;
  double beta = 0;  // 0 selects the default 1.5 d
  long shots = 10000;
  std::uint64_t seed = 0;

  double resolved_beta() const { return beta > 0.0 ? beta : 1.5 * d; }
  void validate() const;
};

struct EndToEndReport {
  GenConfig config;
  double beta = 0;
  double bs_fidelity = 0;  // coupler output vs |alpha>|0> + |0>|alpha>
  std::vector<GenOutcome> outcomes;  // all (k1, k2), row-major in k1
  double probability_sum = 0;
  bool frequencies_ok = false;
  std::vector<std::string> warnings;
};

// Both arms of the coupler output go through their own modulator and
// ancilla. Outcome (k1, k2) is compared with the entangled cat of sector
// k2 when k1 = 0 and of sector k1 otherwise.
EndToEndReport end_to_end(const GenConfig& cfg);

}  // namespace catqfi
