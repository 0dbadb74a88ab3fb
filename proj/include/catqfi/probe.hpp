#pragma once

// Path-symmetric probe N (|C>|0> + |0>|C>) and its phase-averaged mixture.

#include <vector>

#include "catqfi/cat.hpp"

namespace catqfi {

// [2 (1 + |<0|C>|^2)]^{-1/2}
double probe_norm(const CatSpec& spec);

// N_av = <n_b> = N^2 <n>_C from the sector sums.
double probe_nav(const CatSpec& spec);

struct ProbeState {
  CatSpec spec;
  double norm_N;
  double n_av;
  FockVector vec;  // two-mode, on the axes basis
};

ProbeState build_probe(const CatSpec& spec);
ProbeState build_probe(const CatSpec& spec, int n_max);

// Exchanges the two modes of a two-mode vector.
FockVector swap_modes(const FockVector& v);

struct ProbeMoments {
  double mean_nb = 0;
  double mean_nb2 = 0;
  double imag_residue = 0;  // largest |Im| of the two double sums, relative
};

// <n_b> and <n_b^2> from the coherent-overlap double sums over (q, q').
ProbeMoments probe_moments(const CatSpec& spec);

struct PhaseAveragedProbe {
  CatSpec spec;
  double norm_N;
  std::vector<int> photons;     // n in the sector, ascending
  std::vector<double> weights;  // P_n, renormalized to sum 1
  double renormalization;       // 1 - (sum of P_n before renormalization)
  // Quoted prefactor of the mixture (4 N^2); kept for reference.
  // The density uses 2 N^2 P_n per NOON component with n >= 1 and 4 N^2 P_0
  // for the joint vacuum, which is the normalized phase average.
  double quoted_prefactor;

  // Mixture weight of each component in the normalized density.
  std::vector<double> mixture_weights() const;
  // Density over the axes basis with cutoff max(photons).
  FockMatrix density() const;
};

PhaseAveragedProbe phase_averaged(const CatSpec& spec);

}  // namespace catqfi
