#pragma once

// Photon loss on cat states and on the two-mode probe. Loss acts after the
// phase shift e^{i phi n_b}, with the same transmission eta on both modes.

#include <array>

#include "catqfi/probe.hpp"

namespace catqfi {

void require_transmission(double eta);

// Single-mode lossy cat from the coherent double sum
//   sum_{q,q'} omega^{k(q'-q)} e^{(omega^{q-q'} - 1)|alpha|^2(1-eta)}
//     |alpha sqrt(eta) omega^q><alpha sqrt(eta) omega^q'|,
// normalized by its trace.
FockMatrix lossy_cat_exact(const CatSpec& spec, double eta);

struct WeakLossWeights {
  double a = 0;  // (1 - x(1-eta)) M_{d,k}(alpha sqrt eta)
  double b = 0;  // x(1-eta) M_{d,k-1}(alpha sqrt eta)
  double lowered_fraction() const { return b / (a + b); }
};

// Throws a domain error when a <= 0, i.e. |alpha|^2 (1-eta) >= 1.
WeakLossWeights weak_loss_weights(const CatSpec& spec, double eta);

// Two-term weak-loss mixture of |C_{d,k}(alpha sqrt eta)> and
// |C_{d,k-1}(alpha sqrt eta)>, k-1 taken mod d.
FockMatrix lossy_cat_weak(const CatSpec& spec, double eta);

// Two-mode forms, all on FockBasis::axes(n_max).
FockMatrix lossy_probe_paper_exact(const CatSpec& spec, double eta, double phi, int n_max);
FockMatrix lossy_probe_paper_weak(const CatSpec& spec, double eta, double phi, int n_max);
// Kraus channel on both modes of the phase-shifted probe.
FockMatrix lossy_probe_oracle(const CatSpec& spec, double eta, double phi, int n_max);

struct PaperSpectrum {
  std::array<double, 4> e{};
  std::array<double, 4> lambda{};
  // (|C_k>|0> +- |0>|C_{k,phi}>), (|C_{k-1}>|0> +- |0>|C_{k-1,phi}>),
  // amplitudes at alpha sqrt(eta), each normalized.
  std::array<FockVector, 4> vectors;
  // d/dphi of each vector: mode-b amplitude at n times i n.
  std::array<FockVector, 4> derivatives;
  double orthogonality_residue = 0;  // max |<l_i|l_j>|, i != j
  double min_lambda = 0;
};

PaperSpectrum paper_spectrum(const CatSpec& spec, double eta, double phi, int n_max);

// sum_i lambda_i |l_i><l_i|
FockMatrix reconstruct(const PaperSpectrum& s);

struct LossyProbe {
  CatSpec spec;
  double eta;
  double phi;
  int n_max;
  FockMatrix paper_form;
  FockMatrix oracle_form;
  FockMatrix weak_form;  // empty entries when outside the weak-loss domain
  bool weak_available;
  PaperSpectrum spectral;
};

LossyProbe lossy_probe(const CatSpec& spec, double eta, double phi);

}  // namespace catqfi
