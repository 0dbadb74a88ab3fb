#pragma once

// Generalized multi-component cat states
//   |C_{d,k}(alpha)> = M^{-1/2} sum_q omega^{-kq} |alpha omega^q>,  omega = e^{2 pi i/d},
// which live on photon numbers n = k (mod d).

#include "catqfi/fock.hpp"

namespace catqfi {

class CatSpec {
 public:
  // Throws a parameter error unless d >= 1 and 0 <= k < d, and a degenerate
  // error for alpha = 0 with k != 0.
  CatSpec(int d, int k, cplx alpha);

  int d() const { return d_; }
  int k() const { return k_; }
  cplx alpha() const { return alpha_; }
  double abs_alpha() const { return std::abs(alpha_); }
  double x() const { return std::norm(alpha_); }  // |alpha|^2
  cplx omega() const;

  CatSpec with_alpha(cplx alpha) const { return {d_, k_, alpha}; }
  // Sector k - 1 taken mod d.
  int lowered_k() const { return (k_ + d_ - 1) % d_; }
  CatSpec lowered() const { return {d_, lowered_k(), alpha_}; }

 private:
  int d_;
  int k_;
  cplx alpha_;
};

// d^2 e^{-x} sum_{n = k mod d} x^n / n!  for x = |alpha|^2 >= 0. Accepts the
// degenerate case (returns 0) so that closed forms can reference M_{d,k-1}.
double sector_norm(int d, int k, double x);

double norm_M(const CatSpec& spec);

// The same quantity from the coherent-overlap double sum
// sum_{q,q'} omega^{k(q'-q)} <alpha omega^q'|alpha omega^q>, evaluated in
// extended precision. imag_residue receives |Im| of the sum.
double norm_M_double_sum(const CatSpec& spec, double* imag_residue = nullptr);

struct CatMoments {
  double norm_M = 0;
  double mean_n = 0;
  double mean_n2 = 0;
  double g2 = 0;
  double mandel_q = 0;
  // g2 evaluated at the clamped amplitude 1e-8 because mean_n vanishes.
  bool g2_is_limit = false;
};

CatMoments cat_moments(const CatSpec& spec);

// |<k|C_{d,k}(alpha)>|^2 = d^2 e^{-|alpha|^2} |alpha|^{2k} / (k! M).
double fidelity_to_number_state(const CatSpec& spec);

// |<0|C_{d,k}(alpha)>|^2; zero unless k = 0.
double vacuum_overlap_sq(const CatSpec& spec);

// Number-basis amplitudes d e^{-|alpha|^2/2} alpha^n / sqrt(n! M) on the
// sector n = k (mod d), normalized. Throws a truncation error when the
// sector weight above n_max exceeds kTailTolerance.
FockVector cat_to_fock(const CatSpec& spec, int n_max);
FockVector cat_to_fock(const CatSpec& spec);  // n_max from the truncation rule

// Independent realization as the explicit superposition of d coherent
// vectors, normalized by its own norm (used as an oracle).
FockVector cat_from_coherent_sum(const CatSpec& spec, int n_max);

// |C_{d,k,phi}(alpha)> = M^{-1/2} sum_q omega^{-kq} |alpha omega^q e^{i phi}>.
FockVector shifted_cat(const CatSpec& spec, double phi, int n_max);

}  // namespace catqfi
