#pragma once

// Truncated Fock-space states, operators and channels for one or two bosonic
// modes. This is the numerical oracle that the closed-form cat-state results
// are checked against.
//
// Two-mode index order is row-major in mode a: (0,0), (0,1), ..., (0,N),
// (1,0), ... . Operators may live on a subset of the product basis (the
// support of a state); every operation that combines objects on different
// bases embeds them into the union first.

#include <array>
#include <complex>
#include <compare>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "catqfi/error.hpp"

namespace catqfi {

using cplx = std::complex<double>;

inline constexpr int kMaxPhotonsPerMode = 200;
inline constexpr double kTailTolerance = 1e-14;
inline constexpr double kNullEigenvalue = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;

// n_max = ceil(|alpha|^2 + 10 sqrt(|alpha|^2 + 1) + 20); throws a truncation
// error when the result exceeds kMaxPhotonsPerMode.
int required_n_max(double abs_alpha_sq);

// Poisson weight of photon numbers above n_max for mean photon number x.
double poisson_tail(double x, int n_max);

struct FockIndex {
  int a = 0;
  int b = 0;

  int operator[](int mode) const { return mode == 0 ? a : b; }
  auto operator<=>(const FockIndex&) const = default;
};

class FockBasis;
using BasisPtr = std::shared_ptr<const FockBasis>;

class FockBasis {
 public:
  static BasisPtr full(int modes, int n_max);
  // (n,0) and (0,n) for n = 0..n_max; the support of every path-symmetric
  // probe and of its image under loss.
  static BasisPtr axes(int n_max);
  static BasisPtr from_states(int modes, int n_max, std::vector<FockIndex> states);

  int modes() const { return modes_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return states_.size(); }
  const FockIndex& operator[](std::size_t i) const { return states_[i]; }
  std::span<const FockIndex> states() const { return states_; }

  // Position of a state, or -1 when it is outside this basis.
  long find(FockIndex s) const;
  bool contains(FockIndex s) const { return find(s) >= 0; }

  bool same_as(const FockBasis& other) const;

 private:
  FockBasis(int modes, int n_max, std::vector<FockIndex> states);

  int modes_;
  int n_max_;
  std::vector<FockIndex> states_;
  std::vector<long> lookup_;
};

BasisPtr union_basis(const FockBasis& x, const FockBasis& y);

struct FockVector {
  BasisPtr basis;
  Eigen::VectorXcd amps;

  int modes() const { return basis->modes(); }
  int n_max() const { return basis->n_max(); }
  std::size_t size() const { return basis->size(); }
  cplx amp(FockIndex s) const;
  double norm() const { return amps.norm(); }
  FockVector normalized() const;
};

struct FockMatrix {
  BasisPtr basis;
  Eigen::MatrixXcd entries;

  int modes() const { return basis->modes(); }
  int n_max() const { return basis->n_max(); }
  std::size_t size() const { return basis->size(); }
  cplx trace() const { return entries.trace(); }
  double hermitian_residue() const;
  cplx at(FockIndex row, FockIndex col) const;
};

struct EigenSystem {
  BasisPtr basis;
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXcd eigenvectors;  // columns, orthonormal
  std::vector<bool> numerically_null;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  FockVector vector(std::size_t i) const;
  Eigen::MatrixXcd reconstruct() const;
};

// ---- construction ---------------------------------------------------------

FockVector zero_vector(BasisPtr basis);
FockVector number_state(int n, int n_max);
FockVector number_state(FockIndex s, int n_max);  // two-mode
FockVector coherent_vector(cplx alpha, int n_max);
FockVector tensor(const FockVector& a, const FockVector& b);
// Re-expresses v on a basis containing its support (missing states must carry
// zero amplitude, otherwise a shape error is raised).
FockVector embed(const FockVector& v, BasisPtr basis);
FockMatrix embed(const FockMatrix& m, BasisPtr basis);
// Places a single-mode vector into the chosen mode of a two-mode basis with
// the other mode in vacuum.
FockVector place_in_mode(const FockVector& single, int mode, BasisPtr two_mode);
// Restricts v to the states carrying a non-zero amplitude.
FockVector compress(const FockVector& v);

FockMatrix projector(const FockVector& v);  // on the support of v
FockMatrix outer(const FockVector& ket, const FockVector& bra);

// ---- unitaries ------------------------------------------------------------

// e^{i phi n} on the chosen mode.
FockVector apply_phase_shift(const FockVector& v, double phi, int mode);
FockMatrix apply_phase_shift(const FockMatrix& m, double phi, int mode);
// e^{i phi (ca n_a + cb n_b)}; two-mode only.
FockVector apply_phase_generator(const FockVector& v, double phi, double ca, double cb);
FockMatrix apply_phase_generator(const FockMatrix& m, double phi, double ca, double cb);

// Passive 50:50 coupler mapping coherent inputs (a1, a2) to
// ((a1 + a2)/sqrt2, (a1 - a2)/sqrt2). The output lives on the full two-mode
// basis with cutoff out_n_max (defaults to the input cutoff).
FockVector beamsplitter_50_50(const FockVector& v, std::optional<int> out_n_max = {});

// e^{2 pi i n1 n2 / d}.
FockVector cross_kerr_unitary(const FockVector& v, int d);

// ---- channels -------------------------------------------------------------

// sqrt(C(n,m) eta^{n-m} (1-eta)^m): amplitude of K_m |n> on |n-m>.
double loss_kraus_weight(int n, int m, double eta);

// Pure-loss channel with transmission eta on one mode. The output basis is
// the downward closure of the input basis in that mode.
FockMatrix loss_channel(const FockMatrix& rho, double eta, int mode);
FockMatrix loss_channel_all_modes(const FockMatrix& rho, double eta);

// ---- spectral and figures of merit ------------------------------------------

EigenSystem hermitian_eig(const FockMatrix& m);

double fidelity(const FockVector& a, const FockVector& b);
double fidelity(const FockVector& a, const FockMatrix& rho);
double fidelity(const FockMatrix& rho, const FockMatrix& sigma);
double trace_distance(const FockMatrix& rho, const FockMatrix& sigma);

// Expectation of an operator diagonal in the Fock basis.
double expectation(const FockVector& v, const std::function<double(FockIndex)>& diag);
double expectation(const FockMatrix& rho, const std::function<double(FockIndex)>& diag);
// <v|op|v> for a dense operator on v's basis.
cplx expectation(const FockVector& v, const Eigen::MatrixXcd& op);

FockMatrix partial_trace(const FockMatrix& rho, int keep_mode);

}  // namespace catqfi
