#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "catqfi/loss.hpp"

namespace catqfi {

enum class QfiMethod { pure_eq5, pure_eq10, mixed_eq15_paper, mixed_numeric_oracle };

const char* to_string(QfiMethod m);

struct QfiResult {
  double f_q = 0;
  double delta_phi = 0;  // 1 / sqrt(f_q), +inf for f_q = 0
  QfiMethod method = QfiMethod::pure_eq5;
  std::map<std::string, double> diagnostics;
};

QfiResult make_qfi_result(double f_q, QfiMethod method);

// 4 (<n_b^2> - <n_b>^2) from the double sums.
QfiResult qfi_pure(const CatSpec& spec);

// 4 N^2 <n> ((g2 - N^2) <n> + 1) from the cat moments.
QfiResult qfi_pure_g2(const CatSpec& spec);
double qfi_from_g2(double norm_sq, double mean_n, double g2);

// 4 Var(G) of a pure vector for a generator diagonal in the Fock basis.
double pure_variance_qfi(const FockVector& v, const std::function<double(FockIndex)>& generator);

// Mixed-state formula on the four closed-form eigenpairs; pairs with
// lambda_i + lambda_j < kNullEigenvalue are skipped.
QfiResult qfi_mixed_paper(const LossyProbe& lp);
QfiResult qfi_mixed_paper(const PaperSpectrum& s);

// sum_{lambda_i + lambda_j > eps} 2 |<i|drho|j>|^2 / (lambda_i + lambda_j)
double sld_qfi(const EigenSystem& eig, const Eigen::MatrixXcd& drho, int* skipped_pairs = nullptr);

using MatrixFamily = std::function<FockMatrix(double phi)>;
using BlockFamily = std::function<std::vector<FockMatrix>(double phi)>;

inline constexpr double kDerivativeStep = 1e-5;
inline constexpr double kStabilityTolerance = 1e-6;
inline constexpr double kDerivativeFailure = 1e-4;

// Exact spectrum at phi0, central differences with Richardson refinement
// for d rho / d phi. The family is split into independent blocks by its
// sparsity pattern. Diagnostics hold the step-halving mismatch; a mismatch
// above kDerivativeFailure is a numerical error.
QfiResult qfi_mixed_numeric(const MatrixFamily& family, double phi0);
// Family already split into blocks that never couple.
QfiResult qfi_mixed_numeric(const BlockFamily& family, double phi0);

// rho(phi) = U(phi) rho U(phi)^dag with U = e^{i phi (ca n_a + cb n_b)}.
MatrixFamily phase_family(FockMatrix rho, double ca = 0.0, double cb = 1.0);

// Numeric oracle on the exact lossy probe (Kraus form).
QfiResult qfi_lossy_oracle(const CatSpec& spec, double eta, double phi0 = 0.0);

}  // namespace catqfi
