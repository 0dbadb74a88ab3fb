#pragma once

// Reference probes: NOON, two-mode squeezed vacuum and the standard quantum
// limit. N_av is always the per-mode <n_b> of the input probe.

#include <string>

#include "catqfi/qfi.hpp"

namespace catqfi {

enum class BaselineKind { noon, tmsv, sql };

const char* to_string(BaselineKind kind);
BaselineKind baseline_from_string(const std::string& name);

// (|k>|0> + |0>|k>)/sqrt2
FockVector noon_vector(int k);

// k^2 exactly at eta = 1, numeric oracle on the Kraus-evolved state otherwise.
QfiResult noon_qfi(int k, double eta);

// Per-mode cutoff for a TMSV with n_av = sinh^2 r. Lossy states use
// ceil(20 n_av + 20); lossless ones grow the cutoff until the dropped part of
// sum p_n n^2 is below 1e-12 of the variance. Both are capped at 200.
int tmsv_n_max(double r, double eta);

// sum_n tanh^n r / cosh r |n, n>, QFI for e^{i phi n_b}.
QfiResult tmsv_qfi(double r, double eta);
double tmsv_nav(double r);
double tmsv_r_for_nav(double n_av);

// delta phi = 1/sqrt(n_av); the matching Fisher information is n_av.
double sql_bound(double n_av);

}  // namespace catqfi
