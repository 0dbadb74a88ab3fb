#pragma once

// Energy-constrained sweeps: invert N_av(alpha), trace curves against N_av,
// locate ordering flips between sectors and pick the best (d, k).

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catqfi/baselines.hpp"

namespace catqfi {

// N_av of the input probe for real amplitude alpha >= 0 (eta does not enter:
// energy is counted before loss).
double nav_of_alpha(int d, int k, double alpha);

// Smallest N_av the sector reaches, k/2 (approached as alpha -> 0).
double nav_infimum(int d, int k);

// Bisection for |N_av(alpha) - target| < 1e-9. Throws a domain error for
// targets at or below k/2 (or at or beyond the largest amplitude the cutoff
// supports) and a numerical error if the bracket is not monotone.
double alpha_for_nav(int d, int k, double n_av_target);

inline constexpr double kNavTolerance = 1e-9;

struct SweepRow {
  int d = 0;  // 0 for baseline rows
  int k = 0;  // NOON photon number for NOON rows, 0 for other baselines
  double alpha = 0;  // squeeze parameter r for TMSV rows
  double eta = 1;
  double n_av = 0;
  double f_q = 0;
  double delta_phi = 0;
  std::string method;
  // Mixed-state formula on the closed-form spectrum, for lossy cat rows only.
  std::optional<double> f_q_paper;
  std::string error;  // non-empty when the row failed; values are NaN

  bool ok() const { return error.empty(); }
};

struct CurveRequest {
  std::vector<int> d_list;
  std::vector<int> k_list;
  double eta = 1.0;
  double n_av_min = 0.05;
  double n_av_max = 4.0;
  int points = 120;
  std::set<BaselineKind> baselines;
  int workers = 1;

  void validate() const;
  std::vector<double> grid() const;
};

// Sort key (d, k, n_av, method); baseline rows carry d = 0.
bool row_less(const SweepRow& a, const SweepRow& b);

// One cat row: alpha inversion, then the photon-number variance for eta = 1 or the numeric oracle
// on the exact lossy probe for eta < 1.
SweepRow evaluate_cat(int d, int k, double eta, double n_av);

std::vector<SweepRow> trace_curve(const CurveRequest& req);

// Smallest N_av where the delta-phi ordering of sectors ka and kb (same d,
// same eta) flips between neighbouring grid points, refined by bisection on
// the evaluators to 1e-4 in N_av. Rows must hold a single d.
std::optional<double> find_crossover(const std::vector<SweepRow>& rows, int ka, int kb);

struct OptimalProbe {
  int d = 0;
  int k = 0;
  double alpha = 0;
  double f_q = 0;
};

// Grid argmax over d = 1..d_max, k = 0..min(k_max, d-1) with k/2 < n_av; ties
// go to the smaller d, then the smaller k.
OptimalProbe optimal_probe(double n_av, double eta, int d_max, int k_max);

}  // namespace catqfi
