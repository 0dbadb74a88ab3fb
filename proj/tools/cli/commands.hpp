#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "catqfi/sweep.hpp"

namespace catqfi::cli {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitVerify = 3 };

// Entry point without the program name: {"curve", "--d", "8", ...}.
// Documents written to "-" go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CurveArgs {
  std::string d = "8", k = "0,1", nav = "0.05:4:120", baselines, format = "csv", output = "-", config;
  double eta = 1.0;
  int workers = 1;
  std::uint64_t seed = 0;
};

// `curve` with parsed flags; the evaluated rows are handed back when asked.
int cmd_curve(const CurveArgs& a, std::ostream& out, std::ostream& err, std::vector<SweepRow>* rows_out = nullptr);

}  // namespace catqfi::cli
