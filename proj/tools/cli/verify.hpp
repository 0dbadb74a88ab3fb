#pragma once

// The invariant/oracle suite behind `catqfi verify`, grouped by acceptance
// criterion, plus golden-file regression. The acceptance test binary runs the
// same groups.

#include <ostream>
#include <string>
#include <vector>

namespace catqfi::cli {

struct VerifyOptions {
  std::string golden_dir = CATQFI_GOLDEN_DIR;
  double tol_scale = 1.0;
  std::string report_path = "-";
  bool write_golden = false;
  std::vector<int> criteria;  // empty: all groups
};

struct Check {
  std::string name;
  double value = 0;
  std::string relation;  // "<=" or ">="
  double bound = 0;
  bool pass = false;
  std::string detail;
};

struct GroupReport {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  bool passed() const;
};

// Groups 1-10 follow the acceptance criteria; 11 collects the remaining
// module invariants and 12 the golden files.
inline constexpr int kGroupCount = 12;
std::string group_title(int id);
GroupReport run_group(int id, const VerifyOptions& opt);

std::string render_report(const std::vector<GroupReport>& groups, double tol_scale);

struct GoldenFile {
  std::string name;
  std::vector<std::string> args;  // empty for the reference-value table
};
const std::vector<GoldenFile>& golden_files();
std::string golden_document(const GoldenFile& g);

// Cell-by-cell comparison: numbers within tol relative, text exact.
Check compare_golden(const std::string& name, const std::string& expected, const std::string& actual, double tol);

int run_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace catqfi::cli
