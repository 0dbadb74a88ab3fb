#pragma once

// Run configuration shared by the commands: a plain `key = value` file whose
// entries become long flags placed ahead of the command line, so explicit
// flags win.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace catqfi::cli {

// Bad flags, bad config file, bad values. Maps to exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct RunConfig {
  std::string command;
  KeyValues parameters;  // resolved values in flag order
  std::string output_path = "-";
  std::string format = "csv";
  std::uint64_t seed = 0;

  void set(const std::string& key, const std::string& value);
};

// Blank lines and lines starting with '#' are skipped; values may be quoted.
KeyValues read_config_file(const std::string& path);

// argv of one subcommand with the config file spliced in front: every
// `key = value` becomes `--key value`. The file named by --config is read
// here; unknown keys surface later as unknown flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args);

struct Range {
  double min = 0;
  double max = 0;
  int points = 0;
};

// "min:max:points"
Range parse_range(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::string> parse_word_list(const std::string& text);

// %.12g, with nan / inf spelled out.
std::string format_number(double v);

}  // namespace catqfi::cli
