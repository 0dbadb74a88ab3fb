#include "cli/emit.hpp"

#include <fstream>
#include <sstream>

namespace catqfi::cli {

const KeyValues& conventions() {
  static const KeyValues c = {
      {"n_av", "per-mode mean photon number <n_b> of the input probe, counted before loss"},
      {"phase", "phase shift exp(i phi n_b) on mode b"},
      {"sql", "delta_phi = 1/sqrt(n_av), i.e. f_q = n_av"},
      {"beamsplitter", "a1 -> (a1 + a2)/sqrt2, a2 -> (a1 - a2)/sqrt2"},
      {"baseline_rows", "d = 0; noon: k = photon number, n_av = k/2; tmsv: alpha = squeeze parameter r"},
  };
  return c;
}

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "nan";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  const auto s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string render_csv(const RunConfig& cfg, const Table& t) {
  std::ostringstream os;
  os << "# tool = " << kToolName << " " << kToolVersion << "\n";
  os << "# command = " << cfg.command << "\n";
  for (const auto& [k, v] : cfg.parameters) os << "# config." << k << " = " << v << "\n";
  for (const auto& [k, v] : conventions()) os << "# convention." << k << " = " << v << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const auto it = row.find(t.columns[i]);
      os << (i ? "," : "") << (it == row.end() ? std::string("nan") : csv_cell(*it));
    }
    os << "\n";
  }
  return os.str();
}

Json json_header(const RunConfig& cfg) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = cfg.command;
  j["config"] = Json::object();
  for (const auto& [k, v] : cfg.parameters) j["config"][k] = v;
  j["seed"] = cfg.seed;
  j["conventions"] = Json::object();
  for (const auto& [k, v] : conventions()) j["conventions"][k] = v;
  return j;
}

std::string render_json(const RunConfig& cfg, const Table& t) {
  Json j = json_header(cfg);
  j["columns"] = t.columns;
  j["rows"] = Json::array();
  for (const auto& r : t.rows) j["rows"].push_back(r);
  return j.dump(2) + "\n";
}

std::string render(const RunConfig& cfg, const Table& t) {
  return cfg.format == "json" ? render_json(cfg, t) : render_csv(cfg, t);
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-" || path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

}  // namespace catqfi::cli
