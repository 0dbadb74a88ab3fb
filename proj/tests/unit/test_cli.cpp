#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/verify.hpp"

using namespace catqfi::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("catqfi_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parsers") {
  const auto r = parse_range("0.05:4:120");
  CHECK(r.min == 0.05);
  CHECK(r.max == 4.0);
  CHECK(r.points == 120);
  CHECK_THROWS_AS(parse_range("1:2"), UsageError);
  CHECK_THROWS_AS(parse_range("0:2:5"), UsageError);
  CHECK_THROWS_AS(parse_range("a:2:5"), UsageError);
  CHECK(parse_int_list("0, 1,3") == std::vector<int>{0, 1, 3});
  CHECK(parse_int_list("").empty());
  CHECK_THROWS_AS(parse_int_list("1,x"), UsageError);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("curve CSV") {
  const auto r = call({"curve", "--d", "8", "--k", "0,1", "--eta", "1.0", "--nav", "0.2:2:4", "--baselines", "noon,sql"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# tool = catqfi 0.1.0\n") == 0);
  CHECK(r.out.find("# config.k = 0,1\n") != std::string::npos);
  CHECK(r.out.find("# convention.sql = ") != std::string::npos);
  CHECK(r.out.find("# convention.beamsplitter = ") != std::string::npos);
  CHECK(r.out.find("# convention.n_av = ") != std::string::npos);
  CHECK(r.out.find('\r') == std::string::npos);
  const auto lines = data_lines(r.out);
  CHECK(lines[0] == "d,k,alpha,eta,n_av,f_q,delta_phi,method");
  // 4 NOON rows, 4 SQL rows, 4 + 4 cat rows
  CHECK(lines.size() == 1 + 16);
  CHECK(lines[1] == "0,0,0,1,0.2,0.2,2.2360679775,sql");
  CHECK(r.out.find("domain_error") != std::string::npos);  // k=1 at N_av=0.2
}

TEST_CASE("lossy curve carries the closed-form column") {
  const auto r = call({"curve", "--d", "8", "--k", "1", "--eta", "0.9", "--nav", "1:2:2", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  CHECK(j["command"] == "curve");
  CHECK(j["config"]["eta"] == "0.9");
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["method"] == "mixed_numeric_oracle");
  CHECK(j["rows"][0].contains("f_q_paper"));
  CHECK(j["columns"].back() == "f_q_paper");
}

TEST_CASE("usage errors exit 1") {
  CHECK(call({"curve", "--k", ""}).code == 1);
  CHECK(call({"curve", "--d", ""}).code == 1);
  CHECK(call({"curve", "--eta", "0"}).code == 1);
  CHECK(call({"curve", "--nav", "1:2"}).code == 1);
  CHECK(call({"curve", "--bogus", "1"}).code == 1);
  CHECK(call({"curve", "--baselines", "coherent"}).code == 1);
  CHECK(call({"curve", "--format", "xml"}).code == 1);
  CHECK(call({"genscheme", "--shots", "0"}).code == 1);
  CHECK(call({"genscheme", "--d", "1"}).code == 1);
  CHECK(call({"nonsense"}).code == 1);
  CHECK(call({}).code == 1);
  CHECK(call({"curve", "--help"}).code == 0);
}

TEST_CASE("numerical failures exit 2") {
  // Amplitude beyond the cutoff cap.
  CHECK(call({"genscheme", "--d", "2", "--alpha", "15"}).code == 2);
}

TEST_CASE("config file, flags override, unknown keys rejected") {
  const auto dir = scratch("config");
  write(dir / "run.cfg", "# sweep\nd = 4\nk = 0\nnav = 0.5:1:2\neta = 0.9\n");
  const auto a = call({"curve", "--config", (dir / "run.cfg").string()});
  REQUIRE(a.code == 0);
  CHECK(a.out.find("# config.d = 4\n") != std::string::npos);
  CHECK(a.out.find("# config.eta = 0.9\n") != std::string::npos);

  const auto b = call({"curve", "--config", (dir / "run.cfg").string(), "--eta", "1"});
  REQUIRE(b.code == 0);
  CHECK(b.out.find("# config.eta = 1\n") != std::string::npos);
  CHECK(b.out.find("# config.d = 4\n") != std::string::npos);

  write(dir / "bad.cfg", "d = 4\ncolour = blue\n");
  CHECK(call({"curve", "--config", (dir / "bad.cfg").string()}).code == 1);
  write(dir / "broken.cfg", "just text\n");
  CHECK(call({"curve", "--config", (dir / "broken.cfg").string()}).code == 1);
  CHECK(call({"curve", "--config", (dir / "missing.cfg").string()}).code == 1);
  fs::remove_all(dir);
}

TEST_CASE("worker count does not change the output") {
  std::vector<std::string> args = {"curve", "--d", "4,8", "--k", "0,1", "--eta", "0.9", "--nav", "0.6:2:4",
                                   "--baselines", "noon,tmsv,sql"};
  auto one = args, four = args;
  one.insert(one.end(), {"--workers", "1"});
  four.insert(four.end(), {"--workers", "4"});
  const auto a = call(one), b = call(four);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("output file") {
  const auto dir = scratch("output");
  const auto r = call({"g2", "--d", "1,2", "--k", "0,1", "--alpha-sq", "0.5:1:2", "--output", (dir / "g2.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto lines = data_lines(read(dir / "g2.csv"));
  CHECK(lines[0] == "d,k,alpha_sq,g2,mandel_q");
  CHECK(lines.size() == 1 + 2 + 4);
  // coherent state: g2 = 1, Q = 0 up to rounding
  CHECK(lines[1].rfind("1,0,0.5,1,", 0) == 0);
  CHECK(std::abs(std::stod(lines[1].substr(10))) < 1e-15);
  fs::remove_all(dir);
}

TEST_CASE("genscheme report") {
  const std::vector<std::string> args = {"genscheme", "--d", "4", "--alpha", "1", "--beta", "6", "--shots", "10000",
                                         "--seed", "7"};
  const auto a = call(args), b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::ordered_json::parse(a.out);
  CHECK(j["seed"] == 7);
  CHECK(j["config"]["beta"] == "6");
  CHECK(j["single_arm"]["outcomes"].size() == 4);
  CHECK(j["end_to_end"]["outcomes"].size() == 16);
  long total = 0;
  for (const auto& o : j["single_arm"]["outcomes"]) total += o["count"].get<long>();
  CHECK(total == 10000);
  CHECK(call({"genscheme", "--d", "4", "--seed", "8"}).out != a.out);
}

TEST_CASE("optimal") {
  const auto r = call({"optimal", "--nav", "0.5,1", "--eta", "1", "--d-max", "8"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  CHECK(lines[0] == "n_av,eta,d,k,alpha,f_q,delta_phi");
  CHECK(lines.size() == 3);
}

TEST_CASE("golden comparison names the offending row") {
  const std::string base = "# x\na,b\n1,2\n3,4\n";
  CHECK(compare_golden("t.csv", base, base, 1e-9).pass);
  const auto c = compare_golden("t.csv", "# x\na,b\n1,2\n3,4.1\n", base, 1e-9);
  CHECK_FALSE(c.pass);
  CHECK(c.detail.find("row 2") != std::string::npos);
  CHECK(c.detail.find("column b") != std::string::npos);
  CHECK_FALSE(compare_golden("t.csv", "# x\na,c\n1,2\n3,4\n", base, 1e-9).pass);
  CHECK_FALSE(compare_golden("t.csv", "# x\na,b\n1,2\n", base, 1e-9).pass);
  CHECK(compare_golden("t.csv", "a,b\n1,2.0000000001\n3,4\n", base, 1e-9).pass);
}

TEST_CASE("verify with a corrupted golden file exits 3") {
  const auto dir = scratch("golden");
  for (const auto& f : golden_files()) {
    if (!fs::exists(fs::path(CATQFI_GOLDEN_DIR) / f.name)) return;  // golden files not generated yet
    fs::copy_file(fs::path(CATQFI_GOLDEN_DIR) / f.name, dir / f.name);
  }
  auto text = read(dir / "g2_grid.csv");
  const auto pos = text.find("\n4,0,");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "\n4,0,9");
  write(dir / "g2_grid.csv", text);
  const auto r = call({"verify", "--criterion", "12", "--golden-dir", dir.string()});
  CHECK(r.code == 3);
  CHECK(r.out.find("[FAIL] golden g2_grid.csv") != std::string::npos);
  CHECK(r.out.find("row ") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("tolerance scale reaches the report") {
  const auto r = call({"verify", "--criterion", "1", "--tol-scale", "0.1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("tol-scale = 0.1\n") != std::string::npos);
  CHECK(call({"verify", "--tol-scale", "0"}).code == 1);
  CHECK(call({"verify", "--criterion", "13"}).code == 1);
}

}
