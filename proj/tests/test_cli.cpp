#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oracles.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "curveflow_cli_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Result cli(const std::string& args, const std::string& env = "") {
  const fs::path out = workdir() / "stdout.txt";
  const fs::path err = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" CURVEFLOW_BIN "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

Json read(const std::string& name) { return Json::parse(slurp(workdir() / name)); }

double line_value(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 2));
}

void write_figure_eight(const std::string& name) {
  Json pts = Json::array();
  for (const auto& p : oracle::figure_eight(200)) pts.push_back({p.x, p.y});
  std::ofstream(workdir() / name) << Json{{"points", pts}}.dump();
}

}  // namespace

TEST_CASE("gen circle") {
  const Result r = cli("gen --kind circle --r 1 --n 512 --out c.json");
  REQUIRE(r.code == 0);
  const Json j = read("c.json");
  CHECK(j["points"].size() == 512);
  const Json m = read("c.json.manifest.json");
  CHECK(m["command"] == "gen");
  CHECK(m["outputs"][0] == "c.json");
  CHECK(m["config"]["radius"] == 1.0);
}

TEST_CASE("gen is deterministic") {
  REQUIRE(cli("gen --kind planar-fourier --seed 42 --modes 5 --out f1.json").code == 0);
  REQUIRE(cli("gen --kind planar-fourier --seed 42 --modes 5 --out f2.json").code == 0);
  CHECK(slurp(workdir() / "f1.json") == slurp(workdir() / "f2.json"));
}

TEST_CASE("gen from a spec file") {
  std::ofstream(workdir() / "spec.json") << R"({"kind": "radial_fourier", "base_radius": 1,
    "radial_terms": [{"mode": 3, "cos": 0.3}], "n_points": 256})";
  REQUIRE(cli("gen --spec spec.json --out r.json").code == 0);
  CHECK(read("r.json")["points"].size() == 256);
  CHECK(read("r.json.manifest.json")["input_hashes"].contains("spec.json"));
}

TEST_CASE("invalid specs exit with 2") {
  const Result r = cli("gen --kind radial-fourier --r0 1 --term 3:0.6 --term 2:0:0.5 --out bad.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("sum |coeff| < r0") != std::string::npos);
  CHECK_FALSE(fs::exists(workdir() / "bad.json"));
  CHECK(cli("gen --kind spiral --out x.json").code == 2);
  CHECK(cli("gen --kind circle").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("flow --input nowhere.json").code == 2);
}

TEST_CASE("flow on the unit circle") {
  REQUIRE(cli("gen --kind circle --r 1 --n 512 --out unit.json").code == 0);
  const Result r = cli("flow --input unit.json --stop-area-frac 0.1 --out traj.csv --report traj.json "
                       "--svg-dir svg --svg-every 0.05");
  REQUIRE(r.code == 0);
  const std::string csv = slurp(workdir() / "traj.csv");
  CHECK(csv.rfind("t,area,length,k_max,K_max,isoper_ratio,convex\n", 0) == 0);
  std::istringstream is(csv);
  std::string line, last;
  while (std::getline(is, line)) last = line;
  const double t_final = std::stod(last.substr(0, last.find(',')));
  CHECK(std::abs(t_final - 0.45) <= 0.01 * 0.45);
  std::size_t svgs = 0;
  for (const auto& e : fs::directory_iterator(workdir() / "svg")) svgs += e.path().extension() == ".svg";
  CHECK(svgs == static_cast<std::size_t>(std::ceil(t_final / 0.05)));
  const Json rep = read("traj.json");
  CHECK(rep["overall_pass"] == true);
  CHECK(rep["flow"]["convexification_time"] == 0.0);
  const Json m = read("traj.json.manifest.json");
  CHECK(m["partial"] == false);
  for (const auto& o : m["outputs"]) CHECK(fs::exists(workdir() / o.get<std::string>()));
}

TEST_CASE("flow on the bean preset reports convexification") {
  REQUIRE(cli("gen --kind preset --preset bean --out bean.json").code == 0);
  const Result r = cli("flow --input bean.json --report bean_report.json");
  REQUIRE(r.code == 0);
  const Json rep = read("bean_report.json");
  REQUIRE(rep["flow"]["convexification_time"].is_number());
  CHECK(rep["flow"]["convexification_time"].get<double>() < rep["flow"]["stop_time"].get<double>());
}

TEST_CASE("aborted flow keeps partial outputs") {
  REQUIRE(cli("gen --kind circle --n 64 --out small.json").code == 0);
  const Result r = cli("flow --input small.json --n 64 --max-steps 20 --out partial.csv");
  CHECK(r.code == 1);
  CHECK(r.err.find("step budget") != std::string::npos);
  CHECK(fs::exists(workdir() / "partial.csv"));
  const Json m = read("partial.csv.manifest.json");
  CHECK(m["partial"] == true);
  CHECK(m["status"] == "flow_failed");
}

TEST_CASE("flow rejects a non-embedded input") {
  write_figure_eight("eight.json");
  CHECK(cli("flow --input eight.json --out e.csv").code == 2);
}

TEST_CASE("verify a single curve") {
  REQUIRE(cli("gen --kind circle --r 1 --n 512 --out vc.json").code == 0);
  const Result r = cli("verify --input vc.json --report vc_report.json");
  REQUIRE(r.code == 0);
  CHECK(std::abs(line_value(r.out, "main_inequality_margin")) <= 1e-4);
  const Json rep = read("vc_report.json");
  CHECK(rep["overall_pass"] == true);
  for (const char* key : {"curve_meta", "checks", "overall_pass"}) CHECK(rep.contains(key));
}

TEST_CASE("verify a figure-eight fails with a hypothesis entry") {
  write_figure_eight("eight.json");
  const Result r = cli("verify --input eight.json --report eight_report.json");
  CHECK(r.code == 1);
  const Json rep = read("eight_report.json");
  REQUIRE(rep["checks"].size() == 1);
  CHECK(rep["checks"][0]["name"] == "hypothesis");
  CHECK(rep["checks"][0]["pass"] == false);
}

TEST_CASE("verify a clockwise file warns and passes") {
  std::ofstream f(workdir() / "cw.json");
  Json pts = Json::array();
  const auto poly = oracle::regular_polygon(512, 1.0);
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) pts.push_back({it->x, it->y});
  f << Json{{"points", pts}}.dump();
  f.close();
  const Result r = cli("verify --input cw.json");
  CHECK(r.code == 0);
  CHECK(r.err.find("clockwise") != std::string::npos);
}

TEST_CASE("verify a corpus; output independent of worker count") {
  const Result one = cli("verify --corpus 12 --seed 7 --grid 128 --report corpus1.json", "CURVEFLOW_WORKERS=1");
  const Result three = cli("verify --corpus 12 --seed 7 --grid 128 --report corpus3.json", "CURVEFLOW_WORKERS=3");
  REQUIRE(one.code == 0);
  REQUIRE(three.code == 0);
  CHECK(line_value(one.out, "min_margin") >= -1e-6);
  CHECK(line_value(one.out, "violations") == 0.0);
  CHECK(slurp(workdir() / "corpus1.json") == slurp(workdir() / "corpus3.json"));
  const Json rep = read("corpus1.json");
  CHECK(rep["reports"].size() == 12);
  CHECK(rep["reports"][11]["id"] == 11);
  CHECK(cli("verify --corpus 3", "CURVEFLOW_WORKERS=zero").code == 2);
  CHECK(cli("verify").code == 2);
}
