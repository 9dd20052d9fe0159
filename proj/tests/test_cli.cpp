#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <rangeshape/cli.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;
using rangeshape::cli::execute;

namespace {

const std::string kSamples = RANGESHAPE_SAMPLES_DIR;

std::string sample(const std::string& name) { return kSamples + "/" + name; }

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rangeshape");
  std::ostringstream out, err;
  Run r;
  r.code = execute(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rangeshape-cli-" + std::to_string(std::rand()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("range on the Jordan block", "[cli]") {
  TempDir tmp;
  const auto r = run({"range", "--input", sample("jordan2.json"), "--angles", "360", "--csv-out", tmp / "w.csv"});
  REQUIRE(r.code == 0);
  const auto rows = read_csv(slurp(tmp / "w.csv"));
  REQUIRE(rows.size() == 361);
  REQUIRE(rows[0] == std::vector<std::string>{"theta", "h", "x", "y"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][2]), y = std::stod(rows[i][3]);
    REQUIRE(std::abs(std::hypot(x, y) - 0.5) <= 1e-8);
    REQUIRE(std::abs(std::stod(rows[i][1]) - 0.5) <= 1e-8);
  }
  const auto j = r.report();
  REQUIRE(j["command"] == "range");
  REQUIRE(j["samples"].size() == 360);
  REQUIRE(j["degeneracy"]["degenerate"] == false);
}

TEST_CASE("rz-check on the TV screen", "[cli]") {
  const auto r = run({"rz-check", "--poly", sample("tvscreen.json")});
  REQUIRE(r.code == 0);
  const auto j = r.report();
  REQUIRE(j["verdict"] == "fail");
  REQUIRE(j["rigidity"] == "not_rigidly_convex");
  REQUIRE(j["directions_tested"] == 180);
  REQUIRE(j["witness"]["direction"].size() == 2);
  const double mu_im = j["witness"]["mu"][1].get<double>();
  REQUIRE(std::abs(mu_im) > 0.5);
  REQUIRE_FALSE(j["caveat"].get<std::string>().empty());
}

TEST_CASE("decide on the square", "[cli]") {
  SECTION("d = 3") {
    const auto r = run({"decide", "--polygon", sample("square.json"), "--dim", "3"});
    REQUIRE(r.code == 0);
    const auto j = r.report();
    REQUIRE(j["verdict"] == "no");
    REQUIRE(j["reason"] == "degree_exceeds_d");
    REQUIRE(j["witness"].is_null());
  }
  SECTION("d = 4") {
    TempDir tmp;
    const auto r = run({"decide", "--polygon", sample("square.json"), "--dim", "4", "--svg-out", tmp / "d.svg"});
    REQUIRE(r.code == 0);
    const auto j = r.report();
    REQUIRE(j["verdict"] == "yes");
    REQUIRE(j["witness"]["d"] == 4);
    REQUIRE(slurp(tmp / "d.svg").find("<svg") != std::string::npos);
  }
}

TEST_CASE("decide on matrices and polynomials", "[cli]") {
  REQUIRE(run({"decide", "--input", sample("random3.json")}).report()["verdict"] == "yes");
  REQUIRE(run({"decide", "--poly", sample("disk.json"), "--dim", "2"}).report()["verdict"] == "yes");
  const auto j = run({"decide", "--poly", sample("disk.json"), "--dim", "1"}).report();
  REQUIRE(j["verdict"] == "no");
  REQUIRE(j["reason"] == "degree_exceeds_d");
  REQUIRE(run({"decide", "--poly", sample("disk.json")}).code == 2);
  REQUIRE(run({"decide", "--input", sample("random3.json"), "--dim", "2"}).code == 2);
}

TEST_CASE("kippenhahn output feeds rz-check", "[cli]") {
  TempDir tmp;
  const auto k = run({"kippenhahn", "-i", sample("random3.json"), "--json-out", tmp / "p.json"});
  REQUIRE(k.code == 0);
  REQUIRE(k.out.empty());
  const auto p = json::parse(slurp(tmp / "p.json"));
  REQUIRE(p["degree"] == 3);
  const auto r = run({"rz-check", "--poly", tmp / "p.json"});
  REQUIRE(r.code == 0);
  REQUIRE(r.report()["verdict"] == "pass");
  REQUIRE(r.report()["rigidity"] == "rigidly_convex");
}

TEST_CASE("polar of diag(0, 1) is unbounded", "[cli]") {
  TempDir tmp;
  const auto r = run({"polar", "--input", sample("diag01.json"), "--angles", "72", "--csv-out", tmp / "p.csv",
                      "--svg-out", tmp / "p.svg"});
  REQUIRE(r.code == 0);
  REQUIRE(r.report()["bounded"] == false);
  const auto rows = read_csv(slurp(tmp / "p.csv"));
  REQUIRE(rows[0] == std::vector<std::string>{"theta", "h", "x", "y", "radius"});
  int infinite = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][4] == "inf") ++infinite;
  REQUIRE(infinite > 0);
  REQUIRE(infinite < 72);
  REQUIRE(slurp(tmp / "p.svg").find("</svg>") != std::string::npos);
}

TEST_CASE("polar of a polygon", "[cli]") {
  const auto j = run({"polar", "--polygon", sample("square.json")}).report();
  REQUIRE(j["bounded"] == true);
  REQUIRE(j["polar"].size() == 4);
}

TEST_CASE("symmetrize the Jordan block", "[cli]") {
  const auto r = run({"symmetrize", "--input", sample("jordan2.json"), "--seed", "3"});
  REQUIRE(r.code == 0);
  const auto j = r.report();
  REQUIRE(j["converged"] == true);
  REQUIRE(j["symmetric"] == true);
  REQUIRE(j["relative_distance"].get<double>() <= 1e-3);
}

TEST_CASE("reports echo the resolved configuration", "[cli]") {
  const auto j = run({"range", "--input", sample("jordan2.json"), "--angles", "40", "--seed", "9"}).report();
  const auto& c = j["config"];
  REQUIRE(c["command"] == "range");
  REQUIRE(c["input_path"] == sample("jordan2.json"));
  REQUIRE(c["angles"] == 40);
  REQUIRE(c["directions"] == 180);
  REQUIRE(c["tol"] == 1e-3);
  REQUIRE(c["seed"] == 9);
  REQUIRE(c["json_out"].is_null());
}

TEST_CASE("outputs are deterministic", "[cli]") {
  TempDir tmp;
  const std::vector<std::vector<std::string>> cmds{
      {"range", "--input", sample("random3.json"), "--angles", "90"},
      {"polar", "--input", sample("random3.json"), "--angles", "90"},
      {"rz-check", "--poly", sample("tvscreen.json")},
      {"symmetrize", "--input", sample("random3.json"), "--seed", "1"},
  };
  for (const auto& c : cmds) {
    auto args = c;
    args.insert(args.end(), {"--json-out", tmp / "r.json"});
    REQUIRE(run(args).code == 0);
    const auto ta = slurp(tmp / "r.json");
    ::setenv("RANGESHAPE_THREADS", "3", 1);
    REQUIRE(run(args).code == 0);
    ::unsetenv("RANGESHAPE_THREADS");
    REQUIRE(ta == slurp(tmp / "r.json"));
    REQUIRE(ta.back() == '\n');
  }
}

TEST_CASE("invalid input exits with 2", "[cli][errors]") {
  TempDir tmp;
  SECTION("missing file") {
    const auto r = run({"range", "--input", tmp / "nope.json"});
    REQUIRE(r.code == 2);
    REQUIRE(r.out.empty());
    REQUIRE(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
  SECTION("garbled JSON") {
    REQUIRE(run({"range", "--input", tmp.write("bad.json", "{\"d\": 2, \"entries\": [[1, 2]")}).code == 2);
  }
  SECTION("non-square matrix") {
    REQUIRE(run({"range", "--input", tmp.write("ns.json", "{\"entries\": [[1, 2], [3]]}")}).code == 2);
  }
  SECTION("polynomial over its declared degree") {
    REQUIRE(run({"rz-check", "--poly", tmp.write("q.json", "{\"degree\": 1, \"coeffs\": [[2, 0, 1]]}")}).code == 2);
  }
  SECTION("unanchored polynomial") {
    REQUIRE(run({"rz-check", "--poly", tmp.write("q.json", "{\"coeffs\": [[0, 0, -1], [1, 0, 1]]}")}).code == 2);
  }
  SECTION("usage errors") {
    REQUIRE(run({}).code == 2);
    REQUIRE(run({"frobnicate"}).code == 2);
    REQUIRE(run({"range"}).code == 2);
    REQUIRE(run({"rz-check"}).code == 2);
    REQUIRE(run({"range", "--input", sample("jordan2.json"), "--angles", "2"}).code == 2);
    REQUIRE(run({"rz-check", "--poly", sample("disk.json"), "--directions", "7"}).code == 2);
    REQUIRE(run({"symmetrize", "--input", sample("jordan2.json"), "--tol", "0"}).code == 2);
    REQUIRE(run({"range", "--input", sample("jordan2.json"), "--bogus"}).code == 2);
  }
  SECTION("help") { REQUIRE(run({"--help"}).code == 0); }
}
