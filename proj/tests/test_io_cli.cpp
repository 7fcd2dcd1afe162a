#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qsobp/cli.hpp"
#include "qsobp/error.hpp"
#include "qsobp/four_types.hpp"
#include "qsobp/io.hpp"
#include "qsobp/random.hpp"

using namespace qsobp;
namespace fs = std::filesystem;
using io::json;

namespace {

const fs::path kData = fs::path(QSOBP_SOURCE_DIR) / "data";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qsobp");
  std::ostringstream out, err;
  const int code = qsobp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qsobp_test_io_cli";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("double formatting round-trips") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = uniform_open(-10, 10, rng);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("state parsing") {
  const auto s = io::parse_state("0.2,0.8;0.25,0.75");
  CHECK(s.n() == 2);
  CHECK(s.male[0] == 0.25);
  CHECK_THROWS_AS((void)io::parse_state("0.2,0.8"), Error);
  CHECK_THROWS_AS((void)io::parse_state("0.2,x;1"), Error);
  CHECK_THROWS_AS((void)io::parse_state("0.2,0.9;1"), Error);
}

TEST_CASE("construction schema errors name the field") {
  json doc = io::read_json_file(kData / "three_vertex.json");
  doc.erase("alleles");
  try {
    (void)io::parse_construction(doc);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Schema);
    CHECK(std::string(e.what()).find("alleles") != std::string::npos);
  }
  doc = io::read_json_file(kData / "three_vertex.json");
  doc["female_weights"].erase("3");
  CHECK_THROWS_AS((void)io::parse_construction(doc), Error);
  doc = io::read_json_file(kData / "three_vertex.json");
  doc["female_weights"]["2"] = 1.0;
  try {
    (void)io::parse_construction(doc);
    FAIL("expected schema error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("female_weights.2") != std::string::npos);
  }
  doc = io::read_json_file(kData / "three_vertex.json");
  doc["edges"] = json::array({json::array({1})});
  CHECK_THROWS_AS((void)io::parse_construction(doc), Error);
}

TEST_CASE("syntax errors report a position") {
  const auto bad = scratch("bad.json");
  io::write_text_file(bad, "{\n  \"n\": 2,\n  oops\n}\n");
  try {
    (void)io::read_json_file(bad);
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Schema);
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  try {
    (void)io::read_json_file(scratch("missing.json"));
    FAIL("expected I/O error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("operator json round-trip is exact") {
  const auto input = io::parse_construction(io::read_json_file(kData / "three_vertex.json"));
  const auto op = build_operator(input.space, input.weights);
  const auto path = scratch("op.json");
  io::write_text_file(path, io::dump(io::operator_to_json(op)));
  const auto back = io::operator_from_json(io::read_json_file(path));
  CHECK(back == op);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto s = random_state(4, 4, rng);
    CHECK(apply(back, s) == apply(op, s));
  }
}

TEST_CASE("construct command") {
  const auto out = scratch("construct_op.json");
  auto r = run_cli({"construct", "--input", (kData / "connected.json").string(), "-o", out.string()});
  REQUIRE(r.code == qsobp::cli::kExitOk);
  CHECK(r.out.find("identity=true") != std::string::npos);
  CHECK(r.out.find("connected=true") != std::string::npos);
  r = run_cli({"construct", "--input", (kData / "two_vertex.json").string(), "-o", out.string()});
  REQUIRE(r.code == qsobp::cli::kExitOk);
  CHECK(r.out.find("identity=false") != std::string::npos);
  const auto op = io::operator_from_json(io::read_json_file(out));
  CHECK(op.tensors().pf(1, 0, 0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == qsobp::cli::kExitInput);
  CHECK(run_cli({"bogus"}).code == qsobp::cli::kExitInput);
  CHECK(run_cli({"iterate", "--model", "two", "--a", "0.4", "--b", "0.5"}).code == qsobp::cli::kExitInput);
  CHECK(run_cli({"iterate", "--model", "two", "--a", "1.4", "--b", "0.5", "--state", "0.2,0.2"}).code ==
        cli::kExitInput);
  CHECK(run_cli({"construct", "--input", scratch("nope.json").string(), "-o", scratch("x.json").string()}).code ==
        cli::kExitIo);
  CHECK(run_cli({"construct", "--input", (kData / "two_vertex.json").string(), "-o", "/nonexistent/dir/x.json"}).code ==
        cli::kExitIo);
  CHECK(run_cli({"iterate", "--model", "two", "--operator", "x.json", "--a", "0.4", "--b", "0.5", "--state", "0.2,0.2"})
            .code == qsobp::cli::kExitInput);
  CHECK(run_cli({"--help"}).code == qsobp::cli::kExitOk);
}

TEST_CASE("iterate on the two-type model") {
  const auto r = run_cli({"iterate", "--model", "two", "--a", "0.4", "--b", "0.5", "--state", "0.2,0.8;0.25,0.75"});
  REQUIRE(r.code == 0);
  const json s = json::parse(r.out);
  CHECK(s["seed"] == 42);
  const json& t = s["trajectories"][0];
  CHECK(t["converged"] == true);
  CHECK(t["limit"]["x"][0].get<double>() == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(t["limit"]["y"][1].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t["drifts"]["invariant_line_c"].get<double>() <= 1e-12);
}

TEST_CASE("iterate from a fixed point takes no steps") {
  const auto r = run_cli({"iterate", "--model", "two", "--a", "0.4", "--b", "0.5", "--state", "0.3,0"});
  const json t = json::parse(r.out)["trajectories"][0];
  CHECK(t["steps"] == 0);
  CHECK(t["converged"] == true);
}

TEST_CASE("iterate on the four-type model writes a trajectory") {
  const auto csv = scratch("four.csv");
  const auto sum = scratch("four.json");
  const auto r = run_cli({"iterate", "--model", "four", "--a", "0.7", "--b", "0.3", "--c", "0.7", "--d", "0.3",
                      "--a0", "0.4", "--c0", "0.6", "--state", "0.1,0.2,0.3,0.1", "-o", csv.string(),
                      "--summary", sum.string()});
  REQUIRE(r.code == 0);
  const json t = io::read_json_file(sum)["trajectories"][0];
  const auto lim = t["limit"];
  CHECK(lim["x"][0].get<double>() == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(lim["x"][3].get<double>() == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(lim["y"][0].get<double>() == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(lim["y"][3].get<double>() == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(t["drifts"]["x1_plus_x2"].get<double>() <= 1e-12);
  const std::string text = slurp(csv);
  CHECK(text.rfind("step,x_1,x_2,x_3,x_4,y_1,y_2,y_3,y_4\n", 0) == 0);
}

TEST_CASE("iterate over a grid of starts") {
  const auto r = run_cli({"iterate", "--model", "two", "--a", "0.4", "--b", "0.5", "--state", "grid:3"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["trajectories"].size() == 9);
}

TEST_CASE("fixed-points, classify, predict") {
  auto r = run_cli({"fixed-points", "--model", "four", "--a", "0.3", "--b", "0.7", "--c", "0.3", "--d", "0.7",
                "--a0", "0.5", "--c0", "0.5"});
  REQUIRE(r.code == 0);
  json d = json::parse(r.out);
  CHECK(d["w1"]["agree"] == true);
  CHECK(d["w1"]["found"].size() == 2);
  CHECK(d["w2"]["agree"] == true);

  r = run_cli({"classify", "--model", "four", "--a", "0.3", "--b", "0.7", "--c", "0.3", "--d", "0.7", "--a0", "0.5",
           "--c0", "0.5"});
  d = json::parse(r.out);
  CHECK(d["w1"][0]["kind"] == "attracting");
  CHECK(d["w1"][1]["kind"] == "saddle");
  CHECK(d["w2"][0]["kind"] == "saddle");

  r = run_cli({"predict", "--model", "two", "--a", "0.8", "--b", "0.5", "--state", "0.6,0.5"});
  d = json::parse(r.out);
  CHECK(d["limit"]["y"][0].get<double>() == doctest::Approx(0.25));
  r = run_cli({"predict", "--critical-line", "--a", "0.75", "--a0", "0.5", "--c0", "0.5", "--state", "0.1"});
  CHECK(json::parse(r.out)["limit"].get<double>() == doctest::Approx(0.5));
  r = run_cli({"predict", "--model", "two", "--a", "0.8", "--b", "0.5", "--state", "1,0.5"});
  CHECK(json::parse(r.out)["fixed_point"] == true);
}

TEST_CASE("verify over a parameter grid") {
  auto r = run_cli({"verify", "--model", "four", "--b", "0.3", "--d", "0.3", "--grid", "4"});
  REQUIRE(r.code == 0);
  json d = json::parse(r.out);
  CHECK(d["summary"]["cells"] == 16);
  CHECK(d["summary"]["pass"] == true);
  // 0.5 + 0.5 on the grid diagonal routes to the T-map check
  bool routed = false;
  for (const auto& c : d["cells"]) routed = routed || c["route"] == "t_map";
  CHECK(routed);

  r = run_cli({"verify", "--model", "two", "--grid", "3"});
  CHECK(json::parse(r.out)["summary"]["pass"] == true);
  r = run_cli({"verify", "--critical-line", "--a0", "0.4", "--c0", "0.6", "--grid", "5"});
  CHECK(json::parse(r.out)["summary"]["pass"] == true);
}

TEST_CASE("verify recognizes constructed operators") {
  const auto op = scratch("verify_op.json");
  REQUIRE(run_cli({"construct", "--input", (kData / "three_vertex.json").string(), "-o", op.string()}).code == 0);
  auto r = run_cli({"verify", "--operator", op.string(), "--samples", "5"});
  json d = json::parse(r.out);
  CHECK(d["recognized"] == "four_type");
  CHECK(d["summary"]["pass"] == true);
  r = run_cli({"verify", "--construction", (kData / "connected.json").string(), "--samples", "3"});
  d = json::parse(r.out);
  CHECK(d["recognized"] == "identity");
  CHECK(d["summary"]["pass"] == true);
}

TEST_CASE("verify writes phase portraits") {
  const auto csv = scratch("portrait.csv");
  const auto r = run_cli({"verify", "--model", "four", "--b", "0.3", "--d", "0.3", "--a0", "0.5", "--c0", "0.5",
                      "--grid", "2", "--portrait", csv.string()});
  REQUIRE(r.code == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("figure,traj,step,x,y\n", 0) == 0);
  CHECK(text.find("\n3,") != std::string::npos);
}

TEST_CASE("sweep") {
  auto r = run_cli({"sweep", "--model", "four", "--a", "0.3", "--c", "0.3", "--d", "0.5", "--param", "b", "--from",
                "0.3", "--to", "0.7", "--steps", "5"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1].find(",row1,") != std::string::npos);
  CHECK(rows[3].find(",critical_bd,") != std::string::npos);
  CHECK(rows[5].find(",row2,") != std::string::npos);

  r = run_cli({"sweep", "--model", "two", "--param", "a", "--steps", "0"});
  CHECK(r.out == "a,b,x1,x2,y1,y2,lim_x1,lim_x2,lim_y1,lim_y2,class,converged,steps,error\n");

  r = run_cli({"sweep", "--critical-line", "--a0", "0.4", "--c0", "0.6", "--param", "a", "--from", "0.49", "--to",
           "0.51", "--steps", "3", "--state", "0.9"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find(",t3,") != std::string::npos);

  // out-of-range rows record an error and the run continues
  r = run_cli({"sweep", "--model", "two", "--param", "a", "--from", "0", "--to", "0.5", "--steps", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("InvalidParameter") != std::string::npos);
}

TEST_CASE("pipeline output is deterministic") {
  const auto op = scratch("det_op.json");
  auto once = [&](const std::string& tag) {
    REQUIRE(run_cli({"construct", "--input", (kData / "three_vertex.json").string(), "-o", op.string()}).code == 0);
    const auto csv = scratch("det_" + tag + ".csv");
    const auto sum = scratch("det_" + tag + ".json");
    REQUIRE(run_cli({"iterate", "--operator", op.string(), "--state", "0.1,0.2,0.3,0.4;0.4,0.3,0.2,0.1", "-o",
                 csv.string(), "--summary", sum.string()})
                .code == 0);
    const auto rep = scratch("det_" + tag + "_verify.json");
    REQUIRE(run_cli({"verify", "--operator", op.string(), "--samples", "4", "--seed", "7", "-o", rep.string()}).code == 0);
    return slurp(op) + slurp(csv) + slurp(sum) + slurp(rep);
  };
  CHECK(once("a") == once("b"));
}
