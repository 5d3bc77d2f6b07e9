#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "safegame/cli.hpp"
#include "safegame/game_io.hpp"
#include "safegame/lp.hpp"
#include "safegame/polytope.hpp"
#include "test_support.hpp"

using namespace safegame;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "safegame");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = runCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json cliJson(std::vector<std::string> args) {
  const Run r = cli(std::move(args));
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Eigen::VectorXd vec(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

// Scratch directory removed on scope exit.
struct ScratchDir {
  fs::path path;
  ScratchDir() {
    path = fs::temp_directory_path() / ("safegame_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

const std::string asym = testing::dataPath("asymmetric_4x3.json");
const std::string sym = testing::dataPath("symmetric_3x3.json");
const std::string hd = testing::dataPath("hawk_dove.json");

}  // namespace

TEST_CASE("game files") {
  const Game g = parseGameFile(asym);
  CHECK(g.rows() == 4);
  CHECK(g.cols() == 3);
  CHECK(g.rowMatrix() == testing::example4x3A());
  CHECK(g.colMatrix() == testing::example4x3B());

  const Game s = parseGameFile(sym);
  CHECK(s.colMatrix() == s.rowMatrix().transpose());

  CHECK(readGameFile(hd).sigma.has_value());

  CHECK(testing::throwsCode([] { parseGameText(R"({"A": [[1, 2], [3, 4]], "B": [[1,2,3],[4,5,6],[7,8,9]]})"); },
                            ErrorCode::DimensionError));
  CHECK(testing::throwsCode([] { parseGameText(R"({"A": [[1, 2], [3]]})"); }, ErrorCode::DimensionError));
  CHECK(testing::throwsCode([] { parseGameText(R"({"A": [[1, "x"]]})"); }, ErrorCode::ParseError));
  CHECK(testing::throwsCode([] { parseGameText("{not json"); }, ErrorCode::ParseError));
  CHECK(testing::throwsCode([] { parseGameText(R"({"B": [[1]]})"); }, ErrorCode::ParseError));
}

TEST_CASE("maximin verb") {
  const json col = cliJson({"maximin", "--game", asym});
  CHECK(col["value"].get<double>() == doctest::Approx(-33.48).epsilon(0.001));
  CHECK(col["side"] == "column");
  const json row = cliJson({"maximin", "--game", asym, "--side", "row"});
  CHECK(row["value"].get<double>() == doctest::Approx(28));
  CHECK(cli({"maximin", "--game", asym, "--format", "csv"}).code == 1);
}

TEST_CASE("malice verbs at the reported threshold") {
  const json d = cliJson({"malice-defend", "--game", asym, "--theta", "0.22"});
  CHECK(d["value"].get<double>() == doctest::Approx(-31.73).epsilon(0.0005));
  CHECK(d["strategy"][0].get<double>() == doctest::Approx(0.54).epsilon(0.01));
  CHECK(d["strategy"][1].get<double>() == doctest::Approx(0).scale(1));
  CHECK(d["strategy"][2].get<double>() == doctest::Approx(0.46).epsilon(0.01));
  CHECK(d["phi"].get<double>() == doctest::Approx(-53.9));

  const json a = cliJson({"malice-attack", "--game", asym, "--theta", "0.22"});
  CHECK(a["value"].get<double>() == doctest::Approx(d["value"].get<double>()).epsilon(1e-9));
  CHECK(cli({"malice-defend", "--game", asym}).code == 1);
  CHECK(cli({"malice-defend", "--game", asym, "--phi", "1", "--theta", "0.5"}).code == 1);
  CHECK(cli({"malice-defend", "--game", asym, "--phi", "40"}).code == 2);
  CHECK(cli({"malice-attack", "--game", asym, "--theta", "1.5"}).code == 1);
}

TEST_CASE("safe-space sweep: the full support vanishes above the maximin") {
  const json j = cliJson({"safe-space", "--game", sym, "--phi-grid", "101", "--full-support"});
  const double maximin = columnMaximin(testing::threeType()).value;
  REQUIRE_FALSE(j["slices"].empty());
  double highest = -1e300;
  for (const json& s : j["slices"]) {
    CHECK(s["support"] == json({0, 1, 2}));
    highest = std::max(highest, s["phi"].get<double>());
  }
  CHECK(highest <= maximin + 1e-9);
  CHECK(highest == doctest::Approx(maximin));  // the grid ends at the maximin

  const json below = cliJson({"safe-space", "--game", sym, "--phi", "6.2", "--full-support"});
  CHECK(below["slices"].size() == 1);
  const json above = cliJson({"safe-space", "--game", sym, "--phi", "6.3", "--full-support"});
  CHECK(above["slices"].empty());
  CHECK(cli({"safe-space", "--game", asym, "--phi", "0"}).code == 1);
}

TEST_CASE("boundary sweep") {
  const json j = cliJson({"boundary-sweep", "--game", hd, "--phi-min", "-25", "--phi-max", "16", "--phi-grid", "42"});
  REQUIRE(j["points"].size() == 42);
  for (const json& p : j["points"]) {
    const double phi = p["phi"].get<double>();
    if (phi > 15 + 1e-9) {
      CHECK(p["empty"].get<bool>());
      continue;
    }
    CHECK_FALSE(p["empty"].get<bool>());
    // Hawks survive while 45 - 70x ≥ φ, doves while 15 - 10x ≥ φ.
    const double upper = std::min({1.0, (45 - phi) / 70, (15 - phi) / 10});
    CHECK(p["upper"].get<double>() == doctest::Approx(upper).scale(1));
    CHECK(p["lower"].get<double>() <= p["upper"].get<double>());
  }
  CHECK(cli({"boundary-sweep", "--game", sym}).code == 1);
}

TEST_CASE("simulate verb") {
  const json j = cliJson({"simulate", "--game", hd, "--phi", "16", "--N", "1000", "--seed", "3"});
  CHECK(j["outcome"] == "extinction");
  CHECK(j["seed"] == 3);
  const json s = cliJson({"simulate", "--game", hd, "--phi", "0", "--N", "500", "--seed", "4", "--mode", "stoch"});
  CHECK(s["finalState"].size() == 2);
  CHECK(cliJson({"simulate", "--game", hd, "--phi", "0", "--N", "500", "--seed", "4", "--mode", "stoch"}) == s);

  const Run csv = cli({"simulate", "--game", hd, "--phi", "0", "--N", "100", "--seed", "1", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("round,type,frequency,mean_fitness\n", 0) == 0);
  CHECK(cli({"simulate", "--game", hd, "--N", "100"}).code == 1);
  CHECK(cli({"simulate", "--game", hd, "--phi", "0", "--N", "1"}).code == 1);
}

TEST_CASE("exit codes") {
  ScratchDir dir;
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"maximin", "--game", (dir.path / "missing.json").string()}).code == 1);
  CHECK(cli({"maximin", "--game", dir.write("bad.json", "{oops").string()}).code == 1);
  CHECK(cli({"maximin", "--game", dir.write("ragged.json", R"({"A": [[1, 2], [3]]})").string()}).code == 1);
  CHECK(cli({"maximin", "--game", asym, "--side", "diagonal"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"--version"}).code == 0);
  CHECK(exitCodeFor(ErrorCode::InfeasibleRequirement) == 2);
  CHECK(exitCodeFor(ErrorCode::EmptyRestriction) == 2);
  CHECK(exitCodeFor(ErrorCode::NumericalFailure) == 3);
  CHECK(exitCodeFor(ErrorCode::UnboundedRegion) == 3);
  CHECK(exitCodeFor(ErrorCode::Not2x2) == 1);
}

TEST_CASE("file output is atomic, byte-identical across runs and has a run record") {
  ScratchDir dir;
  for (const char* format : {"json", "csv", "svg"}) {
    const fs::path out = dir.path / (std::string("space.") + format);
    const std::vector<std::string> args{"safe-space", "--game", sym, "--phi-grid", "11",
                                        "--format", format, "--out", out.string()};
    REQUIRE(cli(args).code == 0);
    const std::string first = slurp(out);
    REQUIRE(cli(args).code == 0);
    CHECK(slurp(out) == first);
    CHECK_FALSE(first.empty());

    const json record = json::parse(slurp(out.string() + ".run.json"));
    CHECK(record["verb"] == "safe-space");
    CHECK(record["toolVersion"] == kToolVersion);
    CHECK(record["outputs"]["bytes"] == first.size());
    CHECK(record["outputs"]["digest"] == digest(first));
    CHECK(record["outputs"]["format"] == format);
    CHECK(record["inputs"]["parameters"]["phiGrid"] == 11);
    CHECK(record["inputs"]["matrixDigest"].is_string());
  }
  for (const fs::directory_entry& e : fs::directory_iterator(dir.path)) {
    CHECK(e.path().string().find(".tmp") == std::string::npos);
  }
}

TEST_CASE("property: emitted strategies and vertices validate on re-read") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  ScratchDir dir;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Game g(testing::randomMatrix(rng, n, n), testing::randomMatrix(rng, n, n));
    const std::string path = dir.write("g.json", toJson(g).dump()).string();

    const json m = cliJson({"maximin", "--game", path});
    const Eigen::VectorXd q = vec(m["strategy"]);
    CHECK_NOTHROW(MixedStrategy(q, Side::column));
    CHECK((g.colMatrix() * q).minCoeff() >= m["value"].get<double>() - 1e-6);

    const std::string theta = std::to_string(unit(rng));
    const json d = cliJson({"malice-defend", "--game", path, "--theta", theta});
    const double phi = d["phi"].get<double>();
    for (const json& v : d["restrictedVertices"]) {
      const Eigen::VectorXd p = vec(v);
      CHECK(p.sum() == doctest::Approx(1).epsilon(1e-6));
      CHECK(p.minCoeff() >= -1e-6);
      CHECK((g.rowMatrix().transpose() * p).minCoeff() >= phi - 1e-6);
      // The reported guarantee holds against every emitted vertex.
      CHECK(p.dot(g.colMatrix() * vec(d["strategy"])) >= d["value"].get<double>() - 1e-6);
    }

    const json s = cliJson({"safe-space", "--game", path, "--phi-grid", "5"});
    for (const json& slice : s["slices"]) {
      HRep h = HRep::simplex(n);
      const auto support = slice["support"].get<std::vector<Eigen::Index>>();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::find(support.begin(), support.end(), i) == support.end()) {
          h.addEquality(Eigen::RowVectorXd::Unit(n, i), 0.0);
        } else {
          h.addInequality(g.rowMatrix().row(i), slice["phi"].get<double>());
        }
      }
      for (const json& v : slice["vertices"]) CHECK(contains(h, vec(v), 1e-6));
    }
  }
}

TEST_CASE("the installed executable runs end to end") {
  ScratchDir dir;
  const fs::path out = dir.path / "maximin.json";
  const std::string command = std::string("\"") + SAFEGAME_CLI_PATH + "\" maximin --game \"" + asym +
                              "\" --out \"" + out.string() + "\"";
  REQUIRE(std::system(command.c_str()) == 0);
  CHECK(json::parse(slurp(out))["value"].get<double>() == doctest::Approx(-33.48).epsilon(0.001));
  const std::string bad = std::string("\"") + SAFEGAME_CLI_PATH + "\" malice-defend --game \"" + asym +
                          "\" --phi 40 2>/dev/null";
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
