#include "safegame/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "safegame/game_io.hpp"
#include "safegame/lp.hpp"
#include "safegame/malice.hpp"
#include "safegame/svg.hpp"
#include "safegame/truncation.hpp"

namespace safegame {

namespace {

using nlohmann::json;

struct Output {
  std::string primary;
  json parameters;
};

std::string supportLabel(const Support& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + std::to_string(s[i]);
  return out;
}

double requirementFor(const Command& cmd, const Game& game, Side malicious) {
  if (cmd.phi) return *cmd.phi;
  if (cmd.theta) return thresholdToRequirement(*cmd.theta, game, malicious);
  throw Error(ErrorCode::InvalidArgument, "one of --phi or --theta is required");
}

std::vector<double> phiSweep(const Command& cmd, const Eigen::MatrixXd& a) {
  if (cmd.phi) return {*cmd.phi};
  const double lo = cmd.phiMin.value_or(a.minCoeff());
  const double hi = cmd.phiMax ? *cmd.phiMax : columnMaximin(a).value;
  return linearGrid(lo, hi, cmd.phiGrid);
}

double shadeOf(double phi, const std::vector<double>& grid) {
  const double lo = grid.front(), hi = grid.back();
  return hi > lo ? (phi - lo) / (hi - lo) : 0.0;
}

void requireJson(const Command& cmd) {
  if (cmd.format != OutputFormat::json) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(toString(cmd.verb)) + " only supports --format json");
  }
}

Output runMaximin(const Command& cmd, const Game& game) {
  requireJson(cmd);
  const Side side = cmd.side.value_or(Side::column);
  const MaximinResult r = maximin(game, side);
  const Portfolio pf = portfolio(game, r.strategy);
  json doc = {{"verb", "maximin"},
              {"side", toString(side)},
              {"value", roundSignificant(r.value)},
              {"strategy", toJson(r.strategy.weights())},
              {"portfolio", toJson(pf.values)}};
  return {doc.dump(2) + "\n", {{"side", toString(side)}}};
}

Output runMaliceDefend(const Command& cmd, const Game& game) {
  requireJson(cmd);
  const Side malicious = cmd.side.value_or(Side::row);
  const double phi = requirementFor(cmd, game, malicious);
  const RestrictedStrategySet restricted = restrictedVertices(game, phi, malicious);
  const DefensiveSolution sol = generalizedMaximin(game, restricted);
  json doc = {{"verb", "malice-defend"},
              {"maliciousSide", toString(malicious)},
              {"defendingSide", toString(opponent(malicious))},
              {"phi", roundSignificant(phi)},
              {"value", roundSignificant(sol.guaranteedValue)},
              {"strategy", toJson(sol.strategy.weights())},
              {"baselineMaximin", roundSignificant(sol.baselineMaximin)},
              {"restrictedVertices", toJsonRows(restricted.vertices.transpose())}};
  if (cmd.theta) doc["theta"] = roundSignificant(*cmd.theta);
  json params = {{"side", toString(malicious)}, {"phi", phi}};
  if (cmd.theta) params["theta"] = *cmd.theta;
  return {doc.dump(2) + "\n", params};
}

Output runMaliceAttack(const Command& cmd, const Game& game) {
  requireJson(cmd);
  const Side malicious = cmd.side.value_or(Side::row);
  const double phi = requirementFor(cmd, game, malicious);
  const AttackSolution sol = generalizedMinimax(game, phi, malicious);
  json doc = {{"verb", "malice-attack"},
              {"maliciousSide", toString(malicious)},
              {"phi", roundSignificant(phi)},
              {"value", roundSignificant(sol.value)},
              {"strategy", toJson(sol.strategy.weights())},
              {"ownPortfolio", toJson(portfolio(game, sol.strategy).values)}};
  if (cmd.theta) doc["theta"] = roundSignificant(*cmd.theta);
  json params = {{"side", toString(malicious)}, {"phi", phi}};
  if (cmd.theta) params["theta"] = *cmd.theta;
  return {doc.dump(2) + "\n", params};
}

Output runSafeSpace(const Command& cmd, const Game& game) {
  const Eigen::MatrixXd& a = game.rowMatrix();
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "safe-space needs a square (symmetric-game) matrix");
  }
  const std::vector<double> grid = phiSweep(cmd, a);
  std::vector<SafeSpaceSlice> slices;
  for (double phi : grid) {
    if (cmd.fullSupportOnly) {
      SafeSpaceSlice s = safeSpaceFullSupport(a, phi);
      if (!s.empty()) slices.push_back(std::move(s));
    } else {
      for (SafeSpaceSlice& s : safeSpaceAllSupports(a, phi)) slices.push_back(std::move(s));
    }
  }

  const json params = {{"phiGrid", grid.size()},
                       {"phiMin", grid.front()},
                       {"phiMax", grid.back()},
                       {"fullSupportOnly", cmd.fullSupportOnly}};
  std::ostringstream os;
  switch (cmd.format) {
    case OutputFormat::json: {
      json records = json::array();
      for (const SafeSpaceSlice& s : slices) {
        json vertices = json::array();
        for (const Eigen::VectorXd& v : s.vertices.vertices) vertices.push_back(toJson(v));
        records.push_back({{"support", s.support},
                           {"phi", roundSignificant(s.phi)},
                           {"maximinOfSupport", roundSignificant(s.maximinOfSupport)},
                           {"vertices", vertices}});
      }
      os << json{{"verb", "safe-space"}, {"slices", records}}.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv: {
      os << "support,phi,vertex";
      for (Eigen::Index i = 0; i < a.rows(); ++i) os << ",x" << i + 1;
      os << "\n";
      for (const SafeSpaceSlice& s : slices) {
        for (std::size_t k = 0; k < s.vertices.size(); ++k) {
          os << supportLabel(s.support) << "," << formatNumber(s.phi) << "," << k;
          for (Eigen::Index i = 0; i < a.rows(); ++i) os << "," << formatNumber(s.vertices.vertices[k](i));
          os << "\n";
        }
      }
      break;
    }
    case OutputFormat::svg: {
      SvgPlot plot("Safe-space vertices (color: threshold)", "x1", a.rows() > 1 ? "x2" : "phi");
      for (const SafeSpaceSlice& s : slices) {
        for (const Eigen::VectorXd& v : s.vertices.vertices) {
          plot.addPoint(v(0), a.rows() > 1 ? v(1) : s.phi, shadeOf(s.phi, grid));
        }
      }
      os << plot.render();
      break;
    }
  }
  return {os.str(), params};
}

Output runBoundarySweep(const Command& cmd, const Game& game) {
  const Eigen::MatrixXd& a = game.rowMatrix();
  if (a.rows() != 2 || a.cols() != 2) {
    throw Error(ErrorCode::Not2x2, "boundary-sweep needs a 2x2 game");
  }
  const std::vector<double> grid = phiSweep(cmd, a);
  const std::vector<BoundaryPoint> points = twoByTwoBoundary(a, grid);
  const json params = {{"phiGrid", grid.size()}, {"phiMin", grid.front()}, {"phiMax", grid.back()}};
  std::ostringstream os;
  switch (cmd.format) {
    case OutputFormat::json: {
      json records = json::array();
      for (const BoundaryPoint& p : points) {
        records.push_back({{"phi", roundSignificant(p.phi)},
                           {"lower", roundSignificant(p.lower)},
                           {"upper", roundSignificant(p.upper)},
                           {"empty", p.empty}});
      }
      os << json{{"verb", "boundary-sweep"}, {"points", records}}.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      os << "phi,lower,upper,empty\n";
      for (const BoundaryPoint& p : points) {
        os << formatNumber(p.phi) << "," << formatNumber(p.lower) << "," << formatNumber(p.upper)
           << "," << (p.empty ? 1 : 0) << "\n";
      }
      break;
    case OutputFormat::svg: {
      SvgPlot plot("Safe frequency of type 1 vs threshold", "phi", "x1");
      std::vector<double> xs, lo, hi;
      for (const BoundaryPoint& p : points) {
        xs.push_back(p.phi);
        lo.push_back(p.lower);
        hi.push_back(p.upper);
      }
      plot.addLine(xs, hi, 1.0, "upper boundary");
      plot.addLine(xs, lo, 0.0, "lower boundary");
      os << plot.render();
      break;
    }
  }
  return {os.str(), params};
}

Output runSimulate(const Command& cmd, const GameFile& file) {
  SimConfig config;
  config.payoff = file.game.rowMatrix();
  config.population = cmd.population;
  if (!cmd.phi) throw Error(ErrorCode::InvalidArgument, "simulate needs --phi");
  config.phi = *cmd.phi;
  config.maxRounds = cmd.maxRounds;
  config.patience = cmd.patience;
  config.mode = cmd.mode;
  config.seed = cmd.seed ? *cmd.seed : std::random_device{}() * 0x9E3779B97F4A7C15ULL;
  config.sigma = file.sigma;
  const SimResult r = runSimulation(config);

  const json params = {{"phi", config.phi},
                       {"N", config.population},
                       {"seed", config.seed},
                       {"mode", cmd.mode == SimMode::deterministic ? "det" : "stoch"},
                       {"maxRounds", config.maxRounds}};
  std::ostringstream os;
  switch (cmd.format) {
    case OutputFormat::json:
      os << json{{"verb", "simulate"},
                 {"outcome", toString(r.outcome)},
                 {"roundsElapsed", r.roundsElapsed},
                 {"finalState", toJson(r.finalState.frequencies())},
                 {"seed", r.seed}}
                .dump(2)
         << "\n";
      break;
    case OutputFormat::csv:
      os << "round,type,frequency,mean_fitness\n";
      for (std::size_t k = 0; k < r.rounds.size(); ++k) {
        const SimRound& round = r.rounds[k];
        for (Eigen::Index i = 0; i < round.state.types(); ++i) {
          os << k + 1 << "," << i << "," << formatNumber(round.state[i]) << ",";
          if (std::isfinite(round.meanFitness(i))) os << formatNumber(round.meanFitness(i));
          os << "\n";
        }
      }
      break;
    case OutputFormat::svg: {
      SvgPlot plot("Type frequencies per round", "round", "frequency");
      const Eigen::Index n = config.payoff.rows();
      for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> xs, ys;
        for (std::size_t k = 0; k < r.rounds.size(); ++k) {
          xs.push_back(static_cast<double>(k + 1));
          ys.push_back(r.rounds[k].state[i]);
        }
        xs.push_back(static_cast<double>(r.rounds.size() + 1));
        ys.push_back(r.finalState[i]);
        plot.addLine(xs, ys, n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0,
                     "type " + std::to_string(i));
      }
      os << plot.render();
      break;
    }
  }
  return {os.str(), params};
}

void writeAtomically(const std::filesystem::path& path, const std::string& bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    f << bytes;
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string utcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view formatName(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::svg: return "svg";
  }
  return "json";
}

}  // namespace

std::string_view toString(Verb verb) {
  switch (verb) {
    case Verb::maximin: return "maximin";
    case Verb::maliceDefend: return "malice-defend";
    case Verb::maliceAttack: return "malice-attack";
    case Verb::safeSpace: return "safe-space";
    case Verb::boundarySweep: return "boundary-sweep";
    case Verb::simulate: return "simulate";
  }
  return "unknown";
}

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::OutOfRange:
    case ErrorCode::Not2x2:
    case ErrorCode::ParseError:
    case ErrorCode::DimensionError:
    case ErrorCode::InvalidArgument:
      return 1;
    case ErrorCode::DegenerateScale:
    case ErrorCode::InfeasibleRegion:
    case ErrorCode::EmptyRestriction:
    case ErrorCode::InfeasibleRequirement:
      return 2;
    case ErrorCode::NumericalFailure:
    case ErrorCode::UnboundedRegion:
      return 3;
  }
  return 3;
}

std::optional<Command> parseCommandLine(int argc, const char* const* argv, std::ostream& out) {
  Command cmd;
  CLI::App app{"Worst-case strategies and truncation-selection safe spaces for two-player games",
               "safegame"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string side, mode = "det", format = "json";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--game", cmd.gameFile, "Game JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cmd.out, "Write the primary output here instead of stdout");
    sub->add_option("--format", format, "json|csv|svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  };
  auto threshold = [&](CLI::App* sub) {
    auto* phi = sub->add_option("--phi", cmd.phi, "Minimum payoff requirement");
    auto* theta = sub->add_option("--theta", cmd.theta, "Risk-aversion threshold in [0, 1]");
    phi->excludes(theta);
  };
  auto sideOpt = [&](CLI::App* sub, const char* help) {
    sub->add_option("--side", side, help)->check(CLI::IsMember({"row", "col", "column"}));
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--phi-grid", cmd.phiGrid, "Number of thresholds in the sweep")
        ->check(CLI::PositiveNumber);
    sub->add_option("--phi-min", cmd.phiMin, "Sweep start (default: min of A)");
    sub->add_option("--phi-max", cmd.phiMax, "Sweep end (default: column maximin of A)");
  };

  auto* maximinCmd = app.add_subcommand("maximin", "Classical maximin value and strategy");
  common(maximinCmd);
  sideOpt(maximinCmd, "Player computing the maximin (default col)");

  auto* defend = app.add_subcommand("malice-defend", "Generalized maximin against a partially malicious opponent");
  common(defend);
  threshold(defend);
  sideOpt(defend, "The malicious player (default row)");

  auto* attack = app.add_subcommand("malice-attack", "Generalized minimax for the partially malicious player");
  common(attack);
  threshold(attack);
  sideOpt(attack, "The malicious player (default row)");

  auto* safe = app.add_subcommand("safe-space", "Safe-space vertices over a threshold sweep");
  common(safe);
  safe->add_option("--phi", cmd.phi, "Single threshold instead of a sweep");
  grid(safe);
  safe->add_flag("--full-support", cmd.fullSupportOnly, "Only the full-support slice");

  auto* boundary = app.add_subcommand("boundary-sweep", "2x2 safe interval of type 1 per threshold");
  common(boundary);
  boundary->add_option("--phi", cmd.phi, "Single threshold instead of a sweep");
  grid(boundary);

  auto* simulate = app.add_subcommand("simulate", "Agent-based independent truncation run");
  common(simulate);
  simulate->add_option("--phi", cmd.phi, "Survival threshold")->required();
  simulate->add_option("--N", cmd.population, "Population size")->check(CLI::Range(2L, 1000000000L));
  simulate->add_option("--seed", cmd.seed, "RNG seed (default: drawn from entropy)");
  simulate->add_option("--mode", mode, "det|stoch")->check(CLI::IsMember({"det", "stoch"}));
  simulate->add_option("--max-rounds", cmd.maxRounds, "Round limit")->check(CLI::PositiveNumber);
  simulate->add_option("--patience", cmd.patience, "Unchanged rounds that end a stochastic run")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::InvalidArgument, e.what());
  }

  const std::pair<CLI::App*, Verb> verbs[] = {
      {maximinCmd, Verb::maximin}, {defend, Verb::maliceDefend}, {attack, Verb::maliceAttack},
      {safe, Verb::safeSpace},     {boundary, Verb::boundarySweep}, {simulate, Verb::simulate}};
  for (const auto& [sub, verb] : verbs) {
    if (sub->parsed()) cmd.verb = verb;
  }
  if (!side.empty()) cmd.side = side == "row" ? Side::row : Side::column;
  cmd.mode = mode == "det" ? SimMode::deterministic : SimMode::stochastic;
  cmd.format = format == "csv" ? OutputFormat::csv : format == "svg" ? OutputFormat::svg : OutputFormat::json;
  return cmd;
}

int runCommand(const Command& cmd, std::ostream& out, std::ostream& err) {
  try {
    const GameFile file = readGameFile(cmd.gameFile);
    Output result;
    switch (cmd.verb) {
      case Verb::maximin: result = runMaximin(cmd, file.game); break;
      case Verb::maliceDefend: result = runMaliceDefend(cmd, file.game); break;
      case Verb::maliceAttack: result = runMaliceAttack(cmd, file.game); break;
      case Verb::safeSpace: result = runSafeSpace(cmd, file.game); break;
      case Verb::boundarySweep: result = runBoundarySweep(cmd, file.game); break;
      case Verb::simulate: result = runSimulate(cmd, file); break;
    }
    if (!cmd.out) {
      out << result.primary;
      return 0;
    }
    writeAtomically(*cmd.out, result.primary);
    const json record = {
        {"tool", "safegame"},
        {"toolVersion", kToolVersion},
        {"timestamp", utcTimestamp()},
        {"verb", toString(cmd.verb)},
        {"inputs",
         {{"game", cmd.gameFile.string()},
          {"matrixDigest", digest(toJson(file.game).dump())},
          {"parameters", result.parameters}}},
        {"outputs",
         {{"path", cmd.out->string()},
          {"format", formatName(cmd.format)},
          {"bytes", result.primary.size()},
          {"digest", digest(result.primary)}}}};
    std::filesystem::path recordPath = *cmd.out;
    recordPath += ".run.json";
    writeAtomically(recordPath, record.dump(2) + "\n");
    return 0;
  } catch (const Error& e) {
    err << "safegame: " << e.what() << "\n";
    return exitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "safegame: " << e.what() << "\n";
    return 1;
  }
}

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<Command> cmd;
  try {
    cmd = parseCommandLine(argc, argv, out);
  } catch (const Error& e) {
    err << "safegame: " << e.what() << "\n";
    return exitCodeFor(e.code());
  }
  if (!cmd) return 0;
  return runCommand(*cmd, out, err);
}

}  // namespace safegame
