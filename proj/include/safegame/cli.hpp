#ifndef SAFEGAME_CLI_HPP
#define SAFEGAME_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "safegame/core.hpp"
#include "safegame/sim.hpp"

namespace safegame {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Verb { maximin, maliceDefend, maliceAttack, safeSpace, boundarySweep, simulate };
enum class OutputFormat { json, csv, svg };

std::string_view toString(Verb verb);

struct Command {
  Verb verb = Verb::maximin;
  std::filesystem::path gameFile;
  std::optional<double> phi;
  std::optional<double> theta;
  // Player computing a maximin (default column); for malice verbs, the
  // malicious player (default row).
  std::optional<Side> side;
  int phiGrid = 101;
  std::optional<double> phiMin;
  std::optional<double> phiMax;
  bool fullSupportOnly = false;
  long population = 10000;
  std::optional<std::uint64_t> seed;
  SimMode mode = SimMode::deterministic;
  int maxRounds = 1000;
  int patience = 10;
  std::optional<std::filesystem::path> out;
  OutputFormat format = OutputFormat::json;
};

// Exit codes: 0 ok, 1 input error, 2 infeasible model, 3 numerical failure.
int exitCodeFor(ErrorCode code);

/// Parses argv into a Command. Throws Error(InvalidArgument) on bad usage;
/// returns nullopt after printing help.
std::optional<Command> parseCommandLine(int argc, const char* const* argv, std::ostream& out);

/// Runs one verb. The primary output goes to `cmd.out` (written atomically,
/// with a `<out>.run.json` run record beside it) or to `out`.
int runCommand(const Command& cmd, std::ostream& out, std::ostream& err);

// parseCommandLine + runCommand with error-to-exit-code mapping.
int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace safegame

#endif  // SAFEGAME_CLI_HPP
