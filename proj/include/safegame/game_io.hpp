#ifndef SAFEGAME_GAME_IO_HPP
#define SAFEGAME_GAME_IO_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "safegame/core.hpp"

namespace safegame {

// A game file, plus the optional per-interaction sigma matrix used by the
// stochastic simulator.
struct GameFile {
  Game game;
  std::optional<Eigen::MatrixXd> sigma;
};

/// Game JSON: {"rows": m, "cols": n, "A": [[...]], "B": [[...]], "labels": {...}}.
/// "B" may be omitted for a symmetric game (B = Aᵀ). Throws ParseError for
/// malformed JSON or fields, DimensionError for ragged or mismatched shapes.
GameFile parseGameJson(const nlohmann::json& doc);
GameFile parseGameText(std::string_view text);
GameFile readGameFile(const std::filesystem::path& path);
Game parseGameFile(const std::filesystem::path& path);

nlohmann::json toJson(const Game& game);

// Numbers are written with 12 significant digits.
double roundSignificant(double value);
std::string formatNumber(double value);
nlohmann::json toJson(const Eigen::Ref<const Eigen::VectorXd>& v);
nlohmann::json toJsonRows(const Eigen::Ref<const Eigen::MatrixXd>& m);

// 64-bit FNV-1a, hex encoded.
std::string digest(std::string_view bytes);

}  // namespace safegame

#endif  // SAFEGAME_GAME_IO_HPP
