#include "safegame/game_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace safegame {

namespace {

using nlohmann::json;

Eigen::MatrixXd readMatrix(const json& doc, const std::string& field) {
  const json& node = doc.at(field);
  if (!node.is_array() || node.empty()) {
    throw Error(ErrorCode::ParseError, "field '" + field + "' must be a nonempty array of rows");
  }
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!node[i].is_array()) {
      throw Error(ErrorCode::ParseError,
                  "field '" + field + "' row " + std::to_string(i) + " is not an array");
    }
    if (i == 0) cols = node[i].size();
    if (node[i].size() != cols || cols == 0) {
      throw Error(ErrorCode::DimensionError, "field '" + field + "' row " + std::to_string(i) +
                                                 " has " + std::to_string(node[i].size()) +
                                                 " entries, expected " + std::to_string(cols));
    }
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const json& v = node[i][j];
      if (!v.is_number()) {
        throw Error(ErrorCode::ParseError, "field '" + field + "' entry [" + std::to_string(i) +
                                               "][" + std::to_string(j) + "] is not a number");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.get<double>();
    }
  }
  return m;
}

std::vector<std::string> readLabels(const json& labels, const char* key) {
  if (!labels.contains(key)) return {};
  const json& node = labels.at(key);
  if (!node.is_array()) {
    throw Error(ErrorCode::ParseError, std::string("labels.") + key + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const json& s : node) {
    if (!s.is_string()) {
      throw Error(ErrorCode::ParseError, std::string("labels.") + key + " must be an array of strings");
    }
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

GameFile parseGameJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "game file must be a JSON object");
  if (!doc.contains("A")) throw Error(ErrorCode::ParseError, "missing field 'A'");

  const Eigen::MatrixXd a = readMatrix(doc, "A");
  const bool symmetric = !doc.contains("B");
  if (symmetric && a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionError, "symmetric shorthand needs a square 'A'");
  }
  const Eigen::MatrixXd b = symmetric ? Eigen::MatrixXd(a.transpose()) : readMatrix(doc, "B");
  if (b.rows() != a.rows() || b.cols() != a.cols()) {
    throw Error(ErrorCode::DimensionError,
                "'A' is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " but 'B' is " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  for (const char* key : {"rows", "cols"}) {
    if (!doc.contains(key)) continue;
    if (!doc.at(key).is_number_integer()) {
      throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be an integer");
    }
    const auto declared = doc.at(key).get<long long>();
    const auto actual = std::string(key) == "rows" ? a.rows() : a.cols();
    if (declared != actual) {
      throw Error(ErrorCode::DimensionError, std::string("field '") + key + "' says " +
                                                 std::to_string(declared) + ", matrix has " +
                                                 std::to_string(actual));
    }
  }

  std::vector<std::string> rowLabels, colLabels;
  if (doc.contains("labels")) {
    const json& labels = doc.at("labels");
    if (!labels.is_object()) throw Error(ErrorCode::ParseError, "field 'labels' must be an object");
    rowLabels = readLabels(labels, "rows");
    colLabels = readLabels(labels, "cols");
    if (symmetric && colLabels.empty()) colLabels = rowLabels;
    if ((!rowLabels.empty() && std::ssize(rowLabels) != a.rows()) ||
        (!colLabels.empty() && std::ssize(colLabels) != a.cols())) {
      throw Error(ErrorCode::DimensionError, "label counts do not match the matrix shape");
    }
  }

  GameFile file{Game(a, b, rowLabels, colLabels), std::nullopt};
  if (doc.contains("sigma")) {
    Eigen::MatrixXd sigma = readMatrix(doc, "sigma");
    if (sigma.rows() != a.rows() || sigma.cols() != a.cols()) {
      throw Error(ErrorCode::DimensionError, "'sigma' must match the shape of 'A'");
    }
    file.sigma = std::move(sigma);
  }
  return file;
}

GameFile parseGameText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    return parseGameJson(doc);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

GameFile readGameFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open game file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parseGameText(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

Game parseGameFile(const std::filesystem::path& path) { return readGameFile(path).game; }

json toJson(const Game& game) {
  json doc = {{"rows", game.rows()},
              {"cols", game.cols()},
              {"A", toJsonRows(game.rowMatrix())},
              {"B", toJsonRows(game.colMatrix())}};
  if (!game.rowLabels().empty() || !game.colLabels().empty()) {
    doc["labels"] = {{"rows", game.rowLabels()}, {"cols", game.colLabels()}};
  }
  return doc;
}

double roundSignificant(double value) { return std::strtod(formatNumber(value).c_str(), nullptr); }

std::string formatNumber(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

json toJson(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(roundSignificant(v(i)));
  return out;
}

json toJsonRows(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(toJson(m.row(i).transpose()));
  return out;
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace safegame
