#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "critlimit/limitlab.hpp"

namespace critlimit::cli {

/// A problem file after parsing. Fields the file omits stay empty; `g_random`
/// marks g = "random", resolved from the seed at run time.
struct Problem {
  std::string name;
  VarietySpec X;
  std::optional<Polynomial> f;
  std::optional<Polynomial> g;
  bool g_random = false;
  std::optional<Complex> t;
  std::optional<std::vector<Complex>> u;
  std::vector<StratumSpec> strata;
  std::optional<EulerCheck> euler;
  std::vector<std::vector<Complex>> points;  // Milnor evaluation points
  std::optional<std::uint64_t> seed;
  nlohmann::json tolerances = nlohmann::json::object();
};

/// Throws InputError (or ParseError) on anything malformed.
Problem parse_problem(const nlohmann::json& doc);
Problem load_problem(const std::filesystem::path& path);

/// A number, or a [re, im] pair.
Complex parse_complex(const nlohmann::json& value);

}  // namespace critlimit::cli
