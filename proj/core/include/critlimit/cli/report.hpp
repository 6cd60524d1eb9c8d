#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "critlimit/limitlab.hpp"

// Complex numbers serialize as [re, im].
template <>
struct nlohmann::adl_serializer<std::complex<double>> {
  static void to_json(json& j, const std::complex<double>& z) { j = json::array({z.real(), z.imag()}); }
};

namespace critlimit::cli {

nlohmann::json point_json(const CVec& x);
/// Lexicographically sorted on (re, im) pairs.
nlohmann::json sorted_points(std::vector<CVec> points);
nlohmann::json point_set(PointSet set);

nlohmann::json path_counts(const SolveReport& report);
nlohmann::json path_table(const SolveReport& report);
nlohmann::json family_path_table(const LimitComputation& lc);
nlohmann::json strata_table(const std::vector<StratumReport>& strata);

/// Every option that influences the result, defaults included.
nlohmann::json config_json(const LimitOptions& opts, std::uint64_t seed);

}  // namespace critlimit::cli
