#include "critlimit/cli/problem.hpp"

#include <fstream>

namespace critlimit::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kKeys = {"name",   "description", "variables", "ideal",       "codim",
                                        "parametrization", "f", "g",         "t",           "u",
                                        "strata", "euler",       "points",    "seed",        "tolerances"};

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw InputError(std::string("problem file is missing \"") + key + "\"");
  return doc.at(key);
}

std::string text(const json& value, const std::string& what) {
  if (!value.is_string()) throw InputError(what + " must be a string");
  return value.get<std::string>();
}

Polynomial expression(const json& value, const VariableTable& vars, const std::string& what) {
  try {
    return parse_polynomial(text(value, what), vars);
  } catch (const ParseError& e) {
    throw ParseError(what + ": " + e.what(), e.position());
  }
}

std::vector<Polynomial> expressions(const json& value, const VariableTable& vars, const std::string& what) {
  if (!value.is_array()) throw InputError(what + " must be a list of expressions");
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(expression(value[i], vars, what + "[" + std::to_string(i) + "]"));
  }
  return out;
}

VariableTable variables(const json& value, const std::string& what) {
  if (!value.is_array()) throw InputError(what + " must be a list of names");
  std::vector<std::string> names;
  for (const auto& v : value) names.push_back(text(v, what));
  return VariableTable(std::move(names));
}

std::vector<Complex> complex_list(const json& value, const std::string& what) {
  if (!value.is_array()) throw InputError(what + " must be a list of numbers");
  std::vector<Complex> out;
  for (const auto& v : value) out.push_back(parse_complex(v));
  return out;
}

Parametrization parametrization(const json& doc, const VariableTable& coords, const std::string& what) {
  Parametrization p;
  p.params = variables(require(doc, "params"), what + ".params");
  p.map = expressions(require(doc, "map"), p.params, what + ".map");
  if (p.map.size() != coords.size()) throw InputError(what + ".map needs one entry per coordinate");
  if (doc.contains("fiber")) p.fiber = doc.at("fiber").get<int>();
  return p;
}

}  // namespace

Complex parse_complex(const json& value) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  throw InputError("expected a number or a [re, im] pair, got " + value.dump());
}

namespace {

Problem parse_document(const json& doc) {
  if (!doc.is_object()) throw InputError("problem file must hold a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw InputError("unknown problem key \"" + key + "\"");
  }
  Problem p;
  if (doc.contains("name")) p.name = text(doc.at("name"), "name");
  p.X.coords = variables(require(doc, "variables"), "variables");
  if (p.X.coords.empty()) throw InputError("variables must not be empty");
  const auto& vars = p.X.coords;
  if (doc.contains("ideal")) p.X.ideal = expressions(doc.at("ideal"), vars, "ideal");
  p.X.codim = doc.contains("codim") ? doc.at("codim").get<std::size_t>() : p.X.ideal.size();
  if (doc.contains("parametrization")) p.X.parametrization = parametrization(doc.at("parametrization"), vars, "parametrization");
  p.X.validate();

  if (doc.contains("f")) p.f = expression(doc.at("f"), vars, "f");
  if (doc.contains("g")) {
    const auto& g = doc.at("g");
    if (g.is_string() && g.get<std::string>() == "random") {
      p.g_random = true;
    } else {
      p.g = expression(g, vars, "g");
    }
  }
  if (doc.contains("t")) p.t = parse_complex(doc.at("t"));
  if (doc.contains("u")) {
    p.u = complex_list(doc.at("u"), "u");
    if (p.u->size() != vars.size()) throw InputError("u needs one entry per variable");
  }
  if (doc.contains("strata")) {
    const auto& list = doc.at("strata");
    if (!list.is_array()) throw InputError("strata must be a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& s = list[i];
      const std::string where = "strata[" + std::to_string(i) + "]";
      StratumSpec spec;
      spec.name = s.contains("name") ? text(s.at("name"), where + ".name") : "X" + std::to_string(i);
      if (s.contains("ideal")) spec.ideal = expressions(s.at("ideal"), vars, where + ".ideal");
      if (s.contains("exclude")) {
        const auto& ex = s.at("exclude");
        if (!ex.is_array()) throw InputError(where + ".exclude must be a list of ideals");
        for (std::size_t k = 0; k < ex.size(); ++k) {
          spec.exclude.push_back(expressions(ex[k], vars, where + ".exclude[" + std::to_string(k) + "]"));
        }
      }
      if (s.contains("parametrization")) spec.parametrization = parametrization(s.at("parametrization"), vars, where);
      p.strata.push_back(std::move(spec));
    }
  }
  if (doc.contains("euler")) {
    const auto& e = doc.at("euler");
    EulerCheck check;
    if (e.contains("chi_eu_u")) check.chi_eu_u = e.at("chi_eu_u").get<long>();
    if (e.contains("chi_x")) check.chi_x = e.at("chi_x").get<long>();
    if (e.contains("hyperplane_points")) check.hyperplane_points = e.at("hyperplane_points").get<long>();
    if (!check.expected_count(p.X.dimension())) {
      throw InputError("euler needs chi_eu_u, or chi_x together with hyperplane_points");
    }
    p.euler = check;
  }
  if (doc.contains("points")) {
    for (const auto& pt : doc.at("points")) {
      p.points.push_back(complex_list(pt, "points"));
      if (p.points.back().size() != vars.size()) throw InputError("points need one entry per variable");
    }
  }
  if (doc.contains("seed")) p.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("tolerances")) {
    p.tolerances = doc.at("tolerances");
    if (!p.tolerances.is_object()) throw InputError("tolerances must be an object");
  }
  return p;
}

}  // namespace

Problem parse_problem(const json& doc) {
  try {
    return parse_document(doc);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed problem: ") + e.what());
  }
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("problem file " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return parse_problem(doc);
  } catch (const InputError& e) {
    throw InputError("problem file " + path.string() + ": " + e.what());
  }
}

}  // namespace critlimit::cli
