#pragma once

// JSON (de)serialization of symbols and expansions. Coefficients are written
// as 17-significant-digit strings so that a re-read reproduces every double.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "regtrace/errors.hpp"
#include "regtrace/generators.hpp"
#include "regtrace/sym_core.hpp"

namespace regtrace {

using json = nlohmann::json;

/// %.17g, with the non-finite values spelled out.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Accepts JSON numbers and the strings produced by format_double.
inline double parse_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ValidationError("expected a number or a numeric string, got " + j.dump());
  const std::string s = j.get<std::string>();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  // strtod, unlike stod, returns subnormals instead of throwing
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw ValidationError("not a number: '" + s + "'");
  if (*end != '\0') throw ValidationError("trailing characters in number '" + s + "'");
  return v;
}

inline json to_json(const AsymptoticExpansion& e) {
  json entries = json::array();
  for (const auto& x : e.entries())
    entries.push_back({{"exponent", format_double(x.exponent)},
                       {"logpow", x.logpow},
                       {"coefficient", format_double(x.coefficient)}});
  return {{"variable", e.variable()}, {"remainder_order", format_double(e.remainder_order())}, {"entries", entries}};
}

inline AsymptoticExpansion expansion_from_json(const json& j) {
  try {
    AsymptoticExpansion e(j.at("variable").get<std::string>(), parse_double(j.at("remainder_order")));
    for (const auto& x : j.at("entries"))
      e.add(parse_double(x.at("exponent")), x.at("logpow").get<int>(), parse_double(x.at("coefficient")));
    return e;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("malformed expansion JSON: ") + ex.what());
  }
}

/// The generator description, plus the expansion data for inspection.
inline json to_json(const SymbolExpansion& s) {
  json j;
  j["generator"] = s.generator_description.empty() ? json(nullptr) : json::parse(s.generator_description);
  j["dimension"] = s.dim;
  j["order"] = format_double(s.order);
  j["remainder_order"] = format_double(s.remainder_order);
  json terms = json::array();
  for (const auto& t : s.terms) terms.push_back({{"order", format_double(t.order)}, {"logpow", t.logpow}});
  j["terms"] = terms;
  return j;
}

/// Reads a symbol from its generator description, either bare or wrapped as
/// {"generator": {...}} the way to_json writes it.
inline SymbolExpansion symbol_from_json(const json& j) {
  if (j.contains("generator") && j.at("generator").is_object()) return make_symbol(j.at("generator"));
  return make_symbol(j);
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline SymbolExpansion load_symbol(const std::string& path) { return symbol_from_json(read_json_file(path)); }

}  // namespace regtrace
