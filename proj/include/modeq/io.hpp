#ifndef MODEQ_IO_HPP
#define MODEQ_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "modeq/errors.hpp"
#include "modeq/qseries.hpp"

namespace modeq {

using Json = nlohmann::ordered_json;

// Bit-exact series format:
//   {"grid_den": N, "trunc": "p/q", "coeffs": [[n, "p/q"], ...]}
// with coeffs sorted by n ascending and rationals in canonical form.
inline Json series_to_json(const QSeries& s) {
  Json j;
  j["grid_den"] = s.grid_den();
  j["trunc"] = s.trunc().str();
  Json coeffs = Json::array();
  for (const auto& [n, c] : s.raw_coeffs()) coeffs.push_back(Json::array({n, c.str()}));
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline QSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("grid_den") || !j.contains("trunc") || !j.contains("coeffs"))
    throw ParseError("series JSON must have grid_den, trunc, coeffs");
  long grid = j["grid_den"].get<long>();
  if (grid <= 0) throw ParseError("grid_den must be positive");
  Rat trunc = Rat::parse(j["trunc"].get<std::string>());
  std::vector<std::pair<long, Rat>> terms;
  for (const auto& e : j["coeffs"]) {
    if (!e.is_array() || e.size() != 2) throw ParseError("coeff entries are [n, \"p/q\"]");
    terms.emplace_back(e[0].get<long>(), Rat::parse(e[1].get<std::string>()));
  }
  return QSeries::from_terms(grid, trunc, std::move(terms));
}

}  // namespace modeq

#endif
