// Copyright 2026 The mopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Private JSON helpers shared by the loaders. Not installed.

#ifndef MOPO_SRC_JSON_UTIL_HPP_
#define MOPO_SRC_JSON_UTIL_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include "mopo/errors.hpp"
#include "mopo/model.hpp"
#include "mopo/rational.hpp"

namespace mopo {

Pomdp model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const Pomdp& m);

namespace json_util {

inline nlohmann::json parse(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

/// Rationals are strings; plain JSON integers are accepted too.
inline Rational rational(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  throw SchemaError("expected a rational string such as \"1/3\", got " + v.dump());
}

inline ExtReal ext_real(const nlohmann::json& v) {
  if (v.is_string()) return ExtReal::parse(v.get<std::string>());
  return ExtReal(rational(v));
}

inline std::vector<std::string> string_list(const nlohmann::json& doc, const char* field,
                                            bool required) {
  if (!doc.contains(field)) {
    if (required) throw SchemaError(std::string("missing field '") + field + "'");
    return {};
  }
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw SchemaError(std::string("'") + field + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : arr) {
    if (!x.is_string()) throw SchemaError(std::string("'") + field + "' must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

inline nlohmann::json ext_vector(const ExtRealVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

}  // namespace json_util
}  // namespace mopo

#endif  // MOPO_SRC_JSON_UTIL_HPP_
