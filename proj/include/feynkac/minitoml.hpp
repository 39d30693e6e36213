// Copyright 2026 The feynkac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <string>

#include <nlohmann/json.hpp>

#include "feynkac/errors.hpp"

namespace feynkac {

// Reader for the TOML subset used by run configurations: [table] headers,
// key = value lines with strings, numbers, booleans and flat arrays, plus #
// comments. Parses into a json object so TOML and JSON configs share one
// downstream path.
namespace minitoml {

namespace detail {

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Removes a trailing comment that is not inside a string literal.
inline std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

inline nlohmann::json parse_scalar(const std::string& raw, int line_no) {
  std::string token = strip(raw);
  require(!token.empty(), "toml: empty value on line " +
                              std::to_string(line_no));
  if (token.front() == '"') {
    require(token.size() >= 2 && token.back() == '"',
            "toml: unterminated string on line " + std::to_string(line_no));
    return token.substr(1, token.size() - 2);
  }
  if (token == "true") return true;
  if (token == "false") return false;
  try {
    std::size_t used = 0;
    if (token.find_first_of(".eE") == std::string::npos ||
        (token.size() > 1 && token.find_first_of(".eE", 2) ==
             std::string::npos && token.substr(0, 2) == "0x")) {
      long long v = std::stoll(token, &used, 0);
      if (used == token.size()) return v;
    }
    double d = std::stod(token, &used);
    require(used == token.size(),
            "toml: bad value '" + token + "' on line " +
                std::to_string(line_no));
    return d;
  } catch (const std::exception&) {
    throw ValidationError("toml: bad value '" + token + "' on line " +
                          std::to_string(line_no));
  }
}

inline nlohmann::json parse_value(const std::string& raw, int line_no) {
  std::string token = strip(raw);
  if (!token.empty() && token.front() == '[') {
    require(token.back() == ']',
            "toml: unterminated array on line " + std::to_string(line_no));
    nlohmann::json arr = nlohmann::json::array();
    std::string body = token.substr(1, token.size() - 2);
    std::string item;
    bool in_string = false;
    for (char c : body) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        if (!strip(item).empty()) arr.push_back(parse_scalar(item, line_no));
        item.clear();
      } else {
        item.push_back(c);
      }
    }
    if (!strip(item).empty()) arr.push_back(parse_scalar(item, line_no));
    return arr;
  }
  return parse_scalar(token, line_no);
}

}  // namespace detail

inline nlohmann::json parse(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line =
        detail::strip(detail::strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      require(line.back() == ']',
              "toml: bad table header on line " + std::to_string(line_no));
      std::string name = detail::strip(line.substr(1, line.size() - 2));
      require(!name.empty(),
              "toml: empty table name on line " + std::to_string(line_no));
      table = &root;
      std::size_t start = 0;
      for (;;) {
        std::size_t dot = name.find('.', start);
        std::string part = name.substr(
            start, dot == std::string::npos ? std::string::npos : dot - start);
        table = &(*table)[detail::strip(part)];
        if (dot == std::string::npos) break;
        start = dot + 1;
      }
      if (end == text.size()) break;
      continue;
    }
    std::size_t eq = line.find('=');
    require(eq != std::string::npos,
            "toml: expected key = value on line " + std::to_string(line_no));
    std::string key = detail::strip(line.substr(0, eq));
    require(!key.empty(), "toml: empty key on line " + std::to_string(line_no));
    (*table)[key] = detail::parse_value(line.substr(eq + 1), line_no);
    if (end == text.size()) break;
  }
  return root;
}

}  // namespace minitoml
}  // namespace feynkac
