// DISCA simulator - code-table file format (JSON, bit strings).
//
// Codes are stored as '0'/'1' strings with the leftmost character at bit
// index 0, so a load/save round trip is bit-exact. Width-8 tables carry the
// implicit bit pair per code.
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "disca/bp_format.hpp"

namespace disca {

inline constexpr const char* kTableFormatTag = "disca-code-table";

inline nlohmann::ordered_json table_to_json(const BPCodeTable& t) {
  nlohmann::ordered_json j;
  j["format"] = kTableFormatTag;
  j["width"] = t.width();
  j["metadata"] = t.metadata();
  for (Bias b : {Bias::LeftBiased, Bias::RightBiased}) {
    const char* key = b == Bias::LeftBiased ? "left" : "right";
    auto arr = nlohmann::ordered_json::array();
    for (const BPCode& c : t.dataset(b)) arr.push_back(c.bit_string());
    j[key] = arr;
    if (t.width() == 8) {
      auto impl = nlohmann::ordered_json::array();
      for (const BPCode& c : t.dataset(b))
        impl.push_back({c.implicit_left ? 1 : 0, c.implicit_right ? 1 : 0});
      j[std::string(key) + "_implicit"] = impl;
    }
  }
  return j;
}

inline BPCodeTable table_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j.at("format") != kTableFormatTag)
    throw std::invalid_argument("table file: missing or wrong format tag");
  int width = j.at("width").get<int>();
  if (width != 8 && width != 10)
    throw std::invalid_argument("table file: width must be 8 or 10");
  std::string metadata = j.value("metadata", std::string());
  std::array<BPCode, 10> left, right;
  for (Bias b : {Bias::LeftBiased, Bias::RightBiased}) {
    const char* key = b == Bias::LeftBiased ? "left" : "right";
    const auto& arr = j.at(key);
    if (!arr.is_array() || arr.size() != 10)
      throw std::invalid_argument(std::string("table file: '") + key + "' must list 10 codes");
    const nlohmann::json* impl = nullptr;
    if (width == 8) {
      impl = &j.at(std::string(key) + "_implicit");
      if (!impl->is_array() || impl->size() != 10)
        throw std::invalid_argument("table file: implicit-bit list must have 10 entries");
    }
    for (int k = 0; k < 10; ++k) {
      bool il = false, ir = false;
      if (impl) {
        il = (*impl)[static_cast<size_t>(k)].at(0).get<int>() != 0;
        ir = (*impl)[static_cast<size_t>(k)].at(1).get<int>() != 0;
      }
      BPCode c = code_from_string(b, arr[static_cast<size_t>(k)].get<std::string>(), il, ir);
      if (c.width != width)
        throw std::invalid_argument("table file: code string length disagrees with width");
      (b == Bias::LeftBiased ? left : right)[static_cast<size_t>(k)] = c;
    }
  }
  return BPCodeTable(left, right, metadata);  // table invariants re-checked here
}

inline std::string table_to_text(const BPCodeTable& t) {
  return table_to_json(t).dump(2) + "\n";
}

inline void save_code_table(const std::string& path, const BPCodeTable& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open table file for writing: " + path);
  f << table_to_text(t);
}

inline BPCodeTable load_code_table(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open table file: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("table file " + path + " is not valid JSON: " + e.what());
  }
  return table_from_json(j);
}

}  // namespace disca
