#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "disca/default_table.hpp"
#include "disca/table_io.hpp"

using namespace disca;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const char* name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("save/load round trip is bit-exact") {
  SECTION("width 10") {
    TempFile f("disca_t10.json");
    save_code_table(f.path, default_code_table());
    BPCodeTable loaded = load_code_table(f.path);
    REQUIRE(loaded == default_code_table());
    REQUIRE(loaded.metadata() == default_code_table().metadata());
    // and the serialized text itself is stable
    save_code_table(f.path + ".2", loaded);
    REQUIRE(slurp(f.path) == slurp(f.path + ".2"));
    std::remove((f.path + ".2").c_str());
  }
  SECTION("width 8 keeps implicit bits") {
    TempFile f("disca_t8.json");
    save_code_table(f.path, default_code_table_bp8());
    BPCodeTable loaded = load_code_table(f.path);
    REQUIRE(loaded == default_code_table_bp8());
    for (Bias b : {Bias::LeftBiased, Bias::RightBiased})
      for (int k = 0; k < 10; ++k) {
        const BPCode& a = loaded.code(BPDigit(k), b);
        const BPCode& e = default_code_table_bp8().code(BPDigit(k), b);
        REQUIRE(a.implicit_left == e.implicit_left);
        REQUIRE(a.implicit_right == e.implicit_right);
      }
  }
}

TEST_CASE("malformed table files are rejected") {
  auto load_json = [](const std::string& body) {
    return table_from_json(nlohmann::json::parse(body));
  };
  SECTION("wrong format tag") {
    REQUIRE_THROWS_WITH(load_json(R"({"format":"other","width":10,"left":[],"right":[]})"),
                        Catch::Matchers::ContainsSubstring("format"));
  }
  SECTION("bad width") {
    REQUIRE_THROWS_WITH(
        load_json(R"({"format":"disca-code-table","width":12,"left":[],"right":[]})"),
        Catch::Matchers::ContainsSubstring("width"));
  }
  SECTION("popcount violation names the digit") {
    nlohmann::ordered_json j = table_to_json(default_code_table());
    j["left"][4] = "1100000000";  // two ones filed under digit 4
    REQUIRE_THROWS_WITH(table_from_json(j), Catch::Matchers::ContainsSubstring("digit 4"));
  }
  SECTION("non-binary characters") {
    nlohmann::ordered_json j = table_to_json(default_code_table());
    j["right"][1] = "10000000x0";
    REQUIRE_THROWS_AS(table_from_json(j), std::invalid_argument);
  }
  SECTION("missing file") { REQUIRE_THROWS_AS(load_code_table("/nonexistent/t.json"), std::runtime_error); }
}

TEST_CASE("shipped default table file matches the embedded table byte-exactly") {
  std::string committed = slurp(std::string(DISCA_SOURCE_DIR) + "/data/default_table.json");
  REQUIRE(committed == table_to_text(default_code_table()));
}
