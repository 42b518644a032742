#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "disca/bp_format.hpp"
#include "disca/default_table.hpp"

using namespace disca;

TEST_CASE("digits are bounded") {
  REQUIRE_THROWS_AS(BPDigit(-1), std::out_of_range);
  REQUIRE_THROWS_AS(BPDigit(10), std::out_of_range);
  REQUIRE(BPDigit(9).probability() == Catch::Approx(0.9));
}

TEST_CASE("encode honors the popcount invariant") {
  const BPCodeTable& t = default_code_table();
  SECTION("digit 0 is the all-zero code") {
    REQUIRE(encode(BPDigit(0), Bias::LeftBiased, t).bits == 0);
    REQUIRE(encode(BPDigit(0), Bias::RightBiased, t).bits == 0);
  }
  SECTION("digit 9 carries nine ones at width 10") {
    REQUIRE(encode(BPDigit(9), Bias::RightBiased, t).stored_popcount() == 9);
  }
  SECTION("digit 5 left matches the frozen default pattern") {
    REQUIRE(encode(BPDigit(5), Bias::LeftBiased, t).bit_string() == kDefaultLeftCodes[5]);
  }
  SECTION("every code's total ones equals its digit, both widths") {
    const BPCodeTable& t8 = default_code_table_bp8();
    for (Bias b : {Bias::LeftBiased, Bias::RightBiased})
      for (int k = 0; k < 10; ++k) {
        REQUIRE(t.code(BPDigit(k), b).total_ones() == k);
        REQUIRE(t8.code(BPDigit(k), b).total_ones() == k);
      }
  }
}

TEST_CASE("decode inverts encode and falls back to popcount") {
  const BPCodeTable& t10 = default_code_table();
  const BPCodeTable& t8 = default_code_table_bp8();
  for (Bias b : {Bias::LeftBiased, Bias::RightBiased})
    for (int k = 0; k < 10; ++k) {
      REQUIRE(decode(encode(BPDigit(k), b, t10), t10) == BPDigit(k));
      REQUIRE(decode(encode(BPDigit(k), b, t8), t8) == BPDigit(k));
    }
  REQUIRE(decode(make_code(Bias::LeftBiased, 10, 0), t10) == BPDigit(0));
  // four ones, not a table entry
  REQUIRE(decode(make_code(Bias::LeftBiased, 10, 0b0000110011), t10) == BPDigit(4));
  // ten ones have no digit
  REQUIRE_THROWS_AS(decode(make_code(Bias::LeftBiased, 10, 0x3FF), t10), std::domain_error);
}

TEST_CASE("compression drops the outer bits into implicit positions") {
  SECTION("all-zero stays all-zero") {
    BPCode c = compress_10_to_8(make_code(Bias::LeftBiased, 10, 0));
    REQUIRE(c.bits == 0);
    REQUIRE_FALSE(c.implicit_left);
    REQUIRE_FALSE(c.implicit_right);
  }
  SECTION("outermost ones become implicits") {
    // 1 xxxxxxxx 0 with xs = 10110001
    BPCode ten = code_from_string(Bias::LeftBiased, "1101100010");
    BPCode eight = compress_10_to_8(ten);
    REQUIRE(eight.bit_string() == "10110001");
    REQUIRE(eight.implicit_left);
    REQUIRE_FALSE(eight.implicit_right);
  }
  SECTION("value preserved and exactly invertible on all 20 default codes") {
    const BPCodeTable& t = default_code_table();
    for (Bias b : {Bias::LeftBiased, Bias::RightBiased})
      for (int k = 0; k < 10; ++k) {
        const BPCode& c = t.code(BPDigit(k), b);
        BPCode c8 = compress_10_to_8(c);
        REQUIRE(decode(c8, default_code_table_bp8()) == decode(c, t));
        REQUIRE(expand_8_to_10(c8) == c);
      }
  }
  SECTION("expansion corner cases") {
    BPCode zero8 = make_code(Bias::LeftBiased, 8, 0);
    REQUIRE(expand_8_to_10(zero8).bits == 0);
    BPCode ones8 = make_code(Bias::LeftBiased, 8, 0xFF, true, false);
    REQUIRE(expand_8_to_10(ones8).bit_string() == "1111111110");
  }
  SECTION("width preconditions") {
    REQUIRE_THROWS_AS(compress_10_to_8(make_code(Bias::LeftBiased, 8, 0)), std::invalid_argument);
    REQUIRE_THROWS_AS(expand_8_to_10(make_code(Bias::LeftBiased, 10, 0)), std::invalid_argument);
  }
}

TEST_CASE("mul_popcount is AND semantics") {
  const BPCodeTable& t10 = default_code_table();
  const BPCodeTable& t8 = default_code_table_bp8();
  SECTION("zero digit absorbs") {
    for (int j = 0; j < 10; ++j) {
      REQUIRE(mul_popcount(t10.code(BPDigit(0), Bias::LeftBiased),
                           t10.code(BPDigit(j), Bias::RightBiased)) == 0);
      REQUIRE(mul_popcount(t8.code(BPDigit(j), Bias::LeftBiased),
                           t8.code(BPDigit(0), Bias::RightBiased)) == 0);
    }
  }
  SECTION("width 8 with implicit correction equals width 10 on all 100 pairs") {
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        REQUIRE(mul_popcount(t8.code(BPDigit(i), Bias::LeftBiased),
                             t8.code(BPDigit(j), Bias::RightBiased)) ==
                mul_popcount(t10.code(BPDigit(i), Bias::LeftBiased),
                             t10.code(BPDigit(j), Bias::RightBiased)));
  }
  SECTION("width mismatch is rejected") {
    REQUIRE_THROWS_AS(mul_popcount(t10.code(BPDigit(1), Bias::LeftBiased),
                                   t8.code(BPDigit(1), Bias::RightBiased)),
                      std::invalid_argument);
  }
}

TEST_CASE("table construction enforces invariants") {
  std::array<BPCode, 10> l, r;
  for (int k = 0; k < 10; ++k) {
    l[k] = default_code_table().code(BPDigit(k), Bias::LeftBiased);
    r[k] = default_code_table().code(BPDigit(k), Bias::RightBiased);
  }
  SECTION("popcount violation names the digit") {
    l[3] = make_code(Bias::LeftBiased, 10, 0b11);  // two ones filed under digit 3
    REQUIRE_THROWS_WITH(BPCodeTable(l, r, ""), Catch::Matchers::ContainsSubstring("digit 3"));
  }
  SECTION("codes filed under the wrong dataset are rejected") {
    r[2] = make_code(Bias::LeftBiased, 10, 0b11);
    REQUIRE_THROWS_AS(BPCodeTable(l, r, ""), std::invalid_argument);
  }
}

TEST_CASE("quantization") {
  SECTION("all-zero matrix quantizes to digits 0 at scale 1") {
    RealMatrix m(3, 4);
    QuantizedMatrix q = quantize_matrix(m, QuantizeStrategy::MaxAbs);
    REQUIRE(q.scale == 1.0);
    for (uint8_t d : q.digits.d) REQUIRE(d == 0);
  }
  SECTION("nearest rounding at fixed scale 1") {
    RealMatrix m(1, 2);
    m.at(0, 0) = 0.9;
    m.at(0, 1) = 0.87;
    QuantizedMatrix q = quantize_matrix(m, QuantizeStrategy::FixedScale, 1.0);
    REQUIRE(q.digits.at(0, 0) == 9);
    REQUIRE(q.digits.at(0, 1) == 9);  // nearest, error 0.03
  }
  SECTION("unipolar domain violations are rejected") {
    RealMatrix m(1, 1);
    m.at(0, 0) = -0.5;
    REQUIRE_THROWS_AS(quantize_matrix(m, QuantizeStrategy::MaxAbs), std::domain_error);
    m.at(0, 0) = std::nan("");
    REQUIRE_THROWS_AS(quantize_matrix(m, QuantizeStrategy::MaxAbs), std::domain_error);
    m.at(0, 0) = 0.96;  // needs digit 10 at scale 1
    REQUIRE_THROWS_AS(quantize_matrix(m, QuantizeStrategy::FixedScale, 1.0), std::domain_error);
  }
  SECTION("max-abs scaling keeps every entry within half a step") {
    std::mt19937_64 rng(11);
    RealMatrix m(8, 8);
    for (double& v : m.v) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 7.3;
    QuantizedMatrix q = quantize_matrix(m, QuantizeStrategy::MaxAbs);
    for (size_t i = 0; i < m.v.size(); ++i) {
      double represented = q.digits.d[i] / 10.0 * q.scale;
      REQUIRE(std::abs(represented - m.v[i]) <= q.scale / 20.0 + 1e-12);
      REQUIRE(q.digits.d[i] <= 9);
    }
  }
  SECTION("scalar quantized values obey the same bound") {
    QuantizedValue v = quantize_value(0.349, 1.0);
    REQUIRE(v.digit == BPDigit(3));
    REQUIRE(std::abs(v.value() - 0.349) <= 1.0 / 20.0);
    REQUIRE_THROWS_AS(quantize_value(0.5, -1.0), std::invalid_argument);
  }
}
