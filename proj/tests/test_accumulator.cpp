#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "disca/accumulator.hpp"
#include "disca/default_table.hpp"

using namespace disca;

namespace {
Wordline random_wordline(std::mt19937_64& rng) {
  Wordline w;
  for (auto& word : w.words) word = rng();
  return w;
}

// straight-line reference: count bit by bit
int naive_accumulate(const Wordline& w, const SegmentConfig& cfg, const CorrectionVector& corr) {
  int sum = 0;
  for (int s = 0; s < cfg.segment_count(); ++s) {
    int n = corr[static_cast<size_t>(s)];
    for (int b = 0; b < cfg.segment_bits; ++b)
      if (w.get(s * cfg.segment_bits + b)) ++n;
    sum += n;
  }
  return sum;
}
}  // namespace

TEST_CASE("segment configs must tile the wordline") {
  REQUIRE(SegmentConfig(8).segment_count() == 32);
  REQUIRE(SegmentConfig(256).segment_count() == 1);
  REQUIRE_THROWS_AS(SegmentConfig(3), std::invalid_argument);
  REQUIRE_THROWS_AS(SegmentConfig(0), std::invalid_argument);
}

TEST_CASE("parallel counters") {
  SegmentConfig cfg(8);
  SECTION("all-zero wordline counts to zeros") {
    auto counts = popcount_segments(Wordline{}, cfg);
    for (int c : counts) REQUIRE(c == 0);
  }
  SECTION("all-one wordline counts m per segment") {
    Wordline w;
    for (auto& word : w.words) word = ~0ull;
    auto counts = popcount_segments(w, cfg);
    REQUIRE(counts.size() == 32);
    for (int c : counts) REQUIRE(c == 8);
  }
  SECTION("segment sums conserve the total popcount, any segment width") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 1000; ++t) {
      Wordline w = random_wordline(rng);
      for (int m : {1, 2, 4, 8, 16, 32, 64, 128, 256}) {
        auto counts = popcount_segments(w, SegmentConfig(m));
        int total = 0;
        for (int c : counts) total += c;
        REQUIRE(total == w.popcount());
      }
    }
  }
}

TEST_CASE("accumulate") {
  SegmentConfig cfg(8);
  SECTION("all-zero wordline and zero correction sum to zero") {
    REQUIRE(accumulate(Wordline{}, cfg, CorrectionVector(32, 0)) == 0);
  }
  SECTION("matches the straight-line reference on random inputs") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 500; ++t) {
      Wordline w = random_wordline(rng);
      CorrectionVector corr(32);
      for (auto& c : corr) c = static_cast<uint8_t>(rng() % 3);
      REQUIRE(accumulate(w, cfg, corr) == naive_accumulate(w, cfg, corr));
    }
  }
  SECTION("tree order is irrelevant: linear equals pairwise-tree summation") {
    std::mt19937_64 rng(13);
    Wordline w = random_wordline(rng);
    auto counts = popcount_segments(w, cfg);
    std::vector<int> level(counts);
    while (level.size() > 1) {
      std::vector<int> next;
      for (size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
      if (level.size() % 2) next.push_back(level.back());
      level = next;
    }
    REQUIRE(level[0] == accumulate(w, cfg, CorrectionVector(32, 0)));
  }
  SECTION("32 packed BP8 products accumulate to 32 independent multiplications") {
    const BPCodeTable& t8 = default_code_table_bp8();
    std::mt19937_64 rng(21);
    std::array<uint8_t, 32> li{}, ui{};
    Wordline w;
    CorrectionVector corr(32, 0);
    int expected = 0;
    for (int s = 0; s < 32; ++s) {
      li[s] = static_cast<uint8_t>(rng() % 10);
      ui[s] = static_cast<uint8_t>(rng() % 10);
      const BPCode& lc = t8.code(BPDigit(li[s]), Bias::LeftBiased);
      const BPCode& uc = t8.code(BPDigit(ui[s]), Bias::RightBiased);
      for (int b = 0; b < 8; ++b)
        if (lc.bit(b) && uc.bit(b)) w.set(s * 8 + b, true);
      corr[s] = static_cast<uint8_t>(((lc.implicit_left && uc.implicit_left) ? 1 : 0) +
                                     ((lc.implicit_right && uc.implicit_right) ? 1 : 0));
      expected += mul_popcount(lc, uc);
    }
    REQUIRE(accumulate(w, cfg, corr) == expected);
    // and the width-8 result agrees with the width-10 expansion elementwise
    const BPCodeTable& t10 = default_code_table();
    int expected10 = 0;
    for (int s = 0; s < 32; ++s)
      expected10 += mul_popcount(t10.code(BPDigit(li[s]), Bias::LeftBiased),
                                 t10.code(BPDigit(ui[s]), Bias::RightBiased));
    REQUIRE(accumulate(w, cfg, corr) == expected10);
  }
  SECTION("bad corrections are rejected") {
    REQUIRE_THROWS_AS(accumulate(Wordline{}, cfg, CorrectionVector(31, 0)),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(accumulate(Wordline{}, cfg, CorrectionVector(32, 3)),
                      std::invalid_argument);
  }
}

TEST_CASE("two-stage pipeline") {
  SegmentConfig cfg(8);
  SECTION("output appears exactly two steps after acceptance") {
    AccumulatorPipeline pipe(cfg);
    Wordline w;
    w.set(0, true);
    w.set(200, true);
    REQUIRE_FALSE(pipe.step(AccumulatorInput{w, CorrectionVector(32, 0)}).has_value());
    REQUIRE_FALSE(pipe.step(std::nullopt).has_value());
    auto out = pipe.step(std::nullopt);
    REQUIRE(out.has_value());
    REQUIRE(*out == 2);
    REQUIRE(pipe.empty());
  }
  SECTION("continuous feed: k outputs in order starting at cycle 2") {
    AccumulatorPipeline pipe(cfg);
    std::mt19937_64 rng(31);
    std::vector<int> expected, got;
    const int k = 20;
    for (int t = 0; t < k; ++t) {
      Wordline w = random_wordline(rng);
      expected.push_back(accumulate(w, cfg, CorrectionVector(32, 0)));
      auto out = pipe.step(AccumulatorInput{w, CorrectionVector(32, 0)});
      if (t < 2) REQUIRE_FALSE(out.has_value());  // fills the two stages first
      if (out) got.push_back(*out);
    }
    while (!pipe.empty())
      if (auto out = pipe.step(std::nullopt)) got.push_back(*out);
    REQUIRE(got == expected);
    REQUIRE(pipe.accepted() == k);
  }
  SECTION("bubbles delay outputs by exactly the accepted-cycle schedule") {
    AccumulatorPipeline pipe(cfg);
    std::mt19937_64 rng(37);
    std::vector<int> expected, got;
    for (int t = 0; t < 500; ++t) {
      std::optional<AccumulatorInput> input;
      if (rng() % 2) {
        Wordline w = random_wordline(rng);
        CorrectionVector corr(32);
        for (auto& c : corr) c = static_cast<uint8_t>(rng() % 3);
        expected.push_back(accumulate(w, cfg, corr));
        input = AccumulatorInput{w, corr};
      }
      if (auto out = pipe.step(std::move(input))) got.push_back(*out);
    }
    while (!pipe.empty())
      if (auto out = pipe.step(std::nullopt)) got.push_back(*out);
    REQUIRE(got == expected);
  }
}
