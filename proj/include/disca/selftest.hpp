// DISCA simulator - end-to-end invariant suite behind `disca verify`.
#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "disca/accumulator.hpp"
#include "disca/bp_format.hpp"
#include "disca/default_table.hpp"
#include "disca/energy.hpp"
#include "disca/engine.hpp"
#include "disca/sram_core.hpp"

namespace disca {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace selftest {

inline CheckResult check(const std::string& name, bool ok, const std::string& detail = "") {
  return {name, ok, detail};
}

inline Wordline random_wordline(std::mt19937_64& rng) {
  Wordline w;
  for (auto& word : w.words) word = rng();
  return w;
}

inline CheckResult round_trips(const BPCodeTable& table) {
  BPCodeTable t10 = table.width() == 10 ? table : expand_table(table);
  BPCodeTable t8 = compress_table(t10);
  for (Bias b : {Bias::LeftBiased, Bias::RightBiased}) {
    for (int k = 0; k < 10; ++k) {
      if (!(decode(encode(BPDigit(k), b, t10), t10) == BPDigit(k)))
        return check("encode/decode round trip", false,
                     "width 10 digit " + std::to_string(k) + " " + bias_name(b));
      if (!(decode(encode(BPDigit(k), b, t8), t8) == BPDigit(k)))
        return check("encode/decode round trip", false,
                     "width 8 digit " + std::to_string(k) + " " + bias_name(b));
      if (!(expand_8_to_10(compress_10_to_8(t10.code(BPDigit(k), b))) == t10.code(BPDigit(k), b)))
        return check("encode/decode round trip", false,
                     "compress/expand digit " + std::to_string(k));
    }
  }
  return check("encode/decode round trip", true, "all digits, both biases, both widths");
}

inline CheckResult bp8_equivalence(const BPCodeTable& table) {
  BPCodeTable t10 = table.width() == 10 ? table : expand_table(table);
  BPCodeTable t8 = compress_table(t10);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      int w10 = mul_popcount(t10.code(BPDigit(i), Bias::LeftBiased),
                             t10.code(BPDigit(j), Bias::RightBiased));
      int w8 = mul_popcount(t8.code(BPDigit(i), Bias::LeftBiased),
                            t8.code(BPDigit(j), Bias::RightBiased));
      if (w10 != w8)
        return check("bp8/bp10 product equivalence", false,
                     "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " +
                         std::to_string(w8) + " vs " + std::to_string(w10));
    }
  return check("bp8/bp10 product equivalence", true, "all 100 digit pairs exact");
}

inline CheckResult zero_absorption(const BPCodeTable& table) {
  for (int j = 0; j < 10; ++j) {
    if (mul_popcount(table.code(BPDigit(0), Bias::LeftBiased),
                     table.code(BPDigit(j), Bias::RightBiased)) != 0 ||
        mul_popcount(table.code(BPDigit(j), Bias::LeftBiased),
                     table.code(BPDigit(0), Bias::RightBiased)) != 0)
      return check("zero digit absorbs products", false, "digit " + std::to_string(j));
  }
  return check("zero digit absorbs products", true);
}

inline CheckResult table_quality(const BPCodeTable& table) {
  double mine = mean_abs_pair_error(table);
  double thermo = mean_abs_pair_error(thermometer_code_table());
  return check("table beats thermometer baseline", mine < thermo,
               "mean pair error " + fmt_double(mine, 6) + " vs " + fmt_double(thermo, 6));
}

inline CheckResult subarray_and_oracle(uint64_t seed) {
  std::mt19937_64 rng(seed);
  Subarray array;
  LayoutMap map = array.layout();
  std::array<Wordline, kSubarrayRows> mirror;
  for (int r = 0; r < kSubarrayRows; ++r) {
    mirror[static_cast<size_t>(r)] = random_wordline(rng);
    array.write_row(r, mirror[static_cast<size_t>(r)]);
  }
  for (int t = 0; t < 1000; ++t) {
    int l = map.l_mem_row(static_cast<int>(rng() % static_cast<uint64_t>(map.half())));
    int u = map.u_mem_row(static_cast<int>(rng() % static_cast<uint64_t>(map.half())));
    Wordline got = array.compute_and(l, u, false);
    Wordline expect = mirror[static_cast<size_t>(l)] & mirror[static_cast<size_t>(u)];
    if (!(got == expect))
      return check("bitline AND matches independent reads", false,
                   "rows " + std::to_string(l) + "," + std::to_string(u));
    if (!(array.read_row(l) == mirror[static_cast<size_t>(l)]) ||
        !(array.read_row(u) == mirror[static_cast<size_t>(u)]))
      return check("bitline AND matches independent reads", false, "compute disturbed stored bits");
  }
  return check("bitline AND matches independent reads", true, "1000 random row pairs");
}

inline CheckResult segment_conservation(uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 1000; ++t) {
    Wordline w = random_wordline(rng);
    for (int m : {1, 8, 32, 256}) {
      SegmentConfig cfg(m);
      auto counts = popcount_segments(w, cfg);
      int total = 0;
      for (int c : counts) total += c;
      if (total != w.popcount())
        return check("segment counts conserve popcount", false, "m=" + std::to_string(m));
    }
  }
  return check("segment counts conserve popcount", true, "1000 wordlines x 4 segment widths");
}

inline CheckResult pipeline_transparency(uint64_t seed) {
  std::mt19937_64 rng(seed);
  SegmentConfig cfg(8);
  AccumulatorPipeline pipe(cfg);
  std::vector<int> expected;
  std::vector<int> got;
  for (int t = 0; t < 2000; ++t) {
    std::optional<AccumulatorInput> input;
    if (rng() % 3 != 0) {  // inject bubbles one cycle in three
      Wordline w = random_wordline(rng);
      CorrectionVector corr(static_cast<size_t>(cfg.segment_count()));
      for (auto& c : corr) c = static_cast<uint8_t>(rng() % 3);
      expected.push_back(accumulate(w, cfg, corr));
      input = AccumulatorInput{w, corr};
    }
    if (auto out = pipe.step(std::move(input))) got.push_back(*out);
  }
  while (!pipe.empty())
    if (auto out = pipe.step(std::nullopt)) got.push_back(*out);
  return check("pipeline matches delayed combinational results", expected == got,
               std::to_string(got.size()) + " outputs in order");
}

inline CheckResult engine_oracle(const std::shared_ptr<const BPCodeTable>& table, uint64_t seed) {
  EngineConfig cfg;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      QuantizedMatrix l{DigitMatrix(1, 1), 1.0}, r{DigitMatrix(1, 1), 1.0};
      l.digits.d[0] = static_cast<uint8_t>(i);
      r.digits.d[0] = static_cast<uint8_t>(j);
      MatMulJob job{l, r, table};
      if (!(run_matmul(job, cfg).partials == oracle_matmul(job)))
        return check("engine matches oracle", false,
                     "1x1x1 digits (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < 25; ++t) {
    int m = 1 + static_cast<int>(rng() % 8), k = 1 + static_cast<int>(rng() % 80),
        n = 1 + static_cast<int>(rng() % 8);
    QuantizedMatrix l{DigitMatrix(m, k), 1.0}, r{DigitMatrix(k, n), 1.0};
    for (auto& d : l.digits.d) d = static_cast<uint8_t>(rng() % 10);
    for (auto& d : r.digits.d) d = static_cast<uint8_t>(rng() % 10);
    MatMulJob job{l, r, table};
    if (!(run_matmul(job, cfg).partials == oracle_matmul(job)))
      return check("engine matches oracle", false,
                   std::to_string(m) + "x" + std::to_string(k) + "x" + std::to_string(n));
  }
  return check("engine matches oracle", true, "exhaustive 1x1x1 plus 25 random jobs");
}

inline CheckResult energy_reproduction(const EnergyConstants& c) {
  std::string detail;
  auto expect = [&detail](const char* what, double got, double want, double tol) {
    bool ok = std::abs(got - want) <= tol;
    if (!ok)
      detail += std::string(what) + " " + fmt_double(got, 4) + " != " + fmt_double(want, 4) + "; ";
    return ok;
  };
  bool ok = true;
  ok &= expect("mac", c.mac_energy_fj_per_bit(), 557.428, 0.01);
  ok &= expect("scmul+decode", c.scmul_plus_decode_fj_per_bit(), 314.15, 0.01);
  ok &= expect("accumulate", c.accum_fj_per_bit(), 243.28, 0.01);
  ok &= expect("scmul/read ratio", c.scmul_read_ratio(), 1.039, 0.002);
  Efficiency e = efficiency(c);
  ok &= expect("TOPS/W per bit", e.tops_per_watt_per_bit, 3.59, 0.01);
  ok &= expect("BP8 GOPS/W", e.gops_per_watt_bp8, 448.5, 448.5 * 0.001);
  return check("energy figures reproduce", ok, ok ? "MAC/efficiency chain intact" : detail);
}

inline CheckResult throughput_reproduction(const EngineConfig& cfg) {
  PeakThroughput p = peak_throughput(cfg);
  bool ok = std::abs(p.ideal_tops_per_bit - 8.192) <= 1e-9 &&
            std::abs(p.effective_tops_per_bit - 7.9) <= 7.9 * 0.05 &&
            std::abs(p.effective_tops_bp8 - 0.988) <= 0.988 * 0.01;
  return check("peak throughput reproduces", ok,
               "ideal " + fmt_double(p.ideal_tops_per_bit, 3) + ", effective " +
                   fmt_double(p.effective_tops_per_bit, 3) + " TOPS per bit");
}

inline CheckResult scaling_reproduction(const EnergyConstants& c, const ScalingTable& scaling) {
  EnergyConstants at22 = scale_to_node(c, scaling.find("22nm"));
  EnergyConstants at180 = scale_to_node(c, scaling.find("180nm"));
  double gain = efficiency(at22).tops_per_watt_per_bit / efficiency(c).tops_per_watt_per_bit;
  bool identity = std::abs(efficiency(at180).tops_per_watt_per_bit -
                           efficiency(c).tops_per_watt_per_bit) < 1e-12;
  return check("22nm scaling gains two orders of magnitude", gain >= 100.0 && identity,
               fmt_double(gain, 2) + "x vs 180nm");
}

}  // namespace selftest

//! The full invariant suite; every entry must pass on a healthy build with
//! healthy inputs.
inline std::vector<CheckResult> run_self_checks(
    const std::shared_ptr<const BPCodeTable>& table_in = nullptr,
    const EnergyConstants& constants = EnergyConstants{},
    const ScalingTable& scaling = ScalingTable::default_table(), uint64_t seed = 0) {
  std::shared_ptr<const BPCodeTable> table = table_in ? table_in : default_code_table_ptr();
  std::vector<CheckResult> results;
  results.push_back(selftest::round_trips(*table));
  results.push_back(selftest::bp8_equivalence(*table));
  results.push_back(selftest::zero_absorption(*table));
  results.push_back(selftest::table_quality(*table));
  results.push_back(selftest::subarray_and_oracle(seed));
  results.push_back(selftest::segment_conservation(seed + 1));
  results.push_back(selftest::pipeline_transparency(seed + 2));
  results.push_back(selftest::engine_oracle(table, seed + 3));
  results.push_back(selftest::energy_reproduction(constants));
  results.push_back(selftest::throughput_reproduction(EngineConfig{}));
  results.push_back(selftest::scaling_reproduction(constants, scaling));
  return results;
}

}  // namespace disca
