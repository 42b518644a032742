// DISCA simulator - the shipped default code table.
//
// Frozen output of derive_code_table() with the default search config
// (mean-abs objective, seed 0, 16 restarts). Mean pair error 0.0221 over the
// 10x10 product grid, which meets the per-pair rounding floor; worst pair is
// off by 0.05. A reproducibility test re-runs the search and compares.
#pragma once

#include <array>
#include <memory>

#include "disca/bp_format.hpp"

namespace disca {

inline constexpr std::array<const char*, 10> kDefaultLeftCodes = {
    "0000000000", "0000010000", "0010000100", "0100010010", "0101001010",
    "0101010101", "1010110101", "1011011101", "1101111011", "1111101111",
};

inline constexpr std::array<const char*, 10> kDefaultRightCodes = {
    "0000000000", "1000000000", "0000000011", "1110000000", "0000001111",
    "0111110000", "0000111111", "0001111111", "0011111111", "0111111111",
};

inline constexpr const char* kDefaultTableMetadata =
    "derived: objective=mean seed=0 restarts=16 mean_abs_err=0.022100 "
    "max_err=0.05 signed_err=0.000500";

//! Width-10 default table (value semantics; shared safely, never mutated).
inline const BPCodeTable& default_code_table() {
  static const BPCodeTable table = [] {
    std::array<BPCode, 10> l, r;
    for (int k = 0; k < 10; ++k) {
      l[static_cast<size_t>(k)] = code_from_string(Bias::LeftBiased, kDefaultLeftCodes[static_cast<size_t>(k)]);
      r[static_cast<size_t>(k)] = code_from_string(Bias::RightBiased, kDefaultRightCodes[static_cast<size_t>(k)]);
    }
    return BPCodeTable(l, r, kDefaultTableMetadata);
  }();
  return table;
}

//! The same table in compressed 8-bit form.
inline const BPCodeTable& default_code_table_bp8() {
  static const BPCodeTable table = compress_table(default_code_table());
  return table;
}

//! Non-owning handle to the default table for job construction.
inline std::shared_ptr<const BPCodeTable> default_code_table_ptr() {
  return {&default_code_table(), [](const BPCodeTable*) {}};
}

}  // namespace disca
