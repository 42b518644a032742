// DISCA simulator - small shared helpers.
#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>

namespace disca {

// Uniform double in [0,1) built from raw mt19937_64 output. Avoids
// std::uniform_real_distribution, whose bit-level behavior differs across
// standard libraries; results must be reproducible from a seed everywhere.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Pick an index in [0, n) from raw generator output (portable, modulo bias
// is irrelevant at the candidate-set sizes used here).
inline std::size_t pick_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// Fixed-format double for deterministic report output.
inline std::string fmt_double(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

inline std::string fmt_sci(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

}  // namespace disca
