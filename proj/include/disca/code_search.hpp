// DISCA simulator - derivation of Bent-Pyramid code tables.
//
// For each digit k every placement of k ones in 10 bits is a candidate
// (C(10,k) masks, 1024 in total per dataset). A table is scored by brute
// force over all 100 digit pairs: error(i,j) = |popcount(L_i AND R_j)/10 -
// (i/10)(j/10)|. Coordinate descent over the 20 code slots, restarted from
// seeded random assignments, converges to a low-error table; the run is
// fully deterministic for a fixed seed.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "disca/bp_format.hpp"
#include "disca/util.hpp"

namespace disca {

enum class SearchObjective { MeanAbsError, MaxError };

inline const char* objective_name(SearchObjective o) {
  return o == SearchObjective::MeanAbsError ? "mean" : "max";
}

struct SearchConfig {
  SearchObjective objective = SearchObjective::MeanAbsError;
  uint64_t seed = 0;
  int restarts = 16;       // restart 0 starts from the thermometer layout
  int max_sweeps = 64;     // coordinate-descent sweeps per restart
};

namespace detail {

struct Assignment {
  std::array<uint16_t, 10> left{};   // mask per digit, popcount(mask[k]) == k
  std::array<uint16_t, 10> right{};
};

//! All 10-bit masks with popcount k, ascending. Digit 0 has one candidate,
//! digit 9 has ten.
inline const std::vector<uint16_t>& candidates_for_digit(int k) {
  static const std::array<std::vector<uint16_t>, 10> all = [] {
    std::array<std::vector<uint16_t>, 10> a;
    for (uint16_t m = 0; m < 1024; ++m) {
      int pc = std::popcount(m);
      if (pc <= 9) a[static_cast<size_t>(pc)].push_back(m);  // all-ones would be digit 10
    }
    return a;
  }();
  return all[static_cast<size_t>(k)];
}

struct Score {
  long abs_sum = 0;     // sum over pairs of |10*popcount - i*j|
  int max_err = 0;      // max over pairs of the same quantity
  long signed_sum = 0;  // signed sum, used as a bias tie-breaker
};

inline Score score_assignment(const Assignment& a) {
  Score s;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      int pc = std::popcount(static_cast<uint16_t>(a.left[static_cast<size_t>(i)] &
                                                   a.right[static_cast<size_t>(j)]));
      int e = 10 * pc - i * j;
      s.abs_sum += std::abs(e);
      s.signed_sum += e;
      s.max_err = std::max(s.max_err, std::abs(e));
    }
  }
  return s;
}

//! Ordering: primary objective first, then the other metric, then the
//! signed-error magnitude. The bias tie-breaker matters downstream: a
//! balanced grid keeps long dot products from drifting.
inline bool better(const Score& a, const Score& b, SearchObjective obj) {
  auto key = [obj](const Score& s) {
    long primary = obj == SearchObjective::MeanAbsError ? s.abs_sum : s.max_err;
    long secondary = obj == SearchObjective::MeanAbsError ? s.max_err : s.abs_sum;
    return std::array<long, 3>{primary, secondary, std::abs(s.signed_sum)};
  };
  return key(a) < key(b);
}

inline Assignment thermometer_assignment() {
  Assignment a;
  for (int k = 0; k < 10; ++k) {
    a.left[static_cast<size_t>(k)] = static_cast<uint16_t>((1u << k) - 1u);
    a.right[static_cast<size_t>(k)] = static_cast<uint16_t>(((1u << k) - 1u) << (10 - k));
  }
  return a;
}

inline Assignment random_assignment(std::mt19937_64& rng) {
  Assignment a;
  for (int k = 0; k < 10; ++k) {
    const auto& c = candidates_for_digit(k);
    a.left[static_cast<size_t>(k)] = c[pick_index(rng, c.size())];
    a.right[static_cast<size_t>(k)] = c[pick_index(rng, c.size())];
  }
  return a;
}

//! Best-improvement sweeps over the 20 slots until a full sweep changes
//! nothing. Ties keep the incumbent, so the walk is deterministic.
inline Score coordinate_descent(Assignment& a, SearchObjective obj, int max_sweeps) {
  Score best = score_assignment(a);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool improved = false;
    for (int side = 0; side < 2; ++side) {
      auto& masks = side == 0 ? a.left : a.right;
      for (int k = 1; k < 10; ++k) {  // digit 0 has a single candidate
        uint16_t incumbent = masks[static_cast<size_t>(k)];
        uint16_t winner = incumbent;
        for (uint16_t cand : candidates_for_digit(k)) {
          if (cand == incumbent) continue;
          masks[static_cast<size_t>(k)] = cand;
          Score s = score_assignment(a);
          if (better(s, best, obj)) {
            best = s;
            winner = cand;
          }
        }
        if (winner != incumbent) improved = true;
        masks[static_cast<size_t>(k)] = winner;
      }
    }
    if (!improved) break;
  }
  return best;
}

inline BPCodeTable to_table(const Assignment& a, const std::string& metadata) {
  std::array<BPCode, 10> l, r;
  for (int k = 0; k < 10; ++k) {
    l[static_cast<size_t>(k)] = make_code(Bias::LeftBiased, 10, a.left[static_cast<size_t>(k)]);
    r[static_cast<size_t>(k)] = make_code(Bias::RightBiased, 10, a.right[static_cast<size_t>(k)]);
  }
  return BPCodeTable(l, r, metadata);
}

}  // namespace detail

//! Search for a code table minimizing the configured objective over the
//! 100-pair product grid. Deterministic: identical configs give bit-identical
//! tables. The achieved objective value is recorded in the table metadata.
inline BPCodeTable derive_code_table(const SearchConfig& cfg = {}) {
  using namespace detail;
  std::mt19937_64 rng(cfg.seed);
  Assignment best_a;
  Score best_s;
  bool have_best = false;
  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    Assignment a = r == 0 ? thermometer_assignment() : random_assignment(rng);
    Score s = coordinate_descent(a, cfg.objective, cfg.max_sweeps);
    if (!have_best || better(s, best_s, cfg.objective)) {
      best_a = a;
      best_s = s;
      have_best = true;
    }
  }
  std::string meta = std::string("derived: objective=") + objective_name(cfg.objective) +
                     " seed=" + std::to_string(cfg.seed) +
                     " restarts=" + std::to_string(cfg.restarts) +
                     " mean_abs_err=" + fmt_double(static_cast<double>(best_s.abs_sum) / 10000.0) +
                     " max_err=" + fmt_double(static_cast<double>(best_s.max_err) / 100.0, 2) +
                     " signed_err=" + fmt_double(static_cast<double>(best_s.signed_sum) / 10000.0);
  return detail::to_table(best_a, meta);
}

}  // namespace disca
