// DISCA simulator - SC-to-Binary Accumulator.
//
// A 256-bit wordline of AND products is split into n segments of m bits
// (n*m = 256, programmable; 32x8 for BP8). A layer of parallel counters
// popcounts each segment and an adder tree sums the counts, so one cycle
// accumulates 32 independent SC multiplications. A per-segment correction in
// {0,1,2} injects the implicit-bit AND terms that BP8 never stores,
// restoring exact 10-bit behavior. The unit is pipelined in two stages:
// counters, then tree.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "disca/sram_core.hpp"

namespace disca {

struct SegmentConfig {
  int segment_bits = 8;  // m; n = 256 / m

  explicit SegmentConfig(int m = 8) : segment_bits(m) {
    if (m < 1 || kWordlineBits % m != 0)
      throw std::invalid_argument("SegmentConfig: segment width must divide 256");
  }
  int segment_count() const { return kWordlineBits / segment_bits; }
};

//! Implicit-bit contribution per segment, bounded by the two implicit
//! positions of a BP8 code pair.
using CorrectionVector = std::vector<uint8_t>;

//! Parallel-counter layer: ones per m-bit segment, in wordline order.
inline std::vector<int> popcount_segments(const Wordline& w, const SegmentConfig& cfg) {
  const int m = cfg.segment_bits;
  std::vector<int> counts(static_cast<size_t>(cfg.segment_count()), 0);
  for (int s = 0; s < cfg.segment_count(); ++s) {
    int begin = s * m;
    int end = begin + m;
    int n = 0;
    // Segments never straddle more than the words they cover; count by word.
    for (int word = begin >> 6; word <= (end - 1) >> 6; ++word) {
      int lo = std::max(begin, word << 6);
      int hi = std::min(end, (word + 1) << 6);
      uint64_t bits = w.words[static_cast<size_t>(word)];
      bits >>= lo & 63;
      if (hi - lo < 64) bits &= (1ull << (hi - lo)) - 1u;
      n += std::popcount(bits);
    }
    counts[static_cast<size_t>(s)] = n;
  }
  return counts;
}

//! Adder tree over segment counts plus corrections. Plain integer addition;
//! the BP8 maximum (32*8 stored + 64 implicit) is far below overflow.
inline int accumulate(const Wordline& w, const SegmentConfig& cfg,
                      const CorrectionVector& correction) {
  if (static_cast<int>(correction.size()) != cfg.segment_count())
    throw std::invalid_argument("accumulate: correction length must equal the segment count");
  for (uint8_t c : correction)
    if (c > 2) throw std::invalid_argument("accumulate: correction entries are bounded by 2");
  std::vector<int> counts = popcount_segments(w, cfg);
  int sum = 0;
  for (size_t i = 0; i < counts.size(); ++i) sum += counts[i] + correction[i];
  return sum;
}

struct AccumulatorInput {
  Wordline wordline;
  CorrectionVector correction;
};

//! Two-stage pipeline wrapper: output at step t is accumulate() of the input
//! accepted at step t-2; empty cycles propagate as bubbles.
class AccumulatorPipeline {
 public:
  explicit AccumulatorPipeline(SegmentConfig cfg = SegmentConfig(8)) : cfg_(cfg) {}

  std::optional<int> step(std::optional<AccumulatorInput> input) {
    std::optional<int> output = stage2_;
    stage2_.reset();
    if (stage1_) {
      int sum = 0;
      for (size_t i = 0; i < stage1_->counts.size(); ++i)
        sum += stage1_->counts[i] + stage1_->correction[i];
      stage2_ = sum;
      stage1_.reset();
    }
    if (input) {
      if (static_cast<int>(input->correction.size()) != cfg_.segment_count())
        throw std::invalid_argument("pipeline: correction length must equal the segment count");
      for (uint8_t c : input->correction)
        if (c > 2) throw std::invalid_argument("pipeline: correction entries are bounded by 2");
      stage1_ = Stage1{popcount_segments(input->wordline, cfg_), std::move(input->correction)};
      ++accepted_;
    }
    ++cycles_;
    return output;
  }

  const SegmentConfig& config() const { return cfg_; }
  uint64_t cycles() const { return cycles_; }
  uint64_t accepted() const { return accepted_; }
  int occupancy() const { return (stage1_ ? 1 : 0) + (stage2_ ? 1 : 0); }
  bool empty() const { return occupancy() == 0; }

 private:
  struct Stage1 {
    std::vector<int> counts;
    CorrectionVector correction;
  };

  SegmentConfig cfg_;
  std::optional<Stage1> stage1_;
  std::optional<int> stage2_;
  uint64_t cycles_ = 0;
  uint64_t accepted_ = 0;
};

}  // namespace disca
