// DISCA simulator - MatMul engine over a grid of subarrays.
//
// A 128KB engine is 8 banks of four 4KB subarrays. Each wordline packs 32
// compressed 8-bit codes, so the shared K dimension is processed in chunks
// of 32 elements. Input rows live in the lower half of a subarray, weight
// columns in the upper half; the address program latches one input row and
// sweeps the resident weight rows (weight-stationary, output in row-major
// order). Every AND result runs through the SC-to-Binary accumulator with
// the implicit-bit correction for its operand pair, and partial sums are
// plain binary integers outside the array.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "disca/accumulator.hpp"
#include "disca/bp_format.hpp"
#include "disca/sram_core.hpp"

namespace disca {

inline constexpr int kChunkElems = 32;   // BP8 codes per wordline
inline constexpr int kRegionWordlines = kSubarrayRows / 2;

struct EngineConfig {
  int banks = 8;
  int subarrays_per_bank = 4;
  double clock_mhz = 500.0;
  SegmentConfig segments{8};

  int subarrays() const { return banks * subarrays_per_bank; }
  int capacity_bytes() const { return subarrays() * kSubarrayRows * kWordlineBits / 8; }
  void validate() const {
    if (banks < 1 || subarrays_per_bank < 1)
      throw std::invalid_argument("EngineConfig: need at least one subarray");
    if (clock_mhz <= 0.0) throw std::invalid_argument("EngineConfig: clock must be positive");
  }
};

struct MatMulJob {
  QuantizedMatrix lhs;  // M x K input digits
  QuantizedMatrix rhs;  // K x N weight digits
  std::shared_ptr<const BPCodeTable> table;

  int rows() const { return lhs.digits.rows; }
  int inner() const { return lhs.digits.cols; }
  int cols() const { return rhs.digits.cols; }

  void validate() const {
    if (!table) throw std::invalid_argument("MatMulJob: missing code table");
    if (lhs.digits.cols != rhs.digits.rows)
      throw std::invalid_argument("MatMulJob: inner dimensions disagree");
    if (lhs.scale <= 0.0 || rhs.scale <= 0.0)
      throw std::invalid_argument("MatMulJob: scales must be positive");
    for (uint8_t d : lhs.digits.d)
      if (d > 9) throw std::invalid_argument("MatMulJob: lhs digit out of range");
    for (uint8_t d : rhs.digits.d)
      if (d > 9) throw std::invalid_argument("MatMulJob: rhs digit out of range");
  }
};

class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::string limiting)
      : std::runtime_error(what), limiting_(std::move(limiting)) {}
  //! Which side ran out: "L region (M x ceil(K/32))" or "U region (N x ceil(K/32))".
  const std::string& limiting_dimension() const { return limiting_; }

 private:
  std::string limiting_;
};

struct CycleStats {
  uint64_t write_ops = 0;
  uint64_t read_ops = 0;
  uint64_t scmul_ops = 0;
  uint64_t latch_loads = 0;
  uint64_t decode_events = 0;
  uint64_t accumulate_ops = 0;
  uint64_t pipeline_cycles = 0;
  uint64_t wall_cycles = 0;
  uint64_t passes = 0;

  CycleStats& operator+=(const CycleStats& o) {
    write_ops += o.write_ops;
    read_ops += o.read_ops;
    scmul_ops += o.scmul_ops;
    latch_loads += o.latch_loads;
    decode_events += o.decode_events;
    accumulate_ops += o.accumulate_ops;
    pipeline_cycles += o.pipeline_cycles;
    wall_cycles += o.wall_cycles;
    passes += o.passes;
    return *this;
  }
};

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int64_t> v;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), 0) {}
  int64_t& at(int r, int c) { return v[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
  int64_t at(int r, int c) const { return v[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.v == b.v;
  }
};

// ---------------------------------------------------------------------------
// Tile planning.

struct WordlineLoad {
  int mem_row = 0;
  Wordline bits;
  std::array<uint8_t, kChunkElems> digits{};  // for implicit-bit corrections
};

struct PlanEntry {
  int l_row = 0;  // mem rows inside the subarray
  int u_row = 0;
  int out_row = 0;  // destination O[out_row][out_col] partial
  int out_col = 0;
};

struct SubarrayPlan {
  int subarray = 0;
  std::vector<WordlineLoad> loads;
  std::vector<PlanEntry> program;
};

struct TilePlan {
  std::vector<SubarrayPlan> subplans;  // only subarrays with work
  int rows = 0, inner = 0, cols = 0;
  int k_chunks = 0;
  uint64_t and_ops = 0;
};

namespace detail {

//! Pack one K-chunk of digits as 8-bit codes into a 256-bit wordline.
inline WordlineLoad pack_wordline(const BPCodeTable& bp8, Bias bias,
                                  const std::array<uint8_t, kChunkElems>& digits) {
  WordlineLoad load;
  load.digits = digits;
  for (int s = 0; s < kChunkElems; ++s) {
    const BPCode& c = bp8.code(BPDigit(digits[static_cast<size_t>(s)]), bias);
    for (int b = 0; b < 8; ++b)
      if (c.bit(b)) load.bits.set(s * 8 + b, true);
  }
  return load;
}

inline std::array<uint8_t, kChunkElems> lhs_chunk_digits(const DigitMatrix& m, int row, int chunk) {
  std::array<uint8_t, kChunkElems> d{};
  for (int s = 0; s < kChunkElems; ++s) {
    int k = chunk * kChunkElems + s;
    d[static_cast<size_t>(s)] = k < m.cols ? m.at(row, k) : 0;  // zero-digit padding
  }
  return d;
}

inline std::array<uint8_t, kChunkElems> rhs_chunk_digits(const DigitMatrix& m, int col, int chunk) {
  std::array<uint8_t, kChunkElems> d{};
  for (int s = 0; s < kChunkElems; ++s) {
    int k = chunk * kChunkElems + s;
    d[static_cast<size_t>(s)] = k < m.rows ? m.at(k, col) : 0;
  }
  return d;
}

//! A tile task: one I-block of input rows against one J-block of weight
//! columns for one K-chunk, resident together in a single subarray.
struct TileTask {
  int i_begin, i_end;
  int j_begin, j_end;
  int chunk;
  int l_wordlines() const { return i_end - i_begin; }
  int u_wordlines() const { return j_end - j_begin; }
};

inline std::vector<TileTask> enumerate_tasks(int rows, int cols, int k_chunks) {
  std::vector<TileTask> tasks;
  for (int c = 0; c < k_chunks; ++c)
    for (int ib = 0; ib < rows; ib += kRegionWordlines)
      for (int jb = 0; jb < cols; jb += kRegionWordlines)
        tasks.push_back({ib, std::min(rows, ib + kRegionWordlines), jb,
                         std::min(cols, jb + kRegionWordlines), c});
  return tasks;
}

struct SlotUsage {
  int l_used = 0;
  int u_used = 0;
  uint64_t busy = 0;  // loads + AND entries assigned so far
};

//! Lay one pass of tasks out across subarrays and emit loads plus the
//! latch-grouped address program. Tasks go to the least-loaded subarray with
//! room (lowest index on ties), so independent subarrays fill evenly and the
//! wall-cycle figure reflects their parallelism. Returns tasks that did not
//! fit; an empty remainder means the whole job is resident at once.
inline std::vector<TileTask> build_pass(const MatMulJob& job, const EngineConfig& cfg,
                                        const BPCodeTable& bp8,
                                        const std::vector<TileTask>& tasks, TilePlan& plan) {
  const LayoutMap map{kSubarrayRows};
  std::vector<SlotUsage> usage(static_cast<size_t>(cfg.subarrays()));
  std::map<int, SubarrayPlan> open;
  std::vector<TileTask> overflow;
  for (const TileTask& t : tasks) {
    int target = -1;
    for (int s = 0; s < cfg.subarrays(); ++s) {
      const SlotUsage& u = usage[static_cast<size_t>(s)];
      if (u.l_used + t.l_wordlines() <= kRegionWordlines &&
          u.u_used + t.u_wordlines() <= kRegionWordlines &&
          (target < 0 || u.busy < usage[static_cast<size_t>(target)].busy)) {
        target = s;
      }
    }
    if (target < 0) {
      overflow.push_back(t);
      continue;
    }
    SlotUsage& u = usage[static_cast<size_t>(target)];
    u.busy += static_cast<uint64_t>(t.l_wordlines() + t.u_wordlines()) +
              static_cast<uint64_t>(t.l_wordlines()) * static_cast<uint64_t>(t.u_wordlines());
    SubarrayPlan& sp = open[target];
    sp.subarray = target;
    std::vector<int> l_rows(static_cast<size_t>(t.l_wordlines()));
    std::vector<int> u_rows(static_cast<size_t>(t.u_wordlines()));
    for (int i = t.i_begin; i < t.i_end; ++i) {
      int mem_row = map.l_mem_row(u.l_used++);
      l_rows[static_cast<size_t>(i - t.i_begin)] = mem_row;
      WordlineLoad load = pack_wordline(bp8, Bias::LeftBiased,
                                        lhs_chunk_digits(job.lhs.digits, i, t.chunk));
      load.mem_row = mem_row;
      sp.loads.push_back(load);
    }
    for (int j = t.j_begin; j < t.j_end; ++j) {
      int mem_row = map.u_mem_row(u.u_used++);
      u_rows[static_cast<size_t>(j - t.j_begin)] = mem_row;
      WordlineLoad load = pack_wordline(bp8, Bias::RightBiased,
                                        rhs_chunk_digits(job.rhs.digits, j, t.chunk));
      load.mem_row = mem_row;
      sp.loads.push_back(load);
    }
    for (int i = t.i_begin; i < t.i_end; ++i)
      for (int j = t.j_begin; j < t.j_end; ++j)
        sp.program.push_back({l_rows[static_cast<size_t>(i - t.i_begin)],
                              u_rows[static_cast<size_t>(j - t.j_begin)], i, j});
  }
  for (auto& [index, sp] : open) {
    plan.and_ops += sp.program.size();
    plan.subplans.push_back(std::move(sp));
  }
  return overflow;
}

inline BPCodeTable to_bp8(const BPCodeTable& t) {
  return t.width() == 8 ? t : compress_table(t);
}

}  // namespace detail

//! Plan a fully resident (single-load) execution. Jobs that cannot fit all
//! wordlines at once raise CapacityError naming the limiting side; such jobs
//! run through run_matmul_multipass instead.
inline TilePlan plan_tiling(const MatMulJob& job, const EngineConfig& cfg) {
  job.validate();
  cfg.validate();
  TilePlan plan;
  plan.rows = job.rows();
  plan.inner = job.inner();
  plan.cols = job.cols();
  plan.k_chunks = (job.inner() + kChunkElems - 1) / kChunkElems;
  if (job.rows() == 0 || job.cols() == 0 || plan.k_chunks == 0) return plan;
  BPCodeTable bp8 = detail::to_bp8(*job.table);
  auto tasks = detail::enumerate_tasks(plan.rows, plan.cols, plan.k_chunks);
  auto overflow = detail::build_pass(job, cfg, bp8, tasks, plan);
  if (!overflow.empty()) {
    long l_needed = static_cast<long>(plan.rows) * plan.k_chunks;
    long u_needed = static_cast<long>(plan.cols) * plan.k_chunks;
    long per_side = static_cast<long>(cfg.subarrays()) * kRegionWordlines;
    std::string limiting;
    if (l_needed > per_side)
      limiting = "L region (M x ceil(K/32) = " + std::to_string(l_needed) + " wordlines)";
    else if (u_needed > per_side)
      limiting = "U region (N x ceil(K/32) = " + std::to_string(u_needed) + " wordlines)";
    else
      limiting = "tile placement (block fragmentation across subarrays)";
    throw CapacityError(
        "job does not fit the single-load strategy: " + limiting + "; engine holds " +
            std::to_string(per_side) + " wordlines per side across " +
            std::to_string(cfg.subarrays()) + " subarrays (multi-pass loading required)",
        limiting);
  }
  return plan;
}

struct MatMulResult {
  IntMatrix partials;  // O_int in popcount units (0.1 * scale_L * scale_U each)
  CycleStats stats;
  std::vector<std::string> traces;  // per touched subarray, when captured
};

namespace detail {

//! Execute one resident plan on fresh subarrays. Each subarray runs its
//! latch-grouped program; every AND feeds the two-stage accumulator whose
//! outputs land in the partial-sum matrix two steps later.
inline void execute_plan(const TilePlan& plan, const BPCodeTable& bp8, const SegmentConfig& seg,
                         IntMatrix& out, CycleStats& stats, std::vector<std::string>* traces) {
  if (seg.segment_bits != 8)
    throw std::invalid_argument("MatMul data path packs 8-bit codes; segment width must be 8");
  uint64_t max_busy = 0;
  for (const SubarrayPlan& sp : plan.subplans) {
    Subarray array;
    std::map<int, const WordlineLoad*> by_row;
    for (const WordlineLoad& load : sp.loads) {
      array.write_row(load.mem_row, load.bits);
      by_row[load.mem_row] = &load;
    }
    stats.write_ops += sp.loads.size();

    AccumulatorPipeline pipeline(seg);
    std::vector<const PlanEntry*> in_flight;
    size_t drained = 0;
    auto drain = [&](std::optional<int> sum) {
      if (!sum) return;
      const PlanEntry* e = in_flight[drained++];
      out.at(e->out_row, e->out_col) += *sum;
      ++stats.accumulate_ops;
    };

    int current_l = -1;
    for (const PlanEntry& e : sp.program) {
      bool reuse = e.l_row == current_l;
      Wordline product = array.compute_and(e.l_row, e.u_row, reuse);
      current_l = e.l_row;
      CorrectionVector corr(static_cast<size_t>(seg.segment_count()), 0);
      const auto& ld = by_row.at(e.l_row)->digits;
      const auto& ud = by_row.at(e.u_row)->digits;
      for (int s = 0; s < kChunkElems; ++s) {
        const BPCode& lc = bp8.code(BPDigit(ld[static_cast<size_t>(s)]), Bias::LeftBiased);
        const BPCode& uc = bp8.code(BPDigit(ud[static_cast<size_t>(s)]), Bias::RightBiased);
        corr[static_cast<size_t>(s)] =
            static_cast<uint8_t>(((lc.implicit_left && uc.implicit_left) ? 1 : 0) +
                                 ((lc.implicit_right && uc.implicit_right) ? 1 : 0));
      }
      in_flight.push_back(&e);
      drain(pipeline.step(AccumulatorInput{product, std::move(corr)}));
    }
    while (!pipeline.empty()) drain(pipeline.step(std::nullopt));

    const OpCounters& c = array.counters();
    stats.scmul_ops += c.scmuls;
    stats.decode_events += c.decodes;
    stats.latch_loads += c.latch_loads;
    stats.pipeline_cycles += pipeline.cycles();
    uint64_t busy = sp.loads.size() + sp.program.size() + (sp.program.empty() ? 0 : 2);
    max_busy = std::max(max_busy, busy);

    if (traces) {
      AddressProgram prog;
      prog.reserve(sp.program.size());
      for (const PlanEntry& e : sp.program) prog.push_back({e.l_row, e.u_row});
      traces->push_back("# subarray " + std::to_string(sp.subarray) + "\n" +
                        trace_of_program(array.layout(), prog).to_text());
    }
  }
  stats.wall_cycles += max_busy;
}

}  // namespace detail

//! Single-load MatMul: plan, load, sweep, accumulate. The partial-sum matrix
//! equals oracle_matmul exactly for any valid plan.
inline MatMulResult run_matmul(const MatMulJob& job, const EngineConfig& cfg,
                               bool capture_traces = false) {
  TilePlan plan = plan_tiling(job, cfg);
  MatMulResult result;
  result.partials = IntMatrix(job.rows(), job.cols());
  result.stats.passes = plan.subplans.empty() ? 0 : 1;
  BPCodeTable bp8 = detail::to_bp8(*job.table);
  detail::execute_plan(plan, bp8, cfg.segments, result.partials, result.stats,
                       capture_traces ? &result.traces : nullptr);
  return result;
}

//! Multi-pass MatMul for jobs beyond resident capacity: tiles are packed
//! into as many passes as needed and every pass pays its wordline writes.
inline MatMulResult run_matmul_multipass(const MatMulJob& job, const EngineConfig& cfg,
                                         bool capture_traces = false) {
  job.validate();
  cfg.validate();
  MatMulResult result;
  result.partials = IntMatrix(job.rows(), job.cols());
  int k_chunks = (job.inner() + kChunkElems - 1) / kChunkElems;
  if (job.rows() == 0 || job.cols() == 0 || k_chunks == 0) return result;
  BPCodeTable bp8 = detail::to_bp8(*job.table);
  auto pending = detail::enumerate_tasks(job.rows(), job.cols(), k_chunks);
  while (!pending.empty()) {
    TilePlan plan;
    plan.rows = job.rows();
    plan.inner = job.inner();
    plan.cols = job.cols();
    plan.k_chunks = k_chunks;
    auto overflow = detail::build_pass(job, cfg, bp8, pending, plan);
    if (overflow.size() == pending.size())
      throw std::logic_error("multipass: no forward progress");  // unreachable: a lone task fits
    CycleStats pass_stats;
    pass_stats.passes = 1;
    detail::execute_plan(plan, bp8, cfg.segments, result.partials, pass_stats,
                         capture_traces ? &result.traces : nullptr);
    result.stats += pass_stats;
    pending = std::move(overflow);
  }
  return result;
}

//! Independent reference: a direct triple loop over mul_popcount with no
//! subarray, decoder, or pipeline model. Width-10 semantics throughout.
inline IntMatrix oracle_matmul(const MatMulJob& job) {
  job.validate();
  BPCodeTable t10 = job.table->width() == 10 ? *job.table : expand_table(*job.table);
  IntMatrix out(job.rows(), job.cols());
  for (int i = 0; i < job.rows(); ++i)
    for (int j = 0; j < job.cols(); ++j) {
      int64_t sum = 0;
      for (int k = 0; k < job.inner(); ++k)
        sum += mul_popcount(t10.code(BPDigit(job.lhs.digits.at(i, k)), Bias::LeftBiased),
                            t10.code(BPDigit(job.rhs.digits.at(k, j)), Bias::RightBiased));
      out.at(i, j) = sum;
    }
  return out;
}

//! One popcount unit is 0.1 of the probability product: popcount/10
//! estimates (i/10)(j/10), so a partial sum of popcounts carries
//! scale_L x scale_U / 10 per unit.
inline RealMatrix dequantize_output(const IntMatrix& o, double scale_l, double scale_u) {
  if (scale_l <= 0.0 || scale_u <= 0.0)
    throw std::invalid_argument("dequantize_output: scales must be positive");
  RealMatrix r(o.rows, o.cols);
  for (size_t i = 0; i < o.v.size(); ++i)
    r.v[i] = static_cast<double>(o.v[i]) * scale_l * scale_u / 10.0;
  return r;
}

}  // namespace disca
