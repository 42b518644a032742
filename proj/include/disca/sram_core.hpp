// DISCA simulator - one 256C x 128R SRAM subarray with bitline compute.
//
// The lower half of the rows holds input-matrix wordlines (L region), the
// upper half weight-matrix wordlines (U region). The row decoder is split in
// two; the lower half can latch its address, so one L row stays active while
// U rows sweep past it. Activating one row from each half reads out the
// bitwise AND of the two rows on the shared bitlines without disturbing the
// stored data.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace disca {

inline constexpr int kWordlineBits = 256;
inline constexpr int kSubarrayRows = 128;

//! A 256-bit row, stored as four machine words.
struct Wordline {
  std::array<uint64_t, 4> words{};

  bool get(int i) const {
    check(i);
    return (words[static_cast<size_t>(i >> 6)] >> (i & 63)) & 1u;
  }
  void set(int i, bool v) {
    check(i);
    uint64_t m = 1ull << (i & 63);
    if (v)
      words[static_cast<size_t>(i >> 6)] |= m;
    else
      words[static_cast<size_t>(i >> 6)] &= ~m;
  }
  int popcount() const {
    int n = 0;
    for (uint64_t w : words) n += std::popcount(w);
    return n;
  }
  friend Wordline operator&(const Wordline& a, const Wordline& b) {
    Wordline r;
    for (size_t i = 0; i < 4; ++i) r.words[i] = a.words[i] & b.words[i];
    return r;
  }
  friend bool operator==(const Wordline& a, const Wordline& b) { return a.words == b.words; }

 private:
  static void check(int i) {
    if (i < 0 || i >= kWordlineBits) throw std::out_of_range("Wordline bit index");
  }
};

//! Row-region bookkeeping: U in rows [0, half), L in rows [half, total).
//! The 128-row subarray splits 64/64; smaller totals exist only to express
//! illustration-scale address traces.
struct LayoutMap {
  int total_rows = kSubarrayRows;

  explicit LayoutMap(int rows = kSubarrayRows) : total_rows(rows) {
    if (rows < 2 || rows % 2 != 0)
      throw std::invalid_argument("LayoutMap: row count must be even and >= 2");
  }
  int half() const { return total_rows / 2; }
  bool in_u_region(int mem_row) const { return mem_row >= 0 && mem_row < half(); }
  bool in_l_region(int mem_row) const { return mem_row >= half() && mem_row < total_rows; }
  //! L.Row(i) lives at MEM.Row(half + i).
  int l_mem_row(int l_index) const {
    if (l_index < 0 || l_index >= half()) throw std::out_of_range("L row index");
    return half() + l_index;
  }
  //! U.Row(j) lives at MEM.Row(j).
  int u_mem_row(int u_index) const {
    if (u_index < 0 || u_index >= half()) throw std::out_of_range("U row index");
    return u_index;
  }
};

struct DecoderState {
  std::optional<int> lower_latch;  // latched L-region mem row
  std::optional<int> last_upper;   // most recent U-region mem row
};

//! Access counters used for energy accounting. Decode events track the
//! shared-decoder activity that accompanies each bitline compute; plain
//! reads and writes carry their decode cost inside their own per-bit
//! constants.
struct OpCounters {
  uint64_t writes = 0;
  uint64_t reads = 0;
  uint64_t scmuls = 0;
  uint64_t decodes = 0;
  uint64_t latch_loads = 0;
};

enum class SenseMode { Differential, SingleEnded };

class Subarray {
 public:
  explicit Subarray(SenseMode mode = SenseMode::Differential) : sense_mode_(mode) {}

  static constexpr int rows() { return kSubarrayRows; }
  static constexpr int cols() { return kWordlineBits; }
  LayoutMap layout() const { return LayoutMap(kSubarrayRows); }
  SenseMode sense_mode() const { return sense_mode_; }

  void write_row(int row, const Wordline& w) {
    check_row(row);
    cells_[static_cast<size_t>(row)] = w;
    ++counters_.writes;
  }

  Wordline read_row(int row) const {
    check_row(row);
    ++counters_.reads;
    return cells_[static_cast<size_t>(row)];
  }

  //! Dual-wordline bitline AND of one L-region and one U-region row.
  //! Non-destructive; with latch_reuse the lower decoder must already hold
  //! l_mem_row.
  Wordline compute_and(int l_mem_row, int u_mem_row, bool latch_reuse) {
    LayoutMap map = layout();
    check_row(l_mem_row);
    check_row(u_mem_row);
    if (!map.in_l_region(l_mem_row) || !map.in_u_region(u_mem_row))
      throw std::invalid_argument(
          "compute_and: rows must pair one L-region and one U-region wordline (got " +
          std::to_string(l_mem_row) + ", " + std::to_string(u_mem_row) + ")");
    if (latch_reuse) {
      if (!decoder_.lower_latch || *decoder_.lower_latch != l_mem_row)
        throw std::invalid_argument("compute_and: latch_reuse without a matching latched row");
    } else {
      decoder_.lower_latch = l_mem_row;
      ++counters_.latch_loads;
    }
    decoder_.last_upper = u_mem_row;
    ++counters_.scmuls;
    ++counters_.decodes;
    return cells_[static_cast<size_t>(l_mem_row)] & cells_[static_cast<size_t>(u_mem_row)];
  }

  const DecoderState& decoder() const { return decoder_; }
  const OpCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = OpCounters{}; }

 private:
  static void check_row(int row) {
    if (row < 0 || row >= kSubarrayRows)
      throw std::out_of_range("Subarray row index " + std::to_string(row));
  }

  std::array<Wordline, kSubarrayRows> cells_{};
  DecoderState decoder_{};
  mutable OpCounters counters_{};
  SenseMode sense_mode_;
};

// ---------------------------------------------------------------------------
// Address programs and traces.

struct AndOp {
  int l_row = 0;  // mem row in the L region
  int u_row = 0;  // mem row in the U region
};

using AddressProgram = std::vector<AndOp>;

struct TraceEvent {
  enum class Kind { Latch, And };
  Kind kind = Kind::And;
  int l_row = 0;
  int u_row = 0;  // unused for Latch
};

struct AddressTrace {
  std::vector<TraceEvent> events;
  uint64_t latch_loads = 0;
  uint64_t upper_decodes = 0;

  //! One record per line: `LATCH <mem_row>` or `AND <l_mem_row> <u_mem_row>`.
  std::string to_text() const {
    std::string out;
    for (const TraceEvent& e : events) {
      if (e.kind == TraceEvent::Kind::Latch)
        out += "LATCH " + std::to_string(e.l_row) + "\n";
      else
        out += "AND " + std::to_string(e.l_row) + " " + std::to_string(e.u_row) + "\n";
    }
    return out;
  }
};

//! Validate a program against the layout and produce its trace without
//! touching an array: exactly one latch load per contiguous l_row group, one
//! upper decode per entry. An l_row may not reappear after its group ended.
inline AddressTrace trace_of_program(const LayoutMap& map, const AddressProgram& program) {
  AddressTrace trace;
  std::vector<int> seen_l;
  int current_l = -1;
  for (const AndOp& op : program) {
    if (!map.in_l_region(op.l_row) || !map.in_u_region(op.u_row))
      throw std::invalid_argument("address program: entry (" + std::to_string(op.l_row) +
                                  ", " + std::to_string(op.u_row) +
                                  ") violates the L/U region split");
    if (op.l_row != current_l) {
      for (int prev : seen_l)
        if (prev == op.l_row)
          throw std::invalid_argument("address program: l_row " + std::to_string(op.l_row) +
                                      " is not contiguously grouped");
      seen_l.push_back(op.l_row);
      current_l = op.l_row;
      trace.events.push_back({TraceEvent::Kind::Latch, op.l_row, 0});
      ++trace.latch_loads;
    }
    trace.events.push_back({TraceEvent::Kind::And, op.l_row, op.u_row});
    ++trace.upper_decodes;
  }
  return trace;
}

struct TraceResult {
  std::vector<Wordline> outputs;
  AddressTrace trace;
};

//! Execute a program on a subarray: one compute_and per entry, latch held
//! within each l_row group. Deterministic; outputs follow program order.
inline TraceResult issue_trace(Subarray& subarray, const AddressProgram& program) {
  TraceResult result;
  result.trace = trace_of_program(subarray.layout(), program);  // validates grouping first
  result.outputs.reserve(program.size());
  int current_l = -1;
  for (const AndOp& op : program) {
    bool reuse = op.l_row == current_l;
    result.outputs.push_back(subarray.compute_and(op.l_row, op.u_row, reuse));
    current_l = op.l_row;
  }
  return result;
}

//! The canonical sweep: latch each L row in turn and run it against every U
//! row, mirroring the MatMul micro-algorithm's loop order.
inline AddressProgram sweep_program(const LayoutMap& map, int l_rows, int u_rows) {
  if (l_rows < 0 || l_rows > map.half() || u_rows < 0 || u_rows > map.half())
    throw std::out_of_range("sweep_program: row counts exceed the region size");
  AddressProgram p;
  p.reserve(static_cast<size_t>(l_rows) * static_cast<size_t>(u_rows));
  for (int i = 0; i < l_rows; ++i)
    for (int j = 0; j < u_rows; ++j)
      p.push_back({map.l_mem_row(i), map.u_mem_row(j)});
  return p;
}

}  // namespace disca
