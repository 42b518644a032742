// DISCA simulator - post-layout energy constants and derived figures.
//
// Per-bit energies come from 180nm post-layout extraction: 411 fJ/bit write,
// 289.75 fJ/bit read, 301 fJ/bit bitline SC multiply, 13.15 fJ/bit for the
// decoder shared between two subarrays, and an accumulator that burns
// 31.14 mW at 500 MHz over a 256-bit wordline (243.28 fJ/bit). A MAC is the
// SC multiply plus decode plus accumulate and counts as two operations in
// all TOPS figures. Word-level (BP8) figures are the per-bit figures over 8.
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "disca/engine.hpp"
#include "disca/util.hpp"

namespace disca {

struct EnergyConstants {
  double write_fj_per_bit = 411.0;
  double read_fj_per_bit = 289.75;
  double scmul_fj_per_bit = 301.0;
  double decode_shared_fj_per_bit = 13.15;  // taken as given; see decoder_power_mw
  double accum_power_mw = 31.14;            // at clock_mhz over one 256-bit wordline
  double decoder_power_mw = 8.415;          // at 1 GHz, before pairwise sharing
  double clock_mhz = 500.0;
  std::optional<double> accum_fj_override;  // set by node scaling

  //! 31.14 mW / 500 MHz / 256 bits = 243.28 fJ/bit.
  double accum_fj_per_bit() const {
    if (accum_fj_override) return *accum_fj_override;
    return accum_power_mw * 1e6 / clock_mhz / static_cast<double>(kWordlineBits);
  }

  double scmul_plus_decode_fj_per_bit() const {
    return scmul_fj_per_bit + decode_shared_fj_per_bit;
  }

  //! Full hybrid MAC: SC multiply + shared decode + SC-to-binary accumulate.
  double mac_energy_fj_per_bit() const {
    return scmul_fj_per_bit + decode_shared_fj_per_bit + accum_fj_per_bit();
  }

  //! Bitline compute raises read energy ~3.9% (two wordlines active).
  double scmul_read_ratio() const { return scmul_fj_per_bit / read_fj_per_bit; }

  //! Derived figure: a plain SRAM read without compute capability is 4.5%
  //! cheaper than the DISCA read. Reported for comparison only.
  double baseline_sram_read_fj_per_bit() const { return read_fj_per_bit / 1.045; }

  void validate() const {
    for (double v : {write_fj_per_bit, read_fj_per_bit, scmul_fj_per_bit,
                     decode_shared_fj_per_bit, accum_power_mw, clock_mhz})
      if (!(v > 0.0)) throw std::invalid_argument("EnergyConstants: values must be positive");
  }
};

struct Efficiency {
  double tops_per_watt_per_bit = 0.0;
  double gops_per_watt_bp8 = 0.0;
};

//! Two operations per MAC divided by the MAC energy.
inline Efficiency efficiency(const EnergyConstants& c) {
  c.validate();
  Efficiency e;
  e.tops_per_watt_per_bit = 2.0 / c.mac_energy_fj_per_bit() * 1e3;  // fJ -> TOPS/W
  e.gops_per_watt_bp8 = e.tops_per_watt_per_bit * 1e3 / 8.0;
  return e;
}

//! Default derate bringing the 8.192 TOPS closed form to the effective
//! 7.9 TOPS figure (a ~3.6% gap; pipeline fill and latch turnaround are the
//! suspects, so both numbers are always reported).
inline constexpr double kDefaultThroughputDerate = 0.03564453125;

struct PeakThroughput {
  double ideal_tops_per_bit = 0.0;
  double effective_tops_per_bit = 0.0;
  double ideal_tops_bp8 = 0.0;
  double effective_tops_bp8 = 0.0;
  double derate = kDefaultThroughputDerate;
};

//! Ideal: every subarray retires one 256-bit AND per cycle, two ops per MAC.
inline PeakThroughput peak_throughput(const EngineConfig& cfg,
                                      double derate = kDefaultThroughputDerate) {
  cfg.validate();
  if (derate < 0.0 || derate >= 1.0)
    throw std::invalid_argument("peak_throughput: derate must be in [0, 1)");
  PeakThroughput p;
  p.derate = derate;
  p.ideal_tops_per_bit = static_cast<double>(cfg.subarrays()) * kWordlineBits *
                         (cfg.clock_mhz * 1e6) * 2.0 / 1e12;
  p.effective_tops_per_bit = p.ideal_tops_per_bit * (1.0 - derate);
  p.ideal_tops_bp8 = p.ideal_tops_per_bit / 8.0;
  p.effective_tops_bp8 = p.effective_tops_per_bit / 8.0;
  return p;
}

// ---------------------------------------------------------------------------
// Technology scaling.

struct NodeScale {
  std::string name;
  double energy_factor = 1.0;     // per-op energy multiplier relative to 180nm
  double frequency_factor = 1.0;  // clock multiplier relative to 180nm
};

//! Factors are configurable data, not claims: the defaults follow published
//! full-node CMOS dynamic-energy scaling trends, with 180nm as identity.
class ScalingTable {
 public:
  ScalingTable() = default;
  explicit ScalingTable(std::vector<NodeScale> nodes) : nodes_(std::move(nodes)) {
    for (const NodeScale& n : nodes_)
      if (!(n.energy_factor > 0.0) || !(n.frequency_factor > 0.0))
        throw std::invalid_argument("ScalingTable: factors must be positive");
  }

  static ScalingTable default_table() {
    return ScalingTable({{"180nm", 1.0, 1.0},
                         {"90nm", 0.18, 2.6},
                         {"45nm", 0.042, 5.6},
                         {"22nm", 0.0085, 9.5}});
  }

  const NodeScale& find(const std::string& name) const {
    for (const NodeScale& n : nodes_)
      if (n.name == name) return n;
    throw std::invalid_argument("unknown technology node: " + name);
  }

  const std::vector<NodeScale>& nodes() const { return nodes_; }

 private:
  std::vector<NodeScale> nodes_;
};

//! Multiply every per-op energy by the node factor and retime the clock.
//! 180nm is the identity.
inline EnergyConstants scale_to_node(const EnergyConstants& c, const NodeScale& node) {
  c.validate();
  EnergyConstants s = c;
  s.write_fj_per_bit *= node.energy_factor;
  s.read_fj_per_bit *= node.energy_factor;
  s.scmul_fj_per_bit *= node.energy_factor;
  s.decode_shared_fj_per_bit *= node.energy_factor;
  s.accum_fj_override = c.accum_fj_per_bit() * node.energy_factor;
  s.clock_mhz = c.clock_mhz * node.frequency_factor;
  return s;
}

// ---------------------------------------------------------------------------
// Per-job energy reports.

struct EnergyReport {
  std::string node = "180nm";
  uint64_t write_ops = 0, read_ops = 0, scmul_ops = 0, decode_events = 0, accumulate_ops = 0;
  double write_fj = 0.0, read_fj = 0.0, scmul_fj = 0.0, decode_fj = 0.0, accumulate_fj = 0.0;
  double total_fj = 0.0;
  uint64_t bit_ops = 0;  // 2 ops per MAC per bit lane
  double tops_per_watt_per_bit = 0.0;  // for the job as run, loads included
  double gops_per_watt_bp8 = 0.0;

  std::string to_text() const {
    std::string s;
    s += "energy report (node " + node + ")\n";
    auto line = [&](const char* name, uint64_t ops, double fj) {
      s += "  " + std::string(name) + ": " + std::to_string(ops) + " wordline ops, " +
           fmt_double(fj / 1e6, 6) + " nJ\n";
    };
    line("write", write_ops, write_fj);
    line("read", read_ops, read_fj);
    line("sc-mul", scmul_ops, scmul_fj);
    line("decode", decode_events, decode_fj);
    line("accumulate", accumulate_ops, accumulate_fj);
    s += "  total: " + fmt_double(total_fj / 1e6, 6) + " nJ\n";
    s += "  job efficiency: " + fmt_double(tops_per_watt_per_bit, 4) + " TOPS/W per bit, " +
         fmt_double(gops_per_watt_bp8, 2) + " GOPS/W at BP8\n";
    return s;
  }

  std::string to_csv() const {
    std::string s = "category,wordline_ops,energy_fj\n";
    s += "write," + std::to_string(write_ops) + "," + fmt_double(write_fj, 3) + "\n";
    s += "read," + std::to_string(read_ops) + "," + fmt_double(read_fj, 3) + "\n";
    s += "scmul," + std::to_string(scmul_ops) + "," + fmt_double(scmul_fj, 3) + "\n";
    s += "decode," + std::to_string(decode_events) + "," + fmt_double(decode_fj, 3) + "\n";
    s += "accumulate," + std::to_string(accumulate_ops) + "," + fmt_double(accumulate_fj, 3) + "\n";
    s += "total,," + fmt_double(total_fj, 3) + "\n";
    return s;
  }
};

//! Every event moves one 256-bit wordline; categories are linear in their
//! counts and the total is their sum.
inline EnergyReport job_energy(const CycleStats& stats, const EnergyConstants& c,
                               const std::string& node = "180nm") {
  c.validate();
  EnergyReport r;
  r.node = node;
  r.write_ops = stats.write_ops;
  r.read_ops = stats.read_ops;
  r.scmul_ops = stats.scmul_ops;
  r.decode_events = stats.decode_events;
  r.accumulate_ops = stats.accumulate_ops;
  const double bits = static_cast<double>(kWordlineBits);
  r.write_fj = static_cast<double>(stats.write_ops) * bits * c.write_fj_per_bit;
  r.read_fj = static_cast<double>(stats.read_ops) * bits * c.read_fj_per_bit;
  r.scmul_fj = static_cast<double>(stats.scmul_ops) * bits * c.scmul_fj_per_bit;
  r.decode_fj = static_cast<double>(stats.decode_events) * bits * c.decode_shared_fj_per_bit;
  r.accumulate_fj = static_cast<double>(stats.accumulate_ops) * bits * c.accum_fj_per_bit();
  r.total_fj = r.write_fj + r.read_fj + r.scmul_fj + r.decode_fj + r.accumulate_fj;
  r.bit_ops = 2 * stats.scmul_ops * static_cast<uint64_t>(kWordlineBits);
  if (r.total_fj > 0.0) {
    r.tops_per_watt_per_bit = static_cast<double>(r.bit_ops) / r.total_fj * 1e3;
    r.gops_per_watt_bp8 = r.tops_per_watt_per_bit * 1e3 / 8.0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// File formats: constants and scaling tables as JSON.

inline nlohmann::ordered_json constants_to_json(const EnergyConstants& c) {
  nlohmann::ordered_json j;
  j["write_fj_per_bit"] = c.write_fj_per_bit;
  j["read_fj_per_bit"] = c.read_fj_per_bit;
  j["scmul_fj_per_bit"] = c.scmul_fj_per_bit;
  j["decode_shared_fj_per_bit"] = c.decode_shared_fj_per_bit;
  j["accum_power_mw"] = c.accum_power_mw;
  j["decoder_power_mw"] = c.decoder_power_mw;
  j["clock_mhz"] = c.clock_mhz;
  if (c.accum_fj_override) j["accum_fj_per_bit"] = *c.accum_fj_override;
  return j;
}

inline EnergyConstants constants_from_json(const nlohmann::json& j) {
  EnergyConstants c;
  c.write_fj_per_bit = j.value("write_fj_per_bit", c.write_fj_per_bit);
  c.read_fj_per_bit = j.value("read_fj_per_bit", c.read_fj_per_bit);
  c.scmul_fj_per_bit = j.value("scmul_fj_per_bit", c.scmul_fj_per_bit);
  c.decode_shared_fj_per_bit = j.value("decode_shared_fj_per_bit", c.decode_shared_fj_per_bit);
  c.accum_power_mw = j.value("accum_power_mw", c.accum_power_mw);
  c.decoder_power_mw = j.value("decoder_power_mw", c.decoder_power_mw);
  c.clock_mhz = j.value("clock_mhz", c.clock_mhz);
  if (j.contains("accum_fj_per_bit")) c.accum_fj_override = j.at("accum_fj_per_bit").get<double>();
  c.validate();
  return c;
}

inline EnergyConstants load_constants(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open constants file: " + path);
  nlohmann::json j;
  f >> j;
  return constants_from_json(j);
}

inline ScalingTable scaling_from_json(const nlohmann::json& j) {
  std::vector<NodeScale> nodes;
  for (const auto& n : j.at("nodes"))
    nodes.push_back({n.at("name").get<std::string>(), n.at("energy_factor").get<double>(),
                     n.value("frequency_factor", 1.0)});
  return ScalingTable(std::move(nodes));
}

inline nlohmann::ordered_json scaling_to_json(const ScalingTable& t) {
  nlohmann::ordered_json j;
  auto arr = nlohmann::ordered_json::array();
  for (const NodeScale& n : t.nodes()) {
    nlohmann::ordered_json e;
    e["name"] = n.name;
    e["energy_factor"] = n.energy_factor;
    e["frequency_factor"] = n.frequency_factor;
    arr.push_back(e);
  }
  j["nodes"] = arr;
  return j;
}

inline ScalingTable load_scaling_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open scaling table: " + path);
  nlohmann::json j;
  f >> j;
  return scaling_from_json(j);
}

}  // namespace disca
