// DISCA simulator - command-line front end.
//
// Subcommands: codes derive|show|check, encode, matmul, bench, trace,
// verify. Every run is reproducible from its flags and input files; reports
// carry no timestamps or absolute paths, so identical configs produce
// byte-identical artifacts. Exit codes: 0 success, 1 validation or runtime
// failure, 2 usage error.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "disca/accuracy.hpp"
#include "disca/code_search.hpp"
#include "disca/default_table.hpp"
#include "disca/energy.hpp"
#include "disca/engine.hpp"
#include "disca/job_io.hpp"
#include "disca/selftest.hpp"
#include "disca/table_io.hpp"

namespace disca::cli {

inline constexpr const char* kTableEnvVar = "DISCA_TABLE";

//! --table flag beats the DISCA_TABLE environment variable beats the
//! built-in derived default.
inline std::shared_ptr<const BPCodeTable> resolve_table(const std::string& flag_path) {
  if (!flag_path.empty())
    return std::make_shared<BPCodeTable>(load_code_table(flag_path));
  if (const char* env = std::getenv(kTableEnvVar); env && *env)
    return std::make_shared<BPCodeTable>(load_code_table(env));
  return default_code_table_ptr();
}

namespace detail {

struct CodesOptions {
  uint64_t seed = 0;
  int restarts = 16;
  std::string objective = "mean";
  int width = 10;
  std::string out_path;
  std::string table_path;
};

inline int cmd_codes_derive(const CodesOptions& opt, std::ostream& out) {
  SearchConfig cfg;
  cfg.seed = opt.seed;
  cfg.restarts = opt.restarts;
  cfg.objective =
      opt.objective == "max" ? SearchObjective::MaxError : SearchObjective::MeanAbsError;
  BPCodeTable table = derive_code_table(cfg);
  if (opt.width == 8) table = compress_table(table);
  std::string text = table_to_text(table);
  if (opt.out_path.empty()) {
    out << text;
  } else {
    write_file(opt.out_path, text);
    out << "wrote " << opt.out_path << " (" << table.metadata() << ")\n";
  }
  return 0;
}

inline int cmd_codes_show(const BPCodeTable& table, std::ostream& out) {
  BPCodeTable t10 = table.width() == 10 ? table : expand_table(table);
  BPCodeTable t8 = compress_table(t10);
  out << "code table (width " << table.width() << "): " << table.metadata() << "\n\n";
  out << "digit  left (10-bit)  right (10-bit)  left BP8 [il ir]  right BP8 [il ir]\n";
  for (int k = 0; k < 10; ++k) {
    const BPCode& l8 = t8.code(BPDigit(k), Bias::LeftBiased);
    const BPCode& r8 = t8.code(BPDigit(k), Bias::RightBiased);
    out << "  " << k << "    " << t10.code(BPDigit(k), Bias::LeftBiased).bit_string() << "     "
        << t10.code(BPDigit(k), Bias::RightBiased).bit_string() << "      " << l8.bit_string()
        << " [" << l8.implicit_left << " " << l8.implicit_right << "]   " << r8.bit_string()
        << " [" << r8.implicit_left << " " << r8.implicit_right << "]\n";
  }
  out << "\nproduct popcounts (rows: left digit, cols: right digit)\n";
  auto grid = product_popcount_grid(t10);
  for (int i = 0; i < 10; ++i) {
    out << " ";
    for (int j = 0; j < 10; ++j) out << " " << grid[static_cast<size_t>(i)][static_cast<size_t>(j)];
    out << "\n";
  }
  out << "\nmean |popcount/10 - ij/100| = " << fmt_double(mean_abs_pair_error(t10), 6)
      << ", max = " << fmt_double(max_pair_error(t10), 4) << "\n";
  return 0;
}

inline int cmd_codes_check(const BPCodeTable& table, std::ostream& out) {
  int failures = 0;
  auto report = [&](const CheckResult& r) {
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.name
        << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    if (!r.passed) ++failures;
  };
  // Invariants are enforced on construction, so a loaded table passing this
  // far already has per-digit popcounts; re-check explicitly for reporting.
  CheckResult inv{"per-digit popcount invariant", true, ""};
  for (Bias b : {Bias::LeftBiased, Bias::RightBiased})
    for (int k = 0; k < 10; ++k) {
      const BPCode& c = table.code(BPDigit(k), b);
      if (c.total_ones() != k) {
        inv.passed = false;
        inv.detail = "digit " + std::to_string(k) + " (" + bias_name(b) + ") has " +
                     std::to_string(c.total_ones()) + " ones";
      }
    }
  report(inv);
  report(selftest::round_trips(table));
  report(selftest::bp8_equivalence(table));
  report(selftest::zero_absorption(table));
  report(selftest::table_quality(table));
  out << (failures ? "table check FAILED\n" : "table check passed\n");
  return failures ? 1 : 0;
}

struct MatMulOptions {
  int rows = 8, inner = 32, cols = 8;
  uint64_t seed = 0;
  std::string job_path;
  std::string table_path;
  std::string out_dir = ".";
  std::string format = "text";
  bool dump_traces = false;
  EngineConfig engine;
};

inline int cmd_matmul(const MatMulOptions& opt, std::ostream& out) {
  JobSpec spec;
  if (!opt.job_path.empty()) {
    spec = load_job_spec(opt.job_path);
  } else {
    spec.rows = opt.rows;
    spec.inner = opt.inner;
    spec.cols = opt.cols;
    spec.seed = opt.seed;
    spec.engine = opt.engine;
  }
  if (spec.rows < 0 || spec.inner < 0 || spec.cols < 0)
    throw std::invalid_argument("matmul: shapes must be non-negative");
  std::shared_ptr<const BPCodeTable> table =
      spec.table_path && opt.table_path.empty() ? resolve_table(*spec.table_path)
                                                : resolve_table(opt.table_path);
  materialize_random_inputs(spec);

  QuantizedMatrix ql, qr;
  if (spec.has_explicit_digits) {
    ql = spec.lhs_digits;
    qr = spec.rhs_digits;
  } else {
    ql = spec.fixed_scale_lhs
             ? quantize_matrix(spec.lhs_real, QuantizeStrategy::FixedScale, *spec.fixed_scale_lhs)
             : quantize_matrix(spec.lhs_real, QuantizeStrategy::MaxAbs);
    qr = spec.fixed_scale_rhs
             ? quantize_matrix(spec.rhs_real, QuantizeStrategy::FixedScale, *spec.fixed_scale_rhs)
             : quantize_matrix(spec.rhs_real, QuantizeStrategy::MaxAbs);
  }
  MatMulJob job{ql, qr, table};
  MatMulResult result = run_matmul_multipass(job, spec.engine, opt.dump_traces);
  RealMatrix approx = dequantize_output(result.partials, ql.scale, qr.scale);

  // The reference product is over the values the digits represent (exact
  // real inputs when given, represented values otherwise).
  RealMatrix lhs_ref, rhs_ref;
  if (spec.has_explicit_real) {
    lhs_ref = spec.lhs_real;
    rhs_ref = spec.rhs_real;
  } else {
    lhs_ref = RealMatrix(spec.rows, spec.inner);
    rhs_ref = RealMatrix(spec.inner, spec.cols);
    for (size_t i = 0; i < lhs_ref.v.size(); ++i)
      lhs_ref.v[i] = ql.digits.d[i] / 10.0 * ql.scale;
    for (size_t i = 0; i < rhs_ref.v.size(); ++i)
      rhs_ref.v[i] = qr.digits.d[i] / 10.0 * qr.scale;
  }
  RealMatrix exact = real_matmul(lhs_ref, rhs_ref);
  double max_exact = 0.0;
  for (double v : exact.v) max_exact = std::max(max_exact, std::abs(v));
  double sum_norm = 0.0, max_norm = 0.0;
  for (size_t i = 0; i < exact.v.size(); ++i) {
    double norm = max_exact > 0.0 ? std::abs(approx.v[i] - exact.v[i]) / max_exact : 0.0;
    sum_norm += norm;
    max_norm = std::max(max_norm, norm);
  }
  double mean_norm = exact.v.empty() ? 0.0 : sum_norm / static_cast<double>(exact.v.size());

  EnergyConstants constants;
  EnergyReport energy = job_energy(result.stats, constants);

  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  write_file((fs::path(opt.out_dir) / "O.csv").string(), matrix_to_csv(approx));
  write_file((fs::path(opt.out_dir) / "O_int.csv").string(), matrix_to_csv(result.partials));

  std::ostringstream rep;
  if (opt.format == "csv") {
    rep << "key,value\n";
    rep << "rows," << spec.rows << "\ninner," << spec.inner << "\ncols," << spec.cols << "\n";
    rep << "seed," << spec.seed << "\n";
    rep << "scale_l," << double_to_string(ql.scale) << "\nscale_u," << double_to_string(qr.scale)
        << "\n";
    rep << "passes," << result.stats.passes << "\nwrites," << result.stats.write_ops
        << "\nscmul," << result.stats.scmul_ops << "\nlatch_loads," << result.stats.latch_loads
        << "\ndecode_events," << result.stats.decode_events << "\naccumulate,"
        << result.stats.accumulate_ops << "\npipeline_cycles," << result.stats.pipeline_cycles
        << "\nwall_cycles," << result.stats.wall_cycles << "\n";
    rep << "mean_norm_err," << fmt_double(mean_norm, 6) << "\nmax_norm_err,"
        << fmt_double(max_norm, 6) << "\n";
    rep << energy.to_csv();
  } else {
    rep << "disca matmul report\n";
    rep << "job: " << spec.rows << "x" << spec.inner << "x" << spec.cols << ", seed " << spec.seed
        << "\n";
    rep << "table: " << table->metadata() << " (width " << table->width() << ")\n";
    rep << "engine: " << spec.engine.banks << " banks x " << spec.engine.subarrays_per_bank
        << " subarrays, " << fmt_double(spec.engine.clock_mhz, 1) << " MHz\n";
    rep << "scales: L=" << double_to_string(ql.scale) << " U=" << double_to_string(qr.scale)
        << "\n";
    rep << "stats: passes=" << result.stats.passes << " writes=" << result.stats.write_ops
        << " scmul=" << result.stats.scmul_ops << " latch_loads=" << result.stats.latch_loads
        << " decode=" << result.stats.decode_events
        << " accumulate=" << result.stats.accumulate_ops
        << " pipeline_cycles=" << result.stats.pipeline_cycles
        << " wall_cycles=" << result.stats.wall_cycles << "\n";
    rep << "accuracy vs exact product: mean_norm_err=" << fmt_double(mean_norm, 6)
        << " max_norm_err=" << fmt_double(max_norm, 6) << "\n";
    rep << energy.to_text();
  }
  std::string report_name = opt.format == "csv" ? "report.csv" : "report.txt";
  write_file((fs::path(opt.out_dir) / report_name).string(), rep.str());

  if (opt.dump_traces) {
    std::string all;
    for (const std::string& t : result.traces) all += t;
    write_file((fs::path(opt.out_dir) / "trace.txt").string(), all);
  }

  out << "matmul " << spec.rows << "x" << spec.inner << "x" << spec.cols << ": mean_norm_err="
      << fmt_double(mean_norm, 6) << ", total_energy=" << fmt_double(energy.total_fj / 1e6, 6)
      << " nJ, wall_cycles=" << result.stats.wall_cycles << ", artifacts in " << opt.out_dir
      << "\n";
  return 0;
}

struct BenchOptions {
  std::string node;
  std::string constants_path;
  std::string scaling_path;
  double derate = kDefaultThroughputDerate;
  std::string format = "text";
  EngineConfig engine;
  std::optional<double> write_fj, read_fj, scmul_fj, decode_fj, accum_power_mw, decoder_power_mw;
};

inline int cmd_bench(const BenchOptions& opt, std::ostream& out) {
  EnergyConstants c =
      opt.constants_path.empty() ? EnergyConstants{} : load_constants(opt.constants_path);
  if (opt.write_fj) c.write_fj_per_bit = *opt.write_fj;
  if (opt.read_fj) c.read_fj_per_bit = *opt.read_fj;
  if (opt.scmul_fj) c.scmul_fj_per_bit = *opt.scmul_fj;
  if (opt.decode_fj) c.decode_shared_fj_per_bit = *opt.decode_fj;
  if (opt.accum_power_mw) c.accum_power_mw = *opt.accum_power_mw;
  if (opt.decoder_power_mw) c.decoder_power_mw = *opt.decoder_power_mw;
  c.clock_mhz = opt.engine.clock_mhz;
  c.validate();
  ScalingTable scaling =
      opt.scaling_path.empty() ? ScalingTable::default_table() : load_scaling_table(opt.scaling_path);

  Efficiency eff = efficiency(c);
  PeakThroughput peak = peak_throughput(opt.engine, opt.derate);

  if (opt.format == "csv") {
    out << "key,value\n";
    out << "write_fj_per_bit," << fmt_double(c.write_fj_per_bit, 3) << "\n";
    out << "read_fj_per_bit," << fmt_double(c.read_fj_per_bit, 3) << "\n";
    out << "scmul_fj_per_bit," << fmt_double(c.scmul_fj_per_bit, 3) << "\n";
    out << "decode_shared_fj_per_bit," << fmt_double(c.decode_shared_fj_per_bit, 3) << "\n";
    out << "accum_fj_per_bit," << fmt_double(c.accum_fj_per_bit(), 5) << "\n";
    out << "scmul_plus_decode_fj_per_bit," << fmt_double(c.scmul_plus_decode_fj_per_bit(), 3)
        << "\n";
    out << "mac_fj_per_bit," << fmt_double(c.mac_energy_fj_per_bit(), 5) << "\n";
    out << "scmul_read_ratio," << fmt_double(c.scmul_read_ratio(), 5) << "\n";
    out << "baseline_read_fj_per_bit_derived," << fmt_double(c.baseline_sram_read_fj_per_bit(), 3)
        << "\n";
    out << "tops_per_watt_per_bit," << fmt_double(eff.tops_per_watt_per_bit, 5) << "\n";
    out << "gops_per_watt_bp8," << fmt_double(eff.gops_per_watt_bp8, 3) << "\n";
    out << "ideal_tops_per_bit," << fmt_double(peak.ideal_tops_per_bit, 5) << "\n";
    out << "effective_tops_per_bit," << fmt_double(peak.effective_tops_per_bit, 5) << "\n";
    out << "ideal_tops_bp8," << fmt_double(peak.ideal_tops_bp8, 5) << "\n";
    out << "effective_tops_bp8," << fmt_double(peak.effective_tops_bp8, 5) << "\n";
  } else {
    out << "DISCA engine benchmark (" << opt.engine.banks << " banks x "
        << opt.engine.subarrays_per_bank << " subarrays = " << opt.engine.subarrays()
        << " subarrays, " << opt.engine.capacity_bytes() / 1024 << " KB, "
        << fmt_double(opt.engine.clock_mhz, 1) << " MHz)\n";
    out << "per-bit energies (fJ/bit):\n";
    out << "  write      " << fmt_double(c.write_fj_per_bit, 3) << "\n";
    out << "  read       " << fmt_double(c.read_fj_per_bit, 3) << " (plain SRAM read, derived: "
        << fmt_double(c.baseline_sram_read_fj_per_bit(), 3) << ")\n";
    out << "  sc-mul     " << fmt_double(c.scmul_fj_per_bit, 3) << " (sc-mul/read ratio "
        << fmt_double(c.scmul_read_ratio(), 4) << ")\n";
    out << "  decode     " << fmt_double(c.decode_shared_fj_per_bit, 3)
        << " (shared across two subarrays)\n";
    out << "  accumulate " << fmt_double(c.accum_fj_per_bit(), 5) << " ("
        << fmt_double(c.accum_power_mw, 2) << " mW at " << fmt_double(c.clock_mhz, 1)
        << " MHz over 256 bits)\n";
    out << "  sc-mul + decode = " << fmt_double(c.scmul_plus_decode_fj_per_bit(), 3) << "\n";
    out << "  MAC = " << fmt_double(c.mac_energy_fj_per_bit(), 5) << "\n";
    out << "efficiency: " << fmt_double(eff.tops_per_watt_per_bit, 4) << " TOPS/W per bit, "
        << fmt_double(eff.gops_per_watt_bp8, 2) << " GOPS/W at BP8\n";
    out << "peak throughput: ideal " << fmt_double(peak.ideal_tops_per_bit, 4)
        << " TOPS per bit (" << fmt_double(peak.ideal_tops_bp8, 4) << " TOPS at BP8), effective "
        << fmt_double(peak.effective_tops_per_bit, 4) << " TOPS per bit ("
        << fmt_double(peak.effective_tops_bp8, 4) << " TOPS at BP8, derate "
        << fmt_double(peak.derate * 100.0, 2) << "%)\n";
  }

  if (!opt.node.empty()) {
    const NodeScale& node = scaling.find(opt.node);
    EnergyConstants scaled = scale_to_node(c, node);
    Efficiency seff = efficiency(scaled);
    double gain = seff.tops_per_watt_per_bit / eff.tops_per_watt_per_bit;
    if (opt.format == "csv") {
      out << "node," << node.name << "\n";
      out << "node_mac_fj_per_bit," << fmt_double(scaled.mac_energy_fj_per_bit(), 5) << "\n";
      out << "node_tops_per_watt_per_bit," << fmt_double(seff.tops_per_watt_per_bit, 5) << "\n";
      out << "node_gops_per_watt_bp8," << fmt_double(seff.gops_per_watt_bp8, 3) << "\n";
      out << "node_efficiency_gain," << fmt_double(gain, 3) << "\n";
    } else {
      out << "scaled to " << node.name << " (energy x" << double_to_string(node.energy_factor)
          << ", clock x" << double_to_string(node.frequency_factor) << "):\n";
      out << "  MAC = " << fmt_double(scaled.mac_energy_fj_per_bit(), 5) << " fJ/bit, "
          << fmt_double(seff.tops_per_watt_per_bit, 4) << " TOPS/W per bit ("
          << fmt_double(gain, 2) << "x vs 180nm), " << fmt_double(seff.gops_per_watt_bp8, 2)
          << " GOPS/W at BP8\n";
    }
  }
  return 0;
}

struct TraceOptions {
  int mem_rows = kSubarrayRows;
  int l_rows = 2;
  int u_rows = 4;
  std::string out_path;
};

inline int cmd_trace(const TraceOptions& opt, std::ostream& out) {
  LayoutMap map(opt.mem_rows);
  AddressProgram program = sweep_program(map, opt.l_rows, opt.u_rows);
  std::string text = trace_of_program(map, program).to_text();
  if (opt.out_path.empty())
    out << text;
  else
    write_file(opt.out_path, text);
  return 0;
}

struct VerifyOptions {
  std::string table_path;
  std::string constants_path;
  std::string scaling_path;
  uint64_t seed = 0;
};

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
  std::shared_ptr<const BPCodeTable> table = resolve_table(opt.table_path);
  EnergyConstants constants =
      opt.constants_path.empty() ? EnergyConstants{} : load_constants(opt.constants_path);
  ScalingTable scaling =
      opt.scaling_path.empty() ? ScalingTable::default_table() : load_scaling_table(opt.scaling_path);
  auto results = run_self_checks(table, constants, scaling, opt.seed);
  int failures = 0;
  for (const CheckResult& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.name
        << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    if (!r.passed) ++failures;
  }
  out << (failures ? "verify FAILED (" + std::to_string(failures) + " checks)\n"
                   : "verify passed (" + std::to_string(results.size()) + " checks)\n");
  return failures ? 1 : 0;
}

}  // namespace detail

//! Parse and dispatch. Streams are injectable so tests can capture output.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"DISCA in-SRAM stochastic-computing MatMul simulator"};
  app.require_subcommand(1);

  // codes
  auto* codes = app.add_subcommand("codes", "derive, inspect, or validate code tables");
  codes->require_subcommand(1);
  detail::CodesOptions codes_opt;
  auto* derive = codes->add_subcommand("derive", "search for a code table and emit it");
  derive->add_option("--seed", codes_opt.seed, "search seed");
  derive->add_option("--restarts", codes_opt.restarts, "search restarts")->check(CLI::PositiveNumber);
  derive->add_option("--objective", codes_opt.objective, "mean or max pair error")
      ->check(CLI::IsMember({"mean", "max"}));
  derive->add_option("--width", codes_opt.width, "emit width (10 or 8)")
      ->check(CLI::IsMember({8, 10}));
  derive->add_option("--out", codes_opt.out_path, "output table file (stdout when omitted)");
  auto* show = codes->add_subcommand("show", "print codes and the product grid");
  show->add_option("--table", codes_opt.table_path, "table file");
  auto* check_cmd = codes->add_subcommand("check", "validate table invariants");
  check_cmd->add_option("--table", codes_opt.table_path, "table file");

  // encode
  struct {
    int digit = 0;
    std::string bias = "left";
    int width = 10;
    std::string table_path;
  } encode_opt;
  auto* enc = app.add_subcommand("encode", "print the code for a digit");
  enc->add_option("--digit", encode_opt.digit, "digit 0..9")->required()->check(CLI::Range(0, 9));
  enc->add_option("--bias", encode_opt.bias, "left or right dataset")
      ->check(CLI::IsMember({"left", "right"}));
  enc->add_option("--width", encode_opt.width, "code width")->check(CLI::IsMember({8, 10}));
  enc->add_option("--table", encode_opt.table_path, "table file");

  // matmul
  detail::MatMulOptions mm;
  auto* matmul = app.add_subcommand("matmul", "run a quantized MatMul through the engine");
  matmul->add_option("--rows", mm.rows, "output rows M")->check(CLI::NonNegativeNumber);
  matmul->add_option("--inner", mm.inner, "shared dimension K")->check(CLI::NonNegativeNumber);
  matmul->add_option("--cols", mm.cols, "output cols N")->check(CLI::NonNegativeNumber);
  matmul->add_option("--seed", mm.seed, "input generator seed");
  matmul->add_option("--job", mm.job_path, "job spec file (overrides shape flags)");
  matmul->add_option("--table", mm.table_path, "table file");
  matmul->add_option("--out", mm.out_dir, "output directory");
  matmul->add_option("--format", mm.format, "report format")->check(CLI::IsMember({"csv", "text"}));
  matmul->add_flag("--trace", mm.dump_traces, "dump per-subarray address traces");
  matmul->add_option("--banks", mm.engine.banks, "engine banks")->check(CLI::PositiveNumber);
  matmul->add_option("--subarrays-per-bank", mm.engine.subarrays_per_bank, "subarrays per bank")
      ->check(CLI::PositiveNumber);
  matmul->add_option("--clock", mm.engine.clock_mhz, "clock MHz")->check(CLI::PositiveNumber);

  // bench
  detail::BenchOptions bench;
  int bench_subarrays = 0;
  auto* bench_cmd = app.add_subcommand("bench", "report energy, efficiency, and throughput");
  bench_cmd->add_option("--node", bench.node, "scale figures to a technology node");
  bench_cmd->add_option("--constants", bench.constants_path, "energy constants file");
  bench_cmd->add_option("--scaling", bench.scaling_path, "scaling table file");
  bench_cmd->add_option("--derate", bench.derate, "effective-throughput derate in [0,1)");
  bench_cmd->add_option("--format", bench.format, "output format")
      ->check(CLI::IsMember({"csv", "text"}));
  bench_cmd->add_option("--banks", bench.engine.banks, "engine banks")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--subarrays-per-bank", bench.engine.subarrays_per_bank,
                        "subarrays per bank")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--subarrays", bench_subarrays, "total subarrays (overrides banks)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--clock", bench.engine.clock_mhz, "clock MHz")->check(CLI::PositiveNumber);
  double write_fj = 0, read_fj = 0, scmul_fj = 0, decode_fj = 0, accum_mw = 0, decoder_mw = 0;
  auto* o1 = bench_cmd->add_option("--write-fj", write_fj, "override write fJ/bit");
  auto* o2 = bench_cmd->add_option("--read-fj", read_fj, "override read fJ/bit");
  auto* o3 = bench_cmd->add_option("--scmul-fj", scmul_fj, "override SC-MUL fJ/bit");
  auto* o4 = bench_cmd->add_option("--decode-fj", decode_fj, "override shared-decode fJ/bit");
  auto* o5 = bench_cmd->add_option("--accum-power-mw", accum_mw, "override accumulator mW");
  auto* o6 = bench_cmd->add_option("--decoder-power-mw", decoder_mw, "override decoder mW");

  // trace
  detail::TraceOptions trace;
  auto* trace_cmd = app.add_subcommand("trace", "emit a latch/AND address trace");
  trace_cmd->add_option("--mem-rows", trace.mem_rows, "total rows of the layout (even)")
      ->check(CLI::PositiveNumber);
  trace_cmd->add_option("--l-rows", trace.l_rows, "input rows to sweep")->check(CLI::NonNegativeNumber);
  trace_cmd->add_option("--u-rows", trace.u_rows, "weight rows per sweep")
      ->check(CLI::NonNegativeNumber);
  trace_cmd->add_option("--out", trace.out_path, "trace file (stdout when omitted)");

  // verify
  detail::VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the full invariant suite");
  verify_cmd->add_option("--table", verify.table_path, "table file");
  verify_cmd->add_option("--constants", verify.constants_path, "energy constants file");
  verify_cmd->add_option("--scaling", verify.scaling_path, "scaling table file");
  verify_cmd->add_option("--seed", verify.seed, "randomized-check seed");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (derive->parsed()) return detail::cmd_codes_derive(codes_opt, out);
    if (show->parsed()) return detail::cmd_codes_show(*resolve_table(codes_opt.table_path), out);
    if (check_cmd->parsed())
      return detail::cmd_codes_check(*resolve_table(codes_opt.table_path), out);
    if (enc->parsed()) {
      std::shared_ptr<const BPCodeTable> table = resolve_table(encode_opt.table_path);
      BPCodeTable t = table->width() == 10 ? *table : expand_table(*table);
      if (encode_opt.width == 8) t = compress_table(t);
      Bias b = encode_opt.bias == "right" ? Bias::RightBiased : Bias::LeftBiased;
      const BPCode& c = encode(BPDigit(encode_opt.digit), b, t);
      out << c.bit_string();
      if (c.width == 8)
        out << " implicit_left=" << c.implicit_left << " implicit_right=" << c.implicit_right;
      out << " (digit " << encode_opt.digit << ", " << bias_name(b) << ", width " << c.width
          << ")\n";
      return 0;
    }
    if (matmul->parsed()) return detail::cmd_matmul(mm, out);
    if (bench_cmd->parsed()) {
      if (*o1) bench.write_fj = write_fj;
      if (*o2) bench.read_fj = read_fj;
      if (*o3) bench.scmul_fj = scmul_fj;
      if (*o4) bench.decode_fj = decode_fj;
      if (*o5) bench.accum_power_mw = accum_mw;
      if (*o6) bench.decoder_power_mw = decoder_mw;
      if (bench_subarrays > 0) {
        bench.engine.banks = bench_subarrays;
        bench.engine.subarrays_per_bank = 1;
      }
      return detail::cmd_bench(bench, out);
    }
    if (trace_cmd->parsed()) return detail::cmd_trace(trace, out);
    if (verify_cmd->parsed()) return detail::cmd_verify(verify, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no command\n";
  return 2;
}

}  // namespace disca::cli
