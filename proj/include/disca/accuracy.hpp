// DISCA simulator - accuracy evaluation against an exact real product.
#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "disca/bp_format.hpp"
#include "disca/default_table.hpp"
#include "disca/engine.hpp"
#include "disca/util.hpp"

namespace disca {

//! Exact double-precision reference product.
inline RealMatrix real_matmul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("real_matmul: shapes disagree");
  RealMatrix o(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j) {
      double s = 0.0;
      for (int k = 0; k < a.cols; ++k) s += a.at(i, k) * b.at(k, j);
      o.at(i, j) = s;
    }
  return o;
}

struct TrialError {
  double norm_err_mean = 0.0;  // mean |approx - exact| / max|exact| over the output
  double norm_err_max = 0.0;
  double rel_err_mean = 0.0;   // mean elementwise relative error above the floor
};

struct AccuracyReport {
  int trials = 0;
  int rows = 0, inner = 0, cols = 0;
  uint64_t seed = 0;
  double rel_floor = 0.0;
  std::vector<TrialError> per_trial;
  double mean_norm_err = 0.0;  // headline figure: mean over trials of norm_err_mean
  double max_norm_err = 0.0;
  double mean_rel_err = 0.0;

  std::string to_text() const {
    std::string s;
    s += "accuracy report: " + std::to_string(trials) + " trials of " + std::to_string(rows) +
         "x" + std::to_string(inner) + "x" + std::to_string(cols) + ", seed " +
         std::to_string(seed) + "\n";
    s += "  mean normalized error: " + fmt_double(mean_norm_err, 6) + "\n";
    s += "  max normalized error:  " + fmt_double(max_norm_err, 6) + "\n";
    s += "  mean relative error (entries above floor): " + fmt_double(mean_rel_err, 6) + "\n";
    return s;
  }
};

//! Compare one dequantized BP8 product against the exact real product.
//! Normalization is by the largest exact output magnitude, so the figure is
//! meaningful even when individual entries sit near zero.
inline TrialError evaluate_job(const RealMatrix& lhs, const RealMatrix& rhs,
                               const std::shared_ptr<const BPCodeTable>& table,
                               const EngineConfig& cfg, double rel_floor = 1e-9) {
  QuantizedMatrix ql = quantize_matrix(lhs, QuantizeStrategy::MaxAbs);
  QuantizedMatrix qr = quantize_matrix(rhs, QuantizeStrategy::MaxAbs);
  MatMulJob job{ql, qr, table};
  MatMulResult run = run_matmul_multipass(job, cfg);
  RealMatrix approx = dequantize_output(run.partials, ql.scale, qr.scale);
  RealMatrix exact = real_matmul(lhs, rhs);

  double max_exact = 0.0;
  for (double v : exact.v) max_exact = std::max(max_exact, std::abs(v));
  TrialError e;
  if (exact.v.empty()) return e;
  if (max_exact == 0.0) return e;  // all-zero reference: the format is exact at zero
  double sum_norm = 0.0, sum_rel = 0.0;
  size_t rel_n = 0;
  for (size_t i = 0; i < exact.v.size(); ++i) {
    double diff = std::abs(approx.v[i] - exact.v[i]);
    double norm = diff / max_exact;
    sum_norm += norm;
    e.norm_err_max = std::max(e.norm_err_max, norm);
    if (std::abs(exact.v[i]) > rel_floor * max_exact) {
      sum_rel += diff / std::abs(exact.v[i]);
      ++rel_n;
    }
  }
  e.norm_err_mean = sum_norm / static_cast<double>(exact.v.size());
  e.rel_err_mean = rel_n ? sum_rel / static_cast<double>(rel_n) : 0.0;
  return e;
}

struct AccuracyConfig {
  int rows = 64, inner = 64, cols = 64;
  int trials = 50;
  uint64_t seed = 0;
  double rel_floor = 1e-9;
  std::shared_ptr<const BPCodeTable> table;  // default table when null
  EngineConfig engine;
};

//! Seeded non-negative uniform trials through the full quantize -> engine ->
//! dequantize pipeline. Deterministic for a fixed config.
inline AccuracyReport accuracy_eval(const AccuracyConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("accuracy_eval: need at least one trial");
  std::shared_ptr<const BPCodeTable> table = cfg.table ? cfg.table : default_code_table_ptr();
  AccuracyReport report;
  report.trials = cfg.trials;
  report.rows = cfg.rows;
  report.inner = cfg.inner;
  report.cols = cfg.cols;
  report.seed = cfg.seed;
  report.rel_floor = cfg.rel_floor;
  std::mt19937_64 rng(cfg.seed);
  double sum_norm = 0.0, sum_rel = 0.0;
  for (int t = 0; t < cfg.trials; ++t) {
    RealMatrix lhs(cfg.rows, cfg.inner), rhs(cfg.inner, cfg.cols);
    for (double& v : lhs.v) v = uniform_unit(rng);
    for (double& v : rhs.v) v = uniform_unit(rng);
    TrialError e = evaluate_job(lhs, rhs, table, cfg.engine, cfg.rel_floor);
    report.per_trial.push_back(e);
    sum_norm += e.norm_err_mean;
    sum_rel += e.rel_err_mean;
    report.max_norm_err = std::max(report.max_norm_err, e.norm_err_max);
  }
  report.mean_norm_err = sum_norm / cfg.trials;
  report.mean_rel_err = sum_rel / cfg.trials;
  return report;
}

}  // namespace disca
