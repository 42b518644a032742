// DISCA simulator - matrix CSV output and job-spec files.
#pragma once

#include <charconv>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "disca/bp_format.hpp"
#include "disca/engine.hpp"
#include "disca/util.hpp"

namespace disca {

//! Shortest round-trip decimal form, deterministic across runs.
inline std::string double_to_string(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string matrix_to_csv(const RealMatrix& m) {
  std::string s;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      if (c) s += ',';
      s += double_to_string(m.at(r, c));
    }
    s += '\n';
  }
  return s;
}

inline std::string matrix_to_csv(const IntMatrix& m) {
  std::string s;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      if (c) s += ',';
      s += std::to_string(m.at(r, c));
    }
    s += '\n';
  }
  return s;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

// ---------------------------------------------------------------------------
// Job specs: either shapes plus a seed for uniform inputs, or explicit
// real/digit matrices.

struct JobSpec {
  int rows = 0, inner = 0, cols = 0;
  uint64_t seed = 0;
  bool has_explicit_real = false;
  RealMatrix lhs_real, rhs_real;
  bool has_explicit_digits = false;
  QuantizedMatrix lhs_digits, rhs_digits;
  std::optional<std::string> table_path;
  std::optional<double> fixed_scale_lhs, fixed_scale_rhs;
  EngineConfig engine;
};

namespace detail {

inline RealMatrix real_matrix_from_json(const nlohmann::json& rows) {
  if (!rows.is_array() || rows.empty()) throw std::invalid_argument("job: matrix must be a non-empty array");
  RealMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.at(0).size()));
  for (int r = 0; r < m.rows; ++r) {
    const auto& row = rows.at(static_cast<size_t>(r));
    if (static_cast<int>(row.size()) != m.cols)
      throw std::invalid_argument("job: ragged matrix rows");
    for (int c = 0; c < m.cols; ++c) m.at(r, c) = row.at(static_cast<size_t>(c)).get<double>();
  }
  return m;
}

inline DigitMatrix digit_matrix_from_json(const nlohmann::json& rows) {
  RealMatrix m = real_matrix_from_json(rows);
  DigitMatrix d(m.rows, m.cols);
  for (size_t i = 0; i < m.v.size(); ++i) {
    double x = m.v[i];
    if (x < 0 || x > 9 || x != static_cast<double>(static_cast<int>(x)))
      throw std::invalid_argument("job: digit entries must be integers in 0..9");
    d.d[i] = static_cast<uint8_t>(x);
  }
  return d;
}

}  // namespace detail

inline JobSpec job_spec_from_json(const nlohmann::json& j) {
  JobSpec spec;
  if (j.contains("lhs_digits") || j.contains("rhs_digits")) {
    spec.has_explicit_digits = true;
    spec.lhs_digits.digits = detail::digit_matrix_from_json(j.at("lhs_digits"));
    spec.rhs_digits.digits = detail::digit_matrix_from_json(j.at("rhs_digits"));
    spec.lhs_digits.scale = j.value("scale_l", 1.0);
    spec.rhs_digits.scale = j.value("scale_u", 1.0);
    spec.rows = spec.lhs_digits.digits.rows;
    spec.inner = spec.lhs_digits.digits.cols;
    spec.cols = spec.rhs_digits.digits.cols;
  } else if (j.contains("lhs") || j.contains("rhs")) {
    spec.has_explicit_real = true;
    spec.lhs_real = detail::real_matrix_from_json(j.at("lhs"));
    spec.rhs_real = detail::real_matrix_from_json(j.at("rhs"));
    spec.rows = spec.lhs_real.rows;
    spec.inner = spec.lhs_real.cols;
    spec.cols = spec.rhs_real.cols;
  } else {
    spec.rows = j.at("rows").get<int>();
    spec.inner = j.at("inner").get<int>();
    spec.cols = j.at("cols").get<int>();
    spec.seed = j.value("seed", 0ull);
  }
  if (j.contains("table")) spec.table_path = j.at("table").get<std::string>();
  if (j.contains("scale_l") && spec.has_explicit_real)
    spec.fixed_scale_lhs = j.at("scale_l").get<double>();
  if (j.contains("scale_u") && spec.has_explicit_real)
    spec.fixed_scale_rhs = j.at("scale_u").get<double>();
  if (j.contains("engine")) {
    const auto& e = j.at("engine");
    spec.engine.banks = e.value("banks", spec.engine.banks);
    spec.engine.subarrays_per_bank = e.value("subarrays_per_bank", spec.engine.subarrays_per_bank);
    spec.engine.clock_mhz = e.value("clock_mhz", spec.engine.clock_mhz);
  }
  return spec;
}

inline JobSpec load_job_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open job spec: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("job spec " + path + " is not valid JSON: " + e.what());
  }
  return job_spec_from_json(j);
}

//! Seeded uniform [0,1) inputs for shape-and-seed specs.
inline void materialize_random_inputs(JobSpec& spec) {
  if (spec.has_explicit_real || spec.has_explicit_digits) return;
  std::mt19937_64 rng(spec.seed);
  spec.lhs_real = RealMatrix(spec.rows, spec.inner);
  spec.rhs_real = RealMatrix(spec.inner, spec.cols);
  for (double& v : spec.lhs_real.v) v = uniform_unit(rng);
  for (double& v : spec.rhs_real.v) v = uniform_unit(rng);
  spec.has_explicit_real = true;
}

}  // namespace disca
