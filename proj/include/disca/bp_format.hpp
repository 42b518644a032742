// DISCA simulator - Bent-Pyramid number format.
//
// A BP digit k in 0..9 stands for the probability k/10. Each digit has one
// 10-bit code per dataset (left-biased codes for the first operand,
// right-biased for the second); the code carries exactly k ones, and the
// product of two digits is recovered as the popcount of the bitwise AND of
// their codes. The compressed 8-bit form (BP8) drops the outermost bit on
// each side and keeps them as implicit bits, which participate in popcounts
// but are never stored in hardware.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace disca {

enum class Bias { LeftBiased, RightBiased };

inline const char* bias_name(Bias b) {
  return b == Bias::LeftBiased ? "left" : "right";
}

//! A digit in 0..9; probability 1.0 has no representation.
class BPDigit {
 public:
  explicit BPDigit(int k) : k_(k) {
    if (k < 0 || k > 9) throw std::out_of_range("BPDigit: digit must be in 0..9");
  }
  int value() const { return k_; }
  double probability() const { return k_ / 10.0; }
  friend bool operator==(BPDigit a, BPDigit b) { return a.k_ == b.k_; }

 private:
  int k_;
};

//! One code word. Bit index 0 is the leftmost position; for width 8 the
//! eliminated outer bits live in implicit_left / implicit_right.
struct BPCode {
  Bias bias = Bias::LeftBiased;
  int width = 10;  // 10 or 8
  uint16_t bits = 0;  // bit i of the code = (bits >> i) & 1
  bool implicit_left = false;   // meaningful only when width == 8
  bool implicit_right = false;  // meaningful only when width == 8

  bool bit(int i) const {
    if (i < 0 || i >= width) throw std::out_of_range("BPCode::bit index");
    return (bits >> i) & 1u;
  }

  int stored_popcount() const { return std::popcount(bits); }

  //! Ones including implicit positions; equals the digit the code encodes.
  int total_ones() const {
    int n = stored_popcount();
    if (width == 8) n += (implicit_left ? 1 : 0) + (implicit_right ? 1 : 0);
    return n;
  }

  std::string bit_string() const {
    std::string s(static_cast<size_t>(width), '0');
    for (int i = 0; i < width; ++i)
      if (bit(i)) s[static_cast<size_t>(i)] = '1';
    return s;
  }

  friend bool operator==(const BPCode& a, const BPCode& b) {
    if (a.bias != b.bias || a.width != b.width || a.bits != b.bits) return false;
    if (a.width == 8)
      return a.implicit_left == b.implicit_left && a.implicit_right == b.implicit_right;
    return true;
  }
};

inline BPCode make_code(Bias bias, int width, uint16_t bits, bool il = false,
                        bool ir = false) {
  if (width != 8 && width != 10)
    throw std::invalid_argument("BPCode width must be 8 or 10");
  if (bits >> width)
    throw std::invalid_argument("BPCode bits exceed declared width");
  BPCode c;
  c.bias = bias;
  c.width = width;
  c.bits = bits;
  c.implicit_left = width == 8 && il;
  c.implicit_right = width == 8 && ir;
  return c;
}

//! Parse "0101..." (leftmost character = bit 0).
inline BPCode code_from_string(Bias bias, const std::string& s, bool il = false,
                               bool ir = false) {
  if (s.size() != 8 && s.size() != 10)
    throw std::invalid_argument("code string must have 8 or 10 characters");
  uint16_t bits = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      bits |= static_cast<uint16_t>(1u << i);
    else if (s[i] != '0')
      throw std::invalid_argument("code string may contain only '0'/'1'");
  }
  return make_code(bias, static_cast<int>(s.size()), bits, il, ir);
}

//! The two complementary datasets, one code per digit. Immutable after
//! construction and safe to share across threads.
class BPCodeTable {
 public:
  BPCodeTable(std::array<BPCode, 10> left, std::array<BPCode, 10> right,
              std::string metadata)
      : left_(left), right_(right), metadata_(std::move(metadata)) {
    width_ = left_[0].width;
    validate();
  }

  int width() const { return width_; }
  const std::string& metadata() const { return metadata_; }

  const std::array<BPCode, 10>& dataset(Bias b) const {
    return b == Bias::LeftBiased ? left_ : right_;
  }

  const BPCode& code(BPDigit d, Bias b) const {
    return dataset(b)[static_cast<size_t>(d.value())];
  }

  friend bool operator==(const BPCodeTable& a, const BPCodeTable& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.width_ == b.width_;
  }

 private:
  void validate() const {
    for (Bias b : {Bias::LeftBiased, Bias::RightBiased}) {
      const auto& ds = dataset(b);
      for (int k = 0; k < 10; ++k) {
        const BPCode& c = ds[static_cast<size_t>(k)];
        if (c.width != width_)
          throw std::invalid_argument("BPCodeTable: mixed code widths");
        if (c.bias != b)
          throw std::invalid_argument("BPCodeTable: code filed under wrong dataset");
        if (c.total_ones() != k)
          throw std::invalid_argument(
              "BPCodeTable: digit " + std::to_string(k) + " (" + bias_name(b) +
              ") has " + std::to_string(c.total_ones()) + " ones");
        for (int k2 = 0; k2 < k; ++k2)
          if (ds[static_cast<size_t>(k2)] == c)
            throw std::invalid_argument("BPCodeTable: duplicate code in dataset");
      }
    }
  }

  std::array<BPCode, 10> left_;
  std::array<BPCode, 10> right_;
  int width_;
  std::string metadata_;
};

inline BPCode encode(BPDigit digit, Bias bias, const BPCodeTable& table) {
  return table.code(digit, bias);
}

//! Exact table match wins; any other bit vector decodes to its popcount
//! (including implicit bits). Counts above 9 have no digit.
inline BPDigit decode(const BPCode& code, const BPCodeTable& table) {
  if (code.width == table.width()) {
    const auto& ds = table.dataset(code.bias);
    for (int k = 0; k < 10; ++k)
      if (ds[static_cast<size_t>(k)] == code) return BPDigit(k);
  }
  int n = code.total_ones();
  if (n > 9) throw std::domain_error("decode: popcount exceeds digit range");
  return BPDigit(n);
}

//! Drop the outermost bits; they become the implicit pair. Value-preserving.
inline BPCode compress_10_to_8(const BPCode& code) {
  if (code.width != 10)
    throw std::invalid_argument("compress_10_to_8: input must be width 10");
  uint16_t inner = static_cast<uint16_t>((code.bits >> 1) & 0xFFu);
  return make_code(code.bias, 8, inner, code.bit(0), code.bit(9));
}

//! Exact inverse of compress_10_to_8.
inline BPCode expand_8_to_10(const BPCode& code) {
  if (code.width != 8)
    throw std::invalid_argument("expand_8_to_10: input must be width 8");
  uint16_t bits = static_cast<uint16_t>(code.bits << 1);
  if (code.implicit_left) bits |= 1u;
  if (code.implicit_right) bits |= 1u << 9;
  return make_code(code.bias, 10, bits);
}

//! SC multiplication: popcount of the bitwise AND. At width 8 the two
//! implicit positions contribute their AND terms so the result equals the
//! width-10 popcount exactly.
inline int mul_popcount(const BPCode& a, const BPCode& b) {
  if (a.width != b.width)
    throw std::invalid_argument("mul_popcount: operand widths differ");
  int n = std::popcount(static_cast<uint16_t>(a.bits & b.bits));
  if (a.width == 8) {
    n += (a.implicit_left && b.implicit_left) ? 1 : 0;
    n += (a.implicit_right && b.implicit_right) ? 1 : 0;
  }
  return n;
}

inline BPCodeTable compress_table(const BPCodeTable& t) {
  if (t.width() != 10)
    throw std::invalid_argument("compress_table: input must be width 10");
  std::array<BPCode, 10> l, r;
  for (int k = 0; k < 10; ++k) {
    l[static_cast<size_t>(k)] = compress_10_to_8(t.dataset(Bias::LeftBiased)[static_cast<size_t>(k)]);
    r[static_cast<size_t>(k)] = compress_10_to_8(t.dataset(Bias::RightBiased)[static_cast<size_t>(k)]);
  }
  return BPCodeTable(l, r, t.metadata());
}

inline BPCodeTable expand_table(const BPCodeTable& t) {
  if (t.width() != 8)
    throw std::invalid_argument("expand_table: input must be width 8");
  std::array<BPCode, 10> l, r;
  for (int k = 0; k < 10; ++k) {
    l[static_cast<size_t>(k)] = expand_8_to_10(t.dataset(Bias::LeftBiased)[static_cast<size_t>(k)]);
    r[static_cast<size_t>(k)] = expand_8_to_10(t.dataset(Bias::RightBiased)[static_cast<size_t>(k)]);
  }
  return BPCodeTable(l, r, t.metadata());
}

//! popcount(L_i AND R_j) for all 100 digit pairs.
inline std::array<std::array<int, 10>, 10> product_popcount_grid(const BPCodeTable& t) {
  std::array<std::array<int, 10>, 10> g{};
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      g[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          mul_popcount(t.code(BPDigit(i), Bias::LeftBiased),
                       t.code(BPDigit(j), Bias::RightBiased));
  return g;
}

//! Mean over the 100 digit pairs of |popcount/10 - (i/10)(j/10)|.
inline double mean_abs_pair_error(const BPCodeTable& t) {
  auto g = product_popcount_grid(t);
  long sum = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      sum += std::abs(10 * g[static_cast<size_t>(i)][static_cast<size_t>(j)] - i * j);
  return static_cast<double>(sum) / 10000.0;
}

inline double max_pair_error(const BPCodeTable& t) {
  auto g = product_popcount_grid(t);
  int worst = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      worst = std::max(worst,
                       std::abs(10 * g[static_cast<size_t>(i)][static_cast<size_t>(j)] - i * j));
  return static_cast<double>(worst) / 100.0;
}

//! Signed mean over the grid; near zero for a well-balanced table.
inline double signed_mean_pair_error(const BPCodeTable& t) {
  auto g = product_popcount_grid(t);
  long sum = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      sum += 10 * g[static_cast<size_t>(i)][static_cast<size_t>(j)] - i * j;
  return static_cast<double>(sum) / 10000.0;
}

//! Left-aligned ones vs right-aligned ones. Overlap of digits (i, j) is
//! max(0, i+j-10), a known low-quality baseline the searched table must beat.
inline BPCodeTable thermometer_code_table() {
  std::array<BPCode, 10> l, r;
  for (int k = 0; k < 10; ++k) {
    uint16_t left_mask = static_cast<uint16_t>((1u << k) - 1u);
    uint16_t right_mask = static_cast<uint16_t>(left_mask << (10 - k));
    l[static_cast<size_t>(k)] = make_code(Bias::LeftBiased, 10, left_mask);
    r[static_cast<size_t>(k)] = make_code(Bias::RightBiased, 10, right_mask);
  }
  return BPCodeTable(l, r, "thermometer baseline");
}

// ---------------------------------------------------------------------------
// Quantization of real values into digits (unipolar, non-negative only).

struct RealMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;  // row-major

  RealMatrix() = default;
  RealMatrix(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {
    if (r < 0 || c < 0) throw std::invalid_argument("RealMatrix: negative shape");
  }
  double& at(int r, int c) { return v[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
  double at(int r, int c) const { return v[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
};

struct DigitMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> d;  // row-major, each entry in 0..9

  DigitMatrix() = default;
  DigitMatrix(int r, int c) : rows(r), cols(c), d(static_cast<size_t>(r) * static_cast<size_t>(c), 0) {
    if (r < 0 || c < 0) throw std::invalid_argument("DigitMatrix: negative shape");
  }
  uint8_t& at(int r, int c) { return d[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
  uint8_t at(int r, int c) const { return d[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
};

//! A scalar digit/10 x scale; quantize-to-nearest keeps the error <= scale/20.
struct QuantizedValue {
  BPDigit digit;
  double scale;
  double value() const { return digit.probability() * scale; }
};

enum class QuantizeStrategy { MaxAbs, FixedScale };

inline QuantizedValue quantize_value(double x, double scale) {
  if (scale <= 0.0) throw std::invalid_argument("quantize_value: scale must be positive");
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error("quantize_value: unipolar format requires finite non-negative input");
  long k = std::lround(10.0 * x / scale);
  if (k > 9)
    throw std::domain_error("quantize_value: value exceeds 0.9 x scale; no digit represents it");
  return QuantizedValue{BPDigit(static_cast<int>(k)), scale};
}

struct QuantizedMatrix {
  DigitMatrix digits;
  double scale = 1.0;
};

//! MaxAbs picks the scale so the largest entry lands on digit 9 (the format
//! tops out at 0.9); FixedScale uses the caller's scale and rejects values
//! that would need a digit above 9.
inline QuantizedMatrix quantize_matrix(const RealMatrix& m, QuantizeStrategy strategy,
                                       double fixed_scale = 1.0) {
  double maxv = 0.0;
  for (double x : m.v) {
    if (!std::isfinite(x) || x < 0.0)
      throw std::domain_error("quantize_matrix: unipolar format requires finite non-negative entries");
    maxv = std::max(maxv, x);
  }
  double scale;
  if (strategy == QuantizeStrategy::MaxAbs) {
    scale = maxv > 0.0 ? maxv / 0.9 : 1.0;
  } else {
    if (fixed_scale <= 0.0) throw std::invalid_argument("quantize_matrix: scale must be positive");
    scale = fixed_scale;
  }
  QuantizedMatrix out;
  out.scale = scale;
  out.digits = DigitMatrix(m.rows, m.cols);
  for (size_t i = 0; i < m.v.size(); ++i) {
    long k = std::lround(10.0 * m.v[i] / scale);
    if (k > 9) {
      if (strategy == QuantizeStrategy::MaxAbs)
        k = 9;  // only reachable through rounding at the ceiling
      else
        throw std::domain_error("quantize_matrix: entry exceeds 0.9 x scale");
    }
    out.digits.d[i] = static_cast<uint8_t>(k);
  }
  return out;
}

}  // namespace disca
