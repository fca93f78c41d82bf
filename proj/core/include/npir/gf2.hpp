#pragma once

#include <cstdint>
#include <vector>

#include "npir/rng.hpp"

namespace npir {

// Bit-packed GF(2) matrix, row-major in 64-bit words.
class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int words_per_row() const { return wpr_; }

  int get(int r, int c) const {
    return static_cast<int>((w_[static_cast<std::size_t>(r) * wpr_ + static_cast<std::size_t>(c >> 6)] >> (c & 63)) & 1u);
  }
  void set(int r, int c, int v) {
    std::uint64_t& word = w_[static_cast<std::size_t>(r) * wpr_ + static_cast<std::size_t>(c >> 6)];
    std::uint64_t mask = 1ull << (c & 63);
    word = v ? (word | mask) : (word & ~mask);
  }
  const std::uint64_t* row(int r) const { return w_.data() + static_cast<std::size_t>(r) * wpr_; }
  std::uint64_t* row(int r) { return w_.data() + static_cast<std::size_t>(r) * wpr_; }
  void xor_row_into(int src, std::uint64_t* dst) const;

  int rank() const;

 private:
  int rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> w_;
};

// [t, k] linear block code given by a full-rank k x t generator.
struct LinearCode {
  int t = 0;
  int k = 0;
  Gf2Matrix G;

  double rate() const { return t ? static_cast<double>(k) / t : 0.0; }
};

// Uniform full-rank generator draw (resamples until full rank).
LinearCode random_linear_code(int t, int k, RngStream& rng);

// u * G; |u| must equal k.
std::vector<std::uint8_t> encode(const LinearCode& code, const std::vector<std::uint8_t>& u);

struct DecodeResult {
  std::vector<std::uint8_t> u;
  int distance = 0;
};

// Exhaustive minimum-Hamming-distance decoding over all 2^k messages
// (Gray-code order internally); requires k <= 24. Ties break to the smallest
// message value read as a little-endian integer.
DecodeResult nearest_codeword_decode(const LinearCode& code, const std::vector<std::uint8_t>& y);

// Same, but positions with known[pos] == 0 are excluded from the distance
// (erasure handling for the BEC).
DecodeResult masked_nearest_codeword_decode(const LinearCode& code, const std::vector<std::uint8_t>& y,
                                            const std::vector<std::uint8_t>& known);

// Monte-Carlo block error rate of the code over BSC(p) for each p in the grid.
std::vector<double> block_error_curve(const LinearCode& code, const std::vector<double>& p_grid,
                                      int trials, RngStream& rng);

// Exhaustive minimum distance; requires k <= 24.
int min_distance(const LinearCode& code);

}  // namespace npir
