#include "npir/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace npir {

Gf2Matrix::Gf2Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64),
      w_(static_cast<std::size_t>(rows) * static_cast<std::size_t>((cols + 63) / 64), 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
}

void Gf2Matrix::xor_row_into(int src, std::uint64_t* dst) const {
  const std::uint64_t* s = row(src);
  for (int w = 0; w < wpr_; ++w) dst[w] ^= s[w];
}

int Gf2Matrix::rank() const {
  std::vector<std::uint64_t> m(w_);
  int rank = 0;
  for (int c = 0; c < cols_ && rank < rows_; ++c) {
    int word = c >> 6;
    std::uint64_t mask = 1ull << (c & 63);
    int pivot = -1;
    for (int r = rank; r < rows_; ++r)
      if (m[static_cast<std::size_t>(r) * wpr_ + word] & mask) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int w = 0; w < wpr_; ++w)
      std::swap(m[static_cast<std::size_t>(pivot) * wpr_ + w], m[static_cast<std::size_t>(rank) * wpr_ + w]);
    for (int r = 0; r < rows_; ++r) {
      if (r == rank) continue;
      if (m[static_cast<std::size_t>(r) * wpr_ + word] & mask)
        for (int w = 0; w < wpr_; ++w)
          m[static_cast<std::size_t>(r) * wpr_ + w] ^= m[static_cast<std::size_t>(rank) * wpr_ + w];
    }
    ++rank;
  }
  return rank;
}

namespace {

std::vector<std::uint64_t> pack_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint64_t> w((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & 1u) w[i >> 6] |= 1ull << (i & 63);
  return w;
}

struct BestMessage {
  std::uint32_t value = 0;
  int distance = 0;
};

// Walks all 2^k messages in Gray-code order, maintaining the running codeword
// with one row XOR per step.
BestMessage scan_codewords(const LinearCode& code, const std::vector<std::uint64_t>& target,
                           const std::vector<std::uint64_t>& mask) {
  int words = code.G.words_per_row();
  std::vector<std::uint64_t> cw(static_cast<std::size_t>(words), 0);
  BestMessage best;
  best.value = 0;
  best.distance = 0;
  for (int w = 0; w < words; ++w)
    best.distance += std::popcount((cw[static_cast<std::size_t>(w)] ^ target[static_cast<std::size_t>(w)]) & mask[static_cast<std::size_t>(w)]);

  std::uint32_t gray = 0;
  std::uint64_t total = 1ull << code.k;
  for (std::uint64_t m = 1; m < total; ++m) {
    int flip = std::countr_zero(m);
    gray ^= 1u << flip;
    code.G.xor_row_into(flip, cw.data());
    int d = 0;
    for (int w = 0; w < words; ++w)
      d += std::popcount((cw[static_cast<std::size_t>(w)] ^ target[static_cast<std::size_t>(w)]) & mask[static_cast<std::size_t>(w)]);
    if (d < best.distance || (d == best.distance && gray < best.value)) {
      best.distance = d;
      best.value = gray;
    }
  }
  return best;
}

std::vector<std::uint8_t> unpack_message(std::uint32_t value, int k) {
  std::vector<std::uint8_t> u(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) u[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((value >> i) & 1u);
  return u;
}

void check_decodable(const LinearCode& code) {
  if (code.k > 24) throw std::length_error("code dimension exceeds the exhaustive-decoding cap of 24");
  if (code.k < 1) throw std::invalid_argument("empty code");
}

}  // namespace

LinearCode random_linear_code(int t, int k, RngStream& rng) {
  if (k < 1 || k > t) throw std::invalid_argument("need 1 <= k <= t");
  LinearCode code;
  code.t = t;
  code.k = k;
  for (;;) {
    Gf2Matrix G(k, t);
    int words = G.words_per_row();
    std::uint64_t tail = (t & 63) ? ((1ull << (t & 63)) - 1) : ~0ull;
    for (int r = 0; r < k; ++r) {
      std::uint64_t* row = G.row(r);
      for (int w = 0; w < words; ++w) row[w] = rng.next_u64();
      row[words - 1] &= tail;
    }
    if (G.rank() == k) {
      code.G = std::move(G);
      return code;
    }
  }
}

std::vector<std::uint8_t> encode(const LinearCode& code, const std::vector<std::uint8_t>& u) {
  if (static_cast<int>(u.size()) != code.k) throw std::invalid_argument("message length differs from code dimension");
  int words = code.G.words_per_row();
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(words), 0);
  for (int i = 0; i < code.k; ++i)
    if (u[static_cast<std::size_t>(i)] & 1u) code.G.xor_row_into(i, acc.data());
  std::vector<std::uint8_t> y(static_cast<std::size_t>(code.t));
  for (int i = 0; i < code.t; ++i)
    y[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((acc[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u);
  return y;
}

DecodeResult nearest_codeword_decode(const LinearCode& code, const std::vector<std::uint8_t>& y) {
  check_decodable(code);
  if (static_cast<int>(y.size()) != code.t) throw std::invalid_argument("received length differs from blocklength");
  std::vector<std::uint64_t> target = pack_bits(y);
  target.resize(static_cast<std::size_t>(code.G.words_per_row()), 0);
  std::vector<std::uint64_t> mask(static_cast<std::size_t>(code.G.words_per_row()), ~0ull);
  if (code.t & 63) mask.back() = (1ull << (code.t & 63)) - 1;
  BestMessage best = scan_codewords(code, target, mask);
  return DecodeResult{unpack_message(best.value, code.k), best.distance};
}

DecodeResult masked_nearest_codeword_decode(const LinearCode& code, const std::vector<std::uint8_t>& y,
                                            const std::vector<std::uint8_t>& known) {
  check_decodable(code);
  if (static_cast<int>(y.size()) != code.t || known.size() != y.size())
    throw std::invalid_argument("received length differs from blocklength");
  std::vector<std::uint8_t> clean(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) clean[i] = known[i] ? (y[i] & 1u) : 0u;
  std::vector<std::uint64_t> target = pack_bits(clean);
  std::vector<std::uint64_t> mask = pack_bits(known);
  target.resize(static_cast<std::size_t>(code.G.words_per_row()), 0);
  mask.resize(static_cast<std::size_t>(code.G.words_per_row()), 0);
  BestMessage best = scan_codewords(code, target, mask);
  return DecodeResult{unpack_message(best.value, code.k), best.distance};
}

std::vector<double> block_error_curve(const LinearCode& code, const std::vector<double>& p_grid,
                                      int trials, RngStream& rng) {
  check_decodable(code);
  std::vector<double> out;
  out.reserve(p_grid.size());
  for (double p : p_grid) {
    int errors = 0;
    for (int trial = 0; trial < trials; ++trial) {
      std::vector<std::uint8_t> u(static_cast<std::size_t>(code.k));
      for (auto& b : u) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
      std::vector<std::uint8_t> x = encode(code, u);
      for (auto& b : x) b ^= rng.bernoulli(p) ? 1u : 0u;
      if (nearest_codeword_decode(code, x).u != u) ++errors;
    }
    out.push_back(static_cast<double>(errors) / trials);
  }
  return out;
}

int min_distance(const LinearCode& code) {
  check_decodable(code);
  int words = code.G.words_per_row();
  std::vector<std::uint64_t> cw(static_cast<std::size_t>(words), 0);
  int best = code.t + 1;
  std::uint64_t total = 1ull << code.k;
  for (std::uint64_t m = 1; m < total; ++m) {
    code.G.xor_row_into(std::countr_zero(m), cw.data());
    int wt = 0;
    for (int w = 0; w < words; ++w) wt += std::popcount(cw[static_cast<std::size_t>(w)]);
    best = std::min(best, wt);
  }
  return best;
}

}  // namespace npir
