#include <stdexcept>

#include "doctest.h"
#include "npir/gf2.hpp"

using namespace npir;

namespace {
int weight(const std::vector<std::uint8_t>& v) {
  int w = 0;
  for (auto b : v) w += b;
  return w;
}
}  // namespace

TEST_CASE("bit matrix get/set and rank") {
  Gf2Matrix m(3, 70);  // spans two words per row
  m.set(0, 0, 1);
  m.set(1, 65, 1);
  m.set(2, 0, 1);
  m.set(2, 65, 1);
  CHECK(m.get(0, 0) == 1);
  CHECK(m.get(1, 65) == 1);
  CHECK(m.get(0, 65) == 0);
  CHECK(m.rank() == 2);  // third row is the sum of the first two
  m.set(2, 30, 1);
  CHECK(m.rank() == 3);
}

TEST_CASE("random codes are full rank and encoding is linear") {
  RngStream rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    int k = 2 + static_cast<int>(rng.uniform_below(8));
    int t = k + static_cast<int>(rng.uniform_below(12));
    LinearCode code = random_linear_code(t, k, rng);
    CHECK(code.G.rank() == k);
    CHECK(code.rate() == doctest::Approx(static_cast<double>(k) / t));

    std::vector<std::uint8_t> u(static_cast<std::size_t>(k)), v(static_cast<std::size_t>(k)), s(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      u[static_cast<std::size_t>(i)] = rng.bernoulli(0.5);
      v[static_cast<std::size_t>(i)] = rng.bernoulli(0.5);
      s[static_cast<std::size_t>(i)] = u[static_cast<std::size_t>(i)] ^ v[static_cast<std::size_t>(i)];
    }
    auto eu = encode(code, u), ev = encode(code, v), es = encode(code, s);
    for (int i = 0; i < t; ++i)
      CHECK(es[static_cast<std::size_t>(i)] == (eu[static_cast<std::size_t>(i)] ^ ev[static_cast<std::size_t>(i)]));
  }
}

TEST_CASE("decoding corrects everything below half the minimum distance") {
  RngStream rng(1001);
  LinearCode code = random_linear_code(12, 4, rng);
  int d = min_distance(code);
  REQUIRE(d >= 1);
  int correctable = (d - 1) / 2;

  for (unsigned msg = 0; msg < 16u; ++msg) {
    std::vector<std::uint8_t> u(4);
    for (int i = 0; i < 4; ++i) u[static_cast<std::size_t>(i)] = (msg >> i) & 1u;
    auto x = encode(code, u);
    // all error patterns of weight <= correctable
    for (unsigned e = 0; e < (1u << 12); ++e) {
      if (__builtin_popcount(e) > correctable) continue;
      auto y = x;
      for (int i = 0; i < 12; ++i)
        if ((e >> i) & 1u) y[static_cast<std::size_t>(i)] ^= 1u;
      DecodeResult r = nearest_codeword_decode(code, y);
      CHECK(r.u == u);
      CHECK(r.distance == __builtin_popcount(e));
    }
  }
}

TEST_CASE("tie-breaking picks the smallest message value") {
  // repetition code of length 2: y = (1,0) is equidistant from both codewords
  LinearCode code;
  code.t = 2;
  code.k = 1;
  code.G = Gf2Matrix(1, 2);
  code.G.set(0, 0, 1);
  code.G.set(0, 1, 1);
  DecodeResult r = nearest_codeword_decode(code, {1, 0});
  CHECK(r.u == std::vector<std::uint8_t>{0});
  CHECK(r.distance == 1);
}

TEST_CASE("erasure-masked decoding recovers when enough positions survive") {
  RngStream rng(77);
  LinearCode code = random_linear_code(14, 5, rng);
  int d = min_distance(code);
  std::vector<std::uint8_t> u = {1, 0, 1, 1, 0};
  auto x = encode(code, u);

  // erase d-1 positions: codewords still differ somewhere visible
  std::vector<std::uint8_t> known(14, 1);
  auto y = x;
  for (int i = 0; i < d - 1; ++i) {
    known[static_cast<std::size_t>(i)] = 0;
    y[static_cast<std::size_t>(i)] = 2;  // erasure marker; excluded by the mask
  }
  DecodeResult r = masked_nearest_codeword_decode(code, y, known);
  CHECK(r.u == u);
  CHECK(r.distance == 0);
}

TEST_CASE("dimension guards") {
  RngStream rng(5);
  CHECK_THROWS_AS(random_linear_code(4, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(random_linear_code(3, 4, rng), std::invalid_argument);  // k > t cannot be full rank

  // generation of wide codes is fine, exhaustive decoding of them is not
  LinearCode wide = random_linear_code(30, 25, rng);
  CHECK(wide.G.rank() == 25);
  std::vector<std::uint8_t> y(30, 0);
  CHECK_THROWS_AS(nearest_codeword_decode(wide, y), std::length_error);
  CHECK_THROWS_AS(min_distance(wide), std::length_error);
}

TEST_CASE("known minimum distances") {
  LinearCode rep3;
  rep3.t = 3;
  rep3.k = 1;
  rep3.G = Gf2Matrix(1, 3);
  for (int c = 0; c < 3; ++c) rep3.G.set(0, c, 1);
  CHECK(min_distance(rep3) == 3);

  LinearCode parity;  // [3,2] single parity check: d = 2
  parity.t = 3;
  parity.k = 2;
  parity.G = Gf2Matrix(2, 3);
  parity.G.set(0, 0, 1);
  parity.G.set(0, 2, 1);
  parity.G.set(1, 1, 1);
  parity.G.set(1, 2, 1);
  CHECK(min_distance(parity) == 2);
}

TEST_CASE("block error curve is zero when noiseless and grows with noise") {
  RngStream rng(31);
  LinearCode code = random_linear_code(15, 6, rng);
  auto curve = block_error_curve(code, {0.0, 0.02, 0.3}, 300, rng);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0] == 0.0);
  CHECK(curve[2] >= curve[1]);
  for (double e : curve) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}
